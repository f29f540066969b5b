//! Finite quantifier elimination over `ε` and `δ`.
//!
//! For a strict ball `{y : d(x, y) < ε}` only the number of ladder values
//! below `ε` matters, so `ε` ranges over one representative per class
//! `(t_k, t_{k+1}]`. Above the largest distance every ball is the whole
//! space and shadowing is trivial. For `δ` the closed condition `d <= δ`
//! is constant on `[t_k, t_{k+1})`, plus the class below `t_1`.

use crate::metric::FiniteMetricSpace;
use crate::rational::{half, Rational};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ThresholdLadder {
    values: Vec<Rational>,
}

/// `ε` in `(t_k, t_{k+1}]`, represented by `t_{k+1}`; the strict ball is
/// `{rank <= k}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EpsClass {
    pub rep: Rational,
    pub ball_rank: usize,
}

/// `δ` with closed rank `rank`: the sub-minimal class has rank 0 and
/// representative `t_1 / 2`; otherwise the representative is `t_rank`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DeltaClass {
    pub rep: Rational,
    pub rank: usize,
}

impl ThresholdLadder {
    pub fn new(space: &FiniteMetricSpace) -> Self {
        ThresholdLadder {
            values: space.distances().to_vec(),
        }
    }

    pub fn values(&self) -> &[Rational] {
        &self.values
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn sub_minimal(&self) -> Option<Rational> {
        self.values.first().map(half)
    }

    pub fn eps_classes(&self) -> Vec<EpsClass> {
        self.values
            .iter()
            .enumerate()
            .map(|(k, t)| EpsClass {
                rep: t.clone(),
                ball_rank: k,
            })
            .collect()
    }

    pub fn delta_classes(&self) -> Vec<DeltaClass> {
        let mut out: Vec<DeltaClass> = self.sub_minimal().into_iter().map(|rep| DeltaClass { rep, rank: 0 }).collect();
        out.extend(self.values.iter().enumerate().map(|(k, t)| DeltaClass {
            rep: t.clone(),
            rank: k + 1,
        }));
        out
    }
}

pub fn threshold_ladder(space: &FiniteMetricSpace) -> ThresholdLadder {
    ThresholdLadder::new(space)
}
