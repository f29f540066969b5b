//! Shadowing points of a fixed lasso.
//!
//! Trajectories of a finite system are exactly the infinite paths of
//! `G_L`, the relation restricted to legal points. Along a lasso every
//! tracked quantity evolves by a deterministic map on (lasso slot, finite
//! set) states, so each check stops at the first repeated state.

use std::collections::HashSet;

use crate::lasso::Lasso;
use crate::pointset::{PointId, PointSet};
use crate::rational::Rational;
use crate::relation::FiniteRelation;

/// Legal restriction plus strict balls of one `ε` class.
pub(crate) struct Tracker {
    gl: FiniteRelation,
    legal: PointSet,
    balls: Vec<PointSet>,
}

impl Tracker {
    pub(crate) fn new(g: &FiniteRelation, ball_rank: usize) -> Self {
        let space = g.space();
        Tracker {
            gl: g.legal_restriction(),
            legal: g.legal_set(),
            balls: space.points().map(|x| space.ball(x, ball_rank)).collect(),
        }
    }

    pub(crate) fn for_eps(g: &FiniteRelation, eps: &Rational) -> Self {
        Self::new(g, g.space().open_rank(eps))
    }

    pub(crate) fn gl(&self) -> &FiniteRelation {
        &self.gl
    }

    pub(crate) fn legal(&self) -> &PointSet {
        &self.legal
    }

    pub(crate) fn ball(&self, x: PointId) -> &PointSet {
        &self.balls[x]
    }

    /// Whether some trajectory starting in `start` tracks `p` forever.
    /// Non-empty frontiers at every step give arbitrarily long tracking
    /// paths, and finite branching turns them into an infinite one.
    pub(crate) fn survives(&self, p: &Lasso<PointId>, start: &PointSet) -> bool {
        let mut t = start.intersection(&self.legal);
        t.intersect_with(&self.balls[*p.at(0)]);
        let mut slot = 0;
        let mut seen = HashSet::new();
        loop {
            if t.is_empty() {
                return false;
            }
            if slot >= p.prefix().len() && !seen.insert((slot, t.clone())) {
                return true;
            }
            slot = p.next_slot(slot);
            t = self.gl.image_of(&t);
            t.intersect_with(&self.balls[*p.at(slot)]);
        }
    }

    pub(crate) fn existential(&self, p: &Lasso<PointId>) -> Option<PointId> {
        let n = self.legal.universe();
        self.legal
            .iter()
            .find(|&y| self.survives(p, &PointSet::singleton(n, y)))
    }

    /// Whether every trajectory of `y` tracks `p`: the step-k position sets
    /// `G_L^k(y)` stay inside the balls.
    pub(crate) fn all_track(&self, p: &Lasso<PointId>, y: PointId) -> bool {
        if !self.legal.contains(y) {
            return false;
        }
        let mut s = PointSet::singleton(self.legal.universe(), y);
        let mut slot = 0;
        let mut seen = HashSet::new();
        loop {
            if !s.is_subset(&self.balls[*p.at(slot)]) {
                return false;
            }
            if slot >= p.prefix().len() && !seen.insert((slot, s.clone())) {
                return true;
            }
            slot = p.next_slot(slot);
            s = self.gl.image_of(&s);
        }
    }

    pub(crate) fn universal(&self, p: &Lasso<PointId>) -> PointSet {
        PointSet::from_iter_in(self.legal.universe(), self.legal.iter().filter(|&y| self.all_track(p, y)))
    }
}

/// A legal point with some trajectory `⟨y_n⟩` satisfying `d(p_n, y_n) < ε`
/// for all `n`, the least such in point order.
pub fn existential_shadower(g: &FiniteRelation, p: &Lasso<PointId>, eps: &Rational) -> Option<PointId> {
    Tracker::for_eps(g, eps).existential(p)
}

/// All legal points every trajectory of which stays strictly within `ε` of `p`.
pub fn universal_shadowers(g: &FiniteRelation, p: &Lasso<PointId>, eps: &Rational) -> PointSet {
    Tracker::for_eps(g, eps).universal(p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::testing::{k2, three_point};

    #[test]
    fn existential_examples() {
        let d = FiniteRelation::diagonal(three_point().space_arc().clone());
        assert_eq!(existential_shadower(&d, &Lasso::constant(2), &ratio(1, 10)), Some(2));
        assert_eq!(existential_shadower(&k2(), &Lasso::new(vec![0], vec![1]).unwrap(), &ratio(1, 2)), Some(0));
        let g = three_point();
        let one = g.space().index_of("1").unwrap();
        assert_eq!(existential_shadower(&g, &Lasso::constant(one), &ratio(1, 2)), Some(one));
        let zero = g.space().index_of("0").unwrap();
        assert_eq!(existential_shadower(&g, &Lasso::constant(zero), &ratio(1, 2)), None);
    }

    #[test]
    fn universal_examples() {
        let g = three_point();
        let one = g.space().index_of("1").unwrap();
        assert_eq!(universal_shadowers(&g, &Lasso::constant(one), &ratio(1, 2)).to_vec(), vec![one]);
        assert!(universal_shadowers(&k2(), &Lasso::constant(0), &ratio(1, 2)).is_empty());
        let d = FiniteRelation::diagonal(g.space_arc().clone());
        assert_eq!(universal_shadowers(&d, &Lasso::constant(one), &ratio(3, 2)), g.space().ball(one, 1));
        assert_eq!(universal_shadowers(&k2(), &Lasso::constant(0), &int(2)).len(), 2);
    }

    #[test]
    fn every_universal_shadower_is_existential() {
        let g = k2();
        for p in [Lasso::constant(0), Lasso::new(vec![], vec![0, 1]).unwrap()] {
            for eps in [ratio(1, 2), int(2)] {
                let t = Tracker::for_eps(&g, &eps);
                for y in t.universal(&p).iter() {
                    assert!(t.survives(&p, &PointSet::singleton(2, y)));
                }
            }
        }
    }
}
