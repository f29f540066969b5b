//! Eventually periodic sequences: a finite prefix followed by a cycle
//! repeated forever.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Lasso<T> {
    prefix: Vec<T>,
    cycle: Vec<T>,
}

impl<T: Clone + PartialEq> Lasso<T> {
    pub fn new(prefix: Vec<T>, cycle: Vec<T>) -> Result<Self> {
        if cycle.is_empty() {
            return Err(Error::Lasso("cycle must be non-empty".into()));
        }
        Ok(Lasso { prefix, cycle })
    }

    /// The constant sequence at `x`.
    pub fn constant(x: T) -> Self {
        Lasso {
            prefix: Vec::new(),
            cycle: vec![x],
        }
    }

    pub fn prefix(&self) -> &[T] {
        &self.prefix
    }

    pub fn cycle(&self) -> &[T] {
        &self.cycle
    }

    /// `|prefix| + |cycle|`.
    pub fn len(&self) -> usize {
        self.prefix.len() + self.cycle.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Index into the finite representation: terms `k` and `slot(k)` agree.
    pub fn slot(&self, k: usize) -> usize {
        let p = self.prefix.len();
        if k < p {
            k
        } else {
            p + (k - p) % self.cycle.len()
        }
    }

    /// Term `k` of the infinite sequence.
    pub fn at(&self, k: usize) -> &T {
        let s = self.slot(k);
        if s < self.prefix.len() {
            &self.prefix[s]
        } else {
            &self.cycle[s - self.prefix.len()]
        }
    }

    /// Slot that follows `slot` in the unrolled sequence.
    pub fn next_slot(&self, slot: usize) -> usize {
        if slot + 1 < self.len() {
            slot + 1
        } else {
            self.prefix.len()
        }
    }

    /// The first `n` terms.
    pub fn unroll(&self, n: usize) -> Vec<T> {
        (0..n).map(|k| self.at(k).clone()).collect()
    }

    /// Consecutive term pairs covering every transition of the sequence:
    /// the prefix, one pass of the cycle, and the wrap back to its start.
    pub fn steps(&self) -> impl Iterator<Item = (&T, &T)> + '_ {
        (0..self.len()).map(move |k| (self.at(k), self.at(k + 1)))
    }

    /// Every term value that occurs.
    pub fn terms(&self) -> impl Iterator<Item = &T> + '_ {
        self.prefix.iter().chain(self.cycle.iter())
    }

    /// Drops the head of the sequence.
    pub fn shift(&self) -> Self {
        if self.prefix.is_empty() {
            let mut cycle = self.cycle.clone();
            cycle.rotate_left(1);
            Lasso {
                prefix: Vec::new(),
                cycle,
            }
        } else {
            Lasso {
                prefix: self.prefix[1..].to_vec(),
                cycle: self.cycle.clone(),
            }
        }
    }

    /// Canonical form: the cycle is reduced to its primitive root and the
    /// prefix is absorbed into the cycle as far as possible. Two lassos
    /// denote the same sequence iff their canonical forms are equal.
    pub fn canonical(&self) -> Self {
        let mut cycle = self.cycle.clone();
        let n = cycle.len();
        for d in 1..=n {
            if n.is_multiple_of(d) && (d..n).all(|i| cycle[i] == cycle[i - d]) {
                cycle.truncate(d);
                break;
            }
        }
        let mut prefix = self.prefix.clone();
        while let Some(last) = prefix.last() {
            if *last == cycle[cycle.len() - 1] {
                prefix.pop();
                cycle.rotate_right(1);
            } else {
                break;
            }
        }
        Lasso { prefix, cycle }
    }

    /// Equality of the denoted infinite sequences.
    pub fn same_sequence(&self, other: &Self) -> bool {
        let n = self.prefix.len().max(other.prefix.len())
            + 2 * self.cycle.len().max(other.cycle.len()) * self.cycle.len().min(other.cycle.len());
        self.unroll(n) == other.unroll(n)
    }

    pub fn map<U: Clone + PartialEq>(&self, f: impl Fn(&T) -> U) -> Lasso<U> {
        Lasso {
            prefix: self.prefix.iter().map(&f).collect(),
            cycle: self.cycle.iter().map(&f).collect(),
        }
    }
}

impl<T: fmt::Debug> fmt::Debug for Lasso<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, p) in self.prefix.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{p:?}")?;
        }
        write!(f, " | ")?;
        for (i, c) in self.cycle.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c:?}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn canonical_absorbs_and_reduces() {
        let l = Lasso::new(vec![2, 0, 1], vec![0, 1, 0, 1]).unwrap();
        let c = l.canonical();
        assert_eq!(c.prefix(), &[2]);
        assert_eq!(c.cycle(), &[0, 1]);
        let alt = Lasso::new(vec![1, 0, 1], vec![0, 1, 0, 1]).unwrap().canonical();
        assert_eq!(alt, Lasso::new(vec![], vec![1, 0]).unwrap());
        let k = Lasso::new(vec![0, 0], vec![0]).unwrap().canonical();
        assert_eq!(k, Lasso::constant(0));
        assert!(Lasso::<u8>::new(vec![1], vec![]).is_err());
    }

    #[test]
    fn shift_rotates_pure_cycles() {
        let l = Lasso::new(vec![], vec![1, 2]).unwrap();
        assert_eq!(l.shift().cycle(), &[2, 1]);
        let p = Lasso::new(vec![7, 8], vec![3]).unwrap();
        assert_eq!(p.shift().prefix(), &[8]);
        assert_eq!(Lasso::constant(4).shift(), Lasso::constant(4));
    }

    #[test]
    fn steps_cover_wrap() {
        let l = Lasso::new(vec![0], vec![1, 2]).unwrap();
        let s: Vec<_> = l.steps().map(|(a, b)| (*a, *b)).collect();
        assert_eq!(s, vec![(0, 1), (1, 2), (2, 1)]);
    }

    fn arb_lasso() -> impl Strategy<Value = Lasso<u8>> {
        (
            prop::collection::vec(0u8..3, 0..4),
            prop::collection::vec(0u8..3, 1..5),
        )
            .prop_map(|(p, c)| Lasso::new(p, c).unwrap())
    }

    proptest! {
        #[test]
        fn canonical_preserves_sequence(l in arb_lasso()) {
            let c = l.canonical();
            prop_assert_eq!(l.unroll(30), c.unroll(30));
            prop_assert_eq!(c.canonical(), c.clone());
            prop_assert!(c.len() <= l.len());
        }

        #[test]
        fn canonical_decides_equality(a in arb_lasso(), b in arb_lasso()) {
            prop_assert_eq!(a.canonical() == b.canonical(), a.unroll(60) == b.unroll(60));
            prop_assert_eq!(a.same_sequence(&b), a.unroll(60) == b.unroll(60));
        }
    }
}
