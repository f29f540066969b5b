//! Finite unions of rational intervals with open or closed endpoints.

use std::cmp::Ordering;
use std::fmt;

use num_traits::{Signed, Zero};

use crate::rational::{self, Rational};

/// A non-empty interval. A degenerate interval `[c, c]` is a point.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Interval {
    lo: Rational,
    hi: Rational,
    lo_closed: bool,
    hi_closed: bool,
}

impl Interval {
    /// `None` when the bounds describe the empty set.
    pub fn new(lo: Rational, lo_closed: bool, hi: Rational, hi_closed: bool) -> Option<Self> {
        match lo.cmp(&hi) {
            Ordering::Less => Some(Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            }),
            Ordering::Equal if lo_closed && hi_closed => Some(Interval {
                lo,
                hi,
                lo_closed,
                hi_closed,
            }),
            _ => None,
        }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Option<Self> {
        Self::new(lo, true, hi, true)
    }

    pub fn open(lo: Rational, hi: Rational) -> Option<Self> {
        Self::new(lo, false, hi, false)
    }

    pub fn point(c: Rational) -> Self {
        Interval {
            lo: c.clone(),
            hi: c,
            lo_closed: true,
            hi_closed: true,
        }
    }

    pub fn lo(&self) -> &Rational {
        &self.lo
    }

    pub fn hi(&self) -> &Rational {
        &self.hi
    }

    pub fn lo_closed(&self) -> bool {
        self.lo_closed
    }

    pub fn hi_closed(&self) -> bool {
        self.hi_closed
    }

    pub fn is_point(&self) -> bool {
        self.lo == self.hi
    }

    pub fn contains(&self, x: &Rational) -> bool {
        let above = if self.lo_closed { *x >= self.lo } else { *x > self.lo };
        let below = if self.hi_closed { *x <= self.hi } else { *x < self.hi };
        above && below
    }

    pub fn intersect(&self, other: &Interval) -> Option<Interval> {
        let (lo, lo_closed) = match self.lo.cmp(&other.lo) {
            Ordering::Less => (other.lo.clone(), other.lo_closed),
            Ordering::Greater => (self.lo.clone(), self.lo_closed),
            Ordering::Equal => (self.lo.clone(), self.lo_closed && other.lo_closed),
        };
        let (hi, hi_closed) = match self.hi.cmp(&other.hi) {
            Ordering::Less => (self.hi.clone(), self.hi_closed),
            Ordering::Greater => (other.hi.clone(), other.hi_closed),
            Ordering::Equal => (self.hi.clone(), self.hi_closed && other.hi_closed),
        };
        Interval::new(lo, lo_closed, hi, hi_closed)
    }

    /// `self \ other`, at most two pieces.
    fn subtract(&self, other: &Interval) -> Vec<Interval> {
        if self.intersect(other).is_none() {
            return vec![self.clone()];
        }
        let left = Interval::new(self.lo.clone(), self.lo_closed, other.lo.clone(), !other.lo_closed)
            .and_then(|l| l.intersect(self));
        let right = Interval::new(other.hi.clone(), !other.hi_closed, self.hi.clone(), self.hi_closed)
            .and_then(|r| r.intersect(self));
        left.into_iter().chain(right).collect()
    }

    /// `{a x + b : x in self}`.
    pub fn affine_image(&self, a: &Rational, b: &Rational) -> Interval {
        let f = |x: &Rational| a * x + b;
        if a.is_zero() {
            Interval::point(b.clone())
        } else if a.is_positive() {
            Interval::new(f(&self.lo), self.lo_closed, f(&self.hi), self.hi_closed).expect("non-empty image")
        } else {
            Interval::new(f(&self.hi), self.hi_closed, f(&self.lo), self.lo_closed).expect("non-empty image")
        }
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_point() {
            return write!(f, "{{{}}}", rational::format(&self.lo));
        }
        write!(
            f,
            "{}{}, {}{}",
            if self.lo_closed { '[' } else { '(' },
            rational::format(&self.lo),
            rational::format(&self.hi),
            if self.hi_closed { ']' } else { ')' }
        )
    }
}

/// Canonical form: sorted, pairwise disjoint, and no two parts can be
/// merged into one interval.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct IntervalSet {
    parts: Vec<Interval>,
}

impl IntervalSet {
    pub fn empty() -> Self {
        IntervalSet { parts: Vec::new() }
    }

    pub fn from_intervals(parts: impl IntoIterator<Item = Interval>) -> Self {
        let mut parts: Vec<Interval> = parts.into_iter().collect();
        parts.sort_by(|a, b| a.lo.cmp(&b.lo).then(b.lo_closed.cmp(&a.lo_closed)));
        let mut out: Vec<Interval> = Vec::with_capacity(parts.len());
        for p in parts {
            if let Some(last) = out.last_mut() {
                let touches = match p.lo.cmp(&last.hi) {
                    Ordering::Less => true,
                    Ordering::Equal => p.lo_closed || last.hi_closed,
                    Ordering::Greater => false,
                };
                if touches {
                    match p.hi.cmp(&last.hi) {
                        Ordering::Greater => {
                            last.hi = p.hi;
                            last.hi_closed = p.hi_closed;
                        }
                        Ordering::Equal => last.hi_closed |= p.hi_closed,
                        Ordering::Less => {}
                    }
                    continue;
                }
            }
            out.push(p);
        }
        IntervalSet { parts: out }
    }

    pub fn interval(i: Interval) -> Self {
        IntervalSet { parts: vec![i] }
    }

    pub fn closed(lo: Rational, hi: Rational) -> Self {
        Self::from_intervals(Interval::closed(lo, hi))
    }

    pub fn point(c: Rational) -> Self {
        Self::interval(Interval::point(c))
    }

    pub fn points(cs: impl IntoIterator<Item = Rational>) -> Self {
        Self::from_intervals(cs.into_iter().map(Interval::point))
    }

    pub fn parts(&self) -> &[Interval] {
        &self.parts
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    pub fn contains(&self, x: &Rational) -> bool {
        self.parts.iter().any(|p| p.contains(x))
    }

    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        Self::from_intervals(self.parts.iter().chain(&other.parts).cloned())
    }

    pub fn intersection(&self, other: &IntervalSet) -> IntervalSet {
        let mut out = Vec::new();
        for a in &self.parts {
            for b in &other.parts {
                out.extend(a.intersect(b));
            }
        }
        Self::from_intervals(out)
    }

    pub fn intersects(&self, other: &IntervalSet) -> bool {
        self.parts.iter().any(|a| other.parts.iter().any(|b| a.intersect(b).is_some()))
    }

    pub fn difference(&self, other: &IntervalSet) -> IntervalSet {
        let mut pieces = self.parts.clone();
        for b in &other.parts {
            pieces = pieces.iter().flat_map(|a| a.subtract(b)).collect();
        }
        Self::from_intervals(pieces)
    }

    /// `domain \ self`.
    pub fn complement_in(&self, domain: &IntervalSet) -> IntervalSet {
        domain.difference(self)
    }

    pub fn is_subset(&self, other: &IntervalSet) -> bool {
        self.difference(other).is_empty()
    }

    pub fn affine_image(&self, a: &Rational, b: &Rational) -> IntervalSet {
        Self::from_intervals(self.parts.iter().map(|p| p.affine_image(a, b)))
    }

    /// `{x in within : a x + b in self}`.
    pub fn affine_preimage(&self, a: &Rational, b: &Rational, within: &Interval) -> IntervalSet {
        if a.is_zero() {
            return if self.contains(b) {
                Self::interval(within.clone())
            } else {
                Self::empty()
            };
        }
        let inv_a = a.recip();
        let inv_b = -(b * &inv_a);
        self.affine_image(&inv_a, &inv_b)
            .intersection(&Self::interval(within.clone()))
    }

    /// All finite endpoints, sorted and deduplicated.
    pub fn endpoints(&self) -> Vec<Rational> {
        let mut v: Vec<Rational> = self.parts.iter().flat_map(|p| [p.lo.clone(), p.hi.clone()]).collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn min(&self) -> Option<&Rational> {
        self.parts.first().map(|p| &p.lo)
    }

    pub fn max(&self) -> Option<&Rational> {
        self.parts.last().map(|p| &p.hi)
    }

    /// Whether every part is closed.
    pub fn is_closed(&self) -> bool {
        self.parts.iter().all(|p| p.lo_closed && p.hi_closed)
    }

    /// A point of the set, preferring closed left endpoints, then midpoints.
    pub fn sample(&self) -> Option<Rational> {
        let p = self.parts.first()?;
        Some(if p.lo_closed {
            p.lo.clone()
        } else if p.hi_closed && p.is_point() {
            p.hi.clone()
        } else {
            (&p.lo + &p.hi) / Rational::from_integer(2.into())
        })
    }
}

impl fmt::Debug for IntervalSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.parts.is_empty() {
            return write!(f, "∅");
        }
        for (k, p) in self.parts.iter().enumerate() {
            if k > 0 {
                write!(f, " ∪ ")?;
            }
            write!(f, "{p:?}")?;
        }
        Ok(())
    }
}

/// `(c - r, c + r) ∩ domain`.
pub fn strict_ball(c: &Rational, r: &Rational, domain: &IntervalSet) -> IntervalSet {
    match Interval::open(c - r, c + r) {
        Some(b) => IntervalSet::interval(b).intersection(domain),
        None => IntervalSet::empty(),
    }
}

/// `[c - r, c + r] ∩ domain`.
pub fn closed_ball(c: &Rational, r: &Rational, domain: &IntervalSet) -> IntervalSet {
    match Interval::closed(c - r, c + r) {
        Some(b) => IntervalSet::interval(b).intersection(domain),
        None => IntervalSet::empty(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn unit() -> IntervalSet {
        IntervalSet::closed(int(0), int(1))
    }

    #[test]
    fn ball_examples() {
        let b = strict_ball(&int(0), &ratio(1, 2), &unit());
        assert_eq!(b, IntervalSet::interval(Interval::new(int(0), true, ratio(1, 2), false).unwrap()));
        let b = strict_ball(&ratio(1, 3), &ratio(1, 2), &unit());
        assert_eq!(b, IntervalSet::interval(Interval::new(int(0), true, ratio(5, 6), false).unwrap()));
        let dom = unit().union(&IntervalSet::point(int(2)));
        assert_eq!(strict_ball(&int(2), &ratio(1, 4), &dom), IntervalSet::point(int(2)));
    }

    #[test]
    fn canonical_merging() {
        let a = IntervalSet::from_intervals([
            Interval::new(int(0), true, ratio(1, 2), false).unwrap(),
            Interval::point(ratio(1, 2)),
            Interval::new(ratio(1, 2), false, int(1), true).unwrap(),
        ]);
        assert_eq!(a, unit());
        let gap = IntervalSet::from_intervals([
            Interval::new(int(0), true, ratio(1, 2), false).unwrap(),
            Interval::new(ratio(1, 2), false, int(1), true).unwrap(),
        ]);
        assert_eq!(gap.parts().len(), 2);
        assert!(!gap.contains(&ratio(1, 2)));
    }

    #[test]
    fn difference_and_complement() {
        let pts = IntervalSet::points([int(0), ratio(1, 3), ratio(1, 2), int(1)]);
        let c = pts.complement_in(&unit());
        assert_eq!(c.parts().len(), 3);
        assert!(!c.contains(&int(0)) && !c.contains(&ratio(1, 3)) && c.contains(&ratio(2, 5)));
        let empty = IntervalSet::interval(Interval::new(ratio(1, 2), false, int(1), true).unwrap())
            .intersection(&IntervalSet::interval(Interval::new(int(0), true, ratio(1, 2), false).unwrap()));
        assert!(empty.is_empty());
    }

    #[test]
    fn affine_maps() {
        let s = IntervalSet::closed(ratio(3, 4), int(1));
        let within = Interval::closed(int(0), ratio(1, 2)).unwrap();
        assert_eq!(s.affine_preimage(&int(1), &ratio(1, 2), &within), IntervalSet::closed(ratio(1, 4), ratio(1, 2)));
        let img = IntervalSet::closed(int(0), int(1)).affine_image(&int(-2), &int(1));
        assert_eq!(img, IntervalSet::closed(int(-1), int(1)));
    }
}
