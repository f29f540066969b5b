use std::fmt;

use fixedbitset::FixedBitSet;

/// Index of a point in a finite space's point list.
pub type PointId = usize;

/// A subset of the points of a finite space, stored as a bit set sized to
/// the space.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointSet(FixedBitSet);

impl PointSet {
    pub fn empty(universe: usize) -> Self {
        PointSet(FixedBitSet::with_capacity(universe))
    }

    pub fn full(universe: usize) -> Self {
        let mut bits = FixedBitSet::with_capacity(universe);
        bits.insert_range(..);
        PointSet(bits)
    }

    pub fn singleton(universe: usize, p: PointId) -> Self {
        let mut s = Self::empty(universe);
        s.insert(p);
        s
    }

    pub fn from_iter_in(universe: usize, points: impl IntoIterator<Item = PointId>) -> Self {
        let mut s = Self::empty(universe);
        for p in points {
            s.insert(p);
        }
        s
    }

    pub fn universe(&self) -> usize {
        self.0.len()
    }

    pub fn insert(&mut self, p: PointId) {
        self.0.insert(p);
    }

    pub fn remove(&mut self, p: PointId) {
        self.0.set(p, false);
    }

    pub fn contains(&self, p: PointId) -> bool {
        self.0.contains(p)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_clear()
    }

    pub fn iter(&self) -> impl Iterator<Item = PointId> + '_ {
        self.0.ones()
    }

    pub fn first(&self) -> Option<PointId> {
        self.0.ones().next()
    }

    pub fn is_subset(&self, other: &PointSet) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersects(&self, other: &PointSet) -> bool {
        !self.0.is_disjoint(&other.0)
    }

    pub fn union_with(&mut self, other: &PointSet) {
        self.0.union_with(&other.0);
    }

    pub fn intersect_with(&mut self, other: &PointSet) {
        self.0.intersect_with(&other.0);
    }

    pub fn difference_with(&mut self, other: &PointSet) {
        self.0.difference_with(&other.0);
    }

    pub fn union(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.union_with(other);
        s
    }

    pub fn intersection(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.intersect_with(other);
        s
    }

    pub fn difference(&self, other: &PointSet) -> PointSet {
        let mut s = self.clone();
        s.difference_with(other);
        s
    }

    pub fn to_vec(&self) -> Vec<PointId> {
        self.iter().collect()
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn basic_algebra() {
        let a = PointSet::from_iter_in(5, [0, 2, 4]);
        let b = PointSet::from_iter_in(5, [2, 3]);
        assert_eq!(a.union(&b).to_vec(), vec![0, 2, 3, 4]);
        assert_eq!(a.intersection(&b).to_vec(), vec![2]);
        assert_eq!(a.difference(&b).to_vec(), vec![0, 4]);
        assert!(PointSet::singleton(5, 2).is_subset(&a));
        assert!(!b.is_subset(&a));
        assert_eq!(PointSet::full(3).len(), 3);
        assert!(PointSet::empty(3).is_empty());
        assert_eq!(a.first(), Some(0));
    }
}
