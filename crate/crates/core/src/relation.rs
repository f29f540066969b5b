//! Closed relations on finite metric spaces and their elementary calculus:
//! powers, inverses, Mahavier products, legal and non-degenerate sets,
//! trajectories, the `F_k` construction and conjugation.

use std::collections::BTreeSet;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::lasso::Lasso;
use crate::metric::FiniteMetricSpace;
use crate::pointset::{PointId, PointSet};

/// A relation on a finite metric space, stored as successor sets.
///
/// Relations built from user input are non-empty. Derived relations
/// (powers of a relation whose legal set is empty) may be empty; see
/// [`FiniteRelation::is_flagged`].
#[derive(Clone, PartialEq, Eq)]
pub struct FiniteRelation {
    space: Arc<FiniteMetricSpace>,
    succ: Vec<PointSet>,
}

impl FiniteRelation {
    pub fn new(space: Arc<FiniteMetricSpace>, pairs: impl IntoIterator<Item = (PointId, PointId)>) -> Result<Self> {
        let n = space.len();
        let mut succ = vec![PointSet::empty(n); n];
        for (x, y) in pairs {
            if x >= n || y >= n {
                return Err(Error::Relation(format!("pair ({x}, {y}) outside a space of {n} points")));
            }
            succ[x].insert(y);
        }
        let rel = FiniteRelation { space, succ };
        if rel.is_empty() {
            return Err(Error::Relation("a relation must contain at least one pair".into()));
        }
        Ok(rel)
    }

    pub fn from_labels<'a>(
        space: Arc<FiniteMetricSpace>,
        pairs: impl IntoIterator<Item = (&'a str, &'a str)>,
    ) -> Result<Self> {
        let ids = pairs
            .into_iter()
            .map(|(a, b)| Ok((space.index_of(a)?, space.index_of(b)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(space, ids)
    }

    pub(crate) fn from_succ(space: Arc<FiniteMetricSpace>, succ: Vec<PointSet>) -> Self {
        debug_assert_eq!(space.len(), succ.len());
        FiniteRelation { space, succ }
    }

    pub fn diagonal(space: Arc<FiniteMetricSpace>) -> Self {
        let n = space.len();
        let succ = (0..n).map(|x| PointSet::singleton(n, x)).collect();
        FiniteRelation { space, succ }
    }

    pub fn full(space: Arc<FiniteMetricSpace>) -> Self {
        let n = space.len();
        FiniteRelation {
            succ: vec![PointSet::full(n); n],
            space,
        }
    }

    /// Graph of a self-map given as `f[x]`.
    pub fn graph_of(space: Arc<FiniteMetricSpace>, f: &[PointId]) -> Self {
        let n = space.len();
        let succ = f.iter().map(|&y| PointSet::singleton(n, y)).collect();
        FiniteRelation { space, succ }
    }

    pub fn space(&self) -> &FiniteMetricSpace {
        &self.space
    }

    pub fn space_arc(&self) -> &Arc<FiniteMetricSpace> {
        &self.space
    }

    pub fn len(&self) -> usize {
        self.succ.iter().map(PointSet::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.succ.iter().all(PointSet::is_empty)
    }

    pub fn contains(&self, x: PointId, y: PointId) -> bool {
        self.succ[x].contains(y)
    }

    /// `G(x)`.
    pub fn image(&self, x: PointId) -> &PointSet {
        &self.succ[x]
    }

    /// `G(A)`.
    pub fn image_of(&self, a: &PointSet) -> PointSet {
        let mut out = self.space.empty_set();
        for x in a.iter() {
            out.union_with(&self.succ[x]);
        }
        out
    }

    pub fn pairs(&self) -> Vec<(PointId, PointId)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |y| (x, y)))
            .collect()
    }

    pub fn is_subset(&self, other: &FiniteRelation) -> bool {
        self.succ.iter().zip(&other.succ).all(|(a, b)| a.is_subset(b))
    }

    pub fn contains_diagonal(&self) -> bool {
        self.space.points().all(|x| self.succ[x].contains(x))
    }

    pub fn is_diagonal(&self) -> bool {
        *self == Self::diagonal(self.space.clone())
    }

    /// `ND(G) = { x : G(x) != {} }`.
    pub fn nondegenerate_set(&self) -> PointSet {
        PointSet::from_iter_in(
            self.space.len(),
            self.space.points().filter(|&x| !self.succ[x].is_empty()),
        )
    }

    /// The points admitting an infinite trajectory: the greatest `L` with
    /// `L = { x : G(x) meets L }`, obtained by pruning dead ends.
    pub fn legal_set(&self) -> PointSet {
        let mut legal = self.space.full_set();
        loop {
            let keep = PointSet::from_iter_in(
                self.space.len(),
                legal.iter().filter(|&x| self.succ[x].intersects(&legal)),
            );
            if keep == legal {
                return legal;
            }
            legal = keep;
        }
    }

    pub fn illegal_set(&self) -> PointSet {
        self.space.full_set().difference(&self.legal_set())
    }

    /// True when no infinite trajectory exists at all. Deciders refuse
    /// flagged systems.
    pub fn is_flagged(&self) -> bool {
        self.legal_set().is_empty()
    }

    /// `G_L = G ∩ (legal × legal)`.
    pub fn legal_restriction(&self) -> FiniteRelation {
        let legal = self.legal_set();
        let succ = self
            .space
            .points()
            .map(|x| {
                if legal.contains(x) {
                    self.succ[x].intersection(&legal)
                } else {
                    self.space.empty_set()
                }
            })
            .collect();
        FiniteRelation::from_succ(self.space.clone(), succ)
    }

    /// `{ (x, z) : exists y, (x, y) in self, (y, z) in other }`.
    pub fn then(&self, other: &FiniteRelation) -> FiniteRelation {
        let succ = self.succ.iter().map(|ys| other.image_of(ys)).collect();
        FiniteRelation::from_succ(self.space.clone(), succ)
    }

    /// `G^n`, with `G^0` the diagonal.
    pub fn power(&self, n: usize) -> FiniteRelation {
        let mut acc = Self::diagonal(self.space.clone());
        for _ in 0..n {
            acc = acc.then(self);
        }
        acc
    }

    /// `G^-1 = { (x, y) : (y, x) in G }`.
    pub fn inverse(&self) -> FiniteRelation {
        let n = self.space.len();
        let mut succ = vec![PointSet::empty(n); n];
        for (x, y) in self.pairs() {
            succ[y].insert(x);
        }
        FiniteRelation::from_succ(self.space.clone(), succ)
    }

    /// `M^m(G)`: all words of length `m + 1` whose consecutive letters are
    /// pairs of `G`, in lexicographic order. `M^0(G)` is the point list.
    pub fn mahavier_product(&self, m: usize) -> Vec<Vec<PointId>> {
        let mut words: Vec<Vec<PointId>> = self.space.points().map(|x| vec![x]).collect();
        for _ in 0..m {
            words = words
                .into_iter()
                .flat_map(|w| {
                    let last = *w.last().expect("non-empty word");
                    self.succ[last].iter().map(move |y| {
                        let mut v = w.clone();
                        v.push(y);
                        v
                    }).collect::<Vec<_>>()
                })
                .collect();
        }
        words
    }

    /// Default length bound `|X| (|X| + 1)` for trajectory enumeration.
    pub fn trajectory_bound(&self) -> usize {
        let n = self.space.len();
        n * (n + 1)
    }

    /// All eventually periodic trajectories of `x` of total length at most
    /// `|X| (|X| + 1)`, canonicalized and deduplicated. Empty iff `x` is
    /// illegal. The count grows exponentially with the bound; intended for
    /// small systems and tests.
    pub fn trajectory_lassos(&self, x: PointId) -> BTreeSet<Lasso<PointId>> {
        self.trajectory_lassos_bounded(x, self.trajectory_bound())
    }

    pub fn trajectory_lassos_bounded(&self, x: PointId, max_len: usize) -> BTreeSet<Lasso<PointId>> {
        let gl = self.legal_restriction();
        let mut out = BTreeSet::new();
        if gl.succ[x].is_empty() {
            return out;
        }
        let mut stack = vec![vec![x]];
        while let Some(path) = stack.pop() {
            let last = *path.last().expect("non-empty path");
            for (s, &start) in path.iter().enumerate() {
                if gl.contains(last, start) {
                    let l = Lasso::new(path[..s].to_vec(), path[s..].to_vec()).expect("non-empty cycle");
                    out.insert(l.canonical());
                }
            }
            if path.len() < max_len {
                for y in gl.succ[last].iter() {
                    let mut next = path.clone();
                    next.push(y);
                    stack.push(next);
                }
            }
        }
        out
    }

    /// Whether every legal point has exactly one trajectory, decided by
    /// checking that `G_L(x)` is a singleton for every legal `x`.
    pub fn unique_trajectories(&self) -> bool {
        let gl = self.legal_restriction();
        self.legal_set().iter().all(|x| gl.succ[x].len() == 1)
    }

    /// `F_k = { (x, y) : y in G^k(x) and x in G^(n-k)(y) }`, defined when the
    /// diagonal lies inside `G^n`.
    pub fn f_k_relation(&self, n: usize, k: usize) -> Result<FiniteRelation> {
        if n == 0 || k > n {
            return Err(Error::Argument(format!("need n >= 1 and 0 <= k <= n, got n={n}, k={k}")));
        }
        if !self.power(n).contains_diagonal() {
            return Err(Error::DiagonalNotContained(n));
        }
        let gk = self.power(k);
        let back = self.power(n - k);
        let pairs = gk.pairs().into_iter().filter(|&(x, y)| back.contains(y, x));
        let m = self.space.len();
        let mut succ = vec![PointSet::empty(m); m];
        for (x, y) in pairs {
            succ[x].insert(y);
        }
        Ok(FiniteRelation::from_succ(self.space.clone(), succ))
    }

    /// The map `x -> y` when every `G(x)` is a singleton `{y}`.
    pub fn as_function_graph(&self) -> Option<Vec<PointId>> {
        self.succ
            .iter()
            .map(|ys| if ys.len() == 1 { ys.first() } else { None })
            .collect()
    }

    /// Transports the relation along the bijection `phi[x]` onto `target`.
    /// The flag reports whether `phi` preserves distances.
    pub fn conjugate(&self, phi: &[PointId], target: Arc<FiniteMetricSpace>) -> Result<(FiniteRelation, bool)> {
        let n = self.space.len();
        if phi.len() != n || target.len() != n {
            return Err(Error::NotBijective(format!(
                "map has {} entries for spaces of sizes {n} and {}",
                phi.len(),
                target.len()
            )));
        }
        let image = PointSet::from_iter_in(n, phi.iter().copied().filter(|&p| p < n));
        if image.len() != n {
            return Err(Error::NotBijective("map is not injective onto the target".into()));
        }
        let isometric = self
            .space
            .points()
            .all(|x| self.space.points().all(|y| self.space.dist(x, y) == target.dist(phi[x], phi[y])));
        let mut succ = vec![PointSet::empty(n); n];
        for (x, y) in self.pairs() {
            succ[phi[x]].insert(phi[y]);
        }
        Ok((FiniteRelation::from_succ(target, succ), isometric))
    }
}

impl fmt::Debug for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set()
            .entries(
                self.pairs()
                    .into_iter()
                    .map(|(x, y)| (self.space.label(x).to_string(), self.space.label(y).to_string())),
            )
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;
    use crate::testing::{k2, rel, three_point};

    fn pts(s: &PointSet, space: &FiniteMetricSpace) -> Vec<String> {
        s.iter().map(|p| space.label(p).to_string()).collect()
    }

    #[test]
    fn nondegenerate_examples() {
        let g = three_point();
        assert_eq!(pts(&g.nondegenerate_set(), g.space()), vec!["-1", "1"]);
        let d = FiniteRelation::diagonal(g.space_arc().clone());
        assert_eq!(d.nondegenerate_set().len(), 3);
        assert_eq!(k2().nondegenerate_set().len(), 2);
    }

    #[test]
    fn legal_examples() {
        let g = three_point();
        assert_eq!(pts(&g.legal_set(), g.space()), vec!["-1", "1"]);
        assert!(!g.is_flagged());
        let space = Arc::new(FiniteMetricSpace::line_from_coords(vec![int(0), int(1)]).unwrap());
        let dead = rel(&space, &[("0", "1")]);
        assert!(dead.legal_set().is_empty());
        assert!(dead.is_flagged());
    }

    #[test]
    fn legal_matches_brute_force_paths() {
        // A point is legal iff a path of length |X| leaves it (pigeonhole).
        let g = three_point();
        let n = g.space().len();
        for x in g.space().points() {
            let has_long_path = g.mahavier_product(n).iter().any(|w| w[0] == x);
            assert_eq!(g.legal_set().contains(x), has_long_path);
        }
    }

    #[test]
    fn power_examples() {
        let g = three_point();
        assert_eq!(g.power(2), g);
        assert!(g.power(0).is_diagonal());
        let space = Arc::new(FiniteMetricSpace::line_from_coords(vec![int(0), int(1)]).unwrap());
        let swap = rel(&space, &[("0", "1"), ("1", "0")]);
        assert!(swap.power(2).is_diagonal());
        let d = FiniteRelation::diagonal(space);
        assert_eq!(d.power(5), d);
    }

    #[test]
    fn inverse_example() {
        let g = three_point();
        let inv = g.inverse();
        let expected = rel(g.space_arc(), &[("1", "1"), ("0", "1"), ("0", "-1"), ("-1", "-1")]);
        assert_eq!(inv, expected);
        assert_eq!(inv.inverse(), g);
        assert_eq!(k2().inverse(), k2());
    }

    #[test]
    fn mahavier_examples() {
        let g = three_point();
        assert_eq!(g.mahavier_product(0).len(), 3);
        assert_eq!(g.mahavier_product(1).len(), g.len());
        let words: BTreeSet<Vec<String>> = g
            .mahavier_product(2)
            .iter()
            .map(|w| w.iter().map(|&p| g.space().label(p).to_string()).collect())
            .collect();
        let expected: BTreeSet<Vec<String>> = [["1", "1", "1"], ["1", "1", "0"], ["-1", "-1", "-1"], ["-1", "-1", "0"]]
            .iter()
            .map(|w| w.iter().map(|s| s.to_string()).collect())
            .collect();
        assert_eq!(words, expected);
    }

    #[test]
    fn trajectory_examples() {
        let g = three_point();
        let one = g.space().index_of("1").unwrap();
        let zero = g.space().index_of("0").unwrap();
        let t = g.trajectory_lassos(one);
        assert_eq!(t.into_iter().collect::<Vec<_>>(), vec![Lasso::constant(one)]);
        assert!(g.trajectory_lassos(zero).is_empty());

        let k = k2();
        let t = k.trajectory_lassos(0);
        assert!(t.contains(&Lasso::constant(0)));
        assert!(t.contains(&Lasso::new(vec![0], vec![1]).unwrap()));
        assert!(t.contains(&Lasso::new(vec![], vec![0, 1]).unwrap()));
    }

    #[test]
    fn unique_trajectory_examples() {
        assert!(three_point().unique_trajectories());
        assert!(!k2().unique_trajectories());
        let d = FiniteRelation::diagonal(k2().space_arc().clone());
        assert!(d.unique_trajectories());
    }

    #[test]
    fn f_k_examples() {
        let space = Arc::new(FiniteMetricSpace::line_from_coords(vec![int(0), int(1)]).unwrap());
        let swap = rel(&space, &[("0", "1"), ("1", "0")]);
        assert_eq!(swap.f_k_relation(2, 1).unwrap(), swap);
        let d = FiniteRelation::diagonal(space.clone());
        assert_eq!(d.f_k_relation(1, 1).unwrap(), d);
        assert_eq!(k2().f_k_relation(1, 1).unwrap(), FiniteRelation::diagonal(k2().space_arc().clone()));
        assert_eq!(
            three_point().f_k_relation(2, 1).unwrap_err(),
            Error::DiagonalNotContained(2)
        );
    }

    #[test]
    fn function_graph_examples() {
        let d = FiniteRelation::diagonal(k2().space_arc().clone());
        assert_eq!(d.as_function_graph(), Some(vec![0, 1]));
        let swap = rel(k2().space_arc(), &[("0", "1"), ("1", "0")]);
        assert_eq!(swap.as_function_graph(), Some(vec![1, 0]));
        assert_eq!(three_point().as_function_graph(), None);
    }

    #[test]
    fn conjugate_examples() {
        let g = three_point();
        let space = g.space_arc().clone();
        let (same, iso) = g.conjugate(&[0, 1, 2], space.clone()).unwrap();
        assert_eq!(same, g);
        assert!(iso);
        let (swapped, _) = k2().conjugate(&[1, 0], k2().space_arc().clone()).unwrap();
        assert_eq!(swapped, k2());
        let neg: Vec<PointId> = space
            .points()
            .map(|p| {
                let label = space.label(p);
                let flipped = if label == "0" { "0".to_string() } else if let Some(s) = label.strip_prefix('-') { s.to_string() } else { format!("-{label}") };
                space.index_of(&flipped).unwrap()
            })
            .collect();
        let (h, iso) = g.conjugate(&neg, space.clone()).unwrap();
        assert!(iso);
        assert_eq!(h, rel(&space, &[("-1", "-1"), ("-1", "0"), ("1", "0"), ("1", "1")]));
        assert!(g.conjugate(&[0, 0, 1], space).is_err());
    }

    #[test]
    fn empty_relation_rejected() {
        assert!(FiniteRelation::new(k2().space_arc().clone(), []).is_err());
        assert!(FiniteRelation::new(k2().space_arc().clone(), [(0, 5)]).is_err());
    }
}
