//! Finite metric spaces with exact rational distances.

use std::collections::HashMap;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::pointset::{PointId, PointSet};
use crate::rational::{self, Rational};

/// A finite metric space. The metric axioms, including the triangle
/// inequality over every ordered triple, are checked at construction.
///
/// Alongside the raw distances the space keeps each pair's *rank*: the
/// 1-based position of `d(x, y)` in the sorted list of distinct positive
/// distances (0 on the diagonal). Threshold comparisons against ladder
/// values reduce to integer comparisons on ranks.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    dist: Vec<Vec<Rational>>,
    ranks: Vec<Vec<usize>>,
    ladder: Vec<Rational>,
    coords: Option<Vec<Rational>>,
}

impl FiniteMetricSpace {
    pub fn from_matrix(labels: Vec<String>, dist: Vec<Vec<Rational>>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::Metric("space has no points".into()));
        }
        let mut seen = HashMap::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(j) = seen.insert(l.clone(), i) {
                return Err(Error::Metric(format!("duplicate point `{l}` at {j} and {i}")));
            }
        }
        if dist.len() != n || dist.iter().any(|row| row.len() != n) {
            return Err(Error::Metric(format!("distance matrix must be {n}x{n}")));
        }
        for x in 0..n {
            if !dist[x][x].is_zero() {
                return Err(Error::Metric(format!("d({0},{0}) must be 0", labels[x])));
            }
            for y in 0..n {
                if dist[x][y] != dist[y][x] {
                    return Err(Error::Metric(format!(
                        "d({},{}) is not symmetric",
                        labels[x], labels[y]
                    )));
                }
                if x != y && !dist[x][y].is_positive() {
                    return Err(Error::Metric(format!(
                        "d({},{}) must be positive",
                        labels[x], labels[y]
                    )));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in 0..n {
                    if dist[x][z] > &dist[x][y] + &dist[y][z] {
                        return Err(Error::Metric(format!(
                            "triangle inequality fails for ({}, {}, {})",
                            labels[x], labels[y], labels[z]
                        )));
                    }
                }
            }
        }
        let mut ladder: Vec<Rational> = dist
            .iter()
            .flatten()
            .filter(|d| d.is_positive())
            .cloned()
            .collect();
        ladder.sort();
        ladder.dedup();
        let ranks = dist
            .iter()
            .map(|row| {
                row.iter()
                    .map(|d| {
                        if d.is_zero() {
                            0
                        } else {
                            ladder.binary_search(d).expect("distance in ladder") + 1
                        }
                    })
                    .collect()
            })
            .collect();
        Ok(FiniteMetricSpace {
            labels,
            dist,
            ranks,
            ladder,
            coords: None,
        })
    }

    /// Points on the rational line with `d(x, y) = |x - y|`.
    pub fn on_line(labels: Vec<String>, coords: Vec<Rational>) -> Result<Self> {
        if labels.len() != coords.len() {
            return Err(Error::Metric("one coordinate per point required".into()));
        }
        let dist = coords
            .iter()
            .map(|a| coords.iter().map(|b| rational::abs_diff(a, b)).collect())
            .collect();
        let mut space = Self::from_matrix(labels, dist)?;
        space.coords = Some(coords);
        Ok(space)
    }

    /// Line space labelled by the coordinates' own text.
    pub fn line_from_coords(coords: Vec<Rational>) -> Result<Self> {
        let labels = coords.iter().map(rational::format).collect();
        Self::on_line(labels, coords)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn points(&self) -> std::ops::Range<PointId> {
        0..self.labels.len()
    }

    pub fn label(&self, p: PointId) -> &str {
        &self.labels[p]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Result<PointId> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| Error::UnknownPoint(label.to_string()))
    }

    pub fn dist(&self, x: PointId, y: PointId) -> &Rational {
        &self.dist[x][y]
    }

    pub fn rank(&self, x: PointId, y: PointId) -> usize {
        self.ranks[x][y]
    }

    /// Sorted distinct positive distances.
    pub fn distances(&self) -> &[Rational] {
        &self.ladder
    }

    /// Coordinates when the space was built on the line.
    pub fn coords(&self) -> Option<&[Rational]> {
        self.coords.as_deref()
    }

    /// Largest rank `r` such that `d <= delta` iff `rank <= r`.
    pub fn closed_rank(&self, delta: &Rational) -> usize {
        self.ladder.partition_point(|t| t <= delta)
    }

    /// Largest rank `r` such that `d < eps` iff `rank <= r` (for `eps > 0`).
    pub fn open_rank(&self, eps: &Rational) -> usize {
        self.ladder.partition_point(|t| t < eps)
    }

    /// `{ y : rank(center, y) <= max_rank }`.
    pub fn ball(&self, center: PointId, max_rank: usize) -> PointSet {
        PointSet::from_iter_in(
            self.len(),
            self.points().filter(|&y| self.ranks[center][y] <= max_rank),
        )
    }

    pub fn empty_set(&self) -> PointSet {
        PointSet::empty(self.len())
    }

    pub fn full_set(&self) -> PointSet {
        PointSet::full(self.len())
    }

    /// Whether `phi` (a permutation of point ids) preserves all distances.
    pub fn is_isometry(&self, phi: &[PointId]) -> bool {
        self.points()
            .all(|x| self.points().all(|y| self.dist[x][y] == self.dist[phi[x]][phi[y]]))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};

    fn labels(v: &[&str]) -> Vec<String> {
        v.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn line_space_has_expected_ladder() {
        let s = FiniteMetricSpace::on_line(labels(&["-1", "0", "1"]), vec![int(-1), int(0), int(1)])
            .unwrap();
        assert_eq!(s.distances(), &[int(1), int(2)]);
        assert_eq!(s.rank(0, 2), 2);
        assert_eq!(s.rank(1, 2), 1);
        assert_eq!(s.closed_rank(&ratio(1, 2)), 0);
        assert_eq!(s.closed_rank(&int(1)), 1);
        assert_eq!(s.open_rank(&int(1)), 0);
        assert_eq!(s.open_rank(&int(2)), 1);
        assert_eq!(s.open_rank(&int(3)), 2);
        assert_eq!(s.ball(0, 1).to_vec(), vec![0, 1]);
    }

    #[test]
    fn rejects_bad_metrics() {
        let two = labels(&["a", "b"]);
        let asym = vec![vec![int(0), int(1)], vec![int(2), int(0)]];
        assert!(FiniteMetricSpace::from_matrix(two.clone(), asym).is_err());
        let zero = vec![vec![int(0), int(0)], vec![int(0), int(0)]];
        assert!(FiniteMetricSpace::from_matrix(two.clone(), zero).is_err());
        let diag = vec![vec![int(1), int(1)], vec![int(1), int(0)]];
        assert!(FiniteMetricSpace::from_matrix(two, diag).is_err());
        let tri = vec![
            vec![int(0), int(1), int(5)],
            vec![int(1), int(0), int(1)],
            vec![int(5), int(1), int(0)],
        ];
        assert!(FiniteMetricSpace::from_matrix(labels(&["a", "b", "c"]), tri).is_err());
        assert!(FiniteMetricSpace::from_matrix(vec![], vec![]).is_err());
        let dup = vec![vec![int(0), int(1)], vec![int(1), int(0)]];
        assert!(FiniteMetricSpace::from_matrix(labels(&["a", "a"]), dup).is_err());
    }

    #[test]
    fn isometry_check() {
        let s = FiniteMetricSpace::line_from_coords(vec![int(-1), int(0), int(1)]).unwrap();
        assert!(s.is_isometry(&[2, 1, 0]));
        assert!(!s.is_isometry(&[1, 0, 2]));
    }
}
