//! The pseudo-orbit graph: infinite walks through its live nodes are
//! exactly the `(δ, i)`-pseudo-orbits.

use crate::lasso::Lasso;
use crate::pointset::{PointId, PointSet};
use crate::rational::Rational;
use crate::relation::FiniteRelation;

use super::Mode;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PseudoOrbitGraph {
    delta: Rational,
    rank: usize,
    mode: Mode,
    nodes: PointSet,
    succ: Vec<PointSet>,
    live: PointSet,
}

impl PseudoOrbitGraph {
    pub fn new(g: &FiniteRelation, delta: &Rational, mode: Mode) -> Self {
        Self::with_rank(g, delta.clone(), g.space().closed_rank(delta), mode)
    }

    /// `rank` is the closed rank of `delta`: `d <= delta` iff rank `<= rank`.
    pub(crate) fn with_rank(g: &FiniteRelation, delta: Rational, rank: usize, mode: Mode) -> Self {
        let space = g.space();
        let nodes = g.nondegenerate_set();
        let succ: Vec<PointSet> = space
            .points()
            .map(|x| {
                if !nodes.contains(x) {
                    return space.empty_set();
                }
                let ys = g.image(x);
                PointSet::from_iter_in(
                    space.len(),
                    nodes.iter().filter(|&x2| match mode {
                        Mode::Exists => ys.iter().any(|y| space.rank(y, x2) <= rank),
                        Mode::Every => ys.iter().all(|y| space.rank(y, x2) <= rank),
                    }),
                )
            })
            .collect();
        let mut live = nodes.clone();
        loop {
            let keep = PointSet::from_iter_in(space.len(), live.iter().filter(|&x| succ[x].intersects(&live)));
            if keep == live {
                break;
            }
            live = keep;
        }
        PseudoOrbitGraph {
            delta,
            rank,
            mode,
            nodes,
            succ,
            live,
        }
    }

    pub fn delta(&self) -> &Rational {
        &self.delta
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn nodes(&self) -> &PointSet {
        &self.nodes
    }

    pub fn live(&self) -> &PointSet {
        &self.live
    }

    pub fn successors(&self, x: PointId) -> &PointSet {
        &self.succ[x]
    }

    pub fn live_successors(&self, x: PointId) -> PointSet {
        self.succ[x].intersection(&self.live)
    }

    pub fn has_edge(&self, x: PointId, y: PointId) -> bool {
        self.succ[x].contains(y)
    }

    pub fn edges(&self) -> Vec<(PointId, PointId)> {
        self.succ
            .iter()
            .enumerate()
            .flat_map(|(x, ys)| ys.iter().map(move |y| (x, y)))
            .collect()
    }

    /// Every transition of the lasso is an edge.
    pub fn accepts(&self, p: &Lasso<PointId>) -> bool {
        p.steps().all(|(&a, &b)| a < self.succ.len() && b < self.succ.len() && self.has_edge(a, b))
    }

    /// Extends a walk along first live successors until a node repeats,
    /// then closes it into a canonical lasso. The walk must end at a live
    /// node.
    pub(crate) fn close_walk(&self, walk: &[PointId]) -> Lasso<PointId> {
        let mut path = walk.to_vec();
        loop {
            let last = *path.last().expect("non-empty walk");
            let next = self
                .live_successors(last)
                .first()
                .expect("walk ends at a live node");
            let start = walk.len().saturating_sub(1);
            if let Some(j) = (start..path.len()).find(|&j| path[j] == next) {
                return Lasso::new(path[..j].to_vec(), path[j..].to_vec())
                    .expect("non-empty cycle")
                    .canonical();
            }
            path.push(next);
        }
    }
}

pub fn pseudo_orbit_graph(g: &FiniteRelation, delta: &Rational, mode: Mode) -> PseudoOrbitGraph {
    PseudoOrbitGraph::new(g, delta, mode)
}

/// Whether the lasso denotes a `(δ, i)`-pseudo-orbit. Checking the prefix
/// and one pass of the cycle (including the wrap) covers every step.
pub fn is_pseudo_orbit(g: &FiniteRelation, p: &Lasso<PointId>, delta: &Rational, mode: Mode) -> bool {
    pseudo_orbit_graph(g, delta, mode).accepts(p)
}
