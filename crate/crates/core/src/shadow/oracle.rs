//! Bounded brute-force falsifier, used to cross-check the decider.
//!
//! Walks through live pseudo-orbit nodes are enumerated breadth-first by
//! length. Each walk carries one tracking summary per candidate shadowing
//! point (its own frontier, or its current step set), and walks with equal
//! end node and summaries are merged since their futures coincide. Every
//! walk is also closed into each lasso its last edge allows, and those
//! lassos are tested directly.

use std::collections::{HashSet, VecDeque};

use crate::lasso::Lasso;
use crate::pointset::{PointId, PointSet};
use crate::rational::Rational;

use super::graph::PseudoOrbitGraph;
use super::shadowers::Tracker;
use super::{Mode, Property};
use crate::relation::FiniteRelation;

fn unshadowed(t: &Tracker, shadow: Mode, p: &Lasso<PointId>) -> bool {
    match shadow {
        Mode::Exists => t.existential(p).is_none(),
        Mode::Every => t.universal(p).is_empty(),
    }
}

/// A lasso of total length at most `max_len` through live nodes of the
/// `(δ, i)` pseudo-orbit graph that has no `(ε, j)`-shadowing point.
pub fn falsify_bounded(
    g: &FiniteRelation,
    property: Property,
    eps: &Rational,
    delta: &Rational,
    max_len: usize,
) -> Option<Lasso<PointId>> {
    let graph = PseudoOrbitGraph::new(g, delta, property.orbit);
    let t = Tracker::for_eps(g, eps);
    let n = g.space().len();
    let candidates: Vec<PointId> = t.legal().to_vec();

    // None marks a candidate that no longer tracks the walk.
    let first = |x: PointId| -> Vec<Option<PointSet>> {
        candidates
            .iter()
            .map(|&y| {
                let s = PointSet::singleton(n, y);
                s.is_subset(t.ball(x)).then_some(s)
            })
            .collect()
    };
    let step = |summary: &[Option<PointSet>], x2: PointId| -> Vec<Option<PointSet>> {
        summary
            .iter()
            .map(|s| {
                let s = s.as_ref()?;
                let next = t.gl().image_of(s);
                match property.shadow {
                    Mode::Exists => Some(next.intersection(t.ball(x2))).filter(|f| !f.is_empty()),
                    Mode::Every => next.is_subset(t.ball(x2)).then_some(next),
                }
            })
            .collect()
    };

    let mut seen = HashSet::new();
    let mut queue: VecDeque<(Vec<PointId>, Vec<Option<PointSet>>)> = VecDeque::new();
    for x in graph.live().iter() {
        let s = first(x);
        if seen.insert((x, s.clone())) {
            queue.push_back((vec![x], s));
        }
    }
    while let Some((walk, summary)) = queue.pop_front() {
        if summary.iter().all(Option::is_none) {
            let lasso = graph.close_walk(&walk);
            if unshadowed(&t, property.shadow, &lasso) {
                return Some(lasso);
            }
        }
        let last = *walk.last().expect("non-empty walk");
        for j in 0..walk.len() {
            if graph.has_edge(last, walk[j]) {
                let lasso = Lasso::new(walk[..j].to_vec(), walk[j..].to_vec()).expect("non-empty cycle");
                if unshadowed(&t, property.shadow, &lasso) {
                    return Some(lasso.canonical());
                }
            }
        }
        if walk.len() >= max_len {
            continue;
        }
        for x2 in graph.live_successors(last).iter() {
            let s = step(&summary, x2);
            if seen.insert((x2, s.clone())) {
                let mut w = walk.clone();
                w.push(x2);
                queue.push_back((w, s));
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::ratio;
    use crate::testing::{k2, three_point};

    #[test]
    fn oracle_examples() {
        let p21 = Property::ALL[0];
        let p22 = Property::ALL[2];
        assert_eq!(falsify_bounded(&k2(), p21, &ratio(1, 2), &ratio(1, 2), 2), Some(Lasso::constant(0)));
        let d = FiniteRelation::diagonal(three_point().space_arc().clone());
        assert_eq!(falsify_bounded(&d, p22, &ratio(1, 2), &ratio(1, 2), 4), None);
        assert_eq!(falsify_bounded(&three_point(), p21, &ratio(1, 2), &ratio(1, 2), 4), None);
    }
}
