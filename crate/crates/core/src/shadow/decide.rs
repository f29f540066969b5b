//! The decision procedure.
//!
//! For fixed `ε` the condition is monotone in `δ`, so `∃δ` reduces to the
//! sub-minimal `δ` class. For fixed `(ε, δ)` a pseudo-orbit is shadowed iff
//! every finite prefix is, so the property fails iff some finite walk
//! through live nodes of the pseudo-orbit graph leaves no candidate. That
//! walk is found by breadth-first search over finite summaries and then
//! closed into a lasso.

use std::collections::{HashSet, VecDeque};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::lasso::Lasso;
use crate::pointset::{PointId, PointSet};
use crate::rational::{lcm, Rational};
use crate::relation::FiniteRelation;

use super::graph::PseudoOrbitGraph;
use super::ladder::{threshold_ladder, EpsClass};
use super::shadowers::Tracker;
use super::verdict::{fingerprint, ScheduleEntry, Verdict};
use super::{Mode, Property};

/// Search for one `(ε class, δ class)` pair.
struct Search<'a> {
    graph: &'a PseudoOrbitGraph,
    tracker: &'a Tracker,
}

struct Node<S> {
    point: PointId,
    summary: S,
    parent: Option<usize>,
}

fn walk_to<S>(arena: &[Node<S>], mut at: usize, last: Option<PointId>) -> Vec<PointId> {
    let mut walk: Vec<PointId> = last.into_iter().collect();
    loop {
        walk.push(arena[at].point);
        match arena[at].parent {
            Some(p) => at = p,
            None => break,
        }
    }
    walk.reverse();
    walk
}

/// Generic breadth-first search. `start` gives the summary after visiting
/// a first node, `step` the summary after moving to the next node; `None`
/// means every candidate is gone.
fn bfs<S: Clone + Eq + std::hash::Hash>(
    graph: &PseudoOrbitGraph,
    start: impl Fn(PointId) -> Option<S>,
    step: impl Fn(&S, PointId) -> Option<S>,
) -> Option<Vec<PointId>> {
    let mut arena: Vec<Node<S>> = Vec::new();
    let mut seen = HashSet::new();
    let mut queue = VecDeque::new();
    for x in graph.live().iter() {
        match start(x) {
            None => return Some(vec![x]),
            Some(s) => {
                if seen.insert((x, s.clone())) {
                    arena.push(Node {
                        point: x,
                        summary: s,
                        parent: None,
                    });
                    queue.push_back(arena.len() - 1);
                }
            }
        }
    }
    while let Some(at) = queue.pop_front() {
        let x = arena[at].point;
        for x2 in graph.live_successors(x).iter() {
            match step(&arena[at].summary, x2) {
                None => return Some(walk_to(&arena, at, Some(x2))),
                Some(s) => {
                    if seen.insert((x2, s.clone())) {
                        arena.push(Node {
                            point: x2,
                            summary: s,
                            parent: Some(at),
                        });
                        queue.push_back(arena.len() - 1);
                    }
                }
            }
        }
    }
    None
}

/// Eventually periodic sequence of step sets `G_L^k({y})`.
struct StepSets {
    sets: Vec<PointSet>,
    pre: usize,
    period: usize,
}

impl StepSets {
    fn new(gl: &FiniteRelation, y: PointId) -> Self {
        let mut sets = vec![PointSet::singleton(gl.space().len(), y)];
        loop {
            let next = gl.image_of(sets.last().expect("non-empty"));
            if let Some(pre) = sets.iter().position(|s| *s == next) {
                let period = sets.len() - pre;
                return StepSets { sets, pre, period };
            }
            sets.push(next);
        }
    }

    fn at(&self, k: usize) -> &PointSet {
        if k < self.pre {
            &self.sets[k]
        } else {
            &self.sets[self.pre + (k - self.pre) % self.period]
        }
    }
}

impl Search<'_> {
    /// Union frontier of all candidate trajectories.
    fn exists_failure(&self) -> Option<Vec<PointId>> {
        let t = self.tracker;
        bfs(
            self.graph,
            |x| Some(t.legal().intersection(t.ball(x))).filter(|s| !s.is_empty()),
            |s, x2| {
                let mut next = t.gl().image_of(s);
                next.intersect_with(t.ball(x2));
                Some(next).filter(|n| !n.is_empty())
            },
        )
    }

    /// Alive candidates with a step counter normalized to the joint
    /// preperiod and period of all step-set sequences.
    fn every_failure(&self) -> Option<Vec<PointId>> {
        let t = self.tracker;
        let n = t.legal().universe();
        let seqs: Vec<(PointId, StepSets)> = t.legal().iter().map(|y| (y, StepSets::new(t.gl(), y))).collect();
        let pre = seqs.iter().map(|(_, s)| s.pre).max().unwrap_or(0);
        let period = seqs.iter().map(|(_, s)| s.period).fold(1, lcm);
        let horizon = pre + period;
        // ok[k][x]: candidates all of whose step-k positions lie in ball(x).
        let ok: Vec<Vec<PointSet>> = (0..horizon)
            .map(|k| {
                (0..n)
                    .map(|x| {
                        PointSet::from_iter_in(
                            n,
                            seqs.iter().filter(|(_, s)| s.at(k).is_subset(t.ball(x))).map(|(y, _)| *y),
                        )
                    })
                    .collect()
            })
            .collect();
        let advance = |k: usize| if k + 1 < horizon { k + 1 } else { pre };
        bfs(
            self.graph,
            |x| Some((0usize, ok[0][x].clone())).filter(|(_, a)| !a.is_empty()),
            |(k, alive), x2| {
                let k2 = advance(*k);
                let a = alive.intersection(&ok[k2][x2]);
                Some((k2, a)).filter(|(_, a)| !a.is_empty())
            },
        )
    }

    fn failure(&self, shadow: Mode) -> Option<Lasso<PointId>> {
        let walk = match shadow {
            Mode::Exists => self.exists_failure(),
            Mode::Every => self.every_failure(),
        }?;
        Some(self.graph.close_walk(&walk))
    }
}

/// A `(δ, i)`-pseudo-orbit with no `(ε, j)`-shadowing point, if one exists.
pub fn counterexample(g: &FiniteRelation, property: Property, eps: &Rational, delta: &Rational) -> Result<Option<Lasso<PointId>>> {
    if g.is_flagged() {
        return Err(Error::Flagged);
    }
    let graph = PseudoOrbitGraph::new(g, delta, property.orbit);
    let tracker = Tracker::for_eps(g, eps);
    Ok(Search {
        graph: &graph,
        tracker: &tracker,
    }
    .failure(property.shadow))
}

enum ClassOutcome {
    Holds(ScheduleEntry),
    Fails(Lasso<PointId>),
}

fn decide_class(g: &FiniteRelation, property: Property, class: &EpsClass, deltas: &[(Rational, usize)]) -> ClassOutcome {
    let tracker = Tracker::new(g, class.ball_rank);
    let fails_at = |(rep, rank): &(Rational, usize)| {
        let graph = PseudoOrbitGraph::with_rank(g, rep.clone(), *rank, property.orbit);
        Search {
            graph: &graph,
            tracker: &tracker,
        }
        .failure(property.shadow)
    };
    if let Some(w) = fails_at(&deltas[0]) {
        return ClassOutcome::Fails(w);
    }
    let best = deltas
        .iter()
        .rev()
        .find(|d| fails_at(d).is_none())
        .expect("the smallest class succeeds");
    ClassOutcome::Holds(ScheduleEntry {
        eps: class.rep.clone(),
        delta: best.0.clone(),
    })
}

/// Exact verdict for one property. Refuses systems without infinite
/// trajectories.
///
/// On success the schedule maps each `ε` class to the largest sufficient
/// `δ` representative. On failure `ε*` is the largest failing `ε`
/// representative; the property then fails for every `ε <= ε*`, and the
/// witness is a pseudo-orbit for every `δ` that no point shadows at `ε*`.
pub fn decide_shadowing(g: &FiniteRelation, property: Property) -> Result<Verdict> {
    if g.is_flagged() {
        return Err(Error::Flagged);
    }
    let ladder = threshold_ladder(g.space());
    let deltas: Vec<(Rational, usize)> = ladder.delta_classes().into_iter().map(|d| (d.rep, d.rank)).collect();
    let outcomes: Vec<ClassOutcome> = ladder
        .eps_classes()
        .par_iter()
        .map(|c| decide_class(g, property, c, &deltas))
        .collect();
    let classes = ladder.eps_classes();
    let failing = outcomes
        .iter()
        .zip(&classes)
        .rev()
        .find_map(|(o, c)| match o {
            ClassOutcome::Fails(w) => Some((c.rep.clone(), w.clone())),
            ClassOutcome::Holds(_) => None,
        });
    let fp = fingerprint(g);
    Ok(match failing {
        Some((eps, witness)) => Verdict::failing(property, eps, witness, fp),
        None => Verdict::holding(
            property,
            outcomes
                .into_iter()
                .map(|o| match o {
                    ClassOutcome::Holds(e) => e,
                    ClassOutcome::Fails(_) => unreachable!(),
                })
                .collect(),
            fp,
        ),
    })
}

/// All four verdicts in report order.
pub fn decide_all(g: &FiniteRelation) -> Result<Vec<Verdict>> {
    Property::ALL.iter().map(|&p| decide_shadowing(g, p)).collect()
}
