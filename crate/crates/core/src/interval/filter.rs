//! Tracking filters along rational lassos.

use std::collections::HashSet;

use num_traits::Signed;

use crate::error::{Error, Result};
use crate::lasso::Lasso;
use crate::rational::{self, int, Rational};
use crate::shadow::Mode;

use super::relation::PlanarRelation;
use super::set::{closed_ball, strict_ball, IntervalSet};

/// Cycle passes allowed before a filter gives up.
pub const DEFAULT_PASSES: usize = 64;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ForwardVerdict {
    /// The frontier is empty at this index: no point shadows the lasso.
    NoShadower(usize),
    /// Both the strict and the shrunken closed frontier sequences became
    /// periodic without emptying.
    ShadowerExists,
    Inconclusive,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForwardReport {
    /// Frontiers `T_0, T_1, ...` of the strict computation.
    pub trace: Vec<IntervalSet>,
    pub verdict: ForwardVerdict,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FilterStatus {
    Exact,
    Capped,
}

enum Run {
    Empty(usize),
    Periodic,
    Capped,
}

fn check_lasso(r: &PlanarRelation, p: &Lasso<Rational>) -> Result<()> {
    match p.terms().find(|x| !r.domain().contains(x)) {
        Some(x) => Err(Error::Lasso(format!("term {} is outside the domain", rational::format(x)))),
        None => Ok(()),
    }
}

fn legal(r: &PlanarRelation) -> IntervalSet {
    r.legal_iterate(DEFAULT_PASSES).0
}

fn frontiers(
    r: &PlanarRelation,
    legal: &IntervalSet,
    p: &Lasso<Rational>,
    passes: usize,
    ball: impl Fn(&Rational) -> IntervalSet,
) -> (Vec<IntervalSet>, Run) {
    let cap = p.prefix().len() + passes * p.cycle().len();
    let mut trace = Vec::new();
    let mut seen = HashSet::new();
    let mut t = ball(p.at(0)).intersection(legal);
    let mut slot = 0;
    for k in 0.. {
        trace.push(t.clone());
        if t.is_empty() {
            return (trace, Run::Empty(k));
        }
        if slot >= p.prefix().len() && !seen.insert((slot, t.clone())) {
            return (trace, Run::Periodic);
        }
        if k >= cap {
            break;
        }
        slot = p.next_slot(slot);
        t = r.image_unchecked(&t).intersection(&ball(p.at(slot))).intersection(legal);
    }
    (trace, Run::Capped)
}

/// A quarter of the smallest positive slack `ε - d` over distances `d`
/// between lasso terms and the landmarks of the relation (capped by `ε`).
pub fn shrink_margin(r: &PlanarRelation, p: &Lasso<Rational>, eps: &Rational) -> Rational {
    let mut marks = r.landmarks();
    marks.extend(p.terms().cloned());
    marks.sort();
    marks.dedup();
    let mut slack = eps.clone();
    for x in p.terms() {
        for m in &marks {
            let d = rational::abs_diff(x, m);
            if d < *eps && eps - &d < slack {
                slack = eps - &d;
            }
        }
    }
    slack / int(4)
}

/// Forward tracking with union frontiers. Empty strict frontiers refute
/// shadowing. A shadower is certified only when both the strict and a
/// closed-ball computation with radius `ε - η` reach a repeated state with
/// every frontier non-empty; closed frontiers are compact, so arbitrarily
/// long tracking paths yield an infinite trajectory inside the closed
/// balls, hence strictly inside the `ε` balls.
pub fn forward_filter(r: &PlanarRelation, p: &Lasso<Rational>, eps: &Rational) -> Result<ForwardReport> {
    forward_filter_capped(r, p, eps, DEFAULT_PASSES)
}

pub fn forward_filter_capped(r: &PlanarRelation, p: &Lasso<Rational>, eps: &Rational, passes: usize) -> Result<ForwardReport> {
    check_lasso(r, p)?;
    if !eps.is_positive() {
        return Err(Error::Argument("epsilon must be positive".into()));
    }
    let legal = legal(r);
    let (trace, run) = frontiers(r, &legal, p, passes, |c| strict_ball(c, eps, r.domain()));
    let verdict = match run {
        Run::Empty(k) => ForwardVerdict::NoShadower(k),
        Run::Capped => ForwardVerdict::Inconclusive,
        Run::Periodic => {
            let radius = eps - shrink_margin(r, p, eps);
            match frontiers(r, &legal, p, passes, |c| closed_ball(c, &radius, r.domain())).1 {
                Run::Periodic => ForwardVerdict::ShadowerExists,
                _ => ForwardVerdict::Inconclusive,
            }
        }
    };
    Ok(ForwardReport { trace, verdict })
}

/// Points every trajectory of which stays strictly within `ε` of the
/// lasso: the greatest fixpoint of
/// `U_k = B(p_k, ε) ∩ L ∩ {x ∈ L : R(x) ∩ L ⊆ U_{k+1}}` over the cycle,
/// followed by one backward pass over the prefix. With status `Capped`
/// the result is a superset of the shadowers.
pub fn universal_filter(r: &PlanarRelation, p: &Lasso<Rational>, eps: &Rational, max_iter: usize) -> Result<(IntervalSet, FilterStatus)> {
    check_lasso(r, p)?;
    let legal = legal(r);
    let all_inside = |s: &IntervalSet| legal.difference(&r.preimage_exists(&legal.difference(s)));
    let ball = |c: &Rational| strict_ball(c, eps, r.domain()).intersection(&legal);
    let cycle = p.cycle();
    let m = cycle.len();
    let mut u: Vec<IntervalSet> = cycle.iter().map(ball).collect();
    let mut status = FilterStatus::Capped;
    for _ in 0..max_iter.max(1) {
        let mut changed = false;
        for j in (0..m).rev() {
            let next = ball(&cycle[j]).intersection(&all_inside(&u[(j + 1) % m]));
            if next != u[j] {
                u[j] = next;
                changed = true;
            }
        }
        if !changed {
            status = FilterStatus::Exact;
            break;
        }
    }
    let mut after = u[0].clone();
    for x in p.prefix().iter().rev() {
        after = ball(x).intersection(&all_inside(&after));
    }
    Ok((after, status))
}

/// Whether every step of the lasso is a `(δ, i)` pseudo-orbit step.
pub fn is_pseudo_orbit(r: &PlanarRelation, p: &Lasso<Rational>, delta: &Rational, mode: Mode) -> bool {
    let nd = r.nondegenerate();
    p.steps().all(|(a, b)| {
        if !nd.contains(a) || !nd.contains(b) {
            return false;
        }
        let fiber = r.fiber(a);
        let near = closed_ball(b, delta, r.domain());
        match mode {
            Mode::Exists => fiber.intersects(&near),
            Mode::Every => fiber.is_subset(&near),
        }
    })
}

/// The points `x'` that may follow `x` in a `(δ, i)`-pseudo-orbit.
pub fn pseudo_orbit_successors(r: &PlanarRelation, x: &Rational, delta: &Rational, mode: Mode) -> IntervalSet {
    let nd = r.nondegenerate();
    let fiber = r.fiber(x);
    if fiber.is_empty() {
        return IntervalSet::empty();
    }
    let reach = match mode {
        Mode::Exists => fiber
            .parts()
            .iter()
            .map(|part| {
                let lo = part.lo() - delta;
                let hi = part.hi() + delta;
                IntervalSet::closed(lo, hi)
            })
            .fold(IntervalSet::empty(), |a, b| a.union(&b)),
        Mode::Every => {
            let lo = fiber.max().expect("non-empty") - delta;
            let hi = fiber.min().expect("non-empty") + delta;
            if lo <= hi {
                IntervalSet::closed(lo, hi)
            } else {
                IntervalSet::empty()
            }
        }
    };
    reach.intersection(&nd)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::relation::Primitive;
    use crate::interval::set::Interval;
    use crate::rational::ratio;

    fn unit() -> (Rational, Rational) {
        (int(0), int(1))
    }

    fn unit_set() -> IntervalSet {
        IntervalSet::closed(int(0), int(1))
    }

    fn diag_plus_base() -> PlanarRelation {
        PlanarRelation::new(
            unit_set(),
            vec![Primitive::Diag { i: unit() }, Primitive::HLine { i: unit(), c: int(0) }],
        )
        .unwrap()
    }

    fn staircase() -> Lasso<Rational> {
        Lasso::new(vec![int(0), ratio(1, 3), ratio(2, 3)], vec![int(1)]).unwrap()
    }

    #[test]
    fn staircase_trace() {
        let rep = forward_filter(&diag_plus_base(), &staircase(), &ratio(1, 2)).unwrap();
        assert_eq!(rep.verdict, ForwardVerdict::NoShadower(3));
        let half_open = |lo: Rational, lc: bool, hi: Rational| IntervalSet::interval(Interval::new(lo, lc, hi, false).unwrap());
        assert_eq!(rep.trace[0], half_open(int(0), true, ratio(1, 2)));
        assert_eq!(rep.trace[1], half_open(int(0), true, ratio(1, 2)));
        assert_eq!(rep.trace[2], half_open(ratio(1, 6), false, ratio(1, 2)));
        assert!(rep.trace[3].is_empty());
    }

    #[test]
    fn closed_balls_miss_the_refutation() {
        let r = diag_plus_base();
        let legal = legal(&r);
        let (_, run) = frontiers(&r, &legal, &staircase(), 4, |c| closed_ball(c, &ratio(1, 2), r.domain()));
        assert!(matches!(run, Run::Periodic));
    }

    #[test]
    fn identity_certifies() {
        let d = PlanarRelation::new(unit_set(), vec![Primitive::Diag { i: unit() }]).unwrap();
        let p = Lasso::constant(ratio(1, 3));
        assert_eq!(forward_filter(&d, &p, &ratio(1, 10)).unwrap().verdict, ForwardVerdict::ShadowerExists);
        let (u, status) = universal_filter(&d, &p, &ratio(1, 10), 8).unwrap();
        assert_eq!(status, FilterStatus::Exact);
        assert_eq!(u, strict_ball(&ratio(1, 3), &ratio(1, 10), &unit_set()));
    }

    #[test]
    fn comb_universal_is_empty() {
        let mut prims = vec![Primitive::HLine { i: unit(), c: int(0) }, Primitive::VLine { c: int(0), j: unit() }];
        prims.extend((1..=100).map(|n| Primitive::VLine { c: ratio(1, n), j: unit() }));
        let comb = PlanarRelation::new(unit_set(), prims).unwrap();
        let (u, status) = universal_filter(&comb, &Lasso::constant(ratio(2, 101)), &ratio(1, 4), 64).unwrap();
        assert!(u.is_empty());
        assert_eq!(status, FilterStatus::Exact);
    }

    #[test]
    fn malformed_lasso_rejected() {
        assert!(forward_filter(&diag_plus_base(), &Lasso::constant(int(3)), &ratio(1, 2)).is_err());
    }

    #[test]
    fn pseudo_orbit_checks() {
        let r = diag_plus_base();
        assert!(is_pseudo_orbit(&r, &staircase(), &ratio(1, 3), Mode::Exists));
        assert!(!is_pseudo_orbit(&r, &staircase(), &ratio(1, 3), Mode::Every));
        let succ = pseudo_orbit_successors(&r, &ratio(1, 2), &ratio(1, 10), Mode::Every);
        assert!(succ.is_empty());
        let succ = pseudo_orbit_successors(&r, &ratio(1, 20), &ratio(1, 10), Mode::Every);
        assert_eq!(succ, IntervalSet::closed(int(0), ratio(1, 10)));
    }
}
