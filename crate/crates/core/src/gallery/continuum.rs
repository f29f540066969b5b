//! Items on finite unions of rational intervals.

use std::sync::Arc;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::interval::{
    closed_ball, forward_filter, is_pseudo_orbit, pseudo_orbit_successors, random_pseudo_orbit, universal_filter,
    FilterStatus, ForwardVerdict, IntervalSet, PlanarRelation, Primitive, DEFAULT_PASSES,
};
use crate::lasso::Lasso;
use crate::metric::FiniteMetricSpace;
use crate::random::rng;
use crate::rational::{self, int, ratio, Rational};
use crate::relation::FiniteRelation;
use crate::sft::closing_example_check_at;
use crate::shadow::{decide_shadowing, threshold_ladder, Mode, Property, PseudoOrbitGraph};

use super::{implications_claim, q, rational_lasso, Claim, GalleryItem, GallerySystem, Observation, Outcome};

fn unit() -> (Rational, Rational) {
    (int(0), int(1))
}

fn set_json(s: &IntervalSet) -> Value {
    Value::String(format!("{s:?}"))
}

/// `[0,1] × {0}` with teeth over `0` and `1/n` for `n = 1..=teeth`.
pub fn comb_relation(teeth: usize) -> Result<PlanarRelation> {
    let mut prims = vec![Primitive::HLine { i: unit(), c: int(0) }, Primitive::VLine { c: int(0), j: unit() }];
    prims.extend((1..=teeth as i64).map(|n| Primitive::VLine { c: ratio(1, n), j: unit() }));
    PlanarRelation::new(IntervalSet::closed(int(0), int(1)), prims)
}

/// `Δ ∪ ([0,1] × {c})`.
pub fn diag_plus_line_relation(c: &Rational) -> Result<PlanarRelation> {
    PlanarRelation::new(
        IntervalSet::closed(int(0), int(1)),
        vec![Primitive::Diag { i: unit() }, Primitive::HLine { i: unit(), c: c.clone() }],
    )
}

/// `([0,1/2] × {1}) ∪ L₁ ∪ L₂ ∪ {(2,2)}` on `[0,1] ∪ {2}`, with `L₁` the
/// graph of `x + 1/2` over `[0,1/2]` and `L₂` that of `x - 1/2` over
/// `[1/2,3/4]`.
pub fn powers_relation() -> Result<PlanarRelation> {
    let half = ratio(1, 2);
    PlanarRelation::new(
        IntervalSet::closed(int(0), int(1)).union(&IntervalSet::point(int(2))),
        vec![
            Primitive::HLine { i: (int(0), half.clone()), c: int(1) },
            Primitive::Affine { i: (int(0), half.clone()), a: int(1), b: half.clone() },
            Primitive::Affine { i: (half.clone(), ratio(3, 4)), a: int(1), b: -half },
            Primitive::Point { x: int(2), y: int(2) },
        ],
    )
}

/// The square of [`powers_relation`] as stated by hand:
/// `{(0,1)} ∪ [1/2,3/4] × {1} ∪` the diagonal over `[0,1/4] ∪ [1/2,3/4] ∪ {2}`.
pub fn powers_square_stated() -> Result<PlanarRelation> {
    PlanarRelation::new(
        IntervalSet::closed(int(0), int(1)).union(&IntervalSet::point(int(2))),
        vec![
            Primitive::Point { x: int(0), y: int(1) },
            Primitive::HLine { i: (ratio(1, 2), ratio(3, 4)), c: int(1) },
            Primitive::Diag { i: (int(0), ratio(1, 4)) },
            Primitive::Diag { i: (ratio(1, 2), ratio(3, 4)) },
            Primitive::Point { x: int(2), y: int(2) },
        ],
    )
}

/// `{(0,0), (1/2,1/2)} ∪ ({1} × [0,1/2])` on `[0,1]`.
pub fn finite_nd_relation() -> Result<PlanarRelation> {
    PlanarRelation::new(
        IntervalSet::closed(int(0), int(1)),
        vec![
            Primitive::Point { x: int(0), y: int(0) },
            Primitive::Point { x: ratio(1, 2), y: ratio(1, 2) },
            Primitive::VLine { c: int(1), j: (int(0), ratio(1, 2)) },
        ],
    )
}

/// Seeded lasso sampling shared by the sampled claims. Lassos are random
/// walks on the grid of step `1/grid` with at most `max_len` terms.
struct Sampler {
    delta: Rational,
    mode: Mode,
    samples: usize,
    seed: u64,
    grid: u64,
    max_len: usize,
}

impl Sampler {
    /// Runs `check` on each sampled lasso and reports how many passed.
    fn run(&self, r: &PlanarRelation, check: impl Fn(&Lasso<Rational>) -> Result<bool>) -> Result<Observation> {
        let mut g = rng(self.seed);
        let mut passed = 0;
        let mut first_failure = Value::Null;
        let mut unsampled = 0;
        for _ in 0..self.samples {
            let Some(p) = random_pseudo_orbit(r, &self.delta, self.mode, self.grid, self.max_len, &mut g) else {
                unsampled += 1;
                continue;
            };
            if check(&p)? {
                passed += 1;
            } else if first_failure.is_null() {
                first_failure = rational_lasso(&p);
            }
        }
        Ok(Observation::holds_if(
            passed == self.samples,
            json!({
                "samples": self.samples,
                "seed": self.seed,
                "delta": q(&self.delta),
                "passed": passed,
                "unsampled": unsampled,
                "firstFailure": first_failure,
            }),
        ))
    }
}

pub fn comb(teeth: usize) -> Result<GalleryItem> {
    comb_with(teeth, 50, 0)
}

/// `2/(2m+1)` with `m = ⌈1/δ⌉`: at most `δ`, never `0` and never of the
/// form `1/n`, so `G(x) = {0}` in every truncation.
fn off_tooth(delta: &Rational) -> Rational {
    let m = (int(1) / delta).ceil().to_integer();
    Rational::new(2.into(), m * 2 + 1)
}

pub(crate) fn comb_with(teeth: usize, samples: usize, seed: u64) -> Result<GalleryItem> {
    if teeth < 2 {
        return Err(Error::Argument(format!("the comb needs at least 2 teeth, got {teeth}")));
    }
    let r = Arc::new(comb_relation(teeth)?);
    let mut claims = Vec::new();

    let rr = r.clone();
    claims.push(Claim::new("structural:nd-set", Outcome::Holds, "nondegenerate = [0,1]", "the base makes every point non-degenerate", move || {
        let nd = rr.nondegenerate();
        Ok(Observation::holds_if(nd == IntervalSet::closed(int(0), int(1)), json!({ "nd": set_json(&nd) })))
    }));

    let rr = r.clone();
    claims.push(Claim::new(
        "1,1",
        Outcome::Fails,
        "universal_filter on (x | x), eps = 1/4, x = 2/(2m+1) <= delta",
        "constant pseudo-orbit at a non-tooth abscissa; every shadower reaches 0 and then the whole tooth",
        move || {
            let eps = ratio(1, 4);
            let mut runs = Vec::new();
            let mut refuted = true;
            for delta in [ratio(1, 50), ratio(1, 1000)] {
                let x = off_tooth(&delta);
                let p = Lasso::constant(x.clone());
                let orbit = is_pseudo_orbit(&rr, &p, &delta, Mode::Every);
                let (set, status) = universal_filter(&rr, &p, &eps, DEFAULT_PASSES)?;
                refuted &= orbit && set.is_empty() && status == FilterStatus::Exact;
                runs.push(json!({
                    "delta": q(&delta),
                    "lasso": rational_lasso(&p),
                    "pseudoOrbit": orbit,
                    "shadowers": set_json(&set),
                    "exact": status == FilterStatus::Exact,
                }));
            }
            Ok(Observation::fails_if(refuted, json!({ "eps": q(&eps), "runs": runs })))
        },
    ));

    let rr = r.clone();
    let sampler = Sampler { delta: ratio(1, 10), mode: Mode::Exists, samples, seed, grid: 60, max_len: 8 };
    claims.push(
        Claim::new(
            "2,2",
            Outcome::Holds,
            format!("forward_filter certifies a shadower on {samples} random (1/10,2)-lassos, eps = 1/5, seed {seed}"),
            "the shadower built from the nearest tooth",
            move || {
                let eps = ratio(1, 5);
                sampler.run(&rr, |p| Ok(forward_filter(&rr, p, &eps)?.verdict == ForwardVerdict::ShadowerExists))
            },
        )
        .sampled(),
    );

    Ok(GalleryItem {
        name: "comb".into(),
        system: GallerySystem::Planar((*r).clone()),
        claims,
        notes: vec![format!("{teeth} teeth; verdicts are for this truncation")],
    })
}

pub fn diag_plus_line(c: &Rational) -> Result<GalleryItem> {
    diag_plus_line_with(c, 3, 100, 0)
}

/// The staircase from `c` to the far endpoint `e` in `n` steps, with the
/// radius `|e - c| / 2` at which it cannot be shadowed.
pub fn staircase(c: &Rational, n: usize) -> (Lasso<Rational>, Rational, Rational) {
    let e = if *c <= ratio(1, 2) { int(1) } else { int(0) };
    let step = (&e - c) / int(n as i64);
    let prefix: Vec<Rational> = (0..n as i64).map(|k| c + &step * int(k)).collect();
    let h = rational::abs_diff(&e, c);
    (Lasso::new(prefix, vec![e]).expect("non-empty cycle"), rational::half(&h), h / int(n as i64))
}

pub(crate) fn diag_plus_line_with(c: &Rational, n: usize, samples: usize, seed: u64) -> Result<GalleryItem> {
    if !IntervalSet::closed(int(0), int(1)).contains(c) {
        return Err(Error::Argument(format!("c = {} is outside [0, 1]", rational::format(c))));
    }
    if n < 2 {
        return Err(Error::Argument(format!("the staircase needs at least 2 steps, got {n}")));
    }
    let r = Arc::new(diag_plus_line_relation(c)?);
    let mut claims = Vec::new();

    let rr = r.clone();
    let cc = c.clone();
    claims.push(Claim::new(
        "2,2",
        Outcome::Fails,
        format!("forward_filter on the {n}-step staircase"),
        "staircase from c to the far endpoint; a shadower stays put or drops to c",
        move || {
            let (p, eps, delta) = staircase(&cc, n);
            let orbit = is_pseudo_orbit(&rr, &p, &delta, Mode::Exists);
            let verdict = forward_filter(&rr, &p, &eps)?.verdict;
            let empty_at = match verdict {
                ForwardVerdict::NoShadower(k) => Some(k),
                _ => None,
            };
            Ok(Observation::fails_if(
                orbit && empty_at.is_some(),
                json!({
                    "lasso": rational_lasso(&p),
                    "eps": q(&eps),
                    "delta": q(&delta),
                    "pseudoOrbit": orbit,
                    "noShadowerAt": empty_at,
                }),
            ))
        },
    ));

    let rr = r.clone();
    let cc = c.clone();
    let eps = ratio(1, 4);
    let sampler = Sampler { delta: &eps / int(3), mode: Mode::Every, samples, seed, grid: 48, max_len: 8 };
    claims.push(
        Claim::new(
            "1,1",
            Outcome::Holds,
            format!("c lies in universal_filter on {samples} random (1/12,1)-lassos, eps = 1/4, seed {seed}"),
            "every term of a (delta,1)-pseudo-orbit is within 2 delta of c, so c shadows",
            move || {
                sampler.run(&rr, |p| {
                    let (set, status) = universal_filter(&rr, p, &eps, DEFAULT_PASSES)?;
                    Ok(status == FilterStatus::Exact && set.contains(&cc))
                })
            },
        )
        .sampled(),
    );

    let cc = c.clone();
    claims.push(Claim::new(
        "shift-shadowing",
        Outcome::Fails,
        format!("closing_example_check_at(c, {n})"),
        "constant sequences climbing from c to the far endpoint",
        move || {
            let report = closing_example_check_at(&cc, n as u64)?;
            Ok(Observation::fails_if(
                report.steps_within_bound && report.no_shadower,
                serde_json::to_value(&report).expect("reports serialize"),
            ))
        },
    ));

    Ok(GalleryItem {
        name: "diag_plus_line".into(),
        system: GallerySystem::Planar((*r).clone()),
        claims,
        notes: vec![format!("c = {}", rational::format(c))],
    })
}

pub fn powers_counterexample() -> Result<GalleryItem> {
    let r = Arc::new(powers_relation()?);
    let square = Arc::new(r.power(2));
    let mut claims = Vec::new();

    let (rr, sq) = (r.clone(), square.clone());
    claims.push(Claim::new(
        "structural:square",
        Outcome::Holds,
        "power(2) and then() against the stated square",
        "the displayed square of the relation",
        move || {
            let stated = powers_square_stated()?;
            let composed = rr.then(&rr);
            let ok = sq.set_eq(&stated) && composed.set_eq(&stated);
            Ok(Observation::holds_if(ok, json!({ "composed": composed.to_doc(), "stated": stated.to_doc() })))
        },
    ));

    let rr = r.clone();
    claims.push(Claim::new("structural:legal", Outcome::Holds, "legal_iterate", "ND(G) = [0,3/4] ∪ {2}", move || {
        let (legal, converged, iterations) = rr.legal_iterate(DEFAULT_PASSES);
        let expected = IntervalSet::closed(int(0), ratio(1, 4))
            .union(&IntervalSet::closed(ratio(1, 2), ratio(3, 4)))
            .union(&IntervalSet::point(int(2)));
        let nd = rr.nondegenerate();
        let nd_expected = IntervalSet::closed(int(0), ratio(3, 4)).union(&IntervalSet::point(int(2)));
        Ok(Observation::holds_if(
            converged && legal == expected && nd == nd_expected,
            json!({ "nd": set_json(&nd), "legal": set_json(&legal), "iterations": iterations }),
        ))
    }));

    for j in [Mode::Every, Mode::Exists] {
        let rr = r.clone();
        claims.push(Claim::new(
            format!("1,{}", j.index()),
            Outcome::Holds,
            "pseudo-orbit successor sets for delta in {1/8, 1/5}; filters on (2 | 2)",
            "(2, 2, ...) is the only (delta,1)-pseudo-orbit for delta < 1/4",
            move || powers_only_orbit(&rr, j),
        ));
    }

    for j in [Mode::Every, Mode::Exists] {
        let sq = square.clone();
        claims.push(Claim::new(
            format!("square:1,{}", j.index()),
            Outcome::Fails,
            match j {
                Mode::Every => "universal_filter on (1/32, ..., 8/32 | 8/32), eps = 1/16",
                Mode::Exists => "forward_filter on (1/32, ..., 8/32 | 8/32), eps = 1/16",
            },
            "arithmetic progression to 1/4; a shadower within 1/16 of both ends cannot exist",
            move || {
                let eps = ratio(1, 16);
                let delta = ratio(1, 32);
                let p = Lasso::new((1..8).map(|k| ratio(k, 32)).collect(), vec![ratio(8, 32)]).expect("non-empty cycle");
                let orbit = is_pseudo_orbit(&sq, &p, &delta, Mode::Every);
                let (refuted, detail) = match j {
                    Mode::Every => {
                        let (set, status) = universal_filter(&sq, &p, &eps, DEFAULT_PASSES)?;
                        (set.is_empty() && status == FilterStatus::Exact, json!({ "shadowers": set_json(&set) }))
                    }
                    Mode::Exists => {
                        let v = forward_filter(&sq, &p, &eps)?.verdict;
                        (matches!(v, ForwardVerdict::NoShadower(_)), json!({ "verdict": format!("{v:?}") }))
                    }
                };
                Ok(Observation::fails_if(
                    orbit && refuted,
                    json!({ "lasso": rational_lasso(&p), "eps": q(&eps), "delta": q(&delta), "pseudoOrbit": orbit, "filter": detail }),
                ))
            },
        ));
    }

    Ok(GalleryItem {
        name: "powers_counterexample".into(),
        system: GallerySystem::Planar((*r).clone()),
        claims,
        notes: vec!["claims prefixed `square:` concern the square of the relation".into()],
    })
}

/// Points of `[0,1/2]` have no `(δ,1)`-successor, points of `(1/2,3/4]`
/// only successors in `[0,1/2]`, so only the constant orbit at 2 is
/// infinite; 2 shadows it for every tested radius.
fn powers_only_orbit(r: &PlanarRelation, j: Mode) -> Result<Observation> {
    let nd = r.nondegenerate();
    let low = IntervalSet::closed(int(0), ratio(1, 2));
    let mid = IntervalSet::interval(crate::interval::Interval::new(ratio(1, 2), false, ratio(3, 4), true).expect("non-empty"));
    let mut ok = true;
    let mut runs = Vec::new();
    for delta in [ratio(1, 8), ratio(1, 5)] {
        let from_low = closed_ball(&int(1), &delta, r.domain()).intersection(&nd);
        let image = r.image(&mid)?;
        let reach = match (image.min(), image.max()) {
            (Some(lo), Some(hi)) => IntervalSet::closed(lo - &delta, hi + &delta).intersection(&nd),
            _ => IntervalSet::empty(),
        };
        let two = Lasso::constant(int(2));
        let stays = pseudo_orbit_successors(r, &int(2), &delta, Mode::Every) == IntervalSet::point(int(2));
        ok &= from_low.is_empty() && reach.is_subset(&low) && is_pseudo_orbit(r, &two, &delta, Mode::Every) && stays;
        runs.push(json!({
            "delta": q(&delta),
            "successorsOfLow": set_json(&from_low),
            "successorsOfMid": set_json(&reach),
            "twoIsolated": stays,
        }));
    }
    let two = Lasso::constant(int(2));
    let mut shadowed = Vec::new();
    for eps in [ratio(1, 2), ratio(1, 16), ratio(1, 1000)] {
        let hit = match j {
            Mode::Every => {
                let (set, status) = universal_filter(r, &two, &eps, DEFAULT_PASSES)?;
                status == FilterStatus::Exact && set.contains(&int(2))
            }
            Mode::Exists => forward_filter(r, &two, &eps)?.verdict == ForwardVerdict::ShadowerExists,
        };
        ok &= hit;
        shadowed.push(json!({ "eps": q(&eps), "shadowedBy2": hit }));
    }
    Ok(Observation::holds_if(ok, json!({ "runs": runs, "shadowing": shadowed })))
}

/// The finite system on `ND = {0, 1/2, 1}` carrying the pseudo-orbit and
/// trajectory structure of [`finite_nd_relation`].
pub fn finite_nd_reduction() -> Result<FiniteRelation> {
    let space = Arc::new(FiniteMetricSpace::line_from_coords(vec![int(0), ratio(1, 2), int(1)])?);
    FiniteRelation::new(space, [(0, 0), (1, 1), (2, 0), (2, 1)])
}

pub fn finite_nd_example() -> Result<GalleryItem> {
    let r = Arc::new(finite_nd_relation()?);
    let g = finite_nd_reduction()?;
    let points = || vec![int(0), ratio(1, 2), int(1)];
    let mut claims = Vec::new();

    let rr = r.clone();
    claims.push(Claim::new("structural:nd-set", Outcome::Holds, "nondegenerate and legal_iterate", "ND(G) is finite", move || {
        let nd = rr.nondegenerate();
        let (legal, converged, _) = rr.legal_iterate(DEFAULT_PASSES);
        let expected = IntervalSet::points(points());
        Ok(Observation::holds_if(nd == expected && converged && legal == expected, json!({ "nd": set_json(&nd), "legal": set_json(&legal) })))
    }));

    let (rr, gg) = (r.clone(), g.clone());
    claims.push(Claim::new(
        "structural:reduction",
        Outcome::Holds,
        "pseudo_orbit_successors vs the finite pseudo-orbit graph at every delta class, both modes; fibers vs finite images",
        "pseudo-orbits and legal trajectories live on the finite ND set",
        move || {
            let pts = points();
            let mut mismatches = Vec::new();
            for class in threshold_ladder(gg.space()).delta_classes() {
                for mode in [Mode::Every, Mode::Exists] {
                    let graph = PseudoOrbitGraph::new(&gg, &class.rep, mode);
                    for (x, px) in pts.iter().enumerate() {
                        let succ = pseudo_orbit_successors(&rr, px, &class.rep, mode);
                        for (y, py) in pts.iter().enumerate() {
                            if succ.contains(py) != graph.has_edge(x, y) {
                                mismatches.push(format!("delta {} mode {} edge {x}->{y}", rational::format(&class.rep), mode.index()));
                            }
                        }
                    }
                }
            }
            for (x, px) in pts.iter().enumerate() {
                let legal_image = rr.fiber(px).intersection(&IntervalSet::points(pts.clone()));
                let finite: IntervalSet = IntervalSet::points(gg.image(x).iter().map(|y| pts[y].clone()));
                if legal_image != finite {
                    mismatches.push(format!("image of {}", rational::format(px)));
                }
            }
            Ok(Observation::holds_if(mismatches.is_empty(), json!({ "mismatches": mismatches })))
        },
    ));

    for property in Property::ALL {
        let (rr, gg) = (r.clone(), g.clone());
        let fails = property == Property::new(Mode::Exists, Mode::Every);
        claims.push(Claim::new(
            property.to_string(),
            if fails { Outcome::Fails } else { Outcome::Holds },
            "decide_shadowing on the finite ND system",
            if fails { "1 has two trajectories, (1, 0, 0, ...) and (1, 1/2, 1/2, ...)" } else { "finite ND set" },
            move || {
                let v = decide_shadowing(&gg, property)?;
                let mut witness = v.to_json(&gg);
                if fails {
                    let a = Lasso::new(vec![int(1)], vec![int(0)]).expect("non-empty cycle");
                    let b = Lasso::new(vec![int(1)], vec![ratio(1, 2)]).expect("non-empty cycle");
                    let trajectory = |p: &Lasso<Rational>| p.steps().all(|(x, y)| rr.fiber(x).contains(y));
                    let gap = rational::abs_diff(a.at(1), b.at(1));
                    witness["trajectories"] = json!({
                        "a": rational_lasso(&a),
                        "b": rational_lasso(&b),
                        "bothTrajectories": trajectory(&a) && trajectory(&b),
                        "divergence": q(&gap),
                    });
                }
                Ok(Observation::holds_if(v.holds, witness))
            },
        ));
    }

    claims.push(implications_claim("nd-system", g));

    Ok(GalleryItem {
        name: "finite_nd_example".into(),
        system: GallerySystem::Planar((*r).clone()),
        claims,
        notes: Vec::new(),
    })
}
