//! The Mahavier dynamical system of a finite system: the space of all
//! trajectories with the shift map and the metric
//! `ρ(x, y) = Σ d(x_k, y_k) / 2^{k+1}`.
//!
//! With a finite legal set the trajectory space is a one-step shift of
//! finite type whose forbidden words are the non-edges between legal
//! points.

use std::collections::{BTreeSet, HashSet};

use num_traits::{One, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::interval::{strict_ball, IntervalSet};
use crate::lasso::Lasso;
use crate::pointset::{PointId, PointSet};
use crate::rational::{self, int, lcm, pow2_inv, ratio, Rational};
use crate::relation::FiniteRelation;

/// Forbidden two-letter words over the legal alphabet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ForbiddenWords {
    alphabet: PointSet,
    words: BTreeSet<(PointId, PointId)>,
}

impl ForbiddenWords {
    pub fn alphabet(&self) -> &PointSet {
        &self.alphabet
    }

    pub fn words(&self) -> &BTreeSet<(PointId, PointId)> {
        &self.words
    }

    pub fn forbids(&self, x: PointId, y: PointId) -> bool {
        self.words.contains(&(x, y))
    }

    /// Whether a finite word over the alphabet avoids every forbidden word.
    pub fn admits(&self, word: &[PointId]) -> bool {
        word.iter().all(|&x| self.alphabet.contains(x)) && word.windows(2).all(|w| !self.forbids(w[0], w[1]))
    }
}

/// `{xy : (x, y) ∉ G, x, y ∈ legal(G)}`.
pub fn forbidden_words(g: &FiniteRelation) -> Result<ForbiddenWords> {
    let legal = g.legal_set();
    if legal.is_empty() {
        return Err(Error::Flagged);
    }
    let words = legal
        .iter()
        .flat_map(|x| legal.iter().map(move |y| (x, y)))
        .filter(|&(x, y)| !g.contains(x, y))
        .collect();
    Ok(ForbiddenWords { alphabet: legal, words })
}

/// Whether the sequence avoids the forbidden words, checking the prefix,
/// one pass of the cycle and the wrap.
pub fn sft_member(w: &Lasso<PointId>, f: &ForbiddenWords) -> Result<bool> {
    if let Some(x) = w.terms().find(|&&x| !f.alphabet.contains(x)) {
        return Err(Error::Argument(format!("letter {x} is outside the alphabet")));
    }
    Ok(w.steps().all(|(&a, &b)| !f.forbids(a, b)))
}

/// Exact `ρ` for eventually periodic sequences under the distance `d`:
/// the terms before the joint preperiod are summed directly and the
/// periodic tail in closed form, `Σ_j c·2^{-jQ} = c / (1 - 2^{-Q})`.
pub fn rho_with<T: Clone + PartialEq>(a: &Lasso<T>, b: &Lasso<T>, d: impl Fn(&T, &T) -> Rational) -> Rational {
    let pre = a.prefix().len().max(b.prefix().len());
    let period = lcm(a.cycle().len(), b.cycle().len());
    let term = |k: usize| d(a.at(k), b.at(k)) * pow2_inv(k as u32 + 1);
    let head: Rational = (0..pre).map(term).sum();
    let block: Rational = (pre..pre + period).map(term).sum();
    let factor = Rational::one() / (Rational::one() - pow2_inv(period as u32));
    head + block * factor
}

/// Whether `ρ(a, b) <= bound` (or `< bound` when `strict`), stopping as
/// soon as a partial sum exceeds the bound.
fn rho_within<T: Clone + PartialEq>(
    a: &Lasso<T>,
    b: &Lasso<T>,
    d: impl Fn(&T, &T) -> Rational,
    bound: &Rational,
    strict: bool,
) -> bool {
    let mut partial = Rational::zero();
    for k in 0..a.len().max(b.len()) {
        partial += d(a.at(k), b.at(k)) * pow2_inv(k as u32 + 1);
        if partial > *bound || (strict && partial == *bound) {
            return false;
        }
    }
    let full = rho_with(a, b, d);
    if strict {
        full < *bound
    } else {
        full <= *bound
    }
}

/// `ρ` on a finite space.
pub fn rho(g: &FiniteRelation, a: &Lasso<PointId>, b: &Lasso<PointId>) -> Result<Rational> {
    let n = g.space().len();
    if a.terms().chain(b.terms()).any(|&x| x >= n) {
        return Err(Error::MismatchedSystems);
    }
    Ok(rho_with(a, b, |&x, &y| g.space().dist(x, y).clone()))
}

/// `ρ` for sequences of reals with `d(x, y) = |x - y|`.
pub fn rho_line(a: &Lasso<Rational>, b: &Lasso<Rational>) -> Rational {
    rho_with(a, b, rational::abs_diff)
}

/// `σ(⟨x_0, x_1, …⟩) = ⟨x_1, …⟩`.
pub fn shift_apply<T: Clone + PartialEq>(a: &Lasso<T>) -> Lasso<T> {
    a.shift()
}

/// Shift elements generated from allowed words of length `1..=m`: every
/// way of closing such a word into a lasso along an edge of `G_L`.
pub fn shift_elements(g: &FiniteRelation, m: usize) -> Vec<Lasso<PointId>> {
    let gl = g.legal_restriction();
    let mut out = BTreeSet::new();
    let mut frontier: Vec<Vec<PointId>> = g.legal_set().iter().map(|x| vec![x]).collect();
    for _ in 0..m {
        let mut next = Vec::new();
        for w in &frontier {
            let last = *w.last().expect("non-empty word");
            for j in 0..w.len() {
                if gl.contains(last, w[j]) {
                    out.insert(Lasso::new(w[..j].to_vec(), w[j..].to_vec()).expect("non-empty cycle").canonical());
                }
            }
            for y in gl.image(last).iter() {
                let mut v = w.clone();
                v.push(y);
                next.push(v);
            }
        }
        frontier = next;
    }
    out.into_iter().collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftDemoReport {
    pub k: u32,
    pub m: usize,
    #[serde(with = "rational::serde_text")]
    pub eps: Rational,
    #[serde(with = "rational::serde_text")]
    pub delta: Rational,
    pub elements: usize,
    pub pseudo_orbits: usize,
    pub shadowed: usize,
    /// Pseudo-orbits (as element index lassos) without a constructed shadower.
    pub failures: Vec<String>,
}

/// Bounded check of shift shadowing at `ε = 2^{-k}`, `δ = 2^{-(k+2)}`.
///
/// Elements are the sequences from [`shift_elements`]. Every
/// `δ`-pseudo-orbit of elements that is itself a lasso of length at most
/// `orbit_len` is tested against the candidate shadower built from the
/// first coordinates of its terms. This is a demonstration at bounded
/// precision, not a decision.
pub fn shift_shadowing_demo(g: &FiniteRelation, k: u32, m: usize, orbit_len: usize) -> Result<ShiftDemoReport> {
    if g.is_flagged() {
        return Err(Error::Flagged);
    }
    let eps = pow2_inv(k);
    let delta = pow2_inv(k + 2);
    let elems = shift_elements(g, m);
    let shifted: Vec<Lasso<PointId>> = elems.iter().map(shift_apply).collect();
    let d = |x: &PointId, y: &PointId| g.space().dist(*x, *y).clone();
    let step: Vec<Vec<bool>> = shifted
        .iter()
        .map(|s| elems.iter().map(|e| rho_within(s, e, d, &delta, false)).collect())
        .collect();

    let mut orbits: Vec<Lasso<usize>> = Vec::new();
    let mut seen = HashSet::new();
    let mut walks: Vec<Vec<usize>> = (0..elems.len()).map(|i| vec![i]).collect();
    for _ in 0..orbit_len {
        let mut next = Vec::new();
        for w in &walks {
            let last = *w.last().expect("non-empty walk");
            for j in 0..w.len() {
                if step[last][w[j]] {
                    let l = Lasso::new(w[..j].to_vec(), w[j..].to_vec()).expect("non-empty cycle").canonical();
                    if seen.insert(l.clone()) {
                        orbits.push(l);
                    }
                }
            }
            next.extend(
                (0..elems.len())
                    .filter(|&e| step[last][e])
                    .map(|e| {
                        let mut v = w.clone();
                        v.push(e);
                        v
                    }),
            );
        }
        walks = next;
    }

    let mut shadowed = 0;
    let mut failures = Vec::new();
    for orbit in &orbits {
        let z = orbit.map(|&e| *elems[e].at(0));
        let in_space = z.steps().all(|(&a, &b)| g.contains(a, b));
        let mut zn = z.clone();
        let mut tracks = true;
        for n in 0..orbit.len() {
            if !rho_within(&zn, &elems[*orbit.at(n)], d, &eps, true) {
                tracks = false;
                break;
            }
            zn = zn.shift();
        }
        if in_space && tracks {
            shadowed += 1;
        } else {
            failures.push(format!("{orbit:?}"));
        }
    }
    Ok(ShiftDemoReport {
        k,
        m,
        eps,
        delta,
        elements: elems.len(),
        pseudo_orbits: orbits.len(),
        shadowed,
        failures,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosingReport {
    pub n: u64,
    #[serde(with = "rational::serde_text")]
    pub c: Rational,
    #[serde(with = "rational::serde_text")]
    pub eps: Rational,
    /// `ρ(σ(x_m), x_{m+1})` for `m = 0..n`.
    #[serde(serialize_with = "serialize_rationals")]
    pub step_distances: Vec<Rational>,
    pub steps_within_bound: bool,
    /// Admissible first coordinates of a shadower that keeps its first
    /// coordinate, as a set.
    pub constraint: String,
    /// Whether a shadower that falls onto `c` could still track the end
    /// of the staircase.
    pub collapse_possible: bool,
    pub no_shadower: bool,
}

fn serialize_rationals<S: serde::Serializer>(v: &[Rational], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(v.iter().map(rational::format))
}

/// [`closing_example_check_at`] with `c = 0`.
pub fn closing_example_check(n: u64) -> Result<ClosingReport> {
    closing_example_check_at(&int(0), n)
}

/// For `G = (X × {c}) ∪ Δ_X` on `X = [0, 1]`, let `e` be the endpoint
/// farther from `c` and `h = |e - c|`. The constant sequences
/// `x_k = (c + k(e-c)/n, …)` for `k <= n`, then `(e, e, …)`, form an
/// `h/n`-pseudo-orbit of the shift. A shadower at `ε = h/4` has first
/// coordinate within `h/2` of `c`, and its `n`-th coordinate (either that
/// first coordinate or `c`) within `h/2` of `e`; neither is possible.
pub fn closing_example_check_at(c: &Rational, n: u64) -> Result<ClosingReport> {
    if n < 2 {
        return Err(Error::Argument(format!("n must be at least 2, got {n}")));
    }
    let unit = IntervalSet::closed(int(0), int(1));
    if !unit.contains(c) {
        return Err(Error::Argument(format!("c = {} is outside [0, 1]", rational::format(c))));
    }
    let e = if *c <= ratio(1, 2) { int(1) } else { int(0) };
    let h = rational::abs_diff(&e, c);
    let ni = n as i64;
    let step = (&e - c) / int(ni);
    let x = |k: i64| Lasso::constant(c + &step * int(k.min(ni)));
    let step_distances: Vec<Rational> = (0..ni).map(|m| rho_line(&shift_apply(&x(m)), &x(m + 1))).collect();
    let bound = &h / int(ni);
    let steps_within_bound = step_distances.iter().all(|d| *d <= bound);
    let eps = &h / int(4);
    let reach = rational::half(&h);
    let near_c = strict_ball(c, &reach, &unit);
    let near_e = strict_ball(&e, &reach, &unit);
    let constraint = near_c.intersection(&near_e);
    let collapse_possible = near_e.contains(c);
    Ok(ClosingReport {
        n,
        c: c.clone(),
        eps,
        step_distances,
        steps_within_bound,
        no_shadower: constraint.is_empty() && !collapse_possible,
        constraint: format!("{constraint:?}"),
        collapse_possible,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::{k2, rel, three_point};
    use std::sync::Arc;

    #[test]
    fn forbidden_examples() {
        let g = three_point();
        let f = forbidden_words(&g).unwrap();
        let m = g.space().index_of("-1").unwrap();
        let p = g.space().index_of("1").unwrap();
        assert_eq!(f.words().iter().copied().collect::<Vec<_>>(), vec![(m, p), (p, m)]);
        assert!(forbidden_words(&k2()).unwrap().words().is_empty());
        let d = FiniteRelation::diagonal(k2().space_arc().clone());
        assert_eq!(forbidden_words(&d).unwrap().words().len(), 2);
        assert!(sft_member(&Lasso::constant(p), &f).unwrap());
        assert!(!sft_member(&Lasso::new(vec![p], vec![m]).unwrap(), &f).unwrap());
        assert!(sft_member(&Lasso::new(vec![0], vec![1, 0]).unwrap(), &forbidden_words(&k2()).unwrap()).unwrap());
        let zero = g.space().index_of("0").unwrap();
        assert!(sft_member(&Lasso::constant(zero), &f).is_err());
    }

    #[test]
    fn rho_examples() {
        let g = three_point();
        assert_eq!(rho(&g, &Lasso::constant(0), &Lasso::constant(2)).unwrap(), int(2));
        let a = Lasso::new(vec![0], vec![1]).unwrap();
        let b = Lasso::constant(1);
        assert_eq!(rho(&g, &a, &b).unwrap(), ratio(1, 2));
        let alt = Lasso::new(vec![], vec![0, 2]).unwrap();
        // 0 + 2/4 + 0 + 2/16 + ... = 2/3 against the constant at -1.
        assert_eq!(rho(&g, &alt, &Lasso::constant(0)).unwrap(), ratio(2, 3));
    }

    #[test]
    fn closing_check() {
        for n in [2, 4, 8] {
            let r = closing_example_check(n).unwrap();
            assert!(r.step_distances.iter().all(|d| *d == ratio(1, n as i64)));
            assert!(r.steps_within_bound && r.no_shadower);
        }
        assert!(closing_example_check(1).is_err());
        let r = closing_example_check_at(&ratio(3, 4), 3).unwrap();
        assert_eq!(r.eps, ratio(3, 16));
        assert!(r.step_distances.iter().all(|d| *d == ratio(1, 4)));
        assert!(r.no_shadower);
        assert!(closing_example_check_at(&int(2), 3).is_err());
    }

    #[test]
    fn demo_examples() {
        let r = shift_shadowing_demo(&k2(), 3, 6, 2).unwrap();
        assert!(r.pseudo_orbits > 0);
        assert_eq!(r.shadowed, r.pseudo_orbits, "{:?}", r.failures);
        let r = shift_shadowing_demo(&three_point(), 3, 6, 2).unwrap();
        assert_eq!(r.shadowed, r.pseudo_orbits);
        let space = Arc::new(crate::FiniteMetricSpace::line_from_coords(vec![int(0), int(1)]).unwrap());
        let d = rel(&space, &[("0", "0"), ("1", "1")]);
        let r = shift_shadowing_demo(&d, 2, 4, 2).unwrap();
        assert_eq!(r.shadowed, r.pseudo_orbits);
    }
}
