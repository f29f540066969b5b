//! Seeded sampling of points and pseudo-orbit lassos on planar relations.

use num_bigint::BigInt;
use rand::Rng;

use crate::lasso::Lasso;
use crate::random::SystemRng;
use crate::rational::Rational;
use crate::shadow::Mode;

use super::filter::pseudo_orbit_successors;
use super::relation::PlanarRelation;
use super::set::IntervalSet;

/// A random point of `s` from the grid of step `1/grid`, falling back to
/// the set's own sample point when the grid misses it.
pub fn random_point(s: &IntervalSet, grid: u64, rng: &mut SystemRng) -> Option<Rational> {
    if s.is_empty() {
        return None;
    }
    let part = &s.parts()[rng.random_range(0..s.parts().len())];
    let g = Rational::from_integer(BigInt::from(grid));
    let lo = (part.lo() * &g).ceil().to_integer();
    let hi = (part.hi() * &g).floor().to_integer();
    let mut grid_points = Vec::new();
    let mut k = lo;
    while k <= hi {
        let x = Rational::new(k.clone(), BigInt::from(grid));
        if part.contains(&x) {
            grid_points.push(x);
        }
        k += 1;
    }
    if grid_points.is_empty() {
        return IntervalSet::interval(part.clone()).sample();
    }
    Some(grid_points.swap_remove(rng.random_range(0..grid_points.len())))
}

/// A random `(δ, i)`-pseudo-orbit lasso of length at most `max_len`,
/// built as a random walk on grid points that closes as soon as it can
/// step back onto an earlier term. `None` after repeated failed attempts.
pub fn random_pseudo_orbit(
    r: &PlanarRelation,
    delta: &Rational,
    mode: Mode,
    grid: u64,
    max_len: usize,
    rng: &mut SystemRng,
) -> Option<Lasso<Rational>> {
    let nd = r.nondegenerate();
    for _ in 0..200 {
        let mut walk = vec![random_point(&nd, grid, rng)?];
        while walk.len() <= max_len {
            let last = walk.last().expect("non-empty");
            let next = pseudo_orbit_successors(r, last, delta, mode);
            if next.is_empty() {
                break;
            }
            let back: Vec<usize> = (0..walk.len()).filter(|&j| next.contains(&walk[j])).collect();
            if !back.is_empty() && (walk.len() >= 2 || rng.random_bool(0.5)) && rng.random_bool(0.6) {
                let j = back[rng.random_range(0..back.len())];
                return Some(Lasso::new(walk[..j].to_vec(), walk[j..].to_vec()).expect("non-empty cycle"));
            }
            if walk.len() == max_len {
                break;
            }
            walk.push(random_point(&next, grid, rng)?);
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interval::filter::is_pseudo_orbit;
    use crate::interval::relation::Primitive;
    use crate::random::rng;
    use crate::rational::{int, ratio};

    #[test]
    fn sampled_lassos_are_pseudo_orbits() {
        let r = PlanarRelation::new(
            IntervalSet::closed(int(0), int(1)),
            vec![Primitive::Diag { i: (int(0), int(1)) }, Primitive::HLine { i: (int(0), int(1)), c: int(0) }],
        )
        .unwrap();
        let mut g = rng(4);
        for mode in [Mode::Every, Mode::Exists] {
            for _ in 0..20 {
                let p = random_pseudo_orbit(&r, &ratio(1, 10), mode, 40, 6, &mut g).unwrap();
                assert!(is_pseudo_orbit(&r, &p, &ratio(1, 10), mode), "{p:?}");
            }
        }
    }
}
