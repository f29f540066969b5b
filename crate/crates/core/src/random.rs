//! Seeded generators of random finite systems.
//!
//! A system of size at most `size` has a uniform point count `n` in
//! `[2, size]` (1 when `size` is 1), points `k/size` on the line for a
//! random `n`-subset of `k` in `0..=size`, and each ordered pair included
//! with probability 1/2. Samples with an empty legal set are redrawn.

use std::sync::Arc;

use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::metric::FiniteMetricSpace;
use crate::pointset::{PointId, PointSet};
use crate::rational::ratio;
use crate::relation::FiniteRelation;

pub type SystemRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SystemRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn point_count(rng: &mut SystemRng, size: usize) -> usize {
    if size <= 2 {
        size.max(1)
    } else {
        rng.random_range(2..=size)
    }
}

/// `n` distinct points `k/size` on the line.
pub fn random_line_space(rng: &mut SystemRng, size: usize) -> Arc<FiniteMetricSpace> {
    let size = size.max(1);
    let n = point_count(rng, size);
    let mut ks: Vec<i64> = (0..=size as i64).collect();
    ks.shuffle(rng);
    let mut ks = ks[..n].to_vec();
    ks.sort_unstable();
    let coords = ks.iter().map(|&k| ratio(k, size as i64)).collect();
    Arc::new(FiniteMetricSpace::line_from_coords(coords).expect("distinct points"))
}

/// Random pairs on the space, together with the pairs of `base`.
fn random_relation(rng: &mut SystemRng, space: &Arc<FiniteMetricSpace>, base: &[(PointId, PointId)]) -> Option<FiniteRelation> {
    let n = space.len();
    let mut pairs = base.to_vec();
    for x in 0..n {
        for y in 0..n {
            if rng.random_bool(0.5) {
                pairs.push((x, y));
            }
        }
    }
    let g = FiniteRelation::new(space.clone(), pairs).ok()?;
    (!g.is_flagged()).then_some(g)
}

/// A random system with a non-empty legal set.
pub fn random_system(rng: &mut SystemRng, size: usize) -> FiniteRelation {
    loop {
        let space = random_line_space(rng, size);
        if let Some(g) = random_relation(rng, &space, &[]) {
            return g;
        }
    }
}

/// A random system whose relation contains the diagonal.
pub fn random_system_with_diagonal(rng: &mut SystemRng, size: usize) -> FiniteRelation {
    let space = random_line_space(rng, size);
    let diag: Vec<_> = space.points().map(|x| (x, x)).collect();
    random_relation(rng, &space, &diag).expect("the diagonal makes every point legal")
}

/// All distance-preserving permutations of a small space.
pub fn isometries(space: &FiniteMetricSpace) -> Vec<Vec<PointId>> {
    fn extend(space: &FiniteMetricSpace, partial: &mut Vec<PointId>, used: &mut PointSet, out: &mut Vec<Vec<PointId>>) {
        let x = partial.len();
        if x == space.len() {
            out.push(partial.clone());
            return;
        }
        for y in space.points() {
            if used.contains(y) || !(0..x).all(|z| space.dist(z, x) == space.dist(partial[z], y)) {
                continue;
            }
            partial.push(y);
            used.insert(y);
            extend(space, partial, used, out);
            used.remove(y);
            partial.pop();
        }
    }
    let mut out = Vec::new();
    extend(space, &mut Vec::new(), &mut space.empty_set(), &mut out);
    out
}

/// A random system containing the graph of a distance-preserving
/// permutation `f`, returned alongside `f`. Half of the samples use a
/// point set symmetric about its midpoint so that the reflection is
/// available.
pub fn random_system_with_isometry(rng: &mut SystemRng, size: usize) -> (FiniteRelation, Vec<PointId>) {
    let size = size.max(1);
    let space = if rng.random_bool(0.5) {
        let n = point_count(rng, size);
        let mut ks: Vec<i64> = (0..=size as i64 / 2).collect();
        ks.shuffle(rng);
        let mut coords: Vec<i64> = ks[..(n / 2).clamp(1, ks.len())].iter().flat_map(|&k| [k, size as i64 - k]).collect();
        coords.sort_unstable();
        coords.dedup();
        let coords = coords.into_iter().map(|k| ratio(k, size as i64)).collect();
        Arc::new(FiniteMetricSpace::line_from_coords(coords).expect("distinct points"))
    } else {
        random_line_space(rng, size)
    };
    let fs = isometries(&space);
    let f = fs.choose(rng).expect("identity is an isometry").clone();
    let graph: Vec<_> = f.iter().enumerate().map(|(x, &y)| (x, y)).collect();
    let g = random_relation(rng, &space, &graph).expect("a permutation graph makes every point legal");
    (g, f)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generation_is_seeded() {
        let a = random_system(&mut rng(7), 5);
        let b = random_system(&mut rng(7), 5);
        assert_eq!(a, b);
        assert!(!a.is_flagged());
        assert!((2..=5).contains(&a.space().len()));
    }

    #[test]
    fn constrained_generators() {
        let mut r = rng(3);
        for _ in 0..20 {
            assert!(random_system_with_diagonal(&mut r, 4).contains_diagonal());
            let (g, f) = random_system_with_isometry(&mut r, 4);
            assert!(g.space().is_isometry(&f));
            assert!(FiniteRelation::graph_of(g.space_arc().clone(), &f).is_subset(&g));
        }
        assert_eq!(random_system(&mut r, 1).space().len(), 1);
    }

    #[test]
    fn line_isometries() {
        let s = FiniteMetricSpace::line_from_coords(vec![ratio(0, 1), ratio(1, 2), ratio(1, 1)]).unwrap();
        assert_eq!(isometries(&s).len(), 2);
        let t = FiniteMetricSpace::line_from_coords(vec![ratio(0, 1), ratio(1, 3), ratio(1, 1)]).unwrap();
        assert_eq!(isometries(&t).len(), 1);
    }
}
