//! Finite truncations of the middle-thirds Cantor set.

use std::str::FromStr;
use std::sync::Arc;

use serde_json::json;

use crate::error::{Error, Result};
use crate::lasso::Lasso;
use crate::metric::FiniteMetricSpace;
use crate::pointset::PointId;
use crate::rational::{self, int, ratio, Rational};
use crate::relation::FiniteRelation;
use crate::shadow::{existential_shadower, is_pseudo_orbit, universal_shadowers, Mode};

use super::{implications_claim, point_lasso, q, Claim, GalleryItem, GallerySystem, Observation, Outcome};

/// Systems up to this size also get their four verdicts decided.
const DECIDE_LIMIT: usize = 8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CantorItem {
    /// `Δ ∪ (X × {0}) ∪ ({0} × X)`.
    Item4,
    /// `Δ` plus two increasing chains, one in `[0, 1/9]` and one in `[2/9, 1/3]`.
    Item5,
}

impl FromStr for CantorItem {
    type Err = Error;

    /// Accepts `item4` or `item5`, optionally behind a `<tag>_` prefix.
    fn from_str(s: &str) -> Result<Self> {
        match s.rsplit('_').next().unwrap_or(s) {
            "item4" => Ok(CantorItem::Item4),
            "item5" => Ok(CantorItem::Item5),
            _ => Err(Error::Argument(format!("unknown Cantor item `{s}`; expected item4 or item5"))),
        }
    }
}

/// Endpoints of the `2^(depth-1)` intervals left after `depth - 1`
/// middle-third removals, sorted.
pub fn cantor_points(depth: usize) -> Result<Vec<Rational>> {
    if depth < 1 {
        return Err(Error::Argument("depth must be at least 1".into()));
    }
    let mut intervals = vec![(int(0), int(1))];
    for _ in 1..depth {
        intervals = intervals
            .into_iter()
            .flat_map(|(a, b)| {
                let third = (&b - &a) / int(3);
                [(a.clone(), &a + &third), (&b - &third, b)]
            })
            .collect();
    }
    let mut points: Vec<Rational> = intervals.into_iter().flat_map(|(a, b)| [a, b]).collect();
    points.dedup();
    Ok(points)
}

fn index(points: &[Rational], x: &Rational) -> PointId {
    points.binary_search(x).expect("a truncation point")
}

fn space(points: &[Rational]) -> Result<Arc<FiniteMetricSpace>> {
    Ok(Arc::new(FiniteMetricSpace::line_from_coords(points.to_vec())?))
}

pub fn cantor_truncation(item: CantorItem, depth: usize) -> Result<GalleryItem> {
    let points = cantor_points(depth)?;
    let (g, mut claims, mut notes) = match item {
        CantorItem::Item4 => item4(&points)?,
        CantorItem::Item5 => item5(&points)?,
    };
    notes.push(format!("depth {depth}: {} points; verdicts hold for this truncation only", points.len()));
    if depth > 1 {
        if g.space().len() <= DECIDE_LIMIT {
            claims.push(implications_claim("truncation", g.clone()));
        } else {
            notes.push(format!("verdicts not decided above {DECIDE_LIMIT} points"));
        }
    }
    Ok(GalleryItem {
        name: "cantor_truncation".into(),
        system: GallerySystem::Finite(g),
        claims,
        notes,
    })
}

type Parts = (FiniteRelation, Vec<Claim>, Vec<String>);

fn item4(points: &[Rational]) -> Result<Parts> {
    let sp = space(points)?;
    let n = points.len();
    let pairs = (0..n).flat_map(|x| [(x, x), (x, 0), (0, x)]);
    let g = FiniteRelation::new(sp.clone(), pairs)?;
    if n == 2 {
        let gg = g.clone();
        let claim = Claim::new("structural:degenerate", Outcome::Holds, "relation == X × X", "two points only", move || {
            Ok(Observation::holds_if(gg == FiniteRelation::full(gg.space_arc().clone()), json!({})))
        });
        return Ok((g, vec![claim], vec!["X = {0, 1}: the relation is X × X and the replay is skipped".into()]));
    }
    let smallest = points[1].clone();
    let delta = smallest.clone();
    let eps = ratio(1, 2);
    // Terms 2/3^k with 4/3^k <= δ that survive the truncation, then a
    // constant tail at the smallest positive point.
    let mut prefix = Vec::new();
    let mut term = int(2);
    while term >= smallest {
        if &term * int(2) <= delta {
            if let Ok(i) = points.binary_search(&term) {
                prefix.push(i);
            }
        }
        term /= int(3);
    }
    let p = Lasso::new(prefix, vec![index(points, &smallest)]).expect("non-empty cycle");

    let mut claims = Vec::new();
    let (gg, pp, e, d) = (g.clone(), p.clone(), eps.clone(), delta.clone());
    claims.push(Claim::new(
        "1,1",
        Outcome::Fails,
        "universal_shadowers of the geometric lasso, eps = 1/2",
        "geometric pseudo-orbit towards 0; every shadower reaches both 0 and 1 in two steps",
        move || {
            let orbit = is_pseudo_orbit(&gg, &pp, &d, Mode::Every);
            let shadowers = universal_shadowers(&gg, &pp, &e);
            Ok(Observation::fails_if(
                orbit && shadowers.is_empty(),
                json!({ "lasso": point_lasso(&gg, &pp), "eps": q(&e), "delta": q(&d), "pseudoOrbit": orbit, "shadowers": shadowers.len() }),
            ))
        },
    ));
    let gg = g.clone();
    claims.push(Claim::new(
        "structural:triangle",
        Outcome::Holds,
        "0 and 1 lie in G²(y) for every y, and d(0,1) = 1 >= 2 eps",
        "the triangle inequality would give d(0,1) < 1",
        move || {
            let sq = gg.power(2);
            let top = gg.space().len() - 1;
            let all = gg.space().points().all(|y| sq.contains(y, 0) && sq.contains(y, top));
            let d = gg.space().dist(0, top).clone();
            Ok(Observation::holds_if(all && d >= &eps * int(2), json!({ "d01": q(&d), "twiceEps": q(&(&eps * int(2))) })))
        },
    ));
    Ok((g, claims, Vec::new()))
}

fn item5(points: &[Rational]) -> Result<Parts> {
    let sp = space(points)?;
    let g_diag = || (0..points.len()).map(|x| (x, x));
    if points.len() == 2 {
        let g = FiniteRelation::new(sp, g_diag())?;
        return Ok((g, Vec::new(), vec!["X = {0, 1}: no point lies in [2/9, 1/3], so the replay is skipped".into()]));
    }
    let within = |lo: Rational, hi: Rational| -> Vec<PointId> {
        points.iter().enumerate().filter(|(_, x)| **x >= lo && **x <= hi).map(|(i, _)| i).collect()
    };
    let a = within(int(0), ratio(1, 9));
    let b = within(ratio(2, 9), ratio(1, 3));
    let chain = |c: &[PointId]| c.windows(2).map(|w| (w[0], w[1])).collect::<Vec<_>>();
    let g = FiniteRelation::new(sp, g_diag().chain(chain(&a)).chain(chain(&b)))?;

    let eps = ratio(1, 27);
    let mut prefix: Vec<PointId> = a.clone();
    prefix.extend(&b[..b.len() - 1]);
    let p = Lasso::new(prefix, vec![*b.last().expect("1/3 is a truncation point")]).expect("non-empty cycle");
    // The largest step, attained at the splice from the a-chain to the b-chain.
    let delta = p.steps().map(|(x, y)| g.space().dist(*x, *y).clone()).max().expect("at least one step");

    let mut claims = Vec::new();
    let (gg, pp, e, d) = (g.clone(), p.clone(), eps.clone(), delta.clone());
    claims.push(Claim::new(
        "2,2",
        Outcome::Fails,
        "existential_shadower of the spliced lasso, eps = 1/27",
        "a-chain spliced onto the b-chain; a shadower starts near 0 and never leaves the a-chain",
        move || {
            let orbit = is_pseudo_orbit(&gg, &pp, &d, Mode::Exists);
            let shadower = existential_shadower(&gg, &pp, &e);
            Ok(Observation::fails_if(
                orbit && shadower.is_none(),
                json!({ "lasso": point_lasso(&gg, &pp), "eps": q(&e), "delta": q(&d), "pseudoOrbit": orbit, "shadower": shadower }),
            ))
        },
    ));

    let (gg, pts) = (g.clone(), points.to_vec());
    claims.push(Claim::new(
        "structural:chain",
        Outcome::Holds,
        "forward orbit of the 1/27-ball at 0, and d(1/3, 0) against 1/27 + 1/27 + its reach",
        "1/3 <= 1/27 + 1/27 + 2/9 = 8/27 is a contradiction",
        move || {
            let start = gg.space().ball(0, gg.space().open_rank(&eps));
            let mut reach = start.clone();
            loop {
                let next = reach.union(&gg.image_of(&reach));
                if next == reach {
                    break;
                }
                reach = next;
            }
            let far = reach.iter().map(|x| pts[x].clone()).max().expect("0 is reachable");
            let third = ratio(1, 3);
            let near_third = pts.iter().any(|x| rational::abs_diff(x, &third) < eps);
            let bound = &eps + &eps + &far;
            let stated = &eps + &eps + ratio(2, 9);
            Ok(Observation::holds_if(
                near_third && bound < third && stated < third && far <= ratio(2, 9),
                json!({ "reach": q(&far), "bound": q(&bound), "statedBound": q(&stated) }),
            ))
        },
    ));
    Ok((g, claims, vec!["the a-chain stops at 1/9: no point of the set lies strictly between 1/9 and 2/9".into()]))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn points_by_depth() {
        assert_eq!(cantor_points(1).unwrap(), vec![int(0), int(1)]);
        assert_eq!(cantor_points(2).unwrap(), vec![int(0), ratio(1, 3), ratio(2, 3), int(1)]);
        let p4 = cantor_points(4).unwrap();
        assert_eq!(p4.len(), 16);
        assert_eq!(p4[1], ratio(1, 27));
        assert!(cantor_points(0).is_err());
    }

    #[test]
    fn item_names() {
        assert_eq!("item4".parse::<CantorItem>().unwrap(), CantorItem::Item4);
        assert_eq!("x_item5".parse::<CantorItem>().unwrap(), CantorItem::Item5);
        assert!("item6".parse::<CantorItem>().is_err());
    }
}
