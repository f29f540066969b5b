//! Small fixtures shared by unit tests.

use std::sync::Arc;

use crate::metric::FiniteMetricSpace;
use crate::rational::int;
use crate::relation::FiniteRelation;

pub fn rel(space: &Arc<FiniteMetricSpace>, pairs: &[(&str, &str)]) -> FiniteRelation {
    FiniteRelation::from_labels(space.clone(), pairs.iter().copied()).unwrap()
}

/// `X = {-1, 0, 1}` on the line with `G = {(1,1),(1,0),(-1,0),(-1,-1)}`.
pub fn three_point() -> FiniteRelation {
    let space = Arc::new(FiniteMetricSpace::line_from_coords(vec![int(-1), int(0), int(1)]).unwrap());
    rel(&space, &[("1", "1"), ("1", "0"), ("-1", "0"), ("-1", "-1")])
}

/// Full relation on two points at distance 1.
pub fn k2() -> FiniteRelation {
    let space = Arc::new(FiniteMetricSpace::line_from_coords(vec![int(0), int(1)]).unwrap());
    FiniteRelation::full(space)
}
