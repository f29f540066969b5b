//! Exact set computation for relations on finite unions of rational
//! intervals and isolated points.

pub mod filter;
pub mod relation;
pub mod sample;
pub mod set;

pub use filter::{
    forward_filter, forward_filter_capped, is_pseudo_orbit, pseudo_orbit_successors, universal_filter, FilterStatus,
    ForwardReport, ForwardVerdict, DEFAULT_PASSES,
};
pub use relation::{PlanarDoc, PlanarRelation, Primitive, PrimitiveDoc};
pub use sample::{random_pseudo_orbit, random_point};
pub use set::{closed_ball, strict_ball, Interval, IntervalSet};
