//! Exact decision and falsification of (i,j)-shadowing for dynamical
//! systems given by closed relations.
//!
//! Finite systems are decided exactly ([`shadow`]). Relations on finite
//! unions of rational intervals are handled by exact interval computation
//! ([`interval`]). Named examples with checkable claims live in
//! [`gallery`], Mahavier-product shift machinery in [`sft`].

pub mod error;
pub mod gallery;
pub mod interval;
pub mod io;
pub mod lasso;
pub mod metric;
pub mod pointset;
pub mod random;
pub mod rational;
pub mod relation;
pub mod sft;
pub mod shadow;

#[cfg(test)]
mod testing;

pub use error::{Error, Result};
pub use lasso::Lasso;
pub use metric::FiniteMetricSpace;
pub use pointset::{PointId, PointSet};
pub use rational::Rational;
pub use relation::FiniteRelation;
