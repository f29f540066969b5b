//! Exact decision of the four (i,j)-shadowing properties on finite systems.
//!
//! `i` selects the pseudo-orbit notion (1: every successor of `x_n` is
//! within `δ` of `x_{n+1}`; 2: some successor is), `j` the shadowing notion
//! (1: every trajectory of the shadowing point tracks within `ε`; 2: some
//! trajectory does). Pseudo-orbit bounds are non-strict, shadowing bounds
//! strict.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};

pub mod audit;
pub mod decide;
pub mod graph;
pub mod ladder;
pub mod oracle;
pub mod shadowers;
pub mod verdict;

pub use audit::{implication_audit, power_audit, AuditCheck, AuditReport};
pub use decide::{counterexample, decide_all, decide_shadowing};
pub use graph::{is_pseudo_orbit, pseudo_orbit_graph, PseudoOrbitGraph};
pub use ladder::{threshold_ladder, DeltaClass, EpsClass, ThresholdLadder};
pub use oracle::falsify_bounded;
pub use shadowers::{existential_shadower, universal_shadowers};
pub use verdict::{reverify, ScheduleEntry, Verdict};

/// Quantifier over successors or trajectories.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    /// Index 1: the condition must hold for every choice.
    Every,
    /// Index 2: the condition must hold for some choice.
    Exists,
}

impl Mode {
    pub fn index(self) -> u8 {
        match self {
            Mode::Every => 1,
            Mode::Exists => 2,
        }
    }

    pub fn from_index(i: u8) -> Result<Self> {
        match i {
            1 => Ok(Mode::Every),
            2 => Ok(Mode::Exists),
            _ => Err(Error::Argument(format!("mode must be 1 or 2, got {i}"))),
        }
    }
}

/// The (i,j)-shadowing property: `orbit` is `i`, `shadow` is `j`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Property {
    pub orbit: Mode,
    pub shadow: Mode,
}

impl Property {
    /// Report order used throughout: (2,1), (1,1), (2,2), (1,2).
    pub const ALL: [Property; 4] = [
        Property::new(Mode::Exists, Mode::Every),
        Property::new(Mode::Every, Mode::Every),
        Property::new(Mode::Exists, Mode::Exists),
        Property::new(Mode::Every, Mode::Exists),
    ];

    pub const fn new(orbit: Mode, shadow: Mode) -> Self {
        Property { orbit, shadow }
    }

    pub fn from_indices(i: u8, j: u8) -> Result<Self> {
        Ok(Property::new(Mode::from_index(i)?, Mode::from_index(j)?))
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{},{}", self.orbit.index(), self.shadow.index())
    }
}

impl FromStr for Property {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("property must look like `2,1`, got `{s}`"));
        let (a, b) = s.trim().split_once(',').ok_or_else(bad)?;
        let i = a.trim().parse::<u8>().map_err(|_| bad())?;
        let j = b.trim().parse::<u8>().map_err(|_| bad())?;
        Property::from_indices(i, j)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn property_text_round_trip() {
        for p in Property::ALL {
            assert_eq!(p.to_string().parse::<Property>().unwrap(), p);
        }
        assert!("3,1".parse::<Property>().is_err());
        assert!("21".parse::<Property>().is_err());
    }
}
