//! Named examples, each bundled with claims that the engines can check.
//!
//! Falsification claims are exact. Claims that a continuum system has a
//! property are checked on seeded random pseudo-orbits and say so
//! (`sampled: true`).

mod cantor;
mod continuum;
mod finite;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::interval::PlanarRelation;
use crate::io::system_to_json;
use crate::lasso::Lasso;
use crate::pointset::PointId;
use crate::rational::{self, Rational};
use crate::relation::FiniteRelation;
use crate::shadow::{decide_all, implication_audit};

pub use cantor::{cantor_points, cantor_truncation, CantorItem};
pub use continuum::{
    comb, comb_relation, diag_plus_line, diag_plus_line_relation, finite_nd_example, finite_nd_reduction, finite_nd_relation,
    powers_counterexample, powers_relation, powers_square_stated, staircase,
};
pub use finite::{inverse_example, inverse_relation};

/// Item names accepted by [`build`], sorted.
pub const NAMES: [&str; 6] = [
    "cantor_truncation",
    "comb",
    "diag_plus_line",
    "finite_nd_example",
    "inverse_example",
    "powers_counterexample",
];

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Holds,
    Fails,
}

impl fmt::Display for Outcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Outcome::Holds => "holds",
            Outcome::Fails => "fails",
        })
    }
}

/// What a checker saw: the outcome and the evidence behind it.
#[derive(Clone, Debug)]
pub struct Observation {
    pub outcome: Outcome,
    pub witness: Value,
}

impl Observation {
    pub fn new(outcome: Outcome, witness: Value) -> Self {
        Observation { outcome, witness }
    }

    /// `Holds` when `ok`, `Fails` otherwise.
    pub fn holds_if(ok: bool, witness: Value) -> Self {
        Observation::new(if ok { Outcome::Holds } else { Outcome::Fails }, witness)
    }

    /// `Fails` when `refuted`, `Holds` otherwise.
    pub fn fails_if(refuted: bool, witness: Value) -> Self {
        Observation::holds_if(!refuted, witness)
    }
}

type Checker = Arc<dyn Fn() -> Result<Observation> + Send + Sync>;

#[derive(Clone)]
pub struct Claim {
    /// `i,j`, `shift-shadowing`, or a structural tag.
    pub property: String,
    pub expected: Outcome,
    /// Procedure name and parameters.
    pub checker: String,
    /// The argument the claim replays.
    pub provenance: String,
    pub sampled: bool,
    check: Checker,
}

impl Claim {
    pub fn new(
        property: impl Into<String>,
        expected: Outcome,
        checker: impl Into<String>,
        provenance: impl Into<String>,
        check: impl Fn() -> Result<Observation> + Send + Sync + 'static,
    ) -> Self {
        Claim {
            property: property.into(),
            expected,
            checker: checker.into(),
            provenance: provenance.into(),
            sampled: false,
            check: Arc::new(check),
        }
    }

    pub fn sampled(mut self) -> Self {
        self.sampled = true;
        self
    }

    pub fn run(&self) -> ClaimReport {
        let (observed, witness) = match (self.check)() {
            Ok(o) => (o.outcome.to_string(), o.witness),
            Err(e) => ("error".to_string(), json!({ "error": e.to_string() })),
        };
        ClaimReport {
            claim: self.property.clone(),
            expected: self.expected,
            passed: observed == self.expected.to_string(),
            observed,
            checker: self.checker.clone(),
            provenance: self.provenance.clone(),
            sampled: self.sampled,
            witness,
        }
    }
}

impl fmt::Debug for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Claim")
            .field("property", &self.property)
            .field("expected", &self.expected)
            .field("checker", &self.checker)
            .finish()
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClaimReport {
    pub claim: String,
    pub expected: Outcome,
    pub observed: String,
    pub passed: bool,
    pub checker: String,
    pub provenance: String,
    pub sampled: bool,
    pub witness: Value,
}

#[derive(Clone, Debug)]
pub enum GallerySystem {
    Finite(FiniteRelation),
    Planar(PlanarRelation),
}

impl GallerySystem {
    pub fn to_json(&self) -> Value {
        match self {
            GallerySystem::Finite(g) => json!({ "finite": system_to_json(g) }),
            GallerySystem::Planar(r) => json!({ "planar": r.to_doc() }),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GalleryItem {
    pub name: String,
    pub system: GallerySystem,
    pub claims: Vec<Claim>,
    pub notes: Vec<String>,
}

impl GalleryItem {
    pub fn run(&self) -> GalleryReport {
        let claims: Vec<ClaimReport> = self.claims.par_iter().map(Claim::run).collect();
        GalleryReport {
            name: self.name.clone(),
            passed: claims.iter().all(|c| c.passed),
            system: self.system.to_json(),
            claims,
            notes: self.notes.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct GalleryReport {
    pub name: String,
    pub passed: bool,
    pub system: Value,
    pub claims: Vec<ClaimReport>,
    pub notes: Vec<String>,
}

/// Builds a named item. Parameters are `key=value` strings; unknown keys
/// are rejected.
pub fn build(name: &str, params: &BTreeMap<String, String>) -> Result<GalleryItem> {
    let p = Params::new(params);
    let item = match name {
        "comb" => {
            p.allow(&["n", "samples", "seed"])?;
            continuum::comb_with(p.usize("n", 100)?, p.usize("samples", 50)?, p.u64("seed", 0)?)?
        }
        "diag_plus_line" => {
            p.allow(&["c", "n", "samples", "seed"])?;
            continuum::diag_plus_line_with(
                &p.rational("c", "0")?,
                p.usize("n", 3)?,
                p.usize("samples", 100)?,
                p.u64("seed", 0)?,
            )?
        }
        "powers_counterexample" => {
            p.allow(&[])?;
            powers_counterexample()?
        }
        "finite_nd_example" => {
            p.allow(&[])?;
            finite_nd_example()?
        }
        "inverse_example" => {
            p.allow(&[])?;
            inverse_example()?
        }
        "cantor_truncation" => {
            p.allow(&["item", "depth"])?;
            let item = p.text("item", "item4").parse::<CantorItem>()?;
            cantor_truncation(item, p.usize("depth", 4)?)?
        }
        _ => return Err(Error::Argument(format!("unknown gallery item `{name}`; try one of {}", NAMES.join(", ")))),
    };
    Ok(item)
}

struct Params<'a>(&'a BTreeMap<String, String>);

impl<'a> Params<'a> {
    fn new(map: &'a BTreeMap<String, String>) -> Self {
        Params(map)
    }

    fn allow(&self, keys: &[&str]) -> Result<()> {
        match self.0.keys().find(|k| !keys.contains(&k.as_str())) {
            Some(k) => Err(Error::Argument(format!("unknown parameter `{k}`"))),
            None => Ok(()),
        }
    }

    fn text(&self, key: &str, default: &str) -> String {
        self.0.get(key).cloned().unwrap_or_else(|| default.to_string())
    }

    fn usize(&self, key: &str, default: usize) -> Result<usize> {
        match self.0.get(key) {
            Some(v) => v.trim().parse().map_err(|_| Error::Argument(format!("parameter `{key}` must be a non-negative integer, got `{v}`"))),
            None => Ok(default),
        }
    }

    fn u64(&self, key: &str, default: u64) -> Result<u64> {
        match self.0.get(key) {
            Some(v) => v.trim().parse().map_err(|_| Error::Argument(format!("parameter `{key}` must be a non-negative integer, got `{v}`"))),
            None => Ok(default),
        }
    }

    fn rational(&self, key: &str, default: &str) -> Result<Rational> {
        rational::parse(&self.text(key, default)).map_err(|e| Error::Argument(format!("parameter `{key}`: {e}")))
    }
}

pub(crate) fn q(x: &Rational) -> Value {
    Value::String(rational::format(x))
}

pub(crate) fn lasso_json<T: Clone + PartialEq>(p: &Lasso<T>, f: impl Fn(&T) -> String) -> Value {
    json!({
        "prefix": p.prefix().iter().map(&f).collect::<Vec<_>>(),
        "cycle": p.cycle().iter().map(&f).collect::<Vec<_>>(),
    })
}

pub(crate) fn rational_lasso(p: &Lasso<Rational>) -> Value {
    lasso_json(p, rational::format)
}

pub(crate) fn point_lasso(g: &FiniteRelation, p: &Lasso<PointId>) -> Value {
    lasso_json(p, |x| g.space().label(*x).to_string())
}

/// A claim that the four decided verdicts of a finite system respect the
/// implication diagram. The verdicts themselves go in the witness.
pub(crate) fn implications_claim(tag: &str, g: FiniteRelation) -> Claim {
    Claim::new(
        format!("implications:{tag}"),
        Outcome::Holds,
        "decide_all + implication_audit",
        "general implications between the four properties",
        move || {
            let verdicts = decide_all(&g)?;
            let audit = implication_audit(&verdicts)?;
            let recorded: BTreeMap<String, bool> = verdicts.iter().map(|v| (v.property.to_string(), v.holds)).collect();
            Ok(Observation::holds_if(audit.is_consistent(), json!({ "verdicts": recorded, "audit": audit })))
        },
    )
}
