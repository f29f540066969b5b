//! Verdicts, their JSON form, and independent re-verification.

use std::collections::hash_map::DefaultHasher;
use std::hash::{Hash, Hasher};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lasso::Lasso;
use crate::pointset::PointId;
use crate::rational::{self, Rational};
use crate::relation::FiniteRelation;

use super::graph::PseudoOrbitGraph;
use super::ladder::threshold_ladder;
use super::oracle::falsify_bounded;
use super::shadowers::Tracker;
use super::{Mode, Property};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScheduleEntry {
    pub eps: Rational,
    pub delta: Rational,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Verdict {
    pub property: Property,
    pub holds: bool,
    /// On success, a sufficient `δ` for each `ε` class representative.
    pub schedule: Vec<ScheduleEntry>,
    pub epsilon_star: Option<Rational>,
    pub witness: Option<Lasso<PointId>>,
    system: u64,
}

/// Identifies the system a verdict was computed for.
pub(crate) fn fingerprint(g: &FiniteRelation) -> u64 {
    let mut h = DefaultHasher::new();
    g.space().labels().hash(&mut h);
    for x in g.space().points() {
        for y in g.space().points() {
            g.space().dist(x, y).hash(&mut h);
        }
    }
    g.pairs().hash(&mut h);
    h.finish()
}

impl Verdict {
    pub(crate) fn holding(property: Property, schedule: Vec<ScheduleEntry>, system: u64) -> Self {
        Verdict {
            property,
            holds: true,
            schedule,
            epsilon_star: None,
            witness: None,
            system,
        }
    }

    pub(crate) fn failing(property: Property, eps: Rational, witness: Lasso<PointId>, system: u64) -> Self {
        Verdict {
            property,
            holds: false,
            schedule: Vec::new(),
            epsilon_star: Some(eps),
            witness: Some(witness),
            system,
        }
    }

    /// A verdict without evidence, tagged with an arbitrary system id.
    pub fn summary(property: Property, holds: bool, system: u64) -> Self {
        Verdict {
            property,
            holds,
            schedule: Vec::new(),
            epsilon_star: None,
            witness: None,
            system,
        }
    }

    pub fn system(&self) -> u64 {
        self.system
    }

    pub fn to_doc(&self, g: &FiniteRelation) -> VerdictDoc {
        let label = |p: &PointId| g.space().label(*p).to_string();
        VerdictDoc {
            property: self.property.to_string(),
            holds: self.holds,
            epsilon_star: self.epsilon_star.as_ref().map(rational::format),
            witness: self.witness.as_ref().map(|w| WitnessDoc {
                prefix: w.prefix().iter().map(label).collect(),
                cycle: w.cycle().iter().map(label).collect(),
            }),
            schedule: self.holds.then(|| {
                self.schedule
                    .iter()
                    .map(|e| ScheduleDoc {
                        eps: rational::format(&e.eps),
                        delta: rational::format(&e.delta),
                    })
                    .collect()
            }),
        }
    }

    pub fn to_json(&self, g: &FiniteRelation) -> serde_json::Value {
        serde_json::to_value(self.to_doc(g)).expect("verdicts serialize")
    }

    pub fn from_doc(g: &FiniteRelation, doc: &VerdictDoc) -> Result<Self> {
        let property: Property = doc.property.parse()?;
        let ids = |v: &[String]| v.iter().map(|l| g.space().index_of(l)).collect::<Result<Vec<_>>>();
        let witness = doc
            .witness
            .as_ref()
            .map(|w| Lasso::new(ids(&w.prefix)?, ids(&w.cycle)?))
            .transpose()?;
        let schedule = doc
            .schedule
            .iter()
            .flatten()
            .map(|e| {
                Ok(ScheduleEntry {
                    eps: rational::parse(&e.eps)?,
                    delta: rational::parse(&e.delta)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Verdict {
            property,
            holds: doc.holds,
            schedule,
            epsilon_star: doc.epsilon_star.as_deref().map(rational::parse).transpose()?,
            witness,
            system: fingerprint(g),
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct VerdictDoc {
    pub property: String,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon_star: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<WitnessDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub schedule: Option<Vec<ScheduleDoc>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessDoc {
    pub prefix: Vec<String>,
    pub cycle: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScheduleDoc {
    pub eps: String,
    pub delta: String,
}

/// Re-checks a verdict without the search that produced it. A failing
/// verdict's witness must be a pseudo-orbit for every `δ` class and have no
/// shadowing point at `ε*`. Each schedule entry is spot-checked with the
/// bounded oracle.
pub fn reverify(g: &FiniteRelation, v: &Verdict) -> Result<()> {
    let bad = |m: String| Err(Error::Argument(format!("verdict {} does not re-verify: {m}", v.property)));
    if v.holds {
        let bound = 2 * g.space().len();
        for e in &v.schedule {
            if let Some(w) = falsify_bounded(g, v.property, &e.eps, &e.delta, bound) {
                return bad(format!("pseudo-orbit {w:?} is not shadowed at eps={}", rational::format(&e.eps)));
            }
        }
        return Ok(());
    }
    let (Some(eps), Some(w)) = (&v.epsilon_star, &v.witness) else {
        return bad("failing verdict lacks a witness".into());
    };
    for d in threshold_ladder(g.space()).delta_classes() {
        let graph = PseudoOrbitGraph::new(g, &d.rep, v.property.orbit);
        if !graph.accepts(w) {
            return bad(format!("witness is not a pseudo-orbit at delta={}", rational::format(&d.rep)));
        }
    }
    let tracker = Tracker::for_eps(g, eps);
    let shadowed = match v.property.shadow {
        Mode::Exists => tracker.existential(w).is_some(),
        Mode::Every => !tracker.universal(w).is_empty(),
    };
    if shadowed {
        return bad("witness has a shadowing point".into());
    }
    Ok(())
}
