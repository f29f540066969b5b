//! JSON formats for finite systems.
//!
//! ```json
//! { "points": ["a", "b"],
//!   "metric": {"type": "line", "coords": {"a": "0", "b": "1/2"}},
//!   "relation": [["a", "b"], ["b", "b"]] }
//! ```
//!
//! The metric may instead be `{"type": "matrix", "dist": [["0","1"],["1","0"]]}`.
//! Numbers are decimal or `p/q` strings.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::interval::PlanarRelation;
use crate::metric::FiniteMetricSpace;
use crate::rational::{self, Rational};
use crate::relation::FiniteRelation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemDoc {
    pub points: Vec<String>,
    pub metric: MetricDoc,
    pub relation: Vec<[String; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase")]
pub enum MetricDoc {
    Line { coords: BTreeMap<String, String> },
    Matrix { dist: Vec<Vec<String>> },
}

impl SystemDoc {
    pub fn build(&self) -> Result<FiniteRelation> {
        let space = match &self.metric {
            MetricDoc::Line { coords } => {
                let xs = self
                    .points
                    .iter()
                    .map(|p| {
                        let text = coords
                            .get(p)
                            .ok_or_else(|| Error::Parse(format!("metric.coords: no coordinate for point `{p}`")))?;
                        rational::parse(text).map_err(|e| Error::Parse(format!("metric.coords.{p}: {e}")))
                    })
                    .collect::<Result<Vec<_>>>()?;
                if let Some(extra) = coords.keys().find(|k| !self.points.contains(k)) {
                    return Err(Error::Parse(format!("metric.coords: `{extra}` is not a listed point")));
                }
                FiniteMetricSpace::on_line(self.points.clone(), xs)?
            }
            MetricDoc::Matrix { dist } => {
                let d = dist
                    .iter()
                    .enumerate()
                    .map(|(r, row)| {
                        row.iter()
                            .enumerate()
                            .map(|(c, t)| rational::parse(t).map_err(|e| Error::Parse(format!("metric.dist[{r}][{c}]: {e}"))))
                            .collect::<Result<Vec<_>>>()
                    })
                    .collect::<Result<Vec<_>>>()?;
                FiniteMetricSpace::from_matrix(self.points.clone(), d)?
            }
        };
        let space = Arc::new(space);
        let pairs = self
            .relation
            .iter()
            .enumerate()
            .map(|(k, [a, b])| {
                let id = |l: &str| space.index_of(l).map_err(|e| Error::Parse(format!("relation[{k}]: {e}")));
                Ok((id(a)?, id(b)?))
            })
            .collect::<Result<Vec<_>>>()?;
        FiniteRelation::new(space.clone(), pairs)
    }

    pub fn from_relation(g: &FiniteRelation) -> Self {
        let space = g.space();
        let metric = match space.coords() {
            Some(xs) => MetricDoc::Line {
                coords: space
                    .labels()
                    .iter()
                    .zip(xs)
                    .map(|(l, x)| (l.clone(), rational::format(x)))
                    .collect(),
            },
            None => MetricDoc::Matrix {
                dist: space
                    .points()
                    .map(|x| space.points().map(|y| rational::format(space.dist(x, y))).collect())
                    .collect(),
            },
        };
        SystemDoc {
            points: space.labels().to_vec(),
            metric,
            relation: g
                .pairs()
                .into_iter()
                .map(|(x, y)| [space.label(x).to_string(), space.label(y).to_string()])
                .collect(),
        }
    }
}

/// Parses a finite system; serde errors carry line and column.
pub fn parse_system(text: &str) -> Result<FiniteRelation> {
    let doc: SystemDoc = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    doc.build()
}

pub fn system_to_json(g: &FiniteRelation) -> serde_json::Value {
    serde_json::to_value(SystemDoc::from_relation(g)).expect("systems serialize")
}

/// Embeds a finite system on the line as a planar relation of isolated
/// points.
pub fn finite_to_planar(g: &FiniteRelation) -> Result<PlanarRelation> {
    let coords = g
        .space()
        .coords()
        .ok_or_else(|| Error::Argument("only systems with line coordinates embed in the plane".into()))?;
    PlanarRelation::from_points(coords, &g.pairs())
}

/// Recovers a finite system from a planar relation made only of isolated
/// points; the domain must be a finite set of points.
pub fn planar_to_finite(r: &PlanarRelation) -> Result<FiniteRelation> {
    if r.domain().parts().iter().any(|p| !p.is_point()) {
        return Err(Error::Argument("the domain has interval components".into()));
    }
    let coords: Vec<Rational> = r.domain().parts().iter().map(|p| p.lo().clone()).collect();
    let space = Arc::new(FiniteMetricSpace::line_from_coords(coords.clone())?);
    let mut pairs = Vec::new();
    for (x, c) in coords.iter().enumerate() {
        for part in r.fiber(c).parts() {
            let y = coords
                .iter()
                .position(|d| d == part.lo())
                .ok_or_else(|| Error::Domain(format!("{part:?} is not a domain point")))?;
            pairs.push((x, y));
        }
    }
    FiniteRelation::new(space, pairs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::testing::three_point;

    #[test]
    fn line_and_matrix_formats() {
        let text = r#"{"points":["a","b"],"metric":{"type":"line","coords":{"a":"0","b":"1/2"}},"relation":[["a","b"],["b","b"]]}"#;
        let g = parse_system(text).unwrap();
        assert_eq!(g.len(), 2);
        assert_eq!(parse_system(&system_to_json(&g).to_string()).unwrap(), g);
        let m = r#"{"points":["a","b"],"metric":{"type":"matrix","dist":[["0","0.5"],["0.5","0"]]},"relation":[["a","a"]]}"#;
        let h = parse_system(m).unwrap();
        assert_eq!(parse_system(&system_to_json(&h).to_string()).unwrap(), h);
    }

    #[test]
    fn diagnostics() {
        let bad = r#"{"points":["a"],"metric":{"type":"line","coords":{"a":"x"}},"relation":[["a","a"]]}"#;
        assert!(parse_system(bad).unwrap_err().to_string().contains("metric.coords.a"));
        let unknown = r#"{"points":["a"],"metric":{"type":"line","coords":{"a":"0"}},"relation":[["a","z"]]}"#;
        assert!(parse_system(unknown).unwrap_err().to_string().contains("relation[0]"));
        let syntax = "{\n\"points\": [\n}";
        assert!(parse_system(syntax).unwrap_err().to_string().contains("line"));
    }

    #[test]
    fn planar_round_trip() {
        let g = three_point();
        let r = finite_to_planar(&g).unwrap();
        assert_eq!(planar_to_finite(&r).unwrap(), g);
    }
}
