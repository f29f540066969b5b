//! Items on finite metric spaces.

use std::sync::Arc;

use crate::error::Result;
use crate::metric::FiniteMetricSpace;
use crate::rational::int;
use crate::relation::FiniteRelation;
use crate::shadow::{decide_shadowing, Mode, Property};

use super::{implications_claim, Claim, GalleryItem, GallerySystem, Observation, Outcome};

/// `X = {-1, 0, 1}` on the line, `G = {(1,1), (1,0), (-1,0), (-1,-1)}`.
pub fn inverse_relation() -> Result<FiniteRelation> {
    let space = Arc::new(FiniteMetricSpace::line_from_coords(vec![int(-1), int(0), int(1)])?);
    FiniteRelation::from_labels(space, [("1", "1"), ("1", "0"), ("-1", "0"), ("-1", "-1")])
}

fn decided(tag: &str, g: &FiniteRelation, property: Property, expected: Outcome, provenance: &str) -> Claim {
    let g = g.clone();
    let label = if tag.is_empty() { property.to_string() } else { format!("{tag}:{property}") };
    Claim::new(label, expected, "decide_shadowing", provenance, move || {
        let v = decide_shadowing(&g, property)?;
        Ok(Observation::holds_if(v.holds, v.to_json(&g)))
    })
}

pub fn inverse_example() -> Result<GalleryItem> {
    let g = inverse_relation()?;
    let inv = g.inverse();
    let p21 = Property::new(Mode::Exists, Mode::Every);
    let mut claims = vec![
        decided("", &g, p21, Outcome::Holds, "every point of G has a unique trajectory"),
        decided("inverse", &inv, p21, Outcome::Fails, "0 has two trajectories under the inverse"),
    ];
    for property in [
        Property::new(Mode::Every, Mode::Every),
        Property::new(Mode::Exists, Mode::Exists),
        Property::new(Mode::Every, Mode::Exists),
    ] {
        claims.push(decided("", &g, property, Outcome::Holds, "finite non-degenerate set"));
        claims.push(decided("inverse", &inv, property, Outcome::Holds, "finite non-degenerate set"));
    }
    claims.push(implications_claim("relation", g.clone()));
    claims.push(implications_claim("inverse", inv));
    Ok(GalleryItem {
        name: "inverse_example".into(),
        system: GallerySystem::Finite(g),
        claims,
        notes: vec!["claims prefixed `inverse:` concern the inverse relation".into()],
    })
}
