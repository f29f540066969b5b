use std::collections::BTreeMap;

use rayon::prelude::*;
use serde_json::{json, Value};

use crshadow::gallery::{self, GalleryReport};
use crshadow::interval::{PlanarDoc, PlanarRelation};
use crshadow::io::{finite_to_planar, parse_system, planar_to_finite, system_to_json};
use crshadow::random::{random_system, rng};
use crshadow::rational::{self, Rational};
use crshadow::sft::{closing_example_check_at, shift_shadowing_demo};
use crshadow::shadow::verdict::VerdictDoc;
use crshadow::shadow::{
    counterexample, decide_all, decide_shadowing, falsify_bounded, implication_audit, power_audit, reverify, threshold_ladder,
    AuditReport, Verdict,
};
use crshadow::shadow::Property;
use crshadow::FiniteRelation;

use crate::report::{read_input, to_value, CmdResult, Failure, Outcome};
use crate::{AuditArgs, ConvertArgs, DecideArgs, Format, GalleryRunArgs, SearchArgs, ShiftClosingArgs, ShiftDemoArgs, Target};

fn load_system(path: &str, text: &str) -> CmdResult<FiniteRelation> {
    parse_system(text).map_err(|e| Failure::Input(format!("{path}: {e}")))
}

fn positive(name: &str, v: usize) -> CmdResult<()> {
    if v == 0 {
        return Err(Failure::Input(format!("--{name} must be positive")));
    }
    Ok(())
}

fn lasso_text(doc: &VerdictDoc) -> String {
    match &doc.witness {
        Some(w) => format!("({} \\| {})", w.prefix.join(" "), w.cycle.join(" ")),
        None => String::new(),
    }
}

pub fn decide_config(a: &DecideArgs, input_hash: &str, witness_hash: Option<&str>) -> Value {
    json!({
        "command": "decide",
        "input": a.input,
        "inputSha256": input_hash,
        "property": a.property.map(|p| p.to_string()),
        "inverse": a.inverse,
        "checkWitness": a.check_witness.as_ref().map(|p| json!({ "path": p, "sha256": witness_hash })),
        "format": a.format.name(),
    })
}

pub fn decide(a: &DecideArgs) -> CmdResult<(Value, Outcome)> {
    let (text, hash) = read_input(&a.input)?;
    let mut g = load_system(&a.input, &text)?;
    if a.inverse {
        g = g.inverse();
    }
    if let Some(path) = &a.check_witness {
        let (wtext, whash) = read_input(path)?;
        let config = decide_config(a, &hash, Some(&whash));
        return Ok((config, check_witness(&g, path, &wtext)?));
    }
    let config = decide_config(a, &hash, None);
    let verdicts: Vec<Verdict> = match a.property {
        Some(p) => vec![decide_shadowing(&g, p)?],
        None => decide_all(&g)?,
    };
    let docs: Vec<VerdictDoc> = verdicts.iter().map(|v| v.to_doc(&g)).collect();
    let mut md = String::from("| property | verdict | eps* | witness | schedule (eps: delta) |\n|---|---|---|---|---|\n");
    for d in &docs {
        let schedule = d
            .schedule
            .iter()
            .flatten()
            .map(|e| format!("{}: {}", e.eps, e.delta))
            .collect::<Vec<_>>()
            .join(", ");
        md.push_str(&format!(
            "| ({}) | {} | {} | {} | {} |\n",
            d.property,
            if d.holds { "holds" } else { "fails" },
            d.epsilon_star.as_deref().unwrap_or(""),
            lasso_text(d),
            schedule
        ));
    }
    let out = Outcome {
        body: json!({ "inverse": a.inverse, "verdicts": docs }),
        markdown: Some(md),
        ok: true,
    };
    Ok((config, out))
}

/// Accepts a full decide report, a bare list of verdicts, or one verdict.
fn verdict_docs(path: &str, text: &str) -> CmdResult<Vec<VerdictDoc>> {
    let v: Value = serde_json::from_str(text).map_err(|e| Failure::Input(format!("{path}: {e}")))?;
    let list = v
        .pointer("/report/verdicts")
        .or_else(|| v.get("verdicts"))
        .cloned()
        .unwrap_or(v);
    let list = match list {
        Value::Array(xs) => xs,
        one => vec![one],
    };
    list.into_iter()
        .enumerate()
        .map(|(k, x)| serde_json::from_value(x).map_err(|e| Failure::Input(format!("{path}: verdicts[{k}]: {e}"))))
        .collect()
}

fn check_witness(g: &FiniteRelation, path: &str, text: &str) -> CmdResult<Outcome> {
    if g.is_flagged() {
        return Err(crshadow::Error::Flagged.into());
    }
    let docs = verdict_docs(path, text)?;
    let mut md = String::from("| property | valid | detail |\n|---|---|---|\n");
    let mut rows = Vec::new();
    for d in &docs {
        let v = Verdict::from_doc(g, d).map_err(|e| Failure::Input(format!("{path}: verdict ({}): {e}", d.property)))?;
        let (valid, detail) = match reverify(g, &v) {
            Ok(()) => (true, String::new()),
            Err(e) => (false, e.to_string()),
        };
        md.push_str(&format!("| ({}) | {} | {} |\n", d.property, valid, detail));
        rows.push(json!({ "property": d.property, "holds": d.holds, "valid": valid, "detail": detail }));
    }
    let ok = rows.iter().all(|r| r["valid"] == json!(true));
    Ok(Outcome {
        body: json!({ "checked": rows }),
        markdown: Some(md),
        ok,
    })
}

struct SystemAudit {
    checks: usize,
    failures: Vec<Value>,
    comparisons: usize,
}

fn audit_one(index: usize, g: &FiniteRelation, kmax: usize, oracle: bool) -> crshadow::Result<SystemAudit> {
    let verdicts = decide_all(g)?;
    let mut report: AuditReport = implication_audit(&verdicts)?;
    report.extend(power_audit(g, kmax)?);
    let mut failures: Vec<Value> = report
        .checks
        .iter()
        .filter(|c| !c.ok)
        .map(|c| json!({ "system": index, "check": c.name, "detail": c.detail }))
        .collect();
    let mut checks = report.checks.len();
    let mut comparisons = 0;
    if oracle {
        let n = g.space().len();
        let bound = n << n;
        let ladder = threshold_ladder(g.space());
        for p in Property::ALL {
            for e in ladder.eps_classes() {
                for d in ladder.delta_classes() {
                    comparisons += 1;
                    checks += 1;
                    let fast = counterexample(g, p, &e.rep, &d.rep)?.is_some();
                    let slow = falsify_bounded(g, p, &e.rep, &d.rep, bound).is_some();
                    if fast != slow {
                        failures.push(json!({
                            "system": index,
                            "check": format!("oracle ({p}) eps={} delta={}", rational::format(&e.rep), rational::format(&d.rep)),
                            "detail": format!("decider counterexample: {fast}, bounded search: {slow}"),
                        }));
                    }
                }
            }
        }
    }
    if !failures.is_empty() {
        let sys = system_to_json(g);
        for f in &mut failures {
            f["systemDoc"] = sys.clone();
        }
    }
    Ok(SystemAudit { checks, failures, comparisons })
}

pub fn audit_config(a: &AuditArgs) -> Value {
    json!({
        "command": "audit",
        "count": a.count,
        "size": a.size,
        "seed": a.seed,
        "kmax": a.kmax,
        "oracle": a.oracle,
        "format": a.format.name(),
    })
}

pub fn audit(a: &AuditArgs) -> CmdResult<Outcome> {
    positive("count", a.count)?;
    positive("size", a.size)?;
    if a.kmax < 2 {
        return Err(Failure::Input("--kmax must be at least 2".into()));
    }
    let mut r = rng(a.seed);
    let systems: Vec<FiniteRelation> = (0..a.count).map(|_| random_system(&mut r, a.size)).collect();
    let results = systems
        .par_iter()
        .enumerate()
        .map(|(i, g)| audit_one(i, g, a.kmax, a.oracle))
        .collect::<crshadow::Result<Vec<_>>>()?;
    let checks: usize = results.iter().map(|s| s.checks).sum();
    let comparisons: usize = results.iter().map(|s| s.comparisons).sum();
    let failures: Vec<Value> = results.into_iter().flat_map(|s| s.failures).collect();
    let violations = failures.len();
    let mut body = json!({
        "systems": a.count,
        "checks": checks,
        "violations": violations,
        "failures": failures,
    });
    if a.oracle {
        body["oracleComparisons"] = json!(comparisons);
    }
    let md = format!(
        "| systems | checks | oracle comparisons | violations |\n|---|---|---|---|\n| {} | {} | {} | {} |\n",
        a.count,
        checks,
        if a.oracle { comparisons.to_string() } else { "-".into() },
        violations
    );
    Ok(Outcome {
        body,
        markdown: Some(md),
        ok: violations == 0,
    })
}

pub fn parse_params(raw: &[String]) -> CmdResult<BTreeMap<String, String>> {
    raw.iter()
        .map(|kv| {
            let (k, v) = kv
                .split_once('=')
                .ok_or_else(|| Failure::Input(format!("--param expects key=value, got `{kv}`")))?;
            Ok((k.trim().to_string(), v.trim().to_string()))
        })
        .collect()
}

pub fn gallery_config(a: &GalleryRunArgs, params: &BTreeMap<String, String>) -> Value {
    json!({
        "command": "gallery run",
        "items": a.names,
        "params": params,
        "format": a.format.name(),
    })
}

pub fn gallery_run(a: &GalleryRunArgs, params: &BTreeMap<String, String>) -> CmdResult<Outcome> {
    let names: Vec<String> = if a.names.is_empty() {
        if !params.is_empty() {
            return Err(Failure::Input("--param needs an item name".into()));
        }
        gallery::NAMES.iter().map(|s| s.to_string()).collect()
    } else {
        a.names.clone()
    };
    let items = names
        .iter()
        .map(|n| gallery::build(n, params))
        .collect::<crshadow::Result<Vec<_>>>()?;
    let reports: Vec<GalleryReport> = items.iter().map(|i| i.run()).collect();
    let mut md = String::new();
    for r in &reports {
        md.push_str(&format!("### {} ({})\n\n", r.name, if r.passed { "pass" } else { "FAIL" }));
        md.push_str("| claim | expected | observed | sampled | pass |\n|---|---|---|---|---|\n");
        for c in &r.claims {
            md.push_str(&format!("| {} | {} | {} | {} | {} |\n", c.claim, c.expected, c.observed, c.sampled, c.passed));
        }
        md.push('\n');
    }
    let ok = reports.iter().all(|r| r.passed);
    Ok(Outcome {
        body: json!({ "items": reports }),
        markdown: Some(md),
        ok,
    })
}

pub fn shift_demo(a: &ShiftDemoArgs) -> CmdResult<(Value, Outcome)> {
    positive("m", a.m)?;
    positive("orbit-len", a.orbit_len)?;
    let (text, hash) = read_input(&a.system)?;
    let config = json!({
        "command": "shift demo",
        "system": a.system,
        "systemSha256": hash,
        "k": a.k,
        "m": a.m,
        "orbitLen": a.orbit_len,
    });
    let g = load_system(&a.system, &text)?;
    let report = shift_shadowing_demo(&g, a.k, a.m, a.orbit_len)?;
    Ok((config, Outcome::ok(to_value(&report))))
}

pub fn shift_closing(a: &ShiftClosingArgs) -> CmdResult<(Value, Outcome)> {
    let c: Rational = rational::parse(&a.c).map_err(|e| Failure::Input(format!("--c: {e}")))?;
    let config = json!({ "command": "shift closing", "n": a.n, "c": rational::format(&c) });
    let report = closing_example_check_at(&c, a.n)?;
    let ok = report.no_shadower;
    Ok((
        config,
        Outcome {
            body: to_value(&report),
            markdown: None,
            ok,
        },
    ))
}

pub fn search_config(a: &SearchArgs) -> Value {
    json!({
        "command": "shift search",
        "count": a.count,
        "size": a.size,
        "seed": a.seed,
        "k": a.k,
        "m": a.m,
        "orbitLen": a.orbit_len,
    })
}

/// Tabulates (2,1) and (2,2) verdicts beside the bounded shift demo. No
/// outcome is expected; rows where a property holds and the demo finds
/// pseudo-orbits without a constructed shadower are listed for inspection.
pub fn shift_search(a: &SearchArgs) -> CmdResult<Outcome> {
    positive("count", a.count)?;
    positive("size", a.size)?;
    positive("m", a.m)?;
    positive("orbit-len", a.orbit_len)?;
    let [p21, _, p22, _] = Property::ALL;
    let mut r = rng(a.seed);
    let systems: Vec<FiniteRelation> = (0..a.count).map(|_| random_system(&mut r, a.size)).collect();
    let rows = systems
        .par_iter()
        .enumerate()
        .map(|(i, g)| -> crshadow::Result<Value> {
            let h21 = decide_shadowing(g, p21)?.holds;
            let h22 = decide_shadowing(g, p22)?.holds;
            let demo = shift_shadowing_demo(g, a.k, a.m, a.orbit_len)?;
            Ok(json!({
                "system": i,
                "holds21": h21,
                "holds22": h22,
                "pseudoOrbits": demo.pseudo_orbits,
                "unshadowed": demo.failures.len(),
                "systemDoc": system_to_json(g),
            }))
        })
        .collect::<crshadow::Result<Vec<_>>>()?;
    let count = |f: &dyn Fn(&Value) -> bool| rows.iter().filter(|r| f(r)).count();
    let unshadowed = |r: &Value| r["unshadowed"].as_u64().unwrap_or(0) > 0;
    let candidates: Vec<Value> = rows
        .iter()
        .filter(|r| unshadowed(r) && (r["holds21"] == json!(true) || r["holds22"] == json!(true)))
        .cloned()
        .collect();
    let body = json!({
        "systems": a.count,
        "holds21": count(&|r| r["holds21"] == json!(true)),
        "holds22": count(&|r| r["holds22"] == json!(true)),
        "demoUnshadowed": count(&unshadowed),
        "candidates": candidates,
        "rows": rows.iter().map(|r| {
            let mut r = r.clone();
            r.as_object_mut().expect("row object").remove("systemDoc");
            r
        }).collect::<Vec<_>>(),
    });
    Ok(Outcome::ok(body))
}

pub fn convert(a: &ConvertArgs) -> CmdResult<Value> {
    let (text, _) = read_input(&a.input)?;
    match a.to {
        Target::Planar => {
            let g = load_system(&a.input, &text)?;
            Ok(to_value(&finite_to_planar(&g)?.to_doc()))
        }
        Target::Finite => {
            let doc: PlanarDoc = serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {e}", a.input)))?;
            let r = PlanarRelation::from_doc(&doc).map_err(|e| Failure::Input(format!("{}: {e}", a.input)))?;
            Ok(system_to_json(&planar_to_finite(&r)?))
        }
    }
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Markdown => "markdown",
        }
    }
}
