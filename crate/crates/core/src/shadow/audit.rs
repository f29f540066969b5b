//! Consistency audits over verdicts: the implication diagram between the
//! four properties and invariance of `(2, j)` verdicts under powers.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::relation::FiniteRelation;

use super::decide::decide_shadowing;
use super::verdict::Verdict;
use super::{Mode, Property};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AuditCheck {
    pub name: String,
    pub ok: bool,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub detail: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AuditReport {
    pub checks: Vec<AuditCheck>,
}

impl AuditReport {
    fn check(&mut self, name: impl Into<String>, ok: bool, detail: impl Into<String>) {
        self.checks.push(AuditCheck {
            name: name.into(),
            ok,
            detail: if ok { String::new() } else { detail.into() },
        });
    }

    pub fn violations(&self) -> usize {
        self.checks.iter().filter(|c| !c.ok).count()
    }

    pub fn is_consistent(&self) -> bool {
        self.violations() == 0
    }

    pub fn extend(&mut self, other: AuditReport) {
        self.checks.extend(other.checks);
    }
}

/// Checks (2,1)⇒(1,1), (2,1)⇒(2,2), (1,1)⇒(1,2) and (2,2)⇒(1,2). A
/// violation means a decider bug.
pub fn implication_audit(verdicts: &[Verdict]) -> Result<AuditReport> {
    let Some(first) = verdicts.first() else {
        return Err(Error::Argument("no verdicts to audit".into()));
    };
    if verdicts.iter().any(|v| v.system() != first.system()) {
        return Err(Error::MismatchedSystems);
    }
    let get = |p: Property| {
        verdicts
            .iter()
            .find(|v| v.property == p)
            .map(|v| v.holds)
            .ok_or_else(|| Error::Argument(format!("missing verdict for ({p})")))
    };
    let [p21, p11, p22, p12] = Property::ALL;
    let mut report = AuditReport::default();
    for (a, b) in [(p21, p11), (p21, p22), (p11, p12), (p22, p12)] {
        let ok = !get(a)? || get(b)?;
        report.check(format!("({a}) => ({b})"), ok, format!("({a}) holds but ({b}) fails"));
    }
    Ok(report)
}

/// For `k = 2..=kmax`: legal sets agree between `G` and `G^k`, and a
/// `(2, j)` property of `G` carries over to `G^k`; when the powers form an
/// increasing chain, so does `(1, 2)`.
///
/// The converse fails for a single power: `G^k` may have `(2, 1)` while `G`
/// does not (see the test `power_may_gain_two_one`).
pub fn power_audit(g: &FiniteRelation, kmax: usize) -> Result<AuditReport> {
    if kmax < 2 {
        return Err(Error::Argument(format!("kmax must be at least 2, got {kmax}")));
    }
    let mut report = AuditReport::default();
    let legal = g.legal_set();
    let base: Vec<(Property, bool)> = [Mode::Every, Mode::Exists]
        .into_iter()
        .map(|j| {
            let p = Property::new(Mode::Exists, j);
            Ok((p, decide_shadowing(g, p)?.holds))
        })
        .collect::<Result<_>>()?;
    let powers: Vec<FiniteRelation> = (1..=kmax).map(|k| g.power(k)).collect();
    let chain = powers.windows(2).all(|w| w[0].is_subset(&w[1]));
    let p12 = Property::new(Mode::Every, Mode::Exists);
    let base12 = if chain { Some(decide_shadowing(g, p12)?.holds) } else { None };
    for (k, gk) in powers.iter().enumerate().skip(1).map(|(i, gk)| (i + 1, gk)) {
        let lk = gk.legal_set();
        report.check(format!("legal(G^{k}) = legal(G)"), lk == legal, format!("{lk:?} vs {legal:?}"));
        for &(p, holds) in &base {
            let hk = decide_shadowing(gk, p)?.holds;
            report.check(format!("({p}) carries to G^{k}"), !holds || hk, format!("G: {holds}, G^{k}: {hk}"));
        }
        if base12 == Some(true) {
            let hk = decide_shadowing(gk, p12)?.holds;
            report.check(format!("({p12}) carries to G^{k}"), hk, "lost under the power");
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::shadow::decide::decide_all;
    use crate::testing::{k2, three_point};

    #[test]
    fn implication_examples() {
        assert!(implication_audit(&decide_all(&k2()).unwrap()).unwrap().is_consistent());
        let all: Vec<Verdict> = Property::ALL.iter().map(|&p| Verdict::summary(p, true, 1)).collect();
        assert!(implication_audit(&all).unwrap().is_consistent());
        let bad: Vec<Verdict> = Property::ALL
            .iter()
            .map(|&p| Verdict::summary(p, p != Property::ALL[2], 1))
            .collect();
        assert_eq!(implication_audit(&bad).unwrap().violations(), 1);
        let mut mixed = all.clone();
        mixed[0] = Verdict::summary(Property::ALL[0], true, 2);
        assert_eq!(implication_audit(&mixed).unwrap_err(), Error::MismatchedSystems);
    }

    #[test]
    fn power_examples() {
        let d = FiniteRelation::diagonal(k2().space_arc().clone());
        assert!(power_audit(&d, 4).unwrap().is_consistent());
        assert!(power_audit(&k2(), 3).unwrap().is_consistent());
        let r = power_audit(&three_point(), 3).unwrap();
        assert!(r.is_consistent());
        assert!(power_audit(&k2(), 1).is_err());
    }

    #[test]
    fn power_may_gain_two_one() {
        use crate::rational::ratio;
        use std::sync::Arc;
        // 3/5 branches to 2/5 and 1; G^2 is the constant map to 1.
        let space = Arc::new(crate::metric::FiniteMetricSpace::line_from_coords(vec![ratio(2, 5), ratio(3, 5), ratio(1, 1)]).unwrap());
        let g = FiniteRelation::new(space, vec![(0, 2), (1, 0), (1, 2), (2, 2)]).unwrap();
        let p21 = Property::ALL[0];
        assert!(!decide_shadowing(&g, p21).unwrap().holds);
        assert!(decide_shadowing(&g.power(2), p21).unwrap().holds);
        assert!(power_audit(&g, 3).unwrap().is_consistent());
    }
}
