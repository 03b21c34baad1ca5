//! Theorem selection: certified upper bounds for the gradient exponent,
//! join decomposition, and brackets against sampled lower bounds.

use std::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{fmt_rational, Rational};
use crate::dualfan::{fan_vertices_of, jacobian_diagram_capped, vanishing_subspaces, JacobianDiagram, VertexKind, DEFAULT_MINKOWSKI_CAP};
use crate::error::{Error, Result};
use crate::invariants::{axis_monomial_table, convenient_profile, eta, invariant_sheet, EtaVariant, InvariantSheet};
use crate::mixedpoly::{MixedFunction, VariableSubset};
use crate::newton::{boundary_dimension, build_polyhedron};
use crate::nondeg::{check_face_nondegeneracy, check_loj_nondegeneracy, NondegBudget, Verdict, VerdictStatus};
use crate::sampler::{sample_lower_bound, LowerBound, SamplerBudget};
use crate::curves::GradientPath;

#[derive(Debug, Clone, PartialEq)]
pub struct BoundConfig {
    pub nondeg: NondegBudget,
    /// Skip the non-degeneracy checks and record the hypotheses as assumed.
    pub assume_nondegenerate: bool,
    /// Route holomorphic input through the mixed checks and curve pipeline.
    pub force_mixed: bool,
    /// Treat every strictly positive Jacobian vertex as lying on the vanishing boundary.
    pub conservative_vanishing: bool,
    pub minkowski_cap: usize,
    pub sampler: SamplerBudget,
}

impl Default for BoundConfig {
    fn default() -> Self {
        BoundConfig {
            nondeg: NondegBudget::default(),
            assume_nondegenerate: false,
            force_mixed: false,
            conservative_vanishing: false,
            minkowski_cap: DEFAULT_MINKOWSKI_CAP,
            sampler: SamplerBudget::default(),
        }
    }
}

impl BoundConfig {
    /// Same seed for the non-degeneracy checks and the sampler.
    pub fn with_seed(seed: u64) -> Self {
        let mut cfg = BoundConfig::default();
        cfg.nondeg.seed = seed;
        cfg.sampler.seed = seed;
        cfg
    }

    fn nondeg_budget(&self) -> NondegBudget {
        NondegBudget { force_mixed: self.force_mixed || self.nondeg.force_mixed, ..self.nondeg.clone() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TheoremPath {
    ConvenientBMinus1,
    WeightedEtaR,
    Join(Vec<TheoremPath>),
    GeneralEtaMax,
    GeneralEtaDprime,
}

impl fmt::Display for TheoremPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TheoremPath::ConvenientBMinus1 => write!(f, "convenient-B-minus-1"),
            TheoremPath::WeightedEtaR => write!(f, "weighted-homogeneous-eta-R"),
            TheoremPath::GeneralEtaMax => write!(f, "general-eta-max"),
            TheoremPath::GeneralEtaDprime => write!(f, "general-eta-dprime"),
            TheoremPath::Join(children) => {
                write!(f, "join(")?;
                for (k, c) in children.iter().enumerate() {
                    if k > 0 {
                        write!(f, ",")?;
                    }
                    write!(f, "{c}")?;
                }
                write!(f, ")")
            }
        }
    }
}

/// One applicable upper bound.
#[derive(Debug, Clone, PartialEq)]
pub struct Candidate {
    pub path: TheoremPath,
    pub value: Rational,
    pub exact: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub upper: Rational,
    pub path: TheoremPath,
    /// The bound is known to equal the exponent.
    pub exact: bool,
    pub assumptions: Vec<Verdict>,
    pub sheet: Option<InvariantSheet>,
    pub candidates: Vec<Candidate>,
    pub lower: Option<LowerBound>,
    pub tight: bool,
    pub notes: Vec<String>,
    /// Join components, in variable order, with reports in compressed coordinates.
    pub children: Vec<(VariableSubset, BoundReport)>,
}

impl BoundReport {
    /// Sampled lower bound exceeding the certified upper bound.
    pub fn violation(&self) -> bool {
        self.lower.as_ref().and_then(|l| l.value.as_ref()).is_some_and(|v| *v > self.upper)
    }

    /// One-line summary, e.g. `upper=6 exact path=convenient-B-minus-1`.
    pub fn summary(&self) -> String {
        let mut s = format!("upper={}", fmt_rational(&self.upper));
        if self.exact {
            s.push_str(" exact");
        }
        s.push_str(&format!(" path={}", self.path));
        s
    }
}

/// Splits `f` along connected components of its variable co-occurrence graph.
pub fn decompose_join(f: &MixedFunction) -> Vec<(VariableSubset, MixedFunction)> {
    let n = f.n();
    let mut parent: Vec<usize> = (0..n).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    for m in f.monomials() {
        let vars = m.exps.variables();
        for w in vars.windows(2) {
            let (a, b) = (root(&mut parent, w[0]), root(&mut parent, w[1]));
            parent[a.max(b)] = a.min(b);
        }
    }
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot = vec![usize::MAX; n];
    for i in 0..n {
        let r = root(&mut parent, i);
        if slot[r] == usize::MAX {
            slot[r] = groups.len();
            groups.push(Vec::new());
        }
        groups[slot[r]].push(i);
    }
    groups
        .into_iter()
        .map(|g| {
            let subset = VariableSubset::new(g);
            let piece = f.restrict(&subset).compress(&subset);
            (subset, piece)
        })
        .collect()
}

fn gate(v: Verdict, assumptions: &mut Vec<Verdict>) -> Result<()> {
    match v.status {
        VerdictStatus::PresumedOk => {
            assumptions.push(v);
            Ok(())
        }
        VerdictStatus::DegenerateWitness => Err(Error::Degenerate(Box::new(v))),
        VerdictStatus::Inconclusive => Err(Error::Inconclusive(v.summary())),
    }
}

fn diagram_for(f: &MixedFunction, cfg: &BoundConfig) -> Result<JacobianDiagram> {
    let mut d = jacobian_diagram_capped(f, cfg.minkowski_cap)?;
    if cfg.conservative_vanishing {
        d.vjpp = (0..d.positive.len()).collect();
    }
    Ok(d)
}

fn component_bound(f: &MixedFunction, cfg: &BoundConfig) -> Result<BoundReport> {
    let n = f.n();
    if f.is_zero() {
        return Err(Error::NonIsolated("variables absent from every monomial".into()));
    }
    let budget = cfg.nondeg_budget();
    let mut assumptions = Vec::new();
    let mut notes = Vec::new();
    if cfg.assume_nondegenerate {
        notes.push("non-degeneracy assumed without checking".to_string());
    } else {
        gate(check_face_nondegeneracy(f, &budget)?, &mut assumptions)?;
    }

    let mut candidates = Vec::new();
    let profile = convenient_profile(f);
    if let (true, Some(b)) = (profile.convenient, profile.big_b) {
        let exact = profile.has_non_exceptional();
        if !exact {
            notes.push("only exceptional Łojasiewicz monomials; equality with B-1 not established".into());
        }
        candidates.push(Candidate { path: TheoremPath::ConvenientBMinus1, value: Rational::from_integer(BigInt::from(b) - 1), exact });
    }

    let mut sheet = None;
    let general = (|| -> Result<Option<InvariantSheet>> {
        let poly = build_polyhedron(f)?;
        let bd = boundary_dimension(&poly);
        if bd + 1 != n {
            return Err(Error::BoundaryDimension { found: bd, required: n - 1 });
        }
        let subspaces = vanishing_subspaces(f);
        let table = axis_monomial_table(f, &subspaces)?;
        if !cfg.assume_nondegenerate && !subspaces.is_empty() {
            gate(check_loj_nondegeneracy(f, &table, &budget)?, &mut assumptions)?;
        }
        let fan = fan_vertices_of(f, &poly)?;
        let positive: Vec<_> = fan.iter().filter(|v| v.kind == VertexKind::StrictlyPositive).collect();
        if let [r] = positive.as_slice() {
            let w = r.weight_rational();
            if f.face_function(&w)?.len() == f.len() {
                let value = eta(f, &w, EtaVariant::Plain)?;
                candidates.push(Candidate { path: TheoremPath::WeightedEtaR, value, exact: false });
            }
        }
        let diagram = diagram_for(f, cfg)?;
        let s = invariant_sheet(f, &diagram)?;
        let (path, value) = if s.has_vjpp() {
            (TheoremPath::GeneralEtaDprime, s.eta_dprime.clone())
        } else {
            (TheoremPath::GeneralEtaMax, s.eta_max.clone())
        };
        candidates.push(Candidate { path, value, exact: false });
        Ok(Some(s))
    })();
    match general {
        Ok(s) => sheet = s,
        // The convenient bound needs neither the boundary dimension nor the Jacobian diagram.
        Err(e @ (Error::BoundaryDimension { .. } | Error::SizeCap { .. } | Error::NoPositiveVertex)) if !candidates.is_empty() => {
            notes.push(format!("general path skipped: {e}"));
        }
        Err(e) => return Err(e),
    }

    let best = candidates
        .iter()
        .min_by(|a, b| a.value.cmp(&b.value))
        .cloned()
        .ok_or(Error::NoPositiveVertex)?;
    // An exact candidate pins the exponent, so any smaller one would be a contradiction.
    let exact = candidates.iter().any(|c| c.exact && c.value == best.value);
    if let Some(c) = candidates.iter().find(|c| c.exact && c.value > best.value) {
        notes.push(format!("exact value {} exceeds the bound {} from {}", fmt_rational(&c.value), fmt_rational(&best.value), best.path));
    }
    Ok(BoundReport {
        upper: best.value,
        path: best.path,
        exact,
        assumptions,
        sheet,
        candidates,
        lower: None,
        tight: false,
        notes,
        children: Vec::new(),
    })
}

/// Certified upper bound, taking the minimum over every applicable theorem.
pub fn upper_bound(f: &MixedFunction, cfg: &BoundConfig) -> Result<BoundReport> {
    let parts = decompose_join(f);
    // A convenient join has convenient pieces with the same maximal B, so the whole function is handled directly.
    if parts.len() == 1 || convenient_profile(f).convenient {
        return component_bound(f, cfg);
    }
    let mut children = Vec::new();
    for (subset, g) in parts {
        let r = component_bound(&g, cfg).map_err(|e| match e {
            Error::NonIsolated(m) => Error::NonIsolated(format!("component {subset}: {m}")),
            Error::Inconclusive(m) => Error::Inconclusive(format!("component {subset}: {m}")),
            other => other,
        })?;
        children.push((subset, r));
    }
    let top = children
        .iter()
        .map(|(_, r)| &r.upper)
        .max()
        .cloned()
        .unwrap_or_else(Rational::one);
    let exact = children.iter().any(|(_, r)| r.upper == top && r.exact);
    let mut assumptions = Vec::new();
    let mut candidates = Vec::new();
    let mut notes = Vec::new();
    for (subset, r) in &children {
        assumptions.extend(r.assumptions.iter().cloned());
        candidates.extend(r.candidates.iter().cloned());
        notes.extend(r.notes.iter().map(|m| format!("component {subset}: {m}")));
    }
    let sheet = diagram_for(f, cfg).and_then(|d| invariant_sheet(f, &d)).ok();
    Ok(BoundReport {
        upper: top,
        path: TheoremPath::Join(children.iter().map(|(_, r)| r.path.clone()).collect()),
        exact,
        assumptions,
        sheet,
        candidates,
        lower: None,
        tight: false,
        notes,
        children,
    })
}

/// Upper bound together with a sampled lower bound.
pub fn bracket(f: &MixedFunction, cfg: &BoundConfig) -> Result<BoundReport> {
    let mut report = upper_bound(f, cfg)?;
    let diagram = jacobian_diagram_capped(f, cfg.minkowski_cap).ok();
    let mut sampler = cfg.sampler.clone();
    if cfg.force_mixed {
        sampler.path = GradientPath::Mixed;
    }
    let lower = sample_lower_bound(f, diagram.as_ref(), &sampler);
    report.tight = lower.value.as_ref() == Some(&report.upper);
    if let Some(v) = &lower.value {
        if *v > report.upper {
            report.notes.push(format!(
                "sampled lower bound {} exceeds the certified upper bound {}",
                fmt_rational(v),
                fmt_rational(&report.upper)
            ));
        }
    }
    report.lower = Some(lower);
    Ok(report)
}

/// Smallest exponent that keeps the topology when pure powers are added on every axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ConvenienceThresholds {
    pub eta_dprime: Rational,
    /// Uniform threshold repeated per axis.
    pub exponents: Vec<u64>,
    pub note: Option<String>,
}

pub fn convenience_exponents(f: &MixedFunction, cfg: &BoundConfig) -> Result<ConvenienceThresholds> {
    let diagram = jacobian_diagram_capped(f, cfg.minkowski_cap)?;
    let sheet = invariant_sheet(f, &diagram)?;
    let floor = sheet.eta_dprime.floor().to_integer();
    let threshold: u64 = (floor + 2u32).try_into().map_err(|_| Error::Overflow)?;
    let note = (!f.is_holomorphic()).then(|| {
        "split each exponent as z^a conj(z)^b with a + b equal to the threshold and a != b".to_string()
    });
    Ok(ConvenienceThresholds { eta_dprime: sheet.eta_dprime, exponents: vec![threshold; f.n()], note })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::mixedpoly::parse;

    fn cfg() -> BoundConfig {
        BoundConfig::with_seed(7)
    }

    #[test]
    fn join_components() {
        let f = parse("z1^3+z2^7+z3^2", None).unwrap();
        let parts: Vec<String> = decompose_join(&f).iter().map(|(s, _)| s.to_string()).collect();
        assert_eq!(parts, ["{1}", "{2}", "{3}"]);
        let f = parse("z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2", None).unwrap();
        let parts: Vec<String> = decompose_join(&f).iter().map(|(s, _)| s.to_string()).collect();
        assert_eq!(parts, ["{1,2,3}", "{4}"]);
        assert_eq!(decompose_join(&parse("z1^2*z2", None).unwrap()).len(), 1);
    }

    #[test]
    fn brieskorn_is_convenient_exact() {
        let r = upper_bound(&parse("z1^3+z2^7", None).unwrap(), &cfg()).unwrap();
        assert_eq!(r.summary(), "upper=6 exact path=convenient-B-minus-1");
    }

    #[test]
    fn weighted_example_joins() {
        let r = upper_bound(&parse("z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2", None).unwrap(), &cfg()).unwrap();
        assert_eq!(r.upper, rat(21, 4));
        assert_eq!(r.path.to_string(), "join(weighted-homogeneous-eta-R,convenient-B-minus-1)");
        assert!(!r.exact);
    }

    #[test]
    fn jdual_general() {
        let f = parse("(z1^9+z2^3+z3^6)*z2+z3^7+z4^7", None).unwrap();
        let r = upper_bound(&f, &cfg()).unwrap();
        assert_eq!(r.upper, int(11));
        assert_eq!(convenience_exponents(&f, &cfg()).unwrap().exponents, vec![13; 4]);
    }

    #[test]
    fn thresholds() {
        let t = |s: &str| convenience_exponents(&parse(s, None).unwrap(), &cfg()).unwrap().exponents[0];
        assert_eq!(t("z1^3+z2^7"), 8);
        assert_eq!(t("z1^2+z2^2"), 3);
    }

    #[test]
    fn degenerate_refused_unless_assumed() {
        let f = parse("(z1+z2)^2", None).unwrap();
        assert!(matches!(upper_bound(&f, &cfg()), Err(Error::Degenerate(_))));
        let mut c = cfg();
        c.assume_nondegenerate = true;
        let r = upper_bound(&f, &c).unwrap();
        assert_eq!(r.notes, ["non-degeneracy assumed without checking"]);
    }

    #[test]
    fn conservative_classification_never_lowers() {
        let f = parse("(z1^9+z2^3+z3^6)*z2+z3^7+z4^7", None).unwrap();
        let mut c = cfg();
        let base = upper_bound(&f, &c).unwrap().upper;
        c.conservative_vanishing = true;
        assert!(upper_bound(&f, &c).unwrap().upper >= base);
    }

    #[test]
    fn bracket_tight() {
        let mut c = cfg();
        c.sampler.curves = 300;
        let r = bracket(&parse("z1^2+z2^2", None).unwrap(), &c).unwrap();
        assert!(r.tight);
        assert!(!r.violation());
    }
}
