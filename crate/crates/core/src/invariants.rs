//! Exact rational invariants: normalized weights, the η family, convenient
//! profiles and axis-monomial tables.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::arith::{fmt_rat_vec, Rational};
use crate::dualfan::{FanVertex, JacobianDiagram};
use crate::error::{Error, Result};
use crate::mixedpoly::{ExponentPair, MixedFunction, VariableSubset};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NormalizedWeight {
    pub raw: Vec<Rational>,
    pub d: Rational,
    pub hat: Vec<Rational>,
    /// Smallest non-zero entry of `hat`.
    pub m: Rational,
    /// Largest entry of `hat`.
    pub big_m: Rational,
}

fn check_weight(f: &MixedFunction, p: &[Rational]) -> Result<()> {
    if p.len() != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: p.len() });
    }
    if p.iter().any(Signed::is_negative) || p.iter().all(Zero::is_zero) {
        return Err(Error::InvalidWeight(fmt_rat_vec(p)));
    }
    Ok(())
}

fn degree(f: &MixedFunction, p: &[Rational]) -> Result<Rational> {
    check_weight(f, p)?;
    let d = f.min_degree(p).ok_or(Error::ZeroFunction)?;
    if !d.is_positive() {
        return Err(Error::NonNormalizable(fmt_rat_vec(p)));
    }
    Ok(d)
}

pub fn normalize(f: &MixedFunction, p: &[Rational]) -> Result<NormalizedWeight> {
    let d = degree(f, p)?;
    let hat: Vec<Rational> = p.iter().map(|x| x / &d).collect();
    debug_assert!(f.min_degree(&hat) == Some(Rational::one()));
    let m = hat.iter().filter(|x| x.is_positive()).min().cloned().unwrap_or_else(Rational::zero);
    let big_m = hat.iter().max().cloned().unwrap_or_else(Rational::zero);
    Ok(NormalizedWeight { raw: p.to_vec(), d, hat, m, big_m })
}

pub fn int_weight(w: &[i64]) -> Vec<Rational> {
    w.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
}

/// Which member of the η family to evaluate. Indices are 0-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EtaVariant {
    /// `d(P,f)/m(P) - 1`.
    Plain,
    /// `(d(P,f) - p_j)/p_i`.
    Ij { i: usize, j: usize },
    /// `d(P,f_i)/p_k`; for mixed `f` the smaller of `d(P,f_i)`, `d(P,f_ī)` over non-zero derivatives.
    Prime { k: usize, i: usize },
}

/// `d(P, f_i)` for holomorphic `f`, `min(d(P,f_i), d(P,f_ī))` for mixed `f`.
pub fn derivative_degree(f: &MixedFunction, p: &[Rational], i: usize) -> Result<Rational> {
    let a = f.wirtinger_derivative(i, false)?.min_degree(p);
    let b = f.wirtinger_derivative(i, true)?.min_degree(p);
    match (a, b) {
        (Some(a), Some(b)) => Ok(a.min(b)),
        (Some(a), None) => Ok(a),
        (None, Some(b)) => Ok(b),
        (None, None) => Err(Error::VanishingDerivatives(i + 1)),
    }
}

pub fn eta(f: &MixedFunction, p: &[Rational], variant: EtaVariant) -> Result<Rational> {
    let d = degree(f, p)?;
    let entry = |k: usize| -> Result<&Rational> {
        let v = p.get(k).ok_or(Error::IndexOutOfRange { index: k + 1, n: p.len() })?;
        if v.is_zero() {
            Err(Error::ZeroDenominator(k + 1))
        } else {
            Ok(v)
        }
    };
    match variant {
        EtaVariant::Plain => {
            let m = p.iter().filter(|x| x.is_positive()).min().cloned().unwrap_or_else(Rational::one);
            Ok(d / m - Rational::one())
        }
        EtaVariant::Ij { i, j } => {
            let pi = entry(i)?;
            let pj = p.get(j).ok_or(Error::IndexOutOfRange { index: j + 1, n: p.len() })?;
            Ok((d - pj) / pi)
        }
        EtaVariant::Prime { k, i } => {
            let pk = entry(k)?.clone();
            Ok(derivative_degree(f, p, i)? / pk)
        }
    }
}

/// Where a contributing vertex came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VertexSource {
    /// A strictly positive vertex of `Γ*(f)`.
    Newton,
    /// A vanishing-boundary strictly positive vertex of `Γ*_J(f)`.
    JacobianVanishing,
}

impl VertexSource {
    pub fn label(self) -> &'static str {
        match self {
            VertexSource::Newton => "newton",
            VertexSource::JacobianVanishing => "jacobian-vanishing-boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VertexEta {
    pub weight: Vec<i64>,
    pub source: VertexSource,
    pub normalized: NormalizedWeight,
    pub eta: Rational,
    /// `max_i d(R̂,f_i)/m(R̂)` for Jacobian vertices.
    pub eta_prime: Option<Rational>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InvariantSheet {
    pub eta_max: Rational,
    pub eta_j_max: Rational,
    /// Absent when no Jacobian vertex lies in a vanishing boundary region.
    pub eta_prime_j_max: Option<Rational>,
    pub eta_dprime: Rational,
    pub contributions: Vec<VertexEta>,
}

impl InvariantSheet {
    pub fn has_vjpp(&self) -> bool {
        self.eta_prime_j_max.is_some()
    }
}

fn max_prime(f: &MixedFunction, p: &[Rational]) -> Result<Option<Rational>> {
    let mut best: Option<Rational> = None;
    for i in 0..f.n() {
        let di = match derivative_degree(f, p, i) {
            Ok(d) => d,
            Err(Error::VanishingDerivatives(_)) => continue,
            Err(e) => return Err(e),
        };
        for pk in p.iter().filter(|x| x.is_positive()) {
            let v = &di / pk;
            if best.as_ref().is_none_or(|b| v > *b) {
                best = Some(v);
            }
        }
    }
    Ok(best)
}

fn vertex_eta(f: &MixedFunction, v: &FanVertex, source: VertexSource) -> Result<VertexEta> {
    let raw = int_weight(&v.weight);
    let normalized = normalize(f, &raw)?;
    let eta_value = Rational::one() / &normalized.m - Rational::one();
    let eta_prime = match source {
        VertexSource::Newton => None,
        VertexSource::JacobianVanishing => max_prime(f, &normalized.hat)?,
    };
    Ok(VertexEta { weight: v.weight.clone(), source, normalized, eta: eta_value, eta_prime })
}

pub fn invariant_sheet(f: &MixedFunction, diagram: &JacobianDiagram) -> Result<InvariantSheet> {
    let mut contributions = Vec::new();
    for v in diagram.base_positive() {
        contributions.push(vertex_eta(f, v, VertexSource::Newton)?);
    }
    if contributions.is_empty() {
        return Err(Error::NoPositiveVertex);
    }
    for jv in diagram.vjpp_vertices() {
        contributions.push(vertex_eta(f, &jv.vertex, VertexSource::JacobianVanishing)?);
    }
    let max_of = |it: &mut dyn Iterator<Item = Rational>| it.max();
    let eta_max = max_of(&mut contributions.iter().filter(|c| c.source == VertexSource::Newton).map(|c| c.eta.clone()))
        .ok_or(Error::NoPositiveVertex)?;
    let eta_j_max = max_of(&mut contributions.iter().map(|c| c.eta.clone())).ok_or(Error::NoPositiveVertex)?;
    let eta_prime_j_max = max_of(&mut contributions.iter().filter_map(|c| c.eta_prime.clone()));
    let eta_dprime = match &eta_prime_j_max {
        Some(p) if *p > eta_j_max => p.clone(),
        _ => eta_j_max.clone(),
    };
    Ok(InvariantSheet { eta_max, eta_j_max, eta_prime_j_max, eta_dprime, contributions })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LojMonomial {
    pub axis: usize,
    pub exps: ExponentPair,
    pub exceptional: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvenientProfile {
    pub convenient: bool,
    /// Smallest pure-power combined exponent on each axis.
    pub b: Vec<Option<u32>>,
    pub big_b: Option<u32>,
    pub loj_monomials: Vec<LojMonomial>,
}

impl ConvenientProfile {
    pub fn has_non_exceptional(&self) -> bool {
        self.loj_monomials.iter().any(|m| !m.exceptional)
    }
}

/// `Some(k)` when the combined exponent is `k e_i`.
fn axis_power(c: &[u32], i: usize) -> Option<u32> {
    (c[i] > 0 && c.iter().enumerate().all(|(k, &x)| k == i || x == 0)).then_some(c[i])
}

/// `Some((a, j))` when the combined exponent is `a e_i + e_j` with `a >= 1`, `j != i`.
fn almost_axis(c: &[u32], i: usize) -> Option<(u32, usize)> {
    if c[i] == 0 {
        return None;
    }
    let others: Vec<usize> = (0..c.len()).filter(|&k| k != i && c[k] > 0).collect();
    match others.as_slice() {
        [j] if c[*j] == 1 => Some((c[i], *j)),
        _ => None,
    }
}

pub fn convenient_profile(f: &MixedFunction) -> ConvenientProfile {
    let n = f.n();
    let support = f.support_sources();
    let b: Vec<Option<u32>> = (0..n)
        .map(|i| support.keys().filter_map(|c| axis_power(c, i)).min())
        .collect();
    let convenient = b.iter().all(Option::is_some);
    let big_b = if convenient { b.iter().flatten().copied().max() } else { None };
    let mut loj_monomials = Vec::new();
    if let Some(bb) = big_b {
        for i in (0..n).filter(|&i| b[i] == Some(bb)) {
            let exceptional = support
                .keys()
                .filter_map(|c| almost_axis(c, i))
                .any(|(a, _)| a + 1 < bb);
            let mut target = vec![0; n];
            target[i] = bb;
            for e in support.get(&target).into_iter().flatten() {
                loj_monomials.push(LojMonomial { axis: i, exps: e.clone(), exceptional });
            }
        }
    }
    ConvenientProfile { convenient, b, big_b, loj_monomials }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisEntry {
    pub i: usize,
    pub j: usize,
    /// Smallest `a` with a monomial of combined exponent `a e_i + e_j`; `None` means infinity.
    pub n_ij: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubspaceAxisData {
    pub subset: VariableSubset,
    pub entries: Vec<AxisEntry>,
    /// `J_i` for each `i` in the subset.
    pub j_sets: BTreeMap<usize, Vec<usize>>,
    pub xi: u32,
}

impl SubspaceAxisData {
    /// `J(I') = union of J_i over i in I'`.
    pub fn j_union(&self, members: &[usize]) -> Vec<usize> {
        let mut out: Vec<usize> = members.iter().flat_map(|i| self.j_sets.get(i).cloned().unwrap_or_default()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AxisMonomialTable {
    pub per_subspace: Vec<SubspaceAxisData>,
    /// `max ξ_I`, absent when there are no vanishing subspaces.
    pub xi: Option<u32>,
}

pub fn axis_monomial_table(f: &MixedFunction, subspaces: &[VariableSubset]) -> Result<AxisMonomialTable> {
    let n = f.n();
    let support = f.support();
    let mut per_subspace = Vec::new();
    for subset in subspaces {
        let complement = subset.complement(n);
        let mut entries = Vec::new();
        let mut j_sets = BTreeMap::new();
        let mut xi = 0;
        for &i in subset.members() {
            let mut ji = Vec::new();
            for &j in complement.members() {
                let n_ij = support
                    .iter()
                    .filter_map(|c| almost_axis(c, i))
                    .filter(|&(_, jj)| jj == j)
                    .map(|(a, _)| a)
                    .min();
                if let Some(v) = n_ij {
                    ji.push(j);
                    xi = xi.max(v);
                }
                entries.push(AxisEntry { i, j, n_ij });
            }
            if ji.is_empty() {
                return Err(Error::NonIsolated(format!(
                    "no monomial z{}^a*w_j with j outside {} while {} is a vanishing subspace",
                    i + 1,
                    subset,
                    subset
                )));
            }
            j_sets.insert(i, ji);
        }
        per_subspace.push(SubspaceAxisData { subset: subset.clone(), entries, j_sets, xi });
    }
    let xi = per_subspace.iter().map(|s| s.xi).max();
    Ok(AxisMonomialTable { per_subspace, xi })
}
