//! Holomorphic and mixed polynomials in `z` and `z̄` with exact complex-rational coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::arith::{c_is_zero, c_pow, creal, fmt_rational, weighted_degree, CRational, Rational};
use crate::error::{Error, Result};

/// Holomorphic exponents `nu` and conjugate exponents `mu` of one monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExponentPair {
    pub nu: Vec<u32>,
    pub mu: Vec<u32>,
}

impl ExponentPair {
    pub fn holomorphic(nu: Vec<u32>) -> Self {
        let mu = vec![0; nu.len()];
        ExponentPair { nu, mu }
    }

    pub fn n(&self) -> usize {
        self.nu.len()
    }

    /// The support point `nu + mu`.
    pub fn combined(&self) -> Vec<u32> {
        self.nu.iter().zip(&self.mu).map(|(a, b)| a + b).collect()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.mu.iter().all(|&m| m == 0)
    }

    /// Variables with a non-zero holomorphic or conjugate exponent.
    pub fn variables(&self) -> Vec<usize> {
        (0..self.n()).filter(|&i| self.nu[i] + self.mu[i] > 0).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MixedMonomial {
    pub coeff: CRational,
    pub exps: ExponentPair,
}

/// `sum p_i (nu_i + mu_i)`.
pub fn radial_degree(weights: &[Rational], m: &MixedMonomial) -> Rational {
    weighted_degree(weights, &m.exps.combined())
}

/// A sorted set of 0-based variable indices.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VariableSubset {
    members: Vec<usize>,
}

impl VariableSubset {
    pub fn new(members: impl IntoIterator<Item = usize>) -> Self {
        let mut members: Vec<usize> = members.into_iter().collect();
        members.sort_unstable();
        members.dedup();
        VariableSubset { members }
    }

    pub fn full(n: usize) -> Self {
        VariableSubset { members: (0..n).collect() }
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    pub fn complement(&self, n: usize) -> Self {
        VariableSubset { members: (0..n).filter(|i| !self.contains(*i)).collect() }
    }

    pub fn intersection(&self, other: &Self) -> Self {
        VariableSubset { members: self.members.iter().copied().filter(|&i| other.contains(i)).collect() }
    }

    pub fn is_subset(&self, other: &Self) -> bool {
        self.members.iter().all(|&i| other.contains(i))
    }

    /// Position of variable `i` inside the subset, used when compressing coordinates.
    pub fn position(&self, i: usize) -> Option<usize> {
        self.members.binary_search(&i).ok()
    }
}

impl fmt::Display for VariableSubset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.members.iter().map(|i| (i + 1).to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

/// A polynomial `sum c z^nu z̄^mu` in `n` variables, stored canonically.
///
/// The empty term set is a valid value: it is what restrictions to vanishing
/// coordinate subspaces and derivatives in absent variables produce.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MixedFunction {
    n: usize,
    terms: BTreeMap<ExponentPair, CRational>,
}

impl MixedFunction {
    pub fn zero(n: usize) -> Self {
        MixedFunction { n, terms: BTreeMap::new() }
    }

    pub fn from_terms(n: usize, terms: impl IntoIterator<Item = (ExponentPair, CRational)>) -> Result<Self> {
        let mut f = MixedFunction::zero(n);
        for (e, c) in terms {
            if e.nu.len() != n || e.mu.len() != n {
                return Err(Error::DimensionMismatch { expected: n, got: e.nu.len().max(e.mu.len()) });
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    /// Holomorphic polynomial from `(coefficient, exponent)` pairs with integer coefficients.
    pub fn from_int_terms(n: usize, terms: &[(i64, &[u32])]) -> Result<Self> {
        Self::from_terms(
            n,
            terms
                .iter()
                .map(|(c, e)| (ExponentPair::holomorphic(e.to_vec()), creal(Rational::from_integer(BigInt::from(*c))))),
        )
    }

    fn add_term(&mut self, e: ExponentPair, c: CRational) {
        let entry = self.terms.entry(e.clone()).or_insert_with(|| creal(Rational::zero()));
        *entry = &*entry + c;
        if c_is_zero(entry) {
            self.terms.remove(&e);
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_holomorphic(&self) -> bool {
        self.terms.keys().all(ExponentPair::is_holomorphic)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&ExponentPair, &CRational)> {
        self.terms.iter()
    }

    pub fn monomials(&self) -> Vec<MixedMonomial> {
        self.terms
            .iter()
            .map(|(e, c)| MixedMonomial { coeff: c.clone(), exps: e.clone() })
            .collect()
    }

    pub fn coefficient(&self, e: &ExponentPair) -> Option<&CRational> {
        self.terms.get(e)
    }

    pub fn has_constant_term(&self) -> bool {
        self.terms.keys().any(|e| e.nu.iter().chain(&e.mu).all(|&x| x == 0))
    }

    /// Distinct support points `nu + mu`, sorted.
    pub fn support(&self) -> Vec<Vec<u32>> {
        let mut pts: Vec<Vec<u32>> = self.terms.keys().map(ExponentPair::combined).collect();
        pts.sort();
        pts.dedup();
        pts
    }

    /// Support points with the exponent pairs mapping to each.
    pub fn support_sources(&self) -> BTreeMap<Vec<u32>, Vec<ExponentPair>> {
        let mut map: BTreeMap<Vec<u32>, Vec<ExponentPair>> = BTreeMap::new();
        for e in self.terms.keys() {
            map.entry(e.combined()).or_default().push(e.clone());
        }
        map
    }

    /// Variables occurring in some monomial.
    pub fn variables(&self) -> VariableSubset {
        VariableSubset::new(self.terms.keys().flat_map(ExponentPair::variables))
    }

    fn check_index(&self, j: usize) -> Result<()> {
        if j >= self.n {
            Err(Error::IndexOutOfRange { index: j + 1, n: self.n })
        } else {
            Ok(())
        }
    }

    /// `∂f/∂z_j` (or `∂f/∂z̄_j` when `conjugated`), `j` 0-based.
    pub fn wirtinger_derivative(&self, j: usize, conjugated: bool) -> Result<MixedFunction> {
        self.check_index(j)?;
        let mut out = MixedFunction::zero(self.n);
        for (e, c) in &self.terms {
            let k = if conjugated { e.mu[j] } else { e.nu[j] };
            if k == 0 {
                continue;
            }
            let mut d = e.clone();
            if conjugated {
                d.mu[j] -= 1;
            } else {
                d.nu[j] -= 1;
            }
            out.add_term(d, c * creal(Rational::from_integer(BigInt::from(k))));
        }
        Ok(out)
    }

    /// Monomials supported inside the coordinate subspace `C^I`.
    pub fn restrict(&self, subset: &VariableSubset) -> MixedFunction {
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| e.variables().iter().all(|&i| subset.contains(i)))
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        MixedFunction { n: self.n, terms }
    }

    /// Rewrites `f` (assumed supported in `C^I`) as a function of the `|I|` variables of `I`.
    pub fn compress(&self, subset: &VariableSubset) -> MixedFunction {
        let pick = |v: &[u32]| subset.members().iter().map(|&i| v[i]).collect::<Vec<u32>>();
        let terms = self
            .restrict(subset)
            .terms
            .into_iter()
            .map(|(e, c)| (ExponentPair { nu: pick(&e.nu), mu: pick(&e.mu) }, c))
            .collect();
        MixedFunction { n: subset.len(), terms }
    }

    /// Inverse of [`compress`](Self::compress): places the variables of `self` at the positions of `subset` in `n` variables.
    pub fn embed(&self, subset: &VariableSubset, n: usize) -> Result<MixedFunction> {
        if subset.len() != self.n {
            return Err(Error::DimensionMismatch { expected: subset.len(), got: self.n });
        }
        if let Some(&last) = subset.members().last() {
            if last >= n {
                return Err(Error::IndexOutOfRange { index: last + 1, n });
            }
        }
        let spread = |v: &[u32]| {
            let mut out = vec![0; n];
            for (k, &i) in subset.members().iter().enumerate() {
                out[i] = v[k];
            }
            out
        };
        let terms = self
            .terms
            .iter()
            .map(|(e, c)| (ExponentPair { nu: spread(&e.nu), mu: spread(&e.mu) }, c.clone()))
            .collect();
        Ok(MixedFunction { n, terms })
    }

    /// `d(P,f)`, the minimal radial `P`-degree over the monomials, or `None` for the zero function.
    pub fn min_degree(&self, weights: &[Rational]) -> Option<Rational> {
        self.terms
            .keys()
            .map(|e| weighted_degree(weights, &e.combined()))
            .min()
    }

    fn check_weight(&self, weights: &[Rational]) -> Result<()> {
        if weights.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: weights.len() });
        }
        if weights.iter().any(|p| p.is_negative()) || weights.iter().all(|p| p.is_zero()) {
            return Err(Error::InvalidWeight("entries must be non-negative and not all zero".into()));
        }
        Ok(())
    }

    /// The face function `f_P`: monomials attaining `d(P,f)`.
    pub fn face_function(&self, weights: &[Rational]) -> Result<MixedFunction> {
        self.check_weight(weights)?;
        let d = self.min_degree(weights).ok_or(Error::ZeroFunction)?;
        let terms = self
            .terms
            .iter()
            .filter(|(e, _)| weighted_degree(weights, &e.combined()) == d)
            .map(|(e, c)| (e.clone(), c.clone()))
            .collect();
        Ok(MixedFunction { n: self.n, terms })
    }

    /// Exact evaluation with `z̄_j` read as the conjugate of `z_j`.
    pub fn evaluate(&self, z: &[CRational]) -> Result<CRational> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.len() });
        }
        let zbar: Vec<CRational> = z.iter().map(|c| c.conj()).collect();
        let mut acc = creal(Rational::zero());
        for (e, c) in &self.terms {
            let mut term = c.clone();
            for i in 0..self.n {
                if e.nu[i] > 0 {
                    term *= c_pow(&z[i], e.nu[i]);
                }
                if e.mu[i] > 0 {
                    term *= c_pow(&zbar[i], e.mu[i]);
                }
            }
            acc += term;
        }
        Ok(acc)
    }

    /// Floating-point evaluation for the numerical samplers.
    pub fn evaluate_f64(&self, z: &[Complex64]) -> Result<Complex64> {
        if z.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: z.len() });
        }
        Ok(self.float_terms().iter().map(|t| t.eval(z)).sum())
    }

    /// Pre-converted terms for repeated floating evaluation.
    pub fn float_terms(&self) -> Vec<FloatTerm> {
        self.terms
            .iter()
            .map(|(e, c)| FloatTerm { coeff: crate::arith::c_to_f64(c), nu: e.nu.clone(), mu: e.mu.clone() })
            .collect()
    }

    pub fn add(&self, other: &MixedFunction) -> Result<MixedFunction> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn scale(&self, c: &CRational) -> MixedFunction {
        let mut out = MixedFunction::zero(self.n);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), a * c);
        }
        out
    }

    pub fn mul(&self, other: &MixedFunction) -> Result<MixedFunction> {
        if other.n != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: other.n });
        }
        let mut out = MixedFunction::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let nu = e1.nu.iter().zip(&e2.nu).map(|(a, b)| a + b).collect();
                let mu = e1.mu.iter().zip(&e2.mu).map(|(a, b)| a + b).collect();
                out.add_term(ExponentPair { nu, mu }, c1 * c2);
            }
        }
        Ok(out)
    }

    /// Canonical text form, accepted back by [`parse`].
    pub fn format(&self) -> String {
        self.to_string()
    }
}

/// A monomial with a floating coefficient.
#[derive(Debug, Clone)]
pub struct FloatTerm {
    pub coeff: Complex64,
    pub nu: Vec<u32>,
    pub mu: Vec<u32>,
}

impl FloatTerm {
    pub fn eval(&self, z: &[Complex64]) -> Complex64 {
        let mut v = self.coeff;
        for (i, zi) in z.iter().enumerate() {
            if self.nu[i] > 0 {
                v *= zi.powu(self.nu[i]);
            }
            if self.mu[i] > 0 {
                v *= zi.conj().powu(self.mu[i]);
            }
        }
        v
    }

    /// `|c| * prod |z_i|^(nu_i + mu_i)`, the scale used to normalize residuals.
    pub fn magnitude(&self, z: &[Complex64]) -> f64 {
        let mut v = self.coeff.norm();
        for (i, zi) in z.iter().enumerate() {
            let k = self.nu[i] + self.mu[i];
            if k > 0 {
                v *= zi.norm().powi(k as i32);
            }
        }
        v
    }
}

fn fmt_monomial(e: &ExponentPair, out: &mut String) {
    let mut first = true;
    for i in 0..e.n() {
        for (k, bar) in [(e.nu[i], ""), (e.mu[i], "~")] {
            if k == 0 {
                continue;
            }
            if !first {
                out.push('*');
            }
            first = false;
            out.push_str(&format!("{bar}z{}", i + 1));
            if k > 1 {
                out.push_str(&format!("^{k}"));
            }
        }
    }
    if first {
        out.push('1');
    }
}

impl fmt::Display for MixedFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut out = String::new();
        for (idx, (e, c)) in self.terms.iter().enumerate() {
            let constant = e.nu.iter().chain(&e.mu).all(|&x| x == 0);
            let (negative, body) = if c.im.is_zero() {
                let mag = c.re.abs();
                let body = if mag.is_one() && !constant { String::new() } else { fmt_rational(&mag) };
                (c.re.is_negative(), body)
            } else {
                (false, crate::arith::fmt_complex(c))
            };
            match (idx, negative) {
                (0, true) => out.push('-'),
                (0, false) => {}
                (_, true) => out.push_str(" - "),
                (_, false) => out.push_str(" + "),
            }
            if constant {
                out.push_str(&body);
                continue;
            }
            if !body.is_empty() {
                out.push_str(&body);
                out.push('*');
            }
            fmt_monomial(e, &mut out);
        }
        write!(f, "{out}")
    }
}

pub use crate::parser::parse;
