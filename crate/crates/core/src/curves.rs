//! Orders of gradient components along monomial curves `z_i(t) = a_i t^{p_i} + ...`,
//! the modified gradient pair for mixed functions, and per-curve exponents.
//!
//! Substitution is generic over the coefficient field: exact complex rationals
//! for rational curves, and [`Approx`] (a float with a magnitude bound used to
//! decide cancellation) for numerically solved coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::arith::{c_is_zero, c_to_f64, creal, rat, CRational, Rational};
use crate::error::{Error, Result};
use crate::mixedpoly::{MixedFunction, VariableSubset};

/// Relative size below which an [`Approx`] value counts as an exact cancellation.
pub const APPROX_ZERO: f64 = 1e-9;

/// Coefficient arithmetic needed for series substitution.
pub trait Scalar: Clone + fmt::Debug {
    fn zero() -> Self;
    fn from_exact(c: &CRational) -> Self;
    fn add(&self, o: &Self) -> Self;
    fn sub(&self, o: &Self) -> Self;
    fn mul(&self, o: &Self) -> Self;
    fn conj(&self) -> Self;
    /// Zero up to the scalar's cancellation tolerance.
    fn is_zero(&self) -> bool;
    /// Zero with no residue at all; such coefficients are not stored.
    fn is_exact_zero(&self) -> bool;
    fn mul_i(&self) -> Self;
    fn half(&self) -> Self;
    /// `sum Re(a_k conj(b_k))`, returned as a real scalar.
    fn re_dot(a: &[Self], b: &[Self]) -> Self;
    fn div(&self, o: &Self) -> Self;
    /// Whether `a` and `b` are linearly independent over the reals.
    fn independent(a: &[Self], b: &[Self]) -> bool;
    fn to_c64(&self) -> Complex64;
}

impl Scalar for CRational {
    fn zero() -> Self {
        creal(Rational::zero())
    }
    fn from_exact(c: &CRational) -> Self {
        c.clone()
    }
    fn add(&self, o: &Self) -> Self {
        self + o
    }
    fn sub(&self, o: &Self) -> Self {
        self - o
    }
    fn mul(&self, o: &Self) -> Self {
        self * o
    }
    fn conj(&self) -> Self {
        num_complex::Complex::conj(self)
    }
    fn is_zero(&self) -> bool {
        c_is_zero(self)
    }
    fn is_exact_zero(&self) -> bool {
        c_is_zero(self)
    }
    fn mul_i(&self) -> Self {
        CRational::new(-self.im.clone(), self.re.clone())
    }
    fn half(&self) -> Self {
        let h = rat(1, 2);
        CRational::new(&self.re * &h, &self.im * &h)
    }
    fn re_dot(a: &[Self], b: &[Self]) -> Self {
        let s = a
            .iter()
            .zip(b)
            .fold(Rational::zero(), |acc, (x, y)| acc + &x.re * &y.re + &x.im * &y.im);
        creal(s)
    }
    fn div(&self, o: &Self) -> Self {
        self / o
    }
    fn independent(a: &[Self], b: &[Self]) -> bool {
        let aa = Self::re_dot(a, a).re;
        let bb = Self::re_dot(b, b).re;
        let ab = Self::re_dot(a, b).re;
        aa * bb != &ab * &ab
    }
    fn to_c64(&self) -> Complex64 {
        c_to_f64(self)
    }
}

/// A floating complex value with an accumulated magnitude bound for cancellation tests.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Approx {
    pub v: Complex64,
    pub mag: f64,
}

impl Approx {
    pub fn new(v: Complex64) -> Self {
        Approx { v, mag: v.norm() }
    }
}

impl Scalar for Approx {
    fn zero() -> Self {
        Approx { v: Complex64::new(0.0, 0.0), mag: 0.0 }
    }
    fn from_exact(c: &CRational) -> Self {
        Approx::new(c_to_f64(c))
    }
    fn add(&self, o: &Self) -> Self {
        Approx { v: self.v + o.v, mag: self.mag + o.mag }
    }
    fn sub(&self, o: &Self) -> Self {
        Approx { v: self.v - o.v, mag: self.mag + o.mag }
    }
    fn mul(&self, o: &Self) -> Self {
        Approx { v: self.v * o.v, mag: self.mag * o.mag }
    }
    fn conj(&self) -> Self {
        Approx { v: self.v.conj(), mag: self.mag }
    }
    fn is_zero(&self) -> bool {
        self.v.norm() <= APPROX_ZERO * self.mag
    }
    fn is_exact_zero(&self) -> bool {
        self.v.norm() == 0.0 && self.mag == 0.0
    }
    fn mul_i(&self) -> Self {
        Approx { v: self.v * Complex64::new(0.0, 1.0), mag: self.mag }
    }
    fn half(&self) -> Self {
        Approx { v: self.v * 0.5, mag: self.mag * 0.5 }
    }
    fn re_dot(a: &[Self], b: &[Self]) -> Self {
        let v: f64 = a.iter().zip(b).map(|(x, y)| (x.v * y.v.conj()).re).sum();
        let mag: f64 = a.iter().zip(b).map(|(x, y)| x.mag * y.mag).sum();
        Approx { v: Complex64::new(v, 0.0), mag }
    }
    fn div(&self, o: &Self) -> Self {
        let d = o.v.norm().max(1e-300);
        Approx { v: self.v / o.v, mag: self.mag / d }
    }
    fn independent(a: &[Self], b: &[Self]) -> bool {
        let aa = Self::re_dot(a, a).v.re;
        let bb = Self::re_dot(b, b).v.re;
        let ab = Self::re_dot(a, b).v.re;
        aa * bb - ab * ab > 1e-12 * aa * bb
    }
    fn to_c64(&self) -> Complex64 {
        self.v
    }
}

/// Sparse univariate polynomial in `t`. Float residues of cancelled terms are kept
/// (they matter for validation) but never count towards an order.
pub type Series<S> = BTreeMap<u64, S>;

fn series_add<S: Scalar>(acc: &mut Series<S>, e: u64, c: S) {
    let next = match acc.remove(&e) {
        Some(old) => old.add(&c),
        None => c,
    };
    if !next.is_exact_zero() {
        acc.insert(e, next);
    }
}

fn series_mul<S: Scalar>(a: &Series<S>, b: &Series<S>) -> Series<S> {
    let mut out = Series::new();
    for (ea, ca) in a {
        for (eb, cb) in b {
            series_add(&mut out, ea + eb, ca.mul(cb));
        }
    }
    out
}

fn series_conj<S: Scalar>(a: &Series<S>) -> Series<S> {
    a.iter().map(|(e, c)| (*e, c.conj())).collect()
}

fn series_order<S: Scalar>(s: &Series<S>) -> Order {
    s.iter().find(|(_, c)| !c.is_zero()).map_or(Order::Infinite, |(&k, _)| Order::Finite(k))
}

fn leading<S: Scalar>(v: &[Series<S>]) -> Order {
    v.iter().map(series_order).min().unwrap_or(Order::Infinite)
}

fn coefficient_vector<S: Scalar>(v: &[Series<S>], e: u64) -> Vec<S> {
    v.iter().map(|s| s.get(&e).cloned().unwrap_or_else(S::zero)).collect()
}

/// Order of vanishing in `t`; identically zero components have infinite order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Order {
    Finite(u64),
    Infinite,
}

impl Order {
    pub fn finite(self) -> Option<u64> {
        match self {
            Order::Finite(k) => Some(k),
            Order::Infinite => None,
        }
    }
}

impl fmt::Display for Order {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Order::Finite(k) => write!(f, "{k}"),
            Order::Infinite => write!(f, "inf"),
        }
    }
}

/// A curve `z_i(t) = a_i t^{p_i} + (higher terms)` for `i` in `support`, `z_i ≡ 0` otherwise.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve<S> {
    pub n: usize,
    pub support: VariableSubset,
    pub weights: Vec<u32>,
    pub coeffs: Vec<S>,
    /// Extra `(exponent, coefficient)` terms per support coordinate, exponents above `p_i`.
    pub higher_terms: Vec<Vec<(u32, S)>>,
}

/// Curve with exact complex-rational coefficients.
pub type MonomialCurve = Curve<CRational>;
/// Curve with floating coefficients from numerical solves.
pub type FloatCurve = Curve<Approx>;

impl<S: Scalar> Curve<S> {
    pub fn new(n: usize, support: VariableSubset, weights: Vec<u32>, coeffs: Vec<S>) -> Result<Self> {
        let k = support.len();
        let higher_terms = vec![Vec::new(); k];
        Self::with_higher_terms(n, support, weights, coeffs, higher_terms)
    }

    pub fn with_higher_terms(
        n: usize,
        support: VariableSubset,
        weights: Vec<u32>,
        coeffs: Vec<S>,
        higher_terms: Vec<Vec<(u32, S)>>,
    ) -> Result<Self> {
        let k = support.len();
        if k == 0 {
            return Err(Error::InvalidWeight("curve support is empty".into()));
        }
        if weights.len() != k || coeffs.len() != k || higher_terms.len() != k {
            return Err(Error::DimensionMismatch { expected: k, got: weights.len().max(coeffs.len()) });
        }
        if let Some(&last) = support.members().last() {
            if last >= n {
                return Err(Error::IndexOutOfRange { index: last + 1, n });
            }
        }
        if weights.contains(&0) {
            return Err(Error::InvalidWeight("curve weights must be positive".into()));
        }
        if coeffs.iter().any(Scalar::is_zero) {
            return Err(Error::InvalidWeight("curve coefficients must be non-zero".into()));
        }
        for (p, extra) in weights.iter().zip(&higher_terms) {
            if extra.iter().any(|(e, _)| e <= p) {
                return Err(Error::InvalidWeight("higher terms must have exponents above the leading weight".into()));
            }
        }
        Ok(Curve { n, support, weights, coeffs, higher_terms })
    }

    /// `ord z(t) = min p_i`.
    pub fn ord_z(&self) -> u64 {
        self.weights.iter().copied().min().unwrap_or(1) as u64
    }

    fn coordinate_series(&self) -> Vec<Series<S>> {
        let mut out = vec![Series::new(); self.n];
        for (k, &i) in self.support.members().iter().enumerate() {
            let mut s = Series::new();
            series_add(&mut s, self.weights[k] as u64, self.coeffs[k].clone());
            for (e, c) in &self.higher_terms[k] {
                series_add(&mut s, *e as u64, c.clone());
            }
            out[i] = s;
        }
        out
    }

    pub fn weight_vector(&self) -> Vec<Rational> {
        let mut w = vec![Rational::zero(); self.n];
        for (k, &i) in self.support.members().iter().enumerate() {
            w[i] = Rational::from_integer(BigInt::from(self.weights[k]));
        }
        w
    }
}

impl MonomialCurve {
    pub fn to_float(&self) -> FloatCurve {
        Curve {
            n: self.n,
            support: self.support.clone(),
            weights: self.weights.clone(),
            coeffs: self.coeffs.iter().map(Approx::from_exact).collect(),
            higher_terms: self
                .higher_terms
                .iter()
                .map(|v| v.iter().map(|(e, c)| (*e, Approx::from_exact(c))).collect())
                .collect(),
        }
    }
}

/// Powers of each coordinate series and its conjugate, cached on demand.
struct Substitution<S: Scalar> {
    base: Vec<Series<S>>,
    conj: Vec<Series<S>>,
    pow: Vec<Vec<Series<S>>>,
    pow_conj: Vec<Vec<Series<S>>>,
}

impl<S: Scalar> Substitution<S> {
    fn new<T: Scalar>(curve: &Curve<T>, convert: impl Fn(&T) -> S) -> Self {
        let base: Vec<Series<S>> = curve
            .coordinate_series()
            .into_iter()
            .map(|s| s.iter().map(|(e, c)| (*e, convert(c))).collect())
            .collect();
        let conj = base.iter().map(series_conj).collect();
        let one: Series<S> = {
            let mut s = Series::new();
            s.insert(0, S::from_exact(&creal(Rational::one())));
            s
        };
        let n = base.len();
        Substitution { base, conj, pow: vec![vec![one.clone()]; n], pow_conj: vec![vec![one]; n] }
    }

    fn power(&mut self, i: usize, k: u32, conjugate: bool) -> Series<S> {
        let (table, b) = if conjugate { (&mut self.pow_conj, &self.conj) } else { (&mut self.pow, &self.base) };
        while table[i].len() <= k as usize {
            let next = series_mul(table[i].last().expect("seeded"), &b[i]);
            table[i].push(next);
        }
        table[i][k as usize].clone()
    }

    fn apply(&mut self, f: &MixedFunction) -> Series<S> {
        let mut out = Series::new();
        for (e, c) in f.terms() {
            let mut acc: Series<S> = {
                let mut s = Series::new();
                s.insert(0, S::from_exact(c));
                s
            };
            for i in 0..f.n() {
                if e.nu[i] > 0 {
                    acc = series_mul(&acc, &self.power(i, e.nu[i], false));
                }
                if e.mu[i] > 0 {
                    acc = series_mul(&acc, &self.power(i, e.mu[i], true));
                }
                if acc.is_empty() {
                    break;
                }
            }
            for (k, v) in acc {
                series_add(&mut out, k, v);
            }
        }
        out
    }
}

/// Gradient components `f_j(z(t))` and `f_j̄(z(t))` as series.
pub struct GradientSeries<S> {
    pub holo: Vec<Series<S>>,
    pub anti: Vec<Series<S>>,
}

pub fn gradient_series<S: Scalar>(f: &MixedFunction, curve: &Curve<S>) -> Result<GradientSeries<S>> {
    if curve.n != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: curve.n });
    }
    let mut sub: Substitution<S> = Substitution::new(curve, |c: &S| c.clone());
    let mut holo = Vec::with_capacity(f.n());
    let mut anti = Vec::with_capacity(f.n());
    for j in 0..f.n() {
        holo.push(sub.apply(&f.wirtinger_derivative(j, false)?));
        anti.push(sub.apply(&f.wirtinger_derivative(j, true)?));
    }
    Ok(GradientSeries { holo, anti })
}

/// `f(z(t))` as a series.
pub fn substitute<S: Scalar>(f: &MixedFunction, curve: &Curve<S>) -> Result<Series<S>> {
    if curve.n != f.n() {
        return Err(Error::DimensionMismatch { expected: f.n(), got: curve.n });
    }
    let mut sub: Substitution<S> = Substitution::new(curve, |c: &S| c.clone());
    Ok(sub.apply(f))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveOrders {
    pub ord_z: u64,
    pub holo: Vec<Order>,
    pub anti: Vec<Order>,
    /// Smallest order over all components.
    pub ord_grad: Order,
    /// `ord_grad / ord_z` when the gradient does not vanish identically.
    pub exponent: Option<Rational>,
}

pub fn curve_orders<S: Scalar>(f: &MixedFunction, curve: &Curve<S>) -> Result<CurveOrders> {
    let g = gradient_series(f, curve)?;
    let holo: Vec<Order> = g.holo.iter().map(series_order).collect();
    let anti: Vec<Order> = g.anti.iter().map(series_order).collect();
    let ord_grad = holo.iter().chain(&anti).copied().min().unwrap_or(Order::Infinite);
    let ord_z = curve.ord_z();
    let exponent = ord_grad.finite().map(|k| Rational::new(BigInt::from(k), BigInt::from(ord_z)));
    Ok(CurveOrders { ord_z, holo, anti, ord_grad, exponent })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairBase {
    /// `∂̄g` kept, `∂̄h` corrected.
    KeptG,
    /// `∂̄h` kept, `∂̄g` corrected.
    KeptH,
}

impl PairBase {
    pub fn label(self) -> &'static str {
        match self {
            PairBase::KeptG => "kept-dbar-g",
            PairBase::KeptH => "kept-dbar-h",
        }
    }
}

/// The pair `(∂̄g, ∂̄h - ρ(t) ∂̄g)` (or with roles swapped) whose leading vectors are real-independent.
#[derive(Debug, Clone, PartialEq)]
pub struct ModifiedPair<S> {
    pub base: PairBase,
    /// Real polynomial `ρ(t)` as `(exponent, coefficient)` terms.
    pub correction: Vec<(u64, S)>,
    /// Orders of `∂̄g` and `∂̄h` after correction, in that order.
    pub orders: (u64, u64),
    /// Normalized leading coefficient vectors of the corrected `∂̄g`, `∂̄h`.
    pub limit_vectors: (Vec<Complex64>, Vec<Complex64>),
    pub iterations: usize,
    /// Corrected series of `∂̄g`, `∂̄h`, kept for validation of float curves.
    pub series: (Vec<Series<S>>, Vec<Series<S>>),
}

fn normalized(v: &[Complex64]) -> Vec<Complex64> {
    let n = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    if n == 0.0 {
        v.to_vec()
    } else {
        v.iter().map(|c| c / n).collect()
    }
}

pub fn modified_gradient_pair<S: Scalar>(f: &MixedFunction, curve: &Curve<S>) -> Result<ModifiedPair<S>> {
    let grad = gradient_series(f, curve)?;
    let n = f.n();
    let mut gs: Vec<Series<S>> = Vec::with_capacity(n);
    let mut hs: Vec<Series<S>> = Vec::with_capacity(n);
    for j in 0..n {
        let conj_holo = series_conj(&grad.holo[j]);
        let mut g = Series::new();
        let mut h = Series::new();
        let keys: std::collections::BTreeSet<u64> = conj_holo.keys().chain(grad.anti[j].keys()).copied().collect();
        for k in keys {
            let a = grad.anti[j].get(&k).cloned().unwrap_or_else(S::zero);
            let b = conj_holo.get(&k).cloned().unwrap_or_else(S::zero);
            series_add(&mut g, k, a.add(&b).half());
            // (a - b) / (2i) = -i (a - b) / 2
            let d = a.sub(&b).half().mul_i();
            series_add(&mut h, k, S::zero().sub(&d));
        }
        gs.push(g);
        hs.push(h);
    }
    let (og, oh) = (leading(&gs), leading(&hs));
    let (Order::Finite(dg), Order::Finite(dh)) = (og, oh) else {
        return Err(Error::ModifiedPair(
            "a real gradient vanishes identically along the curve".into(),
        ));
    };
    let base = if dg <= dh { PairBase::KeptG } else { PairBase::KeptH };
    let (lo, mut hi) = match base {
        PairBase::KeptG => (gs, hs),
        PairBase::KeptH => (hs, gs),
    };
    let d_lo = dg.min(dh);
    let beta_lo = coefficient_vector(&lo, d_lo);

    let support = &curve.support;
    let restricted = f.restrict(support).compress(support);
    let limit = if restricted.is_zero() {
        64
    } else {
        let w: Vec<Rational> = curve.weights.iter().map(|&p| Rational::from_integer(BigInt::from(p))).collect();
        let d = restricted.min_degree(&w).expect("non-zero");
        let bound = d - Rational::from_integer(BigInt::from(curve.ord_z())) - Rational::from_integer(BigInt::from(dg.max(dh))) + Rational::one();
        if bound.is_positive() {
            bound.to_integer().try_into().unwrap_or(64usize).max(1)
        } else {
            1
        }
    };

    let mut correction: Vec<(u64, S)> = Vec::new();
    let mut iterations = 0;
    loop {
        let Order::Finite(d_hi) = leading(&hi) else {
            return Err(Error::ModifiedPair("the real gradients are parallel along the curve".into()));
        };
        let beta_hi = coefficient_vector(&hi, d_hi);
        if S::independent(&beta_lo, &beta_hi) {
            let (g, h) = match base {
                PairBase::KeptG => (lo, hi),
                PairBase::KeptH => (hi, lo),
            };
            let (g_ord, h_ord) = match base {
                PairBase::KeptG => (d_lo, d_hi),
                PairBase::KeptH => (d_hi, d_lo),
            };
            let lg = normalized(&coefficient_vector(&g, g_ord).iter().map(S::to_c64).collect::<Vec<_>>());
            let lh = normalized(&coefficient_vector(&h, h_ord).iter().map(S::to_c64).collect::<Vec<_>>());
            return Ok(ModifiedPair {
                base,
                correction,
                orders: (g_ord, h_ord),
                limit_vectors: (lg, lh),
                iterations,
                series: (g, h),
            });
        }
        if iterations >= limit {
            return Err(Error::ModifiedPair(format!(
                "no independent pair after {iterations} corrections (strong non-degeneracy fails along this curve)"
            )));
        }
        iterations += 1;
        let rho = S::re_dot(&beta_hi, &beta_lo).div(&S::re_dot(&beta_lo, &beta_lo));
        let shift = d_hi - d_lo;
        for (h, l) in hi.iter_mut().zip(&lo) {
            for (k, c) in l {
                series_add(h, k + shift, S::zero().sub(&rho.mul(c)));
            }
        }
        correction.push((shift, rho));
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GradientPath {
    /// Holomorphic functions use `ord ∂f`; mixed ones the modified pair.
    Auto,
    /// Always use the modified pair.
    Mixed,
}

/// Exponent along a curve with the orders that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CurveExponent {
    pub ord_z: u64,
    /// `ord ∂f` (holomorphic path) or the larger modified-pair order.
    pub ord_grad: u64,
    pub exponent: Rational,
}

pub fn curve_exponent_with<S: Scalar>(f: &MixedFunction, curve: &Curve<S>, path: GradientPath) -> Result<CurveExponent> {
    let ord_z = curve.ord_z();
    let ord_grad = if f.is_holomorphic() && path == GradientPath::Auto {
        curve_orders(f, curve)?
            .ord_grad
            .finite()
            .ok_or_else(|| Error::NonIsolated("the gradient vanishes identically along the curve".into()))?
    } else {
        let pair = modified_gradient_pair(f, curve)?;
        pair.orders.0.max(pair.orders.1)
    };
    Ok(CurveExponent { ord_z, ord_grad, exponent: Rational::new(BigInt::from(ord_grad), BigInt::from(ord_z)) })
}

pub fn curve_exponent<S: Scalar>(f: &MixedFunction, curve: &Curve<S>) -> Result<Rational> {
    Ok(curve_exponent_with(f, curve, GradientPath::Auto)?.exponent)
}

/// `log2 |v(τ)|` for a vector of float series, computed stably for tiny `τ`.
fn log2_norm(v: &[Series<Approx>], log2_tau: f64) -> f64 {
    let mut logs = Vec::new();
    for s in v {
        let Some(&e0) = s.keys().next() else { continue };
        let sum: Complex64 = s
            .iter()
            .map(|(e, c)| c.v * ((*e - e0) as f64 * log2_tau).exp2())
            .sum();
        let m = sum.norm();
        if m > 0.0 {
            logs.push(e0 as f64 * log2_tau + m.log2());
        }
    }
    let Some(top) = logs.iter().copied().reduce(f64::max) else { return f64::NEG_INFINITY };
    top + 0.5 * logs.iter().map(|l| (2.0 * (l - top)).exp2()).sum::<f64>().log2()
}

/// Confirms that `|v(τ)|` scales like `τ^order` over two consecutive halvings of `τ`
/// somewhere in `τ = 1, 1/2, ..., 2^-60` (slope within `1e-6`).
pub fn validate_order(v: &[Series<Approx>], order: u64) -> bool {
    let levels: Vec<f64> = (0..=62).map(|k| log2_norm(v, -(k as f64))).collect();
    let ok = |k: usize| (levels[k] - levels[k + 1] - order as f64).abs() <= 1e-6;
    (0..levels.len() - 2).any(|k| levels[k].is_finite() && ok(k) && ok(k + 1))
}

/// Exponent along a float curve, accepted only when its orders pass [`validate_order`].
pub fn float_curve_exponent(f: &MixedFunction, curve: &FloatCurve) -> Result<Option<CurveExponent>> {
    let ord_z = curve.ord_z();
    if f.is_holomorphic() {
        let g = gradient_series(f, curve)?;
        let Order::Finite(k) = leading(&g.holo) else { return Ok(None) };
        if !validate_order(&g.holo, k) {
            return Ok(None);
        }
        return Ok(Some(CurveExponent { ord_z, ord_grad: k, exponent: Rational::new(BigInt::from(k), BigInt::from(ord_z)) }));
    }
    let pair = match modified_gradient_pair(f, curve) {
        Ok(p) => p,
        Err(Error::ModifiedPair(_)) => return Ok(None),
        Err(e) => return Err(e),
    };
    if !validate_order(&pair.series.0, pair.orders.0) || !validate_order(&pair.series.1, pair.orders.1) {
        return Ok(None);
    }
    let k = pair.orders.0.max(pair.orders.1);
    Ok(Some(CurveExponent { ord_z, ord_grad: k, exponent: Rational::new(BigInt::from(k), BigInt::from(ord_z)) }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{cint, int};
    use crate::mixedpoly::parse;

    fn f(s: &str) -> MixedFunction {
        parse(s, None).unwrap()
    }

    fn curve(n: usize, support: &[usize], weights: &[u32], coeffs: &[(i64, i64)]) -> MonomialCurve {
        Curve::new(
            n,
            VariableSubset::new(support.iter().copied()),
            weights.to_vec(),
            coeffs.iter().map(|&(a, b)| cint(a, b)).collect(),
        )
        .unwrap()
    }

    #[test]
    fn weighted_example_polar_curve() {
        let g = f("z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2");
        let c = curve(4, &[0, 1, 2], &[9, 7, 4], &[(-34992, 0), (1944, 0), (-108, 0)]);
        let o = curve_orders(&g, &c).unwrap();
        assert_eq!(o.ord_z, 4);
        assert_eq!(o.ord_grad, Order::Finite(21));
        assert_eq!(o.holo, vec![Order::Infinite, Order::Infinite, Order::Finite(21), Order::Infinite]);
        assert_eq!(o.exponent, Some(rat(21, 4)));
        assert_eq!(curve_exponent(&g, &c).unwrap(), rat(21, 4));
        let float = float_curve_exponent(&g, &c.to_float()).unwrap().unwrap();
        assert_eq!(float.exponent, rat(21, 4));
    }

    #[test]
    fn simple_orders() {
        let q = f("z1^2+z2^2");
        let o = curve_orders(&q, &curve(2, &[0, 1], &[1, 1], &[(1, 0), (1, 0)])).unwrap();
        assert_eq!((o.ord_z, o.ord_grad), (1, Order::Finite(1)));
        let b = f("z1^3+z2^7");
        let o = curve_orders(&b, &curve(2, &[0, 1], &[4, 1], &[(1, 0), (1, 0)])).unwrap();
        assert_eq!(o.holo, vec![Order::Finite(8), Order::Finite(6)]);
        assert_eq!(o.exponent, Some(int(6)));
        assert_eq!(curve_exponent(&b, &curve(2, &[1], &[1], &[(1, 0)])).unwrap(), int(6));
    }

    #[test]
    fn holomorphic_trivial_pair() {
        let q = f("z1^2+z2^2");
        let c = curve(2, &[0, 1], &[1, 1], &[(1, 0), (1, 0)]);
        let p = modified_gradient_pair(&q, &c).unwrap();
        assert_eq!(p.iterations, 0);
        assert_eq!(p.orders, (1, 1));
        assert!(p.correction.is_empty());
        let (g, h) = &p.limit_vectors;
        for (a, b) in g.iter().zip(h) {
            assert!((a * Complex64::new(0.0, 1.0) - b).norm() < 1e-12);
        }
        assert_eq!(curve_exponent_with(&q, &c, GradientPath::Mixed).unwrap().exponent, int(1));
    }

    #[test]
    fn mixed_pair_against_real_jacobian() {
        let g = f("z1*~z1 + z2^2");
        let c = curve(2, &[0, 1], &[1, 1], &[(1, 0), (1, 0)]);
        let p = modified_gradient_pair(&g, &c).unwrap();
        // Real Jacobian of (|z1|^2 + Re z2^2, Im z2^2) at z = (t, t) has rank 2 for t > 0,
        // with rows (2t, 0, 2t, 0) and (0, 0, 0, 2t): both real gradients have order 1.
        assert_eq!(p.orders.0.max(p.orders.1), 1);
        let rows = [vec![2.0, 0.0, 2.0, 0.0], vec![0.0, 0.0, 0.0, 2.0]];
        let gram = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>();
        assert!(gram(&rows[0], &rows[0]) * gram(&rows[1], &rows[1]) - gram(&rows[0], &rows[1]).powi(2) > 0.0);
    }

    #[test]
    fn mixed_pair_needs_correction() {
        // g = |z1|^2 + Re z2^3 and h = |z1|^2 + Im z2^3 have parallel leading
        // gradients (t, 0) along (t, t); one correction separates them.
        let g = f("(1+i)*z1*~z1 + z2^3");
        let c = curve(2, &[0, 1], &[1, 1], &[(1, 0), (1, 0)]);
        let p = modified_gradient_pair(&g, &c).unwrap();
        assert_eq!(p.iterations, 1);
        assert_eq!(p.base, PairBase::KeptG);
        assert_eq!(p.orders, (1, 2));
        assert_eq!(p.correction, vec![(0, cint(1, 0))]);
        let (a, b) = &p.limit_vectors;
        let re: f64 = a.iter().zip(b).map(|(x, y)| (x * y.conj()).re).sum();
        assert!(1.0 - re * re > 1e-9);
        assert_eq!(curve_exponent(&g, &c).unwrap(), int(2));
    }

    #[test]
    fn invalid_curves() {
        let s = VariableSubset::new([0]);
        assert!(MonomialCurve::new(2, s.clone(), vec![0], vec![cint(1, 0)]).is_err());
        assert!(MonomialCurve::new(2, s.clone(), vec![1], vec![cint(0, 0)]).is_err());
        assert!(MonomialCurve::with_higher_terms(2, s, vec![2], vec![cint(1, 0)], vec![vec![(2, cint(1, 0))]]).is_err());
    }

    #[test]
    fn higher_terms_shift_orders() {
        let b = f("z1^2 - z2^2");
        let plain = curve(2, &[0, 1], &[1, 1], &[(1, 0), (1, 0)]);
        assert!(substitute(&b, &plain).unwrap().is_empty());
        let bent = MonomialCurve::with_higher_terms(
            2,
            VariableSubset::new([0, 1]),
            vec![1, 1],
            vec![cint(1, 0), cint(1, 0)],
            vec![vec![(3, cint(1, 0))], vec![]],
        )
        .unwrap();
        let s = substitute(&b, &bent).unwrap();
        assert_eq!(s.keys().next(), Some(&4));
    }

    #[test]
    fn float_validation_rejects_false_cancellation() {
        let mut s: Series<Approx> = Series::new();
        s.insert(2, Approx { v: Complex64::new(1e-3, 0.0), mag: 1.0 });
        s.insert(5, Approx::new(Complex64::new(1.0, 0.0)));
        assert!(validate_order(&[s.clone()], 2));
        assert!(!validate_order(&[s], 5));
    }
}
