//! Lower bounds for the exponent from explicit curve families.

use num_bigint::BigInt;
use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{c_to_f64, cint, CRational, Rational};
use crate::curves::{curve_exponent_with, float_curve_exponent, Approx, Curve, CurveExponent, GradientPath, MonomialCurve};
use crate::dualfan::{fan_vertices, JacobianDiagram, VertexKind};
use crate::invariants::convenient_profile;
use crate::mixedpoly::{MixedFunction, VariableSubset};
use crate::nondeg::solve_common_zero;
use crate::numeric::derive_seed;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SamplerBudget {
    /// Number of curves (including polar solve attempts) to evaluate.
    pub curves: usize,
    pub seed: u64,
    /// Largest weight used for generated random curves.
    pub max_weight: u32,
    pub polar_starts: usize,
    pub polar_iters: usize,
    pub path: GradientPath,
}

impl Default for SamplerBudget {
    fn default() -> Self {
        SamplerBudget { curves: 2000, seed: 0, max_weight: 50, polar_starts: 8, polar_iters: 300, path: GradientPath::Auto }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Strategy {
    Axis,
    FanVertex,
    Polar,
    Random,
}

impl Strategy {
    pub fn label(self) -> &'static str {
        match self {
            Strategy::Axis => "axis",
            Strategy::FanVertex => "fan-vertex",
            Strategy::Polar => "polar",
            Strategy::Random => "random",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCurve {
    pub strategy: Strategy,
    pub support: VariableSubset,
    pub weights: Vec<u32>,
    pub coeffs: Vec<Complex64>,
    /// Exact coefficients when the curve was evaluated exactly.
    pub exact_coeffs: Option<Vec<CRational>>,
    pub ord_z: u64,
    pub ord_grad: u64,
    pub exponent: Rational,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LowerBound {
    pub value: Option<Rational>,
    pub witness: Option<WitnessCurve>,
    pub curves_evaluated: usize,
    pub curves_rejected: usize,
}

struct Runner<'a> {
    f: &'a MixedFunction,
    budget: &'a SamplerBudget,
    used: usize,
    rejected: usize,
    best: Option<WitnessCurve>,
}

impl Runner<'_> {
    fn full(&self) -> bool {
        self.used >= self.budget.curves
    }

    fn record(&mut self, strategy: Strategy, support: &VariableSubset, weights: &[u32], coeffs: Vec<Complex64>, exact: Option<Vec<CRational>>, e: CurveExponent) {
        if self.best.as_ref().is_none_or(|b| e.exponent > b.exponent) {
            self.best = Some(WitnessCurve {
                strategy,
                support: support.clone(),
                weights: weights.to_vec(),
                coeffs,
                exact_coeffs: exact,
                ord_z: e.ord_z,
                ord_grad: e.ord_grad,
                exponent: e.exponent,
            });
        }
    }

    fn exact(&mut self, strategy: Strategy, support: &VariableSubset, weights: &[u32], coeffs: Vec<CRational>) {
        if self.full() {
            return;
        }
        self.used += 1;
        let curve = match MonomialCurve::new(self.f.n(), support.clone(), weights.to_vec(), coeffs.clone()) {
            Ok(c) => c,
            Err(_) => {
                self.rejected += 1;
                return;
            }
        };
        match curve_exponent_with(self.f, &curve, self.budget.path) {
            Ok(e) => {
                let floats = coeffs.iter().map(c_to_f64).collect();
                self.record(strategy, support, weights, floats, Some(coeffs), e);
            }
            Err(_) => self.rejected += 1,
        }
    }

    fn float(&mut self, support: &VariableSubset, weights: &[u32], coeffs: Vec<Complex64>) {
        let approx = coeffs.iter().map(|&c| Approx::new(c)).collect();
        let Ok(curve) = Curve::new(self.f.n(), support.clone(), weights.to_vec(), approx) else {
            self.rejected += 1;
            return;
        };
        match float_curve_exponent(self.f, &curve) {
            Ok(Some(e)) => self.record(Strategy::Polar, support, weights, coeffs, None, e),
            _ => self.rejected += 1,
        }
    }
}

fn gaussian<R: Rng>(rng: &mut R) -> CRational {
    loop {
        let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if a != 0 || b != 0 {
            return cint(a, b);
        }
    }
}

fn gaussians<R: Rng>(rng: &mut R, k: usize) -> Vec<CRational> {
    (0..k).map(|_| gaussian(rng)).collect()
}

fn ones(k: usize) -> Vec<CRational> {
    vec![cint(1, 0); k]
}

/// Strictly positive fan vertices of `f^I` for every subset `I` on which they are defined.
fn subspace_vertices(f: &MixedFunction, diagram: Option<&JacobianDiagram>) -> Vec<(VariableSubset, Vec<u32>)> {
    let n = f.n();
    let mut out = Vec::new();
    for mask in 1u32..(1 << n) {
        let subset = VariableSubset::new((0..n).filter(|i| mask & (1 << i) != 0));
        let g = f.restrict(&subset).compress(&subset);
        if g.is_zero() {
            continue;
        }
        if let Ok(vs) = fan_vertices(&g) {
            for v in vs.into_iter().filter(|v| v.kind == VertexKind::StrictlyPositive) {
                out.push((subset.clone(), v.weight.iter().map(|&x| x as u32).collect()));
            }
        }
    }
    if let Some(d) = diagram {
        let full = VariableSubset::full(n);
        for v in &d.positive {
            out.push((full.clone(), v.vertex.weight.iter().map(|&x| x as u32).collect()));
        }
    }
    out.sort();
    out.dedup();
    out
}

/// Maximizes the curve exponent over axis, fan-vertex, polar and random curve families.
pub fn sample_lower_bound(f: &MixedFunction, diagram: Option<&JacobianDiagram>, budget: &SamplerBudget) -> LowerBound {
    let n = f.n();
    let mut run = Runner { f, budget, used: 0, rejected: 0, best: None };
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(budget.seed, 11, 0));
    let max_w = budget.max_weight.max(2);

    // Axis and two-variable curves.
    for i in 0..n {
        run.exact(Strategy::Axis, &VariableSubset::new([i]), &[1], ones(1));
    }
    let profile = convenient_profile(f);
    let mut exps: Vec<u32> = vec![2, 3, 4, 5, 6, 8, 10, 12, 16, 20, 24, 32, 40, max_w];
    for b in profile.b.iter().flatten() {
        exps.extend([b.saturating_sub(1), *b, b + 1]);
    }
    exps.retain(|&e| (2..=max_w).contains(&e));
    exps.sort_unstable();
    exps.dedup();
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            let subset = VariableSubset::new([i, j]);
            for &e in &exps {
                let weights = if i < j { vec![1, e] } else { vec![e, 1] };
                run.exact(Strategy::Axis, &subset, &weights, ones(2));
            }
        }
    }

    // Fan vertices of every coordinate restriction, with small perturbations.
    let vertices = subspace_vertices(f, diagram);
    for (subset, w) in &vertices {
        let k = w.len();
        let mut variants = vec![w.clone()];
        for a in 0..k {
            for delta in [-1i64, 1] {
                let v = w[a] as i64 + delta;
                if v >= 1 {
                    let mut p = w.clone();
                    p[a] = v as u32;
                    variants.push(p);
                }
            }
        }
        for p in variants {
            run.exact(Strategy::FanVertex, subset, &p, ones(k));
            let c = gaussians(&mut rng, k);
            run.exact(Strategy::FanVertex, subset, &p, c);
        }
    }

    // Polar curves: coefficients annihilating the lowest gradient levels.
    for (t, (subset, w)) in vertices.iter().enumerate() {
        let weights: Vec<Rational> = w.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        let mut comps = Vec::new();
        for j in 0..n {
            for conj in [false, true] {
                if let Ok(d) = f.wirtinger_derivative(j, conj) {
                    let r = d.restrict(subset).compress(subset);
                    if let Some(deg) = r.min_degree(&weights) {
                        comps.push((deg, r));
                    }
                }
            }
        }
        let mut levels: Vec<Rational> = comps.iter().map(|(d, _)| d.clone()).collect();
        levels.sort();
        levels.dedup();
        for (k, level) in levels.iter().enumerate().take(levels.len().saturating_sub(1)) {
            if run.full() {
                break;
            }
            run.used += 1;
            let eqs: Vec<MixedFunction> = comps
                .iter()
                .filter(|(d, _)| d <= level)
                .filter_map(|(_, r)| r.face_function(&weights).ok())
                .collect();
            if eqs.iter().any(|e| e.len() == 1) {
                run.rejected += 1;
                continue;
            }
            let seed = derive_seed(budget.seed, 12 + t as u64, k as u64);
            match solve_common_zero(&eqs, budget.polar_starts, budget.polar_iters, 1e-12, seed) {
                Some((z, _)) => run.float(subset, w, z),
                None => run.rejected += 1,
            }
        }
    }

    // Random curves on random coordinate subspaces.
    while !run.full() {
        let subset = if rng.gen_bool(0.4) {
            VariableSubset::full(n)
        } else {
            let mask = rng.gen_range(1u32..(1 << n));
            VariableSubset::new((0..n).filter(|i| mask & (1 << i) != 0))
        };
        let top = if rng.gen_bool(0.5) { max_w.min(10) } else { max_w };
        let weights: Vec<u32> = (0..subset.len()).map(|_| rng.gen_range(1..=top)).collect();
        let coeffs = gaussians(&mut rng, subset.len());
        run.exact(Strategy::Random, &subset, &weights, coeffs);
    }

    LowerBound {
        value: run.best.as_ref().map(|b| b.exponent.clone()),
        witness: run.best,
        curves_evaluated: run.used,
        curves_rejected: run.rejected,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use crate::dualfan::jacobian_diagram;
    use crate::mixedpoly::parse;

    fn lower(s: &str, curves: usize) -> LowerBound {
        let f = parse(s, None).unwrap();
        let d = jacobian_diagram(&f).ok();
        sample_lower_bound(&f, d.as_ref(), &SamplerBudget { curves, seed: 3, ..Default::default() })
    }

    #[test]
    fn brieskorn_and_quadric() {
        assert_eq!(lower("z1^3+z2^7", 300).value, Some(int(6)));
        assert_eq!(lower("z1^2+z2^2", 100).value, Some(int(1)));
    }

    #[test]
    fn weighted_example_reaches_polar_witness() {
        let l = lower("z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2", 2000);
        assert_eq!(l.value, Some(rat(21, 4)));
        let w = l.witness.unwrap();
        assert_eq!((w.ord_z, w.ord_grad), (4, 21));
        assert_eq!(w.strategy, Strategy::Polar);
    }

    #[test]
    fn deterministic() {
        assert_eq!(lower("z1^7+z1^4*z2+z2^7", 200), lower("z1^7+z1^4*z2+z2^7", 200));
    }
}
