//! Probabilistic checks of the non-degeneracy hypotheses: face functions
//! without torus critical points, and the Łojasiewicz condition on vanishing
//! coordinate subspaces. Witnesses are searched by multistart damped least
//! squares in log-polar torus coordinates.

use std::fmt;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::arith::{fmt_int_vec, fmt_u32_vec};
use crate::dualfan::minkowski_sum;
use crate::error::Result;
use crate::invariants::{int_weight, AxisMonomialTable};
use crate::mixedpoly::{FloatTerm, MixedFunction, VariableSubset};
use crate::newton::{build_polyhedron, NewtonPolyhedron};
use crate::numeric::{derive_seed, levenberg_marquardt, random_torus_start, torus_point, LmOptions};

#[derive(Debug, Clone, PartialEq)]
pub struct NondegBudget {
    pub starts: usize,
    pub iters: usize,
    pub tol: f64,
    pub seed: u64,
    /// Bound `L` on `|log |z_i||`.
    pub torus_box: f64,
    /// Maximum number of refinement cones examined per vanishing subspace.
    pub cone_cap: usize,
    /// Total iteration allowance across all faces of one check.
    pub max_total_iterations: u64,
    /// Use the real-rank test even for holomorphic functions.
    pub force_mixed: bool,
}

impl Default for NondegBudget {
    fn default() -> Self {
        NondegBudget {
            starts: 64,
            iters: 200,
            tol: 1e-9,
            seed: 0,
            torus_box: 5.0,
            cone_cap: 4096,
            max_total_iterations: 50_000_000,
            force_mixed: false,
        }
    }
}

impl NondegBudget {
    pub fn with_seed(seed: u64) -> Self {
        NondegBudget { seed, ..Default::default() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Face,
    Lojasiewicz,
}

impl CheckKind {
    pub fn label(self) -> &'static str {
        match self {
            CheckKind::Face => "face-nondegeneracy",
            CheckKind::Lojasiewicz => "lojasiewicz-nondegeneracy",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VerdictStatus {
    PresumedOk,
    DegenerateWitness,
    Inconclusive,
}

impl VerdictStatus {
    pub fn label(self) -> &'static str {
        match self {
            VerdictStatus::PresumedOk => "presumed-ok",
            VerdictStatus::DegenerateWitness => "degenerate-witness",
            VerdictStatus::Inconclusive => "inconclusive",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    pub face: String,
    /// Point of the torus (coordinates outside the examined subspace are 0).
    pub point: Vec<Complex64>,
    pub residual: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Effort {
    pub faces: usize,
    pub starts: usize,
    pub iterations: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verdict {
    pub check: CheckKind,
    pub status: VerdictStatus,
    pub witness: Option<Witness>,
    pub effort: Effort,
    pub seed: u64,
    pub notes: Vec<String>,
}

impl Verdict {
    pub fn summary(&self) -> String {
        let mut s = format!("{} {}", self.check.label(), self.status.label());
        if let Some(w) = &self.witness {
            s.push_str(&format!(" on {} at z={} (residual {:.3e})", w.face, fmt_point(&w.point), w.residual));
        }
        for n in &self.notes {
            s.push_str(&format!("; {n}"));
        }
        s
    }

    pub fn is_ok(&self) -> bool {
        self.status == VerdictStatus::PresumedOk
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.summary())
    }
}

pub fn fmt_complex64(z: &Complex64) -> String {
    format!("{:.6}{:+.6}i", z.re, z.im)
}

pub fn fmt_point(z: &[Complex64]) -> String {
    let parts: Vec<String> = z.iter().map(fmt_complex64).collect();
    format!("({})", parts.join(", "))
}

/// Residual systems whose zeros on the torus witness degeneracy.
enum System {
    /// `z_k ∂f/∂z_k`, normalized.
    HoloCritical(Vec<FloatTerm>),
    /// 2x2 minors of the real Jacobian of `(Re f, Im f)` in log-polar coordinates, scaled by the term magnitudes.
    RealRank(Vec<FloatTerm>),
    /// Common zero of several functions.
    CommonZero(Vec<Vec<FloatTerm>>),
    /// `|A_j| = |B_j|` for every pair.
    ModulusBalance(Vec<(Vec<FloatTerm>, Vec<FloatTerm>)>),
}

fn values(terms: &[FloatTerm], z: &[Complex64]) -> (Vec<Complex64>, f64) {
    let mut mag = 0.0;
    let vals = terms
        .iter()
        .map(|t| {
            let v = t.eval(z);
            mag += v.norm();
            v
        })
        .collect();
    (vals, mag.max(1e-300))
}

impl System {
    fn residual(&self, z: &[Complex64], out: &mut Vec<f64>) {
        out.clear();
        let m = z.len();
        match self {
            System::HoloCritical(terms) => {
                let (vals, mag) = values(terms, z);
                for k in 0..m {
                    let s: Complex64 = terms.iter().zip(&vals).map(|(t, v)| v * t.nu[k] as f64).sum::<Complex64>() / mag;
                    out.push(s.re);
                    out.push(s.im);
                }
            }
            System::RealRank(terms) => {
                let (vals, mag) = values(terms, z);
                let mut cols = Vec::with_capacity(2 * m);
                for k in 0..m {
                    let ds: Complex64 = terms.iter().zip(&vals).map(|(t, v)| v * (t.nu[k] + t.mu[k]) as f64).sum();
                    let dt: Complex64 = terms
                        .iter()
                        .zip(&vals)
                        .map(|(t, v)| v * Complex64::new(0.0, t.nu[k] as f64 - t.mu[k] as f64))
                        .sum();
                    cols.push(ds / mag);
                    cols.push(dt / mag);
                }
                for a in 0..cols.len() {
                    for b in a + 1..cols.len() {
                        out.push(cols[a].re * cols[b].im - cols[b].re * cols[a].im);
                    }
                }
            }
            System::CommonZero(fns) => {
                for terms in fns {
                    let (vals, mag) = values(terms, z);
                    let s: Complex64 = vals.iter().sum::<Complex64>() / mag;
                    out.push(s.re);
                    out.push(s.im);
                }
            }
            System::ModulusBalance(pairs) => {
                for (a, b) in pairs {
                    let (va, ma) = values(a, z);
                    let (vb, mb) = values(b, z);
                    let sa: Complex64 = va.iter().sum();
                    let sb: Complex64 = vb.iter().sum();
                    let ma = if a.is_empty() { 0.0 } else { ma };
                    let mb = if b.is_empty() { 0.0 } else { mb };
                    out.push((sa.norm_sqr() - sb.norm_sqr()) / (ma * ma + mb * mb).max(1e-300));
                }
            }
        }
    }
}

/// Norm of the face-critical residual of `face` at `z`, as used for witnesses.
pub fn face_residual(face: &MixedFunction, z: &[Complex64], mixed: bool) -> f64 {
    let terms = face.float_terms();
    let sys = if mixed || !face.is_holomorphic() { System::RealRank(terms) } else { System::HoloCritical(terms) };
    let mut out = Vec::new();
    sys.residual(z, &mut out);
    out.iter().map(|x| x * x).sum::<f64>().sqrt()
}

struct Search<'a> {
    budget: &'a NondegBudget,
    effort: Effort,
    exhausted: bool,
}

impl Search<'_> {
    /// Multistart search over `m` torus variables; returns the point and residual of a zero.
    fn run(&mut self, sys: &System, m: usize, seed: u64) -> Option<(Vec<Complex64>, f64)> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let opts = LmOptions { iters: self.budget.iters, tol: self.budget.tol, boxed: m, bound: self.budget.torus_box };
        for _ in 0..self.budget.starts {
            if self.effort.iterations >= self.budget.max_total_iterations {
                self.exhausted = true;
                return None;
            }
            self.effort.starts += 1;
            let x0 = random_torus_start(&mut rng, m, 1.5_f64.min(self.budget.torus_box));
            let res = levenberg_marquardt(
                |x, out| sys.residual(&torus_point(x), out),
                x0,
                &opts,
            );
            self.effort.iterations += res.iterations.max(1) as u64;
            if res.norm <= self.budget.tol {
                return Some((torus_point(&res.x), res.norm));
            }
        }
        None
    }
}

fn face_label(points: &[Vec<u32>]) -> String {
    let parts: Vec<String> = points.iter().map(|p| fmt_u32_vec(p)).collect();
    format!("face {{{}}}", parts.join(","))
}

/// Common torus zero of `fns` (all in the same `m` variables), polished to `accept`.
pub(crate) fn solve_common_zero(
    fns: &[MixedFunction],
    starts: usize,
    iters: usize,
    accept: f64,
    seed: u64,
) -> Option<(Vec<Complex64>, f64)> {
    let m = fns.first()?.n();
    let budget = NondegBudget { starts, iters, tol: accept, ..NondegBudget::default() };
    let mut search = Search { budget: &budget, effort: Effort::default(), exhausted: false };
    let sys = System::CommonZero(fns.iter().map(MixedFunction::float_terms).collect());
    search.run(&sys, m, seed)
}

/// Places a point of the compressed coordinates `vars` back into `n` coordinates.
fn spread(n: usize, vars: &VariableSubset, z: &[Complex64], fill: Complex64, within: &VariableSubset) -> Vec<Complex64> {
    let mut out: Vec<Complex64> = (0..n).map(|i| if within.contains(i) { fill } else { Complex64::new(0.0, 0.0) }).collect();
    for (k, &i) in vars.members().iter().enumerate() {
        out[i] = z[k];
    }
    out
}

fn finish(check: CheckKind, search: Search, seed: u64, witness: Option<Witness>, total: usize) -> Verdict {
    let mut notes = Vec::new();
    let status = if witness.is_some() {
        VerdictStatus::DegenerateWitness
    } else if search.exhausted {
        notes.push(format!("iteration budget exhausted after {} of {} cases", search.effort.faces, total));
        VerdictStatus::Inconclusive
    } else {
        VerdictStatus::PresumedOk
    };
    Verdict { check, status, witness, effort: search.effort, seed, notes }
}

/// Searches every compact face of `Γ(f)` for a torus critical point of its face function.
pub fn check_face_nondegeneracy(f: &MixedFunction, budget: &NondegBudget) -> Result<Verdict> {
    let poly = build_polyhedron(f)?;
    check_faces_of(f, &poly, budget)
}

pub fn check_faces_of(f: &MixedFunction, poly: &NewtonPolyhedron, budget: &NondegBudget) -> Result<Verdict> {
    let faces = poly.compact_faces()?;
    let mixed = budget.force_mixed || !f.is_holomorphic();
    let mut search = Search { budget, effort: Effort::default(), exhausted: false };
    let coords = poly.coords();
    let all = VariableSubset::full(f.n());
    for (idx, face) in faces.iter().enumerate() {
        if search.exhausted {
            break;
        }
        search.effort.faces += 1;
        let face_fn = f.face_function(&int_weight(&face.weight))?;
        let points: Vec<Vec<u32>> = face.indices.iter().map(|&i| coords[i].clone()).collect();
        let label = face_label(&points);
        if face_fn.len() == 1 {
            let (e, _) = face_fn.terms().next().expect("one term");
            if mixed && e.nu == e.mu {
                let point = vec![Complex64::new(1.0, 0.0); f.n()];
                let residual = face_residual(&face_fn, &point, true);
                let w = Witness { face: label, point, residual };
                return Ok(finish(CheckKind::Face, search, budget.seed, Some(w), faces.len()));
            }
            continue;
        }
        let vars = face_fn.variables();
        let terms = face_fn.compress(&vars).float_terms();
        let sys = if mixed { System::RealRank(terms) } else { System::HoloCritical(terms) };
        if let Some((z, residual)) = search.run(&sys, vars.len(), derive_seed(budget.seed, 1, idx as u64)) {
            let point = spread(f.n(), &vars, &z, Complex64::new(1.0, 0.0), &all);
            let w = Witness { face: label, point, residual };
            return Ok(finish(CheckKind::Face, search, budget.seed, Some(w), faces.len()));
        }
    }
    Ok(finish(CheckKind::Face, search, budget.seed, None, faces.len()))
}

/// Strictly positive weights on `N^{*I}`, one per cone of the common refinement
/// of the derivative faces and the argmin partition.
fn refinement_weights(restricted: &[MixedFunction], m: usize, cap: usize) -> Result<std::result::Result<Vec<Vec<i64>>, usize>> {
    let simplex: Vec<Vec<u32>> = (0..m)
        .map(|i| {
            let mut e = vec![0; m];
            e[i] = 1;
            e
        })
        .collect();
    let mut acc = crate::dualfan::hull_vertices(m, &simplex)?;
    for g in restricted.iter().filter(|g| !g.is_zero()) {
        acc = minkowski_sum(m, &acc, &g.support(), crate::dualfan::DEFAULT_MINKOWSKI_CAP)?;
    }
    let poly = NewtonPolyhedron::from_coords(m, &acc)?;
    let faces = poly.compact_faces()?;
    if faces.len() > cap {
        return Ok(Err(faces.len()));
    }
    let mut weights: Vec<Vec<i64>> = faces.into_iter().map(|f| crate::arith::primitive_int(&f.weight)).collect();
    weights.sort();
    weights.dedup();
    Ok(Ok(weights))
}

/// Checks the Łojasiewicz condition on every vanishing coordinate subspace of the table.
pub fn check_loj_nondegeneracy(f: &MixedFunction, table: &AxisMonomialTable, budget: &NondegBudget) -> Result<Verdict> {
    let n = f.n();
    let mixed = !f.is_holomorphic();
    let mut search = Search { budget, effort: Effort::default(), exhausted: false };
    let mut notes = Vec::new();
    let mut total = 0;
    for (sidx, data) in table.per_subspace.iter().enumerate() {
        if search.exhausted {
            break;
        }
        let subset = &data.subset;
        let m = subset.len();
        let j_all = data.j_union(subset.members());
        let mut holo = std::collections::BTreeMap::new();
        let mut anti = std::collections::BTreeMap::new();
        let mut family = Vec::new();
        for &j in &j_all {
            let a = f.wirtinger_derivative(j, false)?.restrict(subset).compress(subset);
            let b = f.wirtinger_derivative(j, true)?.restrict(subset).compress(subset);
            family.push(a.clone());
            family.push(b.clone());
            holo.insert(j, a);
            anti.insert(j, b);
        }
        let weights = match refinement_weights(&family, m, budget.cone_cap)? {
            Ok(w) => w,
            Err(count) => {
                notes.push(format!("{count} refinement cones on {subset} exceed the cap of {}; unexplored", budget.cone_cap));
                search.exhausted = true;
                break;
            }
        };
        total += weights.len();
        for (widx, w) in weights.iter().enumerate() {
            search.effort.faces += 1;
            let wr = int_weight(w);
            let min = *w.iter().min().expect("non-empty");
            let argmin: Vec<usize> = (0..m).filter(|&k| w[k] == min).map(|k| subset.members()[k]).collect();
            let jp = data.j_union(&argmin);
            let jp_label: Vec<usize> = jp.iter().map(|j| j + 1).collect();
            let label = format!("I={} P={} J(P)={}", subset, fmt_int_vec(w), VariableSubset::new(jp_label.iter().map(|j| j - 1)));
            let seed = derive_seed(budget.seed, 2 + sidx as u64, widx as u64);
            let found = if !mixed {
                let faces: Vec<MixedFunction> = jp
                    .iter()
                    .map(|j| holo[j].face_function(&wr))
                    .collect::<Result<_>>()?;
                if faces.iter().any(|g| g.len() == 1) {
                    continue;
                }
                let vars = faces.iter().fold(VariableSubset::default(), |acc, g| VariableSubset::new(acc.members().iter().copied().chain(g.variables().members().iter().copied())));
                let sys = System::CommonZero(faces.iter().map(|g| g.compress(&vars).float_terms()).collect());
                search.run(&sys, vars.len(), seed).map(|r| (vars, r))
            } else {
                let mut pairs = Vec::new();
                let mut trivially_ok = false;
                for j in &jp {
                    let da = holo[j].min_degree(&wr);
                    let db = anti[j].min_degree(&wr);
                    let a = match (&da, &db) {
                        (Some(x), Some(y)) if x > y => MixedFunction::zero(m),
                        (Some(_), _) => holo[j].face_function(&wr)?,
                        _ => MixedFunction::zero(m),
                    };
                    let b = match (&da, &db) {
                        (Some(x), Some(y)) if y > x => MixedFunction::zero(m),
                        (_, Some(_)) => anti[j].face_function(&wr)?,
                        _ => MixedFunction::zero(m),
                    };
                    if (a.is_zero() && b.len() == 1) || (b.is_zero() && a.len() == 1) {
                        trivially_ok = true;
                        break;
                    }
                    pairs.push((a, b));
                }
                if trivially_ok {
                    continue;
                }
                let vars = pairs.iter().fold(VariableSubset::default(), |acc, (a, b)| {
                    VariableSubset::new(acc.members().iter().copied().chain(a.variables().members().iter().copied()).chain(b.variables().members().iter().copied()))
                });
                let sys = System::ModulusBalance(
                    pairs.iter().map(|(a, b)| (a.compress(&vars).float_terms(), b.compress(&vars).float_terms())).collect(),
                );
                search.run(&sys, vars.len(), seed).map(|r| (vars, r))
            };
            if let Some((vars, (z, residual))) = found {
                let local = spread(m, &vars, &z, Complex64::new(1.0, 0.0), &VariableSubset::full(m));
                let point = spread(n, subset, &local, Complex64::new(0.0, 0.0), &VariableSubset::default());
                let w = Witness { face: label, point, residual };
                let mut v = finish(CheckKind::Lojasiewicz, search, budget.seed, Some(w), total);
                v.notes.extend(notes);
                return Ok(v);
            }
            if search.exhausted {
                break;
            }
        }
    }
    let mut v = finish(CheckKind::Lojasiewicz, search, budget.seed, None, total);
    if !notes.is_empty() {
        v.status = VerdictStatus::Inconclusive;
    }
    v.notes.extend(notes);
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dualfan::vanishing_subspaces;
    use crate::invariants::axis_monomial_table;
    use crate::mixedpoly::parse;

    fn f(s: &str) -> MixedFunction {
        parse(s, None).unwrap()
    }

    fn budget() -> NondegBudget {
        NondegBudget { starts: 16, ..NondegBudget::with_seed(7) }
    }

    #[test]
    fn quadric_is_ok() {
        let v = check_face_nondegeneracy(&f("z1^2+z2^2"), &budget()).unwrap();
        assert_eq!(v.status, VerdictStatus::PresumedOk);
        assert_eq!(v.effort.faces, 3);
    }

    #[test]
    fn square_of_linear_form_is_degenerate() {
        let g = f("(z1+z2)^2");
        let v = check_face_nondegeneracy(&g, &budget()).unwrap();
        assert_eq!(v.status, VerdictStatus::DegenerateWitness);
        let w = v.witness.unwrap();
        assert!(w.residual <= 1e-9);
        assert!((w.point[0] + w.point[1]).norm() < 1e-6 * w.point[0].norm());
        assert!(face_residual(&g, &w.point, false) < 1e-9);
    }

    #[test]
    fn real_valued_mixed_is_degenerate() {
        let v = check_face_nondegeneracy(&f("z1*~z1 + z2*~z2"), &budget()).unwrap();
        assert_eq!(v.status, VerdictStatus::DegenerateWitness);
    }

    #[test]
    fn mixed_checker_agrees_on_holomorphic_input() {
        for s in ["z1^2+z2^2", "(z1+z2)^2", "z1^3+z2^7", "z1^2*z2 + z2^3*z3 + z3^4*z1"] {
            let h = check_face_nondegeneracy(&f(s), &budget()).unwrap();
            let m = check_face_nondegeneracy(&f(s), &NondegBudget { force_mixed: true, ..budget() }).unwrap();
            assert_eq!(h.status, m.status, "{s}");
        }
    }

    #[test]
    fn deterministic_under_seed() {
        let a = check_face_nondegeneracy(&f("(z1+z2)^2 + z1^5"), &budget()).unwrap();
        let b = check_face_nondegeneracy(&f("(z1+z2)^2 + z1^5"), &budget()).unwrap();
        assert_eq!(a, b);
    }

    fn loj(s: &str) -> Verdict {
        let g = f(s);
        let t = axis_monomial_table(&g, &vanishing_subspaces(&g)).unwrap();
        check_loj_nondegeneracy(&g, &t, &budget()).unwrap()
    }

    #[test]
    fn lojasiewicz_checks() {
        assert!(loj("z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2").is_ok());
        assert!(loj("z1^9*z2 + z2^4 + z3^7").is_ok());
        let v = loj("z1^2*z3 - z2^2*z3 + z3^5");
        assert_eq!(v.status, VerdictStatus::DegenerateWitness);
        let w = v.witness.unwrap();
        assert!(w.face.starts_with("I={1,2}"));
        assert!((w.point[0].norm() - w.point[1].norm()).abs() < 1e-6);
        assert_eq!(w.point[2], Complex64::new(0.0, 0.0));
    }
}
