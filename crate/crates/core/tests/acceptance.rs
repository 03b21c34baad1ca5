//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

use std::time::{Duration, Instant};

use lojbound::arith::{cint, fmt_int_vec, fmt_rational, int, rat, CRational, Rational};
use lojbound::bounds::{bracket, upper_bound, BoundConfig, TheoremPath};
use lojbound::catalog::{CatalogEntry, DEGENERATE, NONDEGENERATE};
use lojbound::curves::{curve_exponent_with, curve_orders, modified_gradient_pair, GradientPath, MonomialCurve};
use lojbound::dualfan::{fan_vertices, jacobian_diagram, VertexKind};
use lojbound::invariants::{axis_monomial_table, eta, int_weight, invariant_sheet, EtaVariant};
use lojbound::newton::build_polyhedron;
use lojbound::nondeg::{check_face_nondegeneracy, NondegBudget, VerdictStatus};
use lojbound::report::check_verdicts;
use lojbound::{parse, ExponentPair, MixedFunction, VariableSubset};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SEED: u64 = 20240917;
const JDUAL: &str = "(z1^9+z2^3+z3^6)*z2+z3^7+z4^7";
const WEIGHTED: &str = "z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2";

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn f(s: &str) -> MixedFunction {
    parse(s, None).expect("valid expression")
}

fn cfg() -> BoundConfig {
    BoundConfig::with_seed(SEED)
}

fn gaussian(rng: &mut ChaCha8Rng) -> CRational {
    loop {
        let (a, b) = (rng.gen_range(-3..=3), rng.gen_range(-3..=3));
        if a != 0 || b != 0 {
            return cint(a, b);
        }
    }
}

fn ac1() -> Check {
    let g = f(JDUAL);
    let vs = fan_vertices(&g).map_err(|e| e.to_string())?;
    let positive: Vec<_> = vs.iter().filter(|v| v.kind == VertexKind::StrictlyPositive).collect();
    ensure(positive.len() == 1 && positive[0].weight == [7, 21, 12, 12], || {
        format!("strictly positive vertices {:?}", positive.iter().map(|v| &v.weight).collect::<Vec<_>>())
    })?;
    let s = vs
        .iter()
        .find(|v| v.weight == [0, 7, 1, 1])
        .ok_or("vertex (0,7,1,1) missing")?;
    ensure(s.kind == VertexKind::Vanishing && s.vanishing_subset == Some(VariableSubset::new([0])), || {
        format!("(0,7,1,1) classified {:?} {:?}", s.kind, s.vanishing_subset)
    })?;
    let f_r = g.face_function(&int_weight(&positive[0].weight)).map_err(|e| e.to_string())?;
    let f_s = g.face_function(&int_weight(&s.weight)).map_err(|e| e.to_string())?;
    ensure(f_r == f("z1^9*z2+z2^4+z3^7+z4^7"), || format!("face at R is {f_r}"))?;
    ensure(f_s == f("z1^9*z2+z3^7+z4^7"), || format!("face at S is {f_s}"))?;
    let e = eta(&g, &int_weight(&[7, 21, 12, 12]), EtaVariant::Plain).map_err(|e| e.to_string())?;
    ensure(e == int(11), || format!("eta(R) = {}", fmt_rational(&e)))?;
    Ok("R=(7,21,12,12), S=(0,7,1,1) I={1}, eta(R)=11".into())
}

fn ac2() -> Check {
    let g = f(JDUAL);
    let d = jacobian_diagram(&g).map_err(|e| e.to_string())?;
    let p = d
        .positive
        .iter()
        .find(|jv| jv.vertex.weight == [2, 6, 3, 3])
        .ok_or("(2,6,3,3) not a strictly positive Jacobian vertex")?;
    let face = g.face_function(&int_weight(&p.vertex.weight)).map_err(|e| e.to_string())?;
    ensure(face == f("z3^7+z4^7"), || format!("face function {face}"))?;
    ensure(!d.base_positive().any(|v| v.weight == [2, 6, 3, 3]), || "(2,6,3,3) also a vertex of the Newton fan".into())?;
    Ok(format!("(2,6,3,3) face z3^7 + z4^7, region {}", p.region.tag.label()))
}

fn ac3() -> Check {
    let g = f(WEIGHTED);
    let mut c = cfg();
    c.sampler.curves = 2000;
    let r = bracket(&g, &c).map_err(|e| e.to_string())?;
    ensure(r.upper == rat(21, 4), || format!("upper {}", fmt_rational(&r.upper)))?;
    let TheoremPath::Join(children) = &r.path else {
        return Err(format!("path {}", r.path));
    };
    ensure(children.contains(&TheoremPath::WeightedEtaR), || format!("path {}", r.path))?;
    let lower = r.lower.as_ref().ok_or("no lower bound")?;
    let w = lower.witness.as_ref().ok_or("no witness")?;
    ensure(lower.value == Some(rat(21, 4)), || format!("lower {:?}", lower.value.as_ref().map(fmt_rational)))?;
    ensure((w.ord_z, w.ord_grad) == (4, 21), || format!("witness orders ({}, {})", w.ord_z, w.ord_grad))?;
    ensure(r.tight, || "not tight".into())?;
    Ok(format!("upper=lower=21/4 path={} witness ord_z=4 ord_grad=21", r.path))
}

fn ac4() -> Check {
    let mut c = cfg();
    c.sampler.curves = 300;
    let mut count = 0;
    for a in 2..=9u32 {
        for b in a..=9u32 {
            let g = f(&format!("z1^{a}+z2^{b}"));
            let r = bracket(&g, &c).map_err(|e| format!("a={a} b={b}: {e}"))?;
            let expect = int(b as i64 - 1);
            ensure(r.upper == expect && r.exact && r.path == TheoremPath::ConvenientBMinus1, || {
                format!("a={a} b={b}: {}", r.summary())
            })?;
            ensure(r.tight, || format!("a={a} b={b}: lower {:?}", r.lower.as_ref().and_then(|l| l.value.as_ref()).map(fmt_rational)))?;
            count += 1;
        }
    }
    Ok(format!("{count} Brieskorn pairs exact and tight"))
}

fn disjoint_sum(g: &MixedFunction, h: &MixedFunction) -> MixedFunction {
    let n = g.n() + h.n();
    let left = VariableSubset::new(0..g.n());
    let right = VariableSubset::new(g.n()..n);
    g.embed(&left, n).unwrap().add(&h.embed(&right, n).unwrap()).unwrap()
}

fn ac5() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let c = cfg();
    let mut bound: std::collections::HashMap<&str, Rational> = std::collections::HashMap::new();
    let mut get = |e: &CatalogEntry| -> Result<Rational, String> {
        if let Some(v) = bound.get(e.name) {
            return Ok(v.clone());
        }
        let v = upper_bound(&e.function(), &c).map_err(|err| format!("{}: {err}", e.name))?.upper;
        bound.insert(e.name, v.clone());
        Ok(v)
    };
    let mut pairs = 0;
    while pairs < 20 {
        let g = NONDEGENERATE[rng.gen_range(0..NONDEGENERATE.len())];
        let h = NONDEGENERATE[rng.gen_range(0..NONDEGENERATE.len())];
        let (fg, fh) = (g.function(), h.function());
        if fg.n() + fh.n() > 6 {
            continue;
        }
        let joined = upper_bound(&disjoint_sum(&fg, &fh), &c).map_err(|e| format!("{} + {}: {e}", g.name, h.name))?;
        let expect = get(&g)?.max(get(&h)?);
        ensure(joined.upper == expect, || {
            format!("{} + {}: joined {} expected {}", g.name, h.name, fmt_rational(&joined.upper), fmt_rational(&expect))
        })?;
        pairs += 1;
    }
    Ok(format!("{pairs} disjoint pairs"))
}

/// Two strictly positive weights whose minimal faces share a vertex.
fn admissible_pair(g: &MixedFunction, rng: &mut ChaCha8Rng) -> Option<(Vec<i64>, Vec<i64>)> {
    let poly = build_polyhedron(g).ok()?;
    let vertices = poly.vertices().ok()?;
    let v = vertices[rng.gen_range(0..vertices.len())];
    let normals: Vec<&Vec<i64>> = poly.facets().iter().filter(|fc| fc.face.contains(&v)).map(|fc| &fc.normal).collect();
    let draw = |rng: &mut ChaCha8Rng| -> Option<Vec<i64>> {
        for _ in 0..100 {
            let mut w = vec![0i64; g.n()];
            for nm in &normals {
                let c = rng.gen_range(0..=4);
                for (wi, x) in w.iter_mut().zip(nm.iter()) {
                    *wi += c * x;
                }
            }
            if w.iter().all(|&x| x > 0) {
                return Some(w);
            }
        }
        None
    };
    Some((draw(rng)?, draw(rng)?))
}

fn normalized(g: &MixedFunction, w: &[i64]) -> Vec<Rational> {
    let p = int_weight(w);
    let d = g.min_degree(&p).expect("nonzero function");
    p.iter().map(|x| x / &d).collect()
}

fn ac6() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 6);
    let mut checked = 0usize;
    for e in NONDEGENERATE {
        let g = e.function();
        let n = g.n();
        let mut pairs = 0;
        let mut attempts = 0;
        while pairs < 200 && attempts < 5000 {
            attempts += 1;
            let Some((p, q)) = admissible_pair(&g, &mut rng) else { continue };
            let (ph, qh) = (normalized(&g, &p), normalized(&g, &q));
            let mut variants = vec![EtaVariant::Plain];
            for i in 0..n {
                for j in 0..n {
                    variants.push(EtaVariant::Ij { i, j });
                }
            }
            for variant in variants {
                let (Ok(ep), Ok(eq)) = (eta(&g, &ph, variant), eta(&g, &qh, variant)) else { continue };
                let top = ep.max(eq);
                for s in [rat(1, 4), rat(1, 2), rat(3, 4)] {
                    let r: Vec<Rational> = ph.iter().zip(&qh).map(|(a, b)| &s * a + (int(1) - &s) * b).collect();
                    let er = eta(&g, &r, variant).map_err(|err| format!("{}: {err}", e.name))?;
                    ensure(er <= top, || {
                        format!("{}: {:?} at s={} between {} and {}: {} > {}", e.name, variant, fmt_rational(&s), fmt_int_vec(&p), fmt_int_vec(&q), fmt_rational(&er), fmt_rational(&top))
                    })?;
                    checked += 1;
                }
            }
            pairs += 1;
        }
        ensure(pairs == 200, || format!("{}: only {pairs} admissible pairs", e.name))?;
    }
    Ok(format!("{} segment evaluations over {} functions", checked, NONDEGENERATE.len()))
}

fn ac7() -> Check {
    let c = cfg();
    let mut checked = 0;
    let mut functions = 0;
    for e in NONDEGENERATE {
        let g = e.function();
        let subspaces = lojbound::dualfan::vanishing_subspaces(&g);
        if subspaces.is_empty() {
            continue;
        }
        if !check_verdicts(&g, &c).iter().all(|v| v.as_ref().is_ok_and(|v| v.is_ok())) {
            continue;
        }
        let table = axis_monomial_table(&g, &subspaces).map_err(|err| format!("{}: {err}", e.name))?;
        let d = jacobian_diagram(&g).map_err(|err| format!("{}: {err}", e.name))?;
        let eta_max = invariant_sheet(&g, &d).map_err(|err| format!("{}: {err}", e.name))?.eta_max;
        for sub in &table.per_subspace {
            for entry in &sub.entries {
                if let Some(nij) = entry.n_ij {
                    ensure(int(nij as i64) <= eta_max, || {
                        format!("{}: n_{}{} = {nij} > eta_max = {}", e.name, entry.i + 1, entry.j + 1, fmt_rational(&eta_max))
                    })?;
                    checked += 1;
                }
            }
        }
        functions += 1;
    }
    ensure(functions > 0, || "no catalog function with vanishing subspaces".into())?;
    Ok(format!("{checked} finite axis exponents over {functions} functions"))
}

fn ac8() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 8);
    let mut total = 0;
    for e in NONDEGENERATE {
        let g = e.function();
        let n = g.n();
        let derivs: Vec<(usize, bool, MixedFunction)> = (0..n)
            .flat_map(|j| [false, true].map(|conj| (j, conj)))
            .map(|(j, conj)| (j, conj, g.wirtinger_derivative(j, conj).unwrap()))
            .collect();
        for _ in 0..500 {
            let w: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=20)).collect();
            let coeffs = (0..n).map(|_| gaussian(&mut rng)).collect();
            let curve = MonomialCurve::new(n, VariableSubset::full(n), w.clone(), coeffs).unwrap();
            let o = curve_orders(&g, &curve).map_err(|err| format!("{}: {err}", e.name))?;
            let p = int_weight(&w.iter().map(|&x| x as i64).collect::<Vec<_>>());
            let d = g.min_degree(&p).unwrap();
            let m = *w.iter().min().unwrap() as i64;
            let grad = o.ord_grad.finite().ok_or_else(|| format!("{}: infinite gradient order at {:?}", e.name, w))?;
            ensure(int(grad as i64) <= &d - int(m), || {
                format!("{}: ord_grad {grad} > d - m = {} at {:?}", e.name, fmt_rational(&(&d - int(m))), w)
            })?;
            for (j, conj, dj) in &derivs {
                let ord = if *conj { o.anti[*j] } else { o.holo[*j] };
                if let (Some(dd), Some(k)) = (dj.min_degree(&p), ord.finite()) {
                    ensure(int(k as i64) >= dd, || format!("{}: component {j} order {k} below its degree at {:?}", e.name, w))?;
                } else if dj.is_zero() {
                    ensure(ord.finite().is_none(), || format!("{}: zero derivative with finite order", e.name))?;
                }
            }
            total += 1;
        }
    }
    Ok(format!("{total} curves"))
}

fn ac9() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 9);
    let c = cfg();
    let mut mixed_cfg = cfg();
    mixed_cfg.force_mixed = true;
    let mut curves = 0;
    let mut functions = 0;
    for e in NONDEGENERATE.iter().filter(|e| e.function().is_holomorphic()) {
        let g = e.function();
        let n = g.n();
        for _ in 0..100 {
            let w: Vec<u32> = (0..n).map(|_| rng.gen_range(1..=12)).collect();
            let coeffs = (0..n).map(|_| gaussian(&mut rng)).collect();
            let curve = MonomialCurve::new(n, VariableSubset::full(n), w.clone(), coeffs).unwrap();
            let holo = curve_exponent_with(&g, &curve, GradientPath::Auto).map_err(|err| err.to_string());
            let mixed = curve_exponent_with(&g, &curve, GradientPath::Mixed).map_err(|err| err.to_string());
            ensure(holo == mixed, || format!("{} at {:?}: {:?} vs {:?}", e.name, w, holo, mixed))?;
            let pair = modified_gradient_pair(&g, &curve).map_err(|err| format!("{}: {err}", e.name))?;
            ensure(pair.iterations == 0 && pair.correction.is_empty(), || format!("{}: nontrivial pair", e.name))?;
            curves += 1;
        }
        let a = upper_bound(&g, &c).map_err(|err| format!("{}: {err}", e.name))?;
        let b = upper_bound(&g, &mixed_cfg).map_err(|err| format!("{} (mixed): {err}", e.name))?;
        ensure((&a.upper, &a.path, a.exact) == (&b.upper, &b.path, b.exact), || {
            format!("{}: {} vs {}", e.name, a.summary(), b.summary())
        })?;
        functions += 1;
    }
    Ok(format!("{curves} curves and {functions} bounds agree"))
}

fn ac10() -> Check {
    let budget = NondegBudget::with_seed(SEED);
    let mut summaries = Vec::new();
    for round in 0..2 {
        let mut out = Vec::new();
        for e in DEGENERATE {
            let v = check_face_nondegeneracy(&e.function(), &budget).map_err(|err| err.to_string())?;
            ensure(v.status == VerdictStatus::DegenerateWitness, || format!("{}: {}", e.name, v.summary()))?;
            out.push(v);
        }
        for e in NONDEGENERATE {
            let v = check_face_nondegeneracy(&e.function(), &budget).map_err(|err| err.to_string())?;
            ensure(v.status == VerdictStatus::PresumedOk, || format!("{}: {}", e.name, v.summary()))?;
            out.push(v);
        }
        if round == 1 {
            ensure(summaries == out, || "verdicts differ between identical runs".into())?;
        }
        summaries = out;
    }
    Ok(format!("{} witnesses, {} presumed-ok, deterministic", DEGENERATE.len(), NONDEGENERATE.len()))
}

fn random_sparse(rng: &mut ChaCha8Rng) -> Option<MixedFunction> {
    let n = rng.gen_range(2..=4);
    let mut terms: Vec<(ExponentPair, CRational)> = Vec::new();
    let convenient = rng.gen_bool(0.5);
    if convenient {
        for i in 0..n {
            let mut nu = vec![0; n];
            nu[i] = rng.gen_range(2..=7);
            terms.push((ExponentPair { nu, mu: vec![0; n] }, gaussian(rng)));
        }
    }
    let extra = rng.gen_range(1..=8usize.saturating_sub(terms.len()).max(1));
    for _ in 0..extra {
        if terms.len() >= 8 {
            break;
        }
        let mut nu: Vec<u32> = (0..n).map(|_| if rng.gen_bool(0.5) { rng.gen_range(0..=4) } else { 0 }).collect();
        let mut mu = vec![0; n];
        if rng.gen_bool(0.1) {
            let k = rng.gen_range(0..n);
            mu[k] = 1;
        }
        if nu.iter().chain(&mu).sum::<u32>() < 2 {
            nu[rng.gen_range(0..n)] += 2;
        }
        terms.push((ExponentPair { nu, mu }, gaussian(rng)));
    }
    let g = MixedFunction::from_terms(n, terms).ok()?;
    (!g.is_zero() && !g.has_constant_term()).then_some(g)
}

fn ac11() -> Check {
    let mut c = cfg();
    c.sampler.curves = 300;
    let mut checked = 0;
    for e in NONDEGENERATE {
        let r = bracket(&e.function(), &c).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(!r.violation(), || violation_message(e.name, &r))?;
        checked += 1;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(SEED ^ 11);
    c.sampler.curves = 150;
    let (mut fuzzed, mut certified) = (0, 0);
    while fuzzed < 500 {
        let Some(g) = random_sparse(&mut rng) else { continue };
        fuzzed += 1;
        let Ok(r) = bracket(&g, &c) else { continue };
        ensure(!r.violation(), || violation_message(&g.to_string(), &r))?;
        certified += 1;
    }
    Ok(format!("{checked} catalog functions, {certified} of {fuzzed} fuzzed functions certified, no violations"))
}

fn violation_message(name: &str, r: &lojbound::bounds::BoundReport) -> String {
    let l = r.lower.as_ref().unwrap();
    let w = l.witness.as_ref().unwrap();
    format!(
        "{name}: lower {} > upper {} via curve on {} weights {:?} coeffs {:?}",
        fmt_rational(l.value.as_ref().unwrap()),
        fmt_rational(&r.upper),
        w.support,
        w.weights,
        w.coeffs
    )
}

fn main() {
    let criteria: [(u32, &str, u64, fn() -> Check); 11] = [
        (1, "fan vertices and eta(R) of the Jacobian-refined example", 5, ac1),
        (2, "Jacobian refinement adds (2,6,3,3)", 10, ac2),
        (3, "weighted example bracket 21/4", 60, ac3),
        (4, "Brieskorn suite exact and tight", 30, ac4),
        (5, "join bound is the max", 120, ac5),
        (6, "segment monotonicity", 30, ac6),
        (7, "axis exponents below eta_max", 60, ac7),
        (8, "curve order bounds", 60, ac8),
        (9, "mixed pipeline reproduces holomorphic results", 120, ac9),
        (10, "degeneracy detection", 60, ac10),
        (11, "lower never exceeds upper", 600, ac11),
    ];
    let mut failed = 0;
    for (id, name, limit, check) in criteria {
        let start = Instant::now();
        let outcome = check();
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(msg) if elapsed > Duration::from_secs(limit) => Err(format!("{msg}; over the {limit}s limit")),
            other => other,
        };
        match outcome {
            Ok(msg) => println!("AC{id:<2} PASS {name}: {msg} [{:.2}s, limit {limit}s]", elapsed.as_secs_f64()),
            Err(msg) => {
                failed += 1;
                println!("AC{id:<2} FAIL {name}: {msg} [{:.2}s, limit {limit}s]", elapsed.as_secs_f64());
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
