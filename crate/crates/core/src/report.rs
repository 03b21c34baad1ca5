//! Whole-function analysis plus text and JSON renderings shared by the
//! command line and the browser demo. JSON objects have sorted keys.

use num_complex::Complex64;
use serde_json::{json, Value};

use crate::arith::{fmt_int_vec, fmt_rational, fmt_u32_vec, Rational};
use crate::bounds::{bracket, upper_bound, BoundConfig, BoundReport};
use crate::dualfan::{fan_vertices_of, jacobian_diagram_capped, vanishing_subspaces, FanVertex, JacobianDiagram};
use crate::error::Error;
use crate::invariants::{axis_monomial_table, convenient_profile, invariant_sheet, ConvenientProfile, InvariantSheet};
use crate::mixedpoly::{MixedFunction, VariableSubset};
use crate::newton::{build_polyhedron, NewtonPolyhedron};
use crate::nondeg::{check_face_nondegeneracy, check_loj_nondegeneracy, fmt_point, Verdict};
use crate::sampler::{LowerBound, WitnessCurve};

fn rat(r: &Rational) -> Value {
    Value::String(fmt_rational(r))
}

fn opt_rat(r: Option<&Rational>) -> Value {
    r.map_or(Value::Null, rat)
}

fn complex(z: &Complex64) -> Value {
    json!([z.re, z.im])
}

pub fn error_json(e: &Error) -> Value {
    match e {
        Error::Degenerate(v) => json!({"error": e.to_string(), "verdict": verdict_json(v)}),
        _ => json!({"error": e.to_string()}),
    }
}

pub fn verdict_json(v: &Verdict) -> Value {
    let witness = v.witness.as_ref().map_or(Value::Null, |w| {
        json!({
            "face": w.face,
            "point": w.point.iter().map(complex).collect::<Vec<_>>(),
            "residual": w.residual,
        })
    });
    json!({
        "check": v.check.label(),
        "status": v.status.label(),
        "witness": witness,
        "effort": {"faces": v.effort.faces, "starts": v.effort.starts, "iterations": v.effort.iterations},
        "seed": v.seed,
        "notes": v.notes,
    })
}

pub fn witness_json(w: &WitnessCurve) -> Value {
    json!({
        "strategy": w.strategy.label(),
        "support": w.support.to_string(),
        "weights": w.weights,
        "coeffs": w.coeffs.iter().map(complex).collect::<Vec<_>>(),
        "ord_z": w.ord_z,
        "ord_grad": w.ord_grad,
        "exponent": rat(&w.exponent),
    })
}

fn witness_text(w: &WitnessCurve) -> String {
    format!(
        "{} curve on {} weights {} coeffs {} ord_z={} ord_grad={} exponent={}",
        w.strategy.label(),
        w.support,
        fmt_u32_vec(&w.weights),
        fmt_point(&w.coeffs),
        w.ord_z,
        w.ord_grad,
        fmt_rational(&w.exponent)
    )
}

pub fn sheet_json(s: &InvariantSheet) -> Value {
    let contributions: Vec<Value> = s
        .contributions
        .iter()
        .map(|c| {
            json!({
                "weight": c.weight,
                "source": c.source.label(),
                "eta": rat(&c.eta),
                "eta_prime": opt_rat(c.eta_prime.as_ref()),
            })
        })
        .collect();
    json!({
        "eta_max": rat(&s.eta_max),
        "eta_j_max": rat(&s.eta_j_max),
        "eta_prime_j_max": opt_rat(s.eta_prime_j_max.as_ref()),
        "eta_dprime": rat(&s.eta_dprime),
        "contributions": contributions,
    })
}

fn sheet_text(s: &InvariantSheet, out: &mut Vec<String>) {
    out.push(format!(
        "eta_max={} eta_J_max={} eta'_J_max={} eta''={}",
        fmt_rational(&s.eta_max),
        fmt_rational(&s.eta_j_max),
        s.eta_prime_j_max.as_ref().map_or("none".to_string(), fmt_rational),
        fmt_rational(&s.eta_dprime)
    ));
    for c in &s.contributions {
        let mut line = format!("  {} {} eta={}", fmt_int_vec(&c.weight), c.source.label(), fmt_rational(&c.eta));
        if let Some(p) = &c.eta_prime {
            line.push_str(&format!(" eta'={}", fmt_rational(p)));
        }
        out.push(line);
    }
}

fn lower_json(l: Option<&LowerBound>) -> (Value, Value) {
    match l {
        Some(l) => (opt_rat(l.value.as_ref()), l.witness.as_ref().map_or(Value::Null, witness_json)),
        None => (Value::Null, Value::Null),
    }
}

pub fn bound_json(r: &BoundReport) -> Value {
    let (lower, witness) = lower_json(r.lower.as_ref());
    let candidates: Vec<Value> = r
        .candidates
        .iter()
        .map(|c| json!({"path": c.path.to_string(), "value": rat(&c.value), "exact": c.exact}))
        .collect();
    let children: Vec<Value> = r
        .children
        .iter()
        .map(|(s, c)| json!({"variables": s.to_string(), "report": bound_json(c)}))
        .collect();
    json!({
        "upper": rat(&r.upper),
        "exact": r.exact,
        "path": r.path.to_string(),
        "assumptions": r.assumptions.iter().map(verdict_json).collect::<Vec<_>>(),
        "lower": lower,
        "witness": witness,
        "tight": r.tight,
        "candidates": candidates,
        "sheet": r.sheet.as_ref().map_or(Value::Null, sheet_json),
        "children": children,
        "notes": r.notes,
    })
}

pub fn bound_text(r: &BoundReport) -> String {
    let mut out = vec![r.summary()];
    for c in &r.candidates {
        out.push(format!("candidate {}={}{}", c.path, fmt_rational(&c.value), if c.exact { " exact" } else { "" }));
    }
    for v in &r.assumptions {
        out.push(format!("assumption {}", v.summary()));
    }
    if let Some(l) = &r.lower {
        match (&l.value, &l.witness) {
            (Some(v), Some(w)) => {
                out.push(format!("lower={}{}", fmt_rational(v), if r.tight { " tight" } else { "" }));
                out.push(format!("witness {}", witness_text(w)));
            }
            _ => out.push("lower=none".to_string()),
        }
        out.push(format!("curves evaluated={} rejected={}", l.curves_evaluated, l.curves_rejected));
    }
    for n in &r.notes {
        out.push(format!("note {n}"));
    }
    out.join("\n")
}

fn vertex_face(f: &MixedFunction, v: &FanVertex) -> String {
    f.face_function(&v.weight_rational()).map_or_else(|e| format!("<{e}>"), |g| g.to_string())
}

pub fn vertex_json(f: &MixedFunction, v: &FanVertex) -> Value {
    json!({
        "weight": v.weight,
        "kind": v.kind.label(),
        "d": rat(&v.face.value),
        "face_function": vertex_face(f, v),
        "face": v.face.points,
        "vanishing_subset": v.vanishing_subset.as_ref().map_or(Value::Null, |s| Value::String(s.to_string())),
    })
}

fn vertex_text(f: &MixedFunction, v: &FanVertex) -> String {
    let mut s = format!("{} {}", fmt_int_vec(&v.weight), v.kind.label());
    if let Some(i) = &v.vanishing_subset {
        s.push_str(&format!(" I={i}"));
    }
    s.push_str(&format!(" d={} face: {}", fmt_rational(&v.face.value), vertex_face(f, v)));
    s
}

pub fn fan_json(f: &MixedFunction, vertices: &[FanVertex]) -> Value {
    json!({"vertices": vertices.iter().map(|v| vertex_json(f, v)).collect::<Vec<_>>()})
}

pub fn fan_text(f: &MixedFunction, vertices: &[FanVertex]) -> String {
    vertices.iter().map(|v| vertex_text(f, v)).collect::<Vec<_>>().join("\n")
}

pub fn jacobian_json(f: &MixedFunction, d: &JacobianDiagram) -> Value {
    let positive: Vec<Value> = d
        .positive
        .iter()
        .map(|jv| {
            let mut v = vertex_json(f, &jv.vertex);
            v["region"] = json!(jv.region.tag.label());
            v["region_witness"] = jv.region.witness.as_ref().map_or(Value::Null, |w| json!(w.weight));
            v
        })
        .collect();
    json!({
        "vertices": d.vertices.iter().map(|v| vertex_json(f, v)).collect::<Vec<_>>(),
        "positive": positive,
        "vanishing_boundary": d.vjpp,
    })
}

pub fn jacobian_text(f: &MixedFunction, d: &JacobianDiagram) -> String {
    let mut out = Vec::new();
    for jv in &d.positive {
        let mut s = format!("{} region={}", vertex_text(f, &jv.vertex), jv.region.tag.label());
        if let Some(w) = &jv.region.witness {
            s.push_str(&format!(" via {}", fmt_int_vec(&w.weight)));
        }
        out.push(s);
    }
    for v in d.vertices.iter().filter(|v| !d.positive.iter().any(|p| p.vertex.weight == v.weight)) {
        out.push(vertex_text(f, v));
    }
    out.join("\n")
}

pub fn newton_json(poly: &NewtonPolyhedron) -> Value {
    let coords = poly.coords();
    let facets: Vec<Value> = poly
        .facets()
        .iter()
        .map(|fc| {
            let face: Vec<&Vec<u32>> = fc.face.iter().map(|&i| &coords[i]).collect();
            json!({"normal": fc.normal, "offset": fc.offset, "face": face})
        })
        .collect();
    json!({
        "n": poly.n(),
        "support": coords,
        "facets": facets,
        "boundary_dim": poly.boundary_dim(),
    })
}

pub fn profile_json(p: &ConvenientProfile) -> Value {
    let monomials: Vec<Value> = p
        .loj_monomials
        .iter()
        .map(|m| json!({"axis": m.axis + 1, "exponent": m.exps.combined(), "exceptional": m.exceptional}))
        .collect();
    json!({"convenient": p.convenient, "b": p.b, "B": p.big_b, "lojasiewicz_monomials": monomials})
}

/// Everything the tool can say about one function.
#[derive(Debug, Clone)]
pub struct Analysis {
    pub function: MixedFunction,
    pub newton: Result<NewtonPolyhedron, Error>,
    pub profile: ConvenientProfile,
    pub subspaces: Vec<VariableSubset>,
    pub fan: Result<Vec<FanVertex>, Error>,
    pub jacobian: Result<JacobianDiagram, Error>,
    pub sheet: Result<InvariantSheet, Error>,
    pub verdicts: Vec<Result<Verdict, Error>>,
    pub bound: Result<BoundReport, Error>,
}

pub fn analyze(f: &MixedFunction, cfg: &BoundConfig, with_bracket: bool) -> Analysis {
    let newton = build_polyhedron(f);
    let fan = newton.as_ref().map_err(Clone::clone).and_then(|p| fan_vertices_of(f, p));
    let jacobian = jacobian_diagram_capped(f, cfg.minkowski_cap);
    let sheet = jacobian.as_ref().map_err(Clone::clone).and_then(|d| invariant_sheet(f, d));
    let subspaces = vanishing_subspaces(f);
    let verdicts = check_verdicts(f, cfg);
    let bound = if with_bracket { bracket(f, cfg) } else { upper_bound(f, cfg) };
    Analysis { function: f.clone(), newton, profile: convenient_profile(f), subspaces, fan, jacobian, sheet, verdicts, bound }
}

/// Face and Łojasiewicz verdicts on the whole function.
pub fn check_verdicts(f: &MixedFunction, cfg: &BoundConfig) -> Vec<Result<Verdict, Error>> {
    let mut budget = cfg.nondeg.clone();
    budget.force_mixed |= cfg.force_mixed;
    let subspaces = vanishing_subspaces(f);
    vec![
        check_face_nondegeneracy(f, &budget),
        axis_monomial_table(f, &subspaces).and_then(|t| check_loj_nondegeneracy(f, &t, &budget)),
    ]
}

fn result_json<T>(r: &Result<T, Error>, ok: impl FnOnce(&T) -> Value) -> Value {
    match r {
        Ok(v) => ok(v),
        Err(e) => error_json(e),
    }
}

pub fn analysis_json(a: &Analysis) -> Value {
    let f = &a.function;
    json!({
        "function": f.to_string(),
        "n": f.n(),
        "support": f.support(),
        "newton": result_json(&a.newton, newton_json),
        "convenience": profile_json(&a.profile),
        "vanishing_subspaces": a.subspaces.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        "fan": result_json(&a.fan, |v| fan_json(f, v)),
        "jacobian": result_json(&a.jacobian, |d| jacobian_json(f, d)),
        "sheet": result_json(&a.sheet, sheet_json),
        "verdicts": a.verdicts.iter().map(|v| result_json(v, verdict_json)).collect::<Vec<_>>(),
        "bound": result_json(&a.bound, bound_json),
    })
}

pub fn analysis_text(a: &Analysis) -> String {
    let f = &a.function;
    let mut out = vec![format!("function {f}"), format!("variables {}", f.n())];
    let support: Vec<String> = f.support().iter().map(|p| fmt_u32_vec(p)).collect();
    out.push(format!("support {}", support.join(" ")));
    match &a.newton {
        Ok(p) => out.push(format!("newton boundary dimension {} with {} facets", p.boundary_dim(), p.facets().len())),
        Err(e) => out.push(format!("newton error: {e}")),
    }
    let p = &a.profile;
    if let (true, Some(b)) = (p.convenient, p.big_b) {
        let exceptional: Vec<String> = p.loj_monomials.iter().map(|m| format!("z{}{}", m.axis + 1, if m.exceptional { " exceptional" } else { "" })).collect();
        out.push(format!("convenient B={b} lojasiewicz monomials: {}", exceptional.join(", ")));
    } else {
        out.push("not convenient".to_string());
    }
    if a.subspaces.is_empty() {
        out.push("vanishing subspaces: none".to_string());
    } else {
        let s: Vec<String> = a.subspaces.iter().map(|s| s.to_string()).collect();
        out.push(format!("vanishing subspaces: {}", s.join(" ")));
    }
    out.push("fan vertices:".to_string());
    match &a.fan {
        Ok(v) => out.extend(fan_text(f, v).lines().map(|l| format!("  {l}"))),
        Err(e) => out.push(format!("  error: {e}")),
    }
    out.push("jacobian refinement:".to_string());
    match &a.jacobian {
        Ok(d) => out.extend(jacobian_text(f, d).lines().map(|l| format!("  {l}"))),
        Err(e) => out.push(format!("  error: {e}")),
    }
    match &a.sheet {
        Ok(s) => sheet_text(s, &mut out),
        Err(e) => out.push(format!("invariants error: {e}")),
    }
    for v in &a.verdicts {
        match v {
            Ok(v) => out.push(format!("verdict {}", v.summary())),
            Err(e) => out.push(format!("verdict error: {e}")),
        }
    }
    match &a.bound {
        Ok(r) => out.push(bound_text(r)),
        Err(e) => out.push(format!("bound refused: {e}")),
    }
    out.join("\n")
}

pub fn verdicts_json(v: &[Result<Verdict, Error>]) -> Value {
    json!({"verdicts": v.iter().map(|v| result_json(v, verdict_json)).collect::<Vec<_>>()})
}

pub fn verdicts_text(v: &[Result<Verdict, Error>]) -> String {
    v.iter()
        .map(|v| match v {
            Ok(v) => v.summary(),
            Err(e) => format!("error: {e}"),
        })
        .collect::<Vec<_>>()
        .join("\n")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mixedpoly::parse;

    #[test]
    fn bound_json_shape() {
        let f = parse("z1^3+z2^7", None).unwrap();
        let r = upper_bound(&f, &BoundConfig::with_seed(1)).unwrap();
        let v = bound_json(&r);
        assert_eq!(v["upper"], "6");
        assert_eq!(v["path"], "convenient-B-minus-1");
        assert_eq!(v["exact"], true);
        assert!(v["lower"].is_null());
    }

    #[test]
    fn fan_text_lists_jdual_vertices() {
        let f = parse("(z1^9+z2^3+z3^6)*z2+z3^7+z4^7", None).unwrap();
        let p = build_polyhedron(&f).unwrap();
        let text = fan_text(&f, &fan_vertices_of(&f, &p).unwrap());
        assert!(text.contains("(7,21,12,12) strictly-positive"));
        assert!(text.contains("(0,7,1,1) vanishing I={1}"));
    }
}
