//! The dual Newton diagram `Γ*(f)`, its Jacobian refinement `Γ*_J(f)`, and
//! classification of weights into inner / regular-boundary / vanishing-boundary regions.

use std::fmt;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::arith::{fmt_int_vec, Rational};
use crate::error::{Error, Result};
use crate::mixedpoly::{MixedFunction, VariableSubset};
use crate::newton::{build_polyhedron, minimal_points, FaceData, NewtonPolyhedron};

pub const DEFAULT_MINKOWSKI_CAP: usize = 200_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum VertexKind {
    StrictlyPositive,
    Elementary,
    Vanishing,
    OtherNonpositive,
}

impl VertexKind {
    pub fn label(self) -> &'static str {
        match self {
            VertexKind::StrictlyPositive => "strictly-positive",
            VertexKind::Elementary => "elementary",
            VertexKind::Vanishing => "vanishing",
            VertexKind::OtherNonpositive => "other-nonpositive",
        }
    }
}

impl fmt::Display for VertexKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// A vertex of a dual Newton diagram: a primitive facet normal of `Γ₊`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FanVertex {
    pub weight: Vec<i64>,
    /// `P / d(P,f)`, present when `d(P,f) > 0`.
    pub normalized: Option<Vec<Rational>>,
    /// `Δ(P,f)` on the support of `f` itself.
    pub face: FaceData,
    pub kind: VertexKind,
    /// `I(P) = {i : p_i = 0}` for vanishing vertices.
    pub vanishing_subset: Option<VariableSubset>,
}

impl FanVertex {
    pub fn weight_rational(&self) -> Vec<Rational> {
        self.weight.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect()
    }

    /// Vertices usable as a vanishing direction when classifying regions.
    ///
    /// An elementary vertex `e_i` with `d(e_i,f) > 0` behaves like a vanishing
    /// direction: its zero set `{j != i}` supports no monomial of `f`.
    fn is_vanishing_direction(&self) -> bool {
        match self.kind {
            VertexKind::Vanishing => true,
            VertexKind::Elementary => self.face.value.is_positive() && self.weight.len() > 1,
            _ => false,
        }
    }
}

fn zero_set(weight: &[i64]) -> VariableSubset {
    VariableSubset::new((0..weight.len()).filter(|&i| weight[i] == 0))
}

fn classify(f: &MixedFunction, base: &NewtonPolyhedron, weight: Vec<i64>) -> Result<FanVertex> {
    let face = base.min_face_int(&weight)?;
    let positive_d = face.value.is_positive();
    let ones = weight.iter().filter(|&&x| x != 0).count();
    let kind = if weight.iter().all(|&x| x > 0) {
        VertexKind::StrictlyPositive
    } else if ones == 1 && weight.iter().all(|&x| x == 0 || x == 1) {
        VertexKind::Elementary
    } else if positive_d {
        VertexKind::Vanishing
    } else {
        VertexKind::OtherNonpositive
    };
    let normalized = positive_d.then(|| {
        weight
            .iter()
            .map(|&x| Rational::from_integer(BigInt::from(x)) / &face.value)
            .collect()
    });
    let vanishing_subset = (kind == VertexKind::Vanishing).then(|| zero_set(&weight));
    if let Some(ref subset) = vanishing_subset {
        debug_assert!(f.restrict(subset).is_zero());
    }
    Ok(FanVertex { weight, normalized, face, kind, vanishing_subset })
}

/// Vertices of `Γ*(f)` computed from an already built polyhedron.
pub fn fan_vertices_of(f: &MixedFunction, poly: &NewtonPolyhedron) -> Result<Vec<FanVertex>> {
    let n = f.n();
    if poly.boundary_dim() + 1 != n {
        return Err(Error::BoundaryDimension { found: poly.boundary_dim(), required: n - 1 });
    }
    poly.facets().iter().map(|fc| classify(f, poly, fc.normal.clone())).collect()
}

/// One vertex per facet of `Γ₊(f)`, classified.
pub fn fan_vertices(f: &MixedFunction) -> Result<Vec<FanVertex>> {
    let poly = build_polyhedron(f)?;
    fan_vertices_of(f, &poly)
}

/// All non-empty proper subsets `I` with `f^I ≡ 0`, ordered by size then members.
pub fn vanishing_subspaces(f: &MixedFunction) -> Vec<VariableSubset> {
    let n = f.n();
    let supports: Vec<u64> = f
        .terms()
        .map(|(e, _)| e.variables().iter().fold(0u64, |acc, &i| acc | (1 << i)))
        .collect();
    let mut out: Vec<VariableSubset> = (1u64..(1u64 << n) - 1)
        .filter(|&mask| supports.iter().all(|&s| s & !mask != 0))
        .map(|mask| VariableSubset::new((0..n).filter(|&i| mask & (1 << i) != 0)))
        .collect();
    out.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RegionTag {
    Inner,
    RegularBoundary,
    VanishingBoundary,
}

impl RegionTag {
    pub fn label(self) -> &'static str {
        match self {
            RegionTag::Inner => "inner",
            RegionTag::RegularBoundary => "regular-boundary",
            RegionTag::VanishingBoundary => "vanishing-boundary",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RegionClass {
    pub tag: RegionTag,
    pub witness: Option<FanVertex>,
}

/// Whether `Δ(outer) ⊇ Δ(inner)` as faces of `Γ₊`, including recession directions.
fn face_contains(outer: &FanVertex, inner_face: &FaceData, inner_weight: &[i64]) -> bool {
    let outer_zeros = zero_set(&outer.weight);
    let inner_zeros = zero_set(inner_weight);
    inner_zeros.is_subset(&outer_zeros) && inner_face.indices.iter().all(|i| outer.face.indices.contains(i))
}

/// Region of `Γ*(f)` containing the weight `P` (given as integers), decided by face containment.
pub fn region_class_with(vertices: &[FanVertex], base: &NewtonPolyhedron, weight: &[i64]) -> Result<RegionClass> {
    let face = base.min_face_int(weight)?;
    if !face.value.is_positive() {
        return Err(Error::NonNormalizable(fmt_int_vec(weight)));
    }
    if let Some(w) = vertices
        .iter()
        .find(|v| v.is_vanishing_direction() && face_contains(v, &face, weight))
    {
        return Ok(RegionClass { tag: RegionTag::VanishingBoundary, witness: Some(w.clone()) });
    }
    if let Some(w) = vertices
        .iter()
        .find(|v| v.kind == VertexKind::Elementary && face_contains(v, &face, weight))
    {
        return Ok(RegionClass { tag: RegionTag::RegularBoundary, witness: Some(w.clone()) });
    }
    Ok(RegionClass { tag: RegionTag::Inner, witness: None })
}

pub fn region_class(f: &MixedFunction, weights: &[Rational]) -> Result<RegionClass> {
    let poly = build_polyhedron(f)?;
    let vertices = fan_vertices_of(f, &poly)?;
    let ints = crate::arith::primitive_from_rational(weights)
        .ok_or_else(|| Error::InvalidWeight("zero weight".into()))?;
    if weights.iter().any(Signed::is_negative) {
        return Err(Error::InvalidWeight("negative entry".into()));
    }
    region_class_with(&vertices, &poly, &ints)
}

/// A strictly positive vertex of `Γ*_J(f)` with its region in `Γ*(f)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianVertex {
    pub vertex: FanVertex,
    pub region: RegionClass,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct JacobianDiagram {
    pub base: NewtonPolyhedron,
    pub base_vertices: Vec<FanVertex>,
    /// Hull-pruned support of `f · prod F_i`.
    pub product_support: Vec<Vec<u32>>,
    /// All vertices of `Γ*_J(f)`, faces taken on `f`.
    pub vertices: Vec<FanVertex>,
    /// Strictly positive vertices of `Γ*_J(f)` with their regions.
    pub positive: Vec<JacobianVertex>,
    /// Indices into `positive` of the vanishing-boundary vertices.
    pub vjpp: Vec<usize>,
}

impl JacobianDiagram {
    pub fn vjpp_vertices(&self) -> impl Iterator<Item = &JacobianVertex> {
        self.vjpp.iter().map(|&i| &self.positive[i])
    }

    pub fn base_positive(&self) -> impl Iterator<Item = &FanVertex> {
        self.base_vertices.iter().filter(|v| v.kind == VertexKind::StrictlyPositive)
    }
}

/// Vertices of `Γ₊` of a point set, used to prune Minkowski sums.
pub fn hull_vertices(n: usize, points: &[Vec<u32>]) -> Result<Vec<Vec<u32>>> {
    let minimal: Vec<Vec<u32>> = minimal_points(points).into_iter().map(|i| points[i].clone()).collect();
    if minimal.len() <= 1 {
        return Ok(minimal);
    }
    let poly = NewtonPolyhedron::from_coords(n, &minimal)?;
    let coords = poly.coords();
    Ok(poly.vertices()?.into_iter().map(|i| coords[i].clone()).collect())
}

/// Vertices of `Γ₊(A + B)` for the Minkowski sum of two supports.
pub fn minkowski_sum(n: usize, a: &[Vec<u32>], b: &[Vec<u32>], cap: usize) -> Result<Vec<Vec<u32>>> {
    let size = a.len() * b.len();
    if size > cap {
        return Err(Error::SizeCap { cap, size });
    }
    let mut sums: Vec<Vec<u32>> = Vec::with_capacity(size);
    for p in a {
        for q in b {
            sums.push(p.iter().zip(q).map(|(x, y)| x + y).collect());
        }
    }
    sums.sort();
    sums.dedup();
    hull_vertices(n, &sums)
}

/// Non-identically-zero Wirtinger derivatives `f_i`, then `f_ī`, in index order.
pub fn nonzero_derivatives(f: &MixedFunction) -> Result<Vec<MixedFunction>> {
    let mut out = Vec::new();
    for j in 0..f.n() {
        for conj in [false, true] {
            let d = f.wirtinger_derivative(j, conj)?;
            if !d.is_zero() {
                out.push(d);
            }
        }
    }
    Ok(out)
}

pub fn jacobian_diagram(f: &MixedFunction) -> Result<JacobianDiagram> {
    jacobian_diagram_capped(f, DEFAULT_MINKOWSKI_CAP)
}

pub fn jacobian_diagram_capped(f: &MixedFunction, cap: usize) -> Result<JacobianDiagram> {
    let n = f.n();
    let base = build_polyhedron(f)?;
    let base_vertices = fan_vertices_of(f, &base)?;
    let mut acc = hull_vertices(n, &f.support())?;
    for d in nonzero_derivatives(f)? {
        acc = minkowski_sum(n, &acc, &d.support(), cap)?;
    }
    let product = NewtonPolyhedron::from_coords(n, &acc)?;
    if product.boundary_dim() + 1 != n {
        return Err(Error::BoundaryDimension { found: product.boundary_dim(), required: n - 1 });
    }
    let vertices: Vec<FanVertex> = product
        .facets()
        .iter()
        .map(|fc| classify(f, &base, fc.normal.clone()))
        .collect::<Result<_>>()?;
    let mut positive = Vec::new();
    let mut vjpp = Vec::new();
    for v in vertices.iter().filter(|v| v.kind == VertexKind::StrictlyPositive) {
        let region = region_class_with(&base_vertices, &base, &v.weight)?;
        if region.tag == RegionTag::VanishingBoundary {
            vjpp.push(positive.len());
        }
        positive.push(JacobianVertex { vertex: v.clone(), region });
    }
    Ok(JacobianDiagram { base, base_vertices, product_support: acc, vertices, positive, vjpp })
}
