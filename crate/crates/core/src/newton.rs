//! The Newton polyhedron `Γ₊(f) = conv(supp f) + R₊ⁿ` and its faces.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

use crate::arith::{weighted_degree, Rational};
use crate::error::{Error, Result};
use crate::hull::{self, Echelon};
use crate::mixedpoly::{ExponentPair, MixedFunction};

pub const MAX_VARIABLES: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SupportPoint {
    pub coords: Vec<u32>,
    pub sources: Vec<ExponentPair>,
}

/// A facet `normal·x = offset` of `Γ₊`, with the support points lying on it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Facet {
    pub normal: Vec<i64>,
    pub offset: i64,
    pub face: Vec<usize>,
}

impl Facet {
    pub fn is_strictly_positive(&self) -> bool {
        self.normal.iter().all(|&x| x > 0)
    }
}

/// `Δ(P,f)` and `d(P,f)` for a weight `P`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FaceData {
    /// Support points attaining the minimum, sorted.
    pub points: Vec<Vec<u32>>,
    /// Indices of those points in the polyhedron's support list.
    pub indices: Vec<usize>,
    /// Affine dimension of `points`.
    pub dim: usize,
    /// Dimension of the face of `Γ₊` including the recession directions `e_j` with `p_j = 0`.
    pub polyhedral_dim: usize,
    pub value: Rational,
}

/// A compact face of `Γ₊`, found as an intersection of facets.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompactFace {
    pub indices: Vec<usize>,
    pub facets: Vec<usize>,
    pub dim: usize,
    /// Sum of the normals of the facets containing the face: a strictly positive weight exposing it.
    pub weight: Vec<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NewtonPolyhedron {
    n: usize,
    support: Vec<SupportPoint>,
    facets: Vec<Facet>,
    boundary_dim: usize,
}

fn to_i128(v: &[u32]) -> Vec<i128> {
    v.iter().map(|&x| x as i128).collect()
}

fn dominates(a: &[u32], b: &[u32]) -> bool {
    a != b && a.iter().zip(b).all(|(x, y)| x <= y)
}

/// Support points not dominated by another point (`a <= b` componentwise).
pub fn minimal_points(points: &[Vec<u32>]) -> Vec<usize> {
    (0..points.len())
        .filter(|&i| !points.iter().any(|q| dominates(q, &points[i])))
        .collect()
}

impl NewtonPolyhedron {
    pub fn from_points(n: usize, mut support: Vec<SupportPoint>) -> Result<Self> {
        if n > MAX_VARIABLES {
            return Err(Error::TooManyVariables(n));
        }
        if support.is_empty() {
            return Err(Error::ZeroFunction);
        }
        if let Some(p) = support.iter().find(|p| p.coords.len() != n) {
            return Err(Error::DimensionMismatch { expected: n, got: p.coords.len() });
        }
        support.sort_by(|a, b| a.coords.cmp(&b.coords));
        let coords: Vec<Vec<u32>> = support.iter().map(|p| p.coords.clone()).collect();
        let minimal = minimal_points(&coords);
        let max = coords.iter().flatten().copied().max().unwrap_or(0) as i64;
        let pad = 1 + (n as i64 + 1) * max;
        let mut augmented: Vec<Vec<i64>> = Vec::with_capacity(minimal.len() * (n + 1));
        for &i in &minimal {
            let base: Vec<i64> = coords[i].iter().map(|&x| x as i64).collect();
            augmented.push(base.clone());
            for j in 0..n {
                let mut shifted = base.clone();
                shifted[j] += pad;
                augmented.push(shifted);
            }
        }
        let facets = hull::facets(&augmented)?
            .into_iter()
            .filter(|h| h.normal.iter().all(|&x| x >= 0))
            .map(|h| {
                let face = coords
                    .iter()
                    .enumerate()
                    .filter(|(_, c)| dot(&h.normal, c) == h.offset)
                    .map(|(i, _)| i)
                    .collect();
                Facet { normal: h.normal, offset: h.offset, face }
            })
            .collect();
        let mut poly = NewtonPolyhedron { n, support, facets, boundary_dim: 0 };
        poly.boundary_dim = if poly.facets.iter().any(Facet::is_strictly_positive) {
            n - 1
        } else {
            poly.compact_faces()?.iter().map(|f| f.dim).max().unwrap_or(0)
        };
        Ok(poly)
    }

    pub fn from_coords(n: usize, points: &[Vec<u32>]) -> Result<Self> {
        let mut uniq: Vec<Vec<u32>> = points.to_vec();
        uniq.sort();
        uniq.dedup();
        Self::from_points(n, uniq.into_iter().map(|coords| SupportPoint { coords, sources: Vec::new() }).collect())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn support(&self) -> &[SupportPoint] {
        &self.support
    }

    pub fn coords(&self) -> Vec<Vec<u32>> {
        self.support.iter().map(|p| p.coords.clone()).collect()
    }

    pub fn facets(&self) -> &[Facet] {
        &self.facets
    }

    pub fn boundary_dim(&self) -> usize {
        self.boundary_dim
    }

    /// `Δ(P)` and `d(P)` for a non-negative, non-zero rational weight.
    pub fn min_face(&self, weights: &[Rational]) -> Result<FaceData> {
        if weights.len() != self.n {
            return Err(Error::DimensionMismatch { expected: self.n, got: weights.len() });
        }
        if weights.iter().any(Signed::is_negative) || weights.iter().all(Zero::is_zero) {
            return Err(Error::InvalidWeight("entries must be non-negative and not all zero".into()));
        }
        let degrees: Vec<Rational> = self.support.iter().map(|p| weighted_degree(weights, &p.coords)).collect();
        let value = degrees.iter().min().cloned().ok_or(Error::ZeroFunction)?;
        let indices: Vec<usize> = (0..degrees.len()).filter(|&i| degrees[i] == value).collect();
        let points: Vec<Vec<u32>> = indices.iter().map(|&i| self.support[i].coords.clone()).collect();
        let rows: Vec<Vec<i128>> = points.iter().map(|p| to_i128(p)).collect();
        let dim = hull::affine_dim(&rows)?;
        let mut ech = Echelon::default();
        if let Some((first, rest)) = rows.split_first() {
            for r in rest {
                ech.insert(r.iter().zip(first).map(|(a, b)| a - b).collect())?;
            }
        }
        for (j, p) in weights.iter().enumerate() {
            if p.is_zero() {
                let mut e = vec![0i128; self.n];
                e[j] = 1;
                ech.insert(e)?;
            }
        }
        Ok(FaceData { points, indices, dim, polyhedral_dim: ech.rank(), value })
    }

    pub fn min_face_int(&self, weights: &[i64]) -> Result<FaceData> {
        let w: Vec<Rational> = weights.iter().map(|&x| Rational::from_integer(BigInt::from(x))).collect();
        self.min_face(&w)
    }

    /// All compact faces of `Γ₊`, deterministic order (by dimension, then indices).
    pub fn compact_faces(&self) -> Result<Vec<CompactFace>> {
        let facet_sets: Vec<BTreeSet<usize>> = self.facets.iter().map(|f| f.face.iter().copied().collect()).collect();
        let closure = |s: &BTreeSet<usize>| -> (BTreeSet<usize>, Vec<usize>) {
            let containing: Vec<usize> = (0..facet_sets.len()).filter(|&k| s.is_subset(&facet_sets[k])).collect();
            let mut c: Option<BTreeSet<usize>> = None;
            for &k in &containing {
                c = Some(match c {
                    None => facet_sets[k].clone(),
                    Some(acc) => acc.intersection(&facet_sets[k]).copied().collect(),
                });
            }
            (c.unwrap_or_default(), containing)
        };
        let mut seen: BTreeMap<BTreeSet<usize>, Vec<usize>> = BTreeMap::new();
        let mut queue: Vec<BTreeSet<usize>> = Vec::new();
        for s in &facet_sets {
            if !s.is_empty() && !seen.contains_key(s) {
                let (c, containing) = closure(s);
                seen.insert(c.clone(), containing);
                queue.push(c);
            }
        }
        while let Some(face) = queue.pop() {
            for g in &facet_sets {
                let h: BTreeSet<usize> = face.intersection(g).copied().collect();
                if h.is_empty() || h == face {
                    continue;
                }
                let (c, containing) = closure(&h);
                if !seen.contains_key(&c) {
                    seen.insert(c.clone(), containing);
                    queue.push(c);
                }
            }
        }
        let mut out = Vec::new();
        for (set, containing) in seen {
            let mut weight = vec![0i64; self.n];
            for &k in &containing {
                for (w, x) in weight.iter_mut().zip(&self.facets[k].normal) {
                    *w += x;
                }
            }
            if weight.contains(&0) {
                continue;
            }
            let indices: Vec<usize> = set.into_iter().collect();
            let rows: Vec<Vec<i128>> = indices.iter().map(|&i| to_i128(&self.support[i].coords)).collect();
            let dim = hull::affine_dim(&rows)?;
            out.push(CompactFace { indices, facets: containing, dim, weight });
        }
        out.sort_by(|a, b| a.dim.cmp(&b.dim).then_with(|| a.indices.cmp(&b.indices)));
        Ok(out)
    }

    /// Whether support point `i` is a vertex of `Γ₊`.
    pub fn is_vertex(&self, i: usize) -> Result<bool> {
        let normals = self
            .facets
            .iter()
            .filter(|f| f.face.contains(&i))
            .map(|f| f.normal.iter().map(|&x| x as i128).collect());
        Ok(hull::rank_of(normals)? == self.n)
    }

    pub fn vertices(&self) -> Result<Vec<usize>> {
        let mut out = Vec::new();
        for i in 0..self.support.len() {
            if self.is_vertex(i)? {
                out.push(i);
            }
        }
        Ok(out)
    }
}

fn dot(normal: &[i64], c: &[u32]) -> i64 {
    normal.iter().zip(c).map(|(a, &b)| a * b as i64).sum()
}

pub fn build_polyhedron(f: &MixedFunction) -> Result<NewtonPolyhedron> {
    if f.is_zero() {
        return Err(Error::ZeroFunction);
    }
    let support = f
        .support_sources()
        .into_iter()
        .map(|(coords, sources)| SupportPoint { coords, sources })
        .collect();
    NewtonPolyhedron::from_points(f.n(), support)
}

pub fn boundary_dimension(poly: &NewtonPolyhedron) -> usize {
    poly.boundary_dim()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat, weight};
    use crate::mixedpoly::parse;

    fn poly(s: &str) -> NewtonPolyhedron {
        build_polyhedron(&parse(s, None).unwrap()).unwrap()
    }

    fn positive(p: &NewtonPolyhedron) -> Vec<(Vec<i64>, i64)> {
        p.facets().iter().filter(|f| f.is_strictly_positive()).map(|f| (f.normal.clone(), f.offset)).collect()
    }

    #[test]
    fn brieskorn_and_quadric() {
        let b = poly("z1^3+z2^7");
        assert_eq!(positive(&b), vec![(vec![7, 3], 21)]);
        assert_eq!(b.boundary_dim(), 1);
        let q = poly("z1^2+z2^2");
        assert_eq!(positive(&q), vec![(vec![1, 1], 2)]);
        let normals: Vec<Vec<i64>> = q.facets().iter().map(|f| f.normal.clone()).collect();
        assert_eq!(normals, vec![vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn jdual_facets() {
        let p = poly("(z1^9+z2^3+z3^6)*z2+z3^7+z4^7");
        assert_eq!(positive(&p), vec![(vec![7, 21, 12, 12], 84)]);
        assert!(p.facets().iter().any(|f| f.normal == vec![0, 7, 1, 1] && f.offset == 7));
        assert_eq!(p.boundary_dim(), 3);
        let s = p.min_face(&[int(0), int(1), rat(1, 7), rat(1, 7)]).unwrap();
        assert_eq!(s.points, vec![vec![0, 0, 0, 7], vec![0, 0, 7, 0], vec![9, 1, 0, 0]]);
        assert_eq!(s.value, int(1));
        assert_eq!(s.polyhedral_dim, 3);
    }

    #[test]
    fn single_point_boundary() {
        let p = poly("z1^2*z2");
        assert_eq!(p.boundary_dim(), 0);
        assert!(positive(&p).is_empty());
        assert_eq!(p.compact_faces().unwrap().len(), 1);
    }

    #[test]
    fn min_face_values() {
        let b = poly("z1^3+z2^7");
        let f = b.min_face(&weight(&[1, 1])).unwrap();
        assert_eq!(f.points, vec![vec![3, 0]]);
        assert_eq!(f.value, int(3));
        let n = b.min_face(&[rat(1, 3), rat(1, 7)]).unwrap();
        assert_eq!(n.value, int(1));
        assert_eq!(n.dim, 1);
        assert!(b.min_face(&weight(&[0, 0])).is_err());
    }

    #[test]
    fn compact_faces_of_weighted_example() {
        let p = poly("z1^2*z2 + z2^3*z3 + z3^4*z1 + z4^2");
        let faces = p.compact_faces().unwrap();
        assert_eq!(faces.iter().filter(|f| f.dim == 3).count(), 1);
        assert_eq!(faces.iter().filter(|f| f.dim == 0).count(), 4);
        for f in &faces {
            assert!(f.weight.iter().all(|&w| w > 0));
            let face = p.min_face_int(&f.weight).unwrap();
            assert_eq!(face.indices, f.indices);
        }
    }

    #[test]
    fn too_many_variables() {
        let f = parse("z1+z2+z3+z4+z5+z6+z7", None).unwrap();
        assert_eq!(build_polyhedron(&f), Err(Error::TooManyVariables(7)));
    }
}
