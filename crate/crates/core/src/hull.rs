//! Exact facet enumeration of full-dimensional integer point sets by the
//! double-description method on the cone `{(P, c) : P·a >= c for all points a}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HullFacet {
    /// Inward normal: `normal·x >= offset` on the hull.
    pub normal: Vec<i64>,
    pub offset: i64,
}

fn gcd_normalize(v: &mut [i128]) {
    let g = v.iter().fold(0i128, |acc, x| acc.gcd(x));
    if g > 1 {
        for x in v.iter_mut() {
            *x /= g;
        }
    }
}

fn dot(a: &[i128], b: &[i128]) -> Result<i128> {
    a.iter().zip(b).try_fold(0i128, |acc, (x, y)| {
        x.checked_mul(*y).and_then(|p| acc.checked_add(p)).ok_or(Error::Overflow)
    })
}

/// Row-echelon accumulator over the integers.
#[derive(Default)]
pub(crate) struct Echelon {
    rows: Vec<(usize, Vec<i128>)>,
}

impl Echelon {
    fn reduce(&self, mut v: Vec<i128>) -> Result<Vec<i128>> {
        for (pc, r) in &self.rows {
            let b = v[*pc];
            if b == 0 {
                continue;
            }
            let a = r[*pc];
            for k in 0..v.len() {
                let lhs = a.checked_mul(v[k]).ok_or(Error::Overflow)?;
                let rhs = b.checked_mul(r[k]).ok_or(Error::Overflow)?;
                v[k] = lhs.checked_sub(rhs).ok_or(Error::Overflow)?;
            }
            gcd_normalize(&mut v);
        }
        Ok(v)
    }

    /// Adds `v` if it is independent of the rows so far; returns whether it was added.
    pub(crate) fn insert(&mut self, v: Vec<i128>) -> Result<bool> {
        let v = self.reduce(v)?;
        match v.iter().position(|x| *x != 0) {
            Some(pc) => {
                self.rows.push((pc, v));
                Ok(true)
            }
            None => Ok(false),
        }
    }

    pub(crate) fn rank(&self) -> usize {
        self.rows.len()
    }
}

pub(crate) fn rank_of<I: IntoIterator<Item = Vec<i128>>>(rows: I) -> Result<usize> {
    let mut e = Echelon::default();
    for r in rows {
        e.insert(r)?;
    }
    Ok(e.rank())
}

/// Affine dimension of a point set (-1 is reported as 0 for the empty set).
pub(crate) fn affine_dim(points: &[Vec<i128>]) -> Result<usize> {
    match points.split_first() {
        None => Ok(0),
        Some((first, rest)) => rank_of(rest.iter().map(|p| p.iter().zip(first).map(|(a, b)| a - b).collect())),
    }
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(m: usize) -> Self {
        Bits(vec![0; m.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn contains(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<i128>,
    zeros: Bits,
}

/// Inverse columns of a square integer matrix, each scaled to a primitive integer vector.
fn inverse_columns(rows: &[Vec<i128>]) -> Result<Vec<Vec<i128>>> {
    let d = rows.len();
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<BigRational> = r.iter().map(|x| BigRational::from_integer(BigInt::from(*x))).collect();
            row.extend((0..d).map(|j| if i == j { BigRational::one() } else { BigRational::zero() }));
            row
        })
        .collect();
    for col in 0..d {
        let piv = (col..d).find(|&r| !m[r][col].is_zero()).ok_or(Error::Overflow)?;
        m.swap(col, piv);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..d {
            if r != col && !m[r][col].is_zero() {
                let factor = m[r][col].clone();
                for k in 0..2 * d {
                    let delta = &factor * &m[col][k];
                    m[r][k] = &m[r][k] - delta;
                }
            }
        }
    }
    (0..d)
        .map(|k| {
            let col: Vec<BigRational> = (0..d).map(|r| m[r][d + k].clone()).collect();
            let lcm = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = col.iter().map(|x| (x * &lcm).to_integer()).collect();
            let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
            ints.iter().map(|x| (x / &g).to_i128().ok_or(Error::Overflow)).collect()
        })
        .collect()
}

/// Facets of `conv(points)`; the points must affinely span their ambient space.
pub fn facets(points: &[Vec<i64>]) -> Result<Vec<HullFacet>> {
    let n = points.first().map_or(0, Vec::len);
    let d = n + 1;
    let rows: Vec<Vec<i128>> = points
        .iter()
        .map(|p| p.iter().map(|&x| x as i128).chain(std::iter::once(-1)).collect())
        .collect();
    let m = rows.len();

    let mut basis = Vec::with_capacity(d);
    let mut ech = Echelon::default();
    for (k, r) in rows.iter().enumerate() {
        if ech.insert(r.clone())? {
            basis.push(k);
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return Err(Error::BoundaryDimension { found: basis.len().saturating_sub(1), required: n });
    }

    let initial: Vec<Vec<i128>> = basis.iter().map(|&k| rows[k].clone()).collect();
    let mut rays: Vec<Ray> = inverse_columns(&initial)?
        .into_iter()
        .enumerate()
        .map(|(k, v)| {
            let mut zeros = Bits::new(m);
            for (j, &b) in basis.iter().enumerate() {
                if j != k {
                    zeros.set(b);
                }
            }
            Ray { v, zeros }
        })
        .collect();

    let mut in_basis = vec![false; m];
    for &b in &basis {
        in_basis[b] = true;
    }
    for idx in (0..m).filter(|&i| !in_basis[i]) {
        let a = &rows[idx];
        let s: Vec<i128> = rays.iter().map(|r| dot(a, &r.v)).collect::<Result<_>>()?;
        if s.iter().all(|&x| x >= 0) {
            for (r, &x) in rays.iter_mut().zip(&s) {
                if x == 0 {
                    r.zeros.set(idx);
                }
            }
            continue;
        }
        let pos: Vec<usize> = (0..rays.len()).filter(|&k| s[k] > 0).collect();
        let neg: Vec<usize> = (0..rays.len()).filter(|&k| s[k] < 0).collect();
        let mut fresh = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].zeros.and(&rays[q].zeros);
                if common.count() + 2 < d {
                    continue;
                }
                let blocked = rays
                    .iter()
                    .enumerate()
                    .any(|(k, r)| k != p && k != q && r.zeros.contains(&common));
                if blocked {
                    continue;
                }
                let mut v = Vec::with_capacity(d);
                for k in 0..d {
                    let lhs = s[p].checked_mul(rays[q].v[k]).ok_or(Error::Overflow)?;
                    let rhs = s[q].checked_mul(rays[p].v[k]).ok_or(Error::Overflow)?;
                    v.push(lhs.checked_sub(rhs).ok_or(Error::Overflow)?);
                }
                gcd_normalize(&mut v);
                let mut zeros = common;
                zeros.set(idx);
                fresh.push(Ray { v, zeros });
            }
        }
        let mut kept: Vec<Ray> = Vec::with_capacity(rays.len() + fresh.len());
        for (k, mut r) in rays.into_iter().enumerate() {
            if s[k] > 0 {
                kept.push(r);
            } else if s[k] == 0 {
                r.zeros.set(idx);
                kept.push(r);
            }
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut out = Vec::new();
    for r in rays {
        if r.v[..n].iter().all(|x| *x == 0) {
            continue;
        }
        let normal: Vec<i64> = r.v[..n].iter().map(|x| x.to_i64().ok_or(Error::Overflow)).collect::<Result<_>>()?;
        let offset = r.v[n].to_i64().ok_or(Error::Overflow)?;
        out.push(HullFacet { normal, offset });
    }
    out.sort_by(|a, b| a.normal.cmp(&b.normal).then(a.offset.cmp(&b.offset)));
    out.dedup();
    Ok(out)
}
