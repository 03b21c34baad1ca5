//! Exact rational and complex-rational helpers shared by every module.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type CRational = Complex<BigRational>;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn cint(re: i64, im: i64) -> CRational {
    Complex::new(int(re), int(im))
}

pub fn creal(r: Rational) -> CRational {
    Complex::new(r, Rational::zero())
}

pub fn weight(entries: &[i64]) -> Vec<Rational> {
    entries.iter().map(|&e| int(e)).collect()
}

pub fn rat_to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or(f64::NAN)
}

pub fn c_to_f64(c: &CRational) -> Complex64 {
    Complex64::new(rat_to_f64(&c.re), rat_to_f64(&c.im))
}

pub fn c_is_zero(c: &CRational) -> bool {
    c.re.is_zero() && c.im.is_zero()
}

pub fn c_is_real(c: &CRational) -> bool {
    c.im.is_zero()
}

pub fn c_pow(base: &CRational, exp: u32) -> CRational {
    let mut acc = creal(Rational::one());
    for _ in 0..exp {
        acc = &acc * base;
    }
    acc
}

/// Weighted degree `sum p_i * e_i` of an exponent vector.
pub fn weighted_degree(weights: &[Rational], exps: &[u32]) -> Rational {
    weights
        .iter()
        .zip(exps)
        .filter(|(_, &e)| e != 0)
        .fold(Rational::zero(), |acc, (p, &e)| acc + p * BigInt::from(e))
}

/// `p/q` rendering used in all textual and JSON output (integers print bare).
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        Some(Rational::new(p, q))
    } else {
        Some(Rational::from_integer(s.parse().ok()?))
    }
}

/// Scales a non-negative rational vector to its primitive integer representative.
pub fn primitive_from_rational(v: &[Rational]) -> Option<Vec<i64>> {
    let lcm = v
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = v.iter().map(|r| (r * &lcm).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return None;
    }
    ints.iter().map(|x| (x / &g).to_i64()).collect()
}

pub fn gcd_slice(v: &[i64]) -> i64 {
    v.iter().fold(0i64, |acc, &x| acc.gcd(&x))
}

pub fn primitive_int(v: &[i64]) -> Vec<i64> {
    let g = gcd_slice(v);
    if g == 0 {
        v.to_vec()
    } else {
        v.iter().map(|x| x / g).collect()
    }
}

pub fn fmt_complex(c: &CRational) -> String {
    if c.im.is_zero() {
        fmt_rational(&c.re)
    } else {
        let sign = if c.im.is_negative() { '-' } else { '+' };
        format!("({}{}{}i)", fmt_rational(&c.re), sign, fmt_rational(&c.im.abs()))
    }
}

pub fn fmt_int_vec(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn fmt_u32_vec(v: &[u32]) -> String {
    let parts: Vec<String> = v.iter().map(|x| x.to_string()).collect();
    format!("({})", parts.join(","))
}

pub fn fmt_rat_vec(v: &[Rational]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_rational).collect();
    format!("({})", parts.join(","))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn primitive_scaling() {
        let r = vec![rat(1, 12), rat(1, 4), rat(1, 7), rat(1, 7)];
        assert_eq!(primitive_from_rational(&r), Some(vec![7, 21, 12, 12]));
        let p = vec![rat(2, 21), rat(2, 7), rat(1, 7), rat(1, 7)];
        assert_eq!(primitive_from_rational(&p), Some(vec![2, 6, 3, 3]));
        assert_eq!(primitive_from_rational(&[int(0), int(0)]), None);
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["21/4", "-3/7", "6", "0"] {
            assert_eq!(fmt_rational(&parse_rational(s).unwrap()), s);
        }
        assert!(parse_rational("1/0").is_none());
    }
}
