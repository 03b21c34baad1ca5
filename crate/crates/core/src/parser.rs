//! Recursive-descent parser for polynomial expressions.
//!
//! Accepted syntax: sums and differences of products; factors are numbers
//! (`3`, `3/4`, `2.5`), the imaginary unit `i`, variables `zK` and conjugates
//! `~zK` (1-based), parenthesized sub-expressions, and `^INT` powers.
//! `*` may be omitted between factors.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_complex::Complex;
use num_traits::{One, Zero};

use crate::arith::{c_is_zero, CRational, Rational};
use crate::error::{Error, Result};
use crate::mixedpoly::{ExponentPair, MixedFunction};

const MAX_EXPONENT: u32 = 4096;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(Rational, bool),
    Imag,
    Var { conj: bool, index: usize },
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    End,
}

fn syntax(pos: usize, msg: impl Into<String>) -> Error {
    Error::Syntax { pos, msg: msg.into() }
}

fn digits(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    i
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>> {
    let b = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < b.len() {
        let c = b[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = match c {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'^' => Tok::Caret,
            b'(' => Tok::LParen,
            b')' => Tok::RParen,
            b'i' => Tok::Imag,
            b'~' | b'z' => {
                let conj = c == b'~';
                let mut j = i + 1;
                if conj {
                    while j < b.len() && b[j].is_ascii_whitespace() {
                        j += 1;
                    }
                    if j >= b.len() || b[j] != b'z' {
                        return Err(syntax(j, "expected variable after '~'"));
                    }
                    j += 1;
                }
                let end = digits(b, j);
                if end == j {
                    return Err(syntax(j, "expected variable index"));
                }
                let index: usize = text[j..end].parse().map_err(|_| syntax(j, "variable index too large"))?;
                if index == 0 {
                    return Err(syntax(j, "variable indices start at 1"));
                }
                i = end;
                out.push((start, Tok::Var { conj, index }));
                continue;
            }
            b'0'..=b'9' | b'.' => {
                let int_end = digits(b, i);
                let mut end = int_end;
                let mut plain = false;
                let value = if end < b.len() && b[end] == b'.' {
                    let frac_end = digits(b, end + 1);
                    if frac_end == end + 1 && int_end == i {
                        return Err(syntax(i, "malformed number"));
                    }
                    let whole = &text[i..int_end];
                    let frac = &text[end + 1..frac_end];
                    let numer: BigInt = format!("{whole}{frac}0").parse().map_err(|_| syntax(i, "malformed number"))?;
                    let denom = num_traits::pow(BigInt::from(10), frac.len() + 1);
                    end = frac_end;
                    Rational::new(numer, denom)
                } else if end < b.len() && b[end] == b'/' {
                    let den_end = digits(b, end + 1);
                    if den_end == end + 1 {
                        return Err(syntax(end + 1, "expected denominator"));
                    }
                    let p: BigInt = text[i..int_end].parse().map_err(|_| syntax(i, "malformed number"))?;
                    let q: BigInt = text[end + 1..den_end].parse().map_err(|_| syntax(end + 1, "malformed number"))?;
                    if q.is_zero() {
                        return Err(syntax(end + 1, "zero denominator"));
                    }
                    end = den_end;
                    Rational::new(p, q)
                } else {
                    plain = true;
                    Rational::from_integer(text[i..end].parse().map_err(|_| syntax(i, "malformed number"))?)
                };
                i = end;
                out.push((start, Tok::Num(value, plain)));
                continue;
            }
            _ => return Err(syntax(i, format!("unexpected character '{}'", text[i..].chars().next().unwrap_or('?')))),
        };
        out.push((start, tok));
        i += 1;
    }
    out.push((text.len(), Tok::End));
    Ok(out)
}

/// Sparse polynomial over an open-ended variable set, used while parsing.
type Poly = BTreeMap<BTreeMap<usize, (u32, u32)>, CRational>;

fn constant(c: CRational) -> Poly {
    let mut p = Poly::new();
    if !c_is_zero(&c) {
        p.insert(BTreeMap::new(), c);
    }
    p
}

fn add_into(acc: &mut Poly, key: BTreeMap<usize, (u32, u32)>, c: CRational) {
    let entry = acc.entry(key.clone()).or_insert_with(|| Complex::new(Rational::zero(), Rational::zero()));
    *entry = &*entry + c;
    if c_is_zero(entry) {
        acc.remove(&key);
    }
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    let mut out = Poly::new();
    for (ka, ca) in a {
        for (kb, cb) in b {
            let mut k = ka.clone();
            for (&v, &(n, m)) in kb {
                let e = k.entry(v).or_insert((0, 0));
                e.0 += n;
                e.1 += m;
            }
            add_into(&mut out, k, ca * cb);
        }
    }
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn at(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn expr(&mut self) -> Result<Poly> {
        let mut acc = Poly::new();
        let mut sign = match self.peek() {
            Tok::Plus => {
                self.bump();
                1
            }
            Tok::Minus => {
                self.bump();
                -1
            }
            _ => 1,
        };
        loop {
            let t = self.term()?;
            for (k, c) in t {
                let c = if sign < 0 { -c } else { c };
                add_into(&mut acc, k, c);
            }
            sign = match self.peek() {
                Tok::Plus => 1,
                Tok::Minus => -1,
                _ => return Ok(acc),
            };
            self.bump();
        }
    }

    fn starts_factor(&self) -> bool {
        matches!(self.peek(), Tok::Num(..) | Tok::Imag | Tok::Var { .. } | Tok::LParen)
    }

    fn term(&mut self) -> Result<Poly> {
        if !self.starts_factor() {
            return Err(syntax(self.at(), "expected a term"));
        }
        let mut acc = self.power()?;
        loop {
            if *self.peek() == Tok::Star {
                self.bump();
                if !self.starts_factor() {
                    return Err(syntax(self.at(), "expected a factor after '*'"));
                }
            } else if !self.starts_factor() {
                return Ok(acc);
            }
            let f = self.power()?;
            acc = poly_mul(&acc, &f);
        }
    }

    fn power(&mut self) -> Result<Poly> {
        let base = self.atom()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let pos = self.at();
        match self.bump() {
            Tok::Minus => Err(Error::NegativeExponent { pos }),
            Tok::Num(r, true) => {
                let k: u32 = r
                    .to_integer()
                    .try_into()
                    .ok()
                    .filter(|&k| k <= MAX_EXPONENT)
                    .ok_or_else(|| syntax(pos, format!("exponent must be an integer in 0..={MAX_EXPONENT}")))?;
                let mut acc = constant(Complex::new(Rational::one(), Rational::zero()));
                for _ in 0..k {
                    acc = poly_mul(&acc, &base);
                }
                Ok(acc)
            }
            _ => Err(syntax(pos, "expected a non-negative integer exponent")),
        }
    }

    fn atom(&mut self) -> Result<Poly> {
        let pos = self.at();
        match self.bump() {
            Tok::Num(r, _) => Ok(constant(Complex::new(r, Rational::zero()))),
            Tok::Imag => Ok(constant(Complex::new(Rational::zero(), Rational::one()))),
            Tok::Var { conj, index } => {
                let mut key = BTreeMap::new();
                key.insert(index, if conj { (0, 1) } else { (1, 0) });
                let mut p = Poly::new();
                p.insert(key, Complex::new(Rational::one(), Rational::zero()));
                Ok(p)
            }
            Tok::LParen => {
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(syntax(self.at(), "expected ')'"));
                }
                self.bump();
                Ok(inner)
            }
            Tok::End => Err(syntax(pos, "unexpected end of input")),
            _ => Err(syntax(pos, "expected a number, variable or '('")),
        }
    }
}

/// Parses `text` into a canonical [`MixedFunction`].
///
/// The variable count is the largest index seen, or `n_hint` when given
/// (which must be at least that large).
pub fn parse(text: &str, n_hint: Option<usize>) -> Result<MixedFunction> {
    let mut p = Parser { toks: tokenize(text)?, pos: 0 };
    let poly = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(syntax(p.at(), "unexpected token"));
    }
    let max_index = poly.keys().flat_map(|k| k.keys().copied()).max().unwrap_or(0);
    let seen_max = p.toks.iter().filter_map(|(_, t)| match t {
        Tok::Var { index, .. } => Some(*index),
        _ => None,
    });
    let seen_max = seen_max.max().unwrap_or(0).max(max_index);
    let n = match n_hint {
        Some(h) if h < seen_max => return Err(Error::IndexOutOfRange { index: seen_max, n: h }),
        Some(h) => h,
        None => seen_max,
    };
    if poly.keys().any(|k| k.values().all(|&(a, b)| a == 0 && b == 0)) {
        return Err(Error::ConstantTerm);
    }
    if poly.is_empty() || n == 0 {
        return Err(Error::ZeroFunction);
    }
    let terms = poly.into_iter().map(|(k, c)| {
        let mut nu = vec![0; n];
        let mut mu = vec![0; n];
        for (v, (a, b)) in k {
            nu[v - 1] += a;
            mu[v - 1] += b;
        }
        (ExponentPair { nu, mu }, c)
    });
    MixedFunction::from_terms(n, terms)
}
