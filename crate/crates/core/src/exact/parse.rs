//! Strict recursive-descent parser for polynomial strings.
//!
//! Grammar (whitespace ignored):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary)*
//! unary  := ('+' | '-') unary | power
//! power  := atom ('^' integer)?
//! atom   := integer ('/' integer)? | variable | '(' expr ')'
//! ```
//!
//! Errors carry the byte offset where parsing stopped.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{BinForm, MultiForm, Rat};
use crate::error::{Error, Result};

/// Sparse (not necessarily homogeneous) polynomial keyed by exponent vector.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparsePoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl SparsePoly {
    pub fn constant(nvars: usize, c: Rat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(vec![0; nvars], c);
        }
        Self { nvars, terms }
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Self { nvars, terms: BTreeMap::from([(e, Rat::one())]) }
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    fn add(mut self, other: &Self, sign: &Rat) -> Self {
        for (e, c) in &other.terms {
            let slot = self.terms.entry(e.clone()).or_insert_with(Rat::zero);
            *slot += c * sign;
        }
        self.terms.retain(|_, c| !c.is_zero());
        self
    }

    fn mul(&self, other: &Self) -> Self {
        let mut out = Self::constant(self.nvars, Rat::zero());
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Vec<u32> = ea.iter().zip(eb).map(|(a, b)| a + b).collect();
                let slot = out.terms.entry(e).or_insert_with(Rat::zero);
                *slot += ca * cb;
            }
        }
        out.terms.retain(|_, c| !c.is_zero());
        out
    }

    fn pow(&self, e: u32) -> Self {
        (0..e).fold(Self::constant(self.nvars, Rat::one()), |acc, _| acc.mul(self))
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::Parse { pos: self.pos, msg: msg.into() })
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<SparsePoly> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                let rhs = self.term()?;
                acc = acc.add(&rhs, &Rat::one());
            } else if self.eat(b'-') {
                let rhs = self.term()?;
                acc = acc.add(&rhs, &-Rat::one());
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<SparsePoly> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            let rhs = self.unary()?;
            acc = acc.mul(&rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<SparsePoly> {
        if self.eat(b'-') {
            let inner = self.unary()?;
            return Ok(SparsePoly::constant(self.vars.len(), Rat::zero()).add(&inner, &-Rat::one()));
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<SparsePoly> {
        let base = self.atom()?;
        if self.eat(b'^') {
            self.skip_ws();
            let Some(e) = self.integer()? else {
                return self.err("expected exponent after '^'");
            };
            let e: u32 = match u32::try_from(e) {
                Ok(e) if e <= 64 => e,
                _ => return self.err("exponent out of range"),
            };
            return Ok(base.pow(e));
        }
        Ok(base)
    }

    fn integer(&mut self) -> Result<Option<BigInt>> {
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Ok(None);
        }
        let s = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(Some(s.parse().expect("digits parse as an integer")))
    }

    fn atom(&mut self) -> Result<SparsePoly> {
        let n = self.vars.len();
        match self.peek() {
            None => self.err("unexpected end of input"),
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if !self.eat(b')') {
                    return self.err("expected ')'");
                }
                Ok(inner)
            }
            Some(c) if c.is_ascii_digit() => {
                let num = self.integer()?.expect("peeked a digit");
                let mut value = Rat::from_integer(num);
                if self.eat(b'/') {
                    self.skip_ws();
                    let Some(den) = self.integer()? else {
                        return self.err("expected denominator after '/'");
                    };
                    if den.is_zero() {
                        return self.err("zero denominator");
                    }
                    value /= Rat::from_integer(den);
                }
                Ok(SparsePoly::constant(n, value))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii");
                match self.vars.iter().position(|v| v == name) {
                    Some(i) => Ok(SparsePoly::var(n, i)),
                    None => {
                        self.pos = start;
                        self.err(format!("unknown variable '{name}'"))
                    }
                }
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
        }
    }
}

/// Parses `src` as a polynomial in the given variable names.
pub fn parse_poly(src: &str, vars: &[String]) -> Result<SparsePoly> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, vars };
    let out = p.expr()?;
    if p.peek().is_some() {
        return p.err("trailing input");
    }
    Ok(out)
}

/// Parses a homogeneous form in `x0..x{nvars-1}`.
pub fn parse_multiform(src: &str, nvars: usize) -> Result<MultiForm> {
    let vars: Vec<String> = (0..nvars).map(|i| format!("x{i}")).collect();
    MultiForm::from_sparse(nvars, &parse_poly(src, &vars)?)
}

/// Parses a binary form in `s, t`. The zero polynomial is rejected, since
/// its degree would be ambiguous.
pub fn parse_binform(src: &str) -> Result<BinForm> {
    let vars = ["s".to_string(), "t".to_string()];
    let poly = parse_poly(src, &vars)?;
    let f = MultiForm::from_sparse(2, &poly)?;
    if f.is_zero() {
        return Err(Error::InvalidInput("binary form must be nonzero".into()));
    }
    let d = f.degree();
    let mut coeffs = vec![Rat::zero(); d + 1];
    for (e, c) in f.terms() {
        coeffs[e[1] as usize] = c.clone();
    }
    Ok(BinForm::new(coeffs))
}
