use std::fmt;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use super::{fmt_rat, is_neg, Rat, UniPoly};
use crate::error::{Error, Result};

/// Homogeneous binary form of degree `d` in `s, t`.
///
/// `coeffs[i]` is the coefficient of `s^(d-i) t^i`; the list always has
/// exactly `d + 1` entries, so the zero form still carries its degree.
///
/// Dehomogenizing at `s = 1` gives the polynomial in `t` with the same
/// coefficient list. The multiplicity of the root at infinity `(0 : 1)` is
/// `d - deg(dehomogenization)`, i.e. the power of `s` dividing the form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct BinForm {
    coeffs: Vec<Rat>,
}

impl BinForm {
    pub fn zero(degree: usize) -> Self {
        Self { coeffs: vec![Rat::zero(); degree + 1] }
    }

    pub fn one() -> Self {
        Self::constant(Rat::one())
    }

    pub fn constant(c: Rat) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn new(coeffs: Vec<Rat>) -> Self {
        assert!(!coeffs.is_empty(), "a binary form needs at least one coefficient");
        Self { coeffs }
    }

    pub fn from_ints(c: &[i64]) -> Self {
        Self::new(c.iter().map(|&v| super::rat(v)).collect())
    }

    /// `s`.
    pub fn s() -> Self {
        Self::from_ints(&[1, 0])
    }

    /// `t`.
    pub fn t() -> Self {
        Self::from_ints(&[0, 1])
    }

    /// `a*s + b*t`.
    pub fn linear(a: Rat, b: Rat) -> Self {
        Self::new(vec![a, b])
    }

    /// `t - root*s`, vanishing at `(1 : root)`.
    pub fn root_factor(root: &Rat) -> Self {
        Self::new(vec![-root.clone(), Rat::one()])
    }

    /// Homogenizes `p` to the given degree. Panics if `deg p > degree`.
    pub fn homogenize(p: &UniPoly, degree: usize) -> Self {
        assert!(
            p.degree().is_none_or(|d| d <= degree),
            "cannot homogenize a polynomial of degree {:?} to degree {degree}",
            p.degree()
        );
        Self { coeffs: (0..=degree).map(|i| p.coeff(i)).collect() }
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[Rat] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &Rat {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn dehomogenize(&self) -> UniPoly {
        UniPoly::from_coeffs(self.coeffs.clone())
    }

    /// Power of `s` dividing the form (multiplicity of the point at
    /// infinity of the `s = 1` chart). `None` for the zero form.
    pub fn s_multiplicity(&self) -> Option<usize> {
        self.dehomogenize().degree().map(|d| self.degree() - d)
    }

    /// True when `(0 : 1)` is not a root, so the `s = 1` chart sees every
    /// root and the dehomogenization keeps full degree.
    pub fn finite_in_chart(&self) -> bool {
        !self.coeffs[self.degree()].is_zero()
    }

    pub fn eval(&self, s: &Rat, t: &Rat) -> Rat {
        let d = self.degree();
        let mut acc = Rat::zero();
        let mut tp = Rat::one();
        for (i, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc += c * &tp * pow(s, d - i);
            }
            tp *= t;
        }
        acc
    }

    pub fn scale(&self, c: &Rat) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.degree(), other.degree(), "adding forms of different degrees");
        Self { coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&-Rat::one()))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let p = &self.dehomogenize() * &other.dehomogenize();
        Self::homogenize(&p, self.degree() + other.degree())
    }

    pub fn pow(&self, e: usize) -> Self {
        (0..e).fold(Self::one(), |acc, _| acc.mul(self))
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    /// The zero form divided by anything of smaller degree is zero.
    pub fn exact_div(&self, d: &Self) -> Option<Self> {
        if d.is_zero() || d.degree() > self.degree() {
            return None;
        }
        let qdeg = self.degree() - d.degree();
        if self.is_zero() {
            return Some(Self::zero(qdeg));
        }
        if d.s_multiplicity()? > self.s_multiplicity()? {
            return None;
        }
        let q = self.dehomogenize().exact_div(&d.dehomogenize())?;
        Some(Self::homogenize(&q, qdeg))
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.exact_div(self).is_some()
    }

    /// `∂/∂s`; the derivative of a constant is the zero constant.
    pub fn partial_s(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (0..d)
                .map(|i| &self.coeffs[i] * Rat::from_integer((d - i).into()))
                .collect(),
        }
    }

    /// `∂/∂t`.
    pub fn partial_t(&self) -> Self {
        let d = self.degree();
        if d == 0 {
            return Self::zero(0);
        }
        Self {
            coeffs: (1..=d)
                .map(|i| &self.coeffs[i] * Rat::from_integer(i.into()))
                .collect(),
        }
    }

    /// Scales so that the highest nonzero `t`-coefficient is one (monic in
    /// the dehomogenized variable). The zero form is returned unchanged.
    pub fn normalized(&self) -> Self {
        match self.coeffs.iter().rev().find(|c| !c.is_zero()) {
            None => self.clone(),
            Some(lc) => self.scale(&lc.recip()),
        }
    }

    /// Equality up to a nonzero scalar.
    pub fn associated(&self, other: &Self) -> bool {
        self.degree() == other.degree() && self.normalized() == other.normalized()
    }

    /// Substitutes `(s, t) -> (a s + b t, c s + d t)` for `chart = [[a, b], [c, d]]`.
    pub fn change_chart(&self, chart: &Chart) -> Result<Self> {
        if chart.det().is_zero() {
            return Err(Error::SingularChange);
        }
        let [[a, b], [c, d]] = &chart.0;
        let new_s = Self::linear(a.clone(), b.clone());
        let new_t = Self::linear(c.clone(), d.clone());
        let deg = self.degree();
        let mut out = Self::zero(deg);
        for (i, coef) in self.coeffs.iter().enumerate() {
            if coef.is_zero() {
                continue;
            }
            let term = new_s.pow(deg - i).mul(&new_t.pow(i)).scale(coef);
            out = out.add(&term);
        }
        Ok(out)
    }

    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let d = self.degree();
        let mut out = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = is_neg(c);
            let abs = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let mut vars = Vec::new();
            for (v, e) in [("s", d - i), ("t", i)] {
                match e {
                    0 => {}
                    1 => vars.push(v.to_string()),
                    _ => vars.push(format!("{v}^{e}")),
                }
            }
            let mono = vars.join("*");
            if mono.is_empty() {
                out.push_str(&fmt_rat(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&format!("{}*{mono}", fmt_rat(&abs)));
            }
        }
        out
    }
}

fn pow(x: &Rat, e: usize) -> Rat {
    (0..e).fold(Rat::one(), |acc, _| acc * x)
}

impl fmt::Debug for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BinForm[{}]({})", self.degree(), self.display())
    }
}

impl fmt::Display for BinForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}

/// Invertible linear substitution of the line's coordinates,
/// `(s, t) -> (a s + b t, c s + d t)` stored as `[[a, b], [c, d]]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart(pub [[Rat; 2]; 2]);

impl Chart {
    pub fn identity() -> Self {
        Self::shear(Rat::zero())
    }

    /// `(s, t) -> (s + lambda t, t)`.
    pub fn shear(lambda: Rat) -> Self {
        Self([[Rat::one(), lambda], [Rat::zero(), Rat::one()]])
    }

    pub fn from_ints(m: [[i64; 2]; 2]) -> Self {
        Self(m.map(|row| row.map(super::rat)))
    }

    pub fn det(&self) -> Rat {
        let [[a, b], [c, d]] = &self.0;
        a * d - b * c
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl Serialize for Chart {
    fn serialize<S: serde::Serializer>(&self, ser: S) -> std::result::Result<S::Ok, S::Error> {
        let rows: Vec<Vec<String>> =
            self.0.iter().map(|r| r.iter().map(fmt_rat).collect()).collect();
        rows.serialize(ser)
    }
}

impl<'de> Deserialize<'de> for Chart {
    fn deserialize<D: serde::Deserializer<'de>>(de: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<String>> = Vec::deserialize(de)?;
        let bad = || serde::de::Error::custom("chart must be a 2x2 matrix of rationals");
        if rows.len() != 2 || rows.iter().any(|r| r.len() != 2) {
            return Err(bad());
        }
        let get = |i: usize, j: usize| super::parse_rat(&rows[i][j]).ok_or_else(bad);
        Ok(Self([[get(0, 0)?, get(0, 1)?], [get(1, 0)?, get(1, 1)?]]))
    }
}

/// Finds a shear `(s, t) -> (s + λt, t)`, trying `λ = 0, 1, 2, …`, after
/// which `g` has no root at infinity. Returns the transformed form and the
/// chart used.
pub fn fix_chart(g: &BinForm) -> Result<(BinForm, Chart)> {
    if g.is_zero() {
        return Err(Error::AllZero);
    }
    // the new t^d coefficient is g(λ, 1), nonzero for all but deg g values
    for lambda in 0..=(g.degree() as i64 + 1) {
        let lam = super::rat(lambda);
        if !g.eval(&lam, &Rat::one()).is_zero() {
            let chart = Chart::shear(lam);
            return Ok((g.change_chart(&chart)?, chart));
        }
    }
    unreachable!("a nonzero form has at most deg g roots")
}

/// Greatest common divisor of binary forms, ignoring zero inputs.
///
/// The result is `s^e * G` where `e` is the least power of `s` among the
/// nonzero inputs and `G` is the homogenized monic gcd of their
/// dehomogenizations.
pub fn gcd_binforms(forms: &[BinForm]) -> Result<BinForm> {
    let nonzero: Vec<&BinForm> = forms.iter().filter(|f| !f.is_zero()).collect();
    if nonzero.is_empty() {
        return Err(Error::AllZero);
    }
    let e = nonzero
        .iter()
        .filter_map(|f| f.s_multiplicity())
        .min()
        .expect("nonzero forms have an s-multiplicity");
    let g = nonzero
        .iter()
        .fold(UniPoly::zero(), |acc, f| acc.gcd(&f.dehomogenize()));
    let gdeg = g.degree().expect("gcd of nonzero polynomials is nonzero");
    // homogenizing to a degree e above deg G multiplies by s^e
    Ok(BinForm::homogenize(&g, gdeg + e))
}

/// `g = unit * Π factor_i ^ multiplicity_i` with squarefree, pairwise
/// coprime, normalized factors and strictly increasing multiplicities.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SquarefreeDecomposition {
    pub unit: Rat,
    pub factors: Vec<(usize, BinForm)>,
}

impl SquarefreeDecomposition {
    pub fn reconstruct(&self) -> BinForm {
        self.factors
            .iter()
            .fold(BinForm::constant(self.unit.clone()), |acc, (m, f)| acc.mul(&f.pow(*m)))
    }
}

/// Squarefree decomposition by iterated gcds with both partial derivatives.
///
/// `gcd(g, ∂g/∂s, ∂g/∂t)` is the multiple part `Π q_i^(m_i - 1)`; peeling
/// off one layer at a time separates the factors by multiplicity. Roots at
/// infinity are handled like any other root.
pub fn squarefree_decomposition(g: &BinForm) -> Result<SquarefreeDecomposition> {
    if g.is_zero() {
        return Err(Error::AllZero);
    }
    let mut factors = Vec::new();
    if g.degree() > 0 {
        let repeated = gcd_binforms(&[g.clone(), g.partial_s(), g.partial_t()])?;
        let mut layer = g.exact_div(&repeated).expect("gcd divides g").normalized();
        let mut rest = repeated;
        let mut mult = 1;
        while layer.degree() > 0 {
            let deeper = gcd_binforms(&[layer.clone(), rest.clone()])?;
            let exact = layer.exact_div(&deeper).expect("gcd divides layer");
            if exact.degree() > 0 {
                factors.push((mult, exact.normalized()));
            }
            rest = rest.exact_div(&deeper).expect("deeper layer divides the remainder");
            layer = deeper;
            mult += 1;
        }
    }
    let unit_form = factors
        .iter()
        .fold(BinForm::one(), |acc: BinForm, (m, f)| acc.mul(&f.pow(*m)));
    let quotient = g.exact_div(&unit_form).expect("decomposition divides g");
    debug_assert_eq!(quotient.degree(), 0);
    Ok(SquarefreeDecomposition { unit: quotient.coeffs[0].clone(), factors })
}
