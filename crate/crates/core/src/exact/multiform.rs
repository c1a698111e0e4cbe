use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use super::parse::SparsePoly;
use super::{fmt_rat, is_neg, BinForm, Rat};
use crate::error::{Error, Result};

/// Homogeneous form of degree `degree` in variables `x0..x{nvars-1}`.
///
/// Sparse: exponent vector -> nonzero coefficient. Every exponent vector
/// sums to `degree`.
#[derive(Clone, PartialEq, Eq)]
pub struct MultiForm {
    nvars: usize,
    degree: usize,
    terms: BTreeMap<Vec<u32>, Rat>,
}

impl MultiForm {
    pub fn zero(nvars: usize, degree: usize) -> Self {
        Self { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn from_terms(
        nvars: usize,
        degree: usize,
        terms: impl IntoIterator<Item = (Vec<u32>, Rat)>,
    ) -> Result<Self> {
        let mut f = Self::zero(nvars, degree);
        for (exp, c) in terms {
            f.add_term(exp, c)?;
        }
        Ok(f)
    }

    /// Builds a form from a sparse polynomial, checking homogeneity. A
    /// polynomial with no terms gets degree 0.
    pub fn from_sparse(nvars: usize, poly: &SparsePoly) -> Result<Self> {
        let degree = poly
            .terms()
            .keys()
            .next()
            .map(|e| e.iter().sum::<u32>() as usize)
            .unwrap_or(0);
        let mut f = Self::zero(nvars, degree);
        for (exp, c) in poly.terms() {
            let mut e = exp.clone();
            if e.len() > nvars {
                if e[nvars..].iter().any(|&x| x != 0) {
                    return Err(Error::InvalidInput(format!(
                        "variable index exceeds x{}",
                        nvars - 1
                    )));
                }
                e.truncate(nvars);
            }
            e.resize(nvars, 0);
            if e.iter().sum::<u32>() as usize != degree {
                return Err(Error::InvalidInput("polynomial is not homogeneous".into()));
            }
            f.add_term(e, c.clone())?;
        }
        Ok(f)
    }

    fn add_term(&mut self, exp: Vec<u32>, c: Rat) -> Result<()> {
        if exp.len() != self.nvars {
            return Err(Error::InvalidInput(format!(
                "exponent vector of length {} in {} variables",
                exp.len(),
                self.nvars
            )));
        }
        if exp.iter().sum::<u32>() as usize != self.degree {
            return Err(Error::InvalidInput("term degree differs from form degree".into()));
        }
        if c.is_zero() {
            return Ok(());
        }
        let slot = self.terms.entry(exp).or_insert_with(Rat::zero);
        *slot += c;
        if slot.is_zero() {
            self.terms.retain(|_, v| !v.is_zero());
        }
        Ok(())
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, Rat> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn scale(&self, c: &Rat) -> Self {
        let mut out = Self::zero(self.nvars, self.degree);
        if !c.is_zero() {
            out.terms = self.terms.iter().map(|(e, v)| (e.clone(), v * c)).collect();
        }
        out
    }

    /// `∂/∂x_i`. The derivative of a constant is the zero constant.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (exp, c) in &self.terms {
            if exp[i] == 0 {
                continue;
            }
            let mut e = exp.clone();
            e[i] -= 1;
            out.terms.insert(e, c * Rat::from_integer(exp[i].into()));
        }
        out
    }

    pub fn eval(&self, x: &[Rat]) -> Rat {
        assert_eq!(x.len(), self.nvars);
        self.terms.iter().fold(Rat::zero(), |acc, (exp, c)| {
            let mut m = c.clone();
            for (xi, &e) in x.iter().zip(exp) {
                for _ in 0..e {
                    m *= xi;
                }
            }
            acc + m
        })
    }

    /// Pullback along `(s, t) -> s*p + t*q`: the binary form `F(sP + tQ)`
    /// of degree `deg F`.
    pub fn restrict_to_line(&self, p: &[Rat], q: &[Rat]) -> BinForm {
        assert_eq!(p.len(), self.nvars);
        assert_eq!(q.len(), self.nvars);
        let linear: Vec<BinForm> = p
            .iter()
            .zip(q)
            .map(|(a, b)| BinForm::linear(a.clone(), b.clone()))
            .collect();
        // powers[i][e] = (p_i s + q_i t)^e, built lazily up to the needed exponent
        let mut powers: Vec<Vec<BinForm>> = vec![vec![BinForm::one()]; self.nvars];
        let mut out = BinForm::zero(self.degree);
        for (exp, c) in &self.terms {
            let mut term = BinForm::constant(c.clone());
            for (i, &e) in exp.iter().enumerate() {
                if e == 0 {
                    continue;
                }
                while powers[i].len() <= e as usize {
                    let next = powers[i].last().unwrap().mul(&linear[i]);
                    powers[i].push(next);
                }
                term = term.mul(&powers[i][e as usize]);
            }
            out = out.add(&term);
        }
        out
    }

    /// Renders in variables `x0, x1, …`, highest exponent vectors first.
    pub fn display(&self) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut out = String::new();
        for (exp, c) in self.terms.iter().rev() {
            let neg = is_neg(c);
            let abs = if neg { -c } else { c.clone() };
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            let vars: Vec<String> = exp
                .iter()
                .enumerate()
                .filter(|(_, &e)| e > 0)
                .map(|(i, &e)| if e == 1 { format!("x{i}") } else { format!("x{i}^{e}") })
                .collect();
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

impl fmt::Debug for MultiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MultiForm[{}; deg {}]({})", self.nvars, self.degree, self.display())
    }
}

impl fmt::Display for MultiForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display())
    }
}
