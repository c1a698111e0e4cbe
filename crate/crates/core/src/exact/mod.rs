//! Exact arithmetic over the rationals: univariate polynomials, binary
//! forms, sparse homogeneous multivariate forms and dense matrices.
//!
//! No floating point appears anywhere in this module.

mod binform;
mod multiform;
pub mod parse;
mod qmat;
mod unipoly;

pub use binform::{fix_chart, gcd_binforms, squarefree_decomposition, BinForm, Chart, SquarefreeDecomposition};
pub use multiform::MultiForm;
pub use qmat::QMat;
pub use unipoly::UniPoly;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Arbitrary precision rational number, always in lowest terms with a
/// positive denominator.
pub type Rat = num_rational::BigRational;

pub fn rat(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

pub fn rat_zero() -> Rat {
    Rat::zero()
}

pub fn rat_one() -> Rat {
    Rat::one()
}

/// Renders a rational as `p` or `p/q`.
pub fn fmt_rat(r: &Rat) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p` or `p/q` (optionally signed).
pub fn parse_rat(s: &str) -> Option<Rat> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().ok()?;
    let d: BigInt = d.parse().ok()?;
    if d.is_zero() {
        return None;
    }
    Some(Rat::new(n, d))
}

pub(crate) fn is_neg(r: &Rat) -> bool {
    r.is_negative()
}
