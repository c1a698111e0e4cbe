//! Nested divisor pairs `(x^d + h) | (x^k + g)` on a smooth curve germ:
//! the parametrization, its tangent space at the origin, the image in
//! `V_k`, and the distinguished subspace `T⁰`.
//!
//! A tangent vector `(h, g)` is stored as one coefficient vector of length
//! `d + k`: the `d` coefficients of `h` followed by the `k` of `g`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{rat_one, rat_zero, QMat, Rat, UniPoly};

fn check_bound(name: &str, p: &UniPoly, bound: usize) -> Result<()> {
    match p.degree() {
        Some(deg) if deg >= bound => Err(Error::DegreeViolation(format!(
            "{name} has degree {deg}, must be below {bound}"
        ))),
        _ => Ok(()),
    }
}

fn check_dims(d: usize, k: usize) -> Result<()> {
    if d == 0 || d >= k {
        return Err(Error::Precondition(format!("need 1 <= d < k, got d={d}, k={k}")));
    }
    Ok(())
}

/// `g = (x^d + h)(x^(k-d) + h') - x^k`.
pub fn compose_pair(d: usize, k: usize, h: &UniPoly, h_prime: &UniPoly) -> Result<UniPoly> {
    check_dims(d, k)?;
    check_bound("h", h, d)?;
    check_bound("h'", h_prime, k - d)?;
    let a = h + &UniPoly::monomial(rat_one(), d);
    let b = h_prime + &UniPoly::monomial(rat_one(), k - d);
    Ok(&(&a * &b) - &UniPoly::monomial(rat_one(), k))
}

/// Outcome of dividing `x^k + g` by `x^d + h`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Factorization {
    /// `h'` with `compose_pair(h, h') = g`.
    Divisible(UniPoly),
    NotDivisible,
}

pub fn factor_pair(d: usize, k: usize, h: &UniPoly, g: &UniPoly) -> Result<Factorization> {
    check_dims(d, k)?;
    check_bound("h", h, d)?;
    check_bound("g", g, k)?;
    let num = g + &UniPoly::monomial(rat_one(), k);
    let den = h + &UniPoly::monomial(rat_one(), d);
    let (q, r) = num.div_rem(&den);
    if !r.is_zero() {
        return Ok(Factorization::NotDivisible);
    }
    Ok(Factorization::Divisible(&q - &UniPoly::monomial(rat_one(), k - d)))
}

/// `h x^(k-d) + h' x^d`, the derivative of `compose_pair` at the origin.
pub fn linearization(d: usize, k: usize, h: &UniPoly, h_prime: &UniPoly) -> UniPoly {
    &(h * &UniPoly::monomial(rat_one(), k - d)) + &(h_prime * &UniPoly::monomial(rat_one(), d))
}

/// `T_(d,k)` as an explicit spanning set of `(h, g)` pairs.
#[derive(Clone, Debug)]
pub struct NestedTangent {
    pub d: usize,
    pub k: usize,
    /// Coefficient vectors of length `d + k`.
    pub basis: Vec<Vec<Rat>>,
}

fn unit(len: usize, i: usize) -> Vec<Rat> {
    let mut v = vec![rat_zero(); len];
    v[i] = rat_one();
    v
}

impl NestedTangent {
    pub fn dim(&self) -> usize {
        self.matrix().rank()
    }

    /// Rows are basis vectors.
    pub fn matrix(&self) -> QMat {
        QMat::from_rows(self.d + self.k, self.basis.clone())
    }

    pub fn h_part(v: &[Rat], d: usize) -> UniPoly {
        UniPoly::from_coeffs(v[..d].to_vec())
    }

    pub fn g_part(v: &[Rat], d: usize) -> UniPoly {
        UniPoly::from_coeffs(v[d..].to_vec())
    }

    /// Rank of the projection to `V_d`.
    pub fn projection_to_vd_rank(&self) -> usize {
        let cols: Vec<usize> = (0..self.d).collect();
        self.matrix().select_columns(&cols).rank()
    }

    /// Reduced echelon basis of the image in `V_k`.
    pub fn image_basis(&self) -> Vec<UniPoly> {
        let cols: Vec<usize> = (self.d..self.d + self.k).collect();
        let (r, pivots) = self.matrix().select_columns(&cols).rref();
        (0..pivots.len()).map(|i| UniPoly::from_coeffs(r.row(i).to_vec())).collect()
    }
}

/// Spanned by `(x^j, x^(j+k-d))` for `j < d` and `(0, x^(j+d))` for
/// `j < k - d`.
pub fn tangent_space(d: usize, k: usize) -> Result<NestedTangent> {
    check_dims(d, k)?;
    let n = d + k;
    let mut basis = Vec::with_capacity(k);
    for j in 0..d {
        let mut v = unit(n, j);
        v[d + j + k - d] = rat_one();
        basis.push(v);
    }
    for j in 0..k - d {
        basis.push(unit(n, d + j + d));
    }
    Ok(NestedTangent { d, k, basis })
}

pub fn dp_image_dim(d: usize, k: usize) -> Result<usize> {
    Ok(tangent_space(d, k)?.image_basis().len())
}

/// `T⁰_(d,k)`: tangent vectors whose `h` lies in the span of `x^(d-1)`.
pub fn t0_subspace(d: usize, k: usize) -> Result<NestedTangent> {
    let t = tangent_space(d, k)?;
    // constraint rows: h coefficients 0 .. d-2 vanish, over combinations of the basis
    let m = t.matrix();
    let constraint = QMat::from_rows(
        m.rows(),
        (0..d - 1).map(|c| (0..m.rows()).map(|i| m[(i, c)].clone()).collect()).collect(),
    );
    let basis = constraint
        .kernel()
        .into_iter()
        .map(|coef| {
            (0..d + k)
                .map(|c| {
                    coef.iter()
                        .enumerate()
                        .fold(rat_zero(), |acc, (i, a)| acc + a * &m[(i, c)])
                })
                .collect()
        })
        .collect();
    Ok(NestedTangent { d, k, basis })
}

/// One row of the `nested-pairs` table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NestedRow {
    pub d: usize,
    pub k: usize,
    pub dim_t: usize,
    pub dim_image: usize,
    pub codim_t0: usize,
}

pub fn nested_table(k_max: usize) -> Result<Vec<NestedRow>> {
    let mut rows = Vec::new();
    for k in 2..=k_max {
        for d in 1..k {
            let t = tangent_space(d, k)?;
            let dim_t = t.dim();
            rows.push(NestedRow {
                d,
                k,
                dim_t,
                dim_image: t.image_basis().len(),
                codim_t0: dim_t - t0_subspace(d, k)?.dim(),
            });
        }
    }
    Ok(rows)
}
