//! Non-commutative binomial expansion.
//!
//! With `d_B(X) = BX − XB` and `(A + d_B)` acting on matrices by
//! `X ↦ AX + d_B(X)`,
//!
//! ```text
//! (A + B)^n = Σ_k C(n,k) · {(A + d_B)^k 1} · B^{n−k},
//! (A + d_B)^k 1 = A^k + D_k(B, A),
//! D_{k+1} = d_B(A^k) + (A + d_B) D_k,   D_0 = 0.
//! ```
//!
//! `D_k` vanishes when `A` and `B` commute, recovering the usual binomial
//! theorem.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{mat_power, operator_norm, ComplexMatrix};

/// Largest expansion order; binomial coefficients stay exact integers well
/// inside this range.
pub const MAX_ORDER: usize = 32;

/// `[A, X] = AX − XA`.
pub fn commutator(a: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same(x)?;
    Ok(&a.mul_unchecked(x) - &x.mul_unchecked(a))
}

/// `(A + d_B)(X) = AX + BX − XB`.
pub fn shifted_derivation(a: &ComplexMatrix, b: &ComplexMatrix, x: &ComplexMatrix) -> Result<ComplexMatrix> {
    a.check_same(b)?;
    a.check_same(x)?;
    let ax = a.mul_unchecked(x);
    let bx = b.mul_unchecked(x);
    let xb = x.mul_unchecked(b);
    Ok(&(&ax + &bx) - &xb)
}

fn check_order(n: usize) -> Result<()> {
    if n > MAX_ORDER {
        return Err(Error::CapExceeded { n, cap: MAX_ORDER });
    }
    Ok(())
}

/// `D_0, …, D_n` by the recurrence, together with `A^0, …, A^n`.
fn essential_parts(b: &ComplexMatrix, a: &ComplexMatrix, n: usize) -> Result<(Vec<ComplexMatrix>, Vec<ComplexMatrix>)> {
    check_order(n)?;
    a.check_same(b)?;
    let dim = a.dim();
    let mut powers = Vec::with_capacity(n + 1);
    let mut parts = Vec::with_capacity(n + 1);
    powers.push(ComplexMatrix::identity(dim)?);
    parts.push(ComplexMatrix::zero(dim)?);
    for k in 0..n {
        let next = &commutator(b, &powers[k])? + &shifted_derivation(a, b, &parts[k])?;
        parts.push(next);
        powers.push(powers[k].mul_unchecked(a));
    }
    Ok((parts, powers))
}

/// The essential non-commutative part `D_n(B, A)`.
pub fn essential_part(b: &ComplexMatrix, a: &ComplexMatrix, n: usize) -> Result<ComplexMatrix> {
    let (mut parts, _) = essential_parts(b, a, n)?;
    Ok(parts.pop().expect("n + 1 entries"))
}

/// `C(n, k)` as an exact integer.
pub fn binomial_coefficient(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    // each partial product c·(n−i)/(i+1) is itself a binomial coefficient
    (0..k).fold(1u64, |c, i| c * (n - i) as u64 / (i + 1) as u64)
}

#[derive(Debug, Clone, Serialize)]
pub struct BinomialTerm {
    pub k: usize,
    pub coefficient: u64,
    /// `T_k = {A^k + D_k(B, A)} · B^{n−k}` without the binomial coefficient.
    pub matrix: ComplexMatrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct Expansion {
    pub n: usize,
    pub terms: Vec<BinomialTerm>,
    pub sum: ComplexMatrix,
    /// `‖Σ_k C(n,k) T_k − (A + B)^n‖`.
    pub residual_norm: f64,
}

impl Expansion {
    /// Residual relative to `max(1, ‖A + B‖^n)`.
    pub fn relative_residual(&self, a: &ComplexMatrix, b: &ComplexMatrix) -> Result<f64> {
        let s = operator_norm(&a.try_add(b)?)?;
        Ok(self.residual_norm / s.powi(self.n as i32).max(1.0))
    }
}

pub fn expand_binomial(a: &ComplexMatrix, b: &ComplexMatrix, n: usize) -> Result<Expansion> {
    let (parts, a_powers) = essential_parts(b, a, n)?;
    let dim = a.dim();
    let mut b_powers = Vec::with_capacity(n + 1);
    b_powers.push(ComplexMatrix::identity(dim)?);
    for k in 0..n {
        b_powers.push(b_powers[k].mul_unchecked(b));
    }
    let mut sum = ComplexMatrix::zero(dim)?;
    let mut terms = Vec::with_capacity(n + 1);
    for k in 0..=n {
        let head = &a_powers[k] + &parts[k];
        let matrix = head.mul_unchecked(&b_powers[n - k]);
        let coefficient = binomial_coefficient(n, k);
        sum = &sum + &matrix.scale_real(coefficient as f64);
        terms.push(BinomialTerm { k, coefficient, matrix });
    }
    let direct = mat_power(&a.try_add(b)?, n as u32);
    let residual_norm = operator_norm(&(&sum - &direct))?;
    Ok(Expansion {
        n,
        terms,
        sum,
        residual_norm,
    })
}
