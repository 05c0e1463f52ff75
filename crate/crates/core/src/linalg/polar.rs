use super::eigen::recompose_with;
use super::matrix::ComplexMatrix;
use super::svd::svd;
use crate::error::Result;

/// `A = U·|A|` with `U` unitary and `|A| = (A*A)^{1/2}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PolarFactors {
    pub unitary: ComplexMatrix,
    pub modulus: ComplexMatrix,
}

/// Polar decomposition completed through the SVD: with `A = W·Σ·V*`,
/// `U = W·V*` and `|A| = V·Σ·V*`. On singular input the kernel block of `U`
/// is whatever the SVD's completion of `W` produced.
pub fn polar(a: &ComplexMatrix) -> Result<PolarFactors> {
    let s = svd(a)?;
    let unitary = s.u.mul_unchecked(&s.v.adjoint());
    let modulus = recompose_with(&s.v, &s.sigma);
    Ok(PolarFactors { unitary, modulus })
}

/// `|A| = (A*A)^{1/2}`.
pub fn abs_op(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = svd(a)?;
    Ok(recompose_with(&s.v, &s.sigma))
}

/// `|A*| = (AA*)^{1/2}`.
pub fn abs_adjoint(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    let s = svd(a)?;
    Ok(recompose_with(&s.u, &s.sigma))
}
