use serde::Serialize;

use super::matrix::ComplexMatrix;
use super::svd::operator_norm;
use crate::error::Result;

/// `A^k` by repeated squaring; `A^0` is the identity.
pub fn mat_power(a: &ComplexMatrix, k: u32) -> ComplexMatrix {
    let mut result = ComplexMatrix::identity(a.dim()).expect("dimension already validated");
    if k == 0 {
        return result;
    }
    let mut base = a.clone();
    let mut e = k;
    let mut first = true;
    while e > 0 {
        if e & 1 == 1 {
            result = if first {
                base.clone()
            } else {
                result.mul_unchecked(&base)
            };
            first = false;
        }
        e >>= 1;
        if e > 0 {
            base = base.mul_unchecked(&base);
        }
    }
    result
}

/// Relative agreement between successive Gelfand estimates that stops the
/// iteration.
pub const GELFAND_STEP_TOL: f64 = 1e-6;
/// Squaring steps before giving up; the estimate is then flagged approximate.
/// Convergence is not tested before `2^k ≥ 2n`.
pub const GELFAND_MAX_STEPS: usize = 40;
/// Accuracy quoted for diagonalizable input.
pub const SPECTRAL_RADIUS_TOL: f64 = 1e-5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpectralRadius {
    pub value: f64,
    pub steps: usize,
    /// False when the step budget ran out before two estimates agreed.
    pub converged: bool,
}

/// Gelfand estimate `r(T) ≈ ‖T^{2^k}‖^{1/2^k}`.
///
/// The running power is renormalized by its norm after every squaring and
/// the logarithm of the scale is accumulated separately, so neither
/// overflow nor underflow occurs. The estimate is an upper bound of r(T) up
/// to rounding.
pub fn spectral_radius(t: &ComplexMatrix) -> Result<SpectralRadius> {
    let norm0 = operator_norm(t)?;
    if norm0 == 0.0 {
        return Ok(SpectralRadius {
            value: 0.0,
            steps: 0,
            converged: true,
        });
    }
    let mut x = t.scale_real(1.0 / norm0);
    // log ‖T^{2^k}‖ (approximately, via the renormalized chain)
    let mut log_norm = norm0.ln();
    let mut estimate = norm0;
    // Below 2^k = 2n a non-normal transient (e.g. ‖J_n^m‖ = 1 for m < n) can
    // produce agreeing estimates that are far from r(T).
    let min_steps = (2 * t.dim()).next_power_of_two().trailing_zeros() as usize;
    for k in 1..=GELFAND_MAX_STEPS {
        x = x.mul_unchecked(&x);
        let nrm = operator_norm(&x)?;
        if nrm == 0.0 {
            return Ok(SpectralRadius {
                value: 0.0,
                steps: k,
                converged: true,
            });
        }
        x = x.scale_real(1.0 / nrm);
        log_norm = 2.0 * log_norm + nrm.ln();
        let next = (log_norm / (1u64 << k) as f64).exp();
        if k >= min_steps && (next - estimate).abs() <= GELFAND_STEP_TOL * next {
            return Ok(SpectralRadius {
                value: next,
                steps: k,
                converged: true,
            });
        }
        estimate = next;
    }
    Ok(SpectralRadius {
        value: estimate,
        steps: GELFAND_MAX_STEPS,
        converged: false,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_complex::Complex64;

    #[test]
    fn power_edge_cases() {
        let j = ComplexMatrix::jordan_block(2).unwrap();
        assert_eq!(mat_power(&j, 0), ComplexMatrix::identity(2).unwrap());
        assert_eq!(mat_power(&j, 1), j);
        assert_eq!(mat_power(&j, 2), ComplexMatrix::zero(2).unwrap());
    }

    #[test]
    fn power_matches_repeated_product() {
        let a = ComplexMatrix::from_rows(vec![
            vec![Complex64::new(0.5, 0.1), Complex64::new(-0.2, 0.3)],
            vec![Complex64::new(0.7, 0.0), Complex64::new(0.1, -0.4)],
        ])
        .unwrap();
        let mut acc = ComplexMatrix::identity(2).unwrap();
        for k in 0..9u32 {
            assert!((&mat_power(&a, k) - &acc).max_abs() < 1e-14);
            acc = &acc * &a;
        }
    }

    #[test]
    fn diagonal_radius() {
        let d = ComplexMatrix::from_diag(&[
            Complex64::new(1.0, 0.0),
            Complex64::new(-3.0, 0.0),
            Complex64::new(0.0, 2.0),
        ])
        .unwrap();
        let r = spectral_radius(&d).unwrap();
        assert!(r.converged);
        assert!((r.value - 3.0).abs() < 1e-12);
    }

    #[test]
    fn nilpotent_radius() {
        let r = spectral_radius(&ComplexMatrix::jordan_block(2).unwrap()).unwrap();
        assert!(r.value.abs() < 1e-5);
        let r4 = spectral_radius(&ComplexMatrix::jordan_block(4).unwrap()).unwrap();
        assert!(r4.value.abs() < 1e-5);
        assert_eq!(spectral_radius(&ComplexMatrix::zero(3).unwrap()).unwrap().value, 0.0);
    }
}
