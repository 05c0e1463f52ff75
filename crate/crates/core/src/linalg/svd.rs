//! One-sided (Hestenes) Jacobi SVD for complex square matrices.

use num_complex::Complex64;

use super::eigen::{jacobi_rotation, leading_phase};
use super::matrix::{ComplexMatrix, ZERO};
use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 64;
const ORTHOGONALITY_TOL: f64 = 1e-15;

/// `A = U · diag(σ) · V*` with σ descending.
#[derive(Debug, Clone, PartialEq)]
pub struct SingularTriple {
    pub u: ComplexMatrix,
    pub sigma: Vec<f64>,
    pub v: ComplexMatrix,
}

impl SingularTriple {
    pub fn operator_norm(&self) -> f64 {
        self.sigma[0]
    }

    /// Smallest singular value, `inf ‖Ax‖` over unit x.
    pub fn ell(&self) -> f64 {
        *self.sigma.last().expect("non-empty")
    }

    pub fn reconstruct(&self) -> ComplexMatrix {
        let n = self.sigma.len();
        let u = self.u.as_slice();
        let v = self.v.as_slice();
        let mut out = vec![ZERO; n * n];
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for k in 0..n {
                    acc += u[i * n + k] * self.sigma[k] * v[j * n + k].conj();
                }
                out[i * n + j] = acc;
            }
        }
        ComplexMatrix::from_raw(n, out)
    }
}

/// Singular value decomposition.
///
/// Each right singular vector is phase-normalized like the Hermitian
/// eigenvectors (first non-negligible component real positive) and the
/// matching left vector receives the same phase.
pub fn svd(a: &ComplexMatrix) -> Result<SingularTriple> {
    let n = a.dim();
    if !a.is_finite() {
        return Err(Error::InvalidMatrix("non-finite entries".into()));
    }
    // work on A/s so that column inner products cannot overflow
    let scale = a.max_abs();
    let inv = if scale > 0.0 { 1.0 / scale } else { 1.0 };
    let mut w: Vec<Complex64> = a.as_slice().iter().map(|z| z * inv).collect();
    let mut v = ComplexMatrix::identity(n)?.as_slice().to_vec();

    // columns below this squared norm are rounding noise and count as zero
    let negligible = f64::EPSILON.powi(2) * w.iter().map(|z| z.norm_sqr()).sum::<f64>();
    let mut converged = n == 1;
    for _ in 0..MAX_SWEEPS {
        if converged {
            break;
        }
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                let (mut alpha, mut beta, mut gamma) = (0.0, 0.0, ZERO);
                for i in 0..n {
                    let wp = w[i * n + p];
                    let wq = w[i * n + q];
                    alpha += wp.norm_sqr();
                    beta += wq.norm_sqr();
                    gamma += wp.conj() * wq;
                }
                let g = gamma.norm();
                if g == 0.0 || alpha.min(beta) <= negligible || g <= ORTHOGONALITY_TOL * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let (gpp, gpq, gqp, gqq) = jacobi_rotation(alpha, beta, gamma);
                for i in 0..n {
                    let wp = w[i * n + p];
                    let wq = w[i * n + q];
                    w[i * n + p] = wp * gpp + wq * gqp;
                    w[i * n + q] = wp * gpq + wq * gqq;
                    let vp = v[i * n + p];
                    let vq = v[i * n + q];
                    v[i * n + p] = vp * gpp + vq * gqp;
                    v[i * n + q] = vp * gpq + vq * gqq;
                }
            }
        }
        if !rotated {
            converged = true;
        }
    }
    if !converged {
        return Err(Error::NoConvergence {
            routine: "svd",
            iterations: MAX_SWEEPS,
        });
    }

    let norms: Vec<f64> = (0..n)
        .map(|j| (0..n).map(|i| w[i * n + j].norm_sqr()).sum::<f64>().sqrt())
        .collect();
    if norms.iter().any(|s| !s.is_finite()) {
        return Err(Error::NoConvergence {
            routine: "svd",
            iterations: MAX_SWEEPS,
        });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]));
    let sigma: Vec<f64> = order.iter().map(|&k| norms[k]).collect();
    let noise = sigma[0] * 1e-13;

    let mut u_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    let mut v_cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for (&k, &s) in order.iter().zip(&sigma) {
        let wk: Vec<Complex64> = (0..n).map(|i| w[i * n + k]).collect();
        let vk: Vec<Complex64> = (0..n).map(|i| v[i * n + k]).collect();
        let uk = if s > noise && s > 0.0 {
            wk.iter().map(|z| z / s).collect()
        } else {
            complete_orthonormal(&u_cols, &wk, n)
        };
        let phase = leading_phase(vk.iter().copied());
        u_cols.push(uk.into_iter().map(|z| z * phase).collect());
        v_cols.push(vk.into_iter().map(|z| z * phase).collect());
    }

    let sigma: Vec<f64> = sigma.iter().map(|s| s * scale).collect();
    if sigma[0].is_infinite() {
        return Err(Error::Domain("singular values exceed the f64 range".into()));
    }
    Ok(SingularTriple {
        u: from_columns(&u_cols),
        sigma,
        v: from_columns(&v_cols),
    })
}

fn from_columns(cols: &[Vec<Complex64>]) -> ComplexMatrix {
    let n = cols.len();
    let mut data = vec![ZERO; n * n];
    for (j, col) in cols.iter().enumerate() {
        for (i, &z) in col.iter().enumerate() {
            data[i * n + j] = z;
        }
    }
    ComplexMatrix::from_raw(n, data)
}

/// A unit vector orthogonal to `basis`, seeded by `hint` when it carries
/// usable direction and by the standard basis otherwise.
fn complete_orthonormal(basis: &[Vec<Complex64>], hint: &[Complex64], n: usize) -> Vec<Complex64> {
    let candidates = std::iter::once(hint.to_vec()).chain((0..n).map(|i| {
        let mut e = vec![ZERO; n];
        e[i] = Complex64::new(1.0, 0.0);
        e
    }));
    for mut x in candidates {
        let start = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if start == 0.0 {
            continue;
        }
        x.iter_mut().for_each(|z| *z /= start);
        // two rounds of Gram-Schmidt
        for _ in 0..2 {
            for b in basis {
                let proj: Complex64 = b.iter().zip(&x).map(|(bi, xi)| bi.conj() * xi).sum();
                x.iter_mut().zip(b).for_each(|(xi, bi)| *xi -= proj * bi);
            }
        }
        let norm = x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-3 {
            return x.into_iter().map(|z| z / norm).collect();
        }
    }
    unreachable!("standard basis always completes an orthonormal set")
}

pub fn operator_norm(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.sigma[0])
}

/// `ℓ(A) = inf{‖Ax‖ : ‖x‖ = 1}`, the smallest singular value.
pub fn ell(a: &ComplexMatrix) -> Result<f64> {
    Ok(svd(a)?.ell())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_noise_matrix_converges() {
        let e = 2.220446049250313e-16;
        let c = |re: f64, im: f64| Complex64::new(re, im);
        let a = ComplexMatrix::from_rows(vec![
            vec![c(-e, -e), c(-e, 0.0), c(-e / 4.0, 0.0)],
            vec![ZERO, ZERO, ZERO],
            vec![ZERO, c(-2.0 * e, -e), ZERO],
        ])
        .unwrap();
        let s = svd(&a).unwrap();
        assert!((&s.reconstruct() - &a).frobenius_norm() <= 1e-30);
        assert!(s.sigma.iter().all(|x| x.is_finite()));
    }

    #[test]
    fn diagonal_case() {
        let a = ComplexMatrix::from_real_diag(&[3.0, -4.0]).unwrap();
        let s = svd(&a).unwrap();
        assert_eq!(s.sigma, vec![4.0, 3.0]);
        assert_eq!(operator_norm(&a).unwrap(), 4.0);
        assert_eq!(ell(&a).unwrap(), 3.0);
        assert!((&s.reconstruct() - &a).max_abs() < 1e-15);
    }

    #[test]
    fn nilpotent_block() {
        let j = ComplexMatrix::jordan_block(2).unwrap();
        let s = svd(&j).unwrap();
        assert_eq!(s.sigma, vec![1.0, 0.0]);
        assert!((&s.reconstruct() - &j).max_abs() < 1e-15);
        let uu = &s.u.adjoint() * &s.u;
        assert!((&uu - &ComplexMatrix::identity(2).unwrap()).max_abs() < 1e-15);
    }

    #[test]
    fn zero_matrix_has_unitary_factors() {
        let z = ComplexMatrix::zero(3).unwrap();
        let s = svd(&z).unwrap();
        assert_eq!(s.sigma, vec![0.0; 3]);
        let uu = &s.u.adjoint() * &s.u;
        assert!((&uu - &ComplexMatrix::identity(3).unwrap()).max_abs() < 1e-15);
    }
}
