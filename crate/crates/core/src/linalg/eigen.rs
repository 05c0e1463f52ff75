//! Hermitian eigensolvers.
//!
//! [`hermitian_eig`] is a cyclic complex Jacobi method: slow-ish but
//! accurate to a few ulps in both values and vectors, and its output is a
//! deterministic function of the input. [`hermitian_eigvals`] reduces to
//! real tridiagonal form with Householder reflectors and runs implicit QL;
//! it returns values only and is what the numerical-range sweeps call a few
//! thousand times per matrix.

use num_complex::Complex64;

use super::matrix::{ComplexMatrix, ONE, ZERO};
use super::svd::svd;
use crate::error::{Error, Result};

/// Relative Hermitian-defect tolerance accepted by the eigensolvers.
pub const HERMITIAN_TOL: f64 = 1e-12;

const MAX_SWEEPS: usize = 64;
const MAX_QL_ITERATIONS: usize = 64;

/// Eigenvalues in ascending order with the matching orthonormal eigenvectors
/// stored as columns of `vectors`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, j: usize) -> Vec<Complex64> {
        self.vectors.column(j)
    }

    pub fn min(&self) -> f64 {
        self.values[0]
    }

    pub fn max(&self) -> f64 {
        *self.values.last().expect("non-empty spectrum")
    }

    /// `V · diag(h(λ)) · V*`.
    pub fn recompose(&self, h: impl Fn(f64) -> f64) -> ComplexMatrix {
        let mapped: Vec<f64> = self.values.iter().map(|&l| h(l)).collect();
        recompose_with(&self.vectors, &mapped)
    }
}

/// `V · diag(d) · V*` for real `d`.
pub(crate) fn recompose_with(v: &ComplexMatrix, d: &[f64]) -> ComplexMatrix {
    let n = v.dim();
    let vs = v.as_slice();
    let mut out = vec![ZERO; n * n];
    for i in 0..n {
        for j in i..n {
            let mut acc = ZERO;
            for (k, &dk) in d.iter().enumerate() {
                acc += vs[i * n + k] * dk * vs[j * n + k].conj();
            }
            out[i * n + j] = acc;
            out[j * n + i] = acc.conj();
        }
        out[i * n + i].im = 0.0;
    }
    ComplexMatrix::from_raw(n, out)
}

/// Reject matrices whose Hermitian defect exceeds `1e-12·max(1, ‖A‖)`.
///
/// The cheap Frobenius bounds settle almost every call; the exact operator
/// norms are only computed when the bounds are inconclusive.
pub fn check_hermitian(a: &ComplexMatrix) -> Result<()> {
    let defect_f = a.hermitian_defect();
    if defect_f == 0.0 {
        return Ok(());
    }
    let n = a.dim() as f64;
    let norm_lower = a.frobenius_norm() / n.sqrt();
    if defect_f <= HERMITIAN_TOL * norm_lower.max(1.0) {
        return Ok(());
    }
    let diff = a.try_sub(&a.adjoint())?;
    let defect = svd(&diff)?.sigma[0];
    let norm = svd(a)?.sigma[0];
    if defect > HERMITIAN_TOL * norm.max(1.0) {
        return Err(Error::NotHermitian { residual: defect });
    }
    Ok(())
}

/// Full eigendecomposition of a Hermitian matrix.
///
/// Each eigenvector is phase-normalized so its first component with
/// modulus above `1e-12` is real and positive.
pub fn hermitian_eig(a: &ComplexMatrix) -> Result<HermitianEigen> {
    check_hermitian(a)?;
    let n = a.dim();
    let (h, scale) = unit_scaled(&a.hermitian_part());
    let mut work = h.as_slice().to_vec();
    let mut v = ComplexMatrix::identity(n)?.as_slice().to_vec();
    jacobi_diagonalize(&mut work, n, &mut v)?;

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| work[i * n + i].re.total_cmp(&work[j * n + j].re));

    let values = rescaled(order.iter().map(|&k| work[k * n + k].re), scale)?;
    let mut vecs = vec![ZERO; n * n];
    for (col, &k) in order.iter().enumerate() {
        let phase = leading_phase((0..n).map(|i| v[i * n + k]));
        for i in 0..n {
            vecs[i * n + col] = v[i * n + k] * phase;
        }
    }
    Ok(HermitianEigen {
        values,
        vectors: ComplexMatrix::from_raw(n, vecs),
    })
}

/// Unit-modulus factor that makes the first non-negligible entry real positive.
pub(crate) fn leading_phase(entries: impl Iterator<Item = Complex64>) -> Complex64 {
    for z in entries {
        let r = z.norm();
        if r > 1e-12 {
            return z.conj() / r;
        }
    }
    ONE
}

/// Complex Jacobi rotation `G` acting on columns (p, q) that zeroes the
/// (p, q) entry of `G* H G` for the 2×2 Hermitian block
/// `[[app, apq], [conj(apq), aqq]]`. Returned as (gpp, gpq, gqp, gqq).
#[inline]
pub(crate) fn jacobi_rotation(
    app: f64,
    aqq: f64,
    apq: Complex64,
) -> (Complex64, Complex64, Complex64, Complex64) {
    let b = apq.norm();
    let phase_conj = apq.conj() / b;
    let tau = (aqq - app) / (2.0 * b);
    let t = if tau >= 0.0 {
        1.0 / (tau + (1.0 + tau * tau).sqrt())
    } else {
        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    (
        Complex64::new(c, 0.0),
        Complex64::new(s, 0.0),
        phase_conj * (-s),
        phase_conj * c,
    )
}

fn jacobi_diagonalize(a: &mut [Complex64], n: usize, v: &mut [Complex64]) -> Result<()> {
    let frob = a.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    if frob == 0.0 || n == 1 {
        return Ok(());
    }
    let negligible = 1e-18 * frob;
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in (p + 1)..n {
                off += a[p * n + q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * frob {
            return Ok(());
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[p * n + q];
                let b = apq.norm();
                if b == 0.0 {
                    continue;
                }
                if b <= negligible {
                    a[p * n + q] = ZERO;
                    a[q * n + p] = ZERO;
                    continue;
                }
                let (gpp, gpq, gqp, gqq) = jacobi_rotation(a[p * n + p].re, a[q * n + q].re, apq);
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * gpp + akq * gqp;
                    a[k * n + q] = akp * gpq + akq * gqq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = gpp.conj() * apk + gqp.conj() * aqk;
                    a[q * n + k] = gpq.conj() * apk + gqq.conj() * aqk;
                }
                a[p * n + q] = ZERO;
                a[q * n + p] = ZERO;
                a[p * n + p].im = 0.0;
                a[q * n + q].im = 0.0;
                for k in 0..n {
                    let vkp = v[k * n + p];
                    let vkq = v[k * n + q];
                    v[k * n + p] = vkp * gpp + vkq * gqp;
                    v[k * n + q] = vkp * gpq + vkq * gqq;
                }
            }
        }
    }
    Err(Error::NoConvergence {
        routine: "hermitian_eig",
        iterations: MAX_SWEEPS,
    })
}

/// Eigenvalues only, ascending, after the Hermitian check.
pub fn hermitian_eigvals(a: &ComplexMatrix) -> Result<Vec<f64>> {
    check_hermitian(a)?;
    eigvals_unchecked(a)
}

/// Eigenvalues of an exactly Hermitian matrix (callers guarantee the
/// structure, e.g. rotated Hermitian parts). Only the lower triangle is read.
pub(crate) fn eigvals_unchecked(a: &ComplexMatrix) -> Result<Vec<f64>> {
    let (h, scale) = unit_scaled(a);
    let mut w = h.as_slice().to_vec();
    rescaled(eigvals_in_place(&mut w, a.dim())?.into_iter(), scale)
}

/// `A/s` with `s` the largest entry modulus (1 for the zero matrix), so that
/// the sweeps cannot overflow.
fn unit_scaled(a: &ComplexMatrix) -> (ComplexMatrix, f64) {
    let s = a.max_abs();
    if s > 0.0 {
        (a.scale_real(1.0 / s), s)
    } else {
        (a.clone(), 1.0)
    }
}

fn rescaled(values: impl Iterator<Item = f64>, scale: f64) -> Result<Vec<f64>> {
    let out: Vec<f64> = values.map(|x| x * scale).collect();
    if out.iter().any(|x| x.is_infinite()) {
        return Err(Error::Domain("eigenvalues exceed the f64 range".into()));
    }
    Ok(out)
}

/// As [`eigvals_unchecked`] on a row-major buffer, which is overwritten.
pub(crate) fn eigvals_in_place(a: &mut [Complex64], n: usize) -> Result<Vec<f64>> {
    if n == 2 {
        let (p, q, b) = (a[0].re, a[3].re, a[2].norm());
        let mid = 0.5 * (p + q);
        let rad = (0.5 * (p - q)).hypot(b);
        return Ok(vec![mid - rad, mid + rad]);
    }
    let (mut d, mut e) = tridiagonalize(a, n);
    tridiagonal_ql(&mut d, &mut e)?;
    d.sort_by(f64::total_cmp);
    Ok(d)
}

/// Householder reduction to real symmetric tridiagonal form. Returns the
/// diagonal and the moduli of the subdiagonal (`e[i]` couples `i` and
/// `i + 1`; `e[n-1] = 0`).
fn tridiagonalize(a: &mut [Complex64], n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut e = vec![0.0; n];
    let mut v = vec![ZERO; n];
    let mut w = vec![ZERO; n];
    for k in 0..n.saturating_sub(2) {
        let m = n - k - 1;
        let x0 = a[(k + 1) * n + k];
        let xnorm = ((k + 1)..n).map(|i| a[i * n + k].norm_sqr()).sum::<f64>().sqrt();
        if xnorm == 0.0 {
            e[k] = 0.0;
            continue;
        }
        let phase = if x0.norm() > 0.0 { x0 / x0.norm() } else { ONE };
        let alpha = -phase * xnorm;
        for i in 0..m {
            v[i] = a[(k + 1 + i) * n + k];
        }
        v[0] -= alpha;
        let vnorm2: f64 = v[..m].iter().map(|z| z.norm_sqr()).sum();
        if vnorm2 == 0.0 {
            e[k] = xnorm;
            continue;
        }
        let tau = 2.0 / vnorm2;
        // w = τ S v on the trailing block S = a[k+1.., k+1..]
        for i in 0..m {
            let row = (k + 1 + i) * n + k + 1;
            let mut acc = ZERO;
            for j in 0..m {
                acc += a[row + j] * v[j];
            }
            w[i] = acc * tau;
        }
        let vw: Complex64 = (0..m).map(|i| v[i].conj() * w[i]).sum();
        let kfac = vw * (0.5 * tau);
        for i in 0..m {
            w[i] -= kfac * v[i];
        }
        for i in 0..m {
            let row = (k + 1 + i) * n + k + 1;
            for j in 0..m {
                a[row + j] -= v[i] * w[j].conj() + w[i] * v[j].conj();
            }
        }
        e[k] = xnorm;
    }
    if n >= 2 {
        e[n - 2] = a[(n - 1) * n + (n - 2)].norm();
    }
    let d = (0..n).map(|i| a[i * n + i].re).collect();
    (d, e)
}

/// Implicit QL with Wilkinson-style shifts on a symmetric tridiagonal matrix;
/// eigenvalues overwrite `d`.
fn tridiagonal_ql(d: &mut [f64], e: &mut [f64]) -> Result<()> {
    let n = d.len();
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > MAX_QL_ITERATIONS {
                return Err(Error::NoConvergence {
                    routine: "tridiagonal_ql",
                    iterations: iter,
                });
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = (g * g + 1.0).sqrt();
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c, mut p) = (1.0, 1.0, 0.0);
            let mut underflow = false;
            let mut i = m;
            while i > l {
                i -= 1;
                let f = s * e[i];
                let b = c * e[i];
                r = (f * f + g * g).sqrt();
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn sample_hermitian() -> ComplexMatrix {
        let a = ComplexMatrix::from_rows(vec![
            vec![c(2.0, 0.0), c(1.0, -1.0), c(0.0, 0.5), c(0.3, 0.0)],
            vec![c(1.0, 1.0), c(-1.0, 0.0), c(2.0, 0.0), c(0.0, -0.2)],
            vec![c(0.0, -0.5), c(2.0, 0.0), c(0.5, 0.0), c(1.1, 0.9)],
            vec![c(0.3, 0.0), c(0.0, 0.2), c(1.1, -0.9), c(3.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(a.hermitian_defect(), 0.0);
        a
    }

    #[test]
    fn identity_spectrum() {
        let e = hermitian_eig(&ComplexMatrix::identity(2).unwrap()).unwrap();
        assert_eq!(e.values, vec![1.0, 1.0]);
        assert_eq!(e.vectors, ComplexMatrix::identity(2).unwrap());
    }

    #[test]
    fn swap_matrix_spectrum() {
        let a = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[1.0, 0.0]]).unwrap();
        let e = hermitian_eig(&a).unwrap();
        assert!((e.values[0] + 1.0).abs() < 1e-15);
        assert!((e.values[1] - 1.0).abs() < 1e-15);
        // leading components normalized to be real and positive
        for j in 0..2 {
            let v = e.vector(j);
            assert!(v[0].re > 0.0 && v[0].im == 0.0);
        }
    }

    #[test]
    fn values_only_path_agrees_with_jacobi() {
        let a = sample_hermitian();
        let full = hermitian_eig(&a).unwrap();
        let fast = hermitian_eigvals(&a).unwrap();
        for (x, y) in full.values.iter().zip(&fast) {
            assert!((x - y).abs() < 1e-13, "{x} vs {y}");
        }
    }

    #[test]
    fn rejects_non_hermitian() {
        let j = ComplexMatrix::jordan_block(2).unwrap();
        assert!(matches!(hermitian_eig(&j), Err(Error::NotHermitian { .. })));
        assert!(matches!(hermitian_eigvals(&j), Err(Error::NotHermitian { .. })));
    }

    #[test]
    fn tiny_asymmetry_is_tolerated() {
        let mut a = sample_hermitian();
        a[(0, 1)] += c(1e-15, 0.0);
        assert!(hermitian_eig(&a).is_ok());
    }

    #[test]
    fn one_by_one_and_zero() {
        let e = hermitian_eig(&ComplexMatrix::from_real_diag(&[-2.5]).unwrap()).unwrap();
        assert_eq!(e.values, vec![-2.5]);
        let z = hermitian_eig(&ComplexMatrix::zero(3).unwrap()).unwrap();
        assert_eq!(z.values, vec![0.0; 3]);
    }
}
