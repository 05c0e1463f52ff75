//! Numerical range geometry through support functions.
//!
//! The numerical range `W(T)` is convex and compact, and its support
//! function in direction `θ` is `λ_max(Re(e^{-iθ}T))`. Both the numerical
//! radius and the distance from the origin to `W(T)` are maxima of a
//! one-dimensional function of `θ`; we sample it on a fixed grid and polish
//! the best local maxima by golden-section search.

use std::f64::consts::PI;

use num_complex::Complex64;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{eigvals_in_place, hermitian_eig, operator_norm, ComplexMatrix};
use crate::random::unit_vector;
use crate::spectral::inner;

pub const THETA_GRID: usize = 1024;
pub const THETA_TOL: f64 = 1e-10;
pub const REFINED_PEAKS: usize = 8;
/// `max_θ λ_min` values in `[-BOUNDARY_TOL, 0]` are reported as `w_min = 0`
/// with the boundary flag set.
pub const BOUNDARY_TOL: f64 = 1e-10;

const INV_PHI: f64 = 0.618_033_988_749_894_8;

/// `H_θ = Re(e^{iθ}T) = cos θ · H − sin θ · K` with `T = H + iK`; one
/// eigensolve at `θ` also yields the spectrum at `θ + π`, which is `−spe(H_θ)`.
struct Sweep {
    n: usize,
    h: Vec<Complex64>,
    k: Vec<Complex64>,
    buf: Vec<Complex64>,
    /// Upper bound of `|d/dθ λ(H_θ)|`.
    lipschitz: f64,
}

impl Sweep {
    fn new(t: &ComplexMatrix) -> Self {
        let n = t.dim();
        let h = t.hermitian_part();
        let k = t.rotated_hermitian_part(-PI / 2.0);
        Self {
            n,
            h: h.as_slice().to_vec(),
            k: k.as_slice().to_vec(),
            buf: vec![Complex64::new(0.0, 0.0); n * n],
            lipschitz: t.frobenius_norm(),
        }
    }

    /// `(λ_min, λ_max)` of `H_θ`.
    fn extremes(&mut self, theta: f64) -> Result<(f64, f64)> {
        let (s, c) = theta.sin_cos();
        for ((b, h), k) in self.buf.iter_mut().zip(&self.h).zip(&self.k) {
            *b = h * c - k * s;
        }
        let vals = eigvals_in_place(&mut self.buf, self.n)?;
        Ok((vals[0], vals[self.n - 1]))
    }

    fn lambda_max(&mut self, theta: f64) -> Result<f64> {
        Ok(self.extremes(theta)?.1)
    }

    fn lambda_min(&mut self, theta: f64) -> Result<f64> {
        Ok(self.extremes(theta)?.0)
    }

    /// `max_θ λ_max(H_θ)` (`upper`) or `max_θ λ_min(H_{−θ})` (`!upper`).
    fn maximize(&mut self, upper: bool) -> Result<(f64, f64)> {
        let half = THETA_GRID / 2;
        let step = 2.0 * PI / THETA_GRID as f64;
        let mut values = vec![0.0; THETA_GRID];
        for k in 0..half {
            let theta = k as f64 * step;
            if upper {
                let (lo, hi) = self.extremes(theta)?;
                values[k] = hi;
                values[k + half] = -lo;
            } else {
                let (lo, hi) = self.extremes(-theta)?;
                values[k] = lo;
                values[k + half] = -hi;
            }
        }
        let lipschitz = self.lipschitz;
        if upper {
            maximize_periodic(&values, lipschitz, |theta| self.lambda_max(theta))
        } else {
            maximize_periodic(&values, lipschitz, |theta| self.lambda_min(-theta))
        }
    }
}

/// Maximize a 2π-periodic function sampled on the θ grid: golden-section
/// search inside the two grid cells around each of the best local grid
/// maxima. A peak whose cells cannot beat the incumbent by the Lipschitz
/// bound is skipped.
fn maximize_periodic(
    values: &[f64],
    lipschitz: f64,
    mut f: impl FnMut(f64) -> Result<f64>,
) -> Result<(f64, f64)> {
    let step = 2.0 * PI / THETA_GRID as f64;
    let mut peaks: Vec<usize> = (0..THETA_GRID)
        .filter(|&k| {
            let prev = values[(k + THETA_GRID - 1) % THETA_GRID];
            let next = values[(k + 1) % THETA_GRID];
            values[k] >= prev && values[k] >= next
        })
        .collect();
    peaks.sort_by(|&a, &b| values[b].total_cmp(&values[a]).then(a.cmp(&b)));
    peaks.truncate(REFINED_PEAKS);

    let (mut best_theta, mut best) = values
        .iter()
        .enumerate()
        .fold((0.0, f64::NEG_INFINITY), |acc, (k, &v)| {
            if v > acc.1 {
                (k as f64 * step, v)
            } else {
                acc
            }
        });

    for k in peaks {
        if values[k] + lipschitz * step < best {
            continue;
        }
        let center = k as f64 * step;
        let (theta, v) = golden_section_max(&mut f, center - step, center + step)?;
        if v > best {
            best = v;
            best_theta = theta;
        }
    }
    Ok((best_theta.rem_euclid(2.0 * PI), best))
}

fn golden_section_max(
    f: &mut impl FnMut(f64) -> Result<f64>,
    mut a: f64,
    mut b: f64,
) -> Result<(f64, f64)> {
    let mut c = b - INV_PHI * (b - a);
    let mut d = a + INV_PHI * (b - a);
    let mut fc = f(c)?;
    let mut fd = f(d)?;
    while b - a > THETA_TOL {
        if fc >= fd {
            b = d;
            d = c;
            fd = fc;
            c = b - INV_PHI * (b - a);
            fc = f(c)?;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + INV_PHI * (b - a);
            fd = f(d)?;
        }
    }
    Ok(if fc >= fd { (c, fc) } else { (d, fd) })
}

/// `T/s` with `s` the largest entry modulus, so that the sweeps never
/// overflow; `None` for the zero matrix.
fn normalized(t: &ComplexMatrix) -> Option<(ComplexMatrix, f64)> {
    let s = t.max_abs();
    (s > 0.0).then(|| (t.scale_real(1.0 / s), s))
}

fn finite(value: f64, what: &str) -> Result<f64> {
    if value.is_finite() {
        Ok(value)
    } else {
        Err(Error::Domain(format!("{what} is not representable as f64")))
    }
}

/// `w(T) = max_θ λ_max((e^{iθ}T + e^{-iθ}T*)/2)`.
pub fn numerical_radius(t: &ComplexMatrix) -> Result<f64> {
    let Some((tn, s)) = normalized(t) else {
        return Ok(0.0);
    };
    let (_, w) = Sweep::new(&tn).maximize(true)?;
    finite(w.max(0.0) * s, "the numerical radius")
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MinimalRadius {
    pub value: f64,
    /// Direction of the supporting line that realizes the distance.
    pub theta: f64,
    /// The origin lies on (or within rounding of) the boundary of `W(T)`.
    pub boundary: bool,
}

/// Distance from the origin to `W(T)`: `max(0, max_θ λ_min(Re(e^{-iθ}T)))`.
///
/// `boundary` compares the support value against `BOUNDARY_TOL` relative to
/// the largest entry modulus of `T`.
pub fn minimal_numerical_radius_detail(t: &ComplexMatrix) -> Result<MinimalRadius> {
    let Some((tn, s)) = normalized(t) else {
        return Ok(MinimalRadius {
            value: 0.0,
            theta: 0.0,
            boundary: true,
        });
    };
    let (theta, support) = Sweep::new(&tn).maximize(false)?;
    let boundary = (-BOUNDARY_TOL..=0.0).contains(&support);
    Ok(MinimalRadius {
        value: finite(support.max(0.0) * s, "the minimal numerical radius")?,
        theta,
        boundary,
    })
}

pub fn minimal_numerical_radius(t: &ComplexMatrix) -> Result<f64> {
    Ok(minimal_numerical_radius_detail(t)?.value)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BoundaryPoint {
    pub theta: f64,
    pub z: Complex64,
}

/// For `θ_k = 2πk/m`, the point `⟨Tu, u⟩` where `u` is a top eigenvector of
/// `Re(e^{-iθ_k}T)`. Each point lies on the boundary of `W(T)`, in
/// counter-clockwise order.
pub fn range_boundary(t: &ComplexMatrix, m: usize) -> Result<Vec<BoundaryPoint>> {
    if m < 3 {
        return Err(Error::InvalidParameter(format!(
            "range boundary needs at least 3 points, got {m}"
        )));
    }
    let tn = normalized(t).map_or_else(|| t.clone(), |(tn, _)| tn);
    (0..m)
        .map(|k| {
            let theta = 2.0 * PI * k as f64 / m as f64;
            let eig = hermitian_eig(&tn.rotated_hermitian_part(-theta))?;
            let u = eig.vector(eig.dim() - 1);
            let z = inner(&t.mul_vec(&u)?, &u);
            finite(z.re, "a boundary point")?;
            finite(z.im, "a boundary point")?;
            Ok(BoundaryPoint { theta, z })
        })
        .collect()
}

/// Convex hull (counter-clockwise, no collinear points) by monotone chain.
pub fn convex_hull(points: &[Complex64]) -> Vec<Complex64> {
    let mut pts: Vec<Complex64> = points.to_vec();
    pts.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    pts.dedup();
    if pts.len() < 3 {
        return pts;
    }
    let cross = |o: Complex64, a: Complex64, b: Complex64| {
        (a.re - o.re) * (b.im - o.im) - (a.im - o.im) * (b.re - o.re)
    };
    let mut hull: Vec<Complex64> = Vec::with_capacity(2 * pts.len());
    for pass in 0..2 {
        let start = hull.len();
        let iter: Box<dyn Iterator<Item = &Complex64>> = if pass == 0 {
            Box::new(pts.iter())
        } else {
            Box::new(pts.iter().rev())
        };
        for &p in iter {
            while hull.len() >= start + 2 && cross(hull[hull.len() - 2], hull[hull.len() - 1], p) <= 0.0 {
                hull.pop();
            }
            hull.push(p);
        }
        hull.pop();
    }
    hull
}

/// Shoelace area of a simple polygon.
pub fn polygon_area(poly: &[Complex64]) -> f64 {
    let n = poly.len();
    if n < 3 {
        return 0.0;
    }
    let twice: f64 = (0..n)
        .map(|i| {
            let a = poly[i];
            let b = poly[(i + 1) % n];
            a.re * b.im - b.re * a.im
        })
        .sum();
    0.5 * twice.abs()
}

/// Area of the inscribed polygon spanned by `m` boundary samples.
pub fn range_area(t: &ComplexMatrix, m: usize) -> Result<f64> {
    let pts: Vec<Complex64> = range_boundary(t, m)?.into_iter().map(|p| p.z).collect();
    finite(polygon_area(&convex_hull(&pts)), "the range area")
}

/// Random-restart minimizer of `|⟨Tx, x⟩|` on the unit sphere.
///
/// Each restart runs projected gradient descent on `|⟨Tx, x⟩|²`, halving
/// the step whenever a trial step fails to decrease the objective and
/// doubling it (up to `4·initial_step`) after each accepted step. This is
/// an independent cross-check for [`minimal_numerical_radius`]; it returns
/// an attained value, hence an upper bound of `w_min(T)`.
pub fn min_modulus_by_restarts<R: Rng + ?Sized>(
    t: &ComplexMatrix,
    restarts: usize,
    steps: usize,
    initial_step: f64,
    rng: &mut R,
) -> Result<f64> {
    let n = t.dim();
    let scale = operator_norm(t)?;
    if scale == 0.0 {
        return Ok(0.0);
    }
    let tn = t.scale_real(1.0 / scale);
    let tn_adj = tn.adjoint();
    let objective = |x: &[Complex64]| -> (Complex64, f64) {
        let z = inner(&tn.mul_vec_unchecked(x), x);
        (z, z.norm_sqr())
    };
    let mut best = f64::INFINITY;
    for _ in 0..restarts {
        let mut x = unit_vector(rng, n);
        let (mut z, mut phi) = objective(&x);
        let mut eta = initial_step;
        for _ in 0..steps {
            if phi == 0.0 || eta < 1e-16 {
                break;
            }
            // ∂φ/∂x̄ = conj(z)·T x + z·T* x
            let tx = tn.mul_vec_unchecked(&x);
            let tax = tn_adj.mul_vec_unchecked(&x);
            let grad: Vec<Complex64> = tx.iter().zip(&tax).map(|(a, b)| z.conj() * a + z * b).collect();
            loop {
                let trial: Vec<Complex64> = x.iter().zip(&grad).map(|(xi, gi)| xi - gi * eta).collect();
                let norm = trial.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
                let trial: Vec<Complex64> = trial.into_iter().map(|c| c / norm).collect();
                let (tz, tphi) = objective(&trial);
                if tphi < phi {
                    x = trial;
                    z = tz;
                    phi = tphi;
                    eta = (2.0 * eta).min(4.0 * initial_step);
                    break;
                }
                eta *= 0.5;
                if eta < 1e-16 {
                    break;
                }
            }
        }
        best = best.min(phi.sqrt());
    }
    Ok(best * scale)
}
