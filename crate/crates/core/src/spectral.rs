//! Functional calculus for positive semidefinite matrices and the Čebyšev
//! functional `C(f,g;A;x) = ⟨f(A)g(A)x,x⟩ − ⟨f(A)x,x⟩⟨g(A)x,x⟩`.
//!
//! For Hermitian `A = Σ λ_i v_i v_i*` and a unit vector `x`, the quadratic
//! forms `⟨h(A)x,x⟩` are integrals of `h` against the discrete measure with
//! atoms `λ_i` and masses `p_i = |⟨x, v_i⟩|²`. The functional therefore has
//! two independent evaluations: through the matrices `f(A)`, `g(A)` and as the
//! covariance double sum over the atoms.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eig, recompose_with, ComplexMatrix, HermitianEigen};

/// Eigenvalues below `-PSD_TOL·max(1, ‖A‖)` make a matrix non-positive;
/// anything between that and zero is clamped to zero.
pub const PSD_TOL: f64 = 1e-10;
/// Eigenvalues up to `NULL_SNAP·n·ε·‖A‖` are rounding noise on a null
/// direction and are set to zero, so that `t^α` with small `α` does not
/// blow them up.
pub const NULL_SNAP: f64 = 4.0;
/// Window in which a rounded Čebyšev variance is clamped to zero.
pub const VARIANCE_CLAMP: f64 = 1e-12;
/// Allowed imaginary residue of a Hermitian quadratic form, relative.
pub const IMAG_TOL: f64 = 1e-10;
/// Distance from 1 tolerated in the norm of a state vector.
pub const UNIT_TOL: f64 = 1e-12;

/// Real functions on `[0, ∞)` closed under the operations the inequalities
/// need.
///
/// `Power { alpha: 0.0 }` evaluates to 1 everywhere, including at 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ScalarFn {
    Power { alpha: f64 },
    #[serde(rename = "poly")]
    Polynomial { coeffs: Vec<f64> },
    Exp,
    Log1p,
    SqrtOf { inner: Box<ScalarFn> },
    Identity,
    #[serde(rename = "const")]
    Constant { c: f64 },
}

impl ScalarFn {
    pub fn power(alpha: f64) -> Self {
        ScalarFn::Power { alpha }
    }

    pub fn poly(coeffs: impl Into<Vec<f64>>) -> Self {
        ScalarFn::Polynomial {
            coeffs: coeffs.into(),
        }
    }

    pub fn constant(c: f64) -> Self {
        ScalarFn::Constant { c }
    }

    pub fn sqrt_of(inner: ScalarFn) -> Self {
        ScalarFn::SqrtOf {
            inner: Box::new(inner),
        }
    }

    /// Check parameters (finite, `alpha ≥ 0`).
    pub fn validate(&self) -> Result<()> {
        match self {
            ScalarFn::Power { alpha } if !(alpha.is_finite() && *alpha >= 0.0) => Err(
                Error::InvalidParameter(format!("power exponent must be finite and >= 0, got {alpha}")),
            ),
            ScalarFn::Polynomial { coeffs } if coeffs.iter().any(|c| !c.is_finite()) => Err(
                Error::InvalidParameter("polynomial coefficients must be finite".into()),
            ),
            ScalarFn::Constant { c } if !c.is_finite() => {
                Err(Error::InvalidParameter("constant must be finite".into()))
            }
            ScalarFn::SqrtOf { inner } => inner.validate(),
            _ => Ok(()),
        }
    }

    pub fn eval(&self, t: f64) -> Result<f64> {
        if !(t >= 0.0) {
            return Err(Error::Domain(format!("{self} evaluated at {t} < 0")));
        }
        let v = match self {
            ScalarFn::Power { alpha } => {
                if *alpha == 0.0 {
                    1.0
                } else if t == 0.0 {
                    0.0
                } else {
                    t.powf(*alpha)
                }
            }
            ScalarFn::Polynomial { coeffs } => coeffs.iter().rev().fold(0.0, |acc, &c| acc * t + c),
            ScalarFn::Exp => t.exp(),
            ScalarFn::Log1p => t.ln_1p(),
            ScalarFn::SqrtOf { inner } => {
                let v = inner.eval(t)?;
                if v < 0.0 {
                    return Err(Error::Domain(format!("sqrt of {inner} = {v} at t = {t}")));
                }
                v.sqrt()
            }
            ScalarFn::Identity => t,
            ScalarFn::Constant { c } => *c,
        };
        if !v.is_finite() {
            return Err(Error::Domain(format!("{self} overflows at t = {t}")));
        }
        Ok(v)
    }
}

impl fmt::Display for ScalarFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScalarFn::Power { alpha } => write!(f, "t^{alpha}"),
            ScalarFn::Polynomial { coeffs } => write!(f, "poly{coeffs:?}"),
            ScalarFn::Exp => write!(f, "exp"),
            ScalarFn::Log1p => write!(f, "log1p"),
            ScalarFn::SqrtOf { inner } => write!(f, "sqrt({inner})"),
            ScalarFn::Identity => write!(f, "t"),
            ScalarFn::Constant { c } => write!(f, "{c}"),
        }
    }
}

/// The pair `(t^α, t^{1−α})`, whose product is `t`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerPair {
    pub alpha: f64,
}

impl PowerPair {
    pub fn new(alpha: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(Error::InvalidParameter(format!("alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { alpha })
    }

    pub fn f(&self) -> ScalarFn {
        ScalarFn::power(self.alpha)
    }

    pub fn g(&self) -> ScalarFn {
        ScalarFn::power(1.0 - self.alpha)
    }

    pub fn pair(&self) -> (ScalarFn, ScalarFn) {
        (self.f(), self.g())
    }
}

/// A unit vector in `C^n`.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector(Vec<Complex64>);

impl StateVector {
    pub fn new(x: Vec<Complex64>) -> Result<Self> {
        let norm = vector_norm(&x);
        if (norm - 1.0).abs() > UNIT_TOL {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self(x))
    }

    pub fn normalized(x: Vec<Complex64>) -> Result<Self> {
        let norm = vector_norm(&x);
        if !(norm > 0.0 && norm.is_finite()) {
            return Err(Error::NotUnitVector { norm });
        }
        Ok(Self(x.into_iter().map(|z| z / norm).collect()))
    }

    /// The standard basis vector `e_i` in `C^n`.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut v = vec![Complex64::new(0.0, 0.0); n];
        v[i] = Complex64::new(1.0, 0.0);
        Self(v)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

impl Serialize for StateVector {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let pairs: Vec<[f64; 2]> = self.0.iter().map(|z| [z.re, z.im]).collect();
        pairs.serialize(s)
    }
}

impl<'de> Deserialize<'de> for StateVector {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs = Vec::<[f64; 2]>::deserialize(d)?;
        StateVector::new(pairs.into_iter().map(|[re, im]| Complex64::new(re, im)).collect())
            .map_err(serde::de::Error::custom)
    }
}

pub(crate) fn vector_norm(x: &[Complex64]) -> f64 {
    x.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `⟨x, y⟩ = Σ x_i conj(y_i)`, linear in the first slot.
pub fn inner(x: &[Complex64], y: &[Complex64]) -> Complex64 {
    x.iter().zip(y).map(|(a, b)| a * b.conj()).sum()
}

/// `⟨Mx, x⟩`.
pub fn qform(m: &ComplexMatrix, x: &StateVector) -> Result<Complex64> {
    bilinear(m, x.as_slice(), x.as_slice())
}

/// `⟨Mx, y⟩` for arbitrary vectors.
pub fn bilinear(m: &ComplexMatrix, x: &[Complex64], y: &[Complex64]) -> Result<Complex64> {
    if y.len() != x.len() {
        return Err(Error::DimensionMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    let mx = m.mul_vec(x)?;
    Ok(inner(&mx, y))
}

/// Spectral data of a PSD matrix with eigenvalues clamped at zero; every
/// function application shares one eigendecomposition.
#[derive(Debug, Clone)]
pub struct SpectralCalculus {
    eig: HermitianEigen,
    norm: f64,
}

impl SpectralCalculus {
    pub fn new(a: &ComplexMatrix) -> Result<Self> {
        let mut eig = hermitian_eig(a)?;
        let norm = eig.values.iter().fold(0.0f64, |m, l| m.max(l.abs()));
        let min = eig.min();
        if min < -PSD_TOL * norm.max(1.0) {
            return Err(Error::NotPsd { min_eigenvalue: min });
        }
        let floor = NULL_SNAP * eig.dim() as f64 * f64::EPSILON * norm;
        eig.values.iter_mut().for_each(|l| {
            if *l <= floor {
                *l = 0.0;
            }
        });
        Ok(Self { eig, norm })
    }

    pub fn eigen(&self) -> &HermitianEigen {
        &self.eig
    }

    pub fn values(&self) -> &[f64] {
        &self.eig.values
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }

    pub fn dim(&self) -> usize {
        self.eig.dim()
    }

    pub fn mapped_values(&self, f: &ScalarFn) -> Result<Vec<f64>> {
        self.eig.values.iter().map(|&l| f.eval(l)).collect()
    }

    /// `f(A) = V · diag(f(λ)) · V*`.
    pub fn apply(&self, f: &ScalarFn) -> Result<ComplexMatrix> {
        Ok(recompose_with(&self.eig.vectors, &self.mapped_values(f)?))
    }

    /// `h(A)` for an arbitrary closure, used for derived functions such as
    /// `f²`.
    pub fn apply_map(&self, h: impl Fn(f64) -> Result<f64>) -> Result<ComplexMatrix> {
        let d: Vec<f64> = self.eig.values.iter().map(|&l| h(l)).collect::<Result<_>>()?;
        Ok(recompose_with(&self.eig.vectors, &d))
    }

    /// Atoms `(λ_i, |⟨x, v_i⟩|²)` of the measure `d⟨E_t x, x⟩`.
    pub fn measure(&self, x: &StateVector) -> Result<SpectralMeasure> {
        if x.dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                left: self.dim(),
                right: x.dim(),
            });
        }
        let atoms = (0..self.dim())
            .map(|j| {
                let v = self.eig.vector(j);
                (self.eig.values[j], inner(x.as_slice(), &v).norm_sqr())
            })
            .collect();
        Ok(SpectralMeasure { atoms })
    }
}

/// Discrete spectral measure of a PSD matrix seen from a unit vector.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralMeasure {
    pub atoms: Vec<(f64, f64)>,
}

impl SpectralMeasure {
    pub fn total_mass(&self) -> f64 {
        self.atoms.iter().map(|a| a.1).sum()
    }

    /// `∫ h d⟨E_t x, x⟩`.
    pub fn integrate(&self, h: &ScalarFn) -> Result<f64> {
        self.atoms.iter().map(|&(l, p)| Ok(h.eval(l)? * p)).sum()
    }

    /// `½ Σ_{i,j} (f(λ_i) − f(λ_j))(g(λ_i) − g(λ_j)) p_i p_j`.
    pub fn covariance(&self, f: &ScalarFn, g: &ScalarFn) -> Result<f64> {
        let fv: Vec<f64> = self.atoms.iter().map(|a| f.eval(a.0)).collect::<Result<_>>()?;
        let gv: Vec<f64> = self.atoms.iter().map(|a| g.eval(a.0)).collect::<Result<_>>()?;
        let mut acc = 0.0;
        for i in 0..self.atoms.len() {
            for j in (i + 1)..self.atoms.len() {
                acc += (fv[i] - fv[j]) * (gv[i] - gv[j]) * self.atoms[i].1 * self.atoms[j].1;
            }
        }
        Ok(acc)
    }
}

/// `f(A)` for Hermitian positive semidefinite `A`.
pub fn apply_fn(f: &ScalarFn, a: &ComplexMatrix) -> Result<ComplexMatrix> {
    SpectralCalculus::new(a)?.apply(f)
}

fn real_part_checked(z: Complex64, scale: f64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * scale.max(1.0) {
        return Err(Error::ImaginaryResidue { imag: z.im });
    }
    Ok(z.re)
}

fn fn_norm(values: &[f64]) -> f64 {
    values.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// `C(f,g;A;x)` evaluated through the matrices `f(A)`, `g(A)`.
pub fn cheb_functional(f: &ScalarFn, g: &ScalarFn, a: &ComplexMatrix, x: &StateVector) -> Result<f64> {
    let calc = SpectralCalculus::new(a)?;
    cheb_functional_with(&calc, f, g, x)
}

pub fn cheb_functional_with(
    calc: &SpectralCalculus,
    f: &ScalarFn,
    g: &ScalarFn,
    x: &StateVector,
) -> Result<f64> {
    let fv = calc.mapped_values(f)?;
    let gv = calc.mapped_values(g)?;
    let v = &calc.eigen().vectors;
    let fa = recompose_with(v, &fv);
    let ga = recompose_with(v, &gv);
    let fg = fa.matmul(&ga)?;
    let scale = fn_norm(&fv) * fn_norm(&gv);
    let fg_x = real_part_checked(qform(&fg, x)?, scale)?;
    let f_x = real_part_checked(qform(&fa, x)?, fn_norm(&fv))?;
    let g_x = real_part_checked(qform(&ga, x)?, fn_norm(&gv))?;
    Ok(fg_x - f_x * g_x)
}

/// `C(f,g;A;x)` as the covariance double sum over the spectral atoms.
pub fn cheb_double_sum(f: &ScalarFn, g: &ScalarFn, a: &ComplexMatrix, x: &StateVector) -> Result<f64> {
    SpectralCalculus::new(a)?.measure(x)?.covariance(f, g)
}

/// Components of the pre-Grüss comparison `|C(f,g)| ≤ C(f,f)^{1/2} C(g,g)^{1/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PreGruss {
    pub cov: f64,
    pub var_f: f64,
    pub var_g: f64,
}

impl PreGruss {
    pub fn lhs(&self) -> f64 {
        self.cov.abs()
    }

    pub fn rhs(&self) -> f64 {
        self.var_f.sqrt() * self.var_g.sqrt()
    }

    pub fn slack(&self) -> f64 {
        self.rhs() - self.lhs()
    }
}

fn clamp_variance(v: f64, scale: f64) -> Result<f64> {
    if v >= 0.0 {
        Ok(v)
    } else if v >= -VARIANCE_CLAMP * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("negative variance {v:.3e}")))
    }
}

/// The three Čebyšev functionals from the spectral measure, with the
/// variances clamped at zero inside the rounding window.
pub fn pre_gruss_terms(measure: &SpectralMeasure, f: &ScalarFn, g: &ScalarFn) -> Result<PreGruss> {
    let fmax = measure
        .atoms
        .iter()
        .map(|a| f.eval(a.0).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    let gmax = measure
        .atoms
        .iter()
        .map(|a| g.eval(a.0).map(f64::abs))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    Ok(PreGruss {
        cov: measure.covariance(f, g)?,
        var_f: clamp_variance(measure.covariance(f, f)?, fmax * fmax)?,
        var_g: clamp_variance(measure.covariance(g, g)?, gmax * gmax)?,
    })
}

/// `C(f,f)^{1/2}·C(g,g)^{1/2} − |C(f,g)|`, computed from the double-sum form.
pub fn pre_gruss_slack(f: &ScalarFn, g: &ScalarFn, a: &ComplexMatrix, x: &StateVector) -> Result<f64> {
    let measure = SpectralCalculus::new(a)?.measure(x)?;
    Ok(pre_gruss_terms(&measure, f, g)?.slack())
}
