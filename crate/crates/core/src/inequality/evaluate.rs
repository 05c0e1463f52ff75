use std::collections::BTreeMap;
use std::time::{Duration, Instant};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::instance::{OperatorInstance, Shape};
use super::params::Params;
use super::registry::{lookup, Descriptor, Kind};
use crate::binomial::{binomial_coefficient, commutator, expand_binomial};
use crate::error::{Error, Result};
use crate::linalg::{abs_adjoint, abs_op, ell, mat_power, operator_norm, polar, spectral_radius, ComplexMatrix};
use crate::radius::{minimal_numerical_radius, numerical_radius};
use crate::spectral::{
    bilinear, cheb_functional_with, inner, pre_gruss_terms, qform, ScalarFn, SpectralCalculus, StateVector,
    IMAG_TOL,
};

/// Largest relative residual of the binomial expansion accepted when its
/// terms feed a bound.
pub const EXPANSION_TOL: f64 = 1e-9;
/// Rounding window for a negative radicand before it is declared negative.
const RADICAND_CLAMP: f64 = 1e-12;
/// Multiple of `n·ε` below which a product is treated as exactly zero.
pub const FLUSH_FACTOR: f64 = 16.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub instance: OperatorInstance,
    pub params: Params,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvaluationReport {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// `rhs − lhs`; negative means the inequality failed on this instance.
    pub slack: f64,
    pub violated: bool,
    pub tol: f64,
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub details: BTreeMap<String, Value>,
    pub witness: Witness,
    #[serde(skip)]
    pub elapsed: Duration,
}

/// Sides of one comparison `lhs ≤ rhs`; chained statements carry several.
struct Outcome {
    links: Vec<(f64, f64)>,
    details: BTreeMap<String, Value>,
}

impl Outcome {
    fn new(lhs: f64, rhs: f64) -> Self {
        Self {
            links: vec![(lhs, rhs)],
            details: BTreeMap::new(),
        }
    }

    fn chain(values: &[f64]) -> Self {
        let mut out = Self {
            links: values.windows(2).map(|w| (w[0], w[1])).collect(),
            details: BTreeMap::new(),
        };
        out.detail("chain", json!(values));
        out
    }

    fn detail(&mut self, key: &str, v: Value) -> &mut Self {
        self.details.insert(key.to_string(), v);
        self
    }

    fn with(mut self, key: &str, v: Value) -> Self {
        self.detail(key, v);
        self
    }
}

/// Evaluate entry `id` on `inst`.
///
/// `tol = factor·max(1, |lhs|, |rhs|)` with factor `1e-8`, or `1e-4` for the
/// entries that depend on the spectral radius; `violated ⇔ slack < −tol`.
pub fn evaluate(id: &str, inst: &OperatorInstance, params: &Params) -> Result<EvaluationReport> {
    let d = lookup(id)?;
    check_shape(d, inst)?;
    params.validate(d)?;
    let start = Instant::now();
    let out = compute(d, inst, params)?;
    let values: Vec<f64> = out.links.iter().flat_map(|&(l, r)| [l, r]).collect();
    if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
        return Err(Error::Domain(format!("{} produced a non-finite side ({bad})", d.id)));
    }
    let (lhs, rhs) = out
        .links
        .iter()
        .copied()
        .min_by(|a, b| (a.1 - a.0).total_cmp(&(b.1 - b.0)))
        .expect("at least one link");
    let scale = values.iter().fold(1.0f64, |m, v| m.max(v.abs()));
    let tol = d.tolerance_factor() * scale;
    let slack = rhs - lhs;
    Ok(EvaluationReport {
        id: d.id.to_string(),
        lhs,
        rhs,
        slack,
        violated: slack < -tol,
        tol,
        details: out.details,
        witness: Witness {
            instance: inst.clone(),
            params: params.clone(),
        },
        elapsed: start.elapsed(),
    })
}

fn check_shape(d: &Descriptor, inst: &OperatorInstance) -> Result<()> {
    let mismatch = |reason: String| {
        Err(Error::ShapeMismatch {
            id: d.id.to_string(),
            reason,
        })
    };
    let shape_ok = inst.shape == d.shape
        || (d.shape == Shape::Pair && matches!(inst.shape, Shape::PairCommuting | Shape::PairReid | Shape::PairKittaneh))
        || (d.shape == Shape::Single && inst.shape == Shape::OperatorState && inst.states.is_empty());
    if !shape_ok {
        return mismatch(format!("expected {:?}, got {:?}", d.shape, inst.shape));
    }
    if inst.matrices.len() != d.shape.matrices() {
        return mismatch(format!("expected {} matrices, got {}", d.shape.matrices(), inst.matrices.len()));
    }
    let states = if d.shape == Shape::VectorTriple { 1 } else { d.states };
    if inst.states.len() != states {
        return mismatch(format!("expected {states} unit vectors, got {}", inst.states.len()));
    }
    if inst.vectors.len() != d.shape.vectors() {
        return mismatch(format!("expected {} free vectors, got {}", d.shape.vectors(), inst.vectors.len()));
    }
    if let Some((r, scale)) = inst.condition_residual()? {
        if r > super::instance::CONDITION_TOL * scale {
            return mismatch(format!("condition residual {r:.3e} exceeds tolerance at scale {scale:.3e}"));
        }
    }
    Ok(())
}

fn w(m: &ComplexMatrix) -> Result<f64> {
    numerical_radius(m)
}

fn wmin(m: &ComplexMatrix) -> Result<f64> {
    minimal_numerical_radius(m)
}

fn norm(m: &ComplexMatrix) -> Result<f64> {
    operator_norm(m)
}

fn real(z: Complex64, scale: f64) -> Result<f64> {
    if z.im.abs() > IMAG_TOL * scale.max(1.0) {
        return Err(Error::ImaginaryResidue { imag: z.im });
    }
    Ok(z.re)
}

/// `⟨Mx, x⟩` for Hermitian `M`, as a real number.
fn hform(m: &ComplexMatrix, x: &StateVector) -> Result<f64> {
    real(qform(m, x)?, norm(m)?)
}

fn vnorm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// `h(|M|)` and `h(|M*|)`.
fn of_modulus(m: &ComplexMatrix, h: &ScalarFn) -> Result<ComplexMatrix> {
    SpectralCalculus::new(&abs_op(m)?)?.apply(h)
}

fn of_adjoint_modulus(m: &ComplexMatrix, h: &ScalarFn) -> Result<ComplexMatrix> {
    SpectralCalculus::new(&abs_adjoint(m)?)?.apply(h)
}

/// `m`, or the zero matrix when `‖m‖_F` is rounding noise next to
/// `reference` (a bound on the norm of the exact product).
///
/// Powers `t^α` with small `α` are far from continuous at zero, so an exactly
/// vanishing product and its rounded conjugate would otherwise disagree.
fn flushed(m: ComplexMatrix, reference: f64) -> ComplexMatrix {
    let floor = FLUSH_FACTOR * m.dim() as f64 * f64::EPSILON * reference;
    if m.frobenius_norm() <= floor {
        ComplexMatrix::zero(m.dim()).expect("same dimension")
    } else {
        m
    }
}

/// `A^n`, flushed relative to `‖A‖_F^n`.
fn power(a: &ComplexMatrix, n: usize) -> ComplexMatrix {
    flushed(mat_power(a, n as u32), a.frobenius_norm().powi(n as i32))
}

/// `‖f(|M|) + g(|M*|)‖`.
fn modulus_pair_norm(m: &ComplexMatrix, f: &ScalarFn, g: &ScalarFn) -> Result<f64> {
    norm(&(&of_modulus(m, f)? + &of_adjoint_modulus(m, g)?))
}

fn power_pair(params: &Params) -> (ScalarFn, ScalarFn) {
    let a = params.alpha.expect("validated");
    (ScalarFn::power(a), ScalarFn::power(1.0 - a))
}

/// `x` with values in `[-RADICAND_CLAMP·scale, 0)` rounded up to zero.
fn radicand(x: f64, scale: f64, what: &str) -> Result<f64> {
    if x >= 0.0 {
        Ok(x)
    } else if x >= -RADICAND_CLAMP * scale.max(1.0) {
        Ok(0.0)
    } else {
        Err(Error::Domain(format!("negative radicand {x:.6e} in {what}")))
    }
}

/// `‖h(A)‖² − ℓ²(h^{1/2}(A))` for PSD `A`.
fn gruss_gap(calc: &SpectralCalculus, h: &ScalarFn) -> Result<(f64, f64, f64)> {
    let norm_h = norm(&calc.apply(h)?)?;
    let ell_half = ell(&calc.apply(&ScalarFn::sqrt_of(h.clone()))?)?;
    Ok((norm_h * norm_h - ell_half * ell_half, norm_h, ell_half))
}

fn compute(d: &Descriptor, inst: &OperatorInstance, params: &Params) -> Result<Outcome> {
    use Kind::*;
    Ok(match d.kind {
        SandwichLower => {
            let t = inst.a();
            Outcome::new(0.5 * norm(t)?, w(t)?)
        }
        SandwichUpper => {
            let t = inst.a();
            Outcome::new(w(t)?, norm(t)?)
        }
        PowerRefinement => {
            let t = inst.a();
            let t2 = t.mul_unchecked(t);
            Outcome::new(w(t)?, 0.5 * (norm(t)? + norm(&t2)?.sqrt()))
        }
        CartesianLower | CartesianUpper => {
            let a = inst.a();
            let s = &a.adjoint().mul_unchecked(a) + &a.mul_unchecked(&a.adjoint());
            let ns = norm(&s)?;
            let w2 = w(a)?.powi(2);
            if d.kind == CartesianLower {
                Outcome::new(0.25 * ns, w2)
            } else {
                Outcome::new(w2, 0.5 * ns)
            }
        }
        AluthgeChain => {
            let t = inst.a();
            let pf = polar(t)?;
            let root = SpectralCalculus::new(&pf.modulus)?.apply(&ScalarFn::power(0.5))?;
            let transform = root.mul_unchecked(&pf.unitary).mul_unchecked(&root);
            let nt = norm(t)?;
            let w_transform = w(&transform)?;
            let t2 = t.mul_unchecked(t);
            Outcome::chain(&[w(t)?, 0.5 * (nt + w_transform), 0.5 * (nt + norm(&t2)?.sqrt())])
                .with("w_transform", json!(w_transform))
        }
        SquareRadiusMixed => {
            let t = inst.a();
            let t2 = t.mul_unchecked(t);
            Outcome::new(w(t)?.powi(2), 0.5 * (norm(t)? + w(&t2)?))
        }
        Synchronous => {
            let calc = SpectralCalculus::new(inst.a())?;
            let x = &inst.states[0];
            let (f, g) = (params.f.as_ref().expect("validated"), params.g.as_ref().expect("validated"));
            let fa = calc.apply(f)?;
            let ga = calc.apply(g)?;
            let fg = fa.mul_unchecked(&ga);
            let scale = norm(&fa)? * norm(&ga)?;
            let e_fg = real(qform(&fg, x)?, scale)?;
            let e_f = hform(&fa, x)?;
            let e_g = hform(&ga, x)?;
            let sync = params.synchronous.expect("validated");
            let out = if sync {
                Outcome::new(e_f * e_g, e_fg)
            } else {
                Outcome::new(e_fg, e_f * e_g)
            };
            out.with("chebyshev", json!(e_fg - e_f * e_g))
        }
        PreGruss | PreGrussPower => {
            let calc = SpectralCalculus::new(inst.a())?;
            let x = &inst.states[0];
            let (f, g) = if d.kind == PreGruss {
                (params.f.clone().expect("validated"), params.g.clone().expect("validated"))
            } else {
                power_pair(params)
            };
            let terms = pre_gruss_terms(&calc.measure(x)?, &f, &g)?;
            let matrix_route = cheb_functional_with(&calc, &f, &g, x)?;
            Outcome::new(terms.lhs(), terms.rhs())
                .with("cov", json!(terms.cov))
                .with("cov_matrix_route", json!(matrix_route))
                .with("var_f", json!(terms.var_f))
                .with("var_g", json!(terms.var_g))
        }
        Schwarz => {
            let a = inst.a();
            SpectralCalculus::new(a)?;
            let (x, y) = (&inst.states[0], &inst.states[1]);
            let lhs = bilinear(a, x.as_slice(), y.as_slice())?.norm_sqr();
            Outcome::new(lhs, hform(a, x)? * hform(a, y)?)
        }
        Reid | Halmos => {
            let (a, b) = (inst.a(), inst.b());
            let x = &inst.states[0];
            let lhs = qform(&a.mul_unchecked(b), x)?.norm();
            let ax = hform(a, x)?;
            if d.kind == Reid {
                Outcome::new(lhs, norm(b)? * ax)
            } else {
                let r = spectral_radius(b)?;
                Outcome::new(lhs, r.value * ax)
                    .with("spectral_radius", json!(r.value))
                    .with("spectral_radius_converged", json!(r.converged))
            }
        }
        Kato => {
            let a = inst.a();
            let alpha = params.alpha.expect("validated");
            let (x, y) = (&inst.states[0], &inst.states[1]);
            let lhs = bilinear(a, x.as_slice(), y.as_slice())?.norm_sqr();
            let left = of_modulus(a, &ScalarFn::power(2.0 * alpha))?;
            let right = of_adjoint_modulus(a, &ScalarFn::power(2.0 * (1.0 - alpha)))?;
            Outcome::new(lhs, hform(&left, x)? * hform(&right, y)?)
        }
        Kittaneh => {
            let (a, b) = (inst.a(), inst.b());
            let (f, g) = power_pair(params);
            let (x, y) = (&inst.states[0], &inst.states[1]);
            let lhs = bilinear(&a.mul_unchecked(b), x.as_slice(), y.as_slice())?.norm();
            let fx = vnorm(&of_modulus(a, &f)?.mul_vec(x.as_slice())?);
            let gy = vnorm(&of_adjoint_modulus(a, &g)?.mul_vec(y.as_slice())?);
            let r = spectral_radius(b)?;
            Outcome::new(lhs, r.value * fx * gy)
                .with("spectral_radius", json!(r.value))
                .with("spectral_radius_converged", json!(r.converged))
        }
        FunctionGruss => {
            let calc = SpectralCalculus::new(inst.a())?;
            let (f, g) = (params.f.as_ref().expect("validated"), params.g.as_ref().expect("validated"));
            let fa = calc.apply(f)?;
            let ga = calc.apply(g)?;
            let lhs = w(&fa.mul_unchecked(&ga))? - wmin(&fa)? * wmin(&ga)?;
            let (gap_f, nf, _) = gruss_gap(&calc, f)?;
            let (gap_g, ng, _) = gruss_gap(&calc, g)?;
            let rf = radicand(gap_f, nf * nf, "the f factor")?;
            let rg = radicand(gap_g, ng * ng, "the g factor")?;
            Outcome::new(lhs, rf.sqrt() * rg.sqrt())
        }
        PowerGruss => {
            let a = inst.a();
            let calc = SpectralCalculus::new(a)?;
            let (f, g) = power_pair(params);
            let lhs = w(a)? - wmin(&calc.apply(&f)?)? * wmin(&calc.apply(&g)?)?;
            let (gap_f, nf, _) = gruss_gap(&calc, &f)?;
            let (gap_g, ng, _) = gruss_gap(&calc, &g)?;
            let rf = radicand(gap_f, nf * nf, "the A^α factor")?;
            let rg = radicand(gap_g, ng * ng, "the A^{1−α} factor")?;
            Outcome::new(lhs, rf.sqrt() * rg.sqrt())
        }
        HalfPowerGruss => {
            let a = inst.a();
            let calc = SpectralCalculus::new(a)?;
            let half = calc.apply(&ScalarFn::power(0.5))?;
            let quarter = calc.apply(&ScalarFn::power(0.25))?;
            let lhs = w(a)? - wmin(&half)?.powi(2);
            Outcome::new(lhs, norm(&half)?.powi(2) - ell(&quarter)?.powi(2))
        }
        SquaredFunctionGruss => {
            let calc = SpectralCalculus::new(inst.a())?;
            let f = params.f.as_ref().expect("validated");
            let f2 = calc.apply_map(|t| Ok(f.eval(t)?.powi(2)))?;
            let lhs = w(&f2)? - wmin(&calc.apply(f)?)?.powi(2);
            let (gap, _, _) = gruss_gap(&calc, f)?;
            Outcome::new(lhs, gap)
        }
        ExponentGruss => {
            let calc = SpectralCalculus::new(inst.a())?;
            let p = params.p.expect("validated");
            let ap = calc.apply(&ScalarFn::power(p))?;
            let lhs = w(&calc.apply(&ScalarFn::power(2.0 * p))?)? - wmin(&ap)?.powi(2);
            let rhs = norm(&ap)?.powi(2) - ell(&calc.apply(&ScalarFn::power(0.5 * p))?)?.powi(2);
            Outcome::new(lhs, rhs)
        }
        ModulusGruss => {
            let a = inst.a();
            let calc = SpectralCalculus::new(a)?;
            let (f, g) = power_pair(params);
            let lhs = w(a)? - wmin(&calc.apply(&f)?)? * wmin(&calc.apply(&g)?)?;
            let f2 = SpectralCalculus::new(&abs_op(a)?)?.apply_map(|t| Ok(f.eval(t)?.powi(2)))?;
            let g2 = SpectralCalculus::new(&abs_adjoint(a)?)?.apply_map(|t| Ok(g.eval(t)?.powi(2)))?;
            let lf = ell(&calc.apply(&ScalarFn::sqrt_of(f))?)?;
            let lg = ell(&calc.apply(&ScalarFn::sqrt_of(g))?)?;
            Outcome::new(lhs, 0.5 * norm(&(&f2 + &g2))? - lf.powi(2) * lg.powi(2))
        }
        PowerModulusGruss => {
            let a = inst.a();
            let alpha = params.alpha.expect("validated");
            let calc = SpectralCalculus::new(a)?;
            let lhs = w(a)? - wmin(&calc.apply(&ScalarFn::power(alpha))?)? * wmin(&calc.apply(&ScalarFn::power(1.0 - alpha))?)?;
            let sum = &of_modulus(a, &ScalarFn::power(2.0 * alpha))? + &of_adjoint_modulus(a, &ScalarFn::power(2.0 * (1.0 - alpha)))?;
            let lf = ell(&calc.apply(&ScalarFn::power(0.5 * alpha))?)?;
            let lg = ell(&calc.apply(&ScalarFn::power(0.5 * (1.0 - alpha)))?)?;
            Outcome::new(lhs, 0.5 * norm(&sum)? - lf.powi(2) * lg.powi(2))
        }
        HalfModulusGruss => {
            let a = inst.a();
            let calc = SpectralCalculus::new(a)?;
            let lhs = w(a)? - wmin(&calc.apply(&ScalarFn::power(0.5))?)?.powi(2);
            let sum = &abs_op(a)? + &abs_adjoint(a)?;
            let l = ell(&calc.apply(&ScalarFn::power(0.25))?)?;
            Outcome::new(lhs, 0.5 * norm(&sum)? - l.powi(4))
        }
        Key => {
            let (x, y) = (&inst.vectors[0], &inst.vectors[1]);
            let e = inst.states[0].as_slice();
            let lhs = (inner(x, e) * inner(e, y)).norm();
            Outcome::new(lhs, 0.5 * (inner(x, y).norm() + vnorm(x) * vnorm(y)))
        }
        SquareSum => {
            let (a, b) = (inst.a(), inst.b());
            let s = a + b;
            let a2 = a.mul_unchecked(a);
            let b2 = b.mul_unchecked(b);
            let ab = a.mul_unchecked(b);
            let ba = b.mul_unchecked(a);
            let first = w(&b.mul_unchecked(&a2).mul_unchecked(b))? + norm(&ab)?.powi(2);
            let second = w(&a.mul_unchecked(&b2).mul_unchecked(a))? + norm(&ba)?.powi(2);
            let rhs = w(&a2)? + w(&b2)? + 0.25 * first.min(second);
            Outcome::new(w(&s.mul_unchecked(&s))?, rhs)
                .with("branch_bab", json!(first))
                .with("branch_aba", json!(second))
        }
        SquareSelf => {
            let a = inst.a();
            let a2 = a.mul_unchecked(a);
            let a4 = a2.mul_unchecked(&a2);
            Outcome::new(w(&a2)?, 0.125 * (w(&a4)? + norm(&a2)?.powi(2)))
        }
        BinomialRadius | BinomialNorm => {
            let (a, b) = (inst.a(), inst.b());
            let n = params.n.expect("validated");
            let (f, g) = power_pair(params);
            let exp = expand_binomial(a, b, n)?;
            let residual = exp.relative_residual(a, b)?;
            if residual > EXPANSION_TOL {
                return Err(Error::Domain(format!(
                    "binomial expansion residual {residual:.3e} exceeds {EXPANSION_TOL:e}"
                )));
            }
            let mut rhs = 0.0;
            let reference = (a.frobenius_norm() + b.frobenius_norm()).powi(n as i32);
            for term in &exp.terms {
                let m = flushed(term.matrix.clone(), reference);
                rhs += term.coefficient as f64 * modulus_pair_norm(&m, &f, &g)?;
            }
            let power = power(&(a + b), n);
            let lhs = if d.kind == BinomialRadius { w(&power)? } else { norm(&power)? };
            Outcome::new(lhs, 0.5 * rhs).with("expansion_residual", json!(residual))
        }
        FirstOrder | FirstOrderLiteral => {
            let (a, b) = (inst.a(), inst.b());
            let (f, g) = power_pair(params);
            let first = if d.kind == FirstOrder {
                let exp = expand_binomial(a, b, 1)?;
                exp.terms[1].matrix.clone()
            } else {
                a + &commutator(b, a)?
            };
            let sum = &(&of_modulus(b, &f)? + &of_adjoint_modulus(b, &g)?)
                + &(&of_modulus(&first, &f)? + &of_adjoint_modulus(&first, &g)?);
            Outcome::new(w(&(a + b))?, 0.5 * norm(&sum)?)
        }
        CommutingBinomial => {
            let (a, b) = (inst.a(), inst.b());
            let n = params.n.expect("validated");
            let (f, g) = power_pair(params);
            let mut rhs = 0.0;
            for k in 0..=n {
                let term = power(a, k).mul_unchecked(&power(b, n - k));
                let term = flushed(term, a.frobenius_norm().powi(k as i32) * b.frobenius_norm().powi((n - k) as i32));
                rhs += binomial_coefficient(n, k) as f64 * modulus_pair_norm(&term, &f, &g)?;
            }
            Outcome::new(w(&power(&(a + b), n))?, 0.5 * rhs)
        }
        PowerRadius => {
            let m = power(inst.a(), params.n.expect("validated"));
            let (f, g) = power_pair(params);
            Outcome::new(w(&m)?, 0.5 * modulus_pair_norm(&m, &f, &g)?)
        }
        PowerRadiusAlpha => {
            let m = power(inst.a(), params.n.expect("validated"));
            let alpha = params.alpha.expect("validated");
            let left = of_modulus(&m, &ScalarFn::power(alpha))?;
            let right = of_adjoint_modulus(&m, &ScalarFn::power(1.0 - alpha))?;
            Outcome::new(w(&m)?, 0.5 * norm(&(&left + &right))?)
        }
        AlphaRadius => {
            let a = inst.a();
            let alpha = params.alpha.expect("validated");
            let sum = &of_modulus(a, &ScalarFn::power(alpha))? + &of_adjoint_modulus(a, &ScalarFn::power(1.0 - alpha))?;
            Outcome::new(w(a)?, 0.5 * norm(&sum)?)
        }
        ModulusChain => {
            let a = inst.a();
            let na = norm(a)?;
            let mid = 0.5 * norm(&abs_op(a)?.shift(Complex64::new(1.0, 0.0)))?;
            let top = 0.25 * (1.0 + na + ((na - 1.0).powi(2) + 4.0 * na).sqrt());
            Outcome::chain(&[w(a)?, mid, top])
        }
        PsdSumNorm => {
            let (a, b) = (inst.a(), inst.b());
            let ra = SpectralCalculus::new(a)?.apply(&ScalarFn::power(0.5))?;
            let rb = SpectralCalculus::new(b)?.apply(&ScalarFn::power(0.5))?;
            let (na, nb) = (norm(a)?, norm(b)?);
            let cross = norm(&ra.mul_unchecked(&rb))?;
            let rhs = 0.5 * (na + nb + ((na - nb).powi(2) + 4.0 * cross * cross).sqrt());
            Outcome::new(norm(&(a + b))?, rhs)
        }
        SquaredKittaneh => {
            let a = inst.a();
            let alpha = params.alpha.expect("validated");
            let sum = &of_modulus(a, &ScalarFn::power(2.0 * alpha))?
                + &of_adjoint_modulus(a, &ScalarFn::power(2.0 * (1.0 - alpha)))?;
            Outcome::new(w(a)?, 0.5 * norm(&sum)?)
        }
    })
}
