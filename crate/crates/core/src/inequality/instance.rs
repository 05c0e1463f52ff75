use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{abs_op, hermitian_eig, operator_norm, ComplexMatrix};
use crate::random;
use crate::spectral::{StateVector, PSD_TOL};

pub const MIN_SAMPLE_DIM: usize = 2;
pub const MAX_SAMPLE_DIM: usize = 16;
/// Relative residual allowed in the commuting, Reid and Kittaneh conditions.
pub const CONDITION_TOL: f64 = 1e-10;
/// Generation attempts before a conditioned ensemble gives up.
pub const MAX_ATTEMPTS: usize = 100;
/// Size of the gaussian perturbation in `jordan-perturbed`.
pub const JORDAN_PERTURBATION: f64 = 1e-3;
/// Spectral floor of the invertible positive factors in `reid` and `kittaneh`.
const INVERTIBLE_FLOOR: f64 = 0.1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ensemble {
    /// i.i.d. standard complex gaussian entries.
    Ginibre,
    /// Hermitian part of a Ginibre matrix.
    Hermitian,
    /// `G*G` for Ginibre `G`.
    Psd,
    /// Haar unitary.
    Unitary,
    /// `G/‖G‖`.
    Contraction,
    /// The nilpotent Jordan block `J_n`.
    Jordan,
    /// `J_n` plus a small Ginibre perturbation.
    JordanPerturbed,
    /// Hermitian `A` and a complex polynomial `B = p(A)`.
    Commuting,
    /// `A > 0`, `S` Hermitian, `B = A⁻¹S`, so that `AB = S` is self-adjoint.
    Reid,
    /// `D > 0`, `U` unitary, `S` Hermitian, `A = UD`, `B = D⁻¹S`, so that
    /// `|A|B = S = B*|A|`.
    Kittaneh,
}

impl Ensemble {
    pub const ALL: [Ensemble; 10] = [
        Ensemble::Ginibre,
        Ensemble::Hermitian,
        Ensemble::Psd,
        Ensemble::Unitary,
        Ensemble::Contraction,
        Ensemble::Jordan,
        Ensemble::JordanPerturbed,
        Ensemble::Commuting,
        Ensemble::Reid,
        Ensemble::Kittaneh,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            Ensemble::Ginibre => "ginibre",
            Ensemble::Hermitian => "hermitian",
            Ensemble::Psd => "psd",
            Ensemble::Unitary => "unitary",
            Ensemble::Contraction => "contraction",
            Ensemble::Jordan => "jordan",
            Ensemble::JordanPerturbed => "jordan-perturbed",
            Ensemble::Commuting => "commuting",
            Ensemble::Reid => "reid",
            Ensemble::Kittaneh => "kittaneh",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .iter()
            .copied()
            .find(|e| e.name() == s)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown ensemble `{s}`")))
    }

    /// Ensembles that draw one matrix at a time (pairs take two independent
    /// draws).
    pub fn is_single(&self) -> bool {
        !matches!(self, Ensemble::Commuting | Ensemble::Reid | Ensemble::Kittaneh)
    }

    pub fn sample_matrix<R: Rng + ?Sized>(&self, rng: &mut R, n: usize) -> Result<ComplexMatrix> {
        Ok(match self {
            Ensemble::Ginibre => random::ginibre(rng, n),
            Ensemble::Hermitian => random::hermitian(rng, n),
            Ensemble::Psd => random::psd(rng, n),
            Ensemble::Unitary => random::haar_unitary(rng, n),
            Ensemble::Contraction => {
                let g = random::ginibre(rng, n);
                let norm = operator_norm(&g)?;
                g.scale_real(1.0 / norm)
            }
            Ensemble::Jordan => ComplexMatrix::jordan_block(n)?,
            Ensemble::JordanPerturbed => {
                &ComplexMatrix::jordan_block(n)? + &random::ginibre(rng, n).scale_real(JORDAN_PERTURBATION)
            }
            Ensemble::Commuting | Ensemble::Reid | Ensemble::Kittaneh => {
                return Err(Error::InvalidParameter(format!(
                    "`{}` produces pairs, not single matrices",
                    self.name()
                )))
            }
        })
    }
}

impl std::fmt::Display for Ensemble {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Shape {
    Single,
    Pair,
    PairCommuting,
    PairReid,
    PairKittaneh,
    /// One operator and one or more unit vectors.
    OperatorState,
    /// Two arbitrary vectors `x`, `y` and a unit vector `e`.
    VectorTriple,
}

impl Shape {
    pub fn matrices(&self) -> usize {
        match self {
            Shape::Single | Shape::OperatorState => 1,
            Shape::VectorTriple => 0,
            _ => 2,
        }
    }

    pub fn vectors(&self) -> usize {
        if *self == Shape::VectorTriple {
            2
        } else {
            0
        }
    }
}

/// Where a sampled instance came from: the trial's RNG stream is a function
/// of these fields only.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeedPath {
    pub seed: u64,
    pub id: String,
    pub trial: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OperatorInstance {
    pub shape: Shape,
    pub ensemble: Option<Ensemble>,
    pub dim: usize,
    pub matrices: Vec<ComplexMatrix>,
    #[serde(default)]
    pub states: Vec<StateVector>,
    #[serde(default)]
    pub vectors: Vec<Vec<Complex64>>,
    /// Generation attempts used by conditioned ensembles.
    #[serde(default = "one")]
    pub attempts: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed_path: Option<SeedPath>,
}

fn one() -> usize {
    1
}

impl OperatorInstance {
    fn build(shape: Shape, matrices: Vec<ComplexMatrix>, states: Vec<StateVector>, vectors: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = matrices
            .first()
            .map(ComplexMatrix::dim)
            .or_else(|| states.first().map(StateVector::dim))
            .ok_or_else(|| Error::InvalidParameter("an instance needs at least one matrix or vector".into()))?;
        let inst = Self {
            shape,
            ensemble: None,
            dim,
            matrices,
            states,
            vectors,
            attempts: 1,
            seed_path: None,
        };
        inst.check_dims()?;
        Ok(inst)
    }

    pub fn single(a: ComplexMatrix) -> Self {
        Self::build(Shape::Single, vec![a], vec![], vec![]).expect("one matrix")
    }

    pub fn pair(shape: Shape, a: ComplexMatrix, b: ComplexMatrix, states: Vec<StateVector>) -> Result<Self> {
        if shape.matrices() != 2 {
            return Err(Error::InvalidParameter(format!("{shape:?} is not a pair shape")));
        }
        Self::build(shape, vec![a, b], states, vec![])
    }

    pub fn with_states(a: ComplexMatrix, states: Vec<StateVector>) -> Result<Self> {
        Self::build(Shape::OperatorState, vec![a], states, vec![])
    }

    pub fn vector_triple(x: Vec<Complex64>, y: Vec<Complex64>, e: StateVector) -> Result<Self> {
        Self::build(Shape::VectorTriple, vec![], vec![e], vec![x, y])
    }

    fn check_dims(&self) -> Result<()> {
        let n = self.dim;
        let mismatch = |m: usize| Error::DimensionMismatch { left: n, right: m };
        for m in &self.matrices {
            if m.dim() != n {
                return Err(mismatch(m.dim()));
            }
        }
        for s in &self.states {
            if s.dim() != n {
                return Err(mismatch(s.dim()));
            }
        }
        for v in &self.vectors {
            if v.len() != n {
                return Err(mismatch(v.len()));
            }
        }
        Ok(())
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.matrices[0]
    }

    pub fn b(&self) -> &ComplexMatrix {
        &self.matrices[1]
    }

    /// Residual of the shape's defining condition and the scale it is
    /// measured against; `None` for unconditioned shapes.
    pub fn condition_residual(&self) -> Result<Option<(f64, f64)>> {
        let cond = match self.shape {
            Shape::PairCommuting | Shape::PairReid | Shape::PairKittaneh => self.shape,
            _ => return Ok(None),
        };
        let (a, b) = (self.a(), self.b());
        let scale = (operator_norm(a)? * operator_norm(b)?).max(1.0);
        let residual = match cond {
            Shape::PairCommuting => operator_norm(&(&a.mul_unchecked(b) - &b.mul_unchecked(a)))?,
            Shape::PairReid => {
                let eig = hermitian_eig(a)?;
                if eig.min() < -PSD_TOL * eig.max().abs().max(1.0) {
                    return Err(Error::NotPsd {
                        min_eigenvalue: eig.min(),
                    });
                }
                let ab = a.mul_unchecked(b);
                operator_norm(&(&ab - &ab.adjoint()))?
            }
            _ => {
                let m = abs_op(a)?;
                operator_norm(&(&m.mul_unchecked(b) - &b.adjoint().mul_unchecked(&m)))?
            }
        };
        Ok(Some((residual, scale)))
    }

    pub fn condition_holds(&self) -> Result<bool> {
        Ok(match self.condition_residual()? {
            Some((r, scale)) => r <= CONDITION_TOL * scale,
            None => true,
        })
    }

    /// `U*MU` for every matrix and `U*x` for every vector.
    pub fn conjugate(&self, u: &ComplexMatrix) -> Result<Self> {
        let ua = u.adjoint();
        let mut out = self.clone();
        out.matrices = self
            .matrices
            .iter()
            .map(|m| m.unitary_conjugate(u))
            .collect::<Result<_>>()?;
        out.states = self
            .states
            .iter()
            .map(|s| StateVector::normalized(ua.mul_vec(s.as_slice())?))
            .collect::<Result<_>>()?;
        out.vectors = self.vectors.iter().map(|v| ua.mul_vec(v)).collect::<Result<_>>()?;
        Ok(out)
    }

    /// Multiply every matrix and every free vector by `c > 0`; unit vectors
    /// are left alone.
    pub fn scaled(&self, c: f64) -> Self {
        let mut out = self.clone();
        out.matrices = self.matrices.iter().map(|m| m.scale_real(c)).collect();
        out.vectors = self
            .vectors
            .iter()
            .map(|v| v.iter().map(|z| z * c).collect())
            .collect();
        out
    }
}

fn invertible_psd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix {
    let g = random::ginibre(rng, n);
    g.adjoint()
        .mul_unchecked(&g)
        .scale_real(1.0 / n as f64)
        .shift(Complex64::new(INVERTIBLE_FLOOR, 0.0))
        .hermitian_part()
}

fn inverse_psd(a: &ComplexMatrix) -> Result<ComplexMatrix> {
    Ok(hermitian_eig(a)?.recompose(|l| 1.0 / l))
}

fn sample_states<R: Rng + ?Sized>(rng: &mut R, n: usize, k: usize) -> Result<Vec<StateVector>> {
    (0..k).map(|_| StateVector::new(random::unit_vector(rng, n))).collect()
}

fn sample_once<R: Rng + ?Sized>(
    shape: Shape,
    states: usize,
    ensemble: Ensemble,
    n: usize,
    rng: &mut R,
) -> Result<OperatorInstance> {
    let mut inst = match shape {
        Shape::Single => OperatorInstance::single(ensemble.sample_matrix(rng, n)?),
        Shape::OperatorState => {
            let a = ensemble.sample_matrix(rng, n)?;
            OperatorInstance::with_states(a, sample_states(rng, n, states)?)?
        }
        Shape::Pair => {
            let a = ensemble.sample_matrix(rng, n)?;
            let b = ensemble.sample_matrix(rng, n)?;
            OperatorInstance::pair(shape, a, b, sample_states(rng, n, states)?)?
        }
        Shape::PairCommuting => {
            let a = random::hermitian(rng, n);
            let c: Vec<Complex64> = (0..3).map(|_| random::complex_gaussian(rng)).collect();
            let a2 = a.mul_unchecked(&a);
            let b = &(&a.scale(c[1]) + &a2.scale(c[2])) + &ComplexMatrix::identity(n)?.scale(c[0]);
            OperatorInstance::pair(shape, a, b, sample_states(rng, n, states)?)?
        }
        Shape::PairReid => {
            let a = invertible_psd(rng, n);
            let s = random::hermitian(rng, n);
            let b = inverse_psd(&a)?.mul_unchecked(&s);
            OperatorInstance::pair(shape, a, b, sample_states(rng, n, states)?)?
        }
        Shape::PairKittaneh => {
            let d = invertible_psd(rng, n);
            let u = random::haar_unitary(rng, n);
            let s = random::hermitian(rng, n);
            let a = u.mul_unchecked(&d);
            let b = inverse_psd(&d)?.mul_unchecked(&s);
            OperatorInstance::pair(shape, a, b, sample_states(rng, n, states)?)?
        }
        Shape::VectorTriple => {
            let x = random::gaussian_vector(rng, n);
            let y = random::gaussian_vector(rng, n);
            let e = StateVector::new(random::unit_vector(rng, n))?;
            OperatorInstance::vector_triple(x, y, e)?
        }
    };
    inst.ensemble = Some(ensemble);
    Ok(inst)
}

/// Draw an instance of `shape` (with `states` unit vectors) from `ensemble`.
///
/// Conditioned shapes are regenerated until their condition holds within
/// `CONDITION_TOL·scale`, at most `MAX_ATTEMPTS` times.
pub fn sample_instance<R: Rng + ?Sized>(
    shape: Shape,
    states: usize,
    ensemble: Ensemble,
    dim: usize,
    rng: &mut R,
) -> Result<OperatorInstance> {
    if !(MIN_SAMPLE_DIM..=MAX_SAMPLE_DIM).contains(&dim) {
        return Err(Error::InvalidParameter(format!(
            "sample dimension must lie in {MIN_SAMPLE_DIM}..={MAX_SAMPLE_DIM}, got {dim}"
        )));
    }
    let compatible = match shape {
        Shape::Single | Shape::Pair | Shape::OperatorState => ensemble.is_single(),
        Shape::PairCommuting => ensemble == Ensemble::Commuting,
        Shape::PairReid => ensemble == Ensemble::Reid,
        Shape::PairKittaneh => ensemble == Ensemble::Kittaneh,
        Shape::VectorTriple => true,
    };
    if !compatible {
        return Err(Error::InvalidParameter(format!(
            "ensemble `{ensemble}` cannot produce {shape:?} instances"
        )));
    }
    for attempt in 1..=MAX_ATTEMPTS {
        let mut inst = sample_once(shape, states, ensemble, dim, rng)?;
        if inst.condition_holds()? {
            inst.attempts = attempt;
            return Ok(inst);
        }
    }
    Err(Error::ConditionUnsatisfiable {
        ensemble: ensemble.name(),
        attempts: MAX_ATTEMPTS,
    })
}
