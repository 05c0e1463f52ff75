use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::evaluate::{evaluate, EvaluationReport, EXPANSION_TOL, FLUSH_FACTOR};
use super::instance::{sample_instance, Ensemble, SeedPath, CONDITION_TOL, MAX_SAMPLE_DIM, MIN_SAMPLE_DIM};
use super::params::{draw_params, Params};
use super::registry::{lookup, registry, Descriptor, Kind, Status, REGISTRY_VERSION, SPECTRAL_VIOLATION_TOL, VIOLATION_TOL};
use crate::error::{Error, Result};
use crate::linalg::{GELFAND_STEP_TOL, HERMITIAN_TOL, SPECTRAL_RADIUS_TOL};
use crate::radius::{BOUNDARY_TOL, THETA_TOL};
use crate::spectral::{IMAG_TOL, NULL_SNAP, PSD_TOL, UNIT_TOL, VARIANCE_CLAMP};

/// Significant digits kept for floats in reports, witnesses excepted.
pub const REPORT_DIGITS: usize = 12;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuiteConfig {
    pub seed: u64,
    pub ids: Vec<String>,
    /// Inclusive dimension range.
    pub dims: (usize, usize),
    pub trials: usize,
    /// `None` runs each entry over its default ensembles; an explicit list is
    /// intersected with what the entry admits.
    pub ensembles: Option<Vec<Ensemble>>,
    /// Values fixed for every trial; whatever an entry needs beyond these is
    /// drawn per trial. Values an entry does not take are dropped for it.
    #[serde(skip_serializing_if = "Params::is_empty")]
    pub params: Params,
}

impl SuiteConfig {
    pub fn new(seed: u64, ids: Vec<String>, dims: (usize, usize), trials: usize) -> Self {
        Self {
            seed,
            ids,
            dims,
            trials,
            ensembles: None,
            params: Params::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    /// An established entry was violated.
    Fail,
    /// A paper-novel entry was violated.
    Finding,
    /// Every trial ended in a numeric error.
    Inconclusive,
}

#[derive(Debug, Clone, Serialize)]
pub struct IdResult {
    pub id: String,
    pub status: Status,
    pub verdict: Verdict,
    pub inhomogeneous: bool,
    pub ensembles: Vec<Ensemble>,
    pub trials: usize,
    pub violations: usize,
    pub inconclusive: usize,
    pub inconclusive_reasons: BTreeMap<String, usize>,
    pub min_slack: Option<f64>,
    pub mean_slack: Option<f64>,
    pub worst_witness: Option<EvaluationReport>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Summary {
    pub ids: usize,
    pub pass: usize,
    pub fail: usize,
    pub finding: usize,
    pub inconclusive: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub seed: u64,
    pub registry_version: &'static str,
    pub toolkit_tolerances: BTreeMap<&'static str, f64>,
    pub config: SuiteConfig,
    pub results: Vec<IdResult>,
    pub summary: Summary,
}

impl SuiteReport {
    pub fn has_failures(&self) -> bool {
        self.results.iter().any(|r| r.verdict == Verdict::Fail)
    }

    pub fn result(&self, id: &str) -> Option<&IdResult> {
        self.results.iter().find(|r| r.id == id)
    }

    /// Pretty JSON with floats rounded to `REPORT_DIGITS` significant digits
    /// outside witnesses.
    pub fn to_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("report serializes");
        round_floats(&mut v, REPORT_DIGITS);
        serde_json::to_string_pretty(&v).expect("value serializes")
    }
}

pub fn toolkit_tolerances() -> BTreeMap<&'static str, f64> {
    BTreeMap::from([
        ("violation", VIOLATION_TOL),
        ("spectral_violation", SPECTRAL_VIOLATION_TOL),
        ("condition", CONDITION_TOL),
        ("expansion", EXPANSION_TOL),
        ("flush", FLUSH_FACTOR),
        ("hermitian", HERMITIAN_TOL),
        ("psd", PSD_TOL),
        ("null_snap", NULL_SNAP),
        ("variance_clamp", VARIANCE_CLAMP),
        ("imaginary", IMAG_TOL),
        ("unit", UNIT_TOL),
        ("theta", THETA_TOL),
        ("boundary", BOUNDARY_TOL),
        ("gelfand_step", GELFAND_STEP_TOL),
        ("spectral_radius", SPECTRAL_RADIUS_TOL),
    ])
}

/// Round a float to `digits` significant digits.
pub fn round_sig(x: f64, digits: usize) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{:.*e}", digits.saturating_sub(1), x).parse().unwrap_or(x)
}

/// Round every float in `v` except those under a key ending in `witness`.
pub fn round_floats(v: &mut Value, digits: usize) {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_sig(n.as_f64().expect("f64"), digits);
            if let Some(r) = serde_json::Number::from_f64(x) {
                *n = r;
            }
        }
        Value::Array(items) => items.iter_mut().for_each(|x| round_floats(x, digits)),
        Value::Object(map) => {
            for (k, x) in map.iter_mut() {
                if !k.ends_with("witness") {
                    round_floats(x, digits);
                }
            }
        }
        _ => {}
    }
}

fn fnv1a(s: &str) -> u64 {
    s.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

/// The RNG of trial `trial` for entry `id`; independent of every other trial.
pub fn trial_rng(seed: u64, id: &str, trial: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ fnv1a(id));
    rng.set_stream(trial);
    rng
}

fn check_dims(dims: (usize, usize)) -> Result<()> {
    let (lo, hi) = dims;
    if lo > hi || lo < MIN_SAMPLE_DIM || hi > MAX_SAMPLE_DIM {
        return Err(Error::InvalidParameter(format!(
            "dimension range {lo}..{hi} must lie inside {MIN_SAMPLE_DIM}..{MAX_SAMPLE_DIM}"
        )));
    }
    Ok(())
}

/// The fixed values in `params` that `d` takes.
fn restrict(params: &Params, d: &Descriptor) -> Params {
    Params {
        alpha: params.alpha.filter(|_| d.alpha.is_some()),
        n: params.n.filter(|_| d.order),
        p: params.p.filter(|_| d.exponent),
        f: params.f.clone().filter(|_| d.functions >= 1),
        g: params.g.clone().filter(|_| d.functions >= 2),
        synchronous: params.synchronous.filter(|_| d.kind == Kind::Synchronous),
    }
}

fn ensembles_for(d: &Descriptor, requested: Option<&[Ensemble]>) -> Vec<Ensemble> {
    match requested {
        None => d.ensembles.to_vec(),
        Some(list) => {
            let admissible = d.admissible();
            let mut out: Vec<Ensemble> = list.iter().copied().filter(|e| admissible.contains(e)).collect();
            out.dedup();
            out
        }
    }
}

/// One seeded trial: pick an ensemble and a dimension, draw parameters and
/// an instance, evaluate.
fn run_trial(
    d: &Descriptor,
    ensembles: &[Ensemble],
    dims: (usize, usize),
    fixed: &Params,
    seed: u64,
    trial: u64,
) -> Result<EvaluationReport> {
    let mut rng = trial_rng(seed, d.id, trial);
    let ensemble = ensembles[rng.random_range(0..ensembles.len())];
    let dim = rng.random_range(dims.0..=dims.1);
    let params = draw_params(d, fixed, &mut rng)?;
    let mut inst = sample_instance(d.shape, d.states, ensemble, dim, &mut rng)?;
    inst.seed_path = Some(SeedPath {
        seed,
        id: d.id.to_string(),
        trial,
    });
    evaluate(d.id, &inst, &params)
}

fn run_id(d: &Descriptor, config: &SuiteConfig) -> Result<IdResult> {
    let ensembles = ensembles_for(d, config.ensembles.as_deref());
    let trials = if ensembles.is_empty() { 0 } else { config.trials };
    let fixed = restrict(&config.params, d);
    fixed.validate_partial(d)?;
    let outcomes: Vec<Result<EvaluationReport>> = (0..trials as u64)
        .into_par_iter()
        .map(|t| run_trial(d, &ensembles, config.dims, &fixed, config.seed, t))
        .collect();

    let mut violations = 0;
    let mut inconclusive = 0;
    let mut reasons = BTreeMap::new();
    let mut sum = 0.0;
    let mut evaluated = 0usize;
    let mut worst: Option<EvaluationReport> = None;
    for outcome in outcomes {
        match outcome {
            Ok(r) => {
                evaluated += 1;
                sum += r.slack;
                violations += usize::from(r.violated);
                if worst.as_ref().is_none_or(|w| r.slack < w.slack) {
                    worst = Some(r);
                }
            }
            Err(e) => {
                inconclusive += 1;
                *reasons.entry(e.kind().to_string()).or_insert(0) += 1;
            }
        }
    }
    let verdict = if violations > 0 {
        match d.status {
            Status::Established => Verdict::Fail,
            Status::PaperNovel => Verdict::Finding,
        }
    } else if trials > 0 && evaluated == 0 {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    };
    Ok(IdResult {
        id: d.id.to_string(),
        status: d.status,
        verdict,
        inhomogeneous: !d.homogeneous,
        ensembles,
        trials,
        violations,
        inconclusive,
        inconclusive_reasons: reasons,
        min_slack: worst.as_ref().map(|w| w.slack),
        mean_slack: (evaluated > 0).then(|| sum / evaluated as f64),
        worst_witness: worst,
    })
}

/// Resolve `all` and aliases to registry ids, keeping the given order.
pub fn resolve_ids(ids: &[String]) -> Result<Vec<&'static Descriptor>> {
    if ids.len() == 1 && ids[0] == "all" {
        return Ok(registry().iter().collect());
    }
    let mut out: Vec<&'static Descriptor> = Vec::new();
    for id in ids {
        let d = lookup(id)?;
        if !out.iter().any(|o| o.id == d.id) {
            out.push(d);
        }
    }
    Ok(out)
}

/// Run `config.trials` seeded trials per entry. Numeric failures inside a
/// trial are counted as inconclusive; configuration errors are returned.
pub fn run_suite(config: &SuiteConfig) -> Result<SuiteReport> {
    check_dims(config.dims)?;
    let descriptors = resolve_ids(&config.ids)?;
    let results = descriptors
        .iter()
        .map(|d| run_id(d, config))
        .collect::<Result<Vec<_>>>()?;
    let count = |v: Verdict| results.iter().filter(|r| r.verdict == v).count();
    let summary = Summary {
        ids: results.len(),
        pass: count(Verdict::Pass),
        fail: count(Verdict::Fail),
        finding: count(Verdict::Finding),
        inconclusive: count(Verdict::Inconclusive),
    };
    Ok(SuiteReport {
        seed: config.seed,
        registry_version: REGISTRY_VERSION,
        toolkit_tolerances: toolkit_tolerances(),
        config: config.clone(),
        results,
        summary,
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SearchOutcome {
    pub best: Option<EvaluationReport>,
    pub trials: usize,
    pub violations: usize,
    pub inconclusive: usize,
}

impl SearchOutcome {
    pub fn to_json(&self) -> Value {
        let mut v = json!(self);
        round_floats(&mut v, REPORT_DIGITS);
        v
    }
}

/// Best of `budget` seeded trials: the smallest `|slack|` for established
/// entries, and for paper-novel entries the most negative slack when any
/// trial violates, the smallest `|slack|` otherwise.
pub fn tightness_search(
    id: &str,
    ensembles: Option<&[Ensemble]>,
    dims: (usize, usize),
    budget: usize,
    seed: u64,
    params: &Params,
) -> Result<SearchOutcome> {
    check_dims(dims)?;
    let d = lookup(id)?;
    let ensembles = ensembles_for(d, ensembles);
    if ensembles.is_empty() {
        return Err(Error::InvalidParameter(format!("no requested ensemble is admissible for {}", d.id)));
    }
    let fixed = restrict(params, d);
    fixed.validate_partial(d)?;
    let outcomes: Vec<Result<EvaluationReport>> = (0..budget as u64)
        .into_par_iter()
        .map(|t| run_trial(d, &ensembles, dims, &fixed, seed, t))
        .collect();
    let reports: Vec<EvaluationReport> = outcomes.iter().filter_map(|o| o.as_ref().ok().cloned()).collect();
    let inconclusive = budget - reports.len();
    let violations = reports.iter().filter(|r| r.violated).count();
    let best = if d.status == Status::PaperNovel && violations > 0 {
        reports.into_iter().min_by(|a, b| a.slack.total_cmp(&b.slack))
    } else {
        reports.into_iter().min_by(|a, b| a.slack.abs().total_cmp(&b.slack.abs()))
    };
    Ok(SearchOutcome {
        best,
        trials: budget,
        violations,
        inconclusive,
    })
}
