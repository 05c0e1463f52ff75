use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use numrad_core::binomial::expand_binomial;
use numrad_core::inequality::{registry, run_suite, tightness_search, Ensemble, Params, SuiteConfig};
use numrad_core::linalg::{ell, operator_norm, spectral_radius};
use numrad_core::radius::{minimal_numerical_radius, numerical_radius, range_area, range_boundary};
use numrad_core::spectral::ScalarFn;
use numrad_core::ComplexMatrix;

mod output;

use output::{format_sig, rounded_json};

const PRINT_DIGITS: usize = 12;

#[derive(Parser)]
#[command(name = "numrad", version, about = "Numerical radius toolkit and operator-inequality verifier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Compute one quantity of the matrix in a JSON file.
    Compute {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, value_enum)]
        quantity: Quantity,
        /// Boundary points used by `range-area`.
        #[arg(long, default_value_t = 2048)]
        points: usize,
    },
    /// Run seeded verification trials over registry entries.
    Verify {
        /// `all` or a comma-separated list of ids.
        #[arg(long, default_value = "all")]
        ids: String,
        #[arg(long, default_value = "2..8", value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        /// `default` or a comma-separated list of ensemble names.
        #[arg(long, default_value = "default")]
        ensembles: String,
        #[command(flatten)]
        params: ParamArgs,
        /// Report destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write boundary points of the numerical range as CSV.
    Range {
        #[arg(long)]
        input: PathBuf,
        #[arg(long, default_value_t = 512)]
        points: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Expand (A + B)^n into its non-commutative binomial terms.
    Expand {
        #[arg(long)]
        a: PathBuf,
        #[arg(long)]
        b: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search seeded trials for the tightest or most violating instance.
    Search {
        #[arg(long)]
        id: String,
        /// `default` or a comma-separated list of ensemble names.
        #[arg(long, default_value = "default")]
        ensemble: String,
        #[arg(long, default_value = "2..8", value_parser = parse_dims)]
        dims: (usize, usize),
        #[arg(long, default_value_t = 1000)]
        budget: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// List the registry.
    List,
}

#[derive(Clone, Copy, ValueEnum)]
enum Quantity {
    W,
    Wmin,
    Norm,
    Ell,
    R,
    RangeArea,
}

#[derive(Args)]
struct ParamArgs {
    #[arg(long)]
    alpha: Option<f64>,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<f64>,
    /// Scalar function as JSON, e.g. `{"kind":"power","alpha":0.5}`.
    #[arg(long)]
    f: Option<String>,
    #[arg(long)]
    g: Option<String>,
    #[arg(long)]
    synchronous: Option<bool>,
}

impl ParamArgs {
    fn params(&self) -> Result<Params, Failure> {
        let function = |s: &Option<String>| -> Result<Option<ScalarFn>, Failure> {
            s.as_deref()
                .map(|s| serde_json::from_str(s).map_err(|e| Failure::input(format!("bad scalar function `{s}`: {e}"))))
                .transpose()
        };
        Ok(Params {
            alpha: self.alpha,
            n: self.n,
            p: self.p,
            f: function(&self.f)?,
            g: function(&self.g)?,
            synchronous: self.synchronous,
        })
    }
}

/// A diagnostic and the exit code it maps to.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn input(message: impl Into<String>) -> Self {
        Self {
            code: 2,
            message: message.into(),
        }
    }

    fn numeric(message: impl Into<String>) -> Self {
        Self {
            code: 3,
            message: message.into(),
        }
    }
}

fn parse_dims(s: &str) -> Result<(usize, usize), String> {
    let parse = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("bad dimension `{t}`: {e}"));
    match s.split_once("..") {
        Some((lo, hi)) => {
            let hi = hi.strip_prefix('=').unwrap_or(hi);
            Ok((parse(lo)?, parse(hi)?))
        }
        None => {
            let d = parse(s)?;
            Ok((d, d))
        }
    }
}

fn parse_ensembles(s: &str) -> Result<Option<Vec<Ensemble>>, Failure> {
    if s == "default" {
        return Ok(None);
    }
    s.split(',')
        .map(|e| Ensemble::parse(e.trim()).map_err(|e| Failure::input(e.to_string())))
        .collect::<Result<Vec<_>, _>>()
        .map(Some)
}

fn read_matrix(path: &Path) -> Result<ComplexMatrix, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::input(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::input(format!("{}: {e}", path.display())))
}

/// Write to stdout; a closed pipe is not an error worth a panic.
fn emit(text: &str) {
    let _ = std::io::stdout().lock().write_all(text.as_bytes());
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Failure::input(format!("{}: {e}", path.display()))),
        None => {
            emit(text);
            Ok(())
        }
    }
}

fn with_newline(mut s: String) -> String {
    s.push('\n');
    s
}

fn compute(input: &Path, quantity: Quantity, points: usize) -> Result<(), Failure> {
    let m = read_matrix(input)?;
    let numeric = |e: numrad_core::Error| Failure::numeric(e.to_string());
    let value = match quantity {
        Quantity::W => numerical_radius(&m).map_err(numeric)?,
        Quantity::Wmin => minimal_numerical_radius(&m).map_err(numeric)?,
        Quantity::Norm => operator_norm(&m).map_err(numeric)?,
        Quantity::Ell => ell(&m).map_err(numeric)?,
        Quantity::R => {
            let r = spectral_radius(&m).map_err(numeric)?;
            if !r.converged {
                return Err(Failure::numeric(format!(
                    "spectral radius estimate {} did not settle after {} squarings",
                    format_sig(r.value, PRINT_DIGITS),
                    r.steps
                )));
            }
            r.value
        }
        Quantity::RangeArea => range_area(&m, points).map_err(numeric)?,
    };
    emit(&format!("{}\n", format_sig(value, PRINT_DIGITS)));
    Ok(())
}

fn verify(
    ids: &str,
    dims: (usize, usize),
    trials: usize,
    seed: u64,
    ensembles: &str,
    params: &ParamArgs,
    out: Option<&Path>,
) -> Result<bool, Failure> {
    let mut config = SuiteConfig::new(seed, ids.split(',').map(|s| s.trim().to_string()).collect(), dims, trials);
    config.ensembles = parse_ensembles(ensembles)?;
    config.params = params.params()?;
    let report = run_suite(&config).map_err(|e| Failure::input(e.to_string()))?;
    write_output(out, &with_newline(report.to_json()))?;
    if out.is_some() {
        for r in &report.results {
            let min = r.min_slack.map_or("-".to_string(), |s| format_sig(s, PRINT_DIGITS));
            emit(&format!(
                "{:<16} {:<12} violations {}/{} inconclusive {} min_slack {}\n",
                r.id,
                serde_json::to_value(r.verdict).expect("verdict").as_str().unwrap_or_default(),
                r.violations,
                r.trials,
                r.inconclusive,
                min
            ));
        }
    }
    Ok(!report.has_failures())
}

fn range(input: &Path, points: usize, out: Option<&Path>) -> Result<(), Failure> {
    let m = read_matrix(input)?;
    let boundary = range_boundary(&m, points).map_err(|e| Failure::numeric(e.to_string()))?;
    let mut csv = String::from("theta,re,im\n");
    for p in boundary {
        csv.push_str(&format!("{:.16e},{:.16e},{:.16e}\n", p.theta, p.z.re, p.z.im));
    }
    write_output(out, &csv)
}

fn expand(a: &Path, b: &Path, n: usize, out: Option<&Path>) -> Result<(), Failure> {
    let (a, b) = (read_matrix(a)?, read_matrix(b)?);
    let expansion = expand_binomial(&a, &b, n).map_err(|e| Failure::input(e.to_string()))?;
    write_output(out, &with_newline(rounded_json(&expansion)))
}

fn search(id: &str, ensemble: &str, dims: (usize, usize), budget: usize, seed: u64, params: &ParamArgs) -> Result<(), Failure> {
    let ensembles = parse_ensembles(ensemble)?;
    let outcome = tightness_search(id, ensembles.as_deref(), dims, budget, seed, &params.params()?)
        .map_err(|e| Failure::input(e.to_string()))?;
    let best = outcome
        .best
        .ok_or_else(|| Failure::numeric(format!("all {} trials were inconclusive", outcome.trials)))?;
    eprintln!(
        "{} trials, {} violations, {} inconclusive",
        outcome.trials, outcome.violations, outcome.inconclusive
    );
    emit(&with_newline(rounded_json(&best)));
    Ok(())
}

fn list() {
    for d in registry() {
        emit(&format!("{:<16} {:<12} {}\n", d.id, d.status.as_str(), d.statement));
    }
}

fn run(cli: Cli) -> Result<ExitCode, Failure> {
    match cli.command {
        Command::Compute { input, quantity, points } => compute(&input, quantity, points)?,
        Command::Verify {
            ids,
            dims,
            trials,
            seed,
            ensembles,
            params,
            out,
        } => {
            if !verify(&ids, dims, trials, seed, &ensembles, &params, out.as_deref())? {
                return Ok(ExitCode::from(1));
            }
        }
        Command::Range { input, points, out } => range(&input, points, out.as_deref())?,
        Command::Expand { a, b, n, out } => expand(&a, &b, n, out.as_deref())?,
        Command::Search {
            id,
            ensemble,
            dims,
            budget,
            seed,
            params,
        } => search(&id, &ensemble, dims, budget, seed, &params)?,
        Command::List => list(),
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("numrad: {}", f.message.lines().next().unwrap_or_default());
            ExitCode::from(f.code)
        }
    }
}
