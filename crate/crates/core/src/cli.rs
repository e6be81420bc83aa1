//! Command-line front end.
//!
//! Exit codes: 0 success, 2 I/O failure, 3 usage or invalid input, 4 numeric failure
//! (a divergent variance reports "divergent variance").

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use crate::error::Error;
use crate::estimation::LocalEstimation;
use crate::linalg::CMatrix;
use crate::models::{Jump, NoiseSpec, DEFAULT_DT};
use crate::sweep::{self, build_observable, Model, ModelKind, ModelParams, ObservableForm, SweepSpec, FIGURE_IDS};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 2;
pub const EXIT_USAGE: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug, Parser)]
#[command(name = "qestim", version, about = "Single-parameter quantum estimation: QFI, SLD, the precision gap and commutant distance")]
pub struct Cli {
    /// Worker threads for sweeps (default: all cores).
    #[arg(long, global = true, env = "QESTIM_THREADS")]
    pub threads: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Symmetric logarithmic derivative at one point.
    Sld(PointArgs),
    /// Quantum Fisher information and the Cramér-Rao bound at one point.
    Qfi(PointArgs),
    /// Variance, bound and the gap Λ for one observable.
    Lambda(PointArgs),
    /// Commutant distance D for one observable (full report).
    Distance(PointArgs),
    /// Run a sweep described by a JSON spec file.
    Sweep {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        output: PathBuf,
        /// Overrides the spec's seed.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Regenerate one of the preset figure datasets.
    Figure {
        #[arg(value_parser = FIGURE_IDS)]
        id: String,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        seed: Option<u64>,
    },
}

#[derive(Debug, Args)]
pub struct PointArgs {
    /// State family.
    #[arg(long, value_enum, default_value = "driven-qubit")]
    pub model: ModelKind,
    /// Estimated parameter (ω_a or ω_l).
    #[arg(long)]
    pub theta: Option<f64>,
    /// Evolution time.
    #[arg(long)]
    pub t: Option<f64>,
    /// Drive strength F (driven qubit).
    #[arg(long)]
    pub drive: Option<f64>,
    /// Initial-state angle (driven qubit).
    #[arg(long)]
    pub phi: Option<f64>,
    /// Rabi frequency Ω₁ (bipartite).
    #[arg(long)]
    pub rabi: Option<f64>,
    /// Hyperfine coupling g (bipartite).
    #[arg(long)]
    pub coupling: Option<f64>,
    /// Nucleus initial angle (bipartite).
    #[arg(long)]
    pub phi1: Option<f64>,
    /// Electron initial angle (bipartite).
    #[arg(long)]
    pub phi2: Option<f64>,
    /// Noise rate κ (bipartite-noisy).
    #[arg(long, default_value_t = 0.2)]
    pub kappa: f64,
    /// Jump operator (bipartite-noisy).
    #[arg(long, value_enum, default_value = "dephasing")]
    pub jump: Jump,
    /// RK4 step (bipartite-noisy).
    #[arg(long, default_value_t = DEFAULT_DT)]
    pub dt: f64,
    /// Observable form; defaults to `qubit` or `electron` by model.
    #[arg(long, value_enum)]
    pub form: Option<ObservableForm>,
    /// Observable coefficient, e.g. `--coeff x=0.4 --coeff s=-0.7`.
    #[arg(long = "coeff", value_parser = parse_coeff)]
    pub coeffs: Vec<(String, f64)>,
    /// Write JSON here instead of stdout.
    #[arg(long)]
    pub output: Option<PathBuf>,
}

fn parse_coeff(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s.split_once('=').ok_or_else(|| format!("expected NAME=VALUE, got '{s}'"))?;
    let value: f64 = value.trim().parse().map_err(|e| format!("bad value in '{s}': {e}"))?;
    Ok((name.trim().to_string(), value))
}

#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        Self { code: EXIT_USAGE, message: message.into() }
    }

    fn io(path: &Path, err: std::io::Error) -> Self {
        Self { code: EXIT_IO, message: format!("{}: {err}", path.display()) }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        let code = match err {
            Error::InvalidSpec(_) | Error::MissingCoefficients | Error::DimensionMismatch(_) => EXIT_USAGE,
            _ => EXIT_NUMERIC,
        };
        let message = match err {
            Error::DivergentVariance(_) => "divergent variance".to_string(),
            other => other.to_string(),
        };
        Self { code, message }
    }
}

/// Parses `args` (program name first) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn execute(cli: &Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sld(args) => point(args, PointKind::Sld),
        Command::Qfi(args) => point(args, PointKind::Qfi),
        Command::Lambda(args) | Command::Distance(args) => point(args, PointKind::Report),
        Command::Sweep { spec, output, seed } => {
            let text = std::fs::read_to_string(spec).map_err(|e| CliError::io(spec, e))?;
            let spec = SweepSpec::from_json(&text)?;
            run_spec(spec, *seed, output, cli.threads)
        }
        Command::Figure { id, output, seed } => {
            let spec = SweepSpec::figure(id).ok_or_else(|| CliError::usage(format!("unknown figure '{id}'")))?;
            run_spec(spec, *seed, output, cli.threads)
        }
    }
}

/// `<dir>/<stem>.meta.json` next to the CSV output.
pub fn metadata_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    output.with_file_name(format!("{stem}.meta.json"))
}

fn run_spec(mut spec: SweepSpec, seed: Option<u64>, output: &Path, threads: Option<usize>) -> Result<(), CliError> {
    if let Some(seed) = seed {
        spec.seed = seed;
    }
    spec.validate()?;
    if threads == Some(0) {
        return Err(CliError::usage("--threads must be at least 1"));
    }
    let meta_path = metadata_path(output);
    let csv_file = File::create(output).map_err(|e| CliError::io(output, e))?;
    let meta_file = File::create(&meta_path).map_err(|e| CliError::io(&meta_path, e))?;

    let result = sweep::run(&spec, threads)?;
    result.write_csv(BufWriter::new(csv_file)).map_err(|e| CliError::io(output, e))?;
    let mut meta = BufWriter::new(meta_file);
    writeln!(meta, "{}", spec.to_json())
        .and_then(|_| meta.flush())
        .map_err(|e| CliError::io(&meta_path, e))
}

enum PointKind {
    Sld,
    Qfi,
    Report,
}

#[derive(Serialize)]
struct SldOutput<'a> {
    qfi: f64,
    sld: &'a CMatrix,
}

#[derive(Serialize)]
struct QfiOutput {
    qfi: f64,
    qcrb: f64,
}

fn point(args: &PointArgs, kind: PointKind) -> Result<(), CliError> {
    let defaults = ModelParams::default();
    let params = ModelParams {
        theta: args.theta.unwrap_or(defaults.theta),
        t: args.t.unwrap_or(defaults.t),
        drive: args.drive.unwrap_or(defaults.drive),
        phi: args.phi.unwrap_or(defaults.phi),
        rabi: args.rabi.unwrap_or(defaults.rabi),
        coupling: args.coupling.unwrap_or(defaults.coupling),
        phi1: args.phi1.unwrap_or(defaults.phi1),
        phi2: args.phi2.unwrap_or(defaults.phi2),
    };
    let noise = Some(NoiseSpec { kappa: args.kappa, jump: args.jump, dt: args.dt });
    let noise = if args.model == ModelKind::BipartiteNoisy { noise } else { None };
    let model = Model::new(args.model, noise, &params)?;
    let local = LocalEstimation::from_family(&model, params.theta, params.t)?;

    let json = match kind {
        PointKind::Sld => to_json(&SldOutput { qfi: local.qfi(), sld: local.sld() }),
        PointKind::Qfi => to_json(&QfiOutput { qfi: local.qfi(), qcrb: local.qcrb() }),
        PointKind::Report => {
            let form = args.form.unwrap_or(match args.model {
                ModelKind::DrivenQubit => ObservableForm::Qubit,
                _ => ObservableForm::Electron,
            });
            if !form.fits(args.model) {
                return Err(CliError::usage(format!("form {form:?} does not apply to model {:?}", args.model)));
            }
            let coeffs = resolve_coeffs(form, &args.coeffs)?;
            let obs = build_observable(form, &coeffs, &local, false);
            to_json(&local.report(&obs)?)
        }
    };
    match &args.output {
        Some(path) => std::fs::write(path, json).map_err(|e| CliError::io(path, e)),
        None => {
            print!("{json}");
            Ok(())
        }
    }
}

fn resolve_coeffs(form: ObservableForm, given: &[(String, f64)]) -> Result<Vec<f64>, CliError> {
    let names = form.coefficients();
    let mut values = BTreeMap::new();
    for (name, v) in given {
        if !names.contains(&name.as_str()) {
            return Err(CliError::usage(format!("unknown coefficient '{name}' (expected one of {names:?})")));
        }
        values.insert(name.as_str(), *v);
    }
    Ok(names.iter().map(|n| values.get(n).copied().unwrap_or(0.0)).collect())
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable output");
    s.push('\n');
    s
}
