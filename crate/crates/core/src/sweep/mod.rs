//! Figure datasets: random-observable scatters, coefficient grids of Λ and D, and
//! bound curves along a model parameter.
//!
//! Rows always come back in row-major axis order (first axis slowest), whatever the
//! thread count. Random draws are made up front from a ChaCha8 stream seeded by the
//! spec, so the schedule cannot perturb them.

mod spec;

pub use spec::{Axis, Mode, ModelKind, ModelParams, ObservableForm, SweepSpec, FIGURE_IDS, PARAMETER_AXES};

use std::io::Write;

use rand::distributions::{Distribution, Uniform};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::estimation::{qfi, LocalEstimation, Observable, ParamFamily, QubitCoeffs};
use crate::linalg::{partial_trace, CMatrix};
use crate::models::bipartite::{self, DIMS, ELECTRON, NUCLEUS};
use crate::models::{Bipartite, DrivenQubit, LindbladFamily, NoiseSpec};

/// Subsystem QFIs below this leave the local bound unbounded.
pub const UNBOUNDED_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// `∂⟨A⟩/∂θ` vanished; variance and Λ are left empty.
    Divergent,
    /// A reduced state carries no information about θ.
    UnboundedSubsystem,
    /// The state or its derivative could not be evaluated at this point.
    Failed,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Ok => "ok",
            Status::Divergent => "divergent",
            Status::UnboundedSubsystem => "unbounded-subsystem",
            Status::Failed => "failed",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Row {
    /// Running sample index (scatter mode only).
    pub sample: Option<usize>,
    /// One entry per [`SweepResult::columns`]; `None` is written as an empty field.
    pub values: Vec<Option<f64>>,
    pub status: Status,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub spec: SweepSpec,
    pub columns: Vec<String>,
    pub rows: Vec<Row>,
}

impl SweepResult {
    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.columns.iter().position(|c| c == name)
    }

    pub fn column(&self, name: &str) -> Option<Vec<Option<f64>>> {
        let k = self.column_index(name)?;
        Some(self.rows.iter().map(|r| r.values[k]).collect())
    }

    /// The CSV header: `sample` (scatter only), the value columns, then `status`.
    pub fn header(&self) -> Vec<String> {
        let mut header = Vec::with_capacity(self.columns.len() + 2);
        if self.spec.mode == Mode::Scatter {
            header.push("sample".to_string());
        }
        header.extend(self.columns.iter().cloned());
        header.push("status".to_string());
        header
    }

    pub fn write_csv<W: Write>(&self, out: W) -> std::io::Result<()> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(out);
        w.write_record(self.header())?;
        for row in &self.rows {
            let mut record: Vec<String> = Vec::with_capacity(self.columns.len() + 2);
            if self.spec.mode == Mode::Scatter {
                record.push(row.sample.map(|s| s.to_string()).unwrap_or_default());
            }
            record.extend(row.values.iter().map(|v| format_value(*v)));
            record.push(row.status.as_str().to_string());
            w.write_record(&record)?;
        }
        w.flush()
    }

    pub fn to_csv_string(&self) -> String {
        let mut buf = Vec::new();
        self.write_csv(&mut buf).expect("writing to memory");
        String::from_utf8(buf).expect("csv is utf-8")
    }
}

/// 17 significant digits; non-finite values spelled `inf`, `-inf`, `nan`.
pub fn format_value(v: Option<f64>) -> String {
    match v {
        None => String::new(),
        Some(x) if x.is_nan() => "nan".into(),
        Some(x) if x.is_infinite() => if x > 0.0 { "inf" } else { "-inf" }.into(),
        Some(x) => format!("{x:.16e}"),
    }
}

/// A concrete state family chosen by the spec.
#[derive(Clone, Debug)]
pub enum Model {
    DrivenQubit(DrivenQubit),
    Bipartite(Bipartite),
    Noisy(LindbladFamily),
}

impl Model {
    pub fn new(kind: ModelKind, noise: Option<NoiseSpec>, p: &ModelParams) -> Result<Self> {
        let pair = Bipartite { rabi: p.rabi, coupling: p.coupling, phi1: p.phi1, phi2: p.phi2 };
        Ok(match kind {
            ModelKind::DrivenQubit => Model::DrivenQubit(DrivenQubit { drive: p.drive, phi: p.phi }),
            ModelKind::Bipartite => Model::Bipartite(pair),
            ModelKind::BipartiteNoisy => {
                let noise = noise.ok_or_else(|| Error::InvalidSpec("missing noise block".into()))?;
                noise.validate()?;
                Model::Noisy(LindbladFamily::new(pair, noise))
            }
        })
    }

    pub fn build(spec: &SweepSpec, p: &ModelParams) -> Result<Self> {
        Self::new(spec.model, spec.noise, p)
    }

    fn as_family(&self) -> &dyn ParamFamily {
        match self {
            Model::DrivenQubit(f) => f,
            Model::Bipartite(f) => f,
            Model::Noisy(f) => f,
        }
    }

    pub fn is_bipartite(&self) -> bool {
        !matches!(self, Model::DrivenQubit(_))
    }
}

impl ParamFamily for Model {
    fn dim(&self) -> usize {
        self.as_family().dim()
    }

    fn state(&self, theta: f64, t: f64) -> Result<CMatrix> {
        self.as_family().state(theta, t)
    }

    fn derivative(&self, theta: f64, t: f64) -> Result<CMatrix> {
        self.as_family().derivative(theta, t)
    }

    fn state_and_derivative(&self, theta: f64, t: f64) -> Result<(CMatrix, CMatrix)> {
        self.as_family().state_and_derivative(theta, t)
    }
}

/// Turns coefficients listed in [`ObservableForm::coefficients`] order into an
/// observable; `around_sld` adds the SLD at the evaluation point.
pub fn build_observable(form: ObservableForm, c: &[f64], local: &LocalEstimation, around_sld: bool) -> Observable {
    let q = |k: usize| QubitCoeffs::new(c[k], c[k + 1], c[k + 2], c[k + 3]);
    let obs = match form {
        ObservableForm::Qubit => Observable::qubit(q(0)),
        ObservableForm::Electron => bipartite::electron_observable(q(0)),
        ObservableForm::Nucleus => bipartite::nucleus_observable(q(0)),
        ObservableForm::Joint => bipartite::joint_observable(q(0), q(4)),
        ObservableForm::SldAffine => {
            let n = local.sld().dim();
            Observable::from_matrix(local.sld() * c[0] + CMatrix::identity(n) * c[1])
        }
    };
    if around_sld {
        obs.plus(local.sld())
    } else {
        obs
    }
}

/// Variance, Λ and D for one observable.
fn evaluate(local: &LocalEstimation, obs: &Observable) -> ([Option<f64>; 3], Status) {
    let distance = local.distance(obs).ok();
    match local.variance(obs) {
        Ok(v) => ([Some(v), Some(v - local.qcrb()), distance], Status::Ok),
        Err(Error::DivergentVariance(_)) => ([None, None, distance], Status::Divergent),
        Err(_) => ([None, None, distance], Status::Failed),
    }
}

fn local_at(spec: &SweepSpec, p: &ModelParams) -> Result<LocalEstimation> {
    LocalEstimation::from_family(&Model::build(spec, p)?, p.theta, p.t)
}

fn in_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads.unwrap_or(0))
        .build()
        .map_err(|e| Error::InvalidSpec(format!("thread pool: {e}")))?;
    Ok(pool.install(job))
}

fn expect_mode(spec: &SweepSpec, mode: Mode) -> Result<()> {
    spec.validate()?;
    if spec.mode != mode {
        return Err(Error::InvalidSpec(format!("expected mode {mode:?}, spec has {:?}", spec.mode)));
    }
    Ok(())
}

/// Runs whichever mode the spec names. `threads = None` uses all cores.
pub fn run(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    match spec.mode {
        Mode::Scatter => run_scatter(spec, threads),
        Mode::Grid => run_grid(spec, threads),
        Mode::Curves => run_curves(spec, threads),
    }
}

/// Coefficients drawn uniformly from `sample_range`, one observable per sample and
/// per point of the optional parameter axis. Fixed coefficients override the draw.
pub fn run_scatter(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    expect_mode(spec, Mode::Scatter)?;
    let names = spec.observable.coefficients();
    let axis = spec.axes.first();
    let points: Vec<ModelParams> = match axis {
        Some(a) => a
            .values()
            .into_iter()
            .map(|v| {
                let mut p = spec.params;
                p.set_axis(&a.name, v);
                p
            })
            .collect(),
        None => vec![spec.params],
    };

    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let dist = Uniform::new_inclusive(spec.sample_range[0], spec.sample_range[1]);
    let n_rows = points.len() * spec.samples;
    let draws: Vec<Vec<f64>> = (0..n_rows)
        .map(|_| {
            names
                .iter()
                .map(|name| {
                    let x = dist.sample(&mut rng);
                    spec.fixed.get(*name).copied().unwrap_or(x)
                })
                .collect()
        })
        .collect();

    let mut columns: Vec<String> = axis.map(|a| a.name.clone()).into_iter().collect();
    columns.extend(names.iter().map(|s| s.to_string()));
    columns.extend(["variance", "lambda", "inv_qfi", "qfi", "distance"].map(String::from));

    let rows = in_pool(threads, || {
        let locals: Vec<Result<LocalEstimation>> = points.par_iter().map(|p| local_at(spec, p)).collect();
        (0..n_rows)
            .into_par_iter()
            .map(|i| {
                let point = i / spec.samples;
                let coeffs = &draws[i];
                let mut values: Vec<Option<f64>> = Vec::with_capacity(columns.len());
                if let Some(a) = axis {
                    values.push(Some(axis_value(&points[point], &a.name)));
                }
                values.extend(coeffs.iter().map(|&c| Some(c)));
                let status = match &locals[point] {
                    Ok(local) => {
                        let obs = build_observable(spec.observable, coeffs, local, spec.around_sld);
                        let ([variance, lambda, distance], status) = evaluate(local, &obs);
                        values.extend([variance, lambda, Some(local.qcrb()), Some(local.qfi()), distance]);
                        status
                    }
                    Err(_) => {
                        values.extend([None; 5]);
                        Status::Failed
                    }
                };
                Row { sample: Some(i), values, status }
            })
            .collect()
    })?;
    Ok(SweepResult { spec: spec.clone(), columns, rows })
}

fn axis_value(p: &ModelParams, name: &str) -> f64 {
    match name {
        "theta" => p.theta,
        "t" => p.t,
        _ => p.phi1,
    }
}

/// Λ and D over one or two coefficient axes at the spec's parameter point.
pub fn run_grid(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    expect_mode(spec, Mode::Grid)?;
    let names = spec.observable.coefficients();
    let mut base = vec![0.0; names.len()];
    for (k, name) in names.iter().enumerate() {
        if let Some(&v) = spec.fixed.get(*name) {
            base[k] = v;
        }
    }
    let slots: Vec<usize> = spec
        .axes
        .iter()
        .map(|a| names.iter().position(|n| *n == a.name).expect("validated axis"))
        .collect();
    let grids: Vec<Vec<f64>> = spec.axes.iter().map(Axis::values).collect();
    let n_rows: usize = grids.iter().map(Vec::len).product();

    let mut columns: Vec<String> = spec.axes.iter().map(|a| a.name.clone()).collect();
    columns.extend(["variance", "lambda", "distance", "qfi", "inv_qfi"].map(String::from));

    let rows = in_pool(threads, || {
        let local = local_at(spec, &spec.params);
        (0..n_rows)
            .into_par_iter()
            .map(|i| {
                let mut coeffs = base.clone();
                let mut values: Vec<Option<f64>> = Vec::with_capacity(columns.len());
                let mut rest = i;
                let mut stride = n_rows;
                for (axis, &slot) in grids.iter().zip(&slots) {
                    stride /= axis.len();
                    let v = axis[rest / stride];
                    rest %= stride;
                    coeffs[slot] = v;
                    values.push(Some(v));
                }
                let status = match &local {
                    Ok(local) => {
                        let obs = build_observable(spec.observable, &coeffs, local, spec.around_sld);
                        let ([variance, lambda, distance], status) = evaluate(local, &obs);
                        values.extend([variance, lambda, distance, Some(local.qfi()), Some(local.qcrb())]);
                        status
                    }
                    Err(_) => {
                        values.extend([None; 5]);
                        Status::Failed
                    }
                };
                Row { sample: None, values, status }
            })
            .collect()
    })?;
    Ok(SweepResult { spec: spec.clone(), columns, rows })
}

/// Global bound `1/F_Q` and, for the bipartite models, the nucleus and electron
/// bounds `1/F_Q^n`, `1/F_Q^e` along one parameter axis.
pub fn run_curves(spec: &SweepSpec, threads: Option<usize>) -> Result<SweepResult> {
    expect_mode(spec, Mode::Curves)?;
    let axis = &spec.axes[0];
    let values = axis.values();
    let columns: Vec<String> = [
        axis.name.as_str(),
        "qfi",
        "inv_qfi",
        "qfi_nucleus",
        "inv_qfi_nucleus",
        "qfi_electron",
        "inv_qfi_electron",
    ]
    .map(String::from)
    .to_vec();

    let rows = in_pool(threads, || {
        values
            .par_iter()
            .map(|&v| {
                let mut p = spec.params;
                p.set_axis(&axis.name, v);
                match curve_point(spec, &p) {
                    Ok((global, subsystems)) => {
                        let mut row = vec![Some(v), Some(global), Some(1.0 / global)];
                        let mut status = Status::Ok;
                        for f in subsystems {
                            if matches!(f, Some(f) if f < UNBOUNDED_TOL) {
                                status = Status::UnboundedSubsystem;
                            }
                            row.extend([f, f.map(|f| 1.0 / f)]);
                        }
                        Row { sample: None, values: row, status }
                    }
                    Err(_) => {
                        let mut row = vec![Some(v)];
                        row.extend([None; 6]);
                        Row { sample: None, values: row, status: Status::Failed }
                    }
                }
            })
            .collect()
    })?;
    Ok(SweepResult { spec: spec.clone(), columns, rows })
}

/// Global QFI and `[nucleus, electron]` subsystem QFIs.
fn curve_point(spec: &SweepSpec, p: &ModelParams) -> Result<(f64, [Option<f64>; 2])> {
    let model = Model::build(spec, p)?;
    let (rho, drho) = model.state_and_derivative(p.theta, p.t)?;
    let global = qfi(&rho, &drho)?;
    if !model.is_bipartite() {
        return Ok((global, [None, None]));
    }
    let reduced = |keep| -> Result<f64> {
        let r = partial_trace(&rho, DIMS, keep)?.hermitian_part();
        let dr = partial_trace(&drho, DIMS, keep)?.hermitian_part();
        qfi(&r, &dr)
    };
    Ok((global, [Some(reduced(NUCLEUS)?), Some(reduced(ELECTRON)?)]))
}
