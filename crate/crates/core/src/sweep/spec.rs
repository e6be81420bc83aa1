use std::collections::BTreeMap;
use std::f64::consts::{FRAC_PI_4, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::models::{Jump, NoiseSpec};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ModelKind {
    DrivenQubit,
    Bipartite,
    BipartiteNoisy,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    /// Random observables, optionally repeated along one parameter axis.
    Scatter,
    /// One or two coefficient axes at a fixed parameter point.
    Grid,
    /// Global and subsystem bounds along one parameter axis.
    Curves,
}

/// How swept and fixed coefficients become an observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "kebab-case")]
pub enum ObservableForm {
    /// `s, x, y, z` on the driven qubit.
    Qubit,
    /// `𝕀^n ⊗ A^e` with `e_s, e_x, e_y, e_z`.
    Electron,
    /// `A^n ⊗ 𝕀^e` with `n_s, n_x, n_y, n_z`.
    Nucleus,
    /// `A^n ⊗ A^e` with all eight coefficients.
    Joint,
    /// `alpha·L + beta·𝕀` for the SLD `L` at the evaluation point.
    SldAffine,
}

impl ObservableForm {
    pub fn coefficients(&self) -> &'static [&'static str] {
        match self {
            ObservableForm::Qubit => &["s", "x", "y", "z"],
            ObservableForm::Electron => &["e_s", "e_x", "e_y", "e_z"],
            ObservableForm::Nucleus => &["n_s", "n_x", "n_y", "n_z"],
            ObservableForm::Joint => &["n_s", "n_x", "n_y", "n_z", "e_s", "e_x", "e_y", "e_z"],
            ObservableForm::SldAffine => &["alpha", "beta"],
        }
    }

    pub fn fits(&self, model: ModelKind) -> bool {
        match self {
            ObservableForm::Qubit => model == ModelKind::DrivenQubit,
            ObservableForm::SldAffine => true,
            _ => model != ModelKind::DrivenQubit,
        }
    }
}

/// Parameters that can be swept instead of coefficients. `phi` sets `φ` on the
/// driven qubit and `φ₁ = φ₂` on the bipartite models.
pub const PARAMETER_AXES: [&str; 3] = ["theta", "t", "phi"];

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Axis {
    pub name: String,
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

impl Axis {
    pub fn new(name: &str, min: f64, max: f64, count: usize) -> Self {
        Self { name: name.to_string(), min, max, count }
    }

    pub fn values(&self) -> Vec<f64> {
        match self.count {
            0 => vec![],
            1 => vec![self.min],
            n => (0..n)
                .map(|i| {
                    if i == n - 1 {
                        self.max
                    } else {
                        self.min + (self.max - self.min) * i as f64 / (n - 1) as f64
                    }
                })
                .collect(),
        }
    }

    fn is_parameter(&self) -> bool {
        PARAMETER_AXES.contains(&self.name.as_str())
    }
}

/// Model constants and the evaluation point. `theta` is the estimated parameter
/// (ω_a or ω_l); the driven qubit reads `drive` and `phi`, the bipartite models read
/// `rabi`, `coupling`, `phi1` and `phi2`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ModelParams {
    pub theta: f64,
    pub t: f64,
    pub drive: f64,
    pub phi: f64,
    pub rabi: f64,
    pub coupling: f64,
    pub phi1: f64,
    pub phi2: f64,
}

impl Default for ModelParams {
    fn default() -> Self {
        Self { theta: 2.0, t: 1.0, drive: 1.0, phi: FRAC_PI_4, rabi: 3.0, coupling: 2.0, phi1: FRAC_PI_4, phi2: FRAC_PI_4 }
    }
}

impl ModelParams {
    pub fn with_t(self, t: f64) -> Self {
        Self { t, ..self }
    }

    /// Overrides one parameter axis value.
    pub fn set_axis(&mut self, name: &str, value: f64) {
        match name {
            "theta" => self.theta = value,
            "t" => self.t = value,
            "phi" => {
                self.phi = value;
                self.phi1 = value;
                self.phi2 = value;
            }
            _ => unreachable!("validated axis name {name}"),
        }
    }

    fn all(&self) -> [f64; 8] {
        [self.theta, self.t, self.drive, self.phi, self.rabi, self.coupling, self.phi1, self.phi2]
    }
}

fn default_range() -> [f64; 2] {
    [-0.5, 0.5]
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub model: ModelKind,
    pub mode: Mode,
    #[serde(default = "default_form")]
    pub observable: ObservableForm,
    #[serde(default)]
    pub axes: Vec<Axis>,
    /// Coefficients held constant; unnamed ones default to zero (grid) or are drawn
    /// at random (scatter).
    #[serde(default)]
    pub fixed: BTreeMap<String, f64>,
    #[serde(default)]
    pub params: ModelParams,
    #[serde(default)]
    pub noise: Option<NoiseSpec>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub samples: usize,
    /// Bounds of the uniform distribution for random coefficients.
    #[serde(default = "default_range")]
    pub sample_range: [f64; 2],
    /// Scatter observables become `L + δA` with `δA` the random draw.
    #[serde(default)]
    pub around_sld: bool,
}

fn default_form() -> ObservableForm {
    ObservableForm::SldAffine
}

impl SweepSpec {
    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text).map_err(|e| Error::InvalidSpec(e.to_string()))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        if !self.observable.fits(self.model) {
            return bad(format!("observable form {:?} does not apply to model {:?}", self.observable, self.model));
        }
        if self.params.all().iter().any(|x| !x.is_finite()) {
            return bad("model parameters must be finite".into());
        }
        if self.params.t < 0.0 {
            return bad("t must be >= 0".into());
        }
        match (self.model, &self.noise) {
            (ModelKind::BipartiteNoisy, Some(noise)) => noise.validate()?,
            (ModelKind::BipartiteNoisy, None) => return bad("model bipartite-noisy needs a noise block".into()),
            (_, Some(_)) => return bad("noise is only used by model bipartite-noisy".into()),
            _ => {}
        }
        let names = self.observable.coefficients();
        for key in self.fixed.keys() {
            if !names.contains(&key.as_str()) {
                return bad(format!("unknown coefficient '{key}' for this observable form (expected one of {names:?})"));
            }
        }
        for axis in &self.axes {
            if !(axis.min.is_finite() && axis.max.is_finite()) {
                return bad(format!("axis '{}' has a non-finite bound", axis.name));
            }
            if axis.name == "t" && axis.min.min(axis.max) < 0.0 {
                return bad("a t axis must stay >= 0".into());
            }
        }
        let [lo, hi] = self.sample_range;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return bad(format!("sample_range [{lo}, {hi}] is not an interval"));
        }
        match self.mode {
            Mode::Grid => {
                if self.axes.is_empty() || self.axes.len() > 2 {
                    return bad("grid mode takes one or two axes".into());
                }
                for axis in &self.axes {
                    if !names.contains(&axis.name.as_str()) {
                        return bad(format!("grid axis '{}' is not a coefficient of this form ({names:?})", axis.name));
                    }
                    if axis.count < 2 {
                        return bad(format!("grid axis '{}' needs at least 2 points", axis.name));
                    }
                    if self.fixed.contains_key(&axis.name) {
                        return bad(format!("'{}' is both swept and fixed", axis.name));
                    }
                }
                if self.axes.len() == 2 && self.axes[0].name == self.axes[1].name {
                    return bad("grid axes must differ".into());
                }
            }
            Mode::Curves | Mode::Scatter => {
                let limit = if self.mode == Mode::Curves { 1..=1 } else { 0..=1 };
                if !limit.contains(&self.axes.len()) {
                    return bad(format!("{:?} mode takes {limit:?} parameter axes", self.mode).to_lowercase());
                }
                if let Some(axis) = self.axes.iter().find(|a| !a.is_parameter()) {
                    return bad(format!("'{}' is not a parameter axis ({PARAMETER_AXES:?})", axis.name));
                }
            }
        }
        Ok(())
    }

    /// Built-in preset for a figure id, or `None` for an unknown id.
    pub fn figure(id: &str) -> Option<Self> {
        let base = |model, mode, observable| SweepSpec {
            model,
            mode,
            observable,
            axes: vec![],
            fixed: BTreeMap::new(),
            params: ModelParams::default(),
            noise: None,
            seed: 2024,
            samples: 0,
            sample_range: default_range(),
            around_sld: false,
        };
        let fixed = |pairs: &[(&str, f64)]| pairs.iter().map(|&(k, v)| (k.to_string(), v)).collect();
        let electron_grid = |model| SweepSpec {
            axes: vec![Axis::new("e_x", -1.0, 1.0, 101), Axis::new("e_y", -1.0, 1.0, 101)],
            fixed: fixed(&[("e_s", -1.0), ("e_z", -0.25)]),
            params: ModelParams::default().with_t(2.0),
            ..base(model, Mode::Grid, ObservableForm::Electron)
        };
        let driven_scatter = |axis: Axis, t: f64| SweepSpec {
            axes: vec![axis],
            samples: 10,
            around_sld: true,
            params: ModelParams::default().with_t(t),
            ..base(ModelKind::DrivenQubit, Mode::Scatter, ObservableForm::Qubit)
        };
        let spec = match id {
            "1a" => driven_scatter(Axis::new("phi", 0.0, PI, 41), 1.5),
            "1b" => driven_scatter(Axis::new("t", 0.0, 10.0, 41), 1.5),
            "2" => SweepSpec {
                axes: vec![Axis::new("x", -1.0, 1.0, 101), Axis::new("y", -1.0, 1.0, 101)],
                fixed: fixed(&[("s", -0.7), ("z", 0.2)]),
                ..base(ModelKind::DrivenQubit, Mode::Grid, ObservableForm::Qubit)
            },
            "3a" | "3b" => electron_grid(ModelKind::Bipartite),
            "3c" | "3d" => SweepSpec {
                axes: vec![Axis::new("n_y", -1.0, 1.0, 101), Axis::new("e_y", -1.0, 1.0, 101)],
                fixed: fixed(&[("n_s", 2.0), ("n_x", 1.0), ("n_z", -1.0), ("e_s", 0.0), ("e_x", 1.0), ("e_z", -0.5)]),
                params: ModelParams::default().with_t(2.0),
                ..base(ModelKind::Bipartite, Mode::Grid, ObservableForm::Joint)
            },
            "4a" => SweepSpec {
                axes: vec![Axis::new("phi", 0.0, PI, 101)],
                params: ModelParams::default().with_t(2.0),
                ..base(ModelKind::Bipartite, Mode::Curves, ObservableForm::SldAffine)
            },
            "4b" => SweepSpec {
                axes: vec![Axis::new("t", 0.0, 10.0, 101)],
                ..base(ModelKind::Bipartite, Mode::Curves, ObservableForm::SldAffine)
            },
            "5" => SweepSpec {
                samples: 100,
                around_sld: true,
                ..base(ModelKind::DrivenQubit, Mode::Scatter, ObservableForm::Qubit)
            },
            "6" => SweepSpec { noise: Some(NoiseSpec::new(0.2, Jump::Dephasing)), ..electron_grid(ModelKind::BipartiteNoisy) },
            "7" => SweepSpec { noise: Some(NoiseSpec::new(0.2, Jump::Dissipation)), ..electron_grid(ModelKind::BipartiteNoisy) },
            _ => return None,
        };
        Some(spec)
    }
}

pub const FIGURE_IDS: [&str; 12] = ["1a", "1b", "2", "3a", "3b", "3c", "3d", "4a", "4b", "5", "6", "7"];
