//! Markovian evolution `ρ̇ = -i[H, ρ] + (κ/2)(2MρM† - ρM†M - M†Mρ)`, integrated
//! with classical fourth-order Runge-Kutta.

use serde::{Deserialize, Serialize};

use super::bipartite::Bipartite;
use crate::error::{Error, Result};
use crate::estimation::ParamFamily;
use crate::linalg::{kron, pauli, CMatrix, C64};

pub const DEFAULT_DT: f64 = 1e-3;
const TRACE_DRIFT_TOL: f64 = 1e-6;
const PURITY_TOL: f64 = 1e-6;

/// Jump operator, acting on the electron factor of a bipartite system.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Jump {
    /// `M = σ_x`
    Dephasing,
    /// `M = σ₋`
    Dissipation,
}

impl Jump {
    pub fn single(&self) -> CMatrix {
        match self {
            Jump::Dephasing => pauli::x(),
            Jump::Dissipation => pauli::lower(),
        }
    }

    /// The jump operator on a `dim`-dimensional space: bare for a qubit, and
    /// `M ⊗ 𝕀` for the nucleus-electron pair.
    pub fn operator(&self, dim: usize) -> Result<CMatrix> {
        match dim {
            2 => Ok(self.single()),
            4 => Ok(kron(&self.single(), &CMatrix::identity(2))),
            _ => Err(Error::DimensionMismatch(format!("no jump embedding for dimension {dim}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    pub kappa: f64,
    pub jump: Jump,
    #[serde(default = "default_dt")]
    pub dt: f64,
}

fn default_dt() -> f64 {
    DEFAULT_DT
}

impl NoiseSpec {
    pub fn new(kappa: f64, jump: Jump) -> Self {
        Self { kappa, jump, dt: DEFAULT_DT }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.kappa >= 0.0 && self.kappa.is_finite()) {
            return Err(Error::InvalidSpec(format!("kappa must be >= 0, got {}", self.kappa)));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidSpec(format!("dt must be > 0, got {}", self.dt)));
        }
        Ok(())
    }
}

/// The Lindblad generator for a fixed `H`, `M` and `κ`.
#[derive(Clone, Debug)]
pub struct Liouvillian {
    h: CMatrix,
    m: CMatrix,
    md: CMatrix,
    mdm: CMatrix,
    kappa: f64,
}

impl Liouvillian {
    pub fn new(h: &CMatrix, m: &CMatrix, kappa: f64) -> Result<Self> {
        h.ensure_hermitian()?;
        if m.dim() != h.dim() {
            return Err(Error::DimensionMismatch(format!(
                "jump operator is {}x{}, Hamiltonian is {}x{}",
                m.dim(),
                m.dim(),
                h.dim(),
                h.dim()
            )));
        }
        let md = m.dagger();
        let mdm = md.matmul(m);
        Ok(Self { h: h.clone(), m: m.clone(), md, mdm, kappa })
    }

    /// `-i[H, ρ]`
    fn hamiltonian_part(h: &CMatrix, rho: &CMatrix) -> CMatrix {
        (h.matmul(rho) - rho.matmul(h)) * C64::new(0.0, -1.0)
    }

    /// `(κ/2)(2MρM† - ρM†M - M†Mρ)`
    fn dissipator(&self, rho: &CMatrix) -> CMatrix {
        if self.kappa == 0.0 {
            return CMatrix::zeros(rho.dim());
        }
        let jump = self.m.matmul(rho).matmul(&self.md) * 2.0;
        (jump - rho.matmul(&self.mdm) - self.mdm.matmul(rho)) * (0.5 * self.kappa)
    }

    pub fn apply(&self, rho: &CMatrix) -> CMatrix {
        Self::hamiltonian_part(&self.h, rho) + self.dissipator(rho)
    }
}

fn rk4_step<S>(state: &S, dt: f64, f: impl Fn(&S) -> S, axpy: impl Fn(&S, f64, &S) -> S, combine: impl Fn(&S, [&S; 4], f64) -> S) -> S {
    let k1 = f(state);
    let k2 = f(&axpy(state, 0.5 * dt, &k1));
    let k3 = f(&axpy(state, 0.5 * dt, &k2));
    let k4 = f(&axpy(state, dt, &k3));
    combine(state, [&k1, &k2, &k3, &k4], dt)
}

fn step_count(t: f64, dt: f64) -> Result<usize> {
    if !(t >= 0.0 && t.is_finite()) {
        return Err(Error::InvalidSpec(format!("evolution time must be finite and >= 0, got {t}")));
    }
    Ok((t / dt).ceil() as usize)
}

fn check_health(rho: &CMatrix, trace0: f64) -> Result<()> {
    if !rho.is_finite() {
        return Err(Error::StepTooLarge("state became non-finite".into()));
    }
    let drift = (rho.trace().re - trace0).abs();
    if drift > TRACE_DRIFT_TOL {
        return Err(Error::StepTooLarge(format!("trace drifted by {drift:.3e}")));
    }
    let purity = rho.trace_product(rho).re;
    if purity > 1.0 + PURITY_TOL {
        return Err(Error::StepTooLarge(format!("purity grew to {purity:.9}")));
    }
    Ok(())
}

fn combine(state: &CMatrix, k: [&CMatrix; 4], dt: f64) -> CMatrix {
    let mut incr = k[0] + k[3];
    incr += &((k[1] + k[2]) * 2.0);
    (state + &(incr * (dt / 6.0))).hermitian_part()
}

/// Evolve with an explicit jump operator `m`.
pub fn lindblad_evolve_with(h: &CMatrix, rho0: &CMatrix, m: &CMatrix, kappa: f64, dt: f64, t: f64) -> Result<CMatrix> {
    crate::estimation::validate_state(rho0)?;
    let gen = Liouvillian::new(h, m, kappa)?;
    let n = step_count(t, dt)?;
    let mut rho = rho0.hermitian_part();
    if n == 0 {
        return Ok(rho);
    }
    let step = t / n as f64;
    let trace0 = rho.trace().re;
    for _ in 0..n {
        rho = rk4_step(&rho, step, |r| gen.apply(r), |a, s, b| a + &(b * s), combine);
        check_health(&rho, trace0)?;
    }
    Ok(rho)
}

/// Evolve `ρ0` under `H` and the noise channel for time `t`.
pub fn lindblad_evolve(h: &CMatrix, rho0: &CMatrix, noise: &NoiseSpec, t: f64) -> Result<CMatrix> {
    noise.validate()?;
    let m = noise.jump.operator(h.dim())?;
    lindblad_evolve_with(h, rho0, &m, noise.kappa, noise.dt, t)
}

/// The nucleus-electron family under noise. `∂ρ/∂ω_l` comes from integrating
/// `σ̇ = -i[H, σ] - i[∂H/∂ω_l, ρ] + 𝒟(σ)` with `σ(0) = 0` alongside `ρ`.
#[derive(Clone, Copy, Debug)]
pub struct LindbladFamily {
    pub system: Bipartite,
    pub noise: NoiseSpec,
}

impl LindbladFamily {
    pub fn new(system: Bipartite, noise: NoiseSpec) -> Self {
        Self { system, noise }
    }
}

impl ParamFamily for LindbladFamily {
    fn dim(&self) -> usize {
        4
    }

    fn state(&self, theta: f64, t: f64) -> Result<CMatrix> {
        lindblad_evolve(&self.system.hamiltonian(theta), &self.system.initial_state(), &self.noise, t)
    }

    fn derivative(&self, theta: f64, t: f64) -> Result<CMatrix> {
        Ok(self.state_and_derivative(theta, t)?.1)
    }

    fn state_and_derivative(&self, theta: f64, t: f64) -> Result<(CMatrix, CMatrix)> {
        self.noise.validate()?;
        let h = self.system.hamiltonian(theta);
        let g = self.system.generator();
        let m = self.noise.jump.operator(4)?;
        let gen = Liouvillian::new(&h, &m, self.noise.kappa)?;
        let n = step_count(t, self.noise.dt)?;
        let mut pair = (self.system.initial_state(), CMatrix::zeros(4));
        if n == 0 {
            return Ok(pair);
        }
        let step = t / n as f64;
        let rhs = |(rho, sigma): &(CMatrix, CMatrix)| {
            (gen.apply(rho), gen.apply(sigma) + Liouvillian::hamiltonian_part(&g, rho))
        };
        let axpy = |(a0, a1): &(CMatrix, CMatrix), s: f64, (b0, b1): &(CMatrix, CMatrix)| (a0 + &(b0 * s), a1 + &(b1 * s));
        let comb = |(s0, s1): &(CMatrix, CMatrix), k: [&(CMatrix, CMatrix); 4], dt: f64| {
            (combine(s0, [&k[0].0, &k[1].0, &k[2].0, &k[3].0], dt), combine(s1, [&k[0].1, &k[1].1, &k[2].1, &k[3].1], dt))
        };
        for _ in 0..n {
            pair = rk4_step(&pair, step, rhs, axpy, comb);
            check_health(&pair.0, 1.0)?;
            if !pair.1.is_finite() {
                return Err(Error::StepTooLarge("derivative became non-finite".into()));
            }
        }
        Ok(pair)
    }
}
