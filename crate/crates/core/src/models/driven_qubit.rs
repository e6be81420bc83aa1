//! Driven qubit `H(ω_a) = (ω_a/2) σ_z + F σ_x`, estimating the transition frequency ω_a.
//!
//! Writing `λ = √(4F² + ω_a²)` and `ϑ = atan2(ω_a, 2F)`, the Hamiltonian is
//! `(λ/2)(sin ϑ σ_z + cos ϑ σ_x)`. Starting from `|φ⟩` with `φ = π/4` the evolved
//! state is `½[[1 + ξ, ζ], [ζ*, 1 - ξ]]` with
//! `ξ = (1 - cos λt) cos ϑ sin ϑ` and `ζ = cos²ϑ + sin ϑ (sin ϑ cos λt - i sin λt)`.

use std::f64::consts::FRAC_PI_4;

use serde::{Deserialize, Serialize};

use super::{is_quarter_pi, UnitaryFamily};
use crate::error::{Error, Result};
use crate::estimation::{CoeffRecord, Observable, ParamFamily};
use crate::linalg::{pauli, CMatrix, C64};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct DrivenQubitParams {
    pub omega_a: f64,
    pub drive: f64,
    pub phi: f64,
    pub t: f64,
}

impl DrivenQubitParams {
    /// `ω_a = 2`, `F = 1`, `φ = π/4`.
    pub fn reference(t: f64) -> Self {
        Self { omega_a: 2.0, drive: 1.0, phi: FRAC_PI_4, t }
    }

    pub fn family(&self) -> DrivenQubit {
        DrivenQubit { drive: self.drive, phi: self.phi }
    }
}

/// The driven-qubit state family in ω_a.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DrivenQubit {
    pub drive: f64,
    pub phi: f64,
}

/// `ξ`, `ζ` and their ω_a-derivatives.
#[derive(Clone, Copy, Debug)]
pub struct BlochTerms {
    pub xi: f64,
    pub zeta: C64,
    pub dxi: f64,
    pub dzeta: C64,
}

impl BlochTerms {
    pub fn compute(omega: f64, drive: f64, t: f64) -> Option<Self> {
        let lambda = (4.0 * drive * drive + omega * omega).sqrt();
        if lambda == 0.0 {
            return None;
        }
        let angle = omega.atan2(2.0 * drive);
        let (sin, cos) = angle.sin_cos();
        let (sin_lt, cos_lt) = (lambda * t).sin_cos();

        let xi = (1.0 - cos_lt) * cos * sin;
        let zeta = C64::new(cos * cos + sin * sin * cos_lt, -sin * sin_lt);

        // dϑ/dω = cos ϑ / λ and dλ/dω = sin ϑ
        let d_re = -2.0 * xi * cos / lambda - t * sin.powi(3) * sin_lt;
        let d_im = -cos * cos * sin_lt / lambda - t * sin * sin * cos_lt;
        let dxi = (1.0 - cos_lt) * (2.0 * angle).cos() * cos / lambda + t * sin * sin * cos * sin_lt;

        Some(Self { xi, zeta, dxi, dzeta: C64::new(d_re, d_im) })
    }

    pub fn state(&self) -> CMatrix {
        half_bloch_matrix(self.xi, self.zeta, 1.0)
    }

    pub fn derivative(&self) -> CMatrix {
        half_bloch_matrix(self.dxi, self.dzeta, 0.0)
    }

    /// Bloch vector `(Re ζ, -Im ζ, ξ)`.
    pub fn bloch(&self) -> [f64; 3] {
        [self.zeta.re, -self.zeta.im, self.xi]
    }

    pub fn dbloch(&self) -> [f64; 3] {
        [self.dzeta.re, -self.dzeta.im, self.dxi]
    }
}

/// `½[[d + ξ, ζ], [ζ*, d - ξ]]`
fn half_bloch_matrix(xi: f64, zeta: C64, diag: f64) -> CMatrix {
    CMatrix::from_vec(2, vec![
        C64::new(0.5 * (diag + xi), 0.0),
        zeta * 0.5,
        zeta.conj() * 0.5,
        C64::new(0.5 * (diag - xi), 0.0),
    ])
    .expect("2x2")
}

impl DrivenQubit {
    pub fn hamiltonian(&self, omega: f64) -> CMatrix {
        pauli::z() * (0.5 * omega) + pauli::x() * self.drive
    }

    /// `cos φ|g⟩ + sin φ|e⟩`
    pub fn initial_vector(&self) -> [C64; 2] {
        [C64::new(self.phi.sin(), 0.0), C64::new(self.phi.cos(), 0.0)]
    }

    /// Evolution through the generic eigendecomposition path.
    pub fn generic(&self) -> UnitaryFamily {
        UnitaryFamily {
            base: pauli::x() * self.drive,
            generator: pauli::z() * 0.5,
            initial: CMatrix::pure_state(&self.initial_vector()),
        }
    }

    /// Closed-form terms, available only for `φ = π/4` and `λ > 0`.
    pub fn closed_form(&self, omega: f64, t: f64) -> Option<BlochTerms> {
        if !is_quarter_pi(self.phi) {
            return None;
        }
        BlochTerms::compute(omega, self.drive, t)
    }

    /// Mean, spread and slope of `A = s·I + a·σ` from the Bloch vector.
    pub fn moments(&self, observable: &Observable, omega: f64, t: f64) -> Result<QubitMoments> {
        let Some(CoeffRecord::Qubit(c)) = observable.coeffs() else {
            return Err(Error::MissingCoefficients);
        };
        let (r, dr) = match self.closed_form(omega, t) {
            Some(terms) => (terms.bloch(), terms.dbloch()),
            None => {
                let (rho, drho) = self.generic().state_and_derivative(omega, t)?;
                (bloch_of(&rho), bloch_of(&drho))
            }
        };
        let a = [c.x, c.y, c.z];
        let dot = |u: &[f64; 3]| a.iter().zip(u).map(|(x, y)| x * y).sum::<f64>();
        let norm2 = dot(&a);
        let projected = dot(&r);
        Ok(QubitMoments {
            mean: c.s + projected,
            spread: norm2 - projected * projected,
            slope: dot(&dr),
        })
    }
}

/// `(2 Re ρ01, -2 Im ρ01, ρ00 - ρ11)`; linear, so it also maps `∂ρ` to `∂r`.
fn bloch_of(m: &CMatrix) -> [f64; 3] {
    [2.0 * m[(0, 1)].re, -2.0 * m[(0, 1)].im, (m[(0, 0)] - m[(1, 1)]).re]
}

/// `⟨A⟩`, `⟨(ΔA)²⟩` and `∂⟨A⟩/∂ω_a` for a qubit observable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QubitMoments {
    pub mean: f64,
    pub spread: f64,
    pub slope: f64,
}

impl ParamFamily for DrivenQubit {
    fn dim(&self) -> usize {
        2
    }

    fn state(&self, theta: f64, t: f64) -> Result<CMatrix> {
        match self.closed_form(theta, t) {
            Some(terms) => Ok(terms.state()),
            None => self.generic().state(theta, t),
        }
    }

    fn derivative(&self, theta: f64, t: f64) -> Result<CMatrix> {
        Ok(self.state_and_derivative(theta, t)?.1)
    }

    fn state_and_derivative(&self, theta: f64, t: f64) -> Result<(CMatrix, CMatrix)> {
        match self.closed_form(theta, t) {
            Some(terms) => Ok((terms.state(), terms.derivative())),
            None => self.generic().state_and_derivative(theta, t),
        }
    }
}

/// The closed-form state for the given parameters, falling back to generic
/// evolution away from `φ = π/4`.
pub fn driven_qubit_state(p: &DrivenQubitParams) -> Result<CMatrix> {
    p.family().state(p.omega_a, p.t)
}

/// `∂ρ/∂ω_a` for the given parameters.
pub fn driven_qubit_dstate(p: &DrivenQubitParams) -> Result<CMatrix> {
    p.family().derivative(p.omega_a, p.t)
}

pub fn driven_qubit_mean_and_derivative(observable: &Observable, p: &DrivenQubitParams) -> Result<QubitMoments> {
    p.family().moments(observable, p.omega_a, p.t)
}
