//! Electron spin driven at Rabi frequency Ω₁ and coupled to a nuclear spin:
//! `H_I(ω_l) = (Ω₁/2) σ_x + (ω_l/2) I_z + g σ_z I_x`, estimating the nuclear Larmor
//! frequency ω_l.
//!
//! In the basis `|e^e g^n⟩, |e^e e^n⟩, |g^e g^n⟩, |g^e e^n⟩` the Hamiltonian reads
//!
//! ```text
//! [ -a   g   b   0 ]
//! [  g   a   0   b ]      a = ω_l/2, b = Ω₁/2
//! [  b   0  -a  -g ]
//! [  0   b  -g   a ]
//! ```
//!
//! and is diagonalized in closed form by the mixing angles θ±, φ± with
//! `tan θ± = g / (α ± √(α² + g²))`, `tan φ± = g / (β ± √(β² + g²))`,
//! `α = (ω_l - Ω₁)/2`, `β = (ω_l + Ω₁)/2`.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4};

use serde::{Deserialize, Serialize};

use super::{is_quarter_pi, UnitaryFamily};
use crate::error::{Error, Result};
use crate::estimation::{Observable, ParamFamily, QubitCoeffs};
use crate::linalg::{kron, kron_vec, pauli, CMatrix, Keep, C64};

/// The electron is the first tensor factor.
pub const ELECTRON: Keep = Keep::A;
/// The nucleus is the second tensor factor.
pub const NUCLEUS: Keep = Keep::B;
pub const DIMS: (usize, usize) = (2, 2);

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BipartiteParams {
    pub omega_l: f64,
    pub rabi: f64,
    pub coupling: f64,
    pub phi1: f64,
    pub phi2: f64,
    pub t: f64,
}

impl BipartiteParams {
    /// `ω_l = 2`, `Ω₁ = 3`, `g = 2`, `φ₁ = φ₂ = π/4`.
    pub fn reference(t: f64) -> Self {
        Self { omega_l: 2.0, rabi: 3.0, coupling: 2.0, phi1: FRAC_PI_4, phi2: FRAC_PI_4, t }
    }

    pub fn family(&self) -> Bipartite {
        Bipartite { rabi: self.rabi, coupling: self.coupling, phi1: self.phi1, phi2: self.phi2 }
    }
}

/// The nucleus-electron state family in ω_l.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Bipartite {
    pub rabi: f64,
    pub coupling: f64,
    /// Nuclear initial angle.
    pub phi1: f64,
    /// Electronic initial angle.
    pub phi2: f64,
}

/// Nuclear Pauli operators in the nucleus ordering `(|g⟩, |e⟩)`.
pub fn nucleus_paulis() -> [CMatrix; 3] {
    [pauli::x(), -pauli::y(), -pauli::z()]
}

pub fn electron_paulis() -> [CMatrix; 3] {
    [pauli::x(), pauli::y(), pauli::z()]
}

/// `𝕀^n ⊗ A^e`
pub fn electron_observable(coeffs: QubitCoeffs) -> Observable {
    Observable::bipartite(Some(coeffs), None, &electron_paulis(), &nucleus_paulis())
}

/// `A^n ⊗ 𝕀^e`
pub fn nucleus_observable(coeffs: QubitCoeffs) -> Observable {
    Observable::bipartite(None, Some(coeffs), &electron_paulis(), &nucleus_paulis())
}

/// `A^n ⊗ A^e`
pub fn joint_observable(nucleus: QubitCoeffs, electron: QubitCoeffs) -> Observable {
    Observable::bipartite(Some(electron), Some(nucleus), &electron_paulis(), &nucleus_paulis())
}

/// Closed-form spectrum of the Hamiltonian and the ω_l-derivatives of its pieces.
#[derive(Clone, Copy, Debug)]
pub struct CoupledSpectrum {
    pub alpha: f64,
    pub beta: f64,
    pub theta_plus: f64,
    pub theta_minus: f64,
    pub varphi_plus: f64,
    pub varphi_minus: f64,
    /// `E₁ = -√(α²+g²)`, `E₂ = -√(β²+g²)`, `E₃ = -E₁`, `E₄ = -E₂`.
    pub energies: [f64; 4],
    d_energies: [f64; 4],
    d_theta: f64,
    d_varphi: f64,
}

/// Mixing angles `(θ+, θ-)` for `tan θ± = g / (x ± √(x² + g²))`, with the
/// decoupled `g = 0` limit taken by continuity.
fn mixing_angles(x: f64, g: f64) -> (f64, f64) {
    if g == 0.0 {
        return if x > 0.0 { (0.0, -FRAC_PI_2) } else { (FRAC_PI_2, 0.0) };
    }
    let r = x.hypot(g);
    ((g / (x + r)).atan(), (g / (x - r)).atan())
}

impl CoupledSpectrum {
    pub fn new(omega_l: f64, rabi: f64, g: f64) -> Result<Self> {
        let alpha = 0.5 * (omega_l - rabi);
        let beta = 0.5 * (omega_l + rabi);
        let ra = alpha.hypot(g);
        let rb = beta.hypot(g);
        if ra == 0.0 || rb == 0.0 {
            return Err(Error::InvalidState(format!(
                "degenerate coupled spectrum (alpha = {alpha}, beta = {beta}, g = {g})"
            )));
        }
        let (theta_plus, theta_minus) = mixing_angles(alpha, g);
        let (varphi_plus, varphi_minus) = mixing_angles(beta, g);
        // dα/dω_l = dβ/dω_l = 1/2 and d(2θ±)/dα = -g/(α² + g²)
        let d_theta = -g / (4.0 * ra * ra);
        let d_varphi = -g / (4.0 * rb * rb);
        let d_ra = alpha / (2.0 * ra);
        let d_rb = beta / (2.0 * rb);
        Ok(Self {
            alpha,
            beta,
            theta_plus,
            theta_minus,
            varphi_plus,
            varphi_minus,
            energies: [-ra, -rb, ra, rb],
            d_energies: [-d_ra, -d_rb, d_ra, d_rb],
            d_theta,
            d_varphi,
        })
    }

    /// `|E_k⟩` for `k = 0..4` (E₁..E₄).
    pub fn eigenvector(&self, k: usize) -> [f64; 4] {
        eigvec_shape(k, self.angle(k))
    }

    fn angle(&self, k: usize) -> f64 {
        [self.theta_plus, self.varphi_plus, self.theta_minus, self.varphi_minus][k]
    }

    fn d_angle(&self, k: usize) -> f64 {
        if k.is_multiple_of(2) { self.d_theta } else { self.d_varphi }
    }

    fn d_eigenvector(&self, k: usize) -> [f64; 4] {
        let ang = self.angle(k);
        let d = eigvec_shape(k, ang + FRAC_PI_2);
        d.map(|x| x * self.d_angle(k))
    }

    /// Overlap of the `π/4, π/4` initial state with `|E_k⟩`, without the `1/√2`.
    fn weight(&self, k: usize) -> (f64, f64) {
        let ang = self.angle(k);
        let dang = self.d_angle(k);
        if k.is_multiple_of(2) {
            (ang.cos(), -ang.sin() * dang)
        } else {
            (ang.sin(), ang.cos() * dang)
        }
    }

    /// `|Φ(ω_l)⟩` at time t and its ω_l-derivative, for `φ₁ = φ₂ = π/4`.
    pub fn evolved(&self, t: f64) -> ([C64; 4], [C64; 4]) {
        let mut psi = [C64::new(0.0, 0.0); 4];
        let mut dpsi = [C64::new(0.0, 0.0); 4];
        for k in 0..4 {
            let phase = C64::from_polar(FRAC_1_SQRT_2, -self.energies[k] * t);
            let dphase = phase * C64::new(0.0, -self.d_energies[k] * t);
            let (w, dw) = self.weight(k);
            let v = self.eigenvector(k);
            let dv = self.d_eigenvector(k);
            for j in 0..4 {
                psi[j] += phase * w * v[j];
                dpsi[j] += dphase * w * v[j] + phase * (dw * v[j] + w * dv[j]);
            }
        }
        (psi, dpsi)
    }
}

/// `|E₁⟩, |E₃⟩ ∝ (cos, -sin, cos, sin)`, `|E₂⟩, |E₄⟩ ∝ (-cos, sin, cos, sin)`.
fn eigvec_shape(k: usize, angle: f64) -> [f64; 4] {
    let (s, c) = angle.sin_cos();
    let h = FRAC_1_SQRT_2;
    if k.is_multiple_of(2) {
        [h * c, -h * s, h * c, h * s]
    } else {
        [-h * c, h * s, h * c, h * s]
    }
}

impl Bipartite {
    pub fn hamiltonian(&self, omega_l: f64) -> CMatrix {
        let [nx, _, nz] = nucleus_paulis();
        let id = CMatrix::identity(2);
        kron(&pauli::x(), &id) * (0.5 * self.rabi)
            + kron(&id, &nz) * (0.5 * omega_l)
            + kron(&pauli::z(), &nx) * self.coupling
    }

    /// `∂H/∂ω_l = I_z/2`, independent of ω_l.
    pub fn generator(&self) -> CMatrix {
        let [_, _, nz] = nucleus_paulis();
        kron(&CMatrix::identity(2), &nz) * 0.5
    }

    pub fn initial_vector(&self) -> Vec<C64> {
        let electron = [C64::new(self.phi2.sin(), 0.0), C64::new(self.phi2.cos(), 0.0)];
        let nucleus = [C64::new(self.phi1.cos(), 0.0), C64::new(self.phi1.sin(), 0.0)];
        kron_vec(&electron, &nucleus)
    }

    pub fn initial_state(&self) -> CMatrix {
        CMatrix::pure_state(&self.initial_vector())
    }

    pub fn generic(&self) -> UnitaryFamily {
        UnitaryFamily { base: self.hamiltonian(0.0), generator: self.generator(), initial: self.initial_state() }
    }

    pub fn uses_closed_form(&self) -> bool {
        is_quarter_pi(self.phi1) && is_quarter_pi(self.phi2)
    }

    /// State vector and its derivative: closed form at `φ₁ = φ₂ = π/4`, otherwise
    /// evolved through the generic path.
    pub fn state_vector(&self, omega_l: f64, t: f64) -> Result<(Vec<C64>, Vec<C64>)> {
        if self.uses_closed_form() {
            let (psi, dpsi) = CoupledSpectrum::new(omega_l, self.rabi, self.coupling)?.evolved(t);
            return Ok((psi.to_vec(), dpsi.to_vec()));
        }
        let fam = self.generic();
        let (u, du) = crate::linalg::unitary_with_derivative(&fam.hamiltonian(omega_l), &fam.generator, t)?;
        let psi0 = self.initial_vector();
        Ok((u.mul_vec(&psi0), du.mul_vec(&psi0)))
    }
}

impl ParamFamily for Bipartite {
    fn dim(&self) -> usize {
        4
    }

    fn state(&self, theta: f64, t: f64) -> Result<CMatrix> {
        Ok(self.state_and_derivative(theta, t)?.0)
    }

    fn derivative(&self, theta: f64, t: f64) -> Result<CMatrix> {
        Ok(self.state_and_derivative(theta, t)?.1)
    }

    fn state_and_derivative(&self, theta: f64, t: f64) -> Result<(CMatrix, CMatrix)> {
        let (psi, dpsi) = self.state_vector(theta, t)?;
        let rho = CMatrix::pure_state(&psi).hermitian_part();
        let cross = CMatrix::outer(&dpsi, &psi);
        let drho = (&cross + &cross.dagger()).hermitian_part();
        Ok((rho, drho))
    }
}

/// The density matrix and its state vector for one parameter point.
pub fn bipartite_state(p: &BipartiteParams) -> Result<(CMatrix, Vec<C64>)> {
    let (psi, _) = p.family().state_vector(p.omega_l, p.t)?;
    Ok((CMatrix::pure_state(&psi), psi))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::central_difference;
    use crate::linalg::{eig_hermitian, evolve_unitary, partial_trace};

    #[test]
    fn hamiltonian_matches_basis_layout() {
        let (a, b, g) = (1.0, 1.5, 2.0);
        #[rustfmt::skip]
        let expected = CMatrix::from_real(4, &[
            -a,  g,  b, 0.0,
             g,  a, 0.0,  b,
             b, 0.0, -a, -g,
            0.0,  b, -g,  a,
        ]);
        let h = BipartiteParams::reference(0.0).family().hamiltonian(2.0);
        assert!(h.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn closed_form_spectrum() {
        let sp = CoupledSpectrum::new(2.0, 3.0, 2.0).unwrap();
        let expected = [-(10.25f64.sqrt()), -(4.25f64.sqrt()), 4.25f64.sqrt(), 10.25f64.sqrt()];
        let mut e = sp.energies;
        e.sort_by(f64::total_cmp);
        for (x, y) in e.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-14);
        }
        let eig = eig_hermitian(&BipartiteParams::reference(0.0).family().hamiltonian(2.0)).unwrap();
        for (x, y) in eig.values.iter().zip(&expected) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!((sp.theta_plus.cos() * sp.theta_minus.cos() + sp.theta_plus.sin() * sp.theta_minus.sin()).abs() < 1e-12);
        assert!((sp.varphi_plus.cos() * sp.varphi_minus.cos() + sp.varphi_plus.sin() * sp.varphi_minus.sin()).abs() < 1e-12);
    }

    #[test]
    fn time_zero_amplitudes_are_half() {
        let (_, psi) = bipartite_state(&BipartiteParams::reference(0.0)).unwrap();
        for z in psi {
            assert!((z - C64::new(0.5, 0.0)).norm() < 1e-15);
        }
    }

    #[test]
    fn closed_form_matches_generic() {
        let p = BipartiteParams::reference(2.0);
        let (rho, psi) = bipartite_state(&p).unwrap();
        let norm: f64 = psi.iter().map(|z| z.norm_sqr()).sum();
        assert!((norm - 1.0).abs() < 1e-12);
        let fam = p.family();
        let generic = evolve_unitary(&fam.hamiltonian(p.omega_l), &fam.initial_state(), p.t).unwrap();
        assert!(rho.max_abs_diff(&generic) < 1e-10);
    }

    #[test]
    fn closed_form_derivative_matches_finite_difference() {
        let fam = BipartiteParams::reference(0.0).family();
        for &(w, t) in &[(2.0, 2.0), (0.4, 5.0), (3.7, 0.9)] {
            let exact = fam.derivative(w, t).unwrap();
            let fd = central_difference(|x| fam.state(x, t), w).unwrap();
            assert!(exact.max_abs_diff(&fd) < 1e-8, "w={w} t={t}");
        }
    }

    #[test]
    fn decoupled_limit_routes_by_continuity() {
        let fam = Bipartite { coupling: 0.0, ..BipartiteParams::reference(0.0).family() };
        for &w in &[2.0, 5.0] {
            let (rho, _) = fam.state_and_derivative(w, 1.3).unwrap();
            let generic = fam.generic().state(w, 1.3).unwrap();
            assert!(rho.max_abs_diff(&generic) < 1e-10, "w={w}");
        }
    }

    #[test]
    fn generator_is_half_nuclear_z() {
        let fam = BipartiteParams::reference(0.0).family();
        let diff = fam.hamiltonian(3.0) - fam.hamiltonian(1.0);
        assert!((diff * 0.5).max_abs_diff(&fam.generator()) < 1e-15);
    }

    #[test]
    fn marginal_at_time_zero_is_initial_nucleus() {
        let (rho, _) = bipartite_state(&BipartiteParams::reference(0.0)).unwrap();
        let nucleus = partial_trace(&rho, DIMS, NUCLEUS).unwrap();
        assert!(nucleus.max_abs_diff(&CMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5])) < 1e-15);
    }
}
