//! State families for the driven qubit, the coupled nucleus-electron pair and its
//! open-system (Lindblad) version.
//!
//! Basis conventions: a qubit is ordered `(|e⟩, |g⟩)` so that `σ_z = diag(1, -1)`
//! and `|φ⟩ = cos φ|g⟩ + sin φ|e⟩ = (sin φ, cos φ)`. The bipartite space is ordered
//! `|e^e g^n⟩, |e^e e^n⟩, |g^e g^n⟩, |g^e e^n⟩`, i.e. electron ⊗ nucleus with the
//! nucleus factor ordered `(|g⟩, |e⟩)`.

pub mod bipartite;
pub mod driven_qubit;
pub mod lindblad;

pub use bipartite::{Bipartite, BipartiteParams, CoupledSpectrum};
pub use driven_qubit::{DrivenQubit, DrivenQubitParams, QubitMoments};
pub use lindblad::{lindblad_evolve, Jump, LindbladFamily, NoiseSpec, DEFAULT_DT};

use crate::error::Result;
use crate::estimation::ParamFamily;
use crate::linalg::{evolve_unitary, unitary_with_derivative, CMatrix};

/// `ρ(θ) = U ρ0 U†` with `U = exp(-i(H0 + θG)t)`.
///
/// The θ-derivative is exact: it uses the Fréchet derivative of the matrix
/// exponential rather than a finite difference.
#[derive(Clone, Debug)]
pub struct UnitaryFamily {
    pub base: CMatrix,
    pub generator: CMatrix,
    pub initial: CMatrix,
}

impl UnitaryFamily {
    pub fn hamiltonian(&self, theta: f64) -> CMatrix {
        &self.base + &(&self.generator * theta)
    }
}

impl ParamFamily for UnitaryFamily {
    fn dim(&self) -> usize {
        self.initial.dim()
    }

    fn state(&self, theta: f64, t: f64) -> Result<CMatrix> {
        evolve_unitary(&self.hamiltonian(theta), &self.initial, t)
    }

    fn derivative(&self, theta: f64, t: f64) -> Result<CMatrix> {
        Ok(self.state_and_derivative(theta, t)?.1)
    }

    fn state_and_derivative(&self, theta: f64, t: f64) -> Result<(CMatrix, CMatrix)> {
        let (u, du) = unitary_with_derivative(&self.hamiltonian(theta), &self.generator, t)?;
        let ud = u.dagger();
        let rho = u.matmul(&self.initial).matmul(&ud).hermitian_part();
        let half = du.matmul(&self.initial).matmul(&ud);
        let drho = (&half + &half.dagger()).hermitian_part();
        Ok((rho, drho))
    }
}

fn is_quarter_pi(angle: f64) -> bool {
    (angle - std::f64::consts::FRAC_PI_4).abs() < 1e-15
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::estimation::central_difference;
    use crate::linalg::pauli;

    #[test]
    fn exact_derivative_matches_finite_difference() {
        let fam = UnitaryFamily {
            base: pauli::x() * 0.9,
            generator: pauli::z() * 0.5,
            initial: CMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]),
        };
        let (_, exact) = fam.state_and_derivative(1.7, 2.3).unwrap();
        let fd = central_difference(|x| fam.state(x, 2.3), 1.7).unwrap();
        assert!(exact.max_abs_diff(&fd) < 1e-8);
        assert!(exact.trace().norm() < 1e-14);
    }
}
