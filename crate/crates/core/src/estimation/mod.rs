//! Estimation-theoretic quantities for a one-parameter family of states:
//! symmetric logarithmic derivative, quantum and classical Fisher information,
//! error-propagation variance, the precision gap Λ and the commutant distance D.

mod commutant;
mod observable;

pub use commutant::{commutant_basis, min_distance, pinch};
pub use observable::{CoeffRecord, Observable, QubitCoeffs};

use serde::Serialize;

use crate::error::{Error, Result};
use crate::linalg::{
    anticommutator, commutator, eig_hermitian, partial_trace, CMatrix, EigenSystem, Keep, C64,
    CLUSTER_TOL,
};

/// Pairs of density-matrix eigenvalues summing below this are left out of the SLD.
pub const SUPPORT_TOL: f64 = 1e-12;
/// Below this `|∂⟨A⟩/∂θ|` the observable carries no information.
pub const DIVERGENCE_TOL: f64 = 1e-12;
/// Λ below this counts as saturating the bound.
pub const SATURATION_TOL: f64 = 1e-9;
/// Allowed `|variance(A_opt) - 1/F_Q|` for a reference observable.
pub const REFERENCE_TOL: f64 = 1e-8;

const STATE_TRACE_TOL: f64 = 1e-8;
const STATE_EIGEN_TOL: f64 = 1e-10;
const DERIVATIVE_TRACE_TOL: f64 = 1e-8;

/// A state that depends smoothly on one real parameter θ and on time.
pub trait ParamFamily: Sync {
    fn dim(&self) -> usize;

    fn state(&self, theta: f64, t: f64) -> Result<CMatrix>;

    /// `∂ρ/∂θ`. Defaults to a Hermitian-symmetrized central difference with step
    /// `1e-6 · max(1, |θ|)`.
    fn derivative(&self, theta: f64, t: f64) -> Result<CMatrix> {
        central_difference(|x| self.state(x, t), theta)
    }

    fn state_and_derivative(&self, theta: f64, t: f64) -> Result<(CMatrix, CMatrix)> {
        Ok((self.state(theta, t)?, self.derivative(theta, t)?))
    }
}

impl<F: ParamFamily + ?Sized> ParamFamily for &F {
    fn dim(&self) -> usize {
        (**self).dim()
    }

    fn state(&self, theta: f64, t: f64) -> Result<CMatrix> {
        (**self).state(theta, t)
    }

    fn derivative(&self, theta: f64, t: f64) -> Result<CMatrix> {
        (**self).derivative(theta, t)
    }

    fn state_and_derivative(&self, theta: f64, t: f64) -> Result<(CMatrix, CMatrix)> {
        (**self).state_and_derivative(theta, t)
    }
}

pub fn central_difference(
    state: impl Fn(f64) -> Result<CMatrix>,
    theta: f64,
) -> Result<CMatrix> {
    let h = 1e-6 * theta.abs().max(1.0);
    let plus = state(theta + h)?;
    let minus = state(theta - h)?;
    Ok(((plus - minus) * (0.5 / h)).hermitian_part())
}

/// Checks the density-matrix invariants: Hermitian, unit trace, positive semidefinite.
pub fn validate_state(rho: &CMatrix) -> Result<EigenSystem> {
    if !rho.is_finite() {
        return Err(Error::InvalidState("non-finite entries".into()));
    }
    let eig = eig_hermitian(rho)?;
    let tr = rho.trace();
    if (tr - C64::new(1.0, 0.0)).norm() > STATE_TRACE_TOL {
        return Err(Error::InvalidState(format!("trace {tr} differs from 1")));
    }
    if eig.values[0] < -STATE_EIGEN_TOL {
        return Err(Error::InvalidState(format!("negative eigenvalue {:e}", eig.values[0])));
    }
    Ok(eig)
}

fn validate_derivative(rho: &CMatrix, drho: &CMatrix) -> Result<()> {
    if rho.dim() != drho.dim() {
        return Err(Error::DimensionMismatch(format!("state {} vs derivative {}", rho.dim(), drho.dim())));
    }
    drho.ensure_hermitian()?;
    let tr = drho.trace().norm();
    if tr > DERIVATIVE_TRACE_TOL {
        return Err(Error::InvalidState(format!("derivative has trace {tr:e}")));
    }
    Ok(())
}

/// SLD from the spectral decomposition of `rho`:
/// `L = 2 Σ ⟨ψ_n|∂ρ|ψ_m⟩ / (μ_n + μ_m) |ψ_n⟩⟨ψ_m|`, skipping pairs with `μ_n + μ_m < 1e-12`.
pub fn sld(rho: &CMatrix, drho: &CMatrix) -> Result<CMatrix> {
    let eig = validate_state(rho)?;
    validate_derivative(rho, drho)?;
    Ok(sld_in(&eig, drho))
}

fn sld_in(rho_eig: &EigenSystem, drho: &CMatrix) -> CMatrix {
    let mu = &rho_eig.values;
    let d = rho_eig.to_eigenbasis(drho);
    let l = CMatrix::from_fn(mu.len(), |n, m| {
        let denom = mu[n] + mu[m];
        if denom < SUPPORT_TOL {
            C64::new(0.0, 0.0)
        } else {
            d[(n, m)] * (2.0 / denom)
        }
    });
    rho_eig.from_eigenbasis(&l).hermitian_part()
}

/// `F_Q = Tr(ρ L²)`
pub fn qfi(rho: &CMatrix, drho: &CMatrix) -> Result<f64> {
    let l = sld(rho, drho)?;
    Ok(rho.trace_product(&l.matmul(&l)).re.max(0.0))
}

/// `F_c = Σ_j (∂p_j)² / p_j`. Outcomes with `p_j < 1e-12` are skipped when their
/// derivative is below `1e-10`, otherwise the term is undefined.
pub fn classical_fisher(probabilities: &[f64], derivatives: &[f64]) -> Result<f64> {
    if probabilities.len() != derivatives.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} probabilities vs {} derivatives",
            probabilities.len(),
            derivatives.len()
        )));
    }
    if let Some(&p) = probabilities.iter().find(|&&p| p < -SUPPORT_TOL || !p.is_finite()) {
        return Err(Error::InvalidState(format!("probability {p:e} outside [0, 1]")));
    }
    let total: f64 = probabilities.iter().sum();
    if (total - 1.0).abs() > 1e-10 {
        return Err(Error::InvalidState(format!("probabilities sum to {total}")));
    }
    let mut f = 0.0;
    for (&p, &dp) in probabilities.iter().zip(derivatives) {
        if p < 1e-12 {
            if dp.abs() >= 1e-10 {
                return Err(Error::DegenerateProbability { p, dp });
            }
            continue;
        }
        f += dp * dp / p;
    }
    Ok(f)
}

/// Outcome probabilities `Tr(ρ P_j)` and their derivatives `Tr(∂ρ P_j)`.
pub fn outcome_statistics(
    rho: &CMatrix,
    drho: &CMatrix,
    projectors: &[CMatrix],
) -> (Vec<f64>, Vec<f64>) {
    projectors
        .iter()
        .map(|p| (rho.trace_product(p).re, drho.trace_product(p).re))
        .unzip()
}

/// Classical Fisher information of the projective measurement onto the
/// eigenvectors of `observable`.
pub fn projective_fisher(rho: &CMatrix, drho: &CMatrix, observable: &CMatrix) -> Result<f64> {
    let eig = eig_hermitian(observable)?;
    let projectors: Vec<CMatrix> = (0..eig.dim()).map(|k| eig.projector(k)).collect();
    let (p, dp) = outcome_statistics(rho, drho, &projectors);
    classical_fisher(&p, &dp)
}

/// Error-propagation variance `⟨(ΔA)²⟩ / |∂θ⟨A⟩|²`.
pub fn variance_error_propagation<F: ParamFamily + ?Sized>(
    observable: &Observable,
    family: &F,
    theta: f64,
    t: f64,
) -> Result<f64> {
    let (rho, drho) = family.state_and_derivative(theta, t)?;
    variance_of(observable.matrix(), &rho, &drho)
}

fn variance_of(a: &CMatrix, rho: &CMatrix, drho: &CMatrix) -> Result<f64> {
    let centered = centered(a, rho);
    let slope = drho.trace_product(&centered).re;
    if slope.abs() < DIVERGENCE_TOL {
        return Err(Error::DivergentVariance(slope.abs()));
    }
    Ok(spread_centered(&centered, rho) / (slope * slope))
}

/// `A - ⟨A⟩𝕀`. Working with the centered operator avoids cancellation when `A`
/// carries a large identity component.
fn centered(a: &CMatrix, rho: &CMatrix) -> CMatrix {
    let mean = rho.trace_product(a).re;
    a - &(CMatrix::identity(a.dim()) * mean)
}

fn spread_centered(centered: &CMatrix, rho: &CMatrix) -> f64 {
    rho.trace_product(&centered.matmul(centered)).re.max(0.0)
}

/// `⟨(A - ⟨A⟩)²⟩`, clamped at zero.
fn spread(a: &CMatrix, rho: &CMatrix) -> f64 {
    spread_centered(&centered(a, rho), rho)
}

/// `Λ = (δθ)² - 1/F_Q` evaluated directly.
pub fn lambda_direct<F: ParamFamily + ?Sized>(
    observable: &Observable,
    family: &F,
    theta: f64,
    t: f64,
) -> Result<f64> {
    LocalEstimation::from_family(family, theta, t)?.lambda(observable)
}

/// Λ assembled from the split `A = A_opt + δA` around a saturating reference.
pub fn lambda_decomposed<F: ParamFamily + ?Sized>(
    observable: &Observable,
    family: &F,
    theta: f64,
    t: f64,
    reference: &Observable,
) -> Result<f64> {
    LocalEstimation::from_family(family, theta, t)?.lambda_decomposed(observable, reference)
}

/// QFI of the reduced state on one factor of a bipartite family.
pub fn subsystem_qfi<F: ParamFamily + ?Sized>(
    family: &F,
    theta: f64,
    t: f64,
    dims: (usize, usize),
    keep: Keep,
) -> Result<f64> {
    let (rho, drho) = family.state_and_derivative(theta, t)?;
    let reduced = partial_trace(&rho, dims, keep)?.hermitian_part();
    let dreduced = partial_trace(&drho, dims, keep)?.hermitian_part();
    qfi(&reduced, &dreduced)
}

/// Whether `Var(A)·Var(B) ≥ Cov(A, B)² + |⟨[A, B]⟩|²/4` holds with slack ≥ -1e-10.
pub fn schrodinger_robertson_check(a: &CMatrix, b: &CMatrix, rho: &CMatrix) -> bool {
    let (Ok(comm), Ok(anti)) = (commutator(a, b), anticommutator(a, b)) else {
        return false;
    };
    let mean_a = rho.trace_product(a).re;
    let mean_b = rho.trace_product(b).re;
    let cov = 0.5 * rho.trace_product(&anti).re - mean_a * mean_b;
    let comm_mean = rho.trace_product(&comm).norm();
    let lhs = spread(a, rho) * spread(b, rho);
    lhs - (cov * cov + 0.25 * comm_mean * comm_mean) >= -1e-10
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EstimationReport {
    pub variance: f64,
    pub qfi: f64,
    pub qcrb: f64,
    pub lambda: f64,
    pub distance: f64,
    pub saturated: bool,
}

/// Everything that depends only on `(ρ, ∂ρ)` at one parameter point, computed once
/// and shared by every observable evaluated there.
#[derive(Clone, Debug)]
pub struct LocalEstimation {
    rho: CMatrix,
    drho: CMatrix,
    sld: CMatrix,
    qfi: f64,
    sld_eig: EigenSystem,
}

impl LocalEstimation {
    pub fn new(rho: CMatrix, drho: CMatrix) -> Result<Self> {
        let rho_eig = validate_state(&rho)?;
        validate_derivative(&rho, &drho)?;
        let sld = sld_in(&rho_eig, &drho);
        let qfi = rho.trace_product(&sld.matmul(&sld)).re.max(0.0);
        let sld_eig = eig_hermitian(&sld)?;
        Ok(Self { rho, drho, sld, qfi, sld_eig })
    }

    pub fn from_family<F: ParamFamily + ?Sized>(family: &F, theta: f64, t: f64) -> Result<Self> {
        let (rho, drho) = family.state_and_derivative(theta, t)?;
        Self::new(rho, drho)
    }

    pub fn rho(&self) -> &CMatrix {
        &self.rho
    }

    pub fn drho(&self) -> &CMatrix {
        &self.drho
    }

    pub fn sld(&self) -> &CMatrix {
        &self.sld
    }

    pub fn sld_eigen(&self) -> &EigenSystem {
        &self.sld_eig
    }

    pub fn qfi(&self) -> f64 {
        self.qfi
    }

    /// `1/F_Q`; infinite when the state carries no information.
    pub fn qcrb(&self) -> f64 {
        1.0 / self.qfi
    }

    pub fn mean(&self, a: &CMatrix) -> f64 {
        self.rho.trace_product(a).re
    }

    pub fn slope(&self, a: &CMatrix) -> f64 {
        self.drho.trace_product(a).re
    }

    pub fn variance(&self, observable: &Observable) -> Result<f64> {
        self.check_dim(observable)?;
        variance_of(observable.matrix(), &self.rho, &self.drho)
    }

    pub fn lambda(&self, observable: &Observable) -> Result<f64> {
        Ok(self.variance(observable)? - self.qcrb())
    }

    /// Decomposed Λ with `δA = A - A_opt`:
    /// `Λ = -(r² + 2r)/(ε F_Q) + ϵ` where `r = ∂⟨δA⟩/∂⟨A_opt⟩`, `ε = (1 + r)²` and
    /// `ϵ = (Var(δA) + η) / (∂⟨A_opt⟩ + ∂⟨δA⟩)²` with `η = 2(Re⟨A_opt δA⟩ - ⟨A_opt⟩⟨δA⟩)`.
    pub fn lambda_decomposed(&self, observable: &Observable, reference: &Observable) -> Result<f64> {
        self.check_dim(observable)?;
        self.check_dim(reference)?;
        let bound = self.qcrb();
        match self.variance(reference) {
            Ok(v) if (v - bound).abs() <= REFERENCE_TOL => {}
            Ok(variance) => return Err(Error::NonSaturatingReference { variance, bound }),
            Err(_) => {
                return Err(Error::NonSaturatingReference { variance: f64::INFINITY, bound })
            }
        }
        let a_opt = reference.matrix();
        let delta = observable.matrix() - a_opt;

        let opt_slope = self.slope(a_opt);
        let delta_slope = self.slope(&delta);
        let total_slope = opt_slope + delta_slope;
        if total_slope.abs() < DIVERGENCE_TOL {
            return Err(Error::DivergentVariance(total_slope.abs()));
        }
        let ratio = delta_slope / opt_slope;
        let gain = (1.0 + ratio).powi(2);

        let delta_mean = self.mean(&delta);
        let delta_spread = self.mean(&delta.matmul(&delta)) - delta_mean * delta_mean;
        let eta = 2.0 * (self.rho.trace_product(&a_opt.matmul(&delta)).re - self.mean(a_opt) * delta_mean);
        let excess = (delta_spread + eta) / (total_slope * total_slope);

        Ok(-(ratio * ratio + 2.0 * ratio) / (gain * self.qfi) + excess)
    }

    /// Frobenius distance from the observable to the commutant of the SLD.
    pub fn distance(&self, observable: &Observable) -> Result<f64> {
        self.check_dim(observable)?;
        observable.matrix().ensure_hermitian()?;
        Ok(pinch(observable.matrix(), &self.sld_eig, CLUSTER_TOL).0)
    }

    /// Whether the observable attains the bound: finite variance and `Λ < 1e-9`.
    pub fn saturates(&self, observable: &Observable) -> bool {
        matches!(self.lambda(observable), Ok(l) if l < SATURATION_TOL)
    }

    pub fn report(&self, observable: &Observable) -> Result<EstimationReport> {
        let variance = self.variance(observable)?;
        let lambda = variance - self.qcrb();
        Ok(EstimationReport {
            variance,
            qfi: self.qfi,
            qcrb: self.qcrb(),
            lambda,
            distance: self.distance(observable)?,
            saturated: lambda < SATURATION_TOL,
        })
    }

    /// The SLD as an observable; it saturates the bound whenever `F_Q > 0`.
    pub fn sld_observable(&self) -> Observable {
        Observable::from_matrix(self.sld.clone())
    }

    /// Classical Fisher information of measuring in the SLD eigenbasis.
    pub fn sld_projective_fisher(&self) -> Result<f64> {
        let projectors: Vec<CMatrix> = (0..self.sld_eig.dim()).map(|k| self.sld_eig.projector(k)).collect();
        let (p, dp) = outcome_statistics(&self.rho, &self.drho, &projectors);
        classical_fisher(&p, &dp)
    }

    fn check_dim(&self, observable: &Observable) -> Result<()> {
        if observable.matrix().dim() != self.rho.dim() {
            return Err(Error::DimensionMismatch(format!(
                "observable {} vs state {}",
                observable.matrix().dim(),
                self.rho.dim()
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::pauli;

    /// ρ(θ) = diag((1+θ)/2, (1-θ)/2)
    struct Bit;

    impl ParamFamily for Bit {
        fn dim(&self) -> usize {
            2
        }

        fn state(&self, theta: f64, _t: f64) -> Result<CMatrix> {
            Ok(CMatrix::diag(&[(1.0 + theta) / 2.0, (1.0 - theta) / 2.0]))
        }
    }

    fn bit_point() -> LocalEstimation {
        LocalEstimation::from_family(&Bit, 0.0, 0.0).unwrap()
    }

    #[test]
    fn diagonal_family_sld_is_sigma_z() {
        let est = bit_point();
        assert!(est.sld().max_abs_diff(&pauli::z()) < 1e-9);
        assert!((est.qfi() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn zero_derivative_gives_zero_sld() {
        let rho = CMatrix::diag(&[0.3, 0.7]);
        let l = sld(&rho, &CMatrix::zeros(2)).unwrap();
        assert_eq!(l.max_abs(), 0.0);
        assert_eq!(qfi(&rho, &CMatrix::zeros(2)).unwrap(), 0.0);
    }

    #[test]
    fn invalid_state_rejected() {
        let bad = CMatrix::diag(&[1.2, -0.2]);
        assert!(matches!(sld(&bad, &CMatrix::zeros(2)), Err(Error::InvalidState(_))));
        let untraced = CMatrix::diag(&[0.5, 0.2]);
        assert!(matches!(qfi(&untraced, &CMatrix::zeros(2)), Err(Error::InvalidState(_))));
    }

    #[test]
    fn classical_fisher_cases() {
        assert!((classical_fisher(&[0.5, 0.5], &[0.5, -0.5]).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(classical_fisher(&[0.25; 4], &[0.0; 4]).unwrap(), 0.0);
        assert_eq!(classical_fisher(&[1.0, 0.0], &[0.0, 1e-12]).unwrap(), 0.0);
        assert!(matches!(
            classical_fisher(&[1.0, 0.0], &[0.0, 0.1]),
            Err(Error::DegenerateProbability { .. })
        ));
        assert!(matches!(classical_fisher(&[0.5], &[0.0]), Err(Error::InvalidState(_))));
    }

    #[test]
    fn sigma_z_measurement_on_bit() {
        let est = bit_point();
        let z = Observable::qubit(QubitCoeffs::new(0.0, 0.0, 0.0, 1.0));
        assert!((est.variance(&z).unwrap() - 1.0).abs() < 1e-9);
        assert!((projective_fisher(est.rho(), est.drho(), &pauli::z()).unwrap() - 1.0).abs() < 1e-9);
        assert!(est.lambda(&z).unwrap().abs() < 1e-9);
    }

    #[test]
    fn identity_observable_diverges() {
        let est = bit_point();
        let id = Observable::qubit(QubitCoeffs::new(1.0, 0.0, 0.0, 0.0));
        assert!(matches!(est.variance(&id), Err(Error::DivergentVariance(_))));
        assert!(matches!(
            est.lambda_decomposed(&Observable::qubit(QubitCoeffs::new(0.0, 0.3, 0.0, 1.0)), &id),
            Err(Error::NonSaturatingReference { .. })
        ));
    }

    #[test]
    fn decomposed_lambda_with_zero_deviation() {
        let est = bit_point();
        let l = est.sld_observable();
        assert!(est.lambda_decomposed(&l, &l).unwrap().abs() < 1e-12);
    }

    #[test]
    fn robertson_examples() {
        let mixed = CMatrix::diag(&[0.5, 0.5]);
        assert!(schrodinger_robertson_check(&pauli::x(), &pauli::z(), &mixed));
        assert!(schrodinger_robertson_check(&pauli::z(), &pauli::z(), &CMatrix::diag(&[0.9, 0.1])));
        assert!(!schrodinger_robertson_check(&pauli::z(), &CMatrix::identity(3), &mixed));
    }

    #[test]
    fn report_fields_are_consistent() {
        let est = bit_point();
        let a = Observable::qubit(QubitCoeffs::new(0.2, 0.4, -0.1, 0.9));
        let r = est.report(&a).unwrap();
        assert!((r.variance - r.qcrb - r.lambda).abs() < 1e-12);
        assert!(r.lambda >= -1e-9);
        assert!(!r.saturated);
        assert!(r.distance > 0.0);
    }
}
