mod common;

use std::f64::consts::FRAC_PI_4;

use num_complex::Complex64 as C;
use qestim::error::{Error, Result};
use qestim::estimation::{
    classical_fisher, commutant_basis, lambda_decomposed, lambda_direct, outcome_statistics, qfi, sld,
    subsystem_qfi, variance_error_propagation, LocalEstimation, Observable, ParamFamily, QubitCoeffs,
};
use qestim::linalg::{commutator, eig_hermitian, evolve_unitary, frobenius_norm, kron, partial_trace, pauli, CMatrix, Keep};
use qestim::models::bipartite::{bipartite_state, DIMS, ELECTRON, NUCLEUS};
use qestim::models::driven_qubit::{driven_qubit_mean_and_derivative, driven_qubit_state};
use qestim::models::{BipartiteParams, CoupledSpectrum, DrivenQubitParams};

fn to_cmatrix(d: &common::Dense) -> CMatrix {
    CMatrix::from_vec(d.len(), d.iter().flatten().copied().collect()).unwrap()
}

#[test]
fn bipartite_spectrum_against_characteristic_polynomial() {
    let h = common::bipartite_h(2.0, 3.0, 2.0);
    let re: Vec<Vec<f64>> = h.iter().map(|r| r.iter().map(|z| z.re).collect()).collect();
    let roots = common::real_roots(&common::char_poly(&re), 10.0);
    let expected = [-(10.25f64.sqrt()), -(4.25f64.sqrt()), 4.25f64.sqrt(), 10.25f64.sqrt()];
    assert_eq!(roots.len(), 4);
    let eig = eig_hermitian(&to_cmatrix(&h)).unwrap();
    for k in 0..4 {
        assert!((roots[k] - expected[k]).abs() < 1e-10, "root {k}: {}", roots[k]);
        assert!((eig.values[k] - roots[k]).abs() < 1e-10);
    }
    assert!((eig.values[0] + 3.2015621).abs() < 1e-7 && (eig.values[1] + 2.0615528).abs() < 1e-7);
}

#[test]
fn driven_qubit_closed_form_against_formula() {
    let (omega, drive, t) = (2.0f64, 1.0f64, 1.5f64);
    let lambda = (4.0 * drive * drive + omega * omega).sqrt();
    let th = (omega / (2.0 * drive)).atan();
    let xi = (1.0 - (lambda * t).cos()) * th.cos() * th.sin();
    let zeta = C::new(th.cos().powi(2) + th.sin().powi(2) * (lambda * t).cos(), -th.sin() * (lambda * t).sin());
    let expected = [C::new(0.5 * (1.0 + xi), 0.0), zeta * 0.5, zeta.conj() * 0.5, C::new(0.5 * (1.0 - xi), 0.0)];

    let p = DrivenQubitParams { omega_a: omega, drive, phi: FRAC_PI_4, t };
    let closed = driven_qubit_state(&p).unwrap();
    let rho0 = CMatrix::from_real(2, &[0.5, 0.5, 0.5, 0.5]);
    let generic = evolve_unitary(&to_cmatrix(&common::driven_qubit_h(omega, drive)), &rho0, t).unwrap();
    for (k, z) in expected.iter().enumerate() {
        assert!((closed.entries()[k] - z).norm() < 1e-10);
        assert!((generic.entries()[k] - z).norm() < 1e-10);
    }
}

#[test]
fn driven_qubit_qfi_against_state_vector() {
    let p = DrivenQubitParams::reference(1.5);
    let (psi, dpsi) = common::driven_qubit_pure(2.0, 1.0, FRAC_PI_4, 1.5);
    let oracle = common::pure_state_qfi(&psi, &dpsi);
    let local = LocalEstimation::from_family(&p.family(), 2.0, 1.5).unwrap();
    assert!((local.qfi() - oracle).abs() < 1e-8, "{} vs {oracle}", local.qfi());

    // a pure state has L = 2∂ρ
    let twice = local.drho() * 2.0;
    assert!(local.sld().max_abs_diff(&twice) < 1e-8);
    assert!((local.sld_projective_fisher().unwrap() - local.qfi()).abs() < 1e-8);
}

#[test]
fn sld_saturates_and_affine_images_too() {
    let fam = DrivenQubitParams::reference(0.0).family();
    let local = LocalEstimation::from_family(&fam, 2.0, 1.5).unwrap();
    let l = local.sld_observable();
    assert!((variance_error_propagation(&l, &fam, 2.0, 1.5).unwrap() - 1.0 / local.qfi()).abs() < 1e-9);
    let affine = l.affine(2.5, -0.7);
    assert!(lambda_direct(&affine, &fam, 2.0, 1.5).unwrap().abs() < 1e-9);
    assert!(matches!(
        variance_error_propagation(&Observable::from_matrix(CMatrix::identity(2)), &fam, 2.0, 1.5),
        Err(Error::DivergentVariance(_))
    ));
}

#[test]
fn decomposed_lambda_matches_direct() {
    let fam = DrivenQubitParams::reference(0.0).family();
    let local = LocalEstimation::from_family(&fam, 2.0, 1.5).unwrap();
    let reference = local.sld_observable();
    let a = Observable::from_matrix(local.sld() + &(pauli::x() * 0.3));
    let direct = lambda_direct(&a, &fam, 2.0, 1.5).unwrap();
    let split = lambda_decomposed(&a, &fam, 2.0, 1.5, &reference).unwrap();
    assert!((direct - split).abs() < 1e-8);
    assert!(lambda_decomposed(&reference, &fam, 2.0, 1.5, &reference).unwrap().abs() < 1e-12);

    let random = Observable::qubit(QubitCoeffs::new(0.31, -0.12, 0.44, -0.27));
    let direct = local.lambda(&random).unwrap();
    assert!((direct - local.lambda_decomposed(&random, &reference).unwrap()).abs() < 1e-8);

    let identity = Observable::from_matrix(CMatrix::identity(2));
    assert!(matches!(local.lambda_decomposed(&random, &identity), Err(Error::NonSaturatingReference { .. })));
}

#[test]
fn commutant_of_driven_qubit_sld() {
    let local = LocalEstimation::from_family(&DrivenQubitParams::reference(0.0).family(), 2.0, 1.0).unwrap();
    let basis = commutant_basis(local.sld()).unwrap();
    assert_eq!(basis.len(), 2);
    for b in &basis {
        assert!(frobenius_norm(&commutator(local.sld(), b).unwrap()) < 1e-9);
    }
}

#[test]
fn driven_qubit_moments_against_trace_path() {
    let coeffs = QubitCoeffs::new(-0.7, 0.4, 0.4, 0.2);
    let a = Observable::qubit(coeffs);
    let p = DrivenQubitParams::reference(1.0);
    let m = driven_qubit_mean_and_derivative(&a, &p).unwrap();

    let (psi, dpsi) = common::driven_qubit_pure(2.0, 1.0, FRAC_PI_4, 1.0);
    let am = a.matrix();
    let av = am.mul_vec(&psi);
    let mean = common::inner(&psi, &av).re;
    let second = common::inner(&av, &av).re;
    let slope = 2.0 * common::inner(&dpsi, &av).re;
    assert!((m.mean - mean).abs() < 1e-8);
    assert!((m.spread - (second - mean * mean)).abs() < 1e-8);
    assert!((m.slope - slope).abs() < 1e-8);

    // closed-form spread A_x² + A_y² + A_z² - (γ₁ - γ₂)²
    let lambda = 8f64.sqrt();
    let th = (1.0f64).atan();
    let (ax, ay, az) = (coeffs.x, coeffs.y, coeffs.z);
    let b1 = ax * th.cos() + az * th.sin();
    let b2 = az * th.cos() - ax * th.sin();
    let g1 = b2 * th.sin() * lambda.cos() - b1 * th.cos();
    let g2 = ay * th.sin() * lambda.sin();
    assert!((m.spread - (ax * ax + ay * ay + az * az - (g1 - g2).powi(2))).abs() < 1e-8);
}

#[test]
fn bipartite_closed_form_against_block_exponential() {
    let fam = BipartiteParams::reference(0.0).family();
    for &(w, t) in &[(2.0, 2.0), (1.1, 0.6), (3.4, 7.5), (-0.8, 4.0)] {
        let (psi, dpsi) = common::bipartite_pure(w, 3.0, 2.0, FRAC_PI_4, FRAC_PI_4, t);
        let (rho, drho) = fam.state_and_derivative(w, t).unwrap();
        assert!(common::max_diff(&common::projector(&psi), rho.entries()) < 1e-10);
        let cross: Vec<C> = (0..4)
            .flat_map(|i| (0..4).map(move |j| (i, j)))
            .map(|(i, j)| dpsi[i] * psi[j].conj() + psi[i] * dpsi[j].conj())
            .collect();
        let d: f64 = cross.iter().zip(drho.entries()).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        assert!(d < 1e-10, "w={w} t={t}: {d}");
        let local = LocalEstimation::new(rho, drho).unwrap();
        assert!((local.qfi() - common::pure_state_qfi(&psi, &dpsi)).abs() < 1e-8);
    }
}

#[test]
fn bipartite_time_zero_marginal() {
    let (rho, _) = bipartite_state(&BipartiteParams::reference(0.0)).unwrap();
    let nucleus = partial_trace(&rho, DIMS, NUCLEUS).unwrap();
    let v = [C::new(FRAC_PI_4.cos(), 0.0), C::new(FRAC_PI_4.sin(), 0.0)];
    assert!(nucleus.max_abs_diff(&CMatrix::pure_state(&v)) < 1e-12);
}

#[test]
fn coupled_angles_and_orthogonality() {
    let sp = CoupledSpectrum::new(2.0, 3.0, 2.0).unwrap();
    let (tp, tm) = (sp.theta_plus, sp.theta_minus);
    assert!((tp.cos() * tm.cos() + tp.sin() * tm.sin()).abs() < 1e-12);
    let h = to_cmatrix(&common::bipartite_h(2.0, 3.0, 2.0));
    for k in 0..4 {
        let v: Vec<C> = sp.eigenvector(k).iter().map(|&x| C::new(x, 0.0)).collect();
        let hv = h.mul_vec(&v);
        let r = hv.iter().zip(&v).map(|(a, b)| (a - b * sp.energies[k]).norm()).fold(0.0, f64::max);
        assert!(r < 1e-12, "eigenpair {k}: {r}");
    }
}

/// `ρ_a(θ) ⊗ ρ_b` with `ρ_a = diag((1+θ)/2, (1-θ)/2)` and a fixed `ρ_b`.
struct Product;

impl ParamFamily for Product {
    fn dim(&self) -> usize {
        4
    }

    fn state(&self, theta: f64, _t: f64) -> Result<CMatrix> {
        let a = CMatrix::diag(&[(1.0 + theta) / 2.0, (1.0 - theta) / 2.0]);
        Ok(kron(&a, &CMatrix::diag(&[0.3, 0.7])))
    }
}

#[test]
fn subsystem_qfi_on_product_family() {
    let global = LocalEstimation::from_family(&Product, 0.2, 0.0).unwrap().qfi();
    let a = subsystem_qfi(&Product, 0.2, 0.0, (2, 2), Keep::A).unwrap();
    let b = subsystem_qfi(&Product, 0.2, 0.0, (2, 2), Keep::B).unwrap();
    assert!((a - global).abs() < 1e-8 && b.abs() < 1e-12);
    assert!((global - 1.0 / (1.0 - 0.04)).abs() < 1e-6);

    let fam = BipartiteParams::reference(0.0).family();
    let g = LocalEstimation::from_family(&fam, 2.0, 2.0).unwrap().qfi();
    assert!(subsystem_qfi(&fam, 2.0, 2.0, DIMS, ELECTRON).unwrap() <= g + 1e-8);
}

#[test]
fn diagonal_family_examples() {
    let rho = CMatrix::diag(&[0.5, 0.5]);
    let drho = CMatrix::diag(&[0.5, -0.5]);
    assert!(sld(&rho, &drho).unwrap().max_abs_diff(&pauli::z()) < 1e-15);
    assert!((qfi(&rho, &drho).unwrap() - 1.0).abs() < 1e-15);
    let (p, dp) = outcome_statistics(&rho, &drho, &[CMatrix::diag(&[1.0, 0.0]), CMatrix::diag(&[0.0, 1.0])]);
    assert!((classical_fisher(&p, &dp).unwrap() - 1.0).abs() < 1e-15);
    assert_eq!(qfi(&rho, &CMatrix::zeros(2)).unwrap(), 0.0);
}
