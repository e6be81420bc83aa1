//! The commutant of the driven-qubit SLD and the nearest commuting observable to a
//! given one.

use qestim::estimation::{commutant_basis, min_distance, LocalEstimation, Observable, QubitCoeffs};
use qestim::linalg::{commutator, frobenius_norm};
use qestim::models::DrivenQubitParams;

fn main() -> qestim::error::Result<()> {
    let p = DrivenQubitParams::reference(1.0);
    let local = LocalEstimation::from_family(&p.family(), p.omega_a, p.t)?;
    let l = local.sld();

    let basis = commutant_basis(l)?;
    println!("commutant dimension {}", basis.len());
    for b in &basis {
        println!("  ||[L, B]|| = {:.2e}", frobenius_norm(&commutator(l, b)?));
    }

    let a = Observable::qubit(QubitCoeffs::new(-0.7, 0.4, 0.4, 0.2));
    let (d, nearest) = min_distance(&a, l)?;
    println!("D = {d:.6}");
    println!("nearest commuting observable: {nearest:?}");
    let lambda = local.lambda(&a)?;
    let lambda_near = local.lambda(&Observable::from_matrix(nearest))?;
    println!("lambda: {lambda:.6} -> {lambda_near:.2e}");
    Ok(())
}
