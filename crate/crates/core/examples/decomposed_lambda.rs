//! Λ computed directly and from the split `A = L + δA` agree.

use qestim::estimation::{LocalEstimation, Observable, QubitCoeffs};
use qestim::models::DrivenQubitParams;

fn main() -> qestim::error::Result<()> {
    let p = DrivenQubitParams::reference(1.5);
    let local = LocalEstimation::from_family(&p.family(), p.omega_a, p.t)?;
    let reference = local.sld_observable();
    for scale in [0.0, 0.1, 0.3, 1.0] {
        let delta = QubitCoeffs::new(0.2 * scale, scale, -0.5 * scale, 0.3 * scale);
        let a = Observable::qubit(delta).plus(local.sld());
        let direct = local.lambda(&a)?;
        let split = local.lambda_decomposed(&a, &reference)?;
        println!("|dA| ~ {scale:.1}: direct {direct:.10}  decomposed {split:.10}");
    }
    Ok(())
}
