//! Quantum Cramér-Rao bound of the driven qubit over time, with a few random
//! observables `A = L + δA` for comparison.

use qestim::estimation::{LocalEstimation, Observable, QubitCoeffs};
use qestim::models::DrivenQubitParams;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn main() -> qestim::error::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    println!("{:>6} {:>12} {:>12}", "t", "1/F_Q", "best random");
    for k in 1..=10 {
        let p = DrivenQubitParams::reference(k as f64);
        let local = LocalEstimation::from_family(&p.family(), p.omega_a, p.t)?;
        let best = (0..20)
            .filter_map(|_| {
                let mut draw = || rng.gen_range(-0.5..=0.5);
                let delta = QubitCoeffs::new(draw(), draw(), draw(), draw());
                let obs = Observable::qubit(delta).plus(local.sld());
                local.variance(&obs).ok()
            })
            .fold(f64::INFINITY, f64::min);
        println!("{:>6.1} {:>12.6} {:>12.6}", p.t, local.qcrb(), best);
    }
    Ok(())
}
