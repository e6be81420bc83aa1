//! How much precision is lost by measuring only the electron, only the nucleus, or
//! a product observable on the coupled nucleus-electron pair.

use qestim::estimation::{LocalEstimation, QubitCoeffs};
use qestim::models::bipartite::{electron_observable, joint_observable, nucleus_observable};
use qestim::models::BipartiteParams;

fn main() -> qestim::error::Result<()> {
    let p = BipartiteParams::reference(2.0);
    let local = LocalEstimation::from_family(&p.family(), p.omega_l, p.t)?;
    println!("global bound 1/F_Q = {:.6}", local.qcrb());

    let electron = QubitCoeffs::new(-1.0, 0.3, -0.2, -0.25);
    let nucleus = QubitCoeffs::new(2.0, 1.0, 0.4, -1.0);
    let cases = [
        ("electron", electron_observable(electron)),
        ("nucleus", nucleus_observable(nucleus)),
        ("joint", joint_observable(nucleus, electron)),
    ];
    for (name, obs) in cases {
        match local.report(&obs) {
            Ok(r) => println!("{name:>9}: variance {:.6}  lambda {:.6}  D {:.6}", r.variance, r.lambda, r.distance),
            Err(e) => println!("{name:>9}: {e}"),
        }
    }
    Ok(())
}
