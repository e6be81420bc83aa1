//! Global and reduced-state QFI of the nucleus-electron pair along t. The bound on
//! either subsystem alone is never below the global one.

use qestim::estimation::{qfi, subsystem_qfi};
use qestim::models::bipartite::{DIMS, ELECTRON, NUCLEUS};
use qestim::models::BipartiteParams;
use qestim::estimation::ParamFamily;

fn main() -> qestim::error::Result<()> {
    let fam = BipartiteParams::reference(0.0).family();
    println!("{:>5} {:>10} {:>10} {:>10}", "t", "F_Q", "F_Q^n", "F_Q^e");
    for k in 0..=10 {
        let t = k as f64;
        let (rho, drho) = fam.state_and_derivative(2.0, t)?;
        let global = qfi(&rho, &drho)?;
        let n = subsystem_qfi(&fam, 2.0, t, DIMS, NUCLEUS)?;
        let e = subsystem_qfi(&fam, 2.0, t, DIMS, ELECTRON)?;
        println!("{t:>5.1} {global:>10.5} {n:>10.5} {e:>10.5}");
    }
    Ok(())
}
