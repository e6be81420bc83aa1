//! QFI of the nucleus-electron pair under electron dephasing and dissipation for a
//! range of noise rates.

use qestim::estimation::LocalEstimation;
use qestim::models::{BipartiteParams, Jump, LindbladFamily, NoiseSpec};

fn main() -> qestim::error::Result<()> {
    let p = BipartiteParams::reference(2.0);
    println!("{:>6} {:>12} {:>12}", "kappa", "dephasing", "dissipation");
    for kappa in [0.0, 0.05, 0.1, 0.2, 0.4] {
        let mut row = Vec::new();
        for jump in [Jump::Dephasing, Jump::Dissipation] {
            let fam = LindbladFamily::new(p.family(), NoiseSpec::new(kappa, jump));
            row.push(LocalEstimation::from_family(&fam, p.omega_l, p.t)?.qfi());
        }
        println!("{kappa:>6.2} {:>12.6} {:>12.6}", row[0], row[1]);
    }
    Ok(())
}
