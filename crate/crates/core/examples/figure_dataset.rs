//! Regenerate a figure dataset in-process and print its first rows as CSV.
//!
//! `cargo run --example figure_dataset -- 4b`

use qestim::sweep::{run, SweepSpec, FIGURE_IDS};

fn main() -> qestim::error::Result<()> {
    let id = std::env::args().nth(1).unwrap_or_else(|| "5".into());
    let Some(spec) = SweepSpec::figure(&id) else {
        eprintln!("unknown figure {id}; expected one of {FIGURE_IDS:?}");
        std::process::exit(3);
    };
    let result = run(&spec, None)?;
    for line in result.to_csv_string().lines().take(6) {
        println!("{line}");
    }
    println!("... {} rows", result.rows.len());
    Ok(())
}
