//! Λ and the commutant distance D over the `(A_x, A_y)` plane of the driven qubit,
//! printed as a coarse text map. Low values of both sit in the same region.

use qestim::sweep::{run, Axis, SweepSpec};

fn main() -> qestim::error::Result<()> {
    let mut spec = SweepSpec::figure("2").expect("preset");
    spec.axes = vec![Axis::new("x", -1.0, 1.0, 9), Axis::new("y", -1.0, 1.0, 9)];
    let result = run(&spec, None)?;

    for name in ["lambda", "distance"] {
        let column = result.column(name).expect("column");
        println!("{name} (rows: x from -1 to 1, columns: y)");
        for row in column.chunks(9) {
            let line: Vec<String> = row
                .iter()
                .map(|v| v.map_or("     -".to_string(), |v| format!("{v:6.3}")))
                .collect();
            println!("  {}", line.join(" "));
        }
        let (arg, min) = column
            .iter()
            .enumerate()
            .filter_map(|(i, v)| v.map(|v| (i, v)))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .expect("non-empty");
        println!("  min {min:.4} at (x, y) = ({:.2}, {:.2})\n", -1.0 + 0.25 * (arg / 9) as f64, -1.0 + 0.25 * (arg % 9) as f64);
    }
    Ok(())
}
