//! Height-lattice walk-through: closed-form Gram matrix, exact rank and
//! kernel, dual-lattice identification, and the doubling-limit oracle.
//!
//! Run with `cargo run --release --example height_lattice`.

use mwforge::explicit_points::ExplicitFamily;
use mwforge::heights::{self, GramMatrix};
use mwforge::report::{decimal6, fraction_str};

fn main() -> Result<(), mwforge::Error> {
    // Closed form for p = 3, d = 4.
    let gram = GramMatrix::closed_form(3, 4)?;
    println!("Gram matrix for p = 3, d = 4:");
    for i in 0..gram.dim() {
        let row: Vec<String> = (0..gram.dim()).map(|j| fraction_str(gram.entry(i, j))).collect();
        println!("  [ {} ]", row.join("  "));
    }
    let lattice = gram.rank_report()?;
    println!("rank = {} (expected d - 2 = 2)", lattice.rank);
    for v in &lattice.kernel {
        let coords: Vec<String> = v.iter().map(|c| c.to_string()).collect();
        println!("kernel vector: ({})", coords.join(", "));
    }
    println!(
        "matches a scaling of the dual A lattice: {}",
        gram.matches_scaled_dual_a(3)?
    );

    // Oracle comparison on the smallest family.
    let reference = ExplicitFamily::build(2, 1)?;
    let kappa = heights::calibrate_kappa(&reference, 4)?;
    println!("\ncalibration constant kappa = {}", fraction_str(&kappa));
    for (p, n) in [(2u64, 1u32), (3, 1), (2, 2), (5, 1)] {
        let family = ExplicitFamily::build(p, n)?;
        let report = heights::oracle_report(&family, 4, &kappa)?;
        println!(
            "p={p} n={n} d={}: max |kappa*oracle - gram| = {}  rounding exact: {}  family kappa = {}",
            family.d,
            decimal6(&report.max_deviation),
            report.rounding_matches,
            fraction_str(&report.family_kappa),
        );
    }
    Ok(())
}
