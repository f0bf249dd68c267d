use mwforge::explicit_points::ExplicitFamily;
use mwforge::heights;
use mwforge::report::{decimal6, fraction_str};

fn main() -> Result<(), mwforge::Error> {
    let reference = ExplicitFamily::build(2, 1)?;
    let kappa = heights::calibrate_kappa(&reference, 4)?;
    for (p, n) in [(7u64, 1u32), (2, 3), (3, 2)] {
        let start = std::time::Instant::now();
        let family = ExplicitFamily::build(p, n)?;
        let report = heights::oracle_report(&family, 4, &kappa)?;
        println!(
            "p={p} n={n} d={}: dev={} rounding={} fam_kappa={} kcons={} [{:?}]",
            family.d,
            decimal6(&report.max_deviation),
            report.rounding_matches,
            fraction_str(&report.family_kappa),
            report.kappa_consistent,
            start.elapsed(),
        );
    }
    Ok(())
}
