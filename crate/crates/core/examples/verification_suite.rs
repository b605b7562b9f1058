//! Runs the randomized suite over a small grid and prints per-check counts.
//!
//! ```text
//! cargo run --release --example verification_suite [instances-per-cell]
//! ```

use bessel_gruss::suite::{run_suite, SuiteConfig};

fn main() -> bessel_gruss::Result<()> {
    let instance_count = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("count must be an integer"))
        .unwrap_or(50);
    let cfg = SuiteConfig {
        instance_count,
        ..SuiteConfig::default()
    };
    let out = run_suite(&cfg)?;
    println!("{} cells, {} instances", out.cells, out.instances);
    for (name, s) in &out.checks {
        println!(
            "{name:<36} {:>7} passed {:>3} failed  worst {:>10.2e}",
            s.passed,
            s.failed,
            s.worst_margin.unwrap_or(f64::NAN)
        );
    }

    // Without any tolerance, instances generated on the boundary can fall
    // outside by round-off. Those are classified separately.
    let strict = SuiteConfig {
        tolerance: 0.0,
        boundary_fraction: 1.0,
        ..cfg
    };
    let out = run_suite(&strict)?;
    println!(
        "\nzero tolerance, boundary only: {} failures",
        out.failure_count
    );
    for f in out.failures.iter().take(3) {
        println!(
            "  {} {:?} #{}: {:?}, margin {:.2e}",
            f.check, f.cell.field, f.instance, f.kind, f.margin
        );
    }
    Ok(())
}
