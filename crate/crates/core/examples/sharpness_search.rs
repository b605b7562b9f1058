//! Searches for instances maximizing residual / D and |deviation| / sqrt(Dx Dy).
//! Both ratios are capped at 1/4 on certified instances.
//!
//! ```text
//! cargo run --release --example sharpness_search [seed]
//! ```

use std::time::Instant;

use bessel_gruss::sharpness::{maximize_gruss_ratio, maximize_residual_ratio, SearchConfig};

fn main() -> bessel_gruss::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse().expect("seed must be an integer"))
        .unwrap_or(SearchConfig::default().seed);
    let cfg = SearchConfig {
        seed,
        ..SearchConfig::default()
    };
    println!(
        "dim {}, family {}, {} restarts x {} steps, seed {}",
        cfg.dimension, cfg.family_size, cfg.restarts, cfg.steps_per_restart, cfg.seed
    );

    let t = Instant::now();
    let r = maximize_residual_ratio(&cfg)?;
    println!(
        "residual ratio {:.12} ({} evaluations, {:.2?})",
        r.best_ratio,
        r.evaluations,
        t.elapsed()
    );

    let t = Instant::now();
    let g = maximize_gruss_ratio(&cfg)?;
    println!(
        "gruss ratio    {:.12} ({} evaluations, {:.2?})",
        g.best_ratio,
        g.evaluations,
        t.elapsed()
    );

    println!(
        "\nbest residual instance:\n{}",
        serde_json::to_string_pretty(&r.best_instance)?
    );
    Ok(())
}
