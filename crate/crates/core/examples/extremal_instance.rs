//! The planar instance where residual, refined and coarse bounds coincide.
//!
//! ```text
//! cargo run --example extremal_instance
//! ```

use bessel_gruss::sharpness::extremal_instance;

fn main() -> bessel_gruss::Result<()> {
    println!(
        "{:>6} {:>12} {:>12} {:>12} {:>10}",
        "m", "residual", "refined", "coarse", "slack"
    );
    for m in [0.5, 1.0, 2.0, 10.0] {
        let rep = extremal_instance(m)?.report();
        println!(
            "{m:>6} {:>12.6} {:>12.6} {:>12.6} {:>10.1e}",
            rep.residual, rep.refined, rep.coarse, rep.condition.slack_inner
        );
    }

    let inst = extremal_instance(1.0)?;
    println!("\n{}", serde_json::to_string_pretty(&inst.to_file())?);
    Ok(())
}
