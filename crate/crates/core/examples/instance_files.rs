//! Generates a certified instance, writes it as JSON and reads it back.
//!
//! ```text
//! cargo run --example instance_files [seed]
//! ```

use bessel_gruss::bounds::{counterpart_bounds, Tolerance};
use bessel_gruss::generate::generate_certified_instance;
use bessel_gruss::instance::InstanceFile;
use bessel_gruss::rng::stream_rng;
use bessel_gruss::space::Field;

fn main() -> bessel_gruss::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(7);
    let mut rng = stream_rng(seed, 0);
    let g = generate_certified_instance(&mut rng, 4, 2, Field::Complex)?;
    println!("generated with margin {:.3}", g.margin);

    let file = InstanceFile::from_parts(&g.space, &g.family, &g.x, &g.bx, None);
    let text = serde_json::to_string_pretty(&file)?;
    println!("{text}");
    println!("sha256 {}", file.digest());

    let back: InstanceFile = serde_json::from_str(&text)?;
    let p = back.to_problem()?;
    let rep = counterpart_bounds(&p.space, &p.x, &p.family, &p.box_x, Tolerance::default())?;
    println!(
        "residual {:.6} <= refined {:.6} <= coarse {:.6}, certified {}",
        rep.residual, rep.refined, rep.coarse, rep.certified
    );
    Ok(())
}
