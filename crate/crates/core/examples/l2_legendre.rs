//! Legendre family on a Gauss-Legendre grid, with a weight.
//!
//! ```text
//! cargo run --example l2_legendre
//! ```

use std::f64::consts::E;

use bessel_gruss::bounds::{CoefficientBox, Tolerance};
use bessel_gruss::l2::{
    build_family, l2_counterpart_report, l2_gruss_report, DiscretizedMeasure, FamilyKind,
    WeightedL2Space,
};
use bessel_gruss::space::{Field, IndexSet};

fn main() -> bessel_gruss::Result<()> {
    let measure = DiscretizedMeasure::gauss_legendre(-1.0, 1.0, 32)?;
    let space = WeightedL2Space::unweighted(measure.clone(), Field::Real)?;
    let family = build_family(&space, FamilyKind::Legendre, 4, 1e-10)?;
    println!(
        "legendre family of 4, gram defect {:.1e}",
        family.gram_defect()
    );

    // Against the constant member only: e^-1 <= exp s <= e on [-1, 1].
    let f = space.sample_real(f64::exp);
    let g = space.sample_real(|s| s);
    let r = 2f64.sqrt();
    let first = IndexSet::new(vec![0], 4)?;
    let box_f = CoefficientBox::uniform_real(first.clone(), r / E, r * E)?;
    let box_g = CoefficientBox::uniform_real(first, -r, r)?;
    let rep = l2_counterpart_report(&space, &f, &family, &box_f, Tolerance::default())?;
    println!(
        "exp: residual {:.6} refined {:.6} coarse {:.6}",
        rep.residual, rep.refined, rep.coarse
    );
    let gr = l2_gruss_report(
        &space,
        &f,
        &g,
        &family,
        &box_f,
        &box_g,
        Tolerance::default(),
    )?;
    println!(
        "exp, s: deviation {:.6} refined {:.6} coarse {:.6}",
        gr.deviation.re, gr.refined, gr.coarse
    );

    // More members shrink the residual.
    for k in 1..=4 {
        let ix = IndexSet::all(k)?;
        let fam = build_family(&space, FamilyKind::Legendre, k, 1e-10)?;
        let bx = CoefficientBox::uniform_real(ix.clone(), -3.0, 3.0)?;
        let rep = l2_counterpart_report(&space, &f, &fam, &bx, Tolerance::default())?;
        println!("  {k} members: residual {:.3e}", rep.residual);
    }

    // Weight rho(s) = 1 + s^2 changes the geometry, not the API.
    let rho = measure.nodes().iter().map(|s| 1.0 + s * s).collect();
    let weighted = WeightedL2Space::new(measure, rho, Field::Real)?;
    let fam = build_family(&weighted, FamilyKind::Legendre, 3, 1e-10)?;
    println!(
        "weighted family of 3, gram defect {:.1e}",
        fam.gram_defect()
    );
    Ok(())
}
