//! `f = 2 + sin s` on one period, bracketed between constants.
//!
//! The residual equals the refined bound (pi), half the coarse bound.
//!
//! ```text
//! cargo run --example l2_trig_sandwich
//! ```

use std::f64::consts::PI;

use bessel_gruss::bounds::{CoefficientBox, Tolerance};
use bessel_gruss::l2::{
    build_family, l2_counterpart_report, l2_sandwich_gruss, sandwich_check, DiscretizedMeasure,
    FamilyKind, WeightedL2Space,
};
use bessel_gruss::space::{Field, IndexSet};

fn main() -> bessel_gruss::Result<()> {
    let measure = DiscretizedMeasure::periodic_trapezoid(0.0, 2.0 * PI, 1024)?;
    let space = WeightedL2Space::unweighted(measure, Field::Real)?;
    let family = build_family(&space, FamilyKind::Trig, 1, 1e-10)?;
    let f = space.sample_real(|s| 2.0 + s.sin());
    let g = space.sample_real(|s| 2.0 + s.cos());
    let r = (2.0 * PI).sqrt();

    let bx = CoefficientBox::uniform_real(IndexSet::all(1)?, r, 3.0 * r)?;
    let s = sandwich_check(&space, &f, &family, &bx, Tolerance::default())?;
    println!(
        "1 <= f <= 3: holds {}, margins {:.1e} {:.1e}",
        s.holds, s.min_margin_lower, s.min_margin_upper
    );

    let rep = l2_counterpart_report(&space, &f, &family, &bx, Tolerance::default())?;
    println!(
        "residual {:.10}  refined {:.10}  coarse {:.10}",
        rep.residual, rep.refined, rep.coarse
    );
    println!(
        "pi       {:.10}                    2 pi   {:.10}",
        PI,
        2.0 * PI
    );

    let gr = l2_sandwich_gruss(&space, &f, &g, &family, &bx, &bx, Tolerance::default())?;
    println!(
        "f, g = 2 + cos s: deviation {:.2e}, refined {:.6}, coarse {:.6}",
        gr.deviation.re, gr.refined, gr.coarse
    );

    let tight = CoefficientBox::uniform_real(IndexSet::all(1)?, r, 2.5 * r)?;
    let s = sandwich_check(&space, &f, &family, &tight, Tolerance::default())?;
    let node = s.violating_node.unwrap_or(0);
    println!(
        "f <= 2.5 fails: holds {}, worst node {} at s = {:.4}",
        s.holds,
        node,
        space.measure().nodes()[node]
    );
    Ok(())
}
