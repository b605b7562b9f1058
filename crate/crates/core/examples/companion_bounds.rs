//! One- and two-sided bounds on Re(deviation) from a midpoint condition.
//!
//! ```text
//! cargo run --example companion_bounds
//! ```

use bessel_gruss::bounds::{companion_abs_bound, companion_bound, CoefficientBox, Tolerance};
use bessel_gruss::space::{CoordinateSpace, IndexSet, OrthonormalFamily, Vector};

fn main() -> bessel_gruss::Result<()> {
    let space = CoordinateSpace::real(3)?;
    let family = OrthonormalFamily::certify(&space, space.standard_basis(), 1e-12)?;
    let index = IndexSet::new(vec![0, 1], 3)?;
    let x = Vector::from_real(&[0.5, 0.3, 0.2]);
    let y = Vector::from_real(&[0.2, 0.6, 0.1]);

    let unit = CoefficientBox::uniform_real(index.clone(), 0.0, 1.0)?;
    let c = companion_bound(&space, &x, &x, &family, &unit, Tolerance::default())?;
    println!(
        "x = y:   Re dev {:.4} <= {:.4}, certified {}",
        c.re_deviation, c.bound, c.certified
    );

    let c = companion_bound(&space, &x, &y, &family, &unit, Tolerance::default())?;
    println!(
        "x, y:    Re dev {:.4} <= {:.4}, certified {}",
        c.re_deviation, c.bound, c.certified
    );

    // The two-sided form also needs (x - y)/2 inside the box.
    let sym = CoefficientBox::uniform_real(index, -1.0, 1.0)?;
    let c = companion_abs_bound(&space, &x, &y, &family, &sym, Tolerance::default())?;
    println!(
        "two-sided: |Re dev| {:.4} <= {:.4}, sum slack {:.4}, difference slack {:.4}, certified {}",
        c.abs_re_deviation,
        c.bound,
        c.condition_sum.slack_inner,
        c.condition_difference.slack_inner,
        c.certified
    );
    Ok(())
}
