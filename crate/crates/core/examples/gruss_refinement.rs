//! Grüss-type deviation bounds for two vectors, refined versus coarse.
//!
//! ```text
//! cargo run --example gruss_refinement
//! ```

use bessel_gruss::bounds::{bessel_residual, gruss_bounds, CoefficientBox, Tolerance};
use bessel_gruss::space::{CoordinateSpace, IndexSet, OrthonormalFamily, Vector};

fn main() -> bessel_gruss::Result<()> {
    let space = CoordinateSpace::real(3)?;
    let family = OrthonormalFamily::certify(&space, space.standard_basis(), 1e-12)?;
    let index = IndexSet::new(vec![0, 1], 3)?;
    let x = Vector::from_real(&[0.5, 0.3, 0.2]);
    let y = Vector::from_real(&[0.2, 0.6, 0.1]);
    let unit = CoefficientBox::uniform_real(index.clone(), 0.0, 1.0)?;

    let g = gruss_bounds(&space, &x, &y, &family, &unit, &unit, Tolerance::default())?;
    println!("deviation {:.7}", g.deviation.re);
    println!(
        "refined   {:.7}  (coarse minus sqrt(slack_x * slack_y))",
        g.refined
    );
    println!("coarse    {:.7}", g.coarse);
    println!(
        "slacks    {:.2} {:.2}, certified {}",
        g.condition_x.slack_inner, g.condition_y.slack_inner, g.certified
    );

    let rx = bessel_residual(&space, &x, &family, &index)?;
    let ry = bessel_residual(&space, &y, &family, &index)?;
    println!(
        "|deviation|^2 {:.6} <= residual product {:.6}",
        g.deviation.norm_sqr(),
        rx * ry
    );

    // Wider boxes loosen both bounds.
    println!("\n{:>6} {:>10} {:>10}", "width", "refined", "coarse");
    for w in [1.0, 2.0, 4.0] {
        let bx = CoefficientBox::uniform_real(index.clone(), 0.5 - w / 2.0, 0.5 + w / 2.0)?;
        let g = gruss_bounds(&space, &x, &y, &family, &bx, &bx, Tolerance::default())?;
        println!("{w:>6} {:>10.6} {:>10.6}", g.refined, g.coarse);
    }
    Ok(())
}
