//! Bessel residual against its refined and coarse upper bounds.
//!
//! ```text
//! cargo run --example counterpart_bessel
//! ```

use bessel_gruss::bounds::{
    counterpart_bounds, residual_identity_sides, CoefficientBox, Tolerance,
};
use bessel_gruss::space::{gram_schmidt, CoordinateSpace, IndexSet, OrthonormalFamily, Vector};
use num_complex::Complex64;

fn main() -> bessel_gruss::Result<()> {
    // x = (0.5, 0.3, 0.2) against the first two axes, coefficients in [0, 1].
    let space = CoordinateSpace::real(3)?;
    let family = OrthonormalFamily::certify(&space, space.standard_basis(), 1e-12)?;
    let index = IndexSet::new(vec![0, 1], 3)?;
    let x = Vector::from_real(&[0.5, 0.3, 0.2]);
    let bx = CoefficientBox::uniform_real(index, 0.0, 1.0)?;

    let rep = counterpart_bounds(&space, &x, &family, &bx, Tolerance::default())?;
    println!(
        "real:    residual {:.6} <= refined {:.6} <= coarse {:.6}",
        rep.residual, rep.refined, rep.coarse
    );
    println!(
        "         slack_inner {:.6}, slack_norm {:.6}, certified {}",
        rep.condition.slack_inner, rep.condition.slack_norm, rep.certified
    );
    let (left, right) = residual_identity_sides(&space, &x, &family, &bx)?;
    println!("         identity sides {left:.6} = {right:.6}");

    // A complex family from Gram-Schmidt, box centered near the coefficients.
    // Centering exactly on them would make refined equal the residual.
    let c = Complex64::new;
    let space = CoordinateSpace::complex(3)?;
    let family = gram_schmidt(
        &space,
        &[
            Vector::new(vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)]),
            Vector::new(vec![c(0.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)]),
        ],
        1e-12,
    )?;
    let x = Vector::new(vec![c(0.7, -0.2), c(-0.4, 0.9), c(1.1, 0.3)]);
    let centers: Vec<_> = family
        .members()
        .iter()
        .map(|e| bessel_gruss::space::inner_product(&space, &x, e).map(|v| v + c(0.1, -0.05)))
        .collect::<Result<_, _>>()?;
    let bx =
        CoefficientBox::from_center(IndexSet::all(2)?, &centers, &[c(1.0, 1.0), c(1.0, -1.0)])?;
    let rep = counterpart_bounds(&space, &x, &family, &bx, Tolerance::default())?;
    println!(
        "complex: residual {:.6} <= refined {:.6} <= coarse {:.6}",
        rep.residual, rep.refined, rep.coarse
    );
    println!("         certified {}", rep.certified);

    // Far outside the box: reported, not certified.
    let space = CoordinateSpace::real(2)?;
    let family = OrthonormalFamily::certify(&space, vec![Vector::from_real(&[1.0, 0.0])], 1e-12)?;
    let bx = CoefficientBox::uniform_real(IndexSet::all(1)?, -1.0, 1.0)?;
    let rep = counterpart_bounds(
        &space,
        &Vector::from_real(&[10.0, 0.0]),
        &family,
        &bx,
        Tolerance::default(),
    )?;
    println!(
        "outside: slack_inner {}, certified {}",
        rep.condition.slack_inner, rep.certified
    );
    Ok(())
}
