//! Writes a CSV comparing values with refined and coarse bounds.
//!
//! ```text
//! cargo run --example tightness_table [out.csv]
//! ```

use bessel_gruss::bounds::{counterpart_bounds, gruss_bounds, CoefficientBox, Tolerance};
use bessel_gruss::report::{emit_tightness_table, write_tightness_csv, TightnessRow};
use bessel_gruss::sharpness::extremal_instance;
use bessel_gruss::space::{CoordinateSpace, IndexSet, OrthonormalFamily, Scalar, Vector};
use bessel_gruss::suite::{run_suite_with_rows, SuiteConfig};

fn main() -> bessel_gruss::Result<()> {
    let mut rows = Vec::new();
    rows.push(TightnessRow::from_bessel(
        "extremal",
        &extremal_instance(1.0)?.report(),
    ));

    let space = CoordinateSpace::real(3)?;
    let family = OrthonormalFamily::certify(&space, space.standard_basis(), 1e-12)?;
    let index = IndexSet::new(vec![0, 1], 3)?;
    let x = Vector::from_real(&[0.5, 0.3, 0.2]);
    let y = Vector::from_real(&[0.2, 0.6, 0.1]);
    let unit = CoefficientBox::uniform_real(index.clone(), 0.0, 1.0)?;
    rows.push(TightnessRow::from_gruss(
        "r3-pair",
        &gruss_bounds(&space, &x, &y, &family, &unit, &unit, Tolerance::default())?,
    ));
    let e0 = Vector::from_real(&[1.0, 0.0, 0.0]);
    let point =
        CoefficientBox::degenerate(IndexSet::new(vec![0], 3)?, vec![Scalar::new(1.0, 0.0)])?;
    rows.push(TightnessRow::from_bessel(
        "degenerate",
        &counterpart_bounds(&space, &e0, &family, &point, Tolerance::default())?,
    ));

    let cfg = SuiteConfig {
        instance_count: 2,
        dims: vec![4],
        family_sizes: vec![2],
        ..SuiteConfig::default()
    };
    rows.extend(run_suite_with_rows(&cfg, true)?.1);

    match std::env::args().nth(1) {
        Some(path) => {
            emit_tightness_table(&rows, path.as_ref())?;
            println!("wrote {} rows to {path}", rows.len());
        }
        None => write_tightness_csv(&rows, std::io::stdout().lock())?,
    }
    Ok(())
}
