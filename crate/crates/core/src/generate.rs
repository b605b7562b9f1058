//! Random instances that satisfy the box condition by construction.
//!
//! A box is built around a vector `x` by choosing midpoints
//! `mid_i = <x, e_i> + noise` and then half widths `h_i` with
//! `sqrt(sum |h_i|^2) = (1 + u) ||x - sum mid_i e_i||`. Since the box half
//! diameter equals `sqrt(sum |h_i|^2)`, the norm form of the condition
//! holds with margin factor `1 + u`; `u = 0` gives boundary instances.

use num_complex::Complex64;
use rand::Rng;

use crate::bounds::CoefficientBox;
use crate::error::{Error, Result};
use crate::rng::{normal_scalar, normal_vector};
use crate::space::{
    coefficients_unchecked, combination, gram_schmidt, CoordinateSpace, Field, IndexSet,
    InnerProductSpace, OrthonormalFamily, Vector, DEFAULT_ORTHONORMAL_TOL,
};

#[derive(Debug, Clone)]
pub struct GeneratedInstance {
    pub space: CoordinateSpace,
    pub family: OrthonormalFamily,
    pub x: Vector,
    pub bx: CoefficientBox,
    /// Margin factor used for the box radius.
    pub margin: f64,
}

/// Gram–Schmidt on Gaussian vectors, redrawn on the (measure-zero)
/// degenerate event.
pub fn random_family<R: Rng + ?Sized>(
    rng: &mut R,
    space: &CoordinateSpace,
    size: usize,
) -> Result<OrthonormalFamily> {
    if size == 0 || size > space.dimension() {
        return Err(Error::InvalidParameter(format!(
            "family size {size} must be in 1..={}",
            space.dimension()
        )));
    }
    loop {
        let raw: Vec<Vector> = (0..size)
            .map(|_| normal_vector(rng, space.dimension(), space.field()))
            .collect();
        match gram_schmidt(space, &raw, DEFAULT_ORTHONORMAL_TOL) {
            Err(Error::Degenerate { .. }) => continue,
            other => return other,
        }
    }
}

/// Random half widths in `K^n` with `sum |h_i|^2 = radius^2`.
fn half_widths<R: Rng + ?Sized>(
    rng: &mut R,
    n: usize,
    field: Field,
    radius: f64,
) -> Vec<Complex64> {
    loop {
        let dir: Vec<Complex64> = (0..n).map(|_| normal_scalar(rng, field)).collect();
        let norm = dir.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-8 {
            return dir.into_iter().map(|v| v * (radius / norm)).collect();
        }
    }
}

/// A box satisfying the condition at every point of `anchors`, with radius
/// `(1 + margin)` times the largest anchor distance from the box center.
pub fn certified_box<R: Rng + ?Sized, S: InnerProductSpace + ?Sized>(
    rng: &mut R,
    space: &S,
    fam: &OrthonormalFamily,
    index: &IndexSet,
    anchors: &[&Vector],
    margin: f64,
) -> Result<CoefficientBox> {
    let first = anchors
        .first()
        .ok_or_else(|| Error::InvalidParameter("at least one anchor is required".into()))?;
    for a in anchors {
        space.conform(a)?;
    }
    let field = space.field();
    let coeffs = coefficients_unchecked(space, first, fam, index);
    let spread = rng.random::<f64>() * space.norm_sq_unchecked(first).sqrt()
        / (space.dimension() as f64).sqrt();
    let mid: Vec<Complex64> = coeffs
        .iter()
        .map(|c| c + normal_scalar(rng, field) * spread)
        .collect();
    let center = combination(space.dimension(), fam, index, &mid);
    let reach = anchors
        .iter()
        .map(|a| space.norm_sq_unchecked(&a.sub(&center)).max(0.0).sqrt())
        .fold(0.0, f64::max);
    let h = half_widths(rng, index.len(), field, (1.0 + margin) * reach);
    CoefficientBox::from_center(index.clone(), &mid, &h)
}

/// A box with Gaussian midpoints and half widths of the given scale,
/// with no regard for the condition.
pub fn unconstrained_box<R: Rng + ?Sized>(
    rng: &mut R,
    field: Field,
    index: &IndexSet,
    scale: f64,
) -> Result<CoefficientBox> {
    let mid: Vec<Complex64> = (0..index.len())
        .map(|_| normal_scalar(rng, field) * scale)
        .collect();
    let h: Vec<Complex64> = (0..index.len())
        .map(|_| normal_scalar(rng, field) * scale)
        .collect();
    CoefficientBox::from_center(index.clone(), &mid, &h)
}

/// Random certified instance with margin factor `u` drawn in `[0, 1]`.
pub fn generate_certified_instance<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    family_size: usize,
    field: Field,
) -> Result<GeneratedInstance> {
    let u = rng.random::<f64>();
    generate_instance_with_margin(rng, dim, family_size, field, u)
}

/// Random certified instance with an explicit margin factor.
pub fn generate_instance_with_margin<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    family_size: usize,
    field: Field,
    margin: f64,
) -> Result<GeneratedInstance> {
    if margin.is_nan() || margin < 0.0 {
        return Err(Error::InvalidParameter("margin must be nonnegative".into()));
    }
    let space = CoordinateSpace::new(field, dim)?;
    let family = random_family(rng, &space, family_size)?;
    let index = IndexSet::all(family_size)?;
    let x = normal_vector(rng, dim, field);
    let bx = certified_box(rng, &space, &family, &index, &[&x], margin)?;
    Ok(GeneratedInstance {
        space,
        family,
        x,
        bx,
        margin,
    })
}
