//! Box conditions and the inequality chains built on them.
//!
//! A [`CoefficientBox`] holds per-index pairs `(lower_i, upper_i)`. With
//! `A = sum upper_i e_i` and `a = sum lower_i e_i` the box certifies `x` when
//! `Re<A - x, x - a> >= 0`, equivalently
//! `||x - (A + a)/2|| <= (1/2) (sum |upper_i - lower_i|^2)^(1/2)`.
//! Under that certificate
//!
//! ```text
//! 0 <= ||x||^2 - sum |<x,e_i>|^2 <= (1/4) sum |upper_i - lower_i|^2 - Re<A - x, x - a>
//!                                 <= (1/4) sum |upper_i - lower_i|^2
//! ```
//!
//! and, for two certified vectors, the Grüss-type chain on
//! `<x,y> - sum <x,e_i><e_i,y>`.
//!
//! Sums run over the chosen index set `F` throughout.
//!
//! The two-vector companion bound (`companion_bound`) is stated with
//! `(1/4) sum |upper_i - lower_i|^2`, without a square root on the sum;
//! the square-rooted variant is not dimensionally consistent with the
//! one-vector chain and is not used.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{
    coefficients_unchecked, combination, IndexSet, InnerProductSpace, OrthonormalFamily, Scalar,
    Vector,
};

/// Default relative certification tolerance.
pub const DEFAULT_RELATIVE_TOL: f64 = 1e-10;

/// Tolerance used when deciding whether a slack is nonnegative.
///
/// A relative tolerance is multiplied by the instance scale
/// `||x||^2 + (1/4) sum |upper_i - lower_i|^2`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "value")]
pub enum Tolerance {
    Absolute(f64),
    Relative(f64),
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::Relative(DEFAULT_RELATIVE_TOL)
    }
}

impl Tolerance {
    pub fn resolve(self, scale: f64) -> f64 {
        match self {
            Tolerance::Absolute(t) => t,
            Tolerance::Relative(r) => r * scale,
        }
    }
}

/// Per-index bounds `(lower_i, upper_i)` on the expansion coefficients.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientBox {
    index: IndexSet,
    lower: Vec<Scalar>,
    upper: Vec<Scalar>,
    #[serde(skip)]
    diameter_sq: f64,
}

impl CoefficientBox {
    /// `lower` and `upper` are aligned with `index`.
    pub fn new(index: IndexSet, lower: Vec<Scalar>, upper: Vec<Scalar>) -> Result<Self> {
        if lower.len() != index.len() || upper.len() != index.len() {
            return Err(Error::BoxMismatch(format!(
                "{} indices, {} lower and {} upper bounds",
                index.len(),
                lower.len(),
                upper.len()
            )));
        }
        let diameter_sq: f64 = lower
            .iter()
            .zip(&upper)
            .map(|(l, u)| (u - l).norm_sqr())
            .sum();
        if !diameter_sq.is_finite() {
            return Err(Error::BoxMismatch("non-finite bounds".into()));
        }
        Ok(Self {
            index,
            lower,
            upper,
            diameter_sq,
        })
    }

    /// The same real interval `[lower, upper]` at every index.
    pub fn uniform_real(index: IndexSet, lower: f64, upper: f64) -> Result<Self> {
        let n = index.len();
        Self::new(
            index,
            vec![Complex64::new(lower, 0.0); n],
            vec![Complex64::new(upper, 0.0); n],
        )
    }

    /// Box with `lower = upper = centers`.
    pub fn degenerate(index: IndexSet, centers: Vec<Scalar>) -> Result<Self> {
        Self::new(index, centers.clone(), centers)
    }

    /// Box `center_i ± half_width_i`.
    pub fn from_center(
        index: IndexSet,
        centers: &[Scalar],
        half_widths: &[Scalar],
    ) -> Result<Self> {
        if centers.len() != half_widths.len() {
            return Err(Error::BoxMismatch(
                "centers and half widths differ in length".into(),
            ));
        }
        let lower = centers
            .iter()
            .zip(half_widths)
            .map(|(c, h)| c - h)
            .collect();
        let upper = centers
            .iter()
            .zip(half_widths)
            .map(|(c, h)| c + h)
            .collect();
        Self::new(index, lower, upper)
    }

    pub fn index(&self) -> &IndexSet {
        &self.index
    }

    pub fn lower(&self) -> &[Scalar] {
        &self.lower
    }

    pub fn upper(&self) -> &[Scalar] {
        &self.upper
    }

    /// `sum |upper_i - lower_i|^2`
    pub fn diameter_sq(&self) -> f64 {
        self.diameter_sq
    }

    /// `(1/4) sum |upper_i - lower_i|^2`
    pub fn half_diameter_sq(&self) -> f64 {
        0.25 * self.diameter_sq
    }

    pub fn midpoints(&self) -> Vec<Scalar> {
        self.lower
            .iter()
            .zip(&self.upper)
            .map(|(l, u)| (l + u) * 0.5)
            .collect()
    }

    /// Box scaled by a real factor.
    pub fn scaled(&self, factor: f64) -> Self {
        let lower = self.lower.iter().map(|v| v * factor).collect();
        let upper = self.upper.iter().map(|v| v * factor).collect();
        Self::new(self.index.clone(), lower, upper).expect("scaling preserves shape")
    }
}

/// Both forms of the box condition for one vector.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    /// `Re<A - x, x - a>`
    pub slack_inner: f64,
    /// `(1/2) sqrt(sum |upper_i - lower_i|^2) - ||x - (A + a)/2||`
    pub slack_norm: f64,
    pub holds: bool,
    pub tolerance: f64,
    /// Both slacks exceed the tolerance in magnitude but disagree in sign.
    pub sign_conflict: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BesselBoundReport {
    pub residual: f64,
    pub refined: f64,
    pub coarse: f64,
    #[serde(flatten)]
    pub condition: ConditionReport,
    pub certified: bool,
}

impl BesselBoundReport {
    /// Smallest step margin of `0 <= residual <= refined <= coarse`.
    pub fn chain_margin(&self) -> f64 {
        self.residual
            .min(self.refined - self.residual)
            .min(self.coarse - self.refined)
    }

    /// The chain holds within `tol`. Only meaningful when certified.
    pub fn chain_holds(&self, tol: f64) -> bool {
        self.chain_margin() >= -tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GrussBoundReport {
    /// `<x,y> - sum <x,e_i><e_i,y>`
    pub deviation: Scalar,
    pub refined: f64,
    pub coarse: f64,
    pub condition_x: ConditionReport,
    pub condition_y: ConditionReport,
    pub certified: bool,
    /// Tolerance for comparing `|deviation|` against the bounds.
    pub tolerance: f64,
}

impl GrussBoundReport {
    /// Smallest step margin of `|deviation| <= refined <= coarse`, together
    /// with `refined >= 0`.
    pub fn chain_margin(&self) -> f64 {
        (self.refined - self.deviation.norm())
            .min(self.coarse - self.refined)
            .min(self.refined)
    }

    pub fn chain_holds(&self, tol: f64) -> bool {
        self.chain_margin() >= -tol
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompanionReport {
    pub re_deviation: f64,
    pub bound: f64,
    pub certified: bool,
    /// Box condition evaluated at `(x + y)/2`.
    pub condition: ConditionReport,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompanionAbsReport {
    pub abs_re_deviation: f64,
    pub bound: f64,
    pub certified: bool,
    /// Box condition at `(x + y)/2`.
    pub condition_sum: ConditionReport,
    /// Box condition at `(x - y)/2`.
    pub condition_difference: ConditionReport,
}

fn validate<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> Result<()> {
    space.conform(x)?;
    index.check_against(fam)?;
    if let Some(m) = fam.members().first() {
        if m.len() != space.dimension() {
            return Err(Error::DimensionMismatch {
                expected: space.dimension(),
                found: m.len(),
            });
        }
    }
    Ok(())
}

fn validate_box<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
) -> Result<()> {
    validate(space, x, fam, bx.index())?;
    for (position, &v) in bx.lower.iter().chain(&bx.upper).enumerate() {
        space.conform_scalar(position, v)?;
    }
    Ok(())
}

/// `||x||^2 + (1/4) sum |upper_i - lower_i|^2`, the magnitude relative
/// tolerances are measured against.
pub fn instance_scale<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    bx: &CoefficientBox,
) -> f64 {
    space.norm_sq_unchecked(x) + bx.half_diameter_sq()
}

fn slack_inner_unchecked<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
) -> f64 {
    let dim = space.dimension();
    let upper = combination(dim, fam, bx.index(), bx.upper());
    let lower = combination(dim, fam, bx.index(), bx.lower());
    space.inner_unchecked(&upper.sub(x), &x.sub(&lower)).re
}

fn slack_norm_unchecked<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
) -> f64 {
    let center = combination(space.dimension(), fam, bx.index(), &bx.midpoints());
    let dist = space.norm_sq_unchecked(&x.sub(&center)).max(0.0).sqrt();
    0.5 * bx.diameter_sq().sqrt() - dist
}

/// `Re<sum upper_i e_i - x, x - sum lower_i e_i>`, unclamped.
pub fn condition_slack_inner<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
) -> Result<f64> {
    validate_box(space, x, fam, bx)?;
    Ok(slack_inner_unchecked(space, x, fam, bx))
}

/// `(1/2) sqrt(sum |upper_i - lower_i|^2) - ||x - sum mid_i e_i||`.
pub fn condition_slack_norm<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
) -> Result<f64> {
    validate_box(space, x, fam, bx)?;
    Ok(slack_norm_unchecked(space, x, fam, bx))
}

fn condition_unchecked<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> ConditionReport {
    let tolerance = tol.resolve(instance_scale(space, x, bx));
    let slack_inner = slack_inner_unchecked(space, x, fam, bx);
    let slack_norm = slack_norm_unchecked(space, x, fam, bx);
    let sign_conflict = slack_inner.abs() > tolerance
        && slack_norm.abs() > tolerance
        && (slack_inner > 0.0) != (slack_norm > 0.0);
    ConditionReport {
        slack_inner,
        slack_norm,
        holds: slack_inner >= -tolerance,
        tolerance,
        sign_conflict,
    }
}

/// Evaluates both forms of the box condition. `holds` is decided by the
/// inner-product form; the norm form is diagnostic.
pub fn check_condition<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> Result<ConditionReport> {
    validate_box(space, x, fam, bx)?;
    Ok(condition_unchecked(space, x, fam, bx, tol))
}

fn residual_unchecked<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> f64 {
    let captured: f64 = coefficients_unchecked(space, x, fam, index)
        .iter()
        .map(|c| c.norm_sqr())
        .sum();
    space.norm_sq_unchecked(x) - captured
}

/// `||x||^2 - sum_{i in F} |<x, e_i>|^2`
pub fn bessel_residual<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> Result<f64> {
    validate(space, x, fam, index)?;
    Ok(residual_unchecked(space, x, fam, index))
}

/// Both sides of the residual identity
///
/// ```text
/// ||x||^2 - sum |<x,e_i>|^2
///   = sum Re[(upper_i - <x,e_i>)(conj<x,e_i> - conj lower_i)] - Re<A - x, x - a>
/// ```
///
/// returned as `(left, right)`.
pub fn residual_identity_sides<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
) -> Result<(f64, f64)> {
    validate_box(space, x, fam, bx)?;
    let left = residual_unchecked(space, x, fam, bx.index());
    let coeffs = coefficients_unchecked(space, x, fam, bx.index());
    let coefficient_term: f64 = coeffs
        .iter()
        .zip(bx.lower().iter().zip(bx.upper()))
        .map(|(c, (lo, up))| ((up - c) * (c.conj() - lo.conj())).re)
        .sum();
    let right = coefficient_term - slack_inner_unchecked(space, x, fam, bx);
    Ok((left, right))
}

fn counterpart_unchecked<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> BesselBoundReport {
    let condition = condition_unchecked(space, x, fam, bx, tol);
    let coarse = bx.half_diameter_sq();
    BesselBoundReport {
        residual: residual_unchecked(space, x, fam, bx.index()),
        refined: coarse - condition.slack_inner,
        coarse,
        condition,
        certified: condition.holds,
    }
}

/// Counterpart of Bessel's inequality: residual, refined and coarse bounds.
///
/// A failing box condition is reported through `certified = false`; the
/// numeric values are filled in regardless.
pub fn counterpart_bounds<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> Result<BesselBoundReport> {
    validate_box(space, x, fam, bx)?;
    Ok(counterpart_unchecked(space, x, fam, bx, tol))
}

fn deviation_unchecked<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> Scalar {
    let cx = coefficients_unchecked(space, x, fam, index);
    let cy = coefficients_unchecked(space, y, fam, index);
    let projected: Scalar = cx.iter().zip(&cy).map(|(a, b)| a * b.conj()).sum();
    space.inner_unchecked(x, y) - projected
}

/// `<x, y> - sum_{i in F} <x, e_i><e_i, y>`
pub fn gruss_deviation<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> Result<Scalar> {
    validate(space, x, fam, index)?;
    space.conform(y)?;
    Ok(deviation_unchecked(space, x, y, fam, index))
}

/// Grüss-type bounds on `|<x,y> - sum <x,e_i><e_i,y>|`.
///
/// `coarse = (1/4) sqrt(Dx) sqrt(Dy)` with `D = sum |upper_i - lower_i|^2`,
/// and `refined = coarse - sqrt(slack_x) sqrt(slack_y)`, slacks clamped at
/// zero. Certified iff both box conditions hold.
pub fn gruss_bounds<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    box_x: &CoefficientBox,
    box_y: &CoefficientBox,
    tol: Tolerance,
) -> Result<GrussBoundReport> {
    validate_box(space, x, fam, box_x)?;
    validate_box(space, y, fam, box_y)?;
    if box_x.index() != box_y.index() {
        return Err(Error::BoxMismatch(
            "the two boxes range over different index sets".into(),
        ));
    }
    let condition_x = condition_unchecked(space, x, fam, box_x, tol);
    let condition_y = condition_unchecked(space, y, fam, box_y, tol);
    let coarse = 0.25 * box_x.diameter_sq().sqrt() * box_y.diameter_sq().sqrt();
    let refined =
        coarse - condition_x.slack_inner.max(0.0).sqrt() * condition_y.slack_inner.max(0.0).sqrt();
    let scale = (instance_scale(space, x, box_x) * instance_scale(space, y, box_y)).sqrt();
    Ok(GrussBoundReport {
        deviation: deviation_unchecked(space, x, y, fam, box_x.index()),
        refined,
        coarse,
        condition_x,
        condition_y,
        certified: condition_x.holds && condition_y.holds,
        tolerance: tol.resolve(scale),
    })
}

/// One-sided bound `Re[<x,y> - sum <x,e_i><e_i,y>] <= (1/4) sum |upper_i - lower_i|^2`
/// under the box condition at `(x + y)/2`.
pub fn companion_bound<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> Result<CompanionReport> {
    validate_box(space, x, fam, bx)?;
    space.conform(y)?;
    let mid = x.midpoint(y);
    let condition = condition_unchecked(space, &mid, fam, bx, tol);
    Ok(CompanionReport {
        re_deviation: deviation_unchecked(space, x, y, fam, bx.index()).re,
        bound: bx.half_diameter_sq(),
        certified: condition.holds,
        condition,
    })
}

/// Two-sided version of [`companion_bound`], certified when the box
/// condition holds at both `(x + y)/2` and `(x - y)/2`.
pub fn companion_abs_bound<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> Result<CompanionAbsReport> {
    validate_box(space, x, fam, bx)?;
    space.conform(y)?;
    let condition_sum = condition_unchecked(space, &x.midpoint(y), fam, bx, tol);
    let condition_difference = condition_unchecked(space, &x.half_difference(y), fam, bx, tol);
    Ok(CompanionAbsReport {
        abs_re_deviation: deviation_unchecked(space, x, y, fam, bx.index()).re.abs(),
        bound: bx.half_diameter_sq(),
        certified: condition_sum.holds && condition_difference.holds,
        condition_sum,
        condition_difference,
    })
}

/// Truth values of the two scalar inequalities the chains rest on:
///
/// * `Re[a conj(b)] <= (1/4)|a + b|^2`
/// * `(m^2 - n^2)(p^2 - q^2) <= (mp - nq)^2`
///
/// Both are compared with a round-off allowance of a few ulps of the
/// magnitudes involved, since each is an equality on a nontrivial set.
pub fn scalar_lemmas_check(a: Scalar, b: Scalar, m: f64, n: f64, p: f64, q: f64) -> (bool, bool) {
    const ALLOWANCE: f64 = 8.0 * f64::EPSILON;
    let lhs = (a * b.conj()).re;
    let rhs = 0.25 * (a + b).norm_sqr();
    let first = lhs <= rhs + ALLOWANCE * (a.norm_sqr() + b.norm_sqr());

    let lhs = (m * m - n * n) * (p * p - q * q);
    let rhs = (m * p - n * q).powi(2);
    let second = lhs <= rhs + ALLOWANCE * (m * m + n * n) * (p * p + q * q);
    (first, second)
}

/// `Re<z, u> <= (1/4)||z + u||^2` in `space`, with the same round-off
/// allowance as [`scalar_lemmas_check`].
pub fn vector_lemma_check<S: InnerProductSpace + ?Sized>(
    space: &S,
    z: &Vector,
    u: &Vector,
) -> Result<bool> {
    space.conform(z)?;
    space.conform(u)?;
    let lhs = space.inner_unchecked(z, u).re;
    let rhs = 0.25 * space.norm_sq_unchecked(&z.add(u));
    let magnitude = space.norm_sq_unchecked(z) + space.norm_sq_unchecked(u);
    Ok(lhs <= rhs + 8.0 * f64::EPSILON * z.len().max(1) as f64 * magnitude)
}
