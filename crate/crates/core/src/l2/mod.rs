//! Weighted `L^2_rho(Omega)` backend over quadrature-discretized measures.
//!
//! A function is represented by its samples at the quadrature nodes, and
//! `<f, g> = sum_k w_k rho(s_k) f(s_k) conj(g(s_k))`. Because
//! [`WeightedL2Space`] implements [`InnerProductSpace`], the bound
//! computations in [`crate::bounds`] apply to it unchanged.
//!
//! Pointwise ("almost everywhere") conditions are checked at the nodes only.
//!
//! The conjugate on `g` is kept in the leading term of the Grüss deviation
//! `<f,g> - sum <f,f_i><f_i,g>`, so the complex case matches the abstract
//! inner product form.

mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BesselBoundReport, CoefficientBox, GrussBoundReport, Tolerance};
use crate::error::{Error, Result};
use crate::space::{
    combination, gram_schmidt, Field, InnerProductSpace, OrthonormalFamily, Scalar, Vector,
};

pub use quadrature::{DiscretizedMeasure, MeasureKind};

/// Node samples of a function.
pub type SampledFunction = Vector;

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedL2Space {
    measure: DiscretizedMeasure,
    rho: Vec<f64>,
    field: Field,
    effective: Vec<f64>,
}

impl WeightedL2Space {
    /// Folds `rho` into the quadrature weights once.
    pub fn new(measure: DiscretizedMeasure, rho: Vec<f64>, field: Field) -> Result<Self> {
        if rho.len() != measure.len() {
            return Err(Error::DimensionMismatch {
                expected: measure.len(),
                found: rho.len(),
            });
        }
        if let Some(k) = rho.iter().position(|r| !(r.is_finite() && *r >= 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "rho must be finite and nonnegative (node {k})"
            )));
        }
        let effective: Vec<f64> = measure
            .weights()
            .iter()
            .zip(&rho)
            .map(|(w, r)| w * r)
            .collect();
        if effective.iter().all(|&w| w == 0.0) {
            return Err(Error::InvalidParameter("rho vanishes at every node".into()));
        }
        Ok(Self {
            measure,
            rho,
            field,
            effective,
        })
    }

    /// `rho == 1` everywhere.
    pub fn unweighted(measure: DiscretizedMeasure, field: Field) -> Result<Self> {
        let rho = vec![1.0; measure.len()];
        Self::new(measure, rho, field)
    }

    pub fn measure(&self) -> &DiscretizedMeasure {
        &self.measure
    }

    pub fn rho(&self) -> &[f64] {
        &self.rho
    }

    pub fn effective_weights(&self) -> &[f64] {
        &self.effective
    }

    pub fn sample(&self, f: impl Fn(f64) -> Scalar) -> SampledFunction {
        self.measure.nodes().iter().map(|&s| f(s)).collect()
    }

    pub fn sample_real(&self, f: impl Fn(f64) -> f64) -> SampledFunction {
        self.sample(|s| Complex64::new(f(s), 0.0))
    }
}

impl InnerProductSpace for WeightedL2Space {
    fn field(&self) -> Field {
        self.field
    }

    fn dimension(&self) -> usize {
        self.measure.len()
    }

    fn inner_unchecked(&self, x: &Vector, y: &Vector) -> Scalar {
        x.iter()
            .zip(y.iter())
            .zip(&self.effective)
            .fold(Complex64::new(0.0, 0.0), |acc, ((a, b), w)| {
                acc + a * b.conj() * w
            })
    }
}

/// `sum_k w_k rho(s_k) f(s_k) conj(g(s_k))`
pub fn weighted_inner(
    space: &WeightedL2Space,
    f: &SampledFunction,
    g: &SampledFunction,
) -> Result<Scalar> {
    space.inner(f, g)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FamilyKind {
    /// `1, cos t, sin t, cos 2t, sin 2t, ...` with `t` mapped to one period
    /// of the measure's domain.
    Trig,
    /// Legendre polynomials on the domain mapped to `[-1, 1]`.
    Legendre,
    /// Node indicators scaled by `(w_k rho_k)^(-1/2)`.
    Indicator,
}

/// Builds `count` analytic prototypes and re-orthonormalizes them against
/// the weighted inner product.
pub fn build_family(
    space: &WeightedL2Space,
    kind: FamilyKind,
    count: usize,
    tol: f64,
) -> Result<OrthonormalFamily> {
    if count == 0 {
        return Err(Error::InvalidParameter(
            "family must have at least one member".into(),
        ));
    }
    if count > space.dimension() {
        return Err(Error::TooManyMembers {
            members: count,
            dimension: space.dimension(),
        });
    }
    let (a, b) = space.measure().domain();
    let prototypes: Vec<Vector> = match kind {
        FamilyKind::Trig => {
            let period = if space.measure().kind() == MeasureKind::Counting || b <= a {
                2.0 * PI
            } else {
                b - a
            };
            (0..count)
                .map(|j| {
                    let freq = j.div_ceil(2) as f64;
                    space.sample_real(|s| {
                        let t = 2.0 * PI * (s - a) / period;
                        match j {
                            0 => 1.0,
                            _ if j % 2 == 1 => (freq * t).cos(),
                            _ => (freq * t).sin(),
                        }
                    })
                })
                .collect()
        }
        FamilyKind::Legendre => {
            let (mid, half) = (0.5 * (a + b), 0.5 * (b - a).max(f64::MIN_POSITIVE));
            (0..count)
                .map(|deg| space.sample_real(|s| legendre(deg, (s - mid) / half)))
                .collect()
        }
        FamilyKind::Indicator => space
            .effective_weights()
            .iter()
            .take(count)
            .enumerate()
            .map(|(k, &w)| {
                if w == 0.0 {
                    return Err(Error::Degenerate {
                        index: k,
                        norm: 0.0,
                    });
                }
                let mut v = Vector::zeros(space.dimension());
                v.axpy(
                    Complex64::new(w.sqrt().recip(), 0.0),
                    &unit(space.dimension(), k),
                );
                Ok(v)
            })
            .collect::<Result<_>>()?,
    };
    gram_schmidt(space, &prototypes, tol)
}

fn unit(n: usize, k: usize) -> Vector {
    (0..n)
        .map(|i| Complex64::new(if i == k { 1.0 } else { 0.0 }, 0.0))
        .collect()
}

fn legendre(n: usize, t: f64) -> f64 {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return 1.0;
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p1
}

/// Outcome of the pointwise bracketing `sum lower_i f_i <= f <= sum upper_i f_i`
/// at the nodes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SandwichReport {
    pub holds: bool,
    /// `min_k f(s_k) - sum lower_i f_i(s_k)`
    pub min_margin_lower: f64,
    /// `min_k sum upper_i f_i(s_k) - f(s_k)`
    pub min_margin_upper: f64,
    /// Node with the most negative margin, when the check fails.
    pub violating_node: Option<usize>,
    pub tolerance: f64,
}

/// Checks the pointwise bracketing of `f` by the box's lower and upper
/// combinations. Real field only; the box entries must be real.
///
/// A relative tolerance is scaled by `max_k |f(s_k)|`.
pub fn sandwich_check(
    space: &WeightedL2Space,
    f: &SampledFunction,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> Result<SandwichReport> {
    if !space.field().is_real() {
        return Err(Error::RequiresRealField);
    }
    space.conform(f)?;
    bx.index().check_against(fam)?;
    for (position, &v) in bx.lower().iter().chain(bx.upper()).enumerate() {
        space.conform_scalar(position, v)?;
    }
    let n = space.dimension();
    let lower = combination(n, fam, bx.index(), bx.lower());
    let upper = combination(n, fam, bx.index(), bx.upper());

    let scale = f.iter().map(|v| v.re.abs()).fold(0.0, f64::max);
    let tolerance = tol.resolve(scale);

    let mut min_margin_lower = f64::INFINITY;
    let mut min_margin_upper = f64::INFINITY;
    let mut worst = (f64::INFINITY, 0usize);
    for k in 0..n {
        let lo = f[k].re - lower[k].re;
        let up = upper[k].re - f[k].re;
        min_margin_lower = min_margin_lower.min(lo);
        min_margin_upper = min_margin_upper.min(up);
        let m = lo.min(up);
        if m < worst.0 {
            worst = (m, k);
        }
    }
    let holds = min_margin_lower >= -tolerance && min_margin_upper >= -tolerance;
    Ok(SandwichReport {
        holds,
        min_margin_lower,
        min_margin_upper,
        violating_node: (!holds).then_some(worst.1),
        tolerance,
    })
}

/// Counterpart of Bessel's inequality in the weighted space.
pub fn l2_counterpart_report(
    space: &WeightedL2Space,
    f: &SampledFunction,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
    tol: Tolerance,
) -> Result<BesselBoundReport> {
    bounds::counterpart_bounds(space, f, fam, bx, tol)
}

/// Grüss-type bounds in the weighted space, with `<f, g> = int rho f conj(g) dmu`.
pub fn l2_gruss_report(
    space: &WeightedL2Space,
    f: &SampledFunction,
    g: &SampledFunction,
    fam: &OrthonormalFamily,
    box_f: &CoefficientBox,
    box_g: &CoefficientBox,
    tol: Tolerance,
) -> Result<GrussBoundReport> {
    bounds::gruss_bounds(space, f, g, fam, box_f, box_g, tol)
}

/// Grüss-type bounds for real functions bracketed pointwise by the boxes.
///
/// Fails with [`Error::SandwichFailed`] when either bracketing does not hold
/// at the nodes.
pub fn l2_sandwich_gruss(
    space: &WeightedL2Space,
    f: &SampledFunction,
    g: &SampledFunction,
    fam: &OrthonormalFamily,
    box_f: &CoefficientBox,
    box_g: &CoefficientBox,
    tol: Tolerance,
) -> Result<GrussBoundReport> {
    for (h, bx) in [(f, box_f), (g, box_g)] {
        let report = sandwich_check(space, h, fam, bx, tol)?;
        if !report.holds {
            return Err(Error::SandwichFailed(report));
        }
    }
    l2_gruss_report(space, f, g, fam, box_f, box_g, tol)
}
