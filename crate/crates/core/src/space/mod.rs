//! Inner product space substrate.
//!
//! Scalars are always stored as complex numbers; the real field is a tag on
//! the space, enforced at conformance time (`im == 0` exactly), so every
//! bound has a single implementation for both fields.
//!
//! Inner products are linear in the first argument and conjugate-linear in
//! the second: `<x, y> = sum_k x_k * conj(y_k)`. With that convention the
//! Fourier coefficient of `x` against `e` is `<x, e>`.

mod family;
mod vector;

use std::collections::BTreeMap;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use family::{gram_schmidt, verify_orthonormal, OrthonormalFamily, OrthonormalityReport};
pub use vector::Vector;

pub type Scalar = Complex64;

/// Default tolerance for orthonormality certificates.
pub const DEFAULT_ORTHONORMAL_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Field {
    Real,
    Complex,
}

impl Field {
    pub fn is_real(self) -> bool {
        matches!(self, Field::Real)
    }
}

impl std::fmt::Display for Field {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Field::Real => f.write_str("real"),
            Field::Complex => f.write_str("complex"),
        }
    }
}

/// A finite-dimensional inner product space over R or C.
///
/// Implementors supply the raw sesquilinear form; conformance checks and
/// the derived norm are provided.
pub trait InnerProductSpace {
    fn field(&self) -> Field;

    fn dimension(&self) -> usize;

    /// `<x, y>` without conformance checks. Callers guarantee both vectors
    /// have length `dimension()`.
    fn inner_unchecked(&self, x: &Vector, y: &Vector) -> Scalar;

    fn conform(&self, x: &Vector) -> Result<()> {
        if x.len() != self.dimension() {
            return Err(Error::DimensionMismatch {
                expected: self.dimension(),
                found: x.len(),
            });
        }
        for (position, v) in x.iter().enumerate() {
            if !v.re.is_finite() || !v.im.is_finite() {
                return Err(Error::NonFinite { position });
            }
            if self.field().is_real() && v.im != 0.0 {
                return Err(Error::ImaginaryInRealField { position });
            }
        }
        Ok(())
    }

    /// Checks a scalar against the field tag.
    fn conform_scalar(&self, position: usize, v: Scalar) -> Result<()> {
        if !v.re.is_finite() || !v.im.is_finite() {
            return Err(Error::NonFinite { position });
        }
        if self.field().is_real() && v.im != 0.0 {
            return Err(Error::ImaginaryInRealField { position });
        }
        Ok(())
    }

    fn inner(&self, x: &Vector, y: &Vector) -> Result<Scalar> {
        self.conform(x)?;
        self.conform(y)?;
        Ok(self.inner_unchecked(x, y))
    }

    fn norm_sq_unchecked(&self, x: &Vector) -> f64 {
        self.inner_unchecked(x, x).re
    }

    fn norm(&self, x: &Vector) -> Result<f64> {
        self.conform(x)?;
        Ok(self.norm_sq_unchecked(x).max(0.0).sqrt())
    }
}

/// `K^n` with the standard inner product.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CoordinateSpace {
    field: Field,
    dimension: usize,
}

impl CoordinateSpace {
    pub fn new(field: Field, dimension: usize) -> Result<Self> {
        if dimension == 0 {
            return Err(Error::ZeroDimension);
        }
        Ok(Self { field, dimension })
    }

    pub fn real(dimension: usize) -> Result<Self> {
        Self::new(Field::Real, dimension)
    }

    pub fn complex(dimension: usize) -> Result<Self> {
        Self::new(Field::Complex, dimension)
    }

    /// The standard basis `e_1, ..., e_n`.
    pub fn standard_basis(&self) -> Vec<Vector> {
        (0..self.dimension)
            .map(|i| unit(self.dimension, i))
            .collect()
    }
}

fn unit(n: usize, i: usize) -> Vector {
    (0..n)
        .map(|k| Complex64::new(if k == i { 1.0 } else { 0.0 }, 0.0))
        .collect()
}

impl InnerProductSpace for CoordinateSpace {
    fn field(&self) -> Field {
        self.field
    }

    fn dimension(&self) -> usize {
        self.dimension
    }

    fn inner_unchecked(&self, x: &Vector, y: &Vector) -> Scalar {
        x.iter()
            .zip(y.iter())
            .fold(Complex64::new(0.0, 0.0), |acc, (a, b)| acc + a * b.conj())
    }
}

/// A finite, nonempty, strictly increasing set of family positions.
///
/// Positions are zero-based.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(transparent)]
pub struct IndexSet(Vec<usize>);

impl IndexSet {
    pub fn new(indices: Vec<usize>, family_len: usize) -> Result<Self> {
        if indices.is_empty() {
            return Err(Error::EmptyIndexSet);
        }
        for (position, w) in indices.windows(2).enumerate() {
            if w[0] >= w[1] {
                return Err(Error::UnorderedIndexSet {
                    position: position + 1,
                });
            }
        }
        if let Some(&index) = indices.iter().find(|&&i| i >= family_len) {
            return Err(Error::IndexOutOfRange {
                index,
                len: family_len,
            });
        }
        Ok(Self(indices))
    }

    /// Every member of a family of `len` vectors.
    pub fn all(len: usize) -> Result<Self> {
        Self::new((0..len).collect(), len)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().copied()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }

    pub(crate) fn check_against(&self, fam: &OrthonormalFamily) -> Result<()> {
        match self.0.last() {
            Some(&last) if last >= fam.len() => Err(Error::IndexOutOfRange {
                index: last,
                len: fam.len(),
            }),
            _ => Ok(()),
        }
    }
}

pub fn inner_product<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    y: &Vector,
) -> Result<Scalar> {
    space.inner(x, y)
}

pub fn norm<S: InnerProductSpace + ?Sized>(space: &S, x: &Vector) -> Result<f64> {
    space.norm(x)
}

/// `<x, e_i>` for every `i` in `index`, keyed by family position.
pub fn fourier_coefficients<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> Result<BTreeMap<usize, Scalar>> {
    space.conform(x)?;
    index.check_against(fam)?;
    Ok(index
        .iter()
        .map(|i| (i, space.inner_unchecked(x, fam.member(i))))
        .collect())
}

/// Coefficients aligned with `index` order. Assumes conformance.
pub(crate) fn coefficients_unchecked<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> Vec<Scalar> {
    index
        .iter()
        .map(|i| space.inner_unchecked(x, fam.member(i)))
        .collect()
}

/// `sum_i c_i e_i` over `index`, with `coeffs` aligned to `index`.
pub(crate) fn combination(
    dimension: usize,
    fam: &OrthonormalFamily,
    index: &IndexSet,
    coeffs: &[Scalar],
) -> Vector {
    let mut out = Vector::zeros(dimension);
    for (i, &c) in index.iter().zip(coeffs) {
        out.axpy(c, fam.member(i));
    }
    out
}

/// `x - sum_i <x, e_i> e_i`, the component of `x` orthogonal to the span.
pub fn projection_residual<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    index: &IndexSet,
) -> Result<Vector> {
    space.conform(x)?;
    index.check_against(fam)?;
    let coeffs = coefficients_unchecked(space, x, fam, index);
    Ok(x.sub(&combination(space.dimension(), fam, index, &coeffs)))
}
