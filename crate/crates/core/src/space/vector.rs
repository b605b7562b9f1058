use std::ops::Index;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::Scalar;

/// Dense coordinate vector, or the node samples of a function on a
/// discretized measure space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Vector(Vec<Scalar>);

impl Vector {
    pub fn new(coords: Vec<Scalar>) -> Self {
        Self(coords)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![Complex64::new(0.0, 0.0); len])
    }

    pub fn from_real(coords: &[f64]) -> Self {
        Self(coords.iter().map(|&re| Complex64::new(re, 0.0)).collect())
    }

    /// Builds a vector from `(re, im)` pairs.
    pub fn from_pairs(coords: &[(f64, f64)]) -> Self {
        Self(
            coords
                .iter()
                .map(|&(re, im)| Complex64::new(re, im))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[Scalar] {
        &self.0
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Scalar> {
        self.0.iter()
    }

    pub fn into_inner(self) -> Vec<Scalar> {
        self.0
    }

    /// `self += alpha * other`
    pub fn axpy(&mut self, alpha: Scalar, other: &Vector) {
        debug_assert_eq!(self.len(), other.len());
        for (a, b) in self.0.iter_mut().zip(other.0.iter()) {
            *a += alpha * b;
        }
    }

    pub fn scaled(&self, alpha: Scalar) -> Vector {
        Vector(self.0.iter().map(|v| alpha * v).collect())
    }

    pub fn add(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a + b)
                .collect(),
        )
    }

    pub fn sub(&self, other: &Vector) -> Vector {
        debug_assert_eq!(self.len(), other.len());
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| a - b)
                .collect(),
        )
    }

    /// Midpoint `(self + other) / 2`.
    pub fn midpoint(&self, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| (a + b) * 0.5)
                .collect(),
        )
    }

    /// Half difference `(self - other) / 2`.
    pub fn half_difference(&self, other: &Vector) -> Vector {
        Vector(
            self.0
                .iter()
                .zip(other.0.iter())
                .map(|(a, b)| (a - b) * 0.5)
                .collect(),
        )
    }

    pub fn real_parts(&self) -> Vec<f64> {
        self.0.iter().map(|v| v.re).collect()
    }
}

impl Index<usize> for Vector {
    type Output = Scalar;

    fn index(&self, i: usize) -> &Scalar {
        &self.0[i]
    }
}

impl From<Vec<Scalar>> for Vector {
    fn from(coords: Vec<Scalar>) -> Self {
        Self(coords)
    }
}

impl FromIterator<Scalar> for Vector {
    fn from_iter<T: IntoIterator<Item = Scalar>>(iter: T) -> Self {
        Self(iter.into_iter().collect())
    }
}
