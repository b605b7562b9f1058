use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasureKind {
    Counting,
    PeriodicTrapezoid,
    GaussLegendre,
}

impl std::fmt::Display for MeasureKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            MeasureKind::Counting => "counting",
            MeasureKind::PeriodicTrapezoid => "periodic-trapezoid",
            MeasureKind::GaussLegendre => "gauss-legendre",
        })
    }
}

/// A measure represented by a node/weight quadrature rule.
#[derive(Debug, Clone, PartialEq)]
pub struct DiscretizedMeasure {
    kind: MeasureKind,
    nodes: Vec<f64>,
    weights: Vec<f64>,
    domain: (f64, f64),
}

impl DiscretizedMeasure {
    /// Validates an explicit rule: equal lengths, finite nodes, positive weights.
    pub fn from_rule(kind: MeasureKind, nodes: Vec<f64>, weights: Vec<f64>) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::ZeroDimension);
        }
        if nodes.len() != weights.len() {
            return Err(Error::DimensionMismatch {
                expected: nodes.len(),
                found: weights.len(),
            });
        }
        if let Some(position) = nodes.iter().position(|s| !s.is_finite()) {
            return Err(Error::NonFinite { position });
        }
        if let Some(k) = weights.iter().position(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(Error::InvalidParameter(format!(
                "quadrature weight {k} must be positive and finite"
            )));
        }
        let lo = nodes.iter().copied().fold(f64::INFINITY, f64::min);
        let hi = nodes.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Ok(Self {
            kind,
            nodes,
            weights,
            domain: (lo, hi),
        })
    }

    /// Unit weights at the given points.
    pub fn counting(nodes: Vec<f64>) -> Result<Self> {
        let weights = vec![1.0; nodes.len()];
        Self::from_rule(MeasureKind::Counting, nodes, weights)
    }

    /// Counting measure on `{0, 1, ..., n - 1}`.
    pub fn counting_points(n: usize) -> Result<Self> {
        Self::counting((0..n).map(|k| k as f64).collect())
    }

    /// Trapezoid rule for periodic integrands on `[a, b)` with `n` equispaced nodes.
    pub fn periodic_trapezoid(a: f64, b: f64, n: usize) -> Result<Self> {
        check_interval(a, b, n)?;
        let h = (b - a) / n as f64;
        let nodes = (0..n).map(|k| a + k as f64 * h).collect();
        let mut m = Self::from_rule(MeasureKind::PeriodicTrapezoid, nodes, vec![h; n])?;
        m.domain = (a, b);
        Ok(m)
    }

    /// `n`-point Gauss–Legendre rule on `[a, b]`.
    pub fn gauss_legendre(a: f64, b: f64, n: usize) -> Result<Self> {
        check_interval(a, b, n)?;
        let (t, w) = gauss_legendre_reference(n);
        let half = 0.5 * (b - a);
        let mid = 0.5 * (a + b);
        let nodes = t.iter().map(|t| mid + half * t).collect();
        let weights = w.iter().map(|w| half * w).collect();
        let mut m = Self::from_rule(MeasureKind::GaussLegendre, nodes, weights)?;
        m.domain = (a, b);
        Ok(m)
    }

    pub fn kind(&self) -> MeasureKind {
        self.kind
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Interval the rule integrates over; the node hull for explicit rules.
    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

fn check_interval(a: f64, b: f64, n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::ZeroDimension);
    }
    if !(a.is_finite() && b.is_finite() && a < b) {
        return Err(Error::InvalidParameter(format!(
            "invalid interval [{a}, {b}]"
        )));
    }
    Ok(())
}

/// `(P_n(t), P_n'(t))` by the three-term recurrence.
fn legendre_with_derivative(n: usize, t: f64) -> (f64, f64) {
    let (mut p0, mut p1) = (1.0, t);
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * t * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let n = n as f64;
    let dp = n * (t * p1 - p0) / (t * t - 1.0);
    (p1, dp)
}

/// Nodes and weights on `[-1, 1]`, ascending.
fn gauss_legendre_reference(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut t = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_with_derivative(n, t);
            let step = p / dp;
            t -= step;
            if step.abs() <= 1e-16 * t.abs().max(1.0) {
                break;
            }
        }
        let (_, dp) = legendre_with_derivative(n, t);
        let w = 2.0 / ((1.0 - t * t) * dp * dp);
        nodes[i] = -t;
        nodes[n - 1 - i] = t;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        nodes[n / 2] = 0.0;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn gauss_legendre_integrates_polynomials_exactly() {
        for n in 1..=20 {
            let m = DiscretizedMeasure::gauss_legendre(-1.0, 1.0, n).unwrap();
            for deg in 0..(2 * n) {
                let q: f64 = m
                    .nodes()
                    .iter()
                    .zip(m.weights())
                    .map(|(s, w)| w * s.powi(deg as i32))
                    .sum();
                let exact = if deg % 2 == 1 {
                    0.0
                } else {
                    2.0 / (deg as f64 + 1.0)
                };
                assert!((q - exact).abs() < 1e-13, "n={n} deg={deg}: {q} vs {exact}");
            }
        }
    }

    #[test]
    fn gauss_legendre_on_shifted_interval() {
        let m = DiscretizedMeasure::gauss_legendre(0.0, 3.0, 5).unwrap();
        let q: f64 = m
            .nodes()
            .iter()
            .zip(m.weights())
            .map(|(s, w)| w * s * s)
            .sum();
        assert_relative_eq!(q, 9.0, max_relative = 1e-14);
        assert!(m.nodes().windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn trapezoid_is_spectral_on_trig() {
        let m = DiscretizedMeasure::periodic_trapezoid(0.0, 2.0 * PI, 64).unwrap();
        let q: f64 = m
            .nodes()
            .iter()
            .zip(m.weights())
            .map(|(s, w)| w * s.cos().powi(2))
            .sum();
        assert_relative_eq!(q, PI, max_relative = 1e-14);
    }

    #[test]
    fn rejects_bad_rules() {
        assert!(
            DiscretizedMeasure::from_rule(MeasureKind::Counting, vec![0.0], vec![0.0]).is_err()
        );
        assert!(
            DiscretizedMeasure::from_rule(MeasureKind::Counting, vec![0.0, 1.0], vec![1.0])
                .is_err()
        );
        assert!(DiscretizedMeasure::periodic_trapezoid(1.0, 1.0, 4).is_err());
        assert!(DiscretizedMeasure::gauss_legendre(0.0, 1.0, 0).is_err());
    }
}
