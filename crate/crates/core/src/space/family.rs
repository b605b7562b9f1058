use num_complex::Complex64;
use serde::Serialize;

use super::{InnerProductSpace, Vector};
use crate::error::{Error, Result};

/// Relative pivot threshold below which Gram–Schmidt reports rank deficiency.
const DROP_THRESHOLD: f64 = 1e-12;

/// An ordered finite family certified orthonormal to `tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrthonormalFamily {
    members: Vec<Vector>,
    gram_defect: f64,
    tolerance: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct OrthonormalityReport {
    pub gram_defect: f64,
    pub pass: bool,
}

impl OrthonormalFamily {
    /// Certifies `members` as orthonormal, failing if the Gram defect
    /// exceeds `tolerance`.
    pub fn certify<S: InnerProductSpace + ?Sized>(
        space: &S,
        members: Vec<Vector>,
        tolerance: f64,
    ) -> Result<Self> {
        if members.len() > space.dimension() {
            return Err(Error::TooManyMembers {
                members: members.len(),
                dimension: space.dimension(),
            });
        }
        for m in &members {
            space.conform(m)?;
        }
        let gram_defect = gram_defect(space, &members);
        if gram_defect.is_nan() || gram_defect > tolerance {
            return Err(Error::NotOrthonormal {
                defect: gram_defect,
                tolerance,
            });
        }
        Ok(Self {
            members,
            gram_defect,
            tolerance,
        })
    }

    pub fn member(&self, i: usize) -> &Vector {
        &self.members[i]
    }

    pub fn members(&self) -> &[Vector] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn gram_defect(&self) -> f64 {
        self.gram_defect
    }

    pub fn tolerance(&self) -> f64 {
        self.tolerance
    }

    /// Re-checks the certificate in `space`.
    pub fn verify<S: InnerProductSpace + ?Sized>(&self, space: &S) -> OrthonormalityReport {
        verify_orthonormal(space, &self.members, self.tolerance)
    }
}

/// `max_{i,j} |<e_i, e_j> - delta_ij|`, assuming conforming members.
fn gram_defect<S: InnerProductSpace + ?Sized>(space: &S, members: &[Vector]) -> f64 {
    let mut defect: f64 = 0.0;
    for (i, a) in members.iter().enumerate() {
        for (j, b) in members.iter().enumerate().skip(i) {
            let target = if i == j { 1.0 } else { 0.0 };
            let d = (space.inner_unchecked(a, b) - Complex64::new(target, 0.0)).norm();
            defect = defect.max(d);
        }
    }
    defect
}

/// Gram defect of `members` and whether it is within `tolerance`.
///
/// Non-conforming members yield an infinite defect.
pub fn verify_orthonormal<S: InnerProductSpace + ?Sized>(
    space: &S,
    members: &[Vector],
    tolerance: f64,
) -> OrthonormalityReport {
    let gram_defect = if members.iter().all(|m| space.conform(m).is_ok()) {
        gram_defect(space, members)
    } else {
        f64::INFINITY
    };
    OrthonormalityReport {
        gram_defect,
        pass: gram_defect <= tolerance,
    }
}

/// Modified Gram–Schmidt with one re-orthogonalization pass.
///
/// A vector whose residual norm after projection falls below
/// `1e-12 * max_input_norm` is reported as [`Error::Degenerate`].
pub fn gram_schmidt<S: InnerProductSpace + ?Sized>(
    space: &S,
    raw: &[Vector],
    tol: f64,
) -> Result<OrthonormalFamily> {
    if raw.len() > space.dimension() {
        return Err(Error::TooManyMembers {
            members: raw.len(),
            dimension: space.dimension(),
        });
    }
    let mut max_norm: f64 = 0.0;
    for v in raw {
        max_norm = max_norm.max(space.norm(v)?);
    }
    let threshold = DROP_THRESHOLD * max_norm;

    let mut basis: Vec<Vector> = Vec::with_capacity(raw.len());
    for (index, v) in raw.iter().enumerate() {
        let mut w = v.clone();
        for _pass in 0..2 {
            for q in &basis {
                let proj = space.inner_unchecked(&w, q);
                w.axpy(-proj, q);
            }
        }
        let norm = space.norm_sq_unchecked(&w).max(0.0).sqrt();
        if norm.is_nan() || norm <= threshold {
            return Err(Error::Degenerate { index, norm });
        }
        basis.push(w.scaled(Complex64::new(1.0 / norm, 0.0)));
    }
    OrthonormalFamily::certify(space, basis, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space::{CoordinateSpace, Field};
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn standard_basis_is_fixed_point() {
        let s = CoordinateSpace::real(3).unwrap();
        let fam = gram_schmidt(&s, &s.standard_basis(), 1e-10).unwrap();
        assert_eq!(fam.members(), s.standard_basis().as_slice());
        assert_eq!(fam.gram_defect(), 0.0);
    }

    #[test]
    fn two_by_two_up_to_sign() {
        let s = CoordinateSpace::real(2).unwrap();
        let raw = [
            Vector::from_real(&[1.0, 1.0]),
            Vector::from_real(&[1.0, 0.0]),
        ];
        let fam = gram_schmidt(&s, &raw, 1e-10).unwrap();
        let expect = [
            [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
            [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
        ];
        for (m, e) in fam.members().iter().zip(expect) {
            let sign = m[0].re.signum();
            for k in 0..2 {
                assert!((sign * m[k].re - e[k]).abs() < 1e-15);
                assert_eq!(m[k].im, 0.0);
            }
        }
    }

    #[test]
    fn near_dependent_pair_is_degenerate() {
        let s = CoordinateSpace::real(2).unwrap();
        let raw = [
            Vector::from_real(&[1.0, 0.0]),
            Vector::from_real(&[1.0, 1e-16]),
        ];
        match gram_schmidt(&s, &raw, 1e-10) {
            Err(Error::Degenerate { index, .. }) => assert_eq!(index, 1),
            other => panic!("expected degeneracy, got {other:?}"),
        }
    }

    #[test]
    fn zero_vector_is_degenerate() {
        let s = CoordinateSpace::real(2).unwrap();
        let raw = [Vector::zeros(2)];
        assert!(matches!(
            gram_schmidt(&s, &raw, 1e-10),
            Err(Error::Degenerate { index: 0, .. })
        ));
    }

    #[test]
    fn non_orthonormal_pair_reports_defect() {
        let s = CoordinateSpace::real(2).unwrap();
        let members = [
            Vector::from_real(&[1.0, 0.0]),
            Vector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2]),
        ];
        let report = verify_orthonormal(&s, &members, 1e-10);
        assert!((report.gram_defect - FRAC_1_SQRT_2).abs() < 1e-15);
        assert!(!report.pass);
        assert!(matches!(
            OrthonormalFamily::certify(&s, members.to_vec(), 1e-10),
            Err(Error::NotOrthonormal { .. })
        ));
    }

    #[test]
    fn single_unit_member_passes() {
        let s = CoordinateSpace::real(2).unwrap();
        let fam = OrthonormalFamily::certify(
            &s,
            vec![Vector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])],
            1e-10,
        )
        .unwrap();
        let report = fam.verify(&s);
        assert!(report.gram_defect < 1e-15);
        assert!(report.pass);
    }

    #[test]
    fn too_many_members() {
        let s = CoordinateSpace::new(Field::Complex, 1).unwrap();
        let raw = vec![Vector::from_real(&[1.0]), Vector::from_real(&[2.0])];
        assert!(matches!(
            gram_schmidt(&s, &raw, 1e-10),
            Err(Error::TooManyMembers { .. })
        ));
    }

    #[test]
    fn complex_hilbert_like_columns() {
        // Ill-conditioned input: columns of a complex Vandermonde-like matrix.
        let n = 12;
        let s = CoordinateSpace::complex(n).unwrap();
        let raw: Vec<Vector> = (0..n)
            .map(|j| {
                (0..n)
                    .map(|k| {
                        let t = (k as f64 + 1.0) / n as f64;
                        Complex64::new(t, 0.3 * t).powi(j as i32)
                    })
                    .collect()
            })
            .collect();
        let fam = gram_schmidt(&s, &raw, 1e-10).unwrap();
        assert!(fam.verify(&s).pass);
        assert!(fam.gram_defect() < 1e-13);
    }
}
