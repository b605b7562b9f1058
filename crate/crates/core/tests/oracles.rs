//! Reference values from independent computations: plain real arithmetic
//! written out by hand here, and a high-precision evaluation of a fixed
//! complex instance frozen to 20 digits.

#![allow(clippy::excessive_precision)]

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use approx::assert_relative_eq;
use bessel_gruss::bounds::{self, CoefficientBox, Tolerance};
use bessel_gruss::l2::{
    build_family, l2_counterpart_report, l2_gruss_report, l2_sandwich_gruss, weighted_inner,
    DiscretizedMeasure, FamilyKind, WeightedL2Space,
};
use bessel_gruss::space::{
    gram_schmidt, CoordinateSpace, Field, IndexSet, OrthonormalFamily, Scalar, Vector,
};
use num_complex::Complex64;

/// Plain real-arithmetic reference for an orthonormal family given as rows.
mod plain {
    pub fn dot(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| x * y).sum()
    }

    pub fn comb(fam: &[&[f64]], c: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; fam[0].len()];
        for (e, &ci) in fam.iter().zip(c) {
            for (o, &ek) in out.iter_mut().zip(e.iter()) {
                *o += ci * ek;
            }
        }
        out
    }

    pub fn sub(a: &[f64], b: &[f64]) -> Vec<f64> {
        a.iter().zip(b).map(|(x, y)| x - y).collect()
    }

    pub fn residual(x: &[f64], fam: &[&[f64]]) -> f64 {
        dot(x, x) - fam.iter().map(|e| dot(x, e).powi(2)).sum::<f64>()
    }

    pub fn diameter_sq(lo: &[f64], up: &[f64]) -> f64 {
        lo.iter().zip(up).map(|(l, u)| (u - l).powi(2)).sum()
    }

    pub fn slack_inner(x: &[f64], fam: &[&[f64]], lo: &[f64], up: &[f64]) -> f64 {
        dot(&sub(&comb(fam, up), x), &sub(x, &comb(fam, lo)))
    }

    pub fn slack_norm(x: &[f64], fam: &[&[f64]], lo: &[f64], up: &[f64]) -> f64 {
        let mid: Vec<f64> = lo.iter().zip(up).map(|(l, u)| 0.5 * (l + u)).collect();
        let r = sub(x, &comb(fam, &mid));
        0.5 * diameter_sq(lo, up).sqrt() - dot(&r, &r).sqrt()
    }

    pub fn deviation(x: &[f64], y: &[f64], fam: &[&[f64]]) -> f64 {
        dot(x, y) - fam.iter().map(|e| dot(x, e) * dot(e, y)).sum::<f64>()
    }
}

const X: [f64; 3] = [0.5, 0.3, 0.2];
const Y: [f64; 3] = [0.2, 0.6, 0.1];
const E1: [f64; 3] = [1.0, 0.0, 0.0];
const E2: [f64; 3] = [0.0, 1.0, 0.0];

fn r3() -> (CoordinateSpace, OrthonormalFamily, IndexSet) {
    let space = CoordinateSpace::real(3).unwrap();
    let fam = OrthonormalFamily::certify(&space, space.standard_basis(), 1e-10).unwrap();
    (space, fam, IndexSet::new(vec![0, 1], 3).unwrap())
}

fn unit_box(index: &IndexSet, lo: f64, hi: f64) -> CoefficientBox {
    CoefficientBox::uniform_real(index.clone(), lo, hi).unwrap()
}

#[test]
fn r3_single_vector_matches_plain_arithmetic() {
    let (space, fam, index) = r3();
    let x = Vector::from_real(&X);
    let bx = unit_box(&index, 0.0, 1.0);
    let rep = bounds::counterpart_bounds(&space, &x, &fam, &bx, Tolerance::default()).unwrap();

    let f: [&[f64]; 2] = [&E1, &E2];
    let (lo, up) = ([0.0, 0.0], [1.0, 1.0]);
    let residual = plain::residual(&X, &f);
    let slack = plain::slack_inner(&X, &f, &lo, &up);
    let coarse = plain::diameter_sq(&lo, &up) / 4.0;
    assert_relative_eq!(rep.residual, residual, max_relative = 1e-14);
    assert_relative_eq!(rep.condition.slack_inner, slack, max_relative = 1e-14);
    assert_relative_eq!(
        rep.condition.slack_norm,
        plain::slack_norm(&X, &f, &lo, &up),
        max_relative = 1e-14
    );
    assert_relative_eq!(rep.refined, coarse - slack, max_relative = 1e-14);
    assert_relative_eq!(rep.coarse, coarse, max_relative = 1e-14);

    assert_relative_eq!(rep.residual, 0.04, max_relative = 1e-12);
    assert_relative_eq!(rep.condition.slack_inner, 0.42, max_relative = 1e-12);
    assert_relative_eq!(
        rep.condition.slack_norm,
        0.5 * 2f64.sqrt() - 0.08f64.sqrt(),
        max_relative = 1e-12
    );
    assert_relative_eq!(rep.condition.slack_norm, 0.4242641, epsilon = 1e-7);
    assert_relative_eq!(rep.refined, 0.08, max_relative = 1e-12);
    assert_relative_eq!(rep.coarse, 0.5, max_relative = 1e-12);
    assert!(rep.certified);

    let (left, right) = bounds::residual_identity_sides(&space, &x, &fam, &bx).unwrap();
    assert_relative_eq!(left, 0.04, max_relative = 1e-12);
    assert_relative_eq!(right, 0.46 - 0.42, max_relative = 1e-12);
}

#[test]
fn r3_two_vector_matches_plain_arithmetic() {
    let (space, fam, index) = r3();
    let (x, y) = (Vector::from_real(&X), Vector::from_real(&Y));
    let bx = unit_box(&index, 0.0, 1.0);
    let g = bounds::gruss_bounds(&space, &x, &y, &fam, &bx, &bx, Tolerance::default()).unwrap();

    let f: [&[f64]; 2] = [&E1, &E2];
    let (lo, up) = ([0.0, 0.0], [1.0, 1.0]);
    let sx = plain::slack_inner(&X, &f, &lo, &up);
    let sy = plain::slack_inner(&Y, &f, &lo, &up);
    assert_relative_eq!(sy, 0.39, max_relative = 1e-12);
    assert_relative_eq!(
        g.deviation.re,
        plain::deviation(&X, &Y, &f),
        max_relative = 1e-14
    );
    assert_relative_eq!(g.deviation.re, 0.02, max_relative = 1e-12);
    assert_eq!(g.deviation.im, 0.0);
    assert_relative_eq!(g.refined, 0.5 - (sx * sy).sqrt(), max_relative = 1e-13);
    assert_relative_eq!(g.refined, 0.0952779, epsilon = 5e-8);
    assert_relative_eq!(g.coarse, 0.5, max_relative = 1e-12);
    assert!(g.certified);

    let wide = unit_box(&index, -1.0, 1.0);
    let c = bounds::companion_abs_bound(&space, &x, &y, &fam, &wide, Tolerance::default()).unwrap();
    assert!(c.certified);
    assert_relative_eq!(c.abs_re_deviation, 0.02, max_relative = 1e-12);
    assert_relative_eq!(c.bound, 2.0, max_relative = 1e-12);
    let mid: Vec<f64> = X.iter().zip(&Y).map(|(a, b)| 0.5 * (a + b)).collect();
    let half: Vec<f64> = X.iter().zip(&Y).map(|(a, b)| 0.5 * (a - b)).collect();
    let (lo, up) = ([-1.0, -1.0], [1.0, 1.0]);
    assert_relative_eq!(
        c.condition_sum.slack_inner,
        plain::slack_inner(&mid, &f, &lo, &up),
        max_relative = 1e-14
    );
    assert_relative_eq!(
        c.condition_difference.slack_inner,
        plain::slack_inner(&half, &f, &lo, &up),
        max_relative = 1e-14
    );

    let c = bounds::companion_bound(&space, &x, &x, &fam, &bx, Tolerance::default()).unwrap();
    assert!(c.certified);
    assert_relative_eq!(c.re_deviation, 0.04, max_relative = 1e-12);
    assert_relative_eq!(c.bound, 0.5, max_relative = 1e-12);
}

#[test]
fn rotated_real_family_matches_plain_arithmetic() {
    // Rotation by angle t in the (0, 2) plane, then the third axis.
    let t: f64 = 0.37;
    let e1 = [t.cos(), 0.0, t.sin(), 0.0];
    let e2 = [-t.sin(), 0.0, t.cos(), 0.0];
    let e3 = [0.0, 0.0, 0.0, 1.0];
    let x = [1.3, -0.7, 0.4, 2.1];
    let y = [-0.2, 0.9, 1.5, -0.6];
    let (lo, up) = ([0.1, -1.2, 1.0], [2.4, 1.1, 3.3]);
    let f: [&[f64]; 3] = [&e1, &e2, &e3];

    let space = CoordinateSpace::real(4).unwrap();
    let fam = OrthonormalFamily::certify(
        &space,
        vec![
            Vector::from_real(&e1),
            Vector::from_real(&e2),
            Vector::from_real(&e3),
        ],
        1e-12,
    )
    .unwrap();
    let index = IndexSet::all(3).unwrap();
    let scalars = |v: &[f64]| v.iter().map(|&r| Scalar::new(r, 0.0)).collect::<Vec<_>>();
    let bx = CoefficientBox::new(index, scalars(&lo), scalars(&up)).unwrap();
    let (xv, yv) = (Vector::from_real(&x), Vector::from_real(&y));

    let rep = bounds::counterpart_bounds(&space, &xv, &fam, &bx, Tolerance::default()).unwrap();
    assert_relative_eq!(rep.residual, plain::residual(&x, &f), max_relative = 1e-13);
    assert_relative_eq!(
        rep.condition.slack_inner,
        plain::slack_inner(&x, &f, &lo, &up),
        max_relative = 1e-13
    );
    assert_relative_eq!(
        rep.condition.slack_norm,
        plain::slack_norm(&x, &f, &lo, &up),
        max_relative = 1e-13
    );
    let dev = bounds::gruss_deviation(&space, &xv, &yv, &fam, bx.index()).unwrap();
    assert_relative_eq!(dev.re, plain::deviation(&x, &y, &f), max_relative = 1e-13);
}

fn c(re: f64, im: f64) -> Scalar {
    Complex64::new(re, im)
}

/// `C^3` instance evaluated at 50 digits; the family is Gram-Schmidt of two
/// fixed vectors and each box is centered near the coefficients.
#[test]
fn complex_instance_matches_high_precision_values() {
    let space = CoordinateSpace::complex(3).unwrap();
    let raw = [
        Vector::new(vec![c(1.0, 1.0), c(2.0, 0.0), c(0.0, -1.0)]),
        Vector::new(vec![c(0.0, 1.0), c(1.0, -1.0), c(3.0, 0.0)]),
    ];
    let fam = gram_schmidt(&space, &raw, 1e-12).unwrap();
    let index = IndexSet::all(2).unwrap();
    let x = Vector::new(vec![c(0.7, -0.2), c(-0.4, 0.9), c(1.1, 0.3)]);
    let y = Vector::new(vec![c(-0.5, 0.6), c(0.8, 0.1), c(0.2, -1.3)]);
    let bx = CoefficientBox::new(
        index.clone(),
        vec![
            c(-1.3267786838055363363, -0.29407105398154554557),
            c(-0.71349624382309312657, 0.91683090007626097991),
        ],
        vec![
            c(1.0732213161944636637, 1.7059289460184544544),
            c(1.4865037561769068734, -0.88316909992373902009),
        ],
    )
    .unwrap();
    let by = CoefficientBox::new(
        index,
        vec![
            c(0.37389341902768168164, 1.0069467095138408408),
            c(-0.35168703047788664082, -1.2976980864260105745),
        ],
        vec![
            c(1.7738934190276816816, 0.20694670951384084082),
            c(0.64831296952211335918, -0.09769808642601057451),
        ],
    )
    .unwrap();

    let tol = 1e-13;
    let rx = bounds::counterpart_bounds(&space, &x, &fam, &bx, Tolerance::default()).unwrap();
    let ry = bounds::counterpart_bounds(&space, &y, &fam, &by, Tolerance::default()).unwrap();
    assert_relative_eq!(rx.residual, 1.9488732394366197183, max_relative = tol);
    assert_relative_eq!(ry.residual, 0.86436619718309859155, max_relative = tol);
    assert_relative_eq!(
        rx.condition.slack_inner,
        2.4778267605633802817,
        max_relative = tol
    );
    assert_relative_eq!(
        rx.condition.slack_norm,
        0.70397446502147247735,
        max_relative = tol
    );
    assert_relative_eq!(
        ry.condition.slack_inner,
        0.38193380281690140845,
        max_relative = tol
    );
    assert_relative_eq!(
        ry.condition.slack_norm,
        0.18544535130798338936,
        max_relative = tol
    );
    assert_relative_eq!(rx.coarse, 4.46, max_relative = tol);
    assert_relative_eq!(rx.refined, 1.9821732394366197183, max_relative = tol);
    assert!(rx.certified && ry.certified);

    let g = bounds::gruss_bounds(&space, &x, &y, &fam, &bx, &by, Tolerance::default()).unwrap();
    assert_relative_eq!(g.deviation.re, -1.142676056338028169, max_relative = tol);
    assert_relative_eq!(g.deviation.im, 0.61549295774647887324, max_relative = tol);
    assert_relative_eq!(g.coarse, 2.3705695518166093243, max_relative = tol);
    assert_relative_eq!(g.refined, 1.3977562103253160093, max_relative = tol);
    assert!(g.certified && g.chain_holds(0.0));
}

#[test]
fn extremal_pair_through_every_bound() {
    let space = CoordinateSpace::real(2).unwrap();
    let e = [FRAC_1_SQRT_2, FRAC_1_SQRT_2];
    let xr = [FRAC_1_SQRT_2, -FRAC_1_SQRT_2];
    let fam = OrthonormalFamily::certify(&space, vec![Vector::from_real(&e)], 1e-12).unwrap();
    let index = IndexSet::all(1).unwrap();
    let bx = unit_box(&index, -1.0, 1.0);
    let x = Vector::from_real(&xr);
    let f: [&[f64]; 1] = [&e];
    assert_eq!(plain::slack_inner(&xr, &f, &[-1.0], &[1.0]), 0.0);

    let g = bounds::gruss_bounds(&space, &x, &x, &fam, &bx, &bx, Tolerance::default()).unwrap();
    assert_relative_eq!(g.deviation.re, 1.0, max_relative = 1e-15);
    assert_relative_eq!(g.refined, 1.0, max_relative = 1e-15);
    assert_relative_eq!(g.coarse, 1.0, max_relative = 1e-15);
    let cb = bounds::companion_bound(&space, &x, &x, &fam, &bx, Tolerance::default()).unwrap();
    assert!(cb.certified);
    assert_relative_eq!(cb.re_deviation, 1.0, max_relative = 1e-15);
    assert_relative_eq!(cb.bound, 1.0, max_relative = 1e-15);
}

fn trig_space(n: usize) -> WeightedL2Space {
    let m = DiscretizedMeasure::periodic_trapezoid(0.0, 2.0 * PI, n).unwrap();
    WeightedL2Space::unweighted(m, Field::Real).unwrap()
}

#[test]
fn trig_closed_forms() {
    let space = trig_space(1024);
    let fam = build_family(&space, FamilyKind::Trig, 1, 1e-10).unwrap();
    let e0 = fam.member(0);
    assert_relative_eq!(e0[0].re, 1.0 / (2.0 * PI).sqrt(), max_relative = 1e-12);
    assert_relative_eq!(
        weighted_inner(&space, e0, e0).unwrap().re,
        1.0,
        epsilon = 1e-12
    );

    let f = space.sample_real(|s| 2.0 + s.sin());
    let g = space.sample_real(|s| 2.0 + s.cos());
    // <f, e0> = 2 sqrt(2 pi); ||f||^2 = 9 pi.
    assert_relative_eq!(
        weighted_inner(&space, &f, e0).unwrap().re,
        2.0 * (2.0 * PI).sqrt(),
        max_relative = 1e-12
    );
    assert_relative_eq!(
        weighted_inner(&space, &f, &f).unwrap().re,
        9.0 * PI,
        max_relative = 1e-12
    );

    let s = (2.0 * PI).sqrt();
    let bx = CoefficientBox::uniform_real(IndexSet::all(1).unwrap(), s, 3.0 * s).unwrap();
    let rep = l2_counterpart_report(&space, &f, &fam, &bx, Tolerance::default()).unwrap();
    assert_relative_eq!(rep.residual, PI, epsilon = 1e-8);
    assert_relative_eq!(rep.refined, PI, epsilon = 1e-8);
    assert_relative_eq!(rep.coarse, 2.0 * PI, epsilon = 1e-8);
    assert_relative_eq!(rep.condition.slack_inner, PI, epsilon = 1e-8);

    // int (2 + sin)(2 + cos) = 8 pi, which the constant term absorbs.
    let gr = l2_gruss_report(&space, &f, &g, &fam, &bx, &bx, Tolerance::default()).unwrap();
    assert!(gr.certified);
    assert!(gr.deviation.norm() < 1e-10);
    assert_relative_eq!(gr.coarse, 2.0 * PI, epsilon = 1e-8);
    assert_relative_eq!(gr.refined, PI, epsilon = 1e-8);

    let same = l2_sandwich_gruss(&space, &f, &f, &fam, &bx, &bx, Tolerance::default()).unwrap();
    assert_relative_eq!(same.deviation.re, PI, epsilon = 1e-8);
    assert_relative_eq!(same.refined, PI, epsilon = 1e-8);
}

#[test]
fn families_are_orthonormal_on_their_grids() {
    let fam = build_family(&trig_space(1024), FamilyKind::Trig, 3, 1e-10).unwrap();
    assert!(fam.gram_defect() <= 1e-10);

    let gl = DiscretizedMeasure::gauss_legendre(-1.0, 1.0, 16).unwrap();
    let space = WeightedL2Space::unweighted(gl, Field::Real).unwrap();
    let fam = build_family(&space, FamilyKind::Legendre, 4, 1e-10).unwrap();
    assert!(fam.gram_defect() <= 1e-10);
    // Normalized P_2 = sqrt(5/2) (3t^2 - 1) / 2, up to sign.
    for (k, &t) in space.measure().nodes().iter().enumerate() {
        let expected = (2.5f64).sqrt() * (3.0 * t * t - 1.0) / 2.0;
        assert_relative_eq!(fam.member(2)[k].re.abs(), expected.abs(), epsilon = 1e-12);
    }
}

#[test]
fn gauss_legendre_three_point_rule() {
    let gl = DiscretizedMeasure::gauss_legendre(-1.0, 1.0, 3).unwrap();
    let r = (0.6f64).sqrt();
    let mut nodes = gl.nodes().to_vec();
    nodes.sort_by(f64::total_cmp);
    for (a, b) in nodes.iter().zip([-r, 0.0, r]) {
        assert_relative_eq!(*a, b, epsilon = 1e-15);
    }
    let total: f64 = gl.weights().iter().sum();
    assert_relative_eq!(total, 2.0, epsilon = 1e-15);
    let mut weights = gl.weights().to_vec();
    weights.sort_by(f64::total_cmp);
    assert_relative_eq!(weights[0], 5.0 / 9.0, epsilon = 1e-15);
    assert_relative_eq!(weights[2], 8.0 / 9.0, epsilon = 1e-15);
}

#[test]
fn counting_embedding_reproduces_r3_numbers() {
    let m = DiscretizedMeasure::counting(vec![1.0, 2.0, 3.0]).unwrap();
    let space = WeightedL2Space::unweighted(m, Field::Real).unwrap();
    let fam = build_family(&space, FamilyKind::Indicator, 3, 1e-12).unwrap();
    let index = IndexSet::new(vec![0, 1], 3).unwrap();
    let bx = unit_box(&index, 0.0, 1.0);
    let (x, y) = (Vector::from_real(&X), Vector::from_real(&Y));
    let rep = l2_counterpart_report(&space, &x, &fam, &bx, Tolerance::default()).unwrap();
    assert_relative_eq!(rep.residual, 0.04, max_relative = 1e-12);
    assert_relative_eq!(rep.refined, 0.08, max_relative = 1e-12);
    assert_relative_eq!(rep.coarse, 0.5, max_relative = 1e-12);
    let g = l2_gruss_report(&space, &x, &y, &fam, &bx, &bx, Tolerance::default()).unwrap();
    assert!(g.certified);
    assert_relative_eq!(g.deviation.re, 0.02, max_relative = 1e-12);
    assert_relative_eq!(
        g.refined,
        0.5 - (0.42f64 * 0.39).sqrt(),
        max_relative = 1e-12
    );
    assert_relative_eq!(g.coarse, 0.5, max_relative = 1e-12);

    // Both bracketing combinations vanish at the third node while x and y
    // do not, so the pointwise sandwich cannot hold there.
    match l2_sandwich_gruss(&space, &x, &y, &fam, &bx, &bx, Tolerance::default()) {
        Err(bessel_gruss::Error::SandwichFailed(r)) => {
            assert_eq!(r.violating_node, Some(2));
            assert_relative_eq!(r.min_margin_upper, -0.2, max_relative = 1e-12);
        }
        other => panic!("expected a sandwich failure, got {other:?}"),
    }
}
