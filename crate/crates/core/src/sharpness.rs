//! Numerical confirmation that `1/4` is the best constant.
//!
//! Two tools: the exact planar construction that attains the constant, and
//! a derivative-free search that maximizes the tightness ratios
//!
//! ```text
//! residual ratio  = (||x||^2 - sum |<x,e_i>|^2) / sum |upper_i - lower_i|^2
//! deviation ratio = |<x,y> - sum <x,e_i><e_i,y>| / (sqrt(Dx) sqrt(Dy))
//! ```
//!
//! over certified instances. Both ratios are bounded by `1/4`; the search
//! rejects every proposal whose box condition fails, so each evaluated
//! ratio is covered by the bound.
//!
//! The search runs independent restarts, each seeded from `(seed, restart)`.
//! A restart draws a feasible start and then performs coordinate-wise hill
//! climbing: every sweep tries `±step` on each parameter, and the step is
//! halved after a sweep without improvement. Proposals are ranked by
//! `ratio + 0.1 * (normalized condition slack)`, which has the same maximizer
//! as the ratio but rewards moving the box center toward the projection
//! while the radius is pinned by the condition.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, BesselBoundReport, CoefficientBox, Tolerance};
use crate::error::{Error, Result};
use crate::generate::{certified_box, random_family};
use crate::instance::InstanceFile;
use crate::rng::{normal_vector, stream_rng};
use crate::space::{
    CoordinateSpace, Field, IndexSet, InnerProductSpace, OrthonormalFamily, Vector,
};

/// Weight of the slack term in the search merit.
const SLACK_WEIGHT: f64 = 0.1;

/// The planar instance attaining the constant: `e = (1, 1)/sqrt(2)`,
/// `x = (m, -m)/sqrt(2)` and the box `[-m, m]`.
#[derive(Debug, Clone)]
pub struct ExtremalInstance {
    pub m: f64,
    pub space: CoordinateSpace,
    pub family: OrthonormalFamily,
    pub x: Vector,
    pub bx: CoefficientBox,
}

impl ExtremalInstance {
    pub fn report(&self) -> BesselBoundReport {
        bounds::counterpart_bounds(
            &self.space,
            &self.x,
            &self.family,
            &self.bx,
            Tolerance::default(),
        )
        .expect("extremal instance is well formed")
    }

    pub fn to_file(&self) -> InstanceFile {
        InstanceFile::from_parts(&self.space, &self.family, &self.x, &self.bx, None)
    }
}

pub fn extremal_instance(m: f64) -> Result<ExtremalInstance> {
    if !(m.is_finite() && m > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "m must be positive and finite, got {m}"
        )));
    }
    let space = CoordinateSpace::real(2)?;
    let family = OrthonormalFamily::certify(
        &space,
        vec![Vector::from_real(&[FRAC_1_SQRT_2, FRAC_1_SQRT_2])],
        crate::space::DEFAULT_ORTHONORMAL_TOL,
    )?;
    let x = Vector::from_real(&[m * FRAC_1_SQRT_2, -m * FRAC_1_SQRT_2]);
    let bx = CoefficientBox::uniform_real(IndexSet::all(1)?, -m, m)?;
    Ok(ExtremalInstance {
        m,
        space,
        family,
        x,
        bx,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SearchMode {
    Residual,
    Gruss,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SearchConfig {
    pub dimension: usize,
    pub family_size: usize,
    pub field: Field,
    pub restarts: usize,
    pub steps_per_restart: usize,
    /// Initial step, relative to the RMS size of the start parameters.
    pub step_scale: f64,
    pub seed: u64,
    /// Start restart 0 at a scaled copy of the extremal construction.
    #[serde(default)]
    pub extremal_start: bool,
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            dimension: 4,
            family_size: 2,
            field: Field::Real,
            restarts: 64,
            steps_per_restart: 2000,
            step_scale: 0.5,
            seed: 0x5eed,
            extremal_start: false,
        }
    }
}

impl SearchConfig {
    pub fn validate(&self) -> Result<()> {
        if self.restarts == 0 || self.steps_per_restart == 0 {
            return Err(Error::InvalidParameter(
                "restarts and steps must be at least 1".into(),
            ));
        }
        if !(self.step_scale > 0.0 && self.step_scale.is_finite()) {
            return Err(Error::InvalidParameter(
                "step scale must be positive".into(),
            ));
        }
        if self.dimension == 0 || self.family_size == 0 || self.family_size > self.dimension {
            return Err(Error::InvalidParameter(format!(
                "need 1 <= family size ({}) <= dimension ({})",
                self.family_size, self.dimension
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SharpnessResult {
    pub mode: SearchMode,
    pub best_ratio: f64,
    pub best_instance: InstanceFile,
    pub evaluations: u64,
    /// The best instance had a zero denominator; its ratio is reported as 0.
    pub degenerate: bool,
}

/// Ratio of one instance together with its feasibility.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RatioEval {
    pub ratio: f64,
    pub feasible: bool,
    pub degenerate: bool,
    merit: f64,
}

/// Residual over `sum |upper_i - lower_i|^2`; feasible iff the condition
/// slack is nonnegative (no tolerance).
pub fn residual_ratio<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    fam: &OrthonormalFamily,
    bx: &CoefficientBox,
) -> Result<RatioEval> {
    let rep = bounds::counterpart_bounds(space, x, fam, bx, Tolerance::Absolute(0.0))?;
    let slack = rep.condition.slack_inner;
    let d = bx.diameter_sq();
    let feasible = slack >= 0.0;
    Ok(if d > 0.0 {
        let ratio = rep.residual / d;
        RatioEval {
            ratio,
            feasible,
            degenerate: false,
            merit: ratio + SLACK_WEIGHT * slack / d,
        }
    } else {
        RatioEval {
            ratio: 0.0,
            feasible,
            degenerate: true,
            merit: 0.0,
        }
    })
}

/// `|deviation| / (sqrt(Dx) sqrt(Dy))`; feasible iff both slacks are
/// nonnegative. A zero denominator gives ratio 0 and `degenerate`.
pub fn gruss_ratio<S: InnerProductSpace + ?Sized>(
    space: &S,
    x: &Vector,
    y: &Vector,
    fam: &OrthonormalFamily,
    box_x: &CoefficientBox,
    box_y: &CoefficientBox,
) -> Result<RatioEval> {
    let rep = bounds::gruss_bounds(space, x, y, fam, box_x, box_y, Tolerance::Absolute(0.0))?;
    let (sx, sy) = (rep.condition_x.slack_inner, rep.condition_y.slack_inner);
    let (dx, dy) = (box_x.diameter_sq(), box_y.diameter_sq());
    let feasible = sx >= 0.0 && sy >= 0.0;
    Ok(if dx > 0.0 && dy > 0.0 {
        let ratio = rep.deviation.norm() / (dx.sqrt() * dy.sqrt());
        RatioEval {
            ratio,
            feasible,
            degenerate: false,
            merit: ratio + 0.5 * SLACK_WEIGHT * (sx / dx + sy / dy),
        }
    } else {
        RatioEval {
            ratio: 0.0,
            feasible,
            degenerate: true,
            merit: 0.0,
        }
    })
}

/// Layout of the real parameter vector: for each searched vector, its
/// coordinates, then box midpoints, then box half widths.
struct Layout {
    dim: usize,
    k: usize,
    field: Field,
    blocks: usize,
}

impl Layout {
    fn width(&self) -> usize {
        match self.field {
            Field::Real => 1,
            Field::Complex => 2,
        }
    }

    fn block_len(&self) -> usize {
        (self.dim + 2 * self.k) * self.width()
    }

    fn len(&self) -> usize {
        self.blocks * self.block_len()
    }

    fn scalars(&self, theta: &[f64]) -> Vec<Complex64> {
        match self.field {
            Field::Real => theta.iter().map(|&re| Complex64::new(re, 0.0)).collect(),
            Field::Complex => theta
                .chunks_exact(2)
                .map(|p| Complex64::new(p[0], p[1]))
                .collect(),
        }
    }

    fn push(&self, out: &mut Vec<f64>, values: &[Complex64]) {
        for v in values {
            out.push(v.re);
            if self.field == Field::Complex {
                out.push(v.im);
            }
        }
    }

    fn encode(&self, parts: &[(&Vector, &CoefficientBox)]) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.len());
        for (x, bx) in parts {
            self.push(&mut out, x.as_slice());
            let mid = bx.midpoints();
            let h: Vec<Complex64> = bx.upper().iter().zip(&mid).map(|(u, m)| u - m).collect();
            self.push(&mut out, &mid);
            self.push(&mut out, &h);
        }
        out
    }

    fn decode(&self, theta: &[f64], index: &IndexSet) -> Vec<(Vector, CoefficientBox)> {
        theta
            .chunks_exact(self.block_len())
            .map(|block| {
                let s = self.scalars(block);
                let x = Vector::new(s[..self.dim].to_vec());
                let mid = &s[self.dim..self.dim + self.k];
                let h = &s[self.dim + self.k..];
                let bx = CoefficientBox::from_center(index.clone(), mid, h)
                    .expect("layout matches index set");
                (x, bx)
            })
            .collect()
    }
}

struct Problem<'a> {
    mode: SearchMode,
    space: CoordinateSpace,
    family: &'a OrthonormalFamily,
    index: IndexSet,
    layout: Layout,
}

impl Problem<'_> {
    fn evaluate(&self, theta: &[f64]) -> RatioEval {
        let parts = self.layout.decode(theta, &self.index);
        let eval = match self.mode {
            SearchMode::Residual => {
                let (x, bx) = &parts[0];
                residual_ratio(&self.space, x, self.family, bx)
            }
            SearchMode::Gruss => {
                let ((x, bx), (y, by)) = (&parts[0], &parts[1]);
                gruss_ratio(&self.space, x, y, self.family, bx, by)
            }
        };
        eval.expect("search parameters are finite and conforming")
    }

    fn random_start(&self, rng: &mut crate::rng::StreamRng) -> Vec<f64> {
        let blocks: Vec<(Vector, CoefficientBox)> = (0..self.layout.blocks)
            .map(|_| {
                let x = normal_vector(rng, self.space.dimension(), self.space.field());
                let margin = rand::Rng::random::<f64>(rng);
                let bx = certified_box(rng, &self.space, self.family, &self.index, &[&x], margin)
                    .expect("generated inputs conform");
                (x, bx)
            })
            .collect();
        let parts: Vec<(&Vector, &CoefficientBox)> = blocks.iter().map(|(x, b)| (x, b)).collect();
        self.layout.encode(&parts)
    }

    /// `x` orthogonal to the span with the box `[-h, h]`, `sum |h_i|^2`
    /// slightly above `||x||^2` so the start is strictly feasible.
    fn extremal_start(&self, rng: &mut crate::rng::StreamRng) -> Vec<f64> {
        let x = loop {
            let raw = normal_vector(rng, self.space.dimension(), self.space.field());
            if let Ok(res) =
                crate::space::projection_residual(&self.space, &raw, self.family, &self.index)
            {
                let n = self.space.norm_sq_unchecked(&res).sqrt();
                if n > 1e-6 {
                    break res.scaled(Complex64::new(1.0 / n, 0.0));
                }
            }
        };
        let k = self.index.len();
        let h = vec![Complex64::new((1.0 + 1e-12) / (k as f64).sqrt(), 0.0); k];
        let bx =
            CoefficientBox::from_center(self.index.clone(), &vec![Complex64::new(0.0, 0.0); k], &h)
                .expect("shape matches");
        let parts: Vec<(&Vector, &CoefficientBox)> =
            (0..self.layout.blocks).map(|_| (&x, &bx)).collect();
        self.layout.encode(&parts)
    }

    fn instance_file(&self, theta: &[f64]) -> InstanceFile {
        let parts = self.layout.decode(theta, &self.index);
        let second = parts.get(1).map(|(y, by)| (y, by));
        InstanceFile::from_parts(&self.space, self.family, &parts[0].0, &parts[0].1, second)
    }
}

struct RestartOutcome {
    best: RatioEval,
    theta: Vec<f64>,
    evaluations: u64,
}

fn climb(problem: &Problem<'_>, cfg: &SearchConfig, restart: usize) -> RestartOutcome {
    let mut rng = stream_rng(cfg.seed, restart as u64);
    let mut evaluations = 0u64;
    let mut theta = loop {
        let start = if cfg.extremal_start && restart == 0 {
            problem.extremal_start(&mut rng)
        } else {
            problem.random_start(&mut rng)
        };
        evaluations += 1;
        if problem.evaluate(&start).feasible {
            break start;
        }
    };
    let mut current = problem.evaluate(&theta);
    let mut best = (current, theta.clone());

    let rms = (theta.iter().map(|t| t * t).sum::<f64>() / theta.len() as f64).sqrt();
    let mut step = cfg.step_scale * rms.max(f64::MIN_POSITIVE);
    let floor = 1e-15 * rms;

    for _sweep in 0..cfg.steps_per_restart {
        let mut improved = false;
        for j in 0..theta.len() {
            for dir in [1.0, -1.0] {
                let old = theta[j];
                theta[j] = old + dir * step;
                let cand = problem.evaluate(&theta);
                evaluations += 1;
                if cand.feasible && cand.merit > current.merit {
                    current = cand;
                    improved = true;
                    if cand.ratio > best.0.ratio {
                        best = (cand, theta.clone());
                    }
                    break;
                }
                theta[j] = old;
            }
        }
        if !improved {
            step *= 0.5;
            if step < floor {
                break;
            }
        }
    }
    RestartOutcome {
        best: best.0,
        theta: best.1,
        evaluations,
    }
}

fn maximize(cfg: &SearchConfig, mode: SearchMode) -> Result<SharpnessResult> {
    cfg.validate()?;
    let space = CoordinateSpace::new(cfg.field, cfg.dimension)?;
    let family = random_family(&mut stream_rng(cfg.seed, u64::MAX), &space, cfg.family_size)?;
    let problem = Problem {
        mode,
        space,
        family: &family,
        index: IndexSet::all(cfg.family_size)?,
        layout: Layout {
            dim: cfg.dimension,
            k: cfg.family_size,
            field: cfg.field,
            blocks: match mode {
                SearchMode::Residual => 1,
                SearchMode::Gruss => 2,
            },
        },
    };
    let outcomes: Vec<RestartOutcome> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| climb(&problem, cfg, r))
        .collect();
    let evaluations = outcomes.iter().map(|o| o.evaluations).sum();
    // Ties resolve to the lowest restart index.
    let winner = outcomes
        .iter()
        .reduce(|a, b| if b.best.ratio > a.best.ratio { b } else { a })
        .expect("at least one restart");
    Ok(SharpnessResult {
        mode,
        best_ratio: winner.best.ratio,
        best_instance: problem.instance_file(&winner.theta),
        evaluations,
        degenerate: winner.best.degenerate,
    })
}

/// Maximizes the residual ratio over `x` and the box.
pub fn maximize_residual_ratio(cfg: &SearchConfig) -> Result<SharpnessResult> {
    maximize(cfg, SearchMode::Residual)
}

/// Maximizes the deviation ratio over `x`, `y` and both boxes.
pub fn maximize_gruss_ratio(cfg: &SearchConfig) -> Result<SharpnessResult> {
    maximize(cfg, SearchMode::Gruss)
}
