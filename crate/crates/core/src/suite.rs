//! Randomized verification of the inequality chains.
//!
//! The suite generates certified instances for every
//! `(dimension, family size, field)` cell and checks each chain, identity
//! and equivalence on them. Every cell draws from its own seeded stream, so
//! the outcome depends only on the configuration, and cells run in
//! parallel with an order-independent merge.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::bounds::{self, CoefficientBox, Tolerance};
use crate::error::{Error, Result};
use crate::generate::{
    certified_box, generate_instance_with_margin, unconstrained_box, GeneratedInstance,
};
use crate::instance::InstanceFile;
use crate::l2::{DiscretizedMeasure, WeightedL2Space};
use crate::report::TightnessRow;
use crate::rng::{normal_vector, stream_rng, substream};
use crate::space::{projection_residual, Field, InnerProductSpace, OrthonormalFamily, Vector};

/// Chain steps may undershoot by this much, relative to the instance scale.
pub const CHAIN_REL_TOL: f64 = 1e-9;
/// Identities must agree to this much, relative to the instance scale.
pub const IDENTITY_REL_TOL: f64 = 1e-10;
/// Slacks below this (relative) magnitude are not compared for sign.
pub const EQUIVALENCE_REL_TOL: f64 = 1e-10;
/// Weighted and coordinate backends must agree to this absolute difference.
pub const BACKEND_ABS_TOL: f64 = 1e-12;

const SCALAR_DRAWS_PER_INSTANCE: usize = 10;
const MAX_FAILURE_RECORDS: usize = 64;

pub mod checks {
    pub const GENERATOR_SOUNDNESS: &str = "generator_soundness";
    pub const COUNTERPART_CHAIN: &str = "counterpart_chain";
    pub const RESIDUAL_IDENTITY: &str = "residual_identity";
    pub const CONDITION_EQUIVALENCE: &str = "condition_equivalence";
    pub const CONDITION_EQUIVALENCE_UNCONSTRAINED: &str = "condition_equivalence_unconstrained";
    pub const GRUSS_CHAIN: &str = "gruss_chain";
    pub const GRUSS_RESIDUAL_PRODUCT: &str = "gruss_residual_product";
    pub const GRUSS_REFINED_PRODUCT: &str = "gruss_refined_product";
    pub const PROJECTION_IDENTITY: &str = "projection_identity";
    pub const SCHWARZ_STEP: &str = "schwarz_step";
    pub const COMPANION_ONE_SIDED: &str = "companion_one_sided";
    pub const COMPANION_TWO_SIDED: &str = "companion_two_sided";
    pub const BACKEND_EQUIVALENCE: &str = "backend_equivalence";
    pub const SCALAR_LEMMAS: &str = "scalar_lemmas";
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteConfig {
    /// Instances per cell.
    pub instance_count: usize,
    pub dims: Vec<usize>,
    pub family_sizes: Vec<usize>,
    pub fields: Vec<Field>,
    pub seed: u64,
    /// Relative certification tolerance for the box condition.
    pub tolerance: f64,
    /// Share of instances generated exactly on the condition boundary.
    pub boundary_fraction: f64,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            instance_count: 385,
            dims: vec![2, 4, 8, 16],
            family_sizes: vec![1, 2, 4, 8],
            fields: vec![Field::Real, Field::Complex],
            seed: 2003,
            tolerance: bounds::DEFAULT_RELATIVE_TOL,
            boundary_fraction: 0.1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub dim: usize,
    pub family_size: usize,
    pub field: Field,
}

impl SuiteConfig {
    pub fn validate(&self) -> Result<()> {
        if self.instance_count == 0 {
            return Err(Error::InvalidParameter(
                "instance count must be positive".into(),
            ));
        }
        if self.dims.is_empty() || self.family_sizes.is_empty() || self.fields.is_empty() {
            return Err(Error::InvalidParameter(
                "dims, family sizes and fields must be nonempty".into(),
            ));
        }
        if self.dims.contains(&0) || self.family_sizes.contains(&0) {
            return Err(Error::InvalidParameter(
                "dims and family sizes must be positive".into(),
            ));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(Error::InvalidParameter(
                "tolerance must be finite and nonnegative".into(),
            ));
        }
        if !(0.0..=1.0).contains(&self.boundary_fraction) {
            return Err(Error::InvalidParameter(
                "boundary fraction must lie in [0, 1]".into(),
            ));
        }
        if self.cells().is_empty() {
            return Err(Error::InvalidParameter(
                "no cell has family size <= dimension".into(),
            ));
        }
        Ok(())
    }

    /// Cells in `dims × family_sizes × fields` order, skipping family sizes
    /// larger than the dimension.
    pub fn cells(&self) -> Vec<Cell> {
        let mut out = Vec::new();
        for &dim in &self.dims {
            for &family_size in self.family_sizes.iter().filter(|&&k| k <= dim) {
                for &field in &self.fields {
                    out.push(Cell {
                        dim,
                        family_size,
                        field,
                    });
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FailureKind {
    /// Violation within round-off of the boundary, only possible with a
    /// tolerance tighter than the generator's accuracy.
    Tolerance,
    Logic,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FailureRecord {
    pub check: String,
    pub cell: Cell,
    pub instance: usize,
    pub kind: FailureKind,
    pub margin: f64,
    pub data: InstanceFile,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
pub struct CheckSummary {
    pub passed: u64,
    pub failed: u64,
    /// Smallest normalized margin observed; negative beyond the check's
    /// threshold means failure.
    pub worst_margin: Option<f64>,
}

impl CheckSummary {
    fn record(&mut self, pass: bool, margin: f64) {
        if pass {
            self.passed += 1;
        } else {
            self.failed += 1;
        }
        self.worst_margin = Some(self.worst_margin.map_or(margin, |w| w.min(margin)));
    }

    fn merge(&mut self, other: &CheckSummary) {
        self.passed += other.passed;
        self.failed += other.failed;
        self.worst_margin = match (self.worst_margin, other.worst_margin) {
            (Some(a), Some(b)) => Some(a.min(b)),
            (a, b) => a.or(b),
        };
    }

    pub fn total(&self) -> u64 {
        self.passed + self.failed
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteOutcome {
    pub config: SuiteConfig,
    pub cells: usize,
    pub instances: u64,
    pub checks: BTreeMap<String, CheckSummary>,
    pub failure_count: u64,
    /// At most the first 64 failures, in cell and instance order.
    pub failures: Vec<FailureRecord>,
    /// Wall-clock stamp, excluded from reproducibility comparisons.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub generated_at_unix: Option<u64>,
}

impl SuiteOutcome {
    pub fn all_passed(&self) -> bool {
        self.failure_count == 0
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.get(name)
    }

    pub fn write_json(&self, path: &std::path::Path) -> Result<()> {
        let file = std::fs::File::create(path)?;
        serde_json::to_writer_pretty(std::io::BufWriter::new(file), self)?;
        Ok(())
    }
}

#[derive(Default)]
struct CellOutcome {
    checks: BTreeMap<String, CheckSummary>,
    failure_count: u64,
    failures: Vec<FailureRecord>,
    rows: Vec<TightnessRow>,
}

struct CellRun<'a> {
    cell: Cell,
    cell_index: usize,
    cfg: &'a SuiteConfig,
    keep_rows: bool,
    out: CellOutcome,
}

impl CellRun<'_> {
    fn record(
        &mut self,
        check: &str,
        instance: usize,
        pass: bool,
        margin: f64,
        kind: FailureKind,
        data: impl FnOnce() -> InstanceFile,
    ) {
        self.out
            .checks
            .entry(check.to_string())
            .or_default()
            .record(pass, margin);
        if !pass {
            self.out.failure_count += 1;
            if self.out.failures.len() < MAX_FAILURE_RECORDS {
                self.out.failures.push(FailureRecord {
                    check: check.to_string(),
                    cell: self.cell,
                    instance,
                    kind,
                    margin,
                    data: data(),
                });
            }
        }
    }

    fn run(mut self) -> Result<CellOutcome> {
        for i in 0..self.cfg.instance_count {
            let mut rng = stream_rng(self.cfg.seed, substream(self.cell_index as u64, i as u64));
            self.instance(i, &mut rng)?;
        }
        Ok(self.out)
    }

    fn instance(&mut self, i: usize, rng: &mut crate::rng::StreamRng) -> Result<()> {
        use checks::*;
        let Cell {
            dim,
            family_size,
            field,
        } = self.cell;
        let tol = Tolerance::Relative(self.cfg.tolerance);
        let margin = if rng.random::<f64>() < self.cfg.boundary_fraction {
            0.0
        } else {
            rng.random::<f64>()
        };
        let GeneratedInstance {
            space,
            family,
            x,
            bx,
            ..
        } = generate_instance_with_margin(rng, dim, family_size, field, margin)?;
        let index = bx.index().clone();
        let one =
            |x: &Vector, b: &CoefficientBox| InstanceFile::from_parts(&space, &family, x, b, None);

        // Single-vector checks.
        let scale = bounds::instance_scale(&space, &x, &bx);
        let rep = bounds::counterpart_bounds(&space, &x, &family, &bx, tol)?;
        let m = rep.condition.slack_inner / scale;
        let kind = if m >= -CHAIN_REL_TOL {
            FailureKind::Tolerance
        } else {
            FailureKind::Logic
        };
        self.record(GENERATOR_SOUNDNESS, i, rep.certified, m, kind, || {
            one(&x, &bx)
        });
        if rep.certified {
            let m = rep.chain_margin() / scale;
            self.record(
                COUNTERPART_CHAIN,
                i,
                m >= -CHAIN_REL_TOL,
                m,
                FailureKind::Logic,
                || one(&x, &bx),
            );
        }
        let (left, right) = bounds::residual_identity_sides(&space, &x, &family, &bx)?;
        let m = -(left - right).abs() / scale;
        self.record(
            RESIDUAL_IDENTITY,
            i,
            m >= -IDENTITY_REL_TOL,
            m,
            FailureKind::Logic,
            || one(&x, &bx),
        );
        let c = rep.condition;
        let agree = signs_agree(c.slack_inner, c.slack_norm, EQUIVALENCE_REL_TOL * scale);
        self.record(
            CONDITION_EQUIVALENCE,
            i,
            agree,
            if agree { 0.0 } else { -1.0 },
            FailureKind::Logic,
            || one(&x, &bx),
        );

        let spread =
            (space.norm_sq_unchecked(&x) / dim as f64).sqrt() * (0.25 + 2.0 * rng.random::<f64>());
        let free = unconstrained_box(rng, field, &index, spread)?;
        let c = bounds::check_condition(&space, &x, &family, &free, tol)?;
        let agree = signs_agree(
            c.slack_inner,
            c.slack_norm,
            EQUIVALENCE_REL_TOL * bounds::instance_scale(&space, &x, &free),
        );
        self.record(
            CONDITION_EQUIVALENCE_UNCONSTRAINED,
            i,
            agree,
            if agree { 0.0 } else { -1.0 },
            FailureKind::Logic,
            || one(&x, &free),
        );

        // Two-vector checks.
        let y = normal_vector(rng, dim, field);
        let my = rng.random::<f64>();
        let by = certified_box(rng, &space, &family, &index, &[&y], my)?;
        let two = |b1: &CoefficientBox, b2: &CoefficientBox| {
            InstanceFile::from_parts(&space, &family, &x, b1, Some((&y, b2)))
        };
        let scale_y = bounds::instance_scale(&space, &y, &by);
        let pair_scale = scale * scale_y;
        let g = bounds::gruss_bounds(&space, &x, &y, &family, &bx, &by, tol)?;
        if g.certified {
            let m = g.chain_margin() / pair_scale.sqrt();
            self.record(
                GRUSS_CHAIN,
                i,
                m >= -CHAIN_REL_TOL,
                m,
                FailureKind::Logic,
                || two(&bx, &by),
            );
            let ry = bounds::bessel_residual(&space, &y, &family, &index)?;
            let m = (rep.residual * ry - g.deviation.norm_sqr()) / pair_scale;
            self.record(
                GRUSS_RESIDUAL_PRODUCT,
                i,
                m >= -CHAIN_REL_TOL,
                m,
                FailureKind::Logic,
                || two(&bx, &by),
            );
            let refined_y = by.half_diameter_sq() - g.condition_y.slack_inner;
            let m = (rep.refined * refined_y - rep.residual * ry) / pair_scale;
            self.record(
                GRUSS_REFINED_PRODUCT,
                i,
                m >= -CHAIN_REL_TOL,
                m,
                FailureKind::Logic,
                || two(&bx, &by),
            );
        }
        let px = projection_residual(&space, &x, &family, &index)?;
        let py = projection_residual(&space, &y, &family, &index)?;
        let direct = space.inner_unchecked(&px, &py);
        let m = -(g.deviation - direct).norm() / pair_scale.sqrt();
        self.record(
            PROJECTION_IDENTITY,
            i,
            m >= -IDENTITY_REL_TOL,
            m,
            FailureKind::Logic,
            || two(&bx, &by),
        );
        let m = (space.norm_sq_unchecked(&px) * space.norm_sq_unchecked(&py) - direct.norm_sqr())
            / pair_scale;
        self.record(
            SCHWARZ_STEP,
            i,
            m >= -IDENTITY_REL_TOL,
            m,
            FailureKind::Logic,
            || two(&bx, &by),
        );

        // Companion bounds.
        let mid = x.midpoint(&y);
        let half = x.half_difference(&y);
        let mc = rng.random::<f64>();
        let bc = certified_box(rng, &space, &family, &index, &[&mid], mc)?;
        let c1 = bounds::companion_bound(&space, &x, &y, &family, &bc, tol)?;
        let cscale = 0.5 * (scale - bx.half_diameter_sq() + scale_y - by.half_diameter_sq())
            + bc.half_diameter_sq();
        if c1.certified {
            let m = (c1.bound - c1.re_deviation) / cscale;
            self.record(
                COMPANION_ONE_SIDED,
                i,
                m >= -CHAIN_REL_TOL,
                m,
                FailureKind::Logic,
                || two(&bc, &bc),
            );
        }
        let m2 = rng.random::<f64>();
        let b2 = certified_box(rng, &space, &family, &index, &[&mid, &half], m2)?;
        let c2 = bounds::companion_abs_bound(&space, &x, &y, &family, &b2, tol)?;
        if c2.certified {
            let cscale = cscale - bc.half_diameter_sq() + b2.half_diameter_sq();
            let m = (c2.bound - c2.abs_re_deviation) / cscale;
            self.record(
                COMPANION_TWO_SIDED,
                i,
                m >= -CHAIN_REL_TOL,
                m,
                FailureKind::Logic,
                || two(&b2, &b2),
            );
        }

        // Counting-measure embedding must reproduce the coordinate reports.
        let l2 = WeightedL2Space::unweighted(DiscretizedMeasure::counting_points(dim)?, field)?;
        let l2_family =
            OrthonormalFamily::certify(&l2, family.members().to_vec(), family.tolerance())?;
        let rep_l2 = bounds::counterpart_bounds(&l2, &x, &l2_family, &bx, tol)?;
        let g_l2 = bounds::gruss_bounds(&l2, &x, &y, &l2_family, &bx, &by, tol)?;
        let diff = [
            rep.residual - rep_l2.residual,
            rep.refined - rep_l2.refined,
            rep.coarse - rep_l2.coarse,
            rep.condition.slack_inner - rep_l2.condition.slack_inner,
            rep.condition.slack_norm - rep_l2.condition.slack_norm,
            (g.deviation - g_l2.deviation).norm(),
            g.refined - g_l2.refined,
            g.coarse - g_l2.coarse,
        ]
        .iter()
        .fold(0.0f64, |acc, d| acc.max(d.abs()));
        let certified_same = rep.certified == rep_l2.certified && g.certified == g_l2.certified;
        self.record(
            BACKEND_EQUIVALENCE,
            i,
            diff <= BACKEND_ABS_TOL && certified_same,
            -diff,
            FailureKind::Logic,
            || two(&bx, &by),
        );

        // Scalar building blocks.
        for _ in 0..SCALAR_DRAWS_PER_INSTANCE {
            let mut draw = || rng.random_range(-10.0..=10.0);
            let a = Complex64::new(draw(), draw());
            let b = Complex64::new(draw(), draw());
            let (m1, n1, p1, q1) = (draw(), draw(), draw(), draw());
            let (first, second) = bounds::scalar_lemmas_check(a, b, m1, n1, p1, q1);
            let ok = first && second;
            self.record(
                SCALAR_LEMMAS,
                i,
                ok,
                if ok { 0.0 } else { -1.0 },
                FailureKind::Logic,
                || one(&x, &bx),
            );
        }

        if self.keep_rows {
            let id = format!("d{dim}-k{family_size}-{field}-{i}");
            self.out
                .rows
                .push(TightnessRow::from_bessel(format!("{id}-x"), &rep));
            self.out
                .rows
                .push(TightnessRow::from_gruss(format!("{id}-xy"), &g));
        }
        Ok(())
    }
}

/// Slacks agree unless both exceed `threshold` in magnitude with opposite signs.
fn signs_agree(a: f64, b: f64, threshold: f64) -> bool {
    a.abs().min(b.abs()) <= threshold || (a > 0.0) == (b > 0.0)
}

/// Runs every check over `cfg.instance_count` instances per cell.
pub fn run_suite(cfg: &SuiteConfig) -> Result<SuiteOutcome> {
    run_suite_with_rows(cfg, false).map(|(o, _)| o)
}

/// As [`run_suite`], also returning a tightness row for each single- and
/// two-vector report.
pub fn run_suite_with_rows(
    cfg: &SuiteConfig,
    keep_rows: bool,
) -> Result<(SuiteOutcome, Vec<TightnessRow>)> {
    cfg.validate()?;
    let cells = cfg.cells();
    let results: Vec<CellOutcome> = cells
        .par_iter()
        .enumerate()
        .map(|(cell_index, &cell)| {
            CellRun {
                cell,
                cell_index,
                cfg,
                keep_rows,
                out: CellOutcome::default(),
            }
            .run()
        })
        .collect::<Result<_>>()?;

    let mut checks: BTreeMap<String, CheckSummary> = BTreeMap::new();
    let mut failures = Vec::new();
    let mut failure_count = 0;
    let mut rows = Vec::new();
    for r in results {
        for (name, s) in &r.checks {
            checks.entry(name.clone()).or_default().merge(s);
        }
        failure_count += r.failure_count;
        failures.extend(r.failures);
        rows.extend(r.rows);
    }
    failures.truncate(MAX_FAILURE_RECORDS);
    let outcome = SuiteOutcome {
        config: cfg.clone(),
        cells: cells.len(),
        instances: (cells.len() * cfg.instance_count) as u64,
        checks,
        failure_count,
        failures,
        generated_at_unix: None,
    };
    Ok((outcome, rows))
}
