use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use bessel_gruss::bounds::{self, Tolerance};
use bessel_gruss::generate::generate_certified_instance;
use bessel_gruss::instance::{encode, BoxFile, FamilySpec, InstanceFile, L2InstanceFile};
use bessel_gruss::l2::{self, DiscretizedMeasure, FamilyKind, MeasureKind, WeightedL2Space};
use bessel_gruss::report::{write_tightness_csv, TightnessRow};
use bessel_gruss::rng::stream_rng;
use bessel_gruss::sharpness::{maximize_gruss_ratio, maximize_residual_ratio, SearchConfig};
use bessel_gruss::space::{
    CoordinateSpace, Field, InnerProductSpace, OrthonormalFamily, DEFAULT_ORTHONORMAL_TOL,
};
use bessel_gruss::suite::{run_suite_with_rows, SuiteConfig};
use bessel_gruss::{Error, Result};

#[derive(Parser)]
#[command(version, about = "Certify Bessel-counterpart and Grüss-type bounds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Random seed.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Relative certification tolerance.
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Output file; stdout when omitted.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    Trig,
    Legendre,
    Counting,
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Residual,
    Gruss,
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    Real,
    Complex,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Self {
        match f {
            FieldArg::Real => Field::Real,
            FieldArg::Complex => Field::Complex,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the randomized verification suite.
    Verify {
        /// Instances per (dimension, family size, field) cell.
        #[arg(long, default_value_t = 385)]
        instances: usize,
        #[arg(long, value_delimiter = ',', default_values_t = [2, 4, 8, 16])]
        dims: Vec<usize>,
        #[arg(long, value_delimiter = ',', default_values_t = [1, 2, 4, 8])]
        family_sizes: Vec<usize>,
        #[arg(long, value_delimiter = ',', value_enum, default_values_t = [FieldArg::Real, FieldArg::Complex])]
        fields: Vec<FieldArg>,
        /// Share of instances placed exactly on the condition boundary.
        #[arg(long, default_value_t = 0.1)]
        boundary_fraction: f64,
    },
    /// Counterpart-of-Bessel report for an instance file.
    Bounds { instance: PathBuf },
    /// Grüss-type report for an instance file with a second vector.
    Gruss { instance: PathBuf },
    /// Weighted L2 demonstration.
    L2demo {
        #[arg(value_enum)]
        demo: Demo,
        /// Read the sampled functions and boxes from this file.
        #[arg(long)]
        input: Option<PathBuf>,
        /// Write the demo's input file here.
        #[arg(long)]
        save_instance: Option<PathBuf>,
    },
    /// Search for instances maximizing the bound tightness ratio.
    Sharpness {
        #[arg(long, value_enum, default_value_t = Mode::Residual)]
        mode: Mode,
        #[arg(long, default_value_t = 4)]
        dim: usize,
        #[arg(long, default_value_t = 2)]
        family_size: usize,
        #[arg(long, value_enum, default_value_t = FieldArg::Real)]
        field: FieldArg,
        #[arg(long, default_value_t = 64)]
        restarts: usize,
        #[arg(long, default_value_t = 2000)]
        steps: usize,
        /// Seed restart 0 with the two-dimensional extremal construction.
        #[arg(long)]
        extremal_start: bool,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn tolerance(cli_tol: Option<f64>) -> Tolerance {
    Tolerance::Relative(cli_tol.unwrap_or(bounds::DEFAULT_RELATIVE_TOL))
}

fn output(path: &Option<PathBuf>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p)?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit_json<T: Serialize>(path: &Option<PathBuf>, value: &T) -> Result<()> {
    let mut w = output(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn emit_rows(path: &Option<PathBuf>, rows: &[TightnessRow]) -> Result<()> {
    let mut w = output(path)?;
    write_tightness_csv(rows, &mut w)?;
    w.flush()?;
    Ok(())
}

fn read_json<T: serde::de::DeserializeOwned>(path: &Path) -> Result<T> {
    Ok(serde_json::from_reader(io::BufReader::new(File::open(
        path,
    )?))?)
}

/// Returns whether the run had zero failures.
fn run(cli: Cli) -> Result<bool> {
    let tol = tolerance(cli.tol);
    match cli.command {
        Command::Verify {
            instances,
            dims,
            family_sizes,
            fields,
            boundary_fraction,
        } => {
            let defaults = SuiteConfig::default();
            let cfg = SuiteConfig {
                instance_count: instances,
                dims,
                family_sizes,
                fields: fields.into_iter().map(Field::from).collect(),
                seed: cli.seed.unwrap_or(defaults.seed),
                tolerance: cli.tol.unwrap_or(defaults.tolerance),
                boundary_fraction,
            };
            let (mut outcome, rows) = run_suite_with_rows(&cfg, cli.format == Format::Csv)?;
            outcome.generated_at_unix = std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .ok()
                .map(|d| d.as_secs());
            match cli.format {
                Format::Json => emit_json(&cli.out, &outcome)?,
                Format::Csv => emit_rows(&cli.out, &rows)?,
            }
            eprintln!(
                "{} instances, {} failures",
                outcome.instances, outcome.failure_count
            );
            Ok(outcome.all_passed())
        }
        Command::Bounds { instance } => {
            let file: InstanceFile = read_json(&instance)?;
            let p = file.to_problem()?;
            let rep = bounds::counterpart_bounds(&p.space, &p.x, &p.family, &p.box_x, tol)?;
            let ok = !rep.certified || rep.chain_holds(chain_tol(&p.space, &p.x, &p.box_x));
            match cli.format {
                Format::Json => emit_json(
                    &cli.out,
                    &json!({ "input_digest": file.digest(), "report": rep }),
                )?,
                Format::Csv => emit_rows(
                    &cli.out,
                    &[TightnessRow::from_bessel(stem(&instance), &rep)],
                )?,
            }
            Ok(ok)
        }
        Command::Gruss { instance } => {
            let file: InstanceFile = read_json(&instance)?;
            let p = file.to_problem()?;
            let (y, by) =
                p.y.as_ref()
                    .zip(p.box_y.as_ref())
                    .ok_or_else(|| Error::InvalidParameter("instance has no y / box_y".into()))?;
            let rep = bounds::gruss_bounds(&p.space, &p.x, y, &p.family, &p.box_x, by, tol)?;
            let scale = (bounds::instance_scale(&p.space, &p.x, &p.box_x)
                * bounds::instance_scale(&p.space, y, by))
            .sqrt();
            let ok = !rep.certified || rep.chain_holds(1e-9 * scale);
            match cli.format {
                Format::Json => emit_json(
                    &cli.out,
                    &json!({ "input_digest": file.digest(), "report": rep }),
                )?,
                Format::Csv => {
                    emit_rows(&cli.out, &[TightnessRow::from_gruss(stem(&instance), &rep)])?
                }
            }
            Ok(ok)
        }
        Command::L2demo {
            demo,
            input,
            save_instance,
        } => {
            let file = match input {
                Some(path) => read_json(&path)?,
                None => demo_instance(demo, cli.seed.unwrap_or(0))?,
            };
            if let Some(path) = save_instance {
                emit_json(&Some(path), &file)?;
            }
            l2_report(&file, tol, cli.format, &cli.out)
        }
        Command::Sharpness {
            mode,
            dim,
            family_size,
            field,
            restarts,
            steps,
            extremal_start,
        } => {
            let cfg = SearchConfig {
                dimension: dim,
                family_size,
                field: field.into(),
                restarts,
                steps_per_restart: steps,
                seed: cli.seed.unwrap_or(SearchConfig::default().seed),
                extremal_start,
                ..SearchConfig::default()
            };
            let result = match mode {
                Mode::Residual => maximize_residual_ratio(&cfg)?,
                Mode::Gruss => maximize_gruss_ratio(&cfg)?,
            };
            match cli.format {
                Format::Json => emit_json(&cli.out, &json!({ "config": cfg, "result": result }))?,
                Format::Csv => {
                    let p = result.best_instance.to_problem()?;
                    let row = match (mode, p.y.as_ref().zip(p.box_y.as_ref())) {
                        (Mode::Gruss, Some((y, by))) => TightnessRow::from_gruss(
                            "best",
                            &bounds::gruss_bounds(&p.space, &p.x, y, &p.family, &p.box_x, by, tol)?,
                        ),
                        _ => TightnessRow::from_bessel(
                            "best",
                            &bounds::counterpart_bounds(&p.space, &p.x, &p.family, &p.box_x, tol)?,
                        ),
                    };
                    emit_rows(&cli.out, &[row])?
                }
            }
            Ok(result.best_ratio <= 0.25 + 1e-9)
        }
    }
}

fn chain_tol<S: InnerProductSpace>(
    space: &S,
    x: &bessel_gruss::space::Vector,
    bx: &bounds::CoefficientBox,
) -> f64 {
    1e-9 * bounds::instance_scale(space, x, bx)
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "instance".into())
}

/// Built-in inputs: `2 + sin s` and `2 + cos s` on one period against the
/// constant function; `exp s` and `s` on `[-1, 1]`; and a generated vector
/// instance embedded in a counting measure.
fn demo_instance(demo: Demo, seed: u64) -> Result<L2InstanceFile> {
    use std::f64::consts::PI;
    let real_box = |lo: f64, hi: f64| BoxFile {
        lower: encode(&[lo.into()], Field::Real),
        upper: encode(&[hi.into()], Field::Real),
    };
    match demo {
        Demo::Trig => {
            let space = WeightedL2Space::unweighted(
                DiscretizedMeasure::periodic_trapezoid(0.0, 2.0 * PI, 1024)?,
                Field::Real,
            )?;
            let mut file = L2InstanceFile::from_space(&space);
            let s = (2.0 * PI).sqrt();
            file.functions.insert(
                "f".into(),
                encode(space.sample_real(|t| 2.0 + t.sin()).as_slice(), Field::Real),
            );
            file.functions.insert(
                "g".into(),
                encode(space.sample_real(|t| 2.0 + t.cos()).as_slice(), Field::Real),
            );
            file.family = Some(FamilySpec {
                kind: FamilyKind::Trig,
                count: 1,
            });
            file.boxes.insert("f".into(), real_box(s, 3.0 * s));
            file.boxes.insert("g".into(), real_box(s, 3.0 * s));
            Ok(file)
        }
        Demo::Legendre => {
            let space = WeightedL2Space::unweighted(
                DiscretizedMeasure::gauss_legendre(-1.0, 1.0, 32)?,
                Field::Real,
            )?;
            let mut file = L2InstanceFile::from_space(&space);
            let s = 2f64.sqrt();
            file.functions.insert(
                "f".into(),
                encode(space.sample_real(f64::exp).as_slice(), Field::Real),
            );
            file.functions.insert(
                "g".into(),
                encode(space.sample_real(|t| t).as_slice(), Field::Real),
            );
            file.family = Some(FamilySpec {
                kind: FamilyKind::Legendre,
                count: 1,
            });
            file.boxes.insert(
                "f".into(),
                real_box(s / std::f64::consts::E, s * std::f64::consts::E),
            );
            file.boxes.insert("g".into(), real_box(-s, s));
            Ok(file)
        }
        Demo::Counting => {
            let mut rng = stream_rng(seed, 0);
            let g = generate_certified_instance(&mut rng, 6, 3, Field::Real)?;
            let space =
                WeightedL2Space::unweighted(DiscretizedMeasure::counting_points(6)?, Field::Real)?;
            let mut file = L2InstanceFile::from_space(&space);
            file.functions
                .insert("f".into(), encode(g.x.as_slice(), Field::Real));
            file.members = Some(
                g.family
                    .members()
                    .iter()
                    .map(|m| encode(m.as_slice(), Field::Real))
                    .collect(),
            );
            file.index = Some(g.bx.index().as_slice().to_vec());
            file.boxes
                .insert("f".into(), BoxFile::encode(&g.bx, Field::Real));
            Ok(file)
        }
    }
}

fn l2_report(
    file: &L2InstanceFile,
    tol: Tolerance,
    format: Format,
    out: &Option<PathBuf>,
) -> Result<bool> {
    let space = file.space()?;
    let family = file.family(&space, DEFAULT_ORTHONORMAL_TOL)?;
    let index = file.index_set(family.len())?;
    let f = file.function("f")?;
    let box_f = file
        .boxes
        .get("f")
        .ok_or_else(|| Error::InvalidParameter("l2 instance has no box for f".into()))?
        .decode(index.clone())?;
    let rep = l2::l2_counterpart_report(&space, &f, &family, &box_f, tol)?;
    let mut ok = !rep.certified || rep.chain_holds(chain_tol(&space, &f, &box_f));
    let mut rows = vec![TightnessRow::from_bessel("f", &rep)];
    let bracketable = space.field().is_real() && space.measure().kind() != MeasureKind::Counting;
    let sandwich_f = bracketable
        .then(|| l2::sandwich_check(&space, &f, &family, &box_f, tol))
        .transpose()?;
    let mut body = json!({
        "input_digest": file.digest(),
        "f": { "report": rep, "sandwich": sandwich_f },
    });
    if space.measure().kind() == MeasureKind::Counting
        && space.effective_weights().iter().all(|&w| w == 1.0)
    {
        let coords = CoordinateSpace::new(space.field(), space.dimension())?;
        let cf = OrthonormalFamily::certify(
            &coords,
            family.members().to_vec(),
            DEFAULT_ORTHONORMAL_TOL,
        )?;
        let vrep = bounds::counterpart_bounds(&coords, &f, &cf, &box_f, tol)?;
        let diff = [
            rep.residual - vrep.residual,
            rep.refined - vrep.refined,
            rep.coarse - vrep.coarse,
            rep.condition.slack_inner - vrep.condition.slack_inner,
            rep.condition.slack_norm - vrep.condition.slack_norm,
        ]
        .iter()
        .fold(0.0f64, |m, d| m.max(d.abs()));
        ok &= diff <= 1e-12 && rep.certified == vrep.certified;
        body["coordinate_backend"] = json!({ "report": vrep, "max_abs_difference": diff });
    }
    if let (Ok(g), Some(bg)) = (file.function("g"), file.boxes.get("g")) {
        let box_g = bg.decode(index)?;
        let grep = l2::l2_gruss_report(&space, &f, &g, &family, &box_f, &box_g, tol)?;
        let scale = (bounds::instance_scale(&space, &f, &box_f)
            * bounds::instance_scale(&space, &g, &box_g))
        .sqrt();
        ok &= !grep.certified || grep.chain_holds(1e-9 * scale);
        let sandwich_g = bracketable
            .then(|| l2::sandwich_check(&space, &g, &family, &box_g, tol))
            .transpose()?;
        rows.push(TightnessRow::from_gruss("f,g", &grep));
        body["gruss"] = json!({ "report": grep, "sandwich_g": sandwich_g });
    }
    match format {
        Format::Json => emit_json(out, &body)?,
        Format::Csv => emit_rows(out, &rows)?,
    }
    Ok(ok)
}
