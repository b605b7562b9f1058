//! Tightness tables: one CSV row per bound report, for external plotting.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::bounds::{BesselBoundReport, GrussBoundReport};
use crate::error::Result;

pub const TIGHTNESS_HEADER: [&str; 7] = [
    "instance_id",
    "value",
    "refined",
    "coarse",
    "slack_x",
    "slack_y",
    "ratio",
];

/// `value` is the Bessel residual or `|deviation|`; `ratio` is
/// `value / (4 coarse)`, i.e. the value over the unscaled box diameter
/// term, and `0` when `coarse` is zero.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TightnessRow {
    pub instance_id: String,
    pub value: f64,
    pub refined: f64,
    pub coarse: f64,
    pub slack_x: f64,
    pub slack_y: Option<f64>,
    pub ratio: f64,
}

fn ratio(value: f64, coarse: f64) -> f64 {
    if coarse > 0.0 {
        value / (4.0 * coarse)
    } else {
        0.0
    }
}

impl TightnessRow {
    pub fn from_bessel(id: impl Into<String>, rep: &BesselBoundReport) -> Self {
        Self {
            instance_id: id.into(),
            value: rep.residual,
            refined: rep.refined,
            coarse: rep.coarse,
            slack_x: rep.condition.slack_inner,
            slack_y: None,
            ratio: ratio(rep.residual, rep.coarse),
        }
    }

    pub fn from_gruss(id: impl Into<String>, rep: &GrussBoundReport) -> Self {
        let value = rep.deviation.norm();
        Self {
            instance_id: id.into(),
            value,
            refined: rep.refined,
            coarse: rep.coarse,
            slack_x: rep.condition_x.slack_inner,
            slack_y: Some(rep.condition_y.slack_inner),
            ratio: ratio(value, rep.coarse),
        }
    }
}

/// 17 significant digits, `.` as decimal separator.
pub fn format_number(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn write_tightness_csv<W: Write>(rows: &[TightnessRow], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(TIGHTNESS_HEADER)?;
    for r in rows {
        w.write_record([
            r.instance_id.clone(),
            format_number(r.value),
            format_number(r.refined),
            format_number(r.coarse),
            format_number(r.slack_x),
            r.slack_y.map(format_number).unwrap_or_default(),
            format_number(r.ratio),
        ])?;
    }
    w.flush()?;
    Ok(())
}

pub fn emit_tightness_table(rows: &[TightnessRow], path: &Path) -> Result<()> {
    let file = std::fs::File::create(path)?;
    write_tightness_csv(rows, std::io::BufWriter::new(file))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharpness::extremal_instance;

    #[test]
    fn numbers_round_trip() {
        for v in [0.1, 1.0 / 3.0, std::f64::consts::PI, -2.5e-300, 0.0] {
            assert_eq!(format_number(v).parse::<f64>().unwrap(), v);
        }
        assert_eq!(format_number(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn extremal_row() {
        let rep = extremal_instance(1.0).unwrap().report();
        let row = TightnessRow::from_bessel("extremal", &rep);
        assert!((row.ratio - 0.25).abs() < 1e-15);
        let mut buf = Vec::new();
        write_tightness_csv(&[row], &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(
            lines.next().unwrap(),
            "instance_id,value,refined,coarse,slack_x,slack_y,ratio"
        );
        let fields: Vec<&str> = lines.next().unwrap().split(',').collect();
        assert_eq!(fields[0], "extremal");
        assert_eq!(fields[5], "");
        assert!((fields[6].parse::<f64>().unwrap() - 0.25).abs() < 1e-15);
    }
}
