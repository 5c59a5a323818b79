//! CSV and SVG artifacts.
//!
//! Trajectory CSVs carry the columns of [`Observable::ALL`] after `tau`, each
//! value in `{:.16e}` (17 significant digits), which round-trips every `f64`.

use std::fmt::Write as _;
use std::path::Path;

use ionso_core::{Curve, Observable, Sample, TrajectoryRecord};

use crate::error::{CliError, CliResult};

pub fn header() -> Vec<&'static str> {
    std::iter::once("tau").chain(Observable::ALL.iter().map(|o| o.name())).collect()
}

fn fmt(v: f64) -> String {
    format!("{v:.16e}")
}

fn write_rows(header: &[&str], rows: impl Iterator<Item = Vec<f64>>) -> String {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(row.into_iter().map(fmt)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn trajectory_csv(record: &TrajectoryRecord) -> String {
    let rows = record
        .times
        .iter()
        .zip(&record.samples)
        .map(|(&t, s)| std::iter::once(t).chain(Observable::ALL.iter().map(|&o| s.get(o))).collect());
    write_rows(&header(), rows)
}

pub fn curve_csv(curve: &Curve) -> String {
    let rows = (0..curve.len()).map(|k| vec![curve.tau[k], curve.x[k], curve.y[k]]);
    write_rows(&["tau", "x", "y"], rows)
}

/// Parse a trajectory CSV; the header must match exactly.
pub fn parse_trajectory(text: &str, path: &Path) -> CliResult<TrajectoryRecord> {
    let bad = |reason: String| CliError::Trajectory { path: path.to_path_buf(), reason };
    let mut reader = csv::ReaderBuilder::new().has_headers(true).from_reader(text.as_bytes());
    let found: Vec<String> =
        reader.headers().map_err(|e| bad(e.to_string()))?.iter().map(|s| s.trim().to_string()).collect();
    let expected = header();
    if found != expected {
        return Err(bad(format!("header {:?} differs from {:?}", found.join(","), expected.join(","))));
    }
    let mut record = TrajectoryRecord::default();
    for (line, row) in reader.records().enumerate() {
        let row = row.map_err(|e| bad(e.to_string()))?;
        let values = row
            .iter()
            .map(|f| f.trim().parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| bad(format!("row {}: {e}", line + 2)))?;
        let mut sample = Sample::default();
        for (o, &v) in Observable::ALL.iter().zip(&values[1..]) {
            sample.set(*o, v);
        }
        record.push(values[0], sample).map_err(|e| bad(format!("row {}: {e}", line + 2)))?;
    }
    Ok(record)
}

pub fn read_trajectory(path: &Path) -> CliResult<TrajectoryRecord> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse_trajectory(&text, path)
}

/// The `(x, y)` path as a single polyline in an equal-aspect view box padded by 5%.
/// `y` grows upward, as in a plot.
pub fn polyline_svg(x: &[f64], y: &[f64]) -> String {
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for (&a, &b) in x.iter().zip(y) {
        x0 = x0.min(a);
        x1 = x1.max(a);
        y0 = y0.min(-b);
        y1 = y1.max(-b);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 0.0, 0.0, 0.0);
    }
    let side = (x1 - x0).max(y1 - y0);
    let side = if side > 0.0 { side } else { 1.0 };
    let pad = 0.05 * side;
    let (cx, cy) = ((x0 + x1) / 2.0, (y0 + y1) / 2.0);
    let half = side / 2.0 + pad;
    let mut points = String::new();
    for (&a, &b) in x.iter().zip(y) {
        if !points.is_empty() {
            points.push(' ');
        }
        write!(points, "{a:.6},{:.6}", -b).unwrap();
    }
    let stroke = side / 400.0;
    format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"{:.6} {:.6} {:.6} {:.6}\" width=\"600\" height=\"600\">\n\
         <polyline fill=\"none\" stroke=\"black\" stroke-width=\"{stroke:.6}\" points=\"{points}\"/>\n</svg>\n",
        cx - half,
        cy - half,
        2.0 * half,
        2.0 * half,
    )
}

pub fn write_file(path: &Path, contents: &str) -> CliResult<()> {
    std::fs::write(path, contents).map_err(|e| CliError::io(path, e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record() -> TrajectoryRecord {
        let mut r = TrajectoryRecord::default();
        for k in 0..5 {
            let t = 0.1 * k as f64;
            let mut s = Sample::default();
            for (i, o) in Observable::ALL.iter().enumerate() {
                s.set(*o, (t + i as f64).sin() / 3.0);
            }
            r.push(t, s).unwrap();
        }
        r
    }

    #[test]
    fn header_line() {
        let csv = trajectory_csv(&record());
        assert_eq!(csv.lines().next().unwrap(), "tau,x,y,px,py,sx,sy,sz,trace,purity,tail_x,tail_y,leakage");
        assert_eq!(csv.lines().count(), 6);
    }

    #[test]
    fn values_carry_17_digits() {
        let csv = trajectory_csv(&record());
        let field = csv.lines().nth(2).unwrap().split(',').nth(1).unwrap();
        let mantissa = field.split('e').next().unwrap().trim_start_matches('-').replace('.', "");
        assert_eq!(mantissa.len(), 17, "{field}");
    }

    #[test]
    fn round_trip_is_exact() {
        let r = record();
        let back = parse_trajectory(&trajectory_csv(&r), Path::new("mem")).unwrap();
        assert_eq!(back.times, r.times);
        assert_eq!(back.samples, r.samples);
    }

    #[test]
    fn rejects_wrong_header_and_bad_numbers() {
        let csv = trajectory_csv(&record());
        let err = parse_trajectory(&csv.replacen("tau,x", "t,x", 1), Path::new("mem")).unwrap_err();
        assert!(err.to_string().contains("header"));
        let broken = csv.replacen("e-1,", "e-1x,", 1);
        assert!(parse_trajectory(&broken, Path::new("mem")).is_err());
    }

    #[test]
    fn svg_viewbox_is_square_and_padded() {
        let svg = polyline_svg(&[0.0, 2.0], &[0.0, 1.0]);
        assert!(svg.contains("viewBox=\"-0.100000 -1.600000 2.200000 2.200000\""), "{svg}");
        assert_eq!(svg.matches("<polyline").count(), 1);
    }
}
