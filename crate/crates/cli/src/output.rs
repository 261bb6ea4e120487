//! Report files: JSON, CSV tables and optional SVG plots.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use crate::report::ExperimentReport;
use crate::CliError;

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(std::io::Error::other(e))
}

/// Writes report.json, checks.csv and, when present, spectra.csv, trajectory.csv
/// and the SVG plots. Returns the paths written.
pub fn write_all(report: &ExperimentReport, dir: &Path, svg: bool) -> Result<Vec<PathBuf>, CliError> {
    fs::create_dir_all(dir)?;
    let mut written = Vec::new();

    let path = dir.join("report.json");
    fs::write(&path, report.to_json())?;
    written.push(path);

    let path = dir.join("checks.csv");
    let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
    w.write_record(["name", "anchor", "defect", "tolerance", "pass"]).map_err(csv_err)?;
    for c in &report.checks {
        w.write_record([c.name.clone(), c.anchor.as_str().to_string(), format!("{:e}", c.defect), format!("{:e}", c.tolerance), c.pass.to_string()])
            .map_err(csv_err)?;
    }
    w.flush()?;
    written.push(path);

    if !report.spectra.is_empty() {
        let path = dir.join("spectra.csv");
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(["spectrum", "index", "value"]).map_err(csv_err)?;
        for (name, values) in &report.spectra {
            for (i, v) in values.iter().enumerate() {
                w.write_record([name.clone(), i.to_string(), format!("{v:e}")]).map_err(csv_err)?;
            }
        }
        w.flush()?;
        written.push(path);
    }

    if !report.trajectory.is_empty() {
        let path = dir.join("trajectory.csv");
        let mut w = csv::Writer::from_path(&path).map_err(csv_err)?;
        w.write_record(["iteration", "value", "residual", "step"]).map_err(csv_err)?;
        for row in &report.trajectory {
            w.write_record([format!("{}", row[0]), format!("{:e}", row[1]), format!("{:e}", row[2]), format!("{:e}", row[3])]).map_err(csv_err)?;
        }
        w.flush()?;
        written.push(path);
    }

    if svg {
        if !report.trajectory.is_empty() {
            let path = dir.join("trajectory.svg");
            let value: Vec<(f64, f64)> = report.trajectory.iter().map(|r| (r[0], r[1])).collect();
            let residual: Vec<(f64, f64)> = report.trajectory.iter().map(|r| (r[0], r[2])).collect();
            fs::write(&path, plot("Kirwan flow", "iteration", &[("‖J‖²", &value), ("residual", &residual)], Kind::Line, true))?;
            written.push(path);
        }
        for (name, values) in &report.spectra {
            if values.is_empty() {
                continue;
            }
            let path = dir.join(format!("{}.svg", name.replace('.', "_")));
            let pts: Vec<(f64, f64)> = values.iter().enumerate().map(|(i, v)| (i as f64, *v)).collect();
            fs::write(&path, plot(name, "index", &[(name.as_str(), &pts)], Kind::Scatter, false))?;
            written.push(path);
        }
    }
    Ok(written)
}

#[derive(Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Line,
    Scatter,
}

const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

fn esc(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// A small self-contained SVG plot. With `log_y`, non-positive values are dropped.
pub fn plot(title: &str, xlabel: &str, series: &[(&str, &[(f64, f64)])], kind: Kind, log_y: bool) -> String {
    let (w, h, pad) = (640.0, 400.0, 60.0);
    let ty = |y: f64| if log_y { y.log10() } else { y };
    let pts: Vec<Vec<(f64, f64)>> = series
        .iter()
        .map(|(_, s)| s.iter().filter(|(x, y)| x.is_finite() && y.is_finite() && (!log_y || *y > 0.0)).map(|&(x, y)| (x, ty(y))).collect())
        .collect();
    let all = pts.iter().flatten();
    let (mut x0, mut x1, mut y0, mut y1) = (f64::INFINITY, f64::NEG_INFINITY, f64::INFINITY, f64::NEG_INFINITY);
    for &(x, y) in all {
        x0 = x0.min(x);
        x1 = x1.max(x);
        y0 = y0.min(y);
        y1 = y1.max(y);
    }
    if !x0.is_finite() {
        (x0, x1, y0, y1) = (0.0, 1.0, 0.0, 1.0);
    }
    if x1 - x0 == 0.0 {
        x1 = x0 + 1.0;
    }
    if y1 - y0 == 0.0 {
        y0 -= 0.5;
        y1 += 0.5;
    }
    let sx = |x: f64| pad + (x - x0) / (x1 - x0) * (w - 2.0 * pad);
    let sy = |y: f64| h - pad - (y - y0) / (y1 - y0) * (h - 2.0 * pad);

    let mut s = String::new();
    let _ = writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#);
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let _ = writeln!(s, r#"<text x="{}" y="24" text-anchor="middle" font-size="15">{}</text>"#, w / 2.0, esc(title));
    let _ = writeln!(
        s,
        r#"<path d="M{pad},{} L{},{} M{pad},{} L{pad},{pad}" stroke="black" fill="none"/>"#,
        h - pad,
        w - pad,
        h - pad,
        h - pad
    );
    let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="middle">{}</text>"#, w / 2.0, h - 18.0, esc(xlabel));
    for (v, anchor, x, y) in [(x0, "start", pad, h - pad + 16.0), (x1, "end", w - pad, h - pad + 16.0)] {
        let _ = writeln!(s, r#"<text x="{x}" y="{y}" text-anchor="{anchor}">{}</text>"#, tick(v, false));
    }
    for (v, y) in [(y0, h - pad), (y1, pad)] {
        let _ = writeln!(s, r#"<text x="{}" y="{}" text-anchor="end">{}</text>"#, pad - 6.0, y + 4.0, tick(v, log_y));
    }
    for (k, ((label, _), p)) in series.iter().zip(&pts).enumerate() {
        let color = COLORS[k % COLORS.len()];
        match kind {
            Kind::Line if p.len() > 1 => {
                let d: Vec<String> = p.iter().enumerate().map(|(i, &(x, y))| format!("{}{:.2},{:.2}", if i == 0 { "M" } else { "L" }, sx(x), sy(y))).collect();
                let _ = writeln!(s, r#"<path d="{}" stroke="{color}" stroke-width="1.5" fill="none"/>"#, d.join(" "));
            }
            _ => {
                for &(x, y) in p {
                    let _ = writeln!(s, r#"<circle cx="{:.2}" cy="{:.2}" r="3" fill="{color}"/>"#, sx(x), sy(y));
                }
            }
        }
        let _ = writeln!(s, r#"<text x="{}" y="{}" fill="{color}">{}</text>"#, w - pad - 110.0, pad + 16.0 * k as f64, esc(label));
    }
    s.push_str("</svg>\n");
    s
}

fn tick(v: f64, log: bool) -> String {
    if log {
        format!("1e{v:.1}")
    } else if v.abs() >= 1e4 || (v != 0.0 && v.abs() < 1e-2) {
        format!("{v:.2e}")
    } else {
        format!("{v:.3}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plot_is_well_formed() {
        let pts = [(0.0, 1.0), (1.0, 0.1), (2.0, 0.0)];
        let s = plot("a < b", "x", &[("f", &pts)], Kind::Line, true);
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        assert!(s.contains("a &lt; b"));
        assert_eq!(s.matches("<path").count(), 2);
        let s = plot("empty", "x", &[("f", &[])], Kind::Scatter, false);
        assert!(!s.contains("NaN"));
    }
}
