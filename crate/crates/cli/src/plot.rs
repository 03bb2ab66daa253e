use std::fmt::Write as _;
use std::fs;
use std::io;
use std::path::Path;

use crate::bundle::Table;
use crate::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PlotKind {
    /// `log10` of the `norm` column against `n`.
    Orbit,
    /// Coloured cells from `re`, `im`, `verdict`.
    Map,
    /// `f_lower` and `f_upper` against `tau`.
    Profile,
}

const W: f64 = 640.0;
const H: f64 = 480.0;
const PAD: f64 = 48.0;

fn bad(msg: String) -> CliError {
    CliError::IoError(io::Error::new(io::ErrorKind::InvalidData, msg))
}

fn column(table: &Table, name: &str) -> Result<Vec<f64>> {
    table
        .numbers(name)
        .ok_or_else(|| bad(format!("table {} has no column {name:?}", table.name)))
}

struct Frame {
    x0: f64,
    x1: f64,
    y0: f64,
    y1: f64,
}

impl Frame {
    fn fit(xs: &[f64], ys: &[f64]) -> Self {
        let (x0, x1) = bounds(xs);
        let (y0, y1) = bounds(ys);
        Self { x0, x1, y0, y1 }
    }

    fn px(&self, x: f64) -> f64 {
        PAD + (x - self.x0) / (self.x1 - self.x0) * (W - 2.0 * PAD)
    }

    fn py(&self, y: f64) -> f64 {
        H - PAD - (y - self.y0) / (self.y1 - self.y0) * (H - 2.0 * PAD)
    }
}

fn bounds(v: &[f64]) -> (f64, f64) {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in v.iter().filter(|x| x.is_finite()) {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    if !lo.is_finite() {
        return (0.0, 1.0);
    }
    if hi - lo < 1e-12 {
        (lo - 0.5, hi + 0.5)
    } else {
        (lo, hi)
    }
}

fn header(out: &mut String, title: &str, frame: &Frame, xlabel: &str, ylabel: &str) {
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">"#
    );
    let _ = writeln!(out, r#"<rect width="{W}" height="{H}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r#"<text x="{}" y="20" font-size="14" text-anchor="middle">{title}</text>"#,
        W / 2.0
    );
    let _ = writeln!(
        out,
        r#"<rect x="{PAD}" y="{PAD}" width="{}" height="{}" fill="none" stroke="black"/>"#,
        W - 2.0 * PAD,
        H - 2.0 * PAD
    );
    let _ = writeln!(
        out,
        r#"<text x="{}" y="{}" font-size="11" text-anchor="middle">{xlabel} [{:.3}, {:.3}]</text>"#,
        W / 2.0,
        H - 12.0,
        frame.x0,
        frame.x1
    );
    let _ = writeln!(
        out,
        r#"<text x="14" y="{}" font-size="11" transform="rotate(-90 14 {})" text-anchor="middle">{ylabel} [{:.3}, {:.3}]</text>"#,
        H / 2.0,
        H / 2.0,
        frame.y0,
        frame.y1
    );
}

fn polyline(out: &mut String, frame: &Frame, xs: &[f64], ys: &[f64], colour: &str) {
    let pts: Vec<String> = xs
        .iter()
        .zip(ys)
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(&x, &y)| format!("{:.2},{:.2}", frame.px(x), frame.py(y)))
        .collect();
    let _ = writeln!(
        out,
        r#"<polyline fill="none" stroke="{colour}" stroke-width="1.2" points="{}"/>"#,
        pts.join(" ")
    );
}

fn verdict_colour(v: &str) -> &'static str {
    match v {
        "decay" => "#3b6fb6",
        "bounded_below" => "#7fb13b",
        "chaotic" => "#d0392b",
        _ => "#999999",
    }
}

/// Renders `table` as a standalone SVG at `path`.
pub fn emit_plot(table: &Table, kind: PlotKind, path: &Path) -> Result<()> {
    if table.is_empty() {
        return Err(bad(format!("table {} is empty", table.name)));
    }
    let mut out = String::new();
    match kind {
        PlotKind::Orbit => {
            let n = column(table, "n")?;
            let ys: Vec<f64> = column(table, "norm")?
                .into_iter()
                .map(|v| if v > 0.0 { v.log10() } else { f64::NAN })
                .collect();
            let frame = Frame::fit(&n, &ys);
            header(&mut out, &table.name, &frame, "n", "log10 norm");
            polyline(&mut out, &frame, &n, &ys, "#3b6fb6");
        }
        PlotKind::Profile => {
            let tau: Vec<f64> = column(table, "tau")?
                .into_iter()
                .map(|t| if t > 0.0 { t.log10() } else { f64::NAN })
                .collect();
            let lo = column(table, "f_lower")?;
            let hi = column(table, "f_upper")?;
            let frame = Frame {
                y0: 0.0,
                y1: 1.0,
                ..Frame::fit(&tau, &[0.0, 1.0])
            };
            header(&mut out, &table.name, &frame, "log10 tau", "F");
            polyline(&mut out, &frame, &tau, &lo, "#3b6fb6");
            polyline(&mut out, &frame, &tau, &hi, "#d0392b");
        }
        PlotKind::Map => {
            let re = column(table, "re")?;
            let im = column(table, "im")?;
            let vc = table
                .column("verdict")
                .ok_or_else(|| bad(format!("table {} has no column \"verdict\"", table.name)))?;
            let frame = Frame::fit(&re, &im);
            header(&mut out, &table.name, &frame, "Re", "Im");
            let cols = re.iter().filter(|&&x| x == re[0]).count().max(1);
            let rows = (re.len() / cols).max(1);
            let cw = (W - 2.0 * PAD) / rows as f64;
            let ch = (H - 2.0 * PAD) / cols as f64;
            for ((x, y), row) in re.iter().zip(&im).zip(&table.rows) {
                let _ = writeln!(
                    out,
                    r#"<rect x="{:.2}" y="{:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
                    frame.px(*x) - cw / 2.0,
                    frame.py(*y) - ch / 2.0,
                    cw,
                    ch,
                    verdict_colour(&row[vc])
                );
            }
        }
    }
    out.push_str("</svg>\n");
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    fs::write(path, out)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_table_is_io_error() {
        let t = Table::new("orbit", &["n", "norm"]);
        let p = std::env::temp_dir().join("chaoskit_plot_empty.svg");
        assert!(matches!(emit_plot(&t, PlotKind::Orbit, &p), Err(CliError::IoError(_))));
    }

    #[test]
    fn missing_column_is_io_error() {
        let mut t = Table::new("orbit", &["n", "value"]);
        t.push(vec!["0".into(), "1".into()]);
        let p = std::env::temp_dir().join("chaoskit_plot_missing.svg");
        assert!(matches!(emit_plot(&t, PlotKind::Orbit, &p), Err(CliError::IoError(_))));
    }

    #[test]
    fn writes_svg() {
        let mut t = Table::new("orbit", &["n", "norm"]);
        for n in 0..10 {
            t.push(vec![n.to_string(), (2f64.powi(n)).to_string()]);
        }
        let p = std::env::temp_dir().join(format!("chaoskit_plot_{}.svg", std::process::id()));
        emit_plot(&t, PlotKind::Orbit, &p).unwrap();
        let s = fs::read_to_string(&p).unwrap();
        assert!(s.starts_with("<svg") && s.ends_with("</svg>\n"));
        fs::remove_file(p).unwrap();
    }
}
