use std::fmt::Write as _;
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::QuadraticMap;
use crate::normalize::{classify_with, ClassLabel};
use crate::scalar::parse_rational;

use super::{CliError, MapSpec, Options, COEFFICIENT_KEYS};

#[derive(Debug, Clone, PartialEq)]
pub struct ScanOptions {
    pub dir1: [f64; 12],
    pub dir2: [f64; 12],
    pub s_range: (f64, f64),
    pub t_range: (f64, f64),
    /// Cells along `s` and `t`.
    pub resolution: (usize, usize),
}

/// Labels on the grid `base + s·dir1 + t·dir2`; `None` where
/// classification failed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScanGrid {
    pub s: Vec<f64>,
    pub t: Vec<f64>,
    /// Row `j` holds the cells with parameter `t[j]`.
    pub labels: Vec<Vec<Option<ClassLabel>>>,
}

/// Either twelve values in coefficient order or `key=value` pairs such as
/// `a10=1,b10=1`.
pub fn parse_direction(text: &str) -> Result<[f64; 12], CliError> {
    let parse = |v: &str| -> Result<f64, CliError> {
        let r = parse_rational(v).ok_or_else(|| CliError::parse(format!("not a number: {v:?}")))?;
        num_traits::ToPrimitive::to_f64(&r).ok_or_else(|| CliError::parse(format!("not a number: {v:?}")))
    };
    let parts: Vec<&str> = text.split([',', ' ']).filter(|s| !s.is_empty()).collect();
    let mut d = [0.0; 12];
    if parts.iter().any(|p| p.contains('=')) {
        for p in parts {
            let (k, v) = p
                .split_once('=')
                .ok_or_else(|| CliError::parse(format!("expected key=value, got {p:?}")))?;
            let i = COEFFICIENT_KEYS
                .iter()
                .position(|c| *c == k.trim())
                .ok_or_else(|| CliError::parse(format!("unknown coefficient {k:?}")))?;
            d[i] += parse(v)?;
        }
    } else {
        if parts.len() != 12 {
            return Err(CliError::parse(format!("expected 12 direction values, got {}", parts.len())));
        }
        for (slot, p) in d.iter_mut().zip(parts) {
            *slot = parse(p)?;
        }
    }
    Ok(d)
}

fn axis(range: (f64, f64), n: usize) -> Vec<f64> {
    if n == 1 {
        return vec![0.5 * (range.0 + range.1)];
    }
    (0..n).map(|i| range.0 + (range.1 - range.0) * i as f64 / (n - 1) as f64).collect()
}

fn check_directions(d1: &[f64; 12], d2: &[f64; 12]) -> Result<(), CliError> {
    let n1 = d1.iter().map(|v| v * v).sum::<f64>();
    let n2 = d2.iter().map(|v| v * v).sum::<f64>();
    if n1 == 0.0 || n2 == 0.0 {
        return Err(CliError::domain("scan directions must be nonzero"));
    }
    let dot = d1.iter().zip(d2).map(|(a, b)| a * b).sum::<f64>();
    // Gram determinant relative to |d1|²|d2|²
    if n1 * n2 - dot * dot <= 1e-12 * n1 * n2 {
        return Err(CliError::domain("scan directions are linearly dependent"));
    }
    Ok(())
}

pub fn cmd_scan(base: &MapSpec, scan: &ScanOptions, opts: &Options) -> Result<ScanGrid, CliError> {
    check_directions(&scan.dir1, &scan.dir2)?;
    let (ns, nt) = scan.resolution;
    if ns == 0 || nt == 0 {
        return Err(CliError::domain("resolution must be at least 1x1"));
    }
    let b = base.to_map()?.to_array();
    let s = axis(scan.s_range, ns);
    let t = axis(scan.t_range, nt);
    let settings = opts.settings();
    let cells: Vec<Option<ClassLabel>> = (0..ns * nt)
        .into_par_iter()
        .map(|idx| {
            let (i, j) = (idx % ns, idx / ns);
            let c: [f64; 12] = std::array::from_fn(|k| b[k] + s[i] * scan.dir1[k] + t[j] * scan.dir2[k]);
            classify_with(&QuadraticMap::new(c), settings).ok().map(|r| r.label)
        })
        .collect();
    let labels = cells.chunks(ns).map(|row| row.to_vec()).collect();
    Ok(ScanGrid { s, t, labels })
}

fn cell_name(l: &Option<ClassLabel>) -> String {
    l.map(|l| l.to_string()).unwrap_or_else(|| "?".into())
}

/// Stable colour per label.
fn colour(l: &Option<ClassLabel>) -> String {
    match l {
        None => "#d0d0d0".into(),
        Some(l) => {
            let i = ClassLabel::ALL.iter().position(|x| x == l).unwrap_or(0);
            format!("hsl({}, 65%, 60%)", (i * 360 / ClassLabel::ALL.len() + 7 * i) % 360)
        }
    }
}

impl ScanGrid {
    /// Header row of `s` values; one row per `t` value.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("t\\s");
        for s in &self.s {
            let _ = write!(out, ",{s}");
        }
        out.push('\n');
        for (t, row) in self.t.iter().zip(&self.labels) {
            let _ = write!(out, "{t}");
            for l in row {
                let _ = write!(out, ",{}", cell_name(l));
            }
            out.push('\n');
        }
        out
    }

    /// Class map with `t` increasing upwards and a legend of the labels
    /// present.
    pub fn to_svg(&self) -> String {
        let (ns, nt) = (self.s.len(), self.t.len());
        let cell = (480.0 / ns.max(nt) as f64).clamp(2.0, 40.0);
        let (w, h) = (cell * ns as f64, cell * nt as f64);
        let legend_w = 90.0;
        let mut svg = String::new();
        let _ = writeln!(
            svg,
            r#"<svg xmlns="http://www.w3.org/2000/svg" width="{:.0}" height="{:.0}">"#,
            w + legend_w + 20.0,
            h.max(20.0 * 19.0) + 20.0
        );
        let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
        for (j, row) in self.labels.iter().enumerate() {
            for (i, l) in row.iter().enumerate() {
                let x = 10.0 + cell * i as f64;
                let y = 10.0 + h - cell * (j + 1) as f64;
                let _ = writeln!(
                    svg,
                    r#"<rect x="{x:.2}" y="{y:.2}" width="{cell:.2}" height="{cell:.2}" fill="{}"><title>s={} t={} {}</title></rect>"#,
                    colour(l),
                    self.s[i],
                    self.t[j],
                    cell_name(l)
                );
            }
        }
        let mut present: Vec<Option<ClassLabel>> = self.labels.iter().flatten().copied().collect();
        present.sort();
        present.dedup();
        for (k, l) in present.iter().enumerate() {
            let y = 10.0 + 20.0 * k as f64;
            let x = 20.0 + w;
            let _ = writeln!(svg, r#"<rect x="{x:.0}" y="{y:.0}" width="14" height="14" fill="{}"/>"#, colour(l));
            let _ = writeln!(
                svg,
                r#"<text x="{:.0}" y="{:.0}" font-family="sans-serif" font-size="12">{}</text>"#,
                x + 20.0,
                y + 12.0,
                cell_name(l)
            );
        }
        let _ = writeln!(svg, "</svg>");
        svg
    }

    pub fn write(&self, csv: &Path, svg: Option<&Path>) -> Result<(), CliError> {
        std::fs::write(csv, self.to_csv()).map_err(|e| CliError::io(format!("{}: {e}", csv.display())))?;
        if let Some(svg) = svg {
            std::fs::write(svg, self.to_svg()).map_err(|e| CliError::io(format!("{}: {e}", svg.display())))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn options(d1: &str, d2: &str, n: usize) -> ScanOptions {
        ScanOptions {
            dir1: parse_direction(d1).unwrap(),
            dir2: parse_direction(d2).unwrap(),
            s_range: (-1.0, 1.0),
            t_range: (-1.0, 1.0),
            resolution: (n, n),
        }
    }

    #[test]
    fn single_cell_is_the_base() {
        let base = MapSpec::from_f64s(ClassLabel::E1.coefficients());
        let g = cmd_scan(&base, &options("a10=1", "b10=1", 1), &Options::default()).unwrap();
        assert_eq!(g.labels, vec![vec![Some(ClassLabel::E1)]]);
        assert_eq!(g.to_csv(), "t\\s,0\n0,E1\n");
    }

    #[test]
    fn directions_are_validated() {
        let base = MapSpec::from_f64s(ClassLabel::H3.coefficients());
        let zero = ScanOptions { dir1: [0.0; 12], ..options("a10=1", "b10=1", 2) };
        assert_eq!(cmd_scan(&base, &zero, &Options::default()).unwrap_err().exit_code(), 3);
        let dep = options("a10=1", "a10=2", 2);
        assert!(cmd_scan(&base, &dep, &Options::default()).is_err());
        assert!(parse_direction("a99=1").is_err());
        assert!(parse_direction("1,2").is_err());
    }

    #[test]
    fn parabolic_scan_shows_branches() {
        // P3 + s·a01 + t·b01
        let base = MapSpec::from_f64s(ClassLabel::P3.coefficients());
        let g = cmd_scan(&base, &options("a01=1", "b01=1", 3), &Options::default()).unwrap();
        assert_eq!(g.labels[1][1], Some(ClassLabel::P3));
        assert_eq!(g.labels[1][0], Some(ClassLabel::P1));
        assert_eq!(g.labels[0][1], Some(ClassLabel::P2));
    }
}
