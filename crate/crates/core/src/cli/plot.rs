use std::fmt::Write as _;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Point, QuadraticMap};
use crate::critical::{components_of, critical_conic, sample_curve, ConicGeometry, ConicKind, Curve};

use super::{CliError, MapSpec, Options};

const CANVAS: f64 = 640.0;
const MARGIN: f64 = 24.0;
const BOUNDARY_SAMPLES: usize = 720;
const CURVE_SAMPLES: usize = 8192;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PlotOptions {
    pub center: Point,
    pub radius: f64,
    /// Random points of the disk in the image cloud.
    pub points: usize,
}

impl Default for PlotOptions {
    fn default() -> Self {
        Self { center: [0.0, 0.0], radius: 1.0, points: 3000 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlotSummary {
    /// Red polylines of `J1` (and red points for isolated critical values).
    pub j1_polylines: usize,
    pub j1_points: usize,
    /// `J0` is the whole plane, so the whole image is critical.
    pub all_critical: bool,
    /// `[xmin, ymin, xmax, ymax]` of the drawing in range coordinates.
    pub bounds: [f64; 4],
}

fn inside(p: &Point, c: &Point, r: f64) -> bool {
    (p[0] - c[0]).hypot(p[1] - c[1]) <= r
}

/// Image polylines of the parts of `curve` inside the disk.
fn clipped_image(q: &QuadraticMap, curve: &Curve, center: &Point, radius: f64) -> Vec<Vec<Point>> {
    let window = 2.0 * (center[0].hypot(center[1]) + radius) + curve.data_scale();
    let s = sample_curve(q, curve, CURVE_SAMPLES, window);
    let mut runs: Vec<Vec<Point>> = Vec::new();
    let mut current: Vec<Point> = Vec::new();
    for (p, img) in s.points.iter().zip(&s.images) {
        if inside(p, center, radius) {
            current.push(*img);
        } else if !current.is_empty() {
            runs.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        // a closed curve may wrap around the parameter origin
        if curve.is_closed() && !runs.is_empty() && s.points.first().is_some_and(|p| inside(p, center, radius)) {
            current.extend(runs.remove(0));
        }
        runs.push(current);
    }
    runs
}

struct Frame {
    lo: Point,
    scale: f64,
}

impl Frame {
    fn new(points: impl Iterator<Item = Point>) -> (Self, [f64; 4]) {
        let mut b = [f64::INFINITY, f64::INFINITY, f64::NEG_INFINITY, f64::NEG_INFINITY];
        for p in points.filter(|p| p[0].is_finite() && p[1].is_finite()) {
            b = [b[0].min(p[0]), b[1].min(p[1]), b[2].max(p[0]), b[3].max(p[1])];
        }
        if !b[0].is_finite() {
            b = [-1.0, -1.0, 1.0, 1.0];
        }
        let span = (b[2] - b[0]).max(b[3] - b[1]).max(1e-9);
        let scale = (CANVAS - 2.0 * MARGIN) / span;
        (Self { lo: [b[0], b[1]], scale }, b)
    }

    /// Canvas coordinates, y pointing up.
    fn map(&self, p: &Point) -> (f64, f64) {
        (MARGIN + (p[0] - self.lo[0]) * self.scale, CANVAS - MARGIN - (p[1] - self.lo[1]) * self.scale)
    }
}

fn polyline(svg: &mut String, frame: &Frame, pts: &[Point], style: &str) {
    let mut d = String::new();
    for p in pts {
        let (x, y) = frame.map(p);
        let _ = write!(d, "{x:.2},{y:.2} ");
    }
    let _ = writeln!(svg, r#"<polyline points="{}" {style}/>"#, d.trim_end());
}

/// SVG of `Q(disk)` as a point cloud with its boundary, and `J1` in red.
pub fn render_plot(q: &QuadraticMap, plot: &PlotOptions, seed: u64) -> (String, PlotSummary) {
    let PlotOptions { center, radius, points } = *plot;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let cloud: Vec<Point> = (0..points)
        .map(|_| {
            let r = radius * rng.random::<f64>().sqrt();
            let t = rng.random::<f64>() * std::f64::consts::TAU;
            q.evaluate(&[center[0] + r * t.cos(), center[1] + r * t.sin()])
        })
        .collect();
    let mut boundary: Vec<Point> = (0..=BOUNDARY_SAMPLES)
        .map(|i| {
            let t = std::f64::consts::TAU * i as f64 / BOUNDARY_SAMPLES as f64;
            q.evaluate(&[center[0] + radius * t.cos(), center[1] + radius * t.sin()])
        })
        .collect();
    boundary.dedup();

    let class = critical_conic(q, Default::default());
    let all_critical = class.kind == ConicKind::AllPlane;
    let mut j1_lines: Vec<Vec<Point>> = Vec::new();
    let mut j1_points: Vec<Point> = Vec::new();
    match (&class.kind, &class.geometry) {
        (ConicKind::Point, ConicGeometry::Point { at }) => {
            if inside(at, &center, radius) {
                j1_points.push(q.evaluate(at));
            }
        }
        (ConicKind::AllPlane | ConicKind::Empty, _) => {}
        _ => {
            for c in components_of(&class.geometry) {
                for run in clipped_image(q, &c, &center, radius) {
                    if run.len() == 1 || run.windows(2).all(|w| w[0] == w[1]) {
                        j1_points.push(run[0]);
                    } else {
                        j1_lines.push(run);
                    }
                }
            }
        }
    }

    let (frame, bounds) = Frame::new(cloud.iter().chain(&boundary).copied());
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{CANVAS}" height="{CANVAS}" viewBox="0 0 {CANVAS} {CANVAS}">"#
    );
    let _ = writeln!(svg, r#"<rect width="100%" height="100%" fill="white"/>"#);
    let cloud_fill = if all_critical { "red" } else { "#9a9a9a" };
    let _ = writeln!(svg, r#"<g fill="{cloud_fill}" fill-opacity="0.5">"#);
    for p in &cloud {
        let (x, y) = frame.map(p);
        let _ = writeln!(svg, r#"<circle cx="{x:.2}" cy="{y:.2}" r="1"/>"#);
    }
    let _ = writeln!(svg, "</g>");
    polyline(&mut svg, &frame, &boundary, r#"fill="none" stroke="black" stroke-width="1""#);
    for run in &j1_lines {
        polyline(&mut svg, &frame, run, r#"class="j1" fill="none" stroke="red" stroke-width="2""#);
    }
    for p in &j1_points {
        let (x, y) = frame.map(p);
        let _ = writeln!(svg, r#"<circle class="j1" cx="{x:.2}" cy="{y:.2}" r="4" fill="red"/>"#);
    }
    let _ = writeln!(svg, "</svg>");
    let summary = PlotSummary { j1_polylines: j1_lines.len(), j1_points: j1_points.len(), all_critical, bounds };
    (svg, summary)
}

pub fn cmd_plot(spec: &MapSpec, plot: &PlotOptions, output: &Path, opts: &Options) -> Result<PlotSummary, CliError> {
    if !(plot.radius > 0.0) || !plot.radius.is_finite() {
        return Err(CliError::domain(format!("radius must be positive, got {}", plot.radius)));
    }
    if !plot.center.iter().all(|v| v.is_finite()) {
        return Err(CliError::domain("center must be finite"));
    }
    let q = spec.to_map()?;
    if q.quadratic_scale() == 0.0 {
        return Err(CliError::domain("map has no quadratic terms"));
    }
    let (svg, summary) = render_plot(&q, plot, opts.seed);
    std::fs::write(output, svg).map_err(|e| CliError::io(format!("{}: {e}", output.display())))?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::ClassLabel;

    #[test]
    fn red_overlay_only_with_critical_values() {
        let (svg, s) = render_plot(&ClassLabel::E1.normal_form(), &PlotOptions::default(), 0);
        assert_eq!(s.j1_polylines, 1);
        assert!(svg.contains(r#"stroke="red""#));
        let (svg, s) = render_plot(&ClassLabel::DP1.normal_form(), &PlotOptions::default(), 0);
        assert_eq!((s.j1_polylines, s.j1_points), (0, 0));
        assert!(!svg.contains("red"));
    }

    #[test]
    fn deterministic_for_a_seed() {
        let q = ClassLabel::H1.normal_form();
        let p = PlotOptions { center: [0.3, -0.2], ..Default::default() };
        assert_eq!(render_plot(&q, &p, 5).0, render_plot(&q, &p, 5).0);
        assert_ne!(render_plot(&q, &p, 5).0, render_plot(&q, &p, 6).0);
    }

    #[test]
    fn isolated_critical_value_drawn_only_inside_disk() {
        // E2 has J0 = {origin}
        let q = ClassLabel::E2.normal_form();
        let (_, s) = render_plot(&q, &PlotOptions::default(), 0);
        assert_eq!(s.j1_points, 1);
        let off = PlotOptions { center: [2.0, 2.0], ..Default::default() };
        let (_, s) = render_plot(&q, &off, 0);
        assert_eq!(s.j1_points, 0);
    }
}
