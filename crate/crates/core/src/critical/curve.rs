//! Parametrized components of the critical set, their samples, and cusp
//! detection by kernel tangency.

use serde::{Deserialize, Serialize};

use crate::algebra::{Point, QuadraticMap};

use super::conic::{ConicGeometry, Line};

/// Default samples per component.
pub const DEFAULT_SAMPLES: usize = 2048;

/// Bisection stops once the bracket is this short.
const CUSP_PARAM_TOL: f64 = 1e-10;

/// Components whose normalized tangency functional never exceeds this are
/// treated as collapsed (the whole component maps to a point).
const COLLAPSED_LEVEL: f64 = 1e-7;

/// A smooth parametrized curve in the plane.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Curve {
    /// `center + cos t · e1 + sin t · e2`, `t ∈ [0, 2π)`.
    Ellipse { center: Point, e1: Point, e2: Point },
    /// `center + cosh t · e1 + sinh t · e2`.
    HyperbolaBranch { center: Point, e1: Point, e2: Point },
    /// `vertex + t · axis + k t² · normal`.
    Parabola { vertex: Point, axis: Point, normal: Point, k: f64 },
    /// `point + t · direction`.
    Line { point: Point, direction: Point },
}

fn comb(p: Point, a: f64, u: Point, b: f64, v: Point) -> Point {
    [p[0] + a * u[0] + b * v[0], p[1] + a * u[1] + b * v[1]]
}

impl Curve {
    pub fn point(&self, t: f64) -> Point {
        match *self {
            Curve::Ellipse { center, e1, e2 } => comb(center, t.cos(), e1, t.sin(), e2),
            Curve::HyperbolaBranch { center, e1, e2 } => comb(center, t.cosh(), e1, t.sinh(), e2),
            Curve::Parabola { vertex, axis, normal, k } => comb(vertex, t, axis, k * t * t, normal),
            Curve::Line { point, direction } => comb(point, t, direction, 0.0, direction),
        }
    }

    pub fn tangent(&self, t: f64) -> Point {
        let z = [0.0, 0.0];
        match *self {
            Curve::Ellipse { e1, e2, .. } => comb(z, -t.sin(), e1, t.cos(), e2),
            Curve::HyperbolaBranch { e1, e2, .. } => comb(z, t.sinh(), e1, t.cosh(), e2),
            Curve::Parabola { axis, normal, k, .. } => comb(z, 1.0, axis, 2.0 * k * t, normal),
            Curve::Line { direction, .. } => direction,
        }
    }

    pub fn is_closed(&self) -> bool {
        matches!(self, Curve::Ellipse { .. })
    }

    /// Size of the geometric data, used to pick the sampling window.
    pub fn data_scale(&self) -> f64 {
        let n = |p: Point| p[0].hypot(p[1]);
        match *self {
            Curve::Ellipse { center, e1, e2 } | Curve::HyperbolaBranch { center, e1, e2 } => {
                n(center).max(n(e1)).max(n(e2))
            }
            Curve::Parabola { vertex, k, .. } => n(vertex).max(1.0 / k.abs()),
            Curve::Line { point, .. } => n(point),
        }
    }

    /// Parameter window covering points out to distance about `radius`.
    pub fn param_range(&self, radius: f64) -> (f64, f64) {
        match *self {
            Curve::Ellipse { .. } => (0.0, std::f64::consts::TAU),
            Curve::HyperbolaBranch { e1, e2, .. } => {
                let a = e1[0].hypot(e1[1]).min(e2[0].hypot(e2[1])).max(f64::MIN_POSITIVE);
                let t = (radius / a).asinh().min(40.0);
                (-t, t)
            }
            Curve::Parabola { k, .. } => {
                let t = radius.min((radius / k.abs()).sqrt());
                (-t, t)
            }
            Curve::Line { .. } => (-radius, radius),
        }
    }

    pub fn from_line(l: &Line) -> Self {
        Curve::Line { point: l.point, direction: l.direction }
    }
}

/// Splits a conic's geometry into its connected smooth components.
pub fn components_of(geometry: &ConicGeometry) -> Vec<Curve> {
    match geometry {
        ConicGeometry::Ellipse { center, axes } => {
            vec![Curve::Ellipse { center: *center, e1: axes[0], e2: axes[1] }]
        }
        ConicGeometry::Hyperbola { center, axes } => {
            let neg = [-axes[0][0], -axes[0][1]];
            vec![
                Curve::HyperbolaBranch { center: *center, e1: axes[0], e2: axes[1] },
                Curve::HyperbolaBranch { center: *center, e1: neg, e2: axes[1] },
            ]
        }
        ConicGeometry::Parabola { vertex, axis, normal, curvature } => vec![Curve::Parabola {
            vertex: *vertex,
            axis: *axis,
            normal: *normal,
            k: *curvature,
        }],
        ConicGeometry::Lines { lines } => lines.iter().map(Curve::from_line).collect(),
        ConicGeometry::Point { .. } | ConicGeometry::None => Vec::new(),
    }
}

/// Samples of one critical-set component and its image.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentSample {
    pub curve: Option<Curve>,
    pub params: Vec<f64>,
    pub points: Vec<Point>,
    pub images: Vec<Point>,
}

/// Ordered samples of each critical-set component together with their images.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct CurveSample {
    pub components: Vec<ComponentSample>,
}

impl CurveSample {
    pub fn is_empty(&self) -> bool {
        self.components.iter().all(|c| c.points.is_empty())
    }

    pub fn all_points(&self) -> impl Iterator<Item = &Point> {
        self.components.iter().flat_map(|c| c.points.iter())
    }

    pub fn all_images(&self) -> impl Iterator<Item = &Point> {
        self.components.iter().flat_map(|c| c.images.iter())
    }
}

pub fn sample_curve(q: &QuadraticMap, curve: &Curve, n: usize, radius: f64) -> ComponentSample {
    let (t0, t1) = curve.param_range(radius);
    let n = n.max(2);
    let params: Vec<f64> = if curve.is_closed() {
        (0..n).map(|i| t0 + (t1 - t0) * i as f64 / n as f64).collect()
    } else {
        (0..n).map(|i| t0 + (t1 - t0) * i as f64 / (n - 1) as f64).collect()
    };
    let points: Vec<Point> = params.iter().map(|&t| curve.point(t)).collect();
    let images = points.iter().map(|p| q.evaluate(p)).collect();
    ComponentSample { curve: Some(curve.clone()), params, points, images }
}

/// Unit vector spanning `ker DQ(p)` (for a rank-one Jacobian).
pub fn kernel_direction(q: &QuadraticMap, p: &Point) -> Point {
    let j = q.jacobian(p);
    let (r0, r1) = (j[0], j[1]);
    let n0 = r0[0].hypot(r0[1]);
    let n1 = r1[0].hypot(r1[1]);
    let r = if n0 >= n1 { r0 } else { r1 };
    let n = n0.max(n1);
    if n == 0.0 {
        return [0.0, 0.0];
    }
    [-r[1] / n, r[0] / n]
}

fn cross(a: Point, b: Point) -> f64 {
    a[0] * b[1] - a[1] * b[0]
}

fn dot(a: Point, b: Point) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Normalized tangency functional `cross(γ', κ)` with `κ` oriented to agree
/// with `reference` (when given).
fn tangency(q: &QuadraticMap, curve: &Curve, t: f64, reference: Option<Point>) -> (f64, Point) {
    let mut k = kernel_direction(q, &curve.point(t));
    if let Some(r) = reference {
        if dot(k, r) < 0.0 {
            k = [-k[0], -k[1]];
        }
    }
    let g = curve.tangent(t);
    let gn = g[0].hypot(g[1]);
    let value = if gn == 0.0 { 0.0 } else { cross([g[0] / gn, g[1] / gn], k) };
    (value, k)
}

/// Cusp parameters on one component: sign changes of the tangency
/// functional, refined by bisection.
pub fn component_cusps(q: &QuadraticMap, sample: &ComponentSample) -> Vec<f64> {
    let Some(curve) = &sample.curve else { return Vec::new() };
    let ts = &sample.params;
    if ts.len() < 2 {
        return Vec::new();
    }
    let mut values = Vec::with_capacity(ts.len());
    let mut kernels = Vec::with_capacity(ts.len());
    let mut prev: Option<Point> = None;
    for &t in ts {
        let (g, k) = tangency(q, curve, t, prev);
        values.push(g);
        kernels.push(k);
        prev = Some(k);
    }
    if values.iter().all(|v| v.abs() <= COLLAPSED_LEVEL) {
        return Vec::new();
    }
    let mut pairs: Vec<(usize, usize, f64)> = (0..ts.len() - 1).map(|i| (i, i + 1, ts[i + 1])).collect();
    if curve.is_closed() {
        pairs.push((ts.len() - 1, 0, ts[0] + std::f64::consts::TAU));
    }
    let mut cusps = Vec::new();
    for (i, j, tj) in pairs {
        let gi = values[i];
        // re-orient the far end against the near end (matters across the seam)
        let gj = if dot(kernels[i], kernels[j]) < 0.0 { -values[j] } else { values[j] };
        if gi == 0.0 {
            // counted once, at the sample where it vanishes exactly
            let before = if i > 0 {
                Some(values[i - 1])
            } else if curve.is_closed() {
                let last = ts.len() - 1;
                Some(if dot(kernels[last], kernels[0]) < 0.0 { -values[last] } else { values[last] })
            } else {
                None
            };
            if let Some(before) = before {
                if before != 0.0 && gj != 0.0 && before.signum() != gj.signum() {
                    cusps.push(ts[i]);
                }
            }
            continue;
        }
        if gj == 0.0 || gi.signum() == gj.signum() {
            continue;
        }
        let kref = kernels[i];
        let (mut lo, mut hi) = (ts[i], tj);
        while hi - lo > CUSP_PARAM_TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            let (gm, _) = tangency(q, curve, mid, Some(kref));
            if gm == 0.0 {
                lo = mid;
                hi = mid;
                break;
            }
            if gm.signum() == gi.signum() {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let mut t = 0.5 * (lo + hi);
        if curve.is_closed() && t >= std::f64::consts::TAU {
            t -= std::f64::consts::TAU;
        }
        cusps.push(t);
    }
    cusps
}

/// True when the whole component maps to a single point.
pub fn component_collapses(q: &QuadraticMap, sample: &ComponentSample) -> bool {
    let Some(curve) = &sample.curve else { return false };
    let mut prev = None;
    sample.params.iter().all(|&t| {
        let (g, k) = tangency(q, curve, t, prev);
        prev = Some(k);
        g.abs() <= COLLAPSED_LEVEL
    })
}
