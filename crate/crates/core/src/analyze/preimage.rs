//! Preimage sets `Q⁻¹(target)` by resultant elimination, and sampled
//! preimage-cardinality profiles.

use std::collections::BTreeSet;
use std::fmt;

use rand::Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::{poly_eval, substitute, AffineMap2, Point, Poly2, QuadraticMap};
use crate::critical::{
    analyze_critical_image, classify_conic_with, critical_conic, det_jacobian_conic,
    sample_critical_image_with, ConicCoefficients, ConicKind, Curve, PieceShape,
};
use crate::poly;
use crate::scalar::Tolerance;

use super::ProfileValue;

/// Candidate rotations of the domain before eliminating `y`.
const ROTATIONS: [f64; 5] = [0.0, 0.618_033_988_7, 1.234_567_9, 2.071_067_8, std::f64::consts::E];

/// Back-substituted points are accepted at this relative residual.
const ACCEPT_REL: f64 = 1e-10;

/// Newton steps stall near cusps, where convergence is only linear.
const POLISH_STEPS: usize = 200;

/// Residual bound along the segment joining two copies of one root.
const VALLEY_RESIDUAL: f64 = 1e-8;

/// Accepted points closer than this (relative to `1 + |p|`) are one preimage.
const MERGE_REL: f64 = 1e-6;

/// Eliminant coefficients this small relative to their terms are rounding noise.
const NOISE_REL: f64 = 1e-12;

/// Farther apart than this, accepted points are never merged by the
/// valley test.
const VALLEY_REL: f64 = 1e-3;

/// Simple roots polish to this relative residual; multiple roots do not.
const SIMPLE_REL: f64 = 1e-14;

/// `det DQ` at the midpoint of two distinct preimages vanishes; relative
/// values above this rule a pair out.
const CRITICAL_REL: f64 = 1e-6;

/// Shape of an infinite preimage set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PreimageComponent {
    Line,
    CrossingLines,
    ParallelLines,
    Circle,
    Parabola,
    Hyperbola,
}

/// Topological type of an infinite preimage set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Topology {
    /// Connected, non-compact, a topological line.
    Arc,
    /// Two disjoint arcs.
    TwoArcs,
    /// Two arcs crossing at one point.
    Cross,
    /// A topological circle.
    Loop,
}

impl PreimageComponent {
    pub fn name(self) -> &'static str {
        match self {
            PreimageComponent::Line => "line",
            PreimageComponent::CrossingLines | PreimageComponent::ParallelLines => "pair-of-lines",
            PreimageComponent::Circle => "circle",
            PreimageComponent::Parabola => "parabola",
            PreimageComponent::Hyperbola => "hyperbola",
        }
    }

    pub fn topology(self) -> Topology {
        match self {
            PreimageComponent::Line | PreimageComponent::Parabola => Topology::Arc,
            PreimageComponent::ParallelLines | PreimageComponent::Hyperbola => Topology::TwoArcs,
            PreimageComponent::CrossingLines => Topology::Cross,
            PreimageComponent::Circle => Topology::Loop,
        }
    }
}

impl Topology {
    pub fn name(self) -> &'static str {
        match self {
            Topology::Arc => "connected arc",
            Topology::TwoArcs => "two disjoint arcs",
            Topology::Cross => "two crossing arcs",
            Topology::Loop => "closed loop",
        }
    }
}

impl fmt::Display for PreimageComponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl fmt::Display for Topology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PreimageCardinality {
    Finite(u8),
    Infinite(PreimageComponent),
}

impl PreimageCardinality {
    pub fn value(self) -> ProfileValue {
        match self {
            PreimageCardinality::Finite(n) => ProfileValue::Finite(n),
            PreimageCardinality::Infinite(_) => ProfileValue::Infinite,
        }
    }

    pub fn is_nonempty(self) -> bool {
        self != PreimageCardinality::Finite(0)
    }
}

impl fmt::Display for PreimageCardinality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PreimageCardinality::Finite(n) => write!(f, "{n}"),
            PreimageCardinality::Infinite(c) => write!(f, "\u{221e} ({c})"),
        }
    }
}

/// The preimage set itself.
#[derive(Debug, Clone, PartialEq)]
pub enum Preimage {
    Points(Vec<Point>),
    Curve(PreimageComponent),
}

impl Preimage {
    pub fn cardinality(&self) -> PreimageCardinality {
        match self {
            Preimage::Points(p) => PreimageCardinality::Finite(p.len().min(u8::MAX as usize) as u8),
            Preimage::Curve(c) => PreimageCardinality::Infinite(*c),
        }
    }
}

pub fn preimage_count(q: &QuadraticMap, target: Point) -> PreimageCardinality {
    preimage(q, target, Tolerance::default()).cardinality()
}

pub fn preimage_count_with(q: &QuadraticMap, target: Point, tol: Tolerance) -> PreimageCardinality {
    preimage(q, target, tol).cardinality()
}

fn max_abs(p: &Poly2) -> f64 {
    p.iter().fold(0.0, |m, v| m.max(v.abs()))
}

/// Zero set of a single quadratic polynomial.
fn single_equation(p: &Poly2, tol: Tolerance) -> Preimage {
    let c = ConicCoefficients::from_array(*p);
    let class = classify_conic_with(&c, &max_abs(p), tol);
    let curve = |c| Preimage::Curve(c);
    match class.kind {
        ConicKind::Ellipse => curve(PreimageComponent::Circle),
        ConicKind::Hyperbola => curve(PreimageComponent::Hyperbola),
        ConicKind::Parabola => curve(PreimageComponent::Parabola),
        ConicKind::IntersectingLines => curve(PreimageComponent::CrossingLines),
        ConicKind::ParallelLines => curve(PreimageComponent::ParallelLines),
        ConicKind::CoincidentLines | ConicKind::SingleLine => curve(PreimageComponent::Line),
        ConicKind::Point => match class.geometry {
            crate::critical::ConicGeometry::Point { at } => Preimage::Points(vec![at]),
            _ => Preimage::Points(Vec::new()),
        },
        // AllPlane cannot occur for a map with a quadratic term
        ConicKind::Empty | ConicKind::AllPlane => Preimage::Points(Vec::new()),
    }
}

/// `Σ |c_i| |m_i(p)|`, the rounding scale of `P(p)`.
fn magnitude(c: &Poly2, p: &Point) -> f64 {
    let (x, y) = (p[0].abs(), p[1].abs());
    c[0].abs() * x * x + c[1].abs() * x * y + c[2].abs() * y * y + c[3].abs() * x + c[4].abs() * y
        + c[5].abs()
}

fn relative_residual(eqs: &[Poly2; 2], p: &Point) -> f64 {
    eqs.iter()
        .map(|c| poly_eval(c, p).abs() / magnitude(c, p).max(f64::MIN_POSITIVE))
        .fold(0.0, f64::max)
}

fn gradient(c: &Poly2, p: &Point) -> Point {
    [2.0 * c[0] * p[0] + c[1] * p[1] + c[3], c[1] * p[0] + 2.0 * c[2] * p[1] + c[4]]
}

/// Damped Newton (Levenberg) steps, kept only while they reduce the
/// residual. The damping keeps steps bounded where `DQ` is singular, so
/// double roots on folds are still approached.
fn polish(eqs: &[Poly2; 2], mut p: Point) -> Point {
    let mut r = relative_residual(eqs, &p);
    for _ in 0..POLISH_STEPS {
        if r == 0.0 {
            break;
        }
        let (g1, g2) = (gradient(&eqs[0], &p), gradient(&eqs[1], &p));
        let (f1, f2) = (poly_eval(&eqs[0], &p), poly_eval(&eqs[1], &p));
        let a = g1[0] * g1[0] + g2[0] * g2[0];
        let b = g1[0] * g1[1] + g2[0] * g2[1];
        let c = g1[1] * g1[1] + g2[1] * g2[1];
        let lambda = 1e-12 * (a + c);
        let det = (a + lambda) * (c + lambda) - b * b;
        if !(det > 0.0) || !det.is_finite() {
            break;
        }
        let (u, v) = (g1[0] * f1 + g2[0] * f2, g1[1] * f1 + g2[1] * f2);
        let dx = ((c + lambda) * u - b * v) / det;
        let dy = ((a + lambda) * v - b * u) / det;
        // backtrack along the step; near a cusp the full step overshoots
        let Some((next, rn)) = (0..12)
            .map(|k| {
                let t = 0.5_f64.powi(k);
                let next = [p[0] - t * dx, p[1] - t * dy];
                (next, relative_residual(eqs, &next))
            })
            .find(|(_, rn)| *rn < r)
        else {
            break;
        };
        p = next;
        r = rn;
    }
    p
}

/// `Y`-coefficients `[A0(X), A1(X), A2]` in ascending powers of `X`.
fn y_coefficients(p: &Poly2) -> [Vec<f64>; 3] {
    [vec![p[5], p[3], p[0]], vec![p[4], p[1]], vec![p[2]]]
}

/// Resultant in `Y` of two polynomials of `Y`-degree at most two.
fn resultant(a: &[Vec<f64>; 3], b: &[Vec<f64>; 3]) -> Vec<f64> {
    use poly::{mul, sub};
    let t1 = sub(&mul(&a[2], &b[0]), &mul(&a[0], &b[2]));
    let t2 = sub(&mul(&a[2], &b[1]), &mul(&a[1], &b[2]));
    let t3 = sub(&mul(&a[1], &b[0]), &mul(&a[0], &b[1]));
    sub(&mul(&t1, &t1), &mul(&t2, &t3))
}

/// Coefficientwise bound on the terms summed in [`resultant`], given
/// absolute values of the inputs.
fn resultant_magnitude(a: &[Vec<f64>; 3], b: &[Vec<f64>; 3]) -> Vec<f64> {
    use poly::{add, mul};
    let t1 = add(&mul(&a[2], &b[0]), &mul(&a[0], &b[2]));
    let t2 = add(&mul(&a[2], &b[1]), &mul(&a[1], &b[2]));
    let t3 = add(&mul(&a[1], &b[0]), &mul(&a[0], &b[1]));
    add(&mul(&t1, &t1), &mul(&t2, &t3))
}

/// Domain rotation keeping both `Y²` coefficients away from zero where
/// possible.
fn best_rotation(eqs: &[Poly2; 2]) -> AffineMap2 {
    let lead = |theta: f64| {
        let g = AffineMap2::rotation(theta);
        let a = substitute(&eqs[0], &g)[2].abs();
        let b = substitute(&eqs[1], &g)[2].abs();
        a.max(b)
    };
    let theta = ROTATIONS
        .iter()
        .copied()
        .max_by(|&s, &t| lead(s).total_cmp(&lead(t)))
        .expect("nonempty");
    AffineMap2::rotation(theta)
}

/// The full preimage of `target`.
pub fn preimage(q: &QuadraticMap, target: Point, tol: Tolerance) -> Preimage {
    let mut p1 = q.first();
    let mut p2 = q.second();
    p1[5] -= target[0];
    p2[5] -= target[1];
    // rank of the non-constant parts
    let nc = |p: &Poly2| [p[0], p[1], p[2], p[3], p[4]];
    let norm2 = |v: &[f64; 5]| v.iter().map(|x| x * x).sum::<f64>();
    let (big, small) = if norm2(&nc(&p1)) >= norm2(&nc(&p2)) { (p1, p2) } else { (p2, p1) };
    let (bn, sn) = (nc(&big), nc(&small));
    let mu = bn.iter().zip(&sn).map(|(a, b)| a * b).sum::<f64>() / norm2(&bn);
    let off = bn.iter().zip(&sn).fold(0.0_f64, |m, (a, b)| m.max((b - mu * a).abs()));
    let big_scale = bn.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    if off <= tol.rel * big_scale.max(sn.iter().fold(0.0_f64, |m, v| m.max(v.abs()))) {
        // small − μ·big is the constant c
        let c = small[5] - mu * big[5];
        let c_scale = small[5].abs() + (mu * big[5]).abs() + big_scale;
        return if c.abs() <= tol.rel * c_scale {
            single_equation(&big, tol)
        } else {
            Preimage::Points(Vec::new())
        };
    }

    // proportional quadratic parts: a line meets a conic
    if let Some((big, line)) = dependent_quadratic_parts(&p1, &p2, tol) {
        match line_conic(&big, line, tol) {
            Ok(points) => return finish(q, [p1, p2], AffineMap2::identity(), points),
            Err(curve) => return curve,
        }
    }

    let rot = best_rotation(&[p1, p2]);
    let e1 = substitute(&p1, &rot);
    let e2 = substitute(&p2, &rot);
    let res = resultant(&y_coefficients(&e1), &y_coefficients(&e2));
    let abs = |e: &Poly2| y_coefficients(&e.map(f64::abs));
    let res_mag = resultant_magnitude(&abs(&e1), &abs(&e2));
    // each coefficient against its own rounding scale
    if res.iter().zip(&res_mag).all(|(r, m)| r.abs() <= tol.rel * m) {
        return Preimage::Curve(PreimageComponent::Line);
    }

    // a shared null direction of the quadratic parts is a root at infinity;
    // with it along the Y axis both equations are linear in Y
    if let Some(d) = common_null_direction(&p1, &p2, tol) {
        let rot = AffineMap2::rotation((-d[0]).atan2(d[1]));
        let eqs = [substitute(&p1, &rot), substitute(&p2, &rot)];
        let points = null_direction_candidates(&eqs, tol);
        return finish(q, eqs, rot, points);
    }

    // coefficients at rounding level are zero; otherwise roots at infinity
    // come back as huge spurious preimages
    let res: Vec<f64> =
        res.iter().zip(&res_mag).map(|(r, m)| if r.abs() <= NOISE_REL * m { 0.0 } else { *r }).collect();
    let eqs = [e1, e2];
    let points = poly::real_roots(&res)
        .into_iter()
        .flat_map(|x| y_candidates(&eqs, x).into_iter().map(move |y| [x, y]))
        .collect();
    finish(q, eqs, rot, points)
}

/// Polishes candidate points of the rotated system `eqs`, keeps the
/// acceptable ones, merges copies and rotates back.
fn finish(q: &QuadraticMap, eqs: [Poly2; 2], rot: AffineMap2, candidates: Vec<Point>) -> Preimage {
    let conic = det_jacobian_conic(q);
    // Q(p2) − Q(p1) = DQ(m)(p2 − p1) with m the midpoint, so two distinct
    // preimages have a critical midpoint
    let off_critical = |a: &Point, b: &Point| {
        let m = rot.apply(&[0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])]);
        let d = (a[0] - b[0]).hypot(a[1] - b[1]);
        let mag = magnitude(&conic.to_array(), &[m[0].abs() + d, m[1].abs() + d]);
        conic.evaluate(&m).abs() > CRITICAL_REL * mag
    };
    let near_critical = |a: &Point| {
        let m = rot.apply(a);
        let mag = magnitude(&conic.to_array(), &[m[0].abs(), m[1].abs()]);
        conic.evaluate(&m).abs() <= CRITICAL_REL * mag
    };
    let mut found: Vec<(Point, f64)> = Vec::new();
    for c in candidates {
        {
            let p = polish(&eqs, c);
            let r = relative_residual(&eqs, &p);
            if r > ACCEPT_REL {
                continue;
            }
            // copies of one multiple root sit in a valley of near-zero
            // residual on the critical set. Between two distinct roots `Q` deviates by `B(d, d)/4`
            // at the midpoint, so an acceptable midpoint means one root.
            let dup = found.iter().position(|(f, rf)| {
                let d = (f[0] - p[0]).hypot(f[1] - p[1]);
                let scale = 1.0 + p[0].hypot(p[1]);
                let mid = [0.5 * (f[0] + p[0]), 0.5 * (f[1] + p[1])];
                let mid_res = relative_residual(&eqs, &mid);
                d <= MERGE_REL * scale
                    || mid_res <= ACCEPT_REL
                    || (d <= VALLEY_REL * scale && mid_res <= VALLEY_RESIDUAL && r.max(*rf) > SIMPLE_REL)
                    || off_critical(f, &p)
                    || (d <= VALLEY_REL * scale && near_critical(f) && near_critical(&p))
            });
            match dup {
                Some(i) if r < found[i].1 => found[i] = (p, r),
                Some(_) => {}
                None => found.push((p, r)),
            }
        }
    }
    Preimage::Points(found.iter().map(|(p, _)| rot.apply(p)).collect())
}

/// Quadratic part `[x², xy, y²]`.
fn quadratic_part(p: &Poly2) -> [f64; 3] {
    [p[0], p[1], p[2]]
}

/// When the quadratic parts are proportional, returns the equation with the
/// larger quadratic part and the affine equation `l0 + lx·x + ly·y`
/// obtained by cancelling it.
fn dependent_quadratic_parts(p1: &Poly2, p2: &Poly2, tol: Tolerance) -> Option<(Poly2, [f64; 3])> {
    let (h1, h2) = (quadratic_part(p1), quadratic_part(p2));
    let n = |h: &[f64; 3]| h.iter().map(|v| v * v).sum::<f64>();
    let (big, small, hb, hs) = if n(&h1) >= n(&h2) { (p1, p2, h1, h2) } else { (p2, p1, h2, h1) };
    if n(&hb) == 0.0 {
        return None;
    }
    let mu = hb.iter().zip(&hs).map(|(a, b)| a * b).sum::<f64>() / n(&hb);
    let off = hb.iter().zip(&hs).fold(0.0_f64, |m, (a, b)| m.max((b - mu * a).abs()));
    let scale = hb.iter().chain(&hs).fold(0.0_f64, |m, v| m.max(v.abs()));
    if off > tol.rel * scale {
        return None;
    }
    Some((*big, [small[5] - mu * big[5], small[3] - mu * big[3], small[4] - mu * big[4]]))
}

/// Points of `{big = 0}` on the line `l0 + lx·x + ly·y = 0`, or the whole
/// line when `big` vanishes on it.
fn line_conic(big: &Poly2, line: [f64; 3], tol: Tolerance) -> Result<Vec<Point>, Preimage> {
    let [l0, lx, ly] = line;
    let nn = lx * lx + ly * ly;
    let p0 = [-l0 * lx / nn, -l0 * ly / nn];
    let len = nn.sqrt();
    // s ↦ p0 + s·v along the line, w along its normal
    let g = AffineMap2::new(-ly / len, lx / len, lx / len, ly / len, p0[0], p0[1]);
    let c = substitute(big, &g);
    let ga = AffineMap2::from_array(g.to_array().map(f64::abs));
    let a = substitute(&big.map(f64::abs), &ga);
    // v is a unit vector, so the s² coefficient is measured against the form itself
    let form_scale = big[..3].iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    let coeffs: Vec<f64> = [(c[5], a[5]), (c[3], a[3]), (c[0], form_scale)]
        .iter()
        .map(|&(v, m)| if v.abs() <= tol.rel * m { 0.0 } else { v })
        .collect();
    if coeffs.iter().all(|v| *v == 0.0) {
        return Err(Preimage::Curve(PreimageComponent::Line));
    }
    Ok(poly::real_roots(&coeffs).into_iter().map(|s| g.apply(&[s, 0.0])).collect())
}

/// A real direction annihilating both quadratic parts, if there is one.
fn common_null_direction(p1: &Poly2, p2: &Poly2, tol: Tolerance) -> Option<Point> {
    let (h1, h2) = (quadratic_part(p1), quadratic_part(p2));
    let [a1, b1, c1] = h1;
    let [a2, b2, c2] = h2;
    let r = (a1 * c2 - a2 * c1).powi(2) - (a1 * b2 - a2 * b1) * (b1 * c2 - b2 * c1);
    let m = ((a1 * c2).abs() + (a2 * c1).abs()).powi(2)
        + ((a1 * b2).abs() + (a2 * b1).abs()) * ((b1 * c2).abs() + (b2 * c1).abs());
    if r.abs() > tol.rel * m {
        return None;
    }
    // cancelling x² (or y²) between the forms leaves the shared factor
    let (u, v, w) = (a1 * b2 - a2 * b1, b1 * c2 - b2 * c1, a1 * c2 - a2 * c1);
    let d = if u.hypot(w) >= v.hypot(w) { [w, -u] } else { [v, -w] };
    let l = d[0].hypot(d[1]);
    (l > 0.0).then(|| [d[0] / l, d[1] / l])
}

/// Candidates for a system whose quadratic parts vanish on the `Y` axis:
/// `Pi = Ai(X) + bi(X)·Y` once the rounding-level `Y²` terms are dropped.
fn null_direction_candidates(eqs: &[Poly2; 2], tol: Tolerance) -> Vec<Point> {
    let parts = |e: &Poly2| (vec![e[5], e[3], e[0]], vec![e[4], e[1]]);
    let (a1, b1) = parts(&eqs[0]);
    let (a2, b2) = parts(&eqs[1]);
    let abs = |v: &[f64]| v.iter().map(|x| x.abs()).collect::<Vec<f64>>();
    let zero_noise = |e: Vec<f64>, mag: Vec<f64>| -> Vec<f64> {
        e.iter().zip(&mag).map(|(r, m)| if r.abs() <= NOISE_REL * m { 0.0 } else { *r }).collect()
    };
    let n2 = |b: &[f64]| b[0] * b[0] + b[1] * b[1];
    let (ab, bb, as_, bs) = if n2(&b1) >= n2(&b2) { (&a1, &b1, &a2, &b2) } else { (&a2, &b2, &a1, &b1) };
    let kappa = if n2(bb) > 0.0 { (bb[0] * bs[0] + bb[1] * bs[1]) / n2(bb) } else { 0.0 };
    let off = (bs[0] - kappa * bb[0]).abs().max((bs[1] - kappa * bb[1]).abs());
    let elim = if off <= tol.rel * bb.iter().chain(bs).fold(0.0_f64, |m, v| m.max(v.abs())) {
        // proportional slopes: one equation is free of Y
        let e = poly::sub(as_, &poly::mul(&[kappa], ab));
        let mag = poly::add(&abs(as_), &abs(&poly::mul(&[kappa], ab)));
        zero_noise(e, mag)
    } else {
        let e = poly::sub(&poly::mul(&a1, &b2), &poly::mul(&a2, &b1));
        let mag = poly::add(&poly::mul(&abs(&a1), &abs(&b2)), &poly::mul(&abs(&a2), &abs(&b1)));
        zero_noise(e, mag)
    };
    let mut out = Vec::new();
    for x in poly::real_roots(&elim) {
        let (v1, v2) = (poly::eval(&b1, x), poly::eval(&b2, x));
        let (a, b, m) = if v1.abs() >= v2.abs() {
            (poly::eval(&a1, x), v1, poly::eval_magnitude(&b1, x))
        } else {
            (poly::eval(&a2, x), v2, poly::eval_magnitude(&b2, x))
        };
        // both slopes vanish: the solution escaped along the Y axis. A
        // double root of the eliminant only pins x to about √ε, so the
        // cutoff is well above rounding level.
        if b.abs() > CRITICAL_REL * m {
            out.push([x, -a / b]);
        }
    }
    out
}

/// Common roots in `Y` of both equations at `X = x`, as candidates.
fn y_candidates(eqs: &[Poly2; 2], x: f64) -> Vec<f64> {
    let at = |e: &Poly2| {
        let [a0, a1, a2] = y_coefficients(e);
        [poly::eval(&a0, x), poly::eval(&a1, x), a2[0]]
    };
    let (c1, c2) = (at(&eqs[0]), at(&eqs[1]));
    let mut out = Vec::new();
    for c in [c1, c2] {
        let m = c.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
        if m > 0.0 {
            out.extend(poly::real_roots(&c));
        }
    }
    // c2[2]·P1 − c1[2]·P2 has no Y² term
    let lin = [c2[2] * c1[0] - c1[2] * c2[0], c2[2] * c1[1] - c1[2] * c2[1]];
    if lin[1] != 0.0 {
        out.push(-lin[0] / lin[1]);
    }
    out.retain(|y| y.is_finite());
    out
}

/// Set of preimage cardinalities over sampled targets.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct PreimageProfile {
    pub counts: BTreeSet<PreimageCardinality>,
}

impl PreimageProfile {
    /// Cardinalities with the shape of infinite preimages forgotten.
    pub fn values(&self) -> Vec<ProfileValue> {
        let set: BTreeSet<ProfileValue> = self.counts.iter().map(|c| c.value()).collect();
        set.into_iter().collect()
    }

    pub fn infinite_components(&self) -> BTreeSet<PreimageComponent> {
        self.counts
            .iter()
            .filter_map(|c| match c {
                PreimageCardinality::Infinite(k) => Some(*k),
                PreimageCardinality::Finite(_) => None,
            })
            .collect()
    }

    pub fn topologies(&self) -> BTreeSet<Topology> {
        self.infinite_components().into_iter().map(PreimageComponent::topology).collect()
    }
}

impl fmt::Display for PreimageProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.values().iter().map(|v| v.to_string()).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

fn bilinear(c: &Poly2, u: Point, v: Point) -> f64 {
    2.0 * c[0] * u[0] * v[0] + c[1] * (u[0] * v[1] + u[1] * v[0]) + 2.0 * c[2] * u[1] * v[1]
}

/// Stratified targets: special points of `J1`, samples of `J1`, small
/// offsets to either side, images of random domain points and random
/// points around the image.
pub fn profile_targets<R: Rng + ?Sized>(q: &QuadraticMap, n: usize, rng: &mut R) -> Vec<Point> {
    let tol = Tolerance::default();
    let n = n.max(8);
    let s = q.scale().max(1.0);
    let mut targets = Vec::with_capacity(2 * n);
    let image = analyze_critical_image(q, 256, tol);
    targets.extend(image.special_points());
    for piece in &image.pieces {
        // a line collapsing to a point: the limit of the images of nearby
        // parallel lines passes through that point
        if let (PieceShape::Point, Some(Curve::Line { direction: d, .. }), Some(end)) =
            (piece.shape, &piece.source, piece.endpoint)
        {
            let nrm = [-d[1], d[0]];
            let w = [bilinear(&q.first(), nrm, *d), bilinear(&q.second(), nrm, *d)];
            let wn = w[0].hypot(w[1]);
            if wn > 0.0 {
                for r in [-2.0, -0.5, 0.5, 2.0] {
                    targets.push([end[0] + r * s * w[0] / wn, end[1] + r * s * w[1] / wn]);
                }
            }
        }
    }

    let j0 = critical_conic(q, tol);
    let per = n / 4;
    if j0.kind != ConicKind::Empty {
        if let Ok(sample) = sample_critical_image_with(q, per.max(2), tol) {
            // offsets follow the extent of J1, not the size of the coefficients
            let mut lo = [f64::INFINITY; 2];
            let mut hi = [f64::NEG_INFINITY; 2];
            for y in sample.all_images() {
                for k in 0..2 {
                    lo[k] = lo[k].min(y[k]);
                    hi[k] = hi[k].max(y[k]);
                }
            }
            let extent = (hi[0] - lo[0]).hypot(hi[1] - lo[1]);
            let extent = if extent.is_finite() && extent > 0.0 { extent } else { s };
            for comp in &sample.components {
                let imgs = &comp.images;
                for (i, y) in imgs.iter().enumerate() {
                    targets.push(*y);
                    let a = imgs[i.saturating_sub(1)];
                    let b = imgs[(i + 1).min(imgs.len() - 1)];
                    let t = [b[0] - a[0], b[1] - a[1]];
                    let tn = t[0].hypot(t[1]);
                    if tn > 0.0 && i % 2 == 0 {
                        let nrm = [-t[1] / tn, t[0] / tn];
                        for e in [1e-3, -1e-3, 0.1, -0.1] {
                            targets.push([y[0] + e * extent * nrm[0], y[1] + e * extent * nrm[1]]);
                        }
                    }
                }
            }
        }
    }

    let radius = 3.0;
    let mut lo = [f64::INFINITY; 2];
    let mut hi = [f64::NEG_INFINITY; 2];
    for _ in 0..per.max(1) {
        let p = [rng.random_range(-radius..radius), rng.random_range(-radius..radius)];
        let y = q.evaluate(&p);
        for k in 0..2 {
            lo[k] = lo[k].min(y[k]);
            hi[k] = hi[k].max(y[k]);
        }
        targets.push(y);
    }
    for k in 0..2 {
        let pad = 0.5 * (hi[k] - lo[k]) + 1.0;
        lo[k] -= pad;
        hi[k] += pad;
    }
    for _ in 0..per.max(1) {
        targets.push([rng.random_range(lo[0]..hi[0]), rng.random_range(lo[1]..hi[1])]);
    }
    targets
}

pub fn preimage_profile<R: Rng + ?Sized>(q: &QuadraticMap, n: usize, rng: &mut R) -> PreimageProfile {
    let targets = profile_targets(q, n, rng);
    let tol = Tolerance::default();
    let counts = targets.par_iter().map(|t| preimage_count_with(q, *t, tol)).collect();
    PreimageProfile { counts }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::ClassLabel;

    fn count(l: ClassLabel, t: Point) -> PreimageCardinality {
        preimage_count(&l.normal_form(), t)
    }

    #[test]
    fn hand_solved_targets() {
        use PreimageCardinality::*;
        assert_eq!(count(ClassLabel::E2, [1.0, 0.0]), Finite(2));
        assert_eq!(count(ClassLabel::H3, [1.0, 0.0]), Finite(4));
        assert_eq!(count(ClassLabel::DH2, [1.0, 0.0]), Infinite(PreimageComponent::Circle));
        assert_eq!(count(ClassLabel::DH2, [0.0, 0.0]), Finite(1));
        assert_eq!(count(ClassLabel::DH2, [0.0, 1.0]), Finite(0));
        assert_eq!(count(ClassLabel::DE3, [1.0, 0.0]), Infinite(PreimageComponent::Hyperbola));
        assert_eq!(count(ClassLabel::DE3, [0.0, 0.0]), Infinite(PreimageComponent::CrossingLines));
        assert_eq!(count(ClassLabel::DP5, [1.0, 0.0]), Infinite(PreimageComponent::ParallelLines));
        assert_eq!(count(ClassLabel::DP3, [1.0, 0.0]), Infinite(PreimageComponent::Parabola));
        assert_eq!(count(ClassLabel::P2, [1.0, 0.0]), Infinite(PreimageComponent::Line));
        assert_eq!(count(ClassLabel::DP1, [0.3, -2.0]), Finite(1));
        // fold and cusp values of the deltoid map
        assert_eq!(count(ClassLabel::E1, [-0.25, -0.0625]), Finite(3));
        assert_eq!(count(ClassLabel::E1, [0.0, 0.0]), Finite(2));
        assert_eq!(count(ClassLabel::E1, [-0.1875, 0.0]), Finite(4));
        assert_eq!(count(ClassLabel::E1, [2.0, 0.0]), Finite(2));
    }

    #[test]
    fn profiles_match_table() {
        use crate::algebra::compose;
        use crate::sampling::random_affine;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for l in ClassLabel::ALL {
            let p = preimage_profile(&l.normal_form(), 240, &mut rng);
            assert_eq!(p.values(), l.table_profile(), "{l}");
            for _ in 0..3 {
                let h = random_affine(&mut rng, 20.0);
                let k = random_affine(&mut rng, 20.0);
                let q = compose(&k, &l.normal_form(), &h).unwrap();
                let p = preimage_profile(&q, 240, &mut rng);
                assert_eq!(p.values(), l.table_profile(), "conjugate of {l}: {q:?}");
            }
        }
    }

    #[test]
    fn preimages_map_to_target() {
        let q = ClassLabel::H1.normal_form();
        let t = [0.4, 0.05];
        let Preimage::Points(ps) = preimage(&q, t, Tolerance::default()) else { panic!() };
        assert!(!ps.is_empty());
        for p in ps {
            let y = q.evaluate(&p);
            assert!((y[0] - t[0]).abs() < 1e-9 && (y[1] - t[1]).abs() < 1e-9);
        }
    }
}
