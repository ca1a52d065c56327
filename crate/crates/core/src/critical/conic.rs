//! The Jacobian-determinant conic `det DQ = Ax² + Bxy + Cy² + Dx + Ey + F`
//! and its affine classification.

use serde::{Deserialize, Serialize};

use crate::algebra::{Point, QuadraticMap};
use crate::scalar::{Scalar, Tolerance};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicCoefficients<S = f64> {
    pub a: S,
    pub b: S,
    pub c: S,
    pub d: S,
    pub e: S,
    pub f: S,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ConicKind {
    Ellipse,
    Hyperbola,
    Parabola,
    Point,
    IntersectingLines,
    ParallelLines,
    CoincidentLines,
    SingleLine,
    AllPlane,
    Empty,
}

impl ConicKind {
    pub fn name(self) -> &'static str {
        match self {
            ConicKind::Ellipse => "ellipse",
            ConicKind::Hyperbola => "hyperbola",
            ConicKind::Parabola => "parabola",
            ConicKind::Point => "point",
            ConicKind::IntersectingLines => "intersecting lines",
            ConicKind::ParallelLines => "parallel lines",
            ConicKind::CoincidentLines => "coincident lines",
            ConicKind::SingleLine => "line",
            ConicKind::AllPlane => "plane",
            ConicKind::Empty => "empty",
        }
    }

    /// One-dimensional zero sets.
    pub fn is_curve(self) -> bool {
        !matches!(self, ConicKind::Point | ConicKind::AllPlane | ConicKind::Empty)
    }
}

impl std::fmt::Display for ConicKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// A line `point + t * direction`, also stored as `a x + b y + c = 0`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Line {
    pub point: Point,
    pub direction: Point,
    pub coeffs: [f64; 3],
}

impl Line {
    pub fn through(point: Point, direction: Point) -> Self {
        let n = direction[0].hypot(direction[1]);
        let d = [direction[0] / n, direction[1] / n];
        let coeffs = [-d[1], d[0], d[1] * point[0] - d[0] * point[1]];
        Line { point, direction: d, coeffs }
    }

    pub fn at(&self, t: f64) -> Point {
        [self.point[0] + t * self.direction[0], self.point[1] + t * self.direction[1]]
    }
}

/// Floating-point description of the zero set, used for sampling.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum ConicGeometry {
    None,
    Point { at: Point },
    /// `center + cos θ · axes[0] + sin θ · axes[1]`.
    Ellipse { center: Point, axes: [Point; 2] },
    /// Branches `center ± cosh t · axes[0] + sinh t · axes[1]`.
    Hyperbola { center: Point, axes: [Point; 2] },
    /// `vertex + t · axis + curvature · t² · normal`.
    Parabola { vertex: Point, axis: Point, normal: Point, curvature: f64 },
    Lines { lines: Vec<Line> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConicClass {
    pub kind: ConicKind,
    pub geometry: ConicGeometry,
}

impl<S: Scalar> ConicCoefficients<S> {
    pub fn to_array(&self) -> [S; 6] {
        [
            self.a.clone(),
            self.b.clone(),
            self.c.clone(),
            self.d.clone(),
            self.e.clone(),
            self.f.clone(),
        ]
    }

    pub fn from_array(v: [S; 6]) -> Self {
        let [a, b, c, d, e, f] = v;
        Self { a, b, c, d, e, f }
    }

    pub fn to_f64(&self) -> ConicCoefficients<f64> {
        let v = self.to_array();
        ConicCoefficients::from_array(std::array::from_fn(|i| v[i].to_f64()))
    }

    pub fn evaluate(&self, p: &Point<S>) -> S {
        crate::algebra::poly_eval(&self.to_array(), p)
    }

    pub fn scale(&self) -> S {
        S::max_abs(self.to_array().iter())
    }
}

/// `X_{ij:kl} = a_ij b_kl − a_kl b_ij`.
fn minor<S: Scalar>(a1: &S, b1: &S, a2: &S, b2: &S) -> S {
    a1.clone() * b2.clone() - a2.clone() * b1.clone()
}

/// Coefficients of `det DQ(x, y)`.
pub fn det_jacobian_conic<S: Scalar>(q: &QuadraticMap<S>) -> ConicCoefficients<S> {
    let x = |a: &S, b: &S, c: &S, d: &S| minor(a, b, c, d);
    let two = S::from_i64(2);
    let four = S::from_i64(4);
    let x20_11 = x(&q.a20, &q.b20, &q.a11, &q.b11);
    let x20_02 = x(&q.a20, &q.b20, &q.a02, &q.b02);
    let x11_02 = x(&q.a11, &q.b11, &q.a02, &q.b02);
    let x20_01 = x(&q.a20, &q.b20, &q.a01, &q.b01);
    let x11_10 = x(&q.a11, &q.b11, &q.a10, &q.b10);
    let x11_01 = x(&q.a11, &q.b11, &q.a01, &q.b01);
    let x02_10 = x(&q.a02, &q.b02, &q.a10, &q.b10);
    let x10_01 = x(&q.a10, &q.b10, &q.a01, &q.b01);
    ConicCoefficients {
        a: two.clone() * x20_11,
        b: four * x20_02,
        c: two.clone() * x11_02,
        d: two.clone() * x20_01 - x11_10,
        e: x11_01 - two * x02_10,
        f: x10_01,
    }
}

/// Classifies with the conic's own coefficient size as reference magnitude.
pub fn classify_conic<S: Scalar>(c: &ConicCoefficients<S>) -> ConicClass {
    classify_conic_with(c, &c.scale(), Tolerance::default())
}

/// Classifies the zero set of `c`.
///
/// `reference` is the magnitude against which vanishing coefficients are
/// judged (for a determinant conic, `scale(Q)²`). Quantities that are
/// quadratic in small perturbations are compared against `τ²·reference`.
pub fn classify_conic_with<S: Scalar>(
    c: &ConicCoefficients<S>,
    reference: &S,
    tol: Tolerance,
) -> ConicClass {
    let kind = conic_kind(c, reference, tol);
    let geometry = conic_geometry(&c.to_f64(), kind);
    ConicClass { kind, geometry }
}

fn tau<S: Scalar>(tol: Tolerance) -> S {
    S::from_f64(tol.rel).unwrap_or_else(S::zero)
}

pub fn conic_kind<S: Scalar>(c: &ConicCoefficients<S>, reference: &S, tol: Tolerance) -> ConicKind {
    let m = c.scale();
    if m.is_zero() {
        return ConicKind::AllPlane;
    }
    let r = if *reference > m { reference.clone() } else { m };
    let t: S = tau(tol);
    let two = S::from_i64(2);
    let four = S::from_i64(4);
    let (a, b, cc, d, e, f) = (&c.a, &c.b, &c.c, &c.d, &c.e, &c.f);

    let qm = S::max_abs([a, b, cc]);
    if qm.is_negligible(&r, tol) {
        let lm = S::max_abs([d, e]);
        if lm.is_negligible(&r, tol) {
            return if f.is_negligible(&r, tol) { ConicKind::AllPlane } else { ConicKind::Empty };
        }
        return ConicKind::SingleLine;
    }

    let disc = b.clone() * b.clone() - four.clone() * a.clone() * cc.clone();
    let disc_mag = b.clone() * b.clone() + four.clone() * (a.clone() * cc.clone()).abs();
    let sd = disc.sign(&disc_mag, tol);
    if sd != std::cmp::Ordering::Equal {
        let cx = (two.clone() * cc.clone() * d.clone() - b.clone() * e.clone()) / disc.clone();
        let cy = (two.clone() * a.clone() * e.clone() - b.clone() * d.clone()) / disc;
        let dx = d.clone() * cx;
        let ey = e.clone() * cy;
        let center_value = f.clone() + (dx.clone() + ey.clone()) / two.clone();
        let mag = f.abs() + (dx.abs() + ey.abs()) / two + t * r;
        let sv = center_value.sign(&mag, tol);
        return match (sd, sv) {
            (std::cmp::Ordering::Less, std::cmp::Ordering::Equal) => ConicKind::Point,
            (std::cmp::Ordering::Less, s) => {
                let sa = if *a > S::zero() { std::cmp::Ordering::Greater } else { std::cmp::Ordering::Less };
                if s != sa {
                    ConicKind::Ellipse
                } else {
                    ConicKind::Empty
                }
            }
            (_, std::cmp::Ordering::Equal) => ConicKind::IntersectingLines,
            _ => ConicKind::Hyperbola,
        };
    }

    // Quadratic part is (numerically) a multiple of a square λ·ℓ².
    // With ℓ = x + βy (or y + βx), the conic is a parabola unless the
    // linear part is a multiple of ℓ.
    let (lead, lin_l, lin_n, beta) = if a.abs() >= cc.abs() {
        (a.clone(), d.clone(), e.clone(), b.clone() / (two.clone() * a.clone()))
    } else {
        (cc.clone(), e.clone(), d.clone(), b.clone() / (two.clone() * cc.clone()))
    };
    let along = lin_l.clone() * beta;
    let normal = lin_n.clone() - along.clone();
    let normal_mag = lin_n.abs() + along.abs() + r.clone();
    if !normal.is_negligible(&normal_mag, tol) {
        return ConicKind::Parabola;
    }
    let disc_l = lin_l.clone() * lin_l.clone() - four.clone() * lead.clone() * f.clone();
    let disc_l_mag =
        lin_l.clone() * lin_l + four * (lead * f.clone()).abs() + t * r.clone() * r;
    match disc_l.sign(&disc_l_mag, tol) {
        std::cmp::Ordering::Greater => ConicKind::ParallelLines,
        std::cmp::Ordering::Equal => ConicKind::CoincidentLines,
        std::cmp::Ordering::Less => ConicKind::Empty,
    }
}

fn normalize(v: Point) -> Point {
    let n = v[0].hypot(v[1]);
    if n == 0.0 {
        v
    } else {
        [v[0] / n, v[1] / n]
    }
}

/// Center of a central conic.
fn center(c: &ConicCoefficients) -> Option<Point> {
    let disc = c.b * c.b - 4.0 * c.a * c.c;
    if disc == 0.0 {
        return None;
    }
    Some([(2.0 * c.c * c.d - c.b * c.e) / disc, (2.0 * c.a * c.e - c.b * c.d) / disc])
}

/// Eigen-decomposition of `[[A, B/2], [B/2, C]]` as `(λ1, v1, λ2, v2)`.
fn principal_axes(c: &ConicCoefficients) -> (f64, Point, f64, Point) {
    let phi = 0.5 * c.b.atan2(c.a - c.c);
    let (s, co) = phi.sin_cos();
    let l1 = c.a * co * co + c.b * co * s + c.c * s * s;
    let l2 = c.a * s * s - c.b * co * s + c.c * co * co;
    (l1, [co, s], l2, [-s, co])
}

/// Decomposes an (approximately) rank-one quadratic part as `λ (u·p)²` and
/// returns `(λ, u, n, e_u, e_n)` with `n ⊥ u` and the linear part split
/// along `u` and `n`.
fn rank_one_frame(c: &ConicCoefficients) -> (f64, Point, Point, f64, f64) {
    let (l1, v1, l2, v2) = principal_axes(c);
    let (lambda, u) = if l1.abs() >= l2.abs() { (l1, v1) } else { (l2, v2) };
    let n = [-u[1], u[0]];
    let e_u = c.d * u[0] + c.e * u[1];
    let e_n = c.d * n[0] + c.e * n[1];
    (lambda, u, n, e_u, e_n)
}

pub fn conic_geometry(c: &ConicCoefficients, kind: ConicKind) -> ConicGeometry {
    match kind {
        ConicKind::AllPlane | ConicKind::Empty => ConicGeometry::None,
        ConicKind::Point => match center(c) {
            Some(p) => ConicGeometry::Point { at: p },
            None => ConicGeometry::None,
        },
        ConicKind::Ellipse | ConicKind::Hyperbola => {
            let ctr = center(c).unwrap_or([0.0, 0.0]);
            let value = c.f + 0.5 * (c.d * ctr[0] + c.e * ctr[1]);
            let (l1, v1, l2, v2) = principal_axes(c);
            if kind == ConicKind::Ellipse {
                let a1 = (-value / l1).max(0.0).sqrt();
                let a2 = (-value / l2).max(0.0).sqrt();
                ConicGeometry::Ellipse {
                    center: ctr,
                    axes: [[a1 * v1[0], a1 * v1[1]], [a2 * v2[0], a2 * v2[1]]],
                }
            } else {
                // the real axis is the one whose eigenvalue has the sign of −value
                let (lr, vr, li, vi) =
                    if (-value / l1) > 0.0 { (l1, v1, l2, v2) } else { (l2, v2, l1, v1) };
                let ar = (-value / lr).abs().sqrt();
                let ai = (value / li).abs().sqrt();
                ConicGeometry::Hyperbola {
                    center: ctr,
                    axes: [[ar * vr[0], ar * vr[1]], [ai * vi[0], ai * vi[1]]],
                }
            }
        }
        ConicKind::Parabola => {
            let (lambda, u, n, e_u, e_n) = rank_one_frame(c);
            // λ t² + e_u t + e_n s + F = 0 in coordinates p = t u + s n
            let t0 = -e_u / (2.0 * lambda);
            let s0 = -(lambda * t0 * t0 + e_u * t0 + c.f) / e_n;
            ConicGeometry::Parabola {
                vertex: [t0 * u[0] + s0 * n[0], t0 * u[1] + s0 * n[1]],
                axis: u,
                normal: n,
                curvature: -lambda / e_n,
            }
        }
        ConicKind::IntersectingLines => {
            let ctr = center(c).unwrap_or([0.0, 0.0]);
            let disc = (c.b * c.b - 4.0 * c.a * c.c).max(0.0).sqrt();
            let dirs = if c.a.abs() >= c.c.abs() {
                // A r² + B r + C = 0 with r = x / y
                let r1 = (-c.b + disc) / (2.0 * c.a);
                let r2 = (-c.b - disc) / (2.0 * c.a);
                [[r1, 1.0], [r2, 1.0]]
            } else {
                let r1 = (-c.b + disc) / (2.0 * c.c);
                let r2 = (-c.b - disc) / (2.0 * c.c);
                [[1.0, r1], [1.0, r2]]
            };
            ConicGeometry::Lines {
                lines: dirs.iter().map(|d| Line::through(ctr, normalize(*d))).collect(),
            }
        }
        ConicKind::ParallelLines | ConicKind::CoincidentLines => {
            let (lambda, u, n, e_u, _) = rank_one_frame(c);
            let disc = (e_u * e_u - 4.0 * lambda * c.f).max(0.0).sqrt();
            let ts: Vec<f64> = if kind == ConicKind::ParallelLines {
                vec![(-e_u + disc) / (2.0 * lambda), (-e_u - disc) / (2.0 * lambda)]
            } else {
                vec![-e_u / (2.0 * lambda)]
            };
            ConicGeometry::Lines {
                lines: ts.iter().map(|&t| Line::through([t * u[0], t * u[1]], n)).collect(),
            }
        }
        ConicKind::SingleLine => {
            let nn = c.d * c.d + c.e * c.e;
            let p = [-c.f * c.d / nn, -c.f * c.e / nn];
            ConicGeometry::Lines { lines: vec![Line::through(p, [-c.e, c.d])] }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn conic(v: [f64; 6]) -> ConicCoefficients {
        ConicCoefficients::from_array(v)
    }

    fn qm(c: [f64; 12]) -> QuadraticMap {
        QuadraticMap::new(c)
    }

    #[test]
    fn determinant_conic_examples() {
        let e1 = qm([1., 0., -1., 1., 0., 0., 0., 1., 0., 0., 0., 0.]);
        assert_eq!(det_jacobian_conic(&e1).to_array(), [2., 0., 2., 1., 0., 0.]);
        let h1 = qm([1., 0., 1., 1., 0., 0., 0., 1., 0., 0., 0., 0.]);
        assert_eq!(det_jacobian_conic(&h1).to_array(), [2., 0., -2., 1., 0., 0.]);
        let dp1 = qm([1., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0.]);
        assert_eq!(det_jacobian_conic(&dp1).to_array(), [0., 0., 0., 0., 0., -1.]);
    }

    #[test]
    fn circle_is_an_ellipse_with_expected_geometry() {
        let c = classify_conic(&conic([2., 0., 2., 1., 0., 0.]));
        assert_eq!(c.kind, ConicKind::Ellipse);
        let ConicGeometry::Ellipse { center, axes } = c.geometry else { panic!() };
        assert!((center[0] + 0.25).abs() < 1e-15 && center[1].abs() < 1e-15);
        for a in axes {
            assert!((a[0].hypot(a[1]) - 0.25).abs() < 1e-15);
        }
    }

    #[test]
    fn degenerate_kinds() {
        let k = |v| classify_conic(&conic(v)).kind;
        assert_eq!(k([2., 0., 0., 0., 0., 0.]), ConicKind::CoincidentLines);
        assert_eq!(k([0.; 6]), ConicKind::AllPlane);
        assert_eq!(k([0., 0., 0., 0., 0., -1.]), ConicKind::Empty);
        assert_eq!(k([0., 0., 0., 2., 0., 0.]), ConicKind::SingleLine);
        assert_eq!(k([2., 0., -2., 0., 0., 0.]), ConicKind::IntersectingLines);
        assert_eq!(k([2., 0., 2., 0., 0., 0.]), ConicKind::Point);
        assert_eq!(k([2., 0., 2., 0., 0., 1.]), ConicKind::Empty);
        assert_eq!(k([2., 0., 0., 2., 0., 0.]), ConicKind::ParallelLines);
        assert_eq!(k([2., 0., 0., 0., 0., 1.]), ConicKind::Empty);
        assert_eq!(k([2., 0., 0., 0., -1., 0.]), ConicKind::Parabola);
        assert_eq!(k([2., 0., -2., 1., 0., 0.]), ConicKind::Hyperbola);
    }

    #[test]
    fn exact_classification_matches_float() {
        let r = |n: i64| Rational::from_integer(n.into());
        let c = ConicCoefficients { a: r(2), b: r(0), c: r(2), d: r(1), e: r(0), f: r(0) };
        assert_eq!(classify_conic(&c).kind, ConicKind::Ellipse);
        let c = ConicCoefficients { a: r(1), b: r(2), c: r(1), d: r(0), e: r(0), f: r(0) };
        assert_eq!(classify_conic(&c).kind, ConicKind::CoincidentLines);
    }

    #[test]
    fn line_geometry_lies_on_conic() {
        for v in [
            [2., 0., -2., 1., 0., 0.5 / 4.],
            [2., 0., 0., 2., 0., 0.],
            [0., 0., 0., 2., 3., 1.],
            [1., 2., 1., 0., 0., 0.],
        ] {
            let c = conic(v);
            let cls = classify_conic(&c);
            let ConicGeometry::Lines { lines } = cls.geometry else {
                panic!("{v:?} gave {:?}", cls.kind)
            };
            for l in lines {
                for t in [-3.0, 0.0, 2.5] {
                    assert!(c.evaluate(&l.at(t)).abs() < 1e-12, "{v:?}");
                }
            }
        }
    }
}
