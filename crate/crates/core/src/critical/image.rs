//! Shape of the critical image `J1` and the fifteen critical-set classes.

use serde::{Deserialize, Serialize};

use crate::algebra::{Point, Poly2, QuadraticMap};
use crate::scalar::Tolerance;

use super::conic::{ConicClass, ConicKind};
use super::curve::{
    component_collapses, component_cusps, components_of, sample_curve, Curve,
};
use super::{critical_conic, sampling_radius};

/// Relative level for the shape tests on images of lines.
const SHAPE_REL: f64 = 1e-7;

/// Generic direction for slicing the plane.
const SLICE_ANGLE: f64 = 0.6154797;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum PieceShape {
    Point,
    Line,
    Ray,
    Parabola,
    ClosedCurve,
    OpenCurve,
}

/// One connected piece of `J1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ImagePiece {
    pub shape: PieceShape,
    /// Domain curve whose image traces the piece.
    pub source: Option<Curve>,
    /// Cusp points of the piece (in the range).
    pub cusps: Vec<Point>,
    /// Endpoint of a ray, or the point itself for a point piece.
    pub endpoint: Option<Point>,
}

/// Description of `J1` at the granularity of the classification table.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum J1Description {
    Empty,
    Point,
    Line,
    Ray,
    Parabola,
    ThreeCuspedCurve,
    TwoCurvesOneCusp,
    CurveWithCusp,
    RayAndRay,
    ParabolaAndRay,
    LineAndPoint,
    Other,
}

impl J1Description {
    pub fn name(self) -> &'static str {
        match self {
            J1Description::Empty => "empty",
            J1Description::Point => "point",
            J1Description::Line => "line",
            J1Description::Ray => "ray",
            J1Description::Parabola => "parabola",
            J1Description::ThreeCuspedCurve => "3-cusped curve",
            J1Description::TwoCurvesOneCusp => "two curves, one with cusp",
            J1Description::CurveWithCusp => "curve with cusp",
            J1Description::RayAndRay => "ray and ray",
            J1Description::ParabolaAndRay => "parabola and ray",
            J1Description::LineAndPoint => "line and point",
            J1Description::Other => "other",
        }
    }
}

impl std::fmt::Display for J1Description {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// The fifteen `J0`–`J1` cases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum CriticalSetClass {
    #[serde(rename = "1")]
    C1,
    #[serde(rename = "2")]
    C2,
    #[serde(rename = "3")]
    C3,
    #[serde(rename = "4")]
    C4,
    #[serde(rename = "5a")]
    C5a,
    #[serde(rename = "5b")]
    C5b,
    #[serde(rename = "6")]
    C6,
    #[serde(rename = "7a")]
    C7a,
    #[serde(rename = "7b")]
    C7b,
    #[serde(rename = "8a")]
    C8a,
    #[serde(rename = "8b")]
    C8b,
    #[serde(rename = "8c")]
    C8c,
    #[serde(rename = "9a")]
    C9a,
    #[serde(rename = "9b")]
    C9b,
    #[serde(rename = "9c")]
    C9c,
}

impl CriticalSetClass {
    pub const ALL: [CriticalSetClass; 15] = [
        CriticalSetClass::C1,
        CriticalSetClass::C2,
        CriticalSetClass::C3,
        CriticalSetClass::C4,
        CriticalSetClass::C5a,
        CriticalSetClass::C5b,
        CriticalSetClass::C6,
        CriticalSetClass::C7a,
        CriticalSetClass::C7b,
        CriticalSetClass::C8a,
        CriticalSetClass::C8b,
        CriticalSetClass::C8c,
        CriticalSetClass::C9a,
        CriticalSetClass::C9b,
        CriticalSetClass::C9c,
    ];

    pub fn name(self) -> &'static str {
        match self {
            CriticalSetClass::C1 => "1",
            CriticalSetClass::C2 => "2",
            CriticalSetClass::C3 => "3",
            CriticalSetClass::C4 => "4",
            CriticalSetClass::C5a => "5a",
            CriticalSetClass::C5b => "5b",
            CriticalSetClass::C6 => "6",
            CriticalSetClass::C7a => "7a",
            CriticalSetClass::C7b => "7b",
            CriticalSetClass::C8a => "8a",
            CriticalSetClass::C8b => "8b",
            CriticalSetClass::C8c => "8c",
            CriticalSetClass::C9a => "9a",
            CriticalSetClass::C9b => "9b",
            CriticalSetClass::C9c => "9c",
        }
    }

    /// `(J0, J1)` in words.
    pub fn description(self) -> (&'static str, &'static str) {
        match self {
            CriticalSetClass::C1 => ("empty", "empty"),
            CriticalSetClass::C2 => ("point", "point"),
            CriticalSetClass::C3 => ("ellipse", "closed curve with three cusps"),
            CriticalSetClass::C4 => ("hyperbola", "two curves, one with a single cusp"),
            CriticalSetClass::C5a => ("intersecting lines", "two rays from a common point"),
            CriticalSetClass::C5b => ("intersecting lines", "ray and parabola"),
            CriticalSetClass::C6 => ("parabola", "curve with a single cusp"),
            CriticalSetClass::C7a => ("parallel lines", "line and point"),
            CriticalSetClass::C7b => ("coincident lines", "point"),
            CriticalSetClass::C8a => ("line", "point"),
            CriticalSetClass::C8b => ("line", "line"),
            CriticalSetClass::C8c => ("line", "parabola"),
            CriticalSetClass::C9a => ("plane", "line"),
            CriticalSetClass::C9b => ("plane", "ray"),
            CriticalSetClass::C9c => ("plane", "parabola"),
        }
    }
}

impl std::fmt::Display for CriticalSetClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// `J0` together with the decomposition of `J1` into pieces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalImage {
    pub j0: ConicClass,
    pub pieces: Vec<ImagePiece>,
    pub description: J1Description,
}

impl CriticalImage {
    /// Cusp images, isolated points and ray endpoints.
    pub fn special_points(&self) -> Vec<Point> {
        let mut out = Vec::new();
        for p in &self.pieces {
            out.extend(p.cusps.iter().copied());
            out.extend(p.endpoint);
        }
        out
    }
}

fn norm(p: Point) -> f64 {
    p[0].hypot(p[1])
}

/// `Q(p0 + t d) = c0 + c1 t + c2 t²`.
fn line_image(q: &QuadraticMap, p0: Point, d: Point) -> (Point, Point, Point) {
    let c0 = q.evaluate(&p0);
    let j = q.jacobian(&p0);
    let c1 = [j[0][0] * d[0] + j[0][1] * d[1], j[1][0] * d[0] + j[1][1] * d[1]];
    let quad = |a: f64, b: f64, c: f64| a * d[0] * d[0] + b * d[0] * d[1] + c * d[1] * d[1];
    let c2 = [quad(q.a20, q.a11, q.a02), quad(q.b20, q.b11, q.b02)];
    (c0, c1, c2)
}

fn classify_line_image(q: &QuadraticMap, p0: Point, d: Point) -> ImagePiece {
    let s = q.scale().max(f64::MIN_POSITIVE);
    let dn = norm(d);
    let d = [d[0] / dn, d[1] / dn];
    let (c0, c1, c2) = line_image(q, p0, d);
    let slope_scale = s * (1.0 + norm(p0));
    let source = Some(Curve::Line { point: p0, direction: d });
    let n2 = norm(c2);
    if n2 <= SHAPE_REL * s {
        if norm(c1) <= SHAPE_REL * slope_scale {
            return ImagePiece { shape: PieceShape::Point, source, cusps: vec![], endpoint: Some(c0) };
        }
        return ImagePiece { shape: PieceShape::Line, source, cusps: vec![], endpoint: None };
    }
    let perp = (c1[0] * c2[1] - c1[1] * c2[0]).abs() / n2;
    if perp <= SHAPE_REL * slope_scale {
        let t = -(c1[0] * c2[0] + c1[1] * c2[1]) / (2.0 * n2 * n2);
        let end = [
            c0[0] + c1[0] * t + c2[0] * t * t,
            c0[1] + c1[1] * t + c2[1] * t * t,
        ];
        return ImagePiece { shape: PieceShape::Ray, source, cusps: vec![], endpoint: Some(end) };
    }
    ImagePiece { shape: PieceShape::Parabola, source, cusps: vec![], endpoint: None }
}

/// Non-constant coefficients `[x², xy, y², x, y]`.
fn nonconstant(p: &Poly2) -> [f64; 5] {
    [p[0], p[1], p[2], p[3], p[4]]
}

/// Image of a map whose Jacobian is singular everywhere.
fn all_plane_image(q: &QuadraticMap) -> ImagePiece {
    let (f, g) = (q.first(), q.second());
    let (nf, ng) = (nonconstant(&f), nonconstant(&g));
    let len = |v: &[f64; 5]| v.iter().map(|x| x * x).sum::<f64>().sqrt();
    let (big, small, big_first) = if len(&nf) >= len(&ng) { (nf, ng, true) } else { (ng, nf, false) };
    let bb: f64 = big.iter().map(|x| x * x).sum();
    let mu = big.iter().zip(&small).map(|(a, b)| a * b).sum::<f64>() / bb;
    let resid: f64 = big
        .iter()
        .zip(&small)
        .map(|(a, b)| (b - mu * a) * (b - mu * a))
        .sum::<f64>()
        .sqrt();
    let (sa, ca) = SLICE_ANGLE.sin_cos();
    if resid > 1e-8 * bb.sqrt() {
        // Q factors through a linear function, so any transversal line
        // sweeps the whole parabola.
        return classify_line_image(q, [0.0, 0.0], [ca, sa]);
    }
    // rank one: Q = c + w·g with g = big
    let w: Point = if big_first { [1.0, mu] } else { [mu, 1.0] };
    let (g20, g11, g02, g10, g01) = (big[0], big[1], big[2], big[3], big[4]);
    let scale = big.iter().fold(0.0_f64, |m, v| m.max(v.abs()));
    // eigen-structure of the quadratic part [[g20, g11/2], [g11/2, g02]]
    let phi = 0.5 * g11.atan2(g20 - g02);
    let (s, c) = phi.sin_cos();
    let l1 = g20 * c * c + g11 * c * s + g02 * s * s;
    let l2 = g20 * s * s - g11 * c * s + g02 * c * c;
    let (v1, v2) = ([c, s], [-s, c]);
    let tiny = 1e-8 * scale;
    let line_piece = |p0: Point, d: Point| ImagePiece {
        shape: PieceShape::Line,
        source: Some(Curve::Line { point: p0, direction: d }),
        cusps: vec![],
        endpoint: None,
    };
    if l1.abs() > tiny && l2.abs() > tiny && l1.signum() != l2.signum() {
        // indefinite: g is affine along an asymptotic direction d
        let r1 = (l1.abs()).sqrt();
        let r2 = (l2.abs()).sqrt();
        let d = [r2 * v1[0] + r1 * v2[0], r2 * v1[1] + r1 * v2[1]];
        let d_other = [r2 * v1[0] - r1 * v2[0], r2 * v1[1] - r1 * v2[1]];
        let dn = norm(d);
        let d = [d[0] / dn, d[1] / dn];
        let slope0 = g10 * d[0] + g01 * d[1];
        let p0 = if slope0.abs() > tiny { [0.0, 0.0] } else { d_other };
        return line_piece(p0, d);
    }
    let (lam, u, nul) = if l1.abs() >= l2.abs() { (l1, v1, v2) } else { (l2, v2, v1) };
    if l1.abs() <= tiny || l2.abs() <= tiny {
        // semidefinite: unbounded both ways iff the linear part has a
        // component along the null direction
        let m_null = g10 * nul[0] + g01 * nul[1];
        if m_null.abs() > tiny {
            return line_piece([0.0, 0.0], nul);
        }
    }
    // bounded on one side: extremum of g along u (g is constant along the
    // null direction in the semidefinite case)
    let m_u = g10 * u[0] + g01 * u[1];
    let t_ext = -m_u / (2.0 * lam);
    let mut p_ext = [t_ext * u[0], t_ext * u[1]];
    if l1.abs() > tiny && l2.abs() > tiny {
        // definite: full stationary point
        let m_v = g10 * nul[0] + g01 * nul[1];
        let lam_v = if l1.abs() >= l2.abs() { l2 } else { l1 };
        let s_ext = -m_v / (2.0 * lam_v);
        p_ext = [p_ext[0] + s_ext * nul[0], p_ext[1] + s_ext * nul[1]];
    }
    let endpoint = q.evaluate(&p_ext);
    let _ = w;
    ImagePiece {
        shape: PieceShape::Ray,
        source: Some(Curve::Line { point: p_ext, direction: u }),
        cusps: vec![],
        endpoint: Some(endpoint),
    }
}

fn describe(kind: ConicKind, pieces: &[ImagePiece]) -> J1Description {
    use PieceShape as S;
    let mut shapes: Vec<S> = pieces.iter().map(|p| p.shape).collect();
    shapes.sort();
    let cusps: usize = pieces.iter().map(|p| p.cusps.len()).sum();
    match (kind, shapes.as_slice()) {
        (_, []) => J1Description::Empty,
        (_, [S::Point]) => J1Description::Point,
        (ConicKind::Ellipse, [S::ClosedCurve]) if cusps == 3 => J1Description::ThreeCuspedCurve,
        (ConicKind::Hyperbola, [S::OpenCurve, S::OpenCurve]) if cusps == 1 => {
            J1Description::TwoCurvesOneCusp
        }
        (ConicKind::Parabola, [S::OpenCurve]) if cusps == 1 => J1Description::CurveWithCusp,
        (_, [S::Ray, S::Ray]) => J1Description::RayAndRay,
        (_, [S::Ray, S::Parabola]) => J1Description::ParabolaAndRay,
        (_, [S::Point, S::Line]) => J1Description::LineAndPoint,
        (_, [S::Line]) => J1Description::Line,
        (_, [S::Ray]) => J1Description::Ray,
        (_, [S::Parabola]) => J1Description::Parabola,
        (ConicKind::CoincidentLines, _) | (_, [S::Point, S::Point]) => J1Description::Point,
        _ => J1Description::Other,
    }
}

/// Decomposes `J1` into pieces. Curved pieces get their cusps from `n`
/// samples of the corresponding `J0` component.
pub fn analyze_critical_image(q: &QuadraticMap, n: usize, tol: Tolerance) -> CriticalImage {
    let j0 = critical_conic(q, tol);
    let mut pieces = Vec::new();
    match j0.kind {
        ConicKind::Empty => {}
        ConicKind::AllPlane => pieces.push(all_plane_image(q)),
        ConicKind::Point => {
            if let super::ConicGeometry::Point { at } = j0.geometry {
                pieces.push(ImagePiece {
                    shape: PieceShape::Point,
                    source: None,
                    cusps: vec![],
                    endpoint: Some(q.evaluate(&at)),
                });
            }
        }
        ConicKind::Ellipse | ConicKind::Hyperbola | ConicKind::Parabola => {
            let curves = components_of(&j0.geometry);
            let radius = sampling_radius(&curves);
            for c in curves {
                let sample = sample_curve(q, &c, n, radius);
                let cusps = component_cusps(q, &sample)
                    .into_iter()
                    .map(|t| q.evaluate(&c.point(t)))
                    .collect();
                let shape =
                    if c.is_closed() { PieceShape::ClosedCurve } else { PieceShape::OpenCurve };
                if component_collapses(q, &sample) {
                    let end = q.evaluate(&c.point(0.0));
                    pieces.push(ImagePiece {
                        shape: PieceShape::Point,
                        source: Some(c),
                        cusps: vec![],
                        endpoint: Some(end),
                    });
                } else {
                    pieces.push(ImagePiece { shape, source: Some(c), cusps, endpoint: None });
                }
            }
        }
        ConicKind::IntersectingLines
        | ConicKind::ParallelLines
        | ConicKind::CoincidentLines
        | ConicKind::SingleLine => {
            if let super::ConicGeometry::Lines { lines } = &j0.geometry {
                for l in lines {
                    pieces.push(classify_line_image(q, l.point, l.direction));
                }
            }
        }
    }
    let description = describe(j0.kind, &pieces);
    CriticalImage { j0, pieces, description }
}

pub fn j0j1_class(q: &QuadraticMap) -> CriticalSetClass {
    j0j1_class_with(q, Tolerance::default())
}

pub fn j0j1_class_with(q: &QuadraticMap, tol: Tolerance) -> CriticalSetClass {
    let img = analyze_critical_image(q, 256, tol);
    class_from_image(&img)
}

pub(crate) fn class_from_image(img: &CriticalImage) -> CriticalSetClass {
    use CriticalSetClass as C;
    let has = |s: PieceShape| img.pieces.iter().any(|p| p.shape == s);
    match img.j0.kind {
        ConicKind::Empty => C::C1,
        ConicKind::Point => C::C2,
        ConicKind::Ellipse => C::C3,
        ConicKind::Hyperbola => C::C4,
        ConicKind::IntersectingLines => {
            if has(PieceShape::Parabola) {
                C::C5b
            } else {
                C::C5a
            }
        }
        ConicKind::Parabola => C::C6,
        ConicKind::ParallelLines => C::C7a,
        ConicKind::CoincidentLines => C::C7b,
        ConicKind::SingleLine => match img.pieces.first().map(|p| p.shape) {
            Some(PieceShape::Point) => C::C8a,
            Some(PieceShape::Line) => C::C8b,
            _ => C::C8c,
        },
        ConicKind::AllPlane => match img.pieces.first().map(|p| p.shape) {
            Some(PieceShape::Line) => C::C9a,
            Some(PieceShape::Ray) => C::C9b,
            _ => C::C9c,
        },
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(c: [f64; 12]) -> QuadraticMap {
        QuadraticMap::new(c)
    }

    #[test]
    fn table_examples() {
        let h2 = qm([1., 0., 1., 1., 0., 0., 0., 1., 0., 0.5, 0., 0.]);
        assert_eq!(j0j1_class(&h2), CriticalSetClass::C5b);
        let de2 = qm([1., 0., -1., 0., 0., 0., 0., 0., 0., 1., 1., 0.]);
        assert_eq!(j0j1_class(&de2), CriticalSetClass::C8a);
        let dp4 = qm([1., 0., 0., 0., 0., 0., 0., 0., 0., 1., 0., 0.]);
        assert_eq!(j0j1_class(&dp4), CriticalSetClass::C9c);
    }

    #[test]
    fn p2_image_is_line_and_point() {
        let p2 = qm([1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.]);
        let img = analyze_critical_image(&p2, 256, Tolerance::default());
        assert_eq!(img.description, J1Description::LineAndPoint);
        let p3 = qm([1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let img = analyze_critical_image(&p3, 256, Tolerance::default());
        assert_eq!(img.description, J1Description::Point);
        assert_eq!(img.special_points(), vec![[0.0, 0.0]]);
    }

    #[test]
    fn all_plane_images() {
        let cases = [
            ([1., 0., -1., 0., 0., 0., 0., 0., 0., 0., 0., 0.], PieceShape::Line),
            ([1., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0.], PieceShape::Ray),
            ([1., 0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0.], PieceShape::Line),
            ([1., 0., 0., 0., 0., 0., 0., 0., 0., 1., 0., 0.], PieceShape::Parabola),
            ([1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.], PieceShape::Ray),
        ];
        for (c, shape) in cases {
            let img = analyze_critical_image(&qm(c), 64, Tolerance::default());
            assert_eq!(img.pieces[0].shape, shape, "{c:?}");
        }
        let dh2 = qm([1., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0.]);
        let img = analyze_critical_image(&dh2, 64, Tolerance::default());
        assert_eq!(img.pieces[0].endpoint, Some([0.0, 0.0]));
    }
}
