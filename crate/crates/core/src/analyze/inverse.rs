//! Quadratic inverses of `DP1` maps and injectivity of `Q` on `J0`.

use crate::algebra::{compose, Point, QuadraticMap};
use crate::critical::{critical_set_with, ConicKind};
use crate::error::{Error, Result};
use crate::normalize::{classify, ClassLabel};
use crate::scalar::Tolerance;

/// Inverse of a map in class `DP1`, itself quadratic.
///
/// With witnesses `M = k∘Q∘h⁻¹ = (x² + y + c1, x + c2)` the inverse is
/// `h⁻¹ ∘ M⁻¹ ∘ k` where `M⁻¹(u, v) = (v − c2, u − c1 − (v − c2)²)`.
pub fn quadratic_inverse(q: &QuadraticMap) -> Result<QuadraticMap> {
    let r = classify(q)?;
    if r.label != ClassLabel::DP1 {
        return Err(Error::NotInvertible { label: r.label });
    }
    let (h, k) = (r.witness.h, r.witness.k);
    let m = compose(&k, q, &h)?;
    let (c1, c2) = (m.a00, m.b00);
    let m_inv = QuadraticMap::new([
        0.0, 0.0, 0.0, 0.0, 1.0, -c2, //
        0.0, 0.0, -1.0, 1.0, 2.0 * c2, -c1 - c2 * c2,
    ]);
    let tol = Tolerance::default();
    compose(&h.inverse(tol)?, &m_inv, &k.inverse(tol)?)
}

pub fn injective_on_critical_set(q: &QuadraticMap, n: usize) -> Result<bool> {
    injective_on_critical_set_with(q, n, Tolerance::default())
}

fn segment_distance(p: Point, a: Point, b: Point) -> f64 {
    let d = [b[0] - a[0], b[1] - a[1]];
    let dd = d[0] * d[0] + d[1] * d[1];
    let t = if dd == 0.0 {
        0.0
    } else {
        (((p[0] - a[0]) * d[0] + (p[1] - a[1]) * d[1]) / dd).clamp(0.0, 1.0)
    };
    (p[0] - a[0] - t * d[0]).hypot(p[1] - a[1] - t * d[1])
}

fn orient(a: Point, b: Point, c: Point) -> f64 {
    (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
}

fn properly_cross(a: Point, b: Point, c: Point, d: Point) -> bool {
    let (o1, o2) = (orient(a, b, c), orient(a, b, d));
    let (o3, o4) = (orient(c, d, a), orient(c, d, b));
    o1 * o2 < 0.0 && o3 * o4 < 0.0
}

/// Polyline segments `(component, start, end)` of the sampled image.
fn segments(sample: &crate::critical::CurveSample) -> Vec<(usize, usize, usize)> {
    let mut out = Vec::new();
    for (c, comp) in sample.components.iter().enumerate() {
        let m = comp.images.len();
        let closed = comp.curve.as_ref().is_some_and(|c| c.is_closed());
        let count = if closed { m } else { m.saturating_sub(1) };
        out.extend((0..count).map(|j| (c, j, (j + 1) % m)));
    }
    out
}

/// Samples `J0` with `n` points per component. `Q` fails to be injective
/// when a sample's image lies on the image of a segment not incident to it
/// (collapsed pieces, retraced folds) or when two image segments cross.
pub fn injective_on_critical_set_with(q: &QuadraticMap, n: usize, tol: Tolerance) -> Result<bool> {
    let n = n.max(64);
    let (class, sample) = critical_set_with(q, n, tol);
    match class.kind {
        ConicKind::AllPlane | ConicKind::Empty => {
            return Err(Error::NotApplicable(format!("J0 is {}", class.kind)));
        }
        ConicKind::Point => return Ok(true),
        _ => {}
    }
    let floor = 1e-13 * q.scale();
    let mag = |p: Point| p[0].abs() + p[1].abs();
    let comps = &sample.components;
    let segs = segments(&sample);
    let img = |c: usize, i: usize| comps[c].images[i];
    for (a, ca) in comps.iter().enumerate() {
        for (i, &p) in ca.images.iter().enumerate() {
            for &(b, j0, j1) in &segs {
                if a == b && (j0 == i || j1 == i) {
                    continue;
                }
                let (s0, s1) = (img(b, j0), img(b, j1));
                let near = 1e-9 * (mag(p) + mag(s0) + mag(s1)) + floor;
                if segment_distance(p, s0, s1) <= near {
                    return Ok(false);
                }
            }
        }
    }
    for (k, &(a, i0, i1)) in segs.iter().enumerate() {
        for &(b, j0, j1) in &segs[k + 1..] {
            if a == b && (i0 == j0 || i0 == j1 || i1 == j0 || i1 == j1) {
                continue;
            }
            if properly_cross(img(a, i0), img(a, i1), img(b, j0), img(b, j1)) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_of_standard_form() {
        let q = ClassLabel::DP1.normal_form();
        let inv = quadratic_inverse(&q).unwrap();
        let want = QuadraticMap::new([0., 0., 0., 0., 1., 0., 0., 0., -1., 1., 0., 0.]);
        assert!(inv.max_deviation_ignoring_constants(&want) < 1e-14);
        assert!(inv.a00.abs() < 1e-14 && inv.b00.abs() < 1e-14);
    }

    #[test]
    fn henon_round_trip() {
        let q = QuadraticMap::new([-1.4, 0., 0., 0., 1., 1., 0., 0., 0., 0.3, 0., 0.]);
        let inv = quadratic_inverse(&q).unwrap();
        for i in 0..100 {
            let p = [(i as f64 * 0.37).sin() * 2.0, (i as f64 * 0.71).cos() * 2.0];
            let back = q.evaluate(&inv.evaluate(&p));
            assert!((back[0] - p[0]).abs() < 1e-10 && (back[1] - p[1]).abs() < 1e-10);
        }
    }

    #[test]
    fn non_dp1_is_rejected() {
        let e = quadratic_inverse(&ClassLabel::E1.normal_form()).unwrap_err();
        assert!(matches!(e, Error::NotInvertible { label: ClassLabel::E1 }));
    }

    #[test]
    fn injectivity_by_class() {
        use ClassLabel::*;
        for l in [E1, E2, H1, P1, DE1, DH1, DP2] {
            assert!(injective_on_critical_set(&l.normal_form(), 512).unwrap(), "{l}");
        }
        for l in [H2, H3, P2, P3, DE2] {
            assert!(!injective_on_critical_set(&l.normal_form(), 512).unwrap(), "{l}");
        }
        for l in [DP1, DE3, DP5] {
            assert!(injective_on_critical_set(&l.normal_form(), 512).is_err(), "{l}");
        }
    }
}
