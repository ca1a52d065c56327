//! Critical set `J0 = {det DQ = 0}`, critical image `J1 = Q(J0)`, cusps,
//! and the fifteen-way critical-set classification.

mod conic;
mod curve;
mod image;

pub use conic::{
    classify_conic, classify_conic_with, conic_geometry, conic_kind, det_jacobian_conic,
    ConicClass, ConicCoefficients, ConicGeometry, ConicKind, Line,
};
pub use curve::{
    component_collapses, component_cusps, components_of, kernel_direction, sample_curve,
    ComponentSample, Curve, CurveSample, DEFAULT_SAMPLES,
};
pub use image::{
    analyze_critical_image, j0j1_class, j0j1_class_with, CriticalImage, CriticalSetClass,
    ImagePiece, J1Description, PieceShape,
};

use crate::algebra::QuadraticMap;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

/// `det DQ` classified against the map's own scale.
pub fn critical_conic<S: Scalar>(q: &QuadraticMap<S>, tol: Tolerance) -> ConicClass {
    let c = det_jacobian_conic(q);
    let s = q.scale();
    classify_conic_with(&c, &(s.clone() * s), tol)
}

/// Sampling window for unbounded components: `10 · (1 + data scale)`.
pub fn sampling_radius(curves: &[Curve]) -> f64 {
    10.0 * (1.0 + curves.iter().map(Curve::data_scale).fold(0.0, f64::max))
}

pub fn critical_set(q: &QuadraticMap) -> (ConicClass, CurveSample) {
    critical_set_with(q, DEFAULT_SAMPLES, Tolerance::default())
}

/// J0 class and samples of each component. A point J0 gives one sample;
/// an all-plane J0 gives a reference grid; an empty J0 gives nothing.
pub fn critical_set_with(q: &QuadraticMap, n: usize, tol: Tolerance) -> (ConicClass, CurveSample) {
    let class = critical_conic(q, tol);
    let sample = match (&class.kind, &class.geometry) {
        (ConicKind::Point, ConicGeometry::Point { at }) => CurveSample {
            components: vec![ComponentSample {
                curve: None,
                params: vec![0.0],
                points: vec![*at],
                images: vec![q.evaluate(at)],
            }],
        },
        (ConicKind::AllPlane, _) => {
            let side = (n as f64).sqrt().ceil().max(2.0) as usize;
            let r = 10.0;
            let mut points = Vec::with_capacity(side * side);
            for i in 0..side {
                for j in 0..side {
                    let x = -r + 2.0 * r * i as f64 / (side - 1) as f64;
                    let y = -r + 2.0 * r * j as f64 / (side - 1) as f64;
                    points.push([x, y]);
                }
            }
            let images = points.iter().map(|p| q.evaluate(p)).collect();
            CurveSample {
                components: vec![ComponentSample {
                    curve: None,
                    params: Vec::new(),
                    points,
                    images,
                }],
            }
        }
        _ => {
            let curves = components_of(&class.geometry);
            let radius = sampling_radius(&curves);
            CurveSample {
                components: curves.iter().map(|c| sample_curve(q, c, n, radius)).collect(),
            }
        }
    };
    (class, sample)
}

/// Samples `J1`. For an all-plane `J0` this traces the image `Q(R²)`,
/// which is itself a curve.
pub fn sample_critical_image(q: &QuadraticMap, n: usize) -> Result<CurveSample> {
    sample_critical_image_with(q, n, Tolerance::default())
}

pub fn sample_critical_image_with(
    q: &QuadraticMap,
    n: usize,
    tol: Tolerance,
) -> Result<CurveSample> {
    let class = critical_conic(q, tol);
    match class.kind {
        ConicKind::Empty => Err(Error::EmptyCriticalSet),
        ConicKind::AllPlane => {
            let img = analyze_critical_image(q, n, tol);
            let curves: Vec<Curve> = img.pieces.iter().filter_map(|p| p.source.clone()).collect();
            let radius = sampling_radius(&curves);
            Ok(CurveSample {
                components: curves.iter().map(|c| sample_curve(q, c, n, radius)).collect(),
            })
        }
        _ => Ok(critical_set_with(q, n, tol).1),
    }
}

/// Counts cusps of `J1` along the sampled `J0` components and returns their
/// locations in the domain.
pub fn count_cusps(q: &QuadraticMap, sample: &CurveSample) -> Result<(usize, Vec<[f64; 2]>)> {
    if sample.components.is_empty() || sample.components.iter().any(|c| c.curve.is_none()) {
        let kind = critical_conic(q, Tolerance::default()).kind;
        return Err(Error::NotACurve { kind });
    }
    let mut locations = Vec::new();
    for comp in &sample.components {
        let curve = comp.curve.as_ref().expect("checked above");
        for t in component_cusps(q, comp) {
            locations.push(curve.point(t));
        }
    }
    Ok((locations.len(), locations))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qm(c: [f64; 12]) -> QuadraticMap {
        QuadraticMap::new(c)
    }

    #[test]
    fn e1_samples_lie_on_critical_set() {
        let e1 = qm([1., 0., -1., 1., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let (class, sample) = critical_set(&e1);
        assert_eq!(class.kind, ConicKind::Ellipse);
        for p in sample.all_points() {
            assert!(e1.det_jacobian_at(p).abs() <= 1e-10);
        }
        let (n, _) = count_cusps(&e1, &sample).unwrap();
        assert_eq!(n, 3);
    }

    #[test]
    fn h3_critical_set_is_the_diagonals() {
        let h3 = qm([1., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let (class, sample) = critical_set(&h3);
        assert_eq!(class.kind, ConicKind::IntersectingLines);
        for p in sample.all_points() {
            assert!((p[0].abs() - p[1].abs()).abs() < 1e-9);
        }
    }

    #[test]
    fn dp1_critical_set_is_empty() {
        let dp1 = qm([1., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0.]);
        let (class, sample) = critical_set(&dp1);
        assert_eq!(class.kind, ConicKind::Empty);
        assert!(sample.is_empty());
        assert!(matches!(sample_critical_image(&dp1, 64), Err(Error::EmptyCriticalSet)));
    }

    #[test]
    fn cusp_counts_for_h1_and_p1() {
        let h1 = qm([1., 0., 1., 1., 0., 0., 0., 1., 0., 0., 0., 0.]);
        let (_, s) = critical_set(&h1);
        assert_eq!(count_cusps(&h1, &s).unwrap().0, 1);
        let p1 = qm([1., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0.]);
        let (_, s) = critical_set(&p1);
        assert_eq!(count_cusps(&p1, &s).unwrap().0, 1);
    }

    #[test]
    fn count_cusps_rejects_non_curves() {
        let de3 = qm([1., 0., -1., 0., 0., 0., 0., 0., 0., 0., 0., 0.]);
        let (_, s) = critical_set(&de3);
        assert!(matches!(count_cusps(&de3, &s), Err(Error::NotACurve { .. })));
    }
}
