//! Convexity of the range `Q(R²)`, by sampling.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{Point, QuadraticMap};
use crate::normalize::ClassLabel;

use super::preimage::preimage_count;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Convexity {
    /// No sampled midpoint fell outside the range.
    ConvexConsistent,
    /// `p1` and `p2` are in the range, `midpoint` is not.
    NonConvexWitness { p1: Point, p2: Point, midpoint: Point },
}

impl Convexity {
    pub fn is_convex(&self) -> bool {
        matches!(self, Convexity::ConvexConsistent)
    }
}

/// Seeded with 0; see [`range_convexity_with`].
pub fn range_convexity(q: &QuadraticMap, n: usize) -> Convexity {
    range_convexity_with(q, n, &mut ChaCha8Rng::seed_from_u64(0))
}

/// Images of `max(n, 100)` random points of `[-2, 2]²`; every pair's
/// midpoint is tested for membership in the range.
pub fn range_convexity_with<R: Rng + ?Sized>(q: &QuadraticMap, n: usize, rng: &mut R) -> Convexity {
    let n = n.max(100);
    let points: Vec<Point> = (0..n)
        .map(|_| q.evaluate(&[rng.random_range(-2.0..2.0), rng.random_range(-2.0..2.0)]))
        .collect();
    for i in 0..n {
        for j in i + 1..n {
            let (p1, p2) = (points[i], points[j]);
            let midpoint = [0.5 * (p1[0] + p2[0]), 0.5 * (p1[1] + p2[1])];
            if !preimage_count(q, midpoint).is_nonempty() {
                return Convexity::NonConvexWitness { p1, p2, midpoint };
            }
        }
    }
    Convexity::ConvexConsistent
}

/// Exact description of the range for the two fold classes that share
/// their critical data.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum ClosedFormRange {
    /// `{(u, v) : u ≥ −v²}`, not convex.
    OutsideParabola,
    /// `{(u, v) : u ≥ v²}`, convex.
    InsideParabola,
}

impl ClosedFormRange {
    pub fn contains(self, p: Point) -> bool {
        let (u, v) = (p[0], p[1]);
        match self {
            ClosedFormRange::OutsideParabola => u >= -v * v,
            ClosedFormRange::InsideParabola => u >= v * v,
        }
    }

    pub fn is_convex(self) -> bool {
        matches!(self, ClosedFormRange::InsideParabola)
    }
}

pub fn closed_form_range(label: ClassLabel) -> Option<ClosedFormRange> {
    match label {
        ClassLabel::DE1 => Some(ClosedFormRange::OutsideParabola),
        ClassLabel::DH1 => Some(ClosedFormRange::InsideParabola),
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_classes() {
        let de1 = ClassLabel::DE1.normal_form();
        let dh1 = ClassLabel::DH1.normal_form();
        assert!(range_convexity(&dh1, 100).is_convex());
        assert!(!range_convexity(&de1, 100).is_convex());
        assert!(range_convexity(&ClassLabel::DP1.normal_form(), 100).is_convex());
        let r = closed_form_range(ClassLabel::DE1).unwrap();
        assert!(r.contains([-1.0, 1.0]) && r.contains([-1.0, -1.0]) && !r.contains([-1.0, 0.0]));
        assert!(!r.is_convex() && closed_form_range(ClassLabel::DH1).unwrap().is_convex());
    }

    #[test]
    fn closed_forms_match_preimages() {
        for l in [ClassLabel::DE1, ClassLabel::DH1] {
            let q = l.normal_form();
            let r = closed_form_range(l).unwrap();
            for i in -8..=8 {
                for j in -8..=8 {
                    let p = [0.37 * i as f64 + 0.01, 0.29 * j as f64];
                    assert_eq!(preimage_count(&q, p).is_nonempty(), r.contains(p), "{l} {p:?}");
                }
            }
        }
    }
}
