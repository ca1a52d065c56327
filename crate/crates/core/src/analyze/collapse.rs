//! The 18 → 15 collapses: critical-set classes and smooth classes.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Point;
use crate::critical::CriticalSetClass;
use crate::normalize::ClassLabel;

pub fn critical_set_class_of(label: ClassLabel) -> CriticalSetClass {
    label.critical_set_class()
}

/// Classes up to smooth (in fact polynomial) changes of coordinates.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SmoothClass {
    E1,
    E2,
    H1,
    H2,
    H3,
    P1,
    P2,
    P3,
    DE2,
    DE3,
    DH2,
    DP1,
    DP5,
    /// `DE1`, `DH1` and `DP2`, all equivalent to the fold `(x², y)`.
    Fold,
    /// `DP3` and `DP4`, both equivalent to `(x, 0)`.
    Projection,
}

impl SmoothClass {
    pub const ALL: [SmoothClass; 15] = [
        SmoothClass::E1,
        SmoothClass::E2,
        SmoothClass::H1,
        SmoothClass::H2,
        SmoothClass::H3,
        SmoothClass::P1,
        SmoothClass::P2,
        SmoothClass::P3,
        SmoothClass::DE2,
        SmoothClass::DE3,
        SmoothClass::DH2,
        SmoothClass::DP1,
        SmoothClass::DP5,
        SmoothClass::Fold,
        SmoothClass::Projection,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SmoothClass::E1 => "E1",
            SmoothClass::E2 => "E2",
            SmoothClass::H1 => "H1",
            SmoothClass::H2 => "H2",
            SmoothClass::H3 => "H3",
            SmoothClass::P1 => "P1",
            SmoothClass::P2 => "P2",
            SmoothClass::P3 => "P3",
            SmoothClass::DE2 => "DE2",
            SmoothClass::DE3 => "DE3",
            SmoothClass::DH2 => "DH2",
            SmoothClass::DP1 => "DP1",
            SmoothClass::DP5 => "DP5",
            SmoothClass::Fold => "DE1/DH1/DP2",
            SmoothClass::Projection => "DP3/DP4",
        }
    }

    pub fn members(self) -> Vec<ClassLabel> {
        ClassLabel::ALL.into_iter().filter(|l| smooth_class_of(*l) == self).collect()
    }

    /// Polynomial identities relating the members of a merged class.
    pub fn identities(self) -> Vec<PolynomialIdentity> {
        group_identities().into_iter().filter(|i| i.class == self).collect()
    }
}

impl fmt::Display for SmoothClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn smooth_class_of(label: ClassLabel) -> SmoothClass {
    use ClassLabel as L;
    match label {
        L::E1 => SmoothClass::E1,
        L::E2 => SmoothClass::E2,
        L::H1 => SmoothClass::H1,
        L::H2 => SmoothClass::H2,
        L::H3 => SmoothClass::H3,
        L::P1 => SmoothClass::P1,
        L::P2 => SmoothClass::P2,
        L::P3 => SmoothClass::P3,
        L::DE2 => SmoothClass::DE2,
        L::DE3 => SmoothClass::DE3,
        L::DH2 => SmoothClass::DH2,
        L::DP1 => SmoothClass::DP1,
        L::DP5 => SmoothClass::DP5,
        L::DE1 | L::DH1 | L::DP2 => SmoothClass::Fold,
        L::DP3 | L::DP4 => SmoothClass::Projection,
    }
}

/// `k1(x, y) = (x + y², y)`.
pub fn k1(p: Point) -> Point {
    [p[0] + p[1] * p[1], p[1]]
}

/// `k2(x, y) = (x − y², y)`.
pub fn k2(p: Point) -> Point {
    [p[0] - p[1] * p[1], p[1]]
}

/// `h(x, y) = k(x, y) = (y, x − y²)`.
pub fn shear(p: Point) -> Point {
    [p[1], p[0] - p[1] * p[1]]
}

/// An identity `lhs(p) = rhs(p)` between polynomial maps of the plane.
#[derive(Clone)]
pub struct PolynomialIdentity {
    pub class: SmoothClass,
    pub statement: &'static str,
    pub lhs: fn(Point) -> Point,
    pub rhs: fn(Point) -> Point,
}

impl fmt::Debug for PolynomialIdentity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("PolynomialIdentity").field("statement", &self.statement).finish()
    }
}

impl PolynomialIdentity {
    /// Largest deviation over the given points.
    pub fn max_error(&self, points: &[Point]) -> f64 {
        points
            .iter()
            .map(|p| {
                let (a, b) = ((self.lhs)(*p), (self.rhs)(*p));
                (a[0] - b[0]).abs().max((a[1] - b[1]).abs())
            })
            .fold(0.0, f64::max)
    }
}

fn nf(label: ClassLabel, p: Point) -> Point {
    label.normal_form().evaluate(&p)
}

pub fn group_identities() -> Vec<PolynomialIdentity> {
    vec![
        PolynomialIdentity {
            class: SmoothClass::Fold,
            statement: "DP2 = k1 . DE1",
            lhs: |p| nf(ClassLabel::DP2, p),
            rhs: |p| k1(nf(ClassLabel::DE1, p)),
        },
        PolynomialIdentity {
            class: SmoothClass::Fold,
            statement: "DP2 = k2 . DH1",
            lhs: |p| nf(ClassLabel::DP2, p),
            rhs: |p| k2(nf(ClassLabel::DH1, p)),
        },
        PolynomialIdentity {
            class: SmoothClass::Projection,
            statement: "DP3 . h = (x, 0)",
            lhs: |p| nf(ClassLabel::DP3, shear(p)),
            rhs: |p| [p[0], 0.0],
        },
        PolynomialIdentity {
            class: SmoothClass::Projection,
            statement: "k . DP4 = (x, 0)",
            lhs: |p| shear(nf(ClassLabel::DP4, p)),
            rhs: |p| [p[0], 0.0],
        },
    ]
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn fifteen_each() {
        let c: BTreeSet<_> = ClassLabel::ALL.iter().map(|l| critical_set_class_of(*l)).collect();
        assert_eq!(c.len(), 15);
        let s: BTreeSet<_> = ClassLabel::ALL.iter().map(|l| smooth_class_of(*l)).collect();
        assert_eq!(s.len(), 15);
        assert_eq!(SmoothClass::Fold.members(), vec![ClassLabel::DE1, ClassLabel::DH1, ClassLabel::DP2]);
        assert_eq!(SmoothClass::Projection.members(), vec![ClassLabel::DP3, ClassLabel::DP4]);
        assert!(SmoothClass::E1.identities().is_empty());
    }

    #[test]
    fn identities_hold() {
        let pts: Vec<Point> = (0..50).map(|i| [0.37 * i as f64 - 9.0, 1.3 - 0.11 * i as f64]).collect();
        for id in group_identities() {
            assert!(id.max_error(&pts) <= 1e-12, "{}", id.statement);
        }
    }
}
