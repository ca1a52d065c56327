//! The eighteen class labels, their normal forms and their table rows.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::algebra::QuadraticMap;
use crate::analyze::ProfileValue;
use crate::critical::{ConicKind, CriticalSetClass, J1Description};
use crate::error::Error;

/// Homogeneous family, named after the homogeneous normal form.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    /// `(x² − y², xy)`
    Elliptic,
    /// `(x² + y², xy)`
    Hyperbolic,
    /// `(x², xy)`
    Parabolic,
    /// `(x² − y², 0)`
    DegenerateElliptic,
    /// `(x² + y², 0)`
    DegenerateHyperbolic,
    /// `(x², 0)`
    DegenerateParabolic,
}

impl Family {
    /// Label of the homogeneous normal form.
    pub fn homogeneous_label(self) -> ClassLabel {
        match self {
            Family::Elliptic => ClassLabel::E2,
            Family::Hyperbolic => ClassLabel::H3,
            Family::Parabolic => ClassLabel::P3,
            Family::DegenerateElliptic => ClassLabel::DE3,
            Family::DegenerateHyperbolic => ClassLabel::DH2,
            Family::DegenerateParabolic => ClassLabel::DP5,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClassLabel {
    E1,
    E2,
    H1,
    H2,
    H3,
    P1,
    P2,
    P3,
    DE1,
    DE2,
    DE3,
    DH1,
    DH2,
    DP1,
    DP2,
    DP3,
    DP4,
    DP5,
}

use ClassLabel::*;

impl ClassLabel {
    pub const ALL: [ClassLabel; 18] = [
        E1, E2, H1, H2, H3, P1, P2, P3, DE1, DE2, DE3, DH1, DH2, DP1, DP2, DP3, DP4, DP5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            E1 => "E1",
            E2 => "E2",
            H1 => "H1",
            H2 => "H2",
            H3 => "H3",
            P1 => "P1",
            P2 => "P2",
            P3 => "P3",
            DE1 => "DE1",
            DE2 => "DE2",
            DE3 => "DE3",
            DH1 => "DH1",
            DH2 => "DH2",
            DP1 => "DP1",
            DP2 => "DP2",
            DP3 => "DP3",
            DP4 => "DP4",
            DP5 => "DP5",
        }
    }

    pub fn family(self) -> Family {
        match self {
            E1 | E2 => Family::Elliptic,
            H1 | H2 | H3 => Family::Hyperbolic,
            P1 | P2 | P3 => Family::Parabolic,
            DE1 | DE2 | DE3 => Family::DegenerateElliptic,
            DH1 | DH2 => Family::DegenerateHyperbolic,
            DP1 | DP2 | DP3 | DP4 | DP5 => Family::DegenerateParabolic,
        }
    }

    /// Normal-form coefficients in the order a20..b00.
    pub fn coefficients(self) -> [f64; 12] {
        let h = 0.5;
        match self {
            E1 => [1., 0., -1., 1., 0., 0., 0., 1., 0., 0., 0., 0.],
            E2 => [1., 0., -1., 0., 0., 0., 0., 1., 0., 0., 0., 0.],
            H1 => [1., 0., 1., 1., 0., 0., 0., 1., 0., 0., 0., 0.],
            H2 => [1., 0., 1., 1., 0., 0., 0., 1., 0., h, 0., 0.],
            H3 => [1., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0.],
            P1 => [1., 0., 0., 0., 1., 0., 0., 1., 0., 0., 0., 0.],
            P2 => [1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 1., 0.],
            P3 => [1., 0., 0., 0., 0., 0., 0., 1., 0., 0., 0., 0.],
            DE1 => [1., 0., -1., 0., 0., 0., 0., 0., 0., 0., 1., 0.],
            DE2 => [1., 0., -1., 0., 0., 0., 0., 0., 0., 1., 1., 0.],
            DE3 => [1., 0., -1., 0., 0., 0., 0., 0., 0., 0., 0., 0.],
            DH1 => [1., 0., 1., 0., 0., 0., 0., 0., 0., 0., 1., 0.],
            DH2 => [1., 0., 1., 0., 0., 0., 0., 0., 0., 0., 0., 0.],
            DP1 => [1., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0.],
            DP2 => [1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 1., 0.],
            DP3 => [1., 0., 0., 0., 1., 0., 0., 0., 0., 0., 0., 0.],
            DP4 => [1., 0., 0., 0., 0., 0., 0., 0., 0., 1., 0., 0.],
            DP5 => [1., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0., 0.],
        }
    }

    pub fn normal_form(self) -> QuadraticMap {
        QuadraticMap::new(self.coefficients())
    }

    /// Normal form as a formula, e.g. `(x^2-y^2+x, xy)`.
    pub fn formula(self) -> &'static str {
        match self {
            E1 => "(x^2-y^2+x, xy)",
            E2 => "(x^2-y^2, xy)",
            H1 => "(x^2+y^2+x, xy)",
            H2 => "(x^2+y^2+x, xy+x/2)",
            H3 => "(x^2+y^2, xy)",
            P1 => "(x^2+y, xy)",
            P2 => "(x^2, xy+y)",
            P3 => "(x^2, xy)",
            DE1 => "(x^2-y^2, y)",
            DE2 => "(x^2-y^2, x+y)",
            DE3 => "(x^2-y^2, 0)",
            DH1 => "(x^2+y^2, y)",
            DH2 => "(x^2+y^2, 0)",
            DP1 => "(x^2+y, x)",
            DP2 => "(x^2, y)",
            DP3 => "(x^2+y, 0)",
            DP4 => "(x^2, x)",
            DP5 => "(x^2, 0)",
        }
    }

    /// Kind of the critical set of the normal form.
    pub fn j0_kind(self) -> ConicKind {
        match self {
            E1 => ConicKind::Ellipse,
            E2 => ConicKind::Point,
            H1 => ConicKind::Hyperbola,
            H2 | H3 => ConicKind::IntersectingLines,
            P1 => ConicKind::Parabola,
            P2 => ConicKind::ParallelLines,
            P3 => ConicKind::CoincidentLines,
            DE1 | DE2 | DH1 | DP2 => ConicKind::SingleLine,
            DE3 | DH2 | DP3 | DP4 | DP5 => ConicKind::AllPlane,
            DP1 => ConicKind::Empty,
        }
    }

    pub fn j1_description(self) -> J1Description {
        use J1Description as J;
        match self {
            E1 => J::ThreeCuspedCurve,
            E2 | P3 | DE2 => J::Point,
            H1 => J::TwoCurvesOneCusp,
            H2 => J::ParabolaAndRay,
            H3 => J::RayAndRay,
            P1 => J::CurveWithCusp,
            P2 => J::LineAndPoint,
            DE1 | DH1 | DP4 => J::Parabola,
            DE3 | DP2 | DP3 => J::Line,
            DH2 | DP5 => J::Ray,
            DP1 => J::Empty,
        }
    }

    pub fn critical_set_class(self) -> CriticalSetClass {
        use CriticalSetClass as C;
        match self {
            E1 => C::C3,
            E2 => C::C2,
            H1 => C::C4,
            H2 => C::C5b,
            H3 => C::C5a,
            P1 => C::C6,
            P2 => C::C7a,
            P3 => C::C7b,
            DE1 | DH1 => C::C8c,
            DE2 => C::C8a,
            DP2 => C::C8b,
            DE3 | DP3 => C::C9a,
            DH2 | DP5 => C::C9b,
            DP4 => C::C9c,
            DP1 => C::C1,
        }
    }

    /// Preimage cardinalities listed for the class.
    pub fn table_profile(self) -> Vec<ProfileValue> {
        use ProfileValue::{Finite as F, Infinite as I};
        match self {
            E1 => vec![F(2), F(3), F(4)],
            E2 => vec![F(1), F(2)],
            H1 | H2 => vec![F(0), F(1), F(2), F(3), F(4)],
            H3 => vec![F(0), F(1), F(2), F(4)],
            P1 => vec![F(1), F(2), F(3)],
            P2 => vec![F(0), F(1), F(2), I],
            P3 => vec![F(0), F(2), I],
            DE1 | DH1 | DP2 => vec![F(0), F(1), F(2)],
            DE2 | DH2 => vec![F(0), F(1), I],
            DE3 | DP3 | DP4 | DP5 => vec![F(0), I],
            DP1 => vec![F(1)],
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ClassLabel {
    type Err = Error;

    /// Accepts `DE1`, `D^E_1`, `de1` and similar spellings.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key: String = s
            .chars()
            .filter(|c| c.is_ascii_alphanumeric())
            .map(|c| c.to_ascii_uppercase())
            .collect();
        ClassLabel::ALL
            .into_iter()
            .find(|l| l.name() == key)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown class label {s:?}")))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for l in ClassLabel::ALL {
            assert_eq!(l.name().parse::<ClassLabel>().unwrap(), l);
        }
        assert_eq!("D^P_4".parse::<ClassLabel>().unwrap(), DP4);
        assert!("Q7".parse::<ClassLabel>().is_err());
    }

    #[test]
    fn families_have_homogeneous_members() {
        for l in ClassLabel::ALL {
            let h = l.family().homogeneous_label();
            assert_eq!(h.family(), l.family());
            let nf = l.normal_form().homogeneous_part().as_map();
            assert_eq!(nf, h.normal_form(), "{l}");
        }
    }
}
