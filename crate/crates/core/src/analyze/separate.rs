//! Invariants that tell two classes apart.

use std::collections::BTreeSet;
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::QuadraticMap;
use crate::critical::{analyze_critical_image, critical_conic, ConicKind, J1Description};
use crate::error::{Error, Result};
use crate::normalize::ClassLabel;
use crate::scalar::Tolerance;

use super::convexity::range_convexity;
use super::preimage::{preimage_profile, PreimageComponent, Topology};
use super::ProfileValue;

/// Targets per profile when separating classes.
const PROFILE_TARGETS: usize = 240;

/// In the order in which they are tried.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SeparatingInvariant {
    /// `J0` as a set.
    CriticalSet,
    /// Shape of `J1`.
    CriticalImage,
    /// Single versus double line `J0`.
    LineMultiplicity,
    /// Topology of infinite preimages.
    PreimageTopology,
    /// Set of preimage cardinalities.
    PreimageProfile,
    /// Convexity of the range.
    RangeConvexity,
}

impl SeparatingInvariant {
    pub fn name(self) -> &'static str {
        match self {
            SeparatingInvariant::CriticalSet => "critical set",
            SeparatingInvariant::CriticalImage => "critical image",
            SeparatingInvariant::LineMultiplicity => "single vs double line",
            SeparatingInvariant::PreimageTopology => "preimage topology",
            SeparatingInvariant::PreimageProfile => "preimage cardinalities",
            SeparatingInvariant::RangeConvexity => "range convexity",
        }
    }
}

impl fmt::Display for SeparatingInvariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Invariants computed from a map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LabelInvariants {
    pub j0: ConicKind,
    pub j1: J1Description,
    pub preimage_components: BTreeSet<PreimageComponent>,
    pub profile: Vec<ProfileValue>,
    pub convex_range: bool,
}

fn set_name(kind: ConicKind) -> &'static str {
    match kind {
        ConicKind::SingleLine | ConicKind::CoincidentLines => "line",
        k => k.name(),
    }
}

fn multiplicity_name(kind: ConicKind) -> &'static str {
    match kind {
        ConicKind::SingleLine => "single line",
        ConicKind::CoincidentLines => "double line",
        k => k.name(),
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    let parts: Vec<String> = items.into_iter().map(|t| t.to_string()).collect();
    format!("{{{}}}", parts.join(", "))
}

impl LabelInvariants {
    /// Deterministic for a fixed `seed`.
    pub fn of(q: &QuadraticMap, seed: u64) -> Self {
        let tol = Tolerance::default();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let profile = preimage_profile(q, PROFILE_TARGETS, &mut rng);
        LabelInvariants {
            j0: critical_conic(q, tol).kind,
            j1: analyze_critical_image(q, 256, tol).description,
            preimage_components: profile.infinite_components(),
            profile: profile.values(),
            convex_range: range_convexity(q, 100).is_convex(),
        }
    }

    pub fn topologies(&self) -> BTreeSet<Topology> {
        self.preimage_components.iter().map(|c| c.topology()).collect()
    }

    /// The value of `invariant`, as reported.
    pub fn describe(&self, invariant: SeparatingInvariant) -> String {
        match invariant {
            SeparatingInvariant::CriticalSet => set_name(self.j0).to_string(),
            SeparatingInvariant::CriticalImage => self.j1.to_string(),
            SeparatingInvariant::LineMultiplicity => multiplicity_name(self.j0).to_string(),
            SeparatingInvariant::PreimageTopology => format!(
                "{} ({})",
                join(self.preimage_components.iter()),
                join(self.topologies())
            ),
            SeparatingInvariant::PreimageProfile => join(self.profile.iter()),
            SeparatingInvariant::RangeConvexity => {
                if self.convex_range { "convex" } else { "not convex" }.to_string()
            }
        }
    }

    pub fn differs(&self, other: &Self, invariant: SeparatingInvariant) -> bool {
        match invariant {
            SeparatingInvariant::CriticalSet => set_name(self.j0) != set_name(other.j0),
            SeparatingInvariant::CriticalImage => self.j1 != other.j1,
            SeparatingInvariant::LineMultiplicity => {
                multiplicity_name(self.j0) != multiplicity_name(other.j0)
            }
            SeparatingInvariant::PreimageTopology => self.topologies() != other.topologies(),
            SeparatingInvariant::PreimageProfile => self.profile != other.profile,
            SeparatingInvariant::RangeConvexity => self.convex_range != other.convex_range,
        }
    }

    /// First invariant on which the two differ.
    pub fn separate(&self, other: &Self) -> Option<SeparatingInvariant> {
        use SeparatingInvariant::*;
        [CriticalSet, CriticalImage, LineMultiplicity, PreimageTopology, PreimageProfile, RangeConvexity]
            .into_iter()
            .find(|i| self.differs(other, *i))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub left: ClassLabel,
    pub right: ClassLabel,
    pub invariant: SeparatingInvariant,
    pub left_value: String,
    pub right_value: String,
}

impl fmt::Display for InvariantReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} vs {}: {} ({} vs {})",
            self.left, self.right, self.invariant, self.left_value, self.right_value
        )
    }
}

/// Separates two distinct classes by an invariant computed on their normal
/// forms.
pub fn distinguishing_invariant(l1: ClassLabel, l2: ClassLabel) -> Result<InvariantReport> {
    if l1 == l2 {
        return Err(Error::InvalidArgument(format!("{l1} compared with itself")));
    }
    let a = LabelInvariants::of(&l1.normal_form(), 0);
    let b = LabelInvariants::of(&l2.normal_form(), 0);
    let invariant = a
        .separate(&b)
        .ok_or_else(|| Error::NotApplicable(format!("no computed invariant separates {l1} and {l2}")))?;
    Ok(InvariantReport {
        left: l1,
        right: l2,
        invariant,
        left_value: a.describe(invariant),
        right_value: b.describe(invariant),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use SeparatingInvariant::*;

    #[test]
    fn named_pairs() {
        use ClassLabel::*;
        let inv = |a, b| distinguishing_invariant(a, b).unwrap().invariant;
        assert_eq!(inv(DE1, DH1), RangeConvexity);
        assert_eq!(inv(DE3, DP3), PreimageTopology);
        assert_eq!(inv(DH2, DP5), PreimageTopology);
        assert_eq!(inv(DE2, P3), LineMultiplicity);
        assert_eq!(inv(E1, H1), CriticalSet);
        assert!(distinguishing_invariant(E1, E1).is_err());
    }
}
