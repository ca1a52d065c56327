//! Invariants of the eighteen classes: preimage cardinalities, range
//! convexity, injectivity on `J0`, separating invariants, the coarser
//! critical-set and smooth classifications, and the quadratic inverse of
//! `DP1` maps.

mod collapse;
mod convexity;
mod inverse;
mod preimage;
mod separate;

pub use collapse::{
    critical_set_class_of, group_identities, smooth_class_of, PolynomialIdentity, SmoothClass,
};
pub use convexity::{
    closed_form_range, range_convexity, range_convexity_with, ClosedFormRange, Convexity,
};
pub use inverse::{injective_on_critical_set, injective_on_critical_set_with, quadratic_inverse};
pub use preimage::{
    preimage, preimage_count, preimage_count_with, preimage_profile, profile_targets, Preimage,
    PreimageCardinality, PreimageComponent, PreimageProfile, Topology,
};
pub use separate::{distinguishing_invariant, InvariantReport, LabelInvariants, SeparatingInvariant};

use std::fmt;

use serde::{Deserialize, Serialize};

/// One entry of a preimage-cardinality profile.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ProfileValue {
    Finite(u8),
    Infinite,
}

impl fmt::Display for ProfileValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProfileValue::Finite(n) => write!(f, "{n}"),
            ProfileValue::Infinite => f.write_str("\u{221e}"),
        }
    }
}
