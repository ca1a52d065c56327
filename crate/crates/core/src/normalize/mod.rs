//! Reduction of a quadratic map to one of eighteen normal forms, with
//! verified affine witnesses.

mod invariant;
mod label;
mod longcase;
mod reduce;

pub use invariant::{family_of, invariant_label};
pub use label::{ClassLabel, Family};
pub use longcase::{
    elliptic_cubic, find_positive_cubic_root, hyperbolic_cubic, solve_elliptic_longcase,
    solve_hyperbolic_longcase, LongCaseKind, LongCaseSolution, EQUATION_TOL,
};
pub use reduce::{reduce_homogeneous, TraceStep, WitnessPair};

use serde::{Deserialize, Serialize};

use crate::algebra::{compose, QuadraticMap};
use crate::error::{Error, Result};
use crate::scalar::{Rational, Tolerance};

use reduce::{family_chain, homogeneous_chain, Reducer};

/// Witness residuals up to `RESIDUAL_REL · max(1, scale(Q))` are accepted.
pub const RESIDUAL_REL: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifySettings {
    pub tol: Tolerance,
    pub residual_rel: f64,
}

impl Default for ClassifySettings {
    fn default() -> Self {
        Self { tol: Tolerance::default(), residual_rel: RESIDUAL_REL }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ClassificationResult {
    pub label: ClassLabel,
    pub witness: WitnessPair,
    pub residual: f64,
    pub trace: Vec<TraceStep>,
}

pub fn classify(q: &QuadraticMap) -> Result<ClassificationResult> {
    classify_with(q, ClassifySettings::default())
}

pub fn classify_with(q: &QuadraticMap, settings: ClassifySettings) -> Result<ClassificationResult> {
    if q.to_array().iter().any(|v| !v.is_finite()) {
        return Err(Error::InvalidArgument("non-finite coefficient".into()));
    }
    let label = invariant_label(q, settings.tol)?;
    // the conic test can miss the intersecting-lines case by a rounding
    // error that the long case then trips over at b10 = ±½
    witness_for(q, label, settings).or_else(|e| match label {
        ClassLabel::H1 => witness_for(q, ClassLabel::H2, settings).map_err(|_| e),
        _ => Err(e),
    })
}

/// Decides the label in exact arithmetic; the witnesses are still built
/// and verified in floating point.
pub fn classify_exact(q: &QuadraticMap<Rational>) -> Result<ClassificationResult> {
    let settings = ClassifySettings::default();
    let label = invariant_label(q, settings.tol)?;
    witness_for(&q.to_f64(), label, settings)
}

/// Builds witnesses taking `q` to the normal form of `label` and verifies
/// them.
pub fn witness_for(
    q: &QuadraticMap,
    label: ClassLabel,
    settings: ClassifySettings,
) -> Result<ClassificationResult> {
    let mut r = Reducer::new(q.clone(), settings.tol);
    let built = homogeneous_chain(&mut r, label.family())
        .and_then(|_| family_chain(&mut r, label))
        .and_then(|_| r.clear_constants());
    let limit = settings.residual_rel * q.scale().max(1.0);
    if let Err(e) = built {
        r.note(format!("reduction failed: {e}"));
        return Err(Error::Verification { label, residual: f64::INFINITY, limit, trace: r.trace });
    }
    let witness = WitnessPair { h: r.h, k: r.k };
    let residual = verify_witness(q, label, &witness);
    if !(residual <= limit) {
        return Err(Error::Verification { label, residual, limit, trace: r.trace });
    }
    Ok(ClassificationResult { label, witness, residual, trace: r.trace })
}

/// `max |coef(k ∘ Q ∘ h⁻¹) − coef(N)|`, constants ignored.
pub fn verify_witness(q: &QuadraticMap, label: ClassLabel, w: &WitnessPair) -> f64 {
    match compose(&w.k, q, &w.h) {
        Ok(m) => m.max_deviation_ignoring_constants(&label.normal_form()),
        Err(_) => f64::INFINITY,
    }
}

#[cfg(test)]
mod tests;
