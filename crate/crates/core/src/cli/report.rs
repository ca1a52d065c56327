use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{AffineMap2, QuadraticMap};
use crate::analyze::{preimage_profile, quadratic_inverse, smooth_class_of, ProfileValue, SmoothClass};
use crate::critical::{analyze_critical_image, ConicKind, CriticalSetClass, J1Description};
use crate::normalize::{classify_exact, classify_with, ClassLabel, ClassificationResult, TraceStep};

use super::{CliError, ErrorKind, MapSpec, Mode, Options};

/// Targets sampled for the preimage profile.
pub const PROFILE_TARGETS: usize = 240;

/// Samples per critical-set component.
const IMAGE_SAMPLES: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    /// Domain change `h`, as `[m11, m12, m21, m22, t1, t2]`.
    pub h: [f64; 6],
    /// Range change `k`.
    pub k: [f64; 6],
}

/// Everything computed for one map.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub input: MapSpec,
    pub mode: Mode,
    pub seed: u64,
    pub label: ClassLabel,
    pub normal_form: String,
    /// Whether the label hint in the input agrees, when one was given.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub hint_matches: Option<bool>,
    pub witness: WitnessReport,
    pub residual: f64,
    pub j0: ConicKind,
    pub j0_description: String,
    pub j1: J1Description,
    pub j1_description: String,
    pub critical_set_class: CriticalSetClass,
    pub smooth_class: SmoothClass,
    pub profile: Vec<ProfileValue>,
    /// Inverse map, for the bijective class only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub inverse: Option<QuadraticMap>,
    pub trace: Vec<TraceStep>,
}

impl Report {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid report: {e}")))
    }
}

fn witness_report(h: &AffineMap2, k: &AffineMap2) -> WitnessReport {
    WitnessReport { h: h.to_array(), k: k.to_array() }
}

pub fn cmd_classify(spec: &MapSpec, opts: &Options) -> Result<Report, CliError> {
    let mode = if opts.exact { Mode::Exact } else { spec.mode() };
    let (q, result): (QuadraticMap, ClassificationResult) = match mode {
        Mode::Float => {
            let q = spec.to_map()?;
            let r = classify_with(&q, opts.settings())?;
            (q, r)
        }
        Mode::Exact => {
            let exact = spec.to_exact_map()?;
            let r = classify_exact(&exact)?;
            (exact.to_f64(), r)
        }
    };
    let tol = opts.tolerance();
    let image = analyze_critical_image(&q, IMAGE_SAMPLES, tol);
    let critical_set_class = crate::critical::j0j1_class_with(&q, tol);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let profile = preimage_profile(&q, PROFILE_TARGETS, &mut rng).values();
    let inverse = match result.label {
        ClassLabel::DP1 => Some(quadratic_inverse(&q).map_err(|e| CliError {
            kind: ErrorKind::Verification,
            message: format!("inverse: {e}"),
        })?),
        _ => None,
    };
    let (j0_description, _) = critical_set_class.description();
    Ok(Report {
        input: spec.clone(),
        mode,
        seed: opts.seed,
        label: result.label,
        normal_form: result.label.formula().to_string(),
        hint_matches: spec.label.map(|l| l == result.label),
        witness: witness_report(&result.witness.h, &result.witness.k),
        residual: result.residual,
        j0: image.j0.kind,
        j0_description: j0_description.to_string(),
        j1: image.description,
        j1_description: image.description.name().to_string(),
        critical_set_class,
        smooth_class: smooth_class_of(result.label),
        profile,
        inverse,
        trace: result.trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn normal_form_report() {
        let r = cmd_classify(&MapSpec::from_f64s(ClassLabel::E1.coefficients()), &Options::default()).unwrap();
        assert_eq!(r.label, ClassLabel::E1);
        assert_eq!(r.residual, 0.0);
        assert_eq!(r.j1, J1Description::ThreeCuspedCurve);
        assert_eq!(r.profile, ClassLabel::E1.table_profile());
        assert!(r.inverse.is_none());
    }

    #[test]
    fn report_round_trips() {
        let spec = MapSpec::parse_inline("1 0 0 0 1 0 0 0 0 1 0 0").unwrap();
        let r = cmd_classify(&spec, &Options::default()).unwrap();
        assert_eq!(r.label, ClassLabel::DP1);
        assert!(r.inverse.is_some());
        assert_eq!(Report::from_json(&r.to_json()).unwrap(), r);
    }

    #[test]
    fn exit_codes() {
        let zero = MapSpec::parse_inline("0 0 0 1 0 0 0 0 0 0 1 0").unwrap();
        assert_eq!(cmd_classify(&zero, &Options::default()).unwrap_err().exit_code(), 3);
        assert_eq!(MapSpec::from_json("{").unwrap_err().exit_code(), 2);
    }
}
