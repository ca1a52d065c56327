use serde::{Deserialize, Serialize};

use crate::algebra::QuadraticMap;
use crate::normalize::ClassLabel;
use crate::scalar::{format_rational, parse_rational, Rational};

use super::CliError;

pub const COEFFICIENT_KEYS: [&str; 12] =
    ["a20", "a11", "a02", "a10", "a01", "a00", "b20", "b11", "b02", "b10", "b01", "b00"];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    #[default]
    Float,
    Exact,
}

/// A coefficient as written: a JSON number or a string such as `"3/7"`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Coefficient {
    Number(f64),
    Text(String),
}

impl Default for Coefficient {
    fn default() -> Self {
        Coefficient::Number(0.0)
    }
}

impl Coefficient {
    pub fn to_rational(&self) -> Result<Rational, CliError> {
        match self {
            Coefficient::Number(v) => {
                Rational::from_float(*v).ok_or_else(|| CliError::domain(format!("non-finite coefficient {v}")))
            }
            Coefficient::Text(s) => {
                parse_rational(s).ok_or_else(|| CliError::parse(format!("not a number: {s:?}")))
            }
        }
    }

    pub fn to_f64(&self) -> Result<f64, CliError> {
        let v = match self {
            Coefficient::Number(v) => *v,
            Coefficient::Text(s) => {
                let r = parse_rational(s).ok_or_else(|| CliError::parse(format!("not a number: {s:?}")))?;
                num_traits::ToPrimitive::to_f64(&r).unwrap_or(f64::NAN)
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(CliError::domain(format!("non-finite coefficient {v}")))
        }
    }
}

/// Input map.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapSpec {
    #[serde(default)]
    pub a20: Coefficient,
    #[serde(default)]
    pub a11: Coefficient,
    #[serde(default)]
    pub a02: Coefficient,
    #[serde(default)]
    pub a10: Coefficient,
    #[serde(default)]
    pub a01: Coefficient,
    #[serde(default)]
    pub a00: Coefficient,
    #[serde(default)]
    pub b20: Coefficient,
    #[serde(default)]
    pub b11: Coefficient,
    #[serde(default)]
    pub b02: Coefficient,
    #[serde(default)]
    pub b10: Coefficient,
    #[serde(default)]
    pub b01: Coefficient,
    #[serde(default)]
    pub b00: Coefficient,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<ClassLabel>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
}

impl MapSpec {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::parse(format!("invalid map spec: {e}")))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("map spec serializes")
    }

    pub fn from_f64s(c: [f64; 12]) -> Self {
        Self::from_coefficients(c.map(Coefficient::Number))
    }

    pub fn from_rationals(c: &[Rational; 12]) -> Self {
        Self::from_coefficients(std::array::from_fn(|i| Coefficient::Text(format_rational(&c[i]))))
    }

    fn from_coefficients(c: [Coefficient; 12]) -> Self {
        let [a20, a11, a02, a10, a01, a00, b20, b11, b02, b10, b01, b00] = c;
        Self { a20, a11, a02, a10, a01, a00, b20, b11, b02, b10, b01, b00, label: None, mode: None }
    }

    /// Twelve comma or whitespace separated values in coefficient order.
    pub fn parse_inline(text: &str) -> Result<Self, CliError> {
        let parts: Vec<&str> = text.split([',', ' ', '\t', '\n']).filter(|s| !s.is_empty()).collect();
        if parts.len() != 12 {
            return Err(CliError::parse(format!("expected 12 coefficients, got {}", parts.len())));
        }
        let mut c: [Coefficient; 12] = Default::default();
        for (slot, p) in c.iter_mut().zip(&parts) {
            *slot = match p.parse::<f64>() {
                Ok(v) if !p.contains('/') => Coefficient::Number(v),
                _ => {
                    parse_rational(p).ok_or_else(|| CliError::parse(format!("not a number: {p:?}")))?;
                    Coefficient::Text(p.to_string())
                }
            };
        }
        Ok(Self::from_coefficients(c))
    }

    pub fn coefficients(&self) -> [&Coefficient; 12] {
        [
            &self.a20, &self.a11, &self.a02, &self.a10, &self.a01, &self.a00, &self.b20, &self.b11,
            &self.b02, &self.b10, &self.b01, &self.b00,
        ]
    }

    pub fn mode(&self) -> Mode {
        self.mode.unwrap_or_default()
    }

    pub fn to_map(&self) -> Result<QuadraticMap, CliError> {
        let mut c = [0.0; 12];
        for (slot, v) in c.iter_mut().zip(self.coefficients()) {
            *slot = v.to_f64()?;
        }
        Ok(QuadraticMap::new(c))
    }

    pub fn to_exact_map(&self) -> Result<QuadraticMap<Rational>, CliError> {
        let mut c: Vec<Rational> = Vec::with_capacity(12);
        for v in self.coefficients() {
            c.push(v.to_rational()?);
        }
        let c: [Rational; 12] = c.try_into().expect("twelve coefficients");
        Ok(QuadraticMap::new(c))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn missing_keys_are_zero_and_fractions_parse() {
        let s = MapSpec::from_json(r#"{"a20": 1, "b11": "1/2", "label": "H3"}"#).unwrap();
        assert_eq!(s.to_map().unwrap().to_array(), [1., 0., 0., 0., 0., 0., 0., 0.5, 0., 0., 0., 0.]);
        assert_eq!(s.label, Some(ClassLabel::H3));
        let exact = s.to_exact_map().unwrap();
        assert_eq!(exact.b11, Rational::new(1.into(), 2.into()));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(MapSpec::from_json(r#"{"a30": 1}"#).is_err());
        assert!(MapSpec::from_json(r#"{"a20": "x"}"#).unwrap().to_map().is_err());
    }

    #[test]
    fn inline_coefficients() {
        let s = MapSpec::parse_inline("1,0,-1,1,0,0, 0,1,0,0,0,1/3").unwrap();
        assert_eq!(s.b00, Coefficient::Text("1/3".into()));
        assert_eq!(s.a02, Coefficient::Number(-1.0));
        assert!(MapSpec::parse_inline("1,2,3").is_err());
    }

    #[test]
    fn json_round_trip() {
        let mut s = MapSpec::parse_inline("1 0 -1 1 0 0 0 1 0 0 0 2/7").unwrap();
        s.mode = Some(Mode::Exact);
        assert_eq!(MapSpec::from_json(&s.to_json()).unwrap(), s);
    }
}
