//! JSON state files.
//!
//! Two shapes are accepted:
//!
//! ```text
//! {"dims": [2, 2], "matrix": [[{"re": 0.5, "im": 0.0}, ...], ...]}
//! {"preset": "mdms", "epsilon": 0.5, "theta": 0.1, "phi": 0.0}
//! ```
//!
//! Saved numbers carry 17 significant digits, so `load(save(d))` reproduces
//! every entry bit for bit.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::Deserialize;

use super::{DensityMatrix, Preset, PresetParams};
use crate::error::{Error, Result};
use crate::numerics::ComplexMatrix;

#[derive(Debug, Clone, PartialEq)]
pub enum StateSpec {
    Explicit { dims: Vec<usize>, matrix: ComplexMatrix },
    Preset(Preset),
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpec {
    dims: Option<Vec<usize>>,
    matrix: Option<Vec<Vec<Entry>>>,
    preset: Option<String>,
    epsilon: Option<f64>,
    theta: Option<f64>,
    phi: Option<f64>,
    qubits: Option<usize>,
    probabilities: Option<Vec<f64>>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct Entry {
    re: f64,
    im: f64,
}

fn field_error(field: &str, message: impl Into<String>) -> Error {
    Error::Parse {
        context: format!("field `{field}`"),
        message: message.into(),
    }
}

impl StateSpec {
    pub fn parse(text: &str) -> Result<Self> {
        let raw: RawSpec = serde_json::from_str(text).map_err(|e| Error::Parse {
            context: format!("line {}, column {}", e.line(), e.column()),
            message: e.to_string(),
        })?;

        let params = PresetParams {
            epsilon: raw.epsilon,
            theta: raw.theta,
            phi: raw.phi,
            qubits: raw.qubits,
            dims: None,
            probabilities: raw.probabilities,
        };
        if let Some(name) = raw.preset {
            if raw.matrix.is_some() {
                return Err(field_error("matrix", "not allowed together with `preset`"));
            }
            let params = PresetParams {
                dims: raw.dims,
                ..params
            };
            return Ok(StateSpec::Preset(Preset::from_name(&name, &params)?));
        }

        if params != PresetParams::default() {
            return Err(field_error("preset", "preset parameters given without a preset name"));
        }
        let dims = raw.dims.ok_or_else(|| field_error("dims", "missing"))?;
        let rows = raw.matrix.ok_or_else(|| field_error("matrix", "missing"))?;
        let n = rows.len();
        let mut entries = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(field_error(
                    &format!("matrix[{i}]"),
                    format!("row has {} entries, expected {n}", row.len()),
                ));
            }
            entries.extend(row.into_iter().map(|e| Complex64::new(e.re, e.im)));
        }
        let matrix = ComplexMatrix::from_vec(n, n, entries)?;
        let total: usize = dims.iter().product();
        if total != n {
            return Err(Error::DimensionMismatch(format!(
                "dims {dims:?} (product {total}) vs {n}x{n} matrix"
            )));
        }
        Ok(StateSpec::Explicit { dims, matrix })
    }

    pub fn build(&self) -> Result<DensityMatrix> {
        match self {
            StateSpec::Explicit { dims, matrix } => DensityMatrix::new(dims.clone(), matrix.clone()),
            StateSpec::Preset(p) => p.build(),
        }
    }

    pub fn to_json(&self) -> String {
        match self {
            StateSpec::Explicit { dims, matrix } => explicit_json(dims, matrix),
            StateSpec::Preset(p) => {
                let mut out = format!("{{\"preset\": \"{}\"", p.name());
                match p {
                    Preset::Mdms { epsilon, theta, phi } => {
                        let _ = write!(
                            out,
                            ", \"epsilon\": {}, \"theta\": {}, \"phi\": {}",
                            num(*epsilon),
                            num(*theta),
                            num(*phi)
                        );
                    }
                    Preset::Ghz { qubits } => {
                        let _ = write!(out, ", \"qubits\": {qubits}");
                    }
                    Preset::Diagonal { dims, probabilities } => {
                        let probs: Vec<String> = probabilities.iter().map(|&p| num(p)).collect();
                        let _ = write!(out, ", \"dims\": {dims:?}, \"probabilities\": [{}]", probs.join(", "));
                    }
                    _ => {}
                }
                out.push('}');
                out
            }
        }
    }
}

/// 17 significant digits in JSON-compatible exponent notation.
fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn explicit_json(dims: &[usize], m: &ComplexMatrix) -> String {
    let mut out = format!("{{\n  \"dims\": {dims:?},\n  \"matrix\": [\n");
    for r in 0..m.rows() {
        let cells: Vec<String> = m
            .row(r)
            .iter()
            .map(|z| format!("{{\"re\": {}, \"im\": {}}}", num(z.re), num(z.im)))
            .collect();
        let sep = if r + 1 < m.rows() { "," } else { "" };
        let _ = writeln!(out, "    [{}]{sep}", cells.join(", "));
    }
    out.push_str("  ]\n}\n");
    out
}

/// Parses a state file and validates the result.
pub fn load(text: &str) -> Result<DensityMatrix> {
    StateSpec::parse(text)?.build()
}

/// Explicit-matrix form of `d`.
pub fn save(d: &DensityMatrix) -> String {
    explicit_json(d.dims(), d.matrix())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn save_then_load_maximally_mixed() {
        let d = DensityMatrix::new(vec![2, 2], ComplexMatrix::from_diag(&[0.25; 4])).unwrap();
        let back = load(&save(&d)).unwrap();
        assert_eq!(back, d);
    }

    #[test]
    fn qubit_qutrit_state() {
        let mut rows = Vec::new();
        for r in 0..6 {
            let cells: Vec<String> = (0..6)
                .map(|c| {
                    let re = if r == c { 1.0 / 6.0 } else { 0.0 };
                    format!("{{\"re\": {re}, \"im\": 0}}")
                })
                .collect();
            rows.push(format!("[{}]", cells.join(",")));
        }
        let text = format!("{{\"dims\": [2, 3], \"matrix\": [{}]}}", rows.join(","));
        let d = load(&text).unwrap();
        assert_eq!(d.dims(), &[2, 3]);
    }

    #[test]
    fn dims_product_must_match() {
        let text = r#"{"dims": [2, 3], "matrix": [[{"re": 1, "im": 0}, {"re": 0, "im": 0}],
                                                 [{"re": 0, "im": 0}, {"re": 0, "im": 0}]]}"#;
        assert!(matches!(load(text), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn syntax_errors_carry_position() {
        let err = load("{\n  \"dims\": [2,\n  }").unwrap_err();
        match err {
            Error::Parse { context, .. } => assert!(context.starts_with("line 3"), "{context}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn ragged_rows_name_the_row() {
        let text = r#"{"dims": [2], "matrix": [[{"re": 1, "im": 0}, {"re": 0, "im": 0}], [{"re": 0, "im": 0}]]}"#;
        match load(text).unwrap_err() {
            Error::Parse { context, .. } => assert_eq!(context, "field `matrix[1]`"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn invalid_trace_is_a_validation_error() {
        let text = r#"{"dims": [2], "matrix": [[{"re": 1, "im": 0}, {"re": 0, "im": 0}], [{"re": 0, "im": 0}, {"re": 0.5, "im": 0}]]}"#;
        match load(text).unwrap_err() {
            Error::Validation(report) => {
                assert!((report.trace_violation().unwrap() - 0.5).abs() < 1e-15)
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn preset_spec() {
        let d = load(r#"{"preset": "mdms", "epsilon": 1.0, "theta": 0.0, "phi": 0.0}"#).unwrap();
        let bell = Preset::Bell.build().unwrap();
        assert!(d.matrix().max_abs_diff(bell.matrix()) < 1e-15);

        let spec = StateSpec::Preset(Preset::mdms(0.3, 0.2, 0.1).unwrap());
        assert_eq!(StateSpec::parse(&spec.to_json()).unwrap(), spec);

        assert!(matches!(
            load(r#"{"preset": "mdms", "epsilon": 2.0}"#),
            Err(Error::BadParams(_))
        ));
        assert!(matches!(load(r#"{"preset": "nope"}"#), Err(Error::UnknownPreset(_))));
        assert!(matches!(load(r#"{"epsilon": 0.5}"#), Err(Error::Parse { .. })));
    }
}
