//! Input data model: a contact instance is an oriented link (Poincare dual
//! of half the Euler class of the plane field) together with the sampled
//! `Z`-coefficient function along each component.
//!
//! Only the restriction of the coefficient function to the link is stored;
//! the index depends on the link solely through those samples. The factor 2
//! in the duality `2[L] = PD(e)` is a convention of the data format: the
//! user supplies `L` itself, and the pairing module applies the factor.

use num_complex::Complex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Real;

/// Orientation convention for winding numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
pub enum OrientationConvention {
    /// Counterclockwise loops wind `+1`.
    #[default]
    CounterclockwisePositive,
}

/// A closed discrete loop of complex samples of the coefficient function
/// along one link component. Closure is implicit: the last sample connects
/// back to the first.
#[derive(Debug, Clone, PartialEq)]
pub struct GammaLoop<T> {
    pub name: String,
    pub samples: Vec<Complex<T>>,
}

impl<T: Real> GammaLoop<T> {
    /// Largest sample modulus, zero for an empty sample list.
    pub fn max_abs(&self) -> T {
        self.samples
            .iter()
            .map(|s| s.norm())
            .fold(T::zero(), T::max)
    }
}

/// A contact-3-manifold dataset: link components with sampled coefficient
/// loops. An empty loop list encodes the globally framed case (zero Euler
/// class).
#[derive(Debug, Clone, PartialEq)]
pub struct ContactInstance<T> {
    pub manifold_label: String,
    pub loops: Vec<GammaLoop<T>>,
    pub clearance: T,
    pub orientation: OrientationConvention,
}

impl<T: Real> ContactInstance<T> {
    /// Largest sample modulus over all loops.
    pub fn max_abs_gamma(&self) -> T {
        self.loops
            .iter()
            .map(|l| l.max_abs())
            .fold(T::zero(), T::max)
    }
}

/// Default admission clearance from the odd integers.
pub const DEFAULT_CLEARANCE: f64 = 1e-6;

/// One violated admission rule.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub loop_name: String,
    pub sample_index: Option<usize>,
    pub rule: String,
    pub message: String,
}

/// Outcome of semantic validation. `ok` holds iff `violations` is empty.
#[derive(Debug, Clone, PartialEq)]
pub struct ValidationReport<T> {
    pub ok: bool,
    pub violations: Vec<Violation>,
    pub max_abs_gamma: T,
    pub relevant_odds: Vec<i64>,
}

#[derive(Debug, Error)]
pub enum ParseError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("non-finite numeric literal at line {line}, column {column}")]
    NonFinite { line: usize, column: usize },
    #[error("missing required field: {0}")]
    MissingField(String),
    #[error("invalid document: {0}")]
    Invalid(String),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawInstance {
    manifold: String,
    clearance: f64,
    loops: Vec<RawLoop>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawLoop {
    name: String,
    samples: Vec<[f64; 2]>,
}

/// Parse an instance document (see the JSON format in the crate README).
///
/// Structural parsing only; semantic admission rules are checked by
/// [`validate_instance`]. Unknown keys are rejected.
pub fn parse_instance<T: Real>(text: &str) -> Result<ContactInstance<T>, ParseError> {
    let raw: RawInstance = serde_json::from_str(text).map_err(|e| classify_json_error(text, e))?;
    if !raw.clearance.is_finite() {
        return Err(ParseError::Invalid("non-finite clearance".into()));
    }
    let mut loops = Vec::with_capacity(raw.loops.len());
    for l in raw.loops {
        let mut samples = Vec::with_capacity(l.samples.len());
        for [re, im] in l.samples {
            if !re.is_finite() || !im.is_finite() {
                return Err(ParseError::Invalid(format!(
                    "non-finite sample in loop \"{}\"",
                    l.name
                )));
            }
            samples.push(Complex::new(from_f64::<T>(re), from_f64::<T>(im)));
        }
        loops.push(GammaLoop {
            name: l.name,
            samples,
        });
    }
    Ok(ContactInstance {
        manifold_label: raw.manifold,
        loops,
        clearance: from_f64(raw.clearance),
        orientation: OrientationConvention::CounterclockwisePositive,
    })
}

/// Serialize back to the instance file format. `parse -> serialize -> parse`
/// is the identity on structural content.
pub fn serialize_instance<T: Real>(inst: &ContactInstance<T>) -> String {
    let raw = RawInstance {
        manifold: inst.manifold_label.clone(),
        clearance: to_f64(inst.clearance),
        loops: inst
            .loops
            .iter()
            .map(|l| RawLoop {
                name: l.name.clone(),
                samples: l
                    .samples
                    .iter()
                    .map(|s| [to_f64(s.re), to_f64(s.im)])
                    .collect(),
            })
            .collect(),
    };
    serde_json::to_string_pretty(&raw).expect("instance serialization cannot fail")
}

fn classify_json_error(text: &str, err: serde_json::Error) -> ParseError {
    let (line, column) = (err.line(), err.column());
    let msg = err.to_string();
    if msg.contains("missing field") {
        let field = msg
            .split('`')
            .nth(1)
            .unwrap_or("unknown")
            .to_string();
        return ParseError::MissingField(field);
    }
    // serde_json rejects NaN/Infinity tokens with a generic syntax error;
    // peek at the offending position to give the contract's message.
    if let Some(l) = text.lines().nth(line.saturating_sub(1)) {
        let tail = l
            .get(column.saturating_sub(1)..)
            .unwrap_or("")
            .to_ascii_lowercase();
        if tail.starts_with("nan") || tail.starts_with("inf") || tail.starts_with("-inf") {
            return ParseError::NonFinite { line, column };
        }
    }
    ParseError::Syntax {
        line,
        column,
        message: msg,
    }
}

/// Every odd integer `k` with `|k| <= ceil(max |gamma|)` over all samples.
/// This is a superset of the odd integers with nonzero winding.
pub fn relevant_odd_integers<T: Real>(inst: &ContactInstance<T>) -> Vec<i64> {
    odds_within(inst.max_abs_gamma())
}

pub(crate) fn odds_within<T: Real>(max_abs: T) -> Vec<i64> {
    let bound = max_abs.ceil().to_i64().unwrap_or(0);
    let mut odds: Vec<i64> = (-bound..=bound).filter(|k| k.rem_euclid(2) == 1).collect();
    odds.sort_unstable();
    odds
}

/// Run every admission rule and report all violations. Total: never fails
/// on a structurally valid instance.
pub fn validate_instance<T: Real>(inst: &ContactInstance<T>) -> ValidationReport<T> {
    let mut violations = Vec::new();
    let max_abs = inst.max_abs_gamma();
    let relevant_odds = odds_within(max_abs);

    if !(inst.clearance > T::zero()) {
        violations.push(Violation {
            loop_name: String::new(),
            sample_index: None,
            rule: "positive clearance".into(),
            message: format!("clearance must be > 0, got {}", inst.clearance),
        });
    }

    for lp in &inst.loops {
        if lp.samples.len() < 3 {
            violations.push(Violation {
                loop_name: lp.name.clone(),
                sample_index: None,
                rule: "minimum samples".into(),
                message: format!("loop has {} samples, need at least 3", lp.samples.len()),
            });
            continue;
        }
        for (j, s) in lp.samples.iter().enumerate() {
            if !s.re.is_finite() || !s.im.is_finite() {
                violations.push(Violation {
                    loop_name: lp.name.clone(),
                    sample_index: Some(j),
                    rule: "finite sample".into(),
                    message: "sample has a non-finite component".into(),
                });
                continue;
            }
            let d = distance_to_nearest_odd(*s);
            if d < inst.clearance {
                violations.push(Violation {
                    loop_name: lp.name.clone(),
                    sample_index: Some(j),
                    rule: "odd-integer clearance".into(),
                    message: format!(
                        "sample ({}, {}) is at distance {} from an odd integer (clearance {})",
                        s.re, s.im, d, inst.clearance
                    ),
                });
            }
        }
        // Discrete winding around k is only well defined when consecutive
        // samples subtend an angle < pi as seen from k.
        for &k in &relevant_odds {
            let target = Complex::new(T::from_i64(k).unwrap(), T::zero());
            let n = lp.samples.len();
            for j in 0..n {
                let a = lp.samples[j] - target;
                let b = lp.samples[(j + 1) % n] - target;
                if a.norm() == T::zero() || b.norm() == T::zero() {
                    continue; // already reported by the clearance rule
                }
                let step = (b / a).arg();
                if !(step.abs() < T::PI()) {
                    violations.push(Violation {
                        loop_name: lp.name.clone(),
                        sample_index: Some(j),
                        rule: "sampling adequacy".into(),
                        message: format!(
                            "angular step at sample {} around k={} is not < pi",
                            j, k
                        ),
                    });
                }
            }
        }
    }

    ValidationReport {
        ok: violations.is_empty(),
        violations,
        max_abs_gamma: max_abs,
        relevant_odds,
    }
}

fn distance_to_nearest_odd<T: Real>(s: Complex<T>) -> T {
    // The nearest odd integer to re(s) minimizes |s - k| over odd k.
    let two = T::from_f64(2.0).unwrap();
    let half = (s.re - T::one()) / two;
    let lo = T::one() + two * half.floor();
    let hi = lo + two;
    let d_lo = (s - Complex::new(lo, T::zero())).norm();
    let d_hi = (s - Complex::new(hi, T::zero())).norm();
    d_lo.min(d_hi)
}

fn from_f64<T: Real>(x: f64) -> T {
    T::from_f64(x).expect("f64 conversion")
}

fn to_f64<T: Real>(x: T) -> f64 {
    x.to_f64().expect("f64 conversion")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::Complex64;

    fn circle_loop(center: Complex64, radius: f64, n: usize, name: &str) -> GammaLoop<f64> {
        let samples = (0..n)
            .map(|j| {
                let t = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
                center + radius * Complex64::new(t.cos(), t.sin())
            })
            .collect();
        GammaLoop {
            name: name.into(),
            samples,
        }
    }

    #[test]
    fn parse_minimal_document() {
        let text = r#"{
            "manifold": "S3",
            "clearance": 0.5,
            "loops": [{"name": "c", "samples": [[2.0, 0.0], [2.0, 0.5], [2.0, 0.0], [2.0, -0.5]]}]
        }"#;
        let inst: ContactInstance<f64> = parse_instance(text).unwrap();
        assert_eq!(inst.manifold_label, "S3");
        assert_eq!(inst.loops.len(), 1);
        assert_eq!(inst.loops[0].samples.len(), 4);
    }

    #[test]
    fn parse_empty_loop_list() {
        let inst: ContactInstance<f64> =
            parse_instance(r#"{"manifold": "m", "clearance": 0.1, "loops": []}"#).unwrap();
        assert!(inst.loops.is_empty());
    }

    #[test]
    fn parse_rejects_nan_literal() {
        let text = r#"{"manifold": "m", "clearance": 0.1, "loops": [{"name": "a", "samples": [[1.0, NaN]]}]}"#;
        match parse_instance::<f64>(text) {
            Err(ParseError::NonFinite { .. }) => {}
            other => panic!("expected non-finite literal error, got {:?}", other.err()),
        }
    }

    #[test]
    fn parse_rejects_unknown_keys() {
        let text = r#"{"manifold": "m", "clearance": 0.1, "loops": [], "extra": 1}"#;
        assert!(parse_instance::<f64>(text).is_err());
    }

    #[test]
    fn parse_reports_missing_field() {
        let text = r#"{"manifold": "m", "loops": []}"#;
        match parse_instance::<f64>(text) {
            Err(ParseError::MissingField(f)) => assert_eq!(f, "clearance"),
            other => panic!("expected missing field, got {:?}", other.err()),
        }
    }

    #[test]
    fn roundtrip_preserves_content() {
        let text = r#"{"manifold": "T3", "clearance": 0.25,
            "loops": [{"name": "a", "samples": [[0.0, 1.0], [0.5, 2.0], [-0.5, 2.0]]}]}"#;
        let inst: ContactInstance<f64> = parse_instance(text).unwrap();
        let reparsed: ContactInstance<f64> = parse_instance(&serialize_instance(&inst)).unwrap();
        assert_eq!(inst, reparsed);
    }

    #[test]
    fn validate_constant_loop_at_two() {
        let inst = ContactInstance {
            manifold_label: "m".into(),
            loops: vec![GammaLoop {
                name: "c".into(),
                samples: vec![Complex64::new(2.0, 0.0); 4],
            }],
            clearance: 0.5,
            orientation: OrientationConvention::CounterclockwisePositive,
        };
        let report = validate_instance(&inst);
        assert!(report.ok, "violations: {:?}", report.violations);
        assert_eq!(report.relevant_odds, vec![-1, 1]);
    }

    #[test]
    fn validate_flags_loop_through_odd_integer() {
        let mut lp = circle_loop(Complex64::new(3.5, 0.0), 0.5, 16, "bad");
        lp.samples[0] = Complex64::new(3.0, 0.0);
        let inst = ContactInstance {
            manifold_label: "m".into(),
            loops: vec![lp],
            clearance: 1e-6,
            orientation: OrientationConvention::CounterclockwisePositive,
        };
        let report = validate_instance(&inst);
        assert!(!report.ok);
        assert!(report
            .violations
            .iter()
            .any(|v| v.rule == "odd-integer clearance"));
    }

    #[test]
    fn validate_flags_inadequate_sampling() {
        // 3 samples around k=1: some angular step is >= pi (steps sum to 2pi).
        let lp = circle_loop(Complex64::new(1.0, 0.0), 0.5, 3, "coarse");
        let inst = ContactInstance {
            manifold_label: "m".into(),
            loops: vec![lp],
            clearance: 1e-6,
            orientation: OrientationConvention::CounterclockwisePositive,
        };
        let report = validate_instance(&inst);
        // Direct check on the 3 samples: each step is exactly 2pi/3 < pi,
        // so a symmetric triangle is actually adequate; move one sample to
        // the antipode of its predecessor to force a step >= pi.
        let mut lp = circle_loop(Complex64::new(1.0, 0.0), 0.5, 3, "coarse");
        lp.samples[1] = Complex64::new(0.5, 0.0);
        let inst2 = ContactInstance {
            loops: vec![lp],
            ..inst
        };
        let report2 = validate_instance(&inst2);
        assert!(report.ok);
        assert!(report2
            .violations
            .iter()
            .any(|v| v.rule == "sampling adequacy"));
    }

    #[test]
    fn relevant_odds_follow_ceiling_rule() {
        let empty = ContactInstance::<f64> {
            manifold_label: "m".into(),
            loops: vec![],
            clearance: 0.1,
            orientation: OrientationConvention::CounterclockwisePositive,
        };
        assert!(relevant_odd_integers(&empty).is_empty());

        let inst = ContactInstance {
            loops: vec![GammaLoop {
                name: "a".into(),
                samples: vec![Complex64::new(4.2, 0.0); 4],
            }],
            ..empty.clone()
        };
        assert_eq!(relevant_odd_integers(&inst), vec![-5, -3, -1, 1, 3, 5]);

        let small = ContactInstance {
            loops: vec![GammaLoop {
                name: "a".into(),
                samples: vec![Complex64::new(0.0, 0.5); 4],
            }],
            ..empty
        };
        assert_eq!(relevant_odd_integers(&small), vec![-1, 1]);
    }

    #[test]
    fn validate_is_total_on_degenerate_instances() {
        let inst = ContactInstance::<f64> {
            manifold_label: String::new(),
            loops: vec![GammaLoop {
                name: "tiny".into(),
                samples: vec![Complex64::new(f64::NAN, 0.0), Complex64::new(0.0, 0.0)],
            }],
            clearance: -1.0,
            orientation: OrientationConvention::CounterclockwisePositive,
        };
        let report = validate_instance(&inst);
        assert!(!report.ok);
    }
}
