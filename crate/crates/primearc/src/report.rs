//! Report types for checked inequalities and bound-vs-actual comparisons.
//!
//! Infinities arise legitimately from the X/Y = +inf convention for zero
//! denominators, so JSON serialization maps non-finite values to strings.

use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

/// One checked inequality: `lhs <= rhs` with `margin = rhs - lhs`.
#[derive(Debug, Clone)]
pub struct InequalityCheck {
    /// Short reference naming which inequality was checked.
    pub anchor: String,
    pub lhs: f64,
    pub rhs: f64,
    pub margin: f64,
    /// Named hypotheses with their truth values.
    pub hypotheses: Vec<(String, bool)>,
    /// All hypotheses hold; when false no pass/fail judgment is implied.
    pub hypotheses_ok: bool,
    /// RNG seed when the check involved randomized inputs.
    pub seed: Option<u64>,
}

impl InequalityCheck {
    pub fn new(anchor: &str, lhs: f64, rhs: f64) -> Self {
        InequalityCheck {
            anchor: anchor.to_string(),
            lhs,
            rhs,
            margin: rhs - lhs,
            hypotheses: Vec::new(),
            hypotheses_ok: true,
            seed: None,
        }
    }

    pub fn with_hypothesis(mut self, name: &str, ok: bool) -> Self {
        self.hypotheses.push((name.to_string(), ok));
        self.hypotheses_ok &= ok;
        self
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    /// True when the inequality holds (or is vacuous because a hypothesis
    /// failed, in which case no judgment is made and we do not report failure).
    pub fn holds(&self) -> bool {
        !self.hypotheses_ok || self.lhs <= self.rhs
    }

    /// The inequality holds with all hypotheses verified.
    pub fn verified(&self) -> bool {
        self.hypotheses_ok && self.lhs <= self.rhs
    }
}

impl Serialize for InequalityCheck {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        fn num(v: f64) -> serde_json::Value {
            if v.is_finite() {
                serde_json::json!(v)
            } else if v.is_nan() {
                serde_json::Value::String("nan".into())
            } else if v > 0.0 {
                serde_json::Value::String("+inf".into())
            } else {
                serde_json::Value::String("-inf".into())
            }
        }
        let mut st = serializer.serialize_struct("InequalityCheck", 7)?;
        st.serialize_field("anchor", &self.anchor)?;
        st.serialize_field("lhs", &num(self.lhs))?;
        st.serialize_field("rhs", &num(self.rhs))?;
        st.serialize_field("margin", &num(self.margin))?;
        st.serialize_field("hypotheses", &self.hypotheses)?;
        st.serialize_field("hypotheses_ok", &self.hypotheses_ok)?;
        st.serialize_field("seed", &self.seed)?;
        st.end()
    }
}

/// Regime tags for the closed-form minor-arc bounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    Sax,
    Sax2,
    Sax3,
    Lab,
    StrongMinor,
    ChenWang,
}

/// Bound-vs-actual comparison. `actual` is `None` when the true sum was not
/// evaluated (for example when the scale exceeds the direct-summation cap).
#[derive(Debug, Clone, Serialize)]
pub struct BoundReport {
    pub bound: f64,
    pub actual: Option<f64>,
    /// `bound - actual` when `actual` is available.
    pub margin: Option<f64>,
    pub regime: Regime,
    pub hypotheses: Vec<(String, bool)>,
    pub anchor: String,
}

impl BoundReport {
    pub fn new(anchor: &str, regime: Regime, bound: f64, actual: Option<f64>) -> Self {
        BoundReport {
            bound,
            actual,
            margin: actual.map(|a| bound - a),
            regime,
            hypotheses: Vec::new(),
            anchor: anchor.to_string(),
        }
    }

    pub fn with_hypothesis(mut self, name: &str, ok: bool) -> Self {
        self.hypotheses.push((name.to_string(), ok));
        self
    }

    pub fn hypotheses_ok(&self) -> bool {
        self.hypotheses.iter().all(|(_, ok)| *ok)
    }

    pub fn holds(&self) -> bool {
        !self.hypotheses_ok() || self.margin.map_or(true, |m| m >= 0.0)
    }
}
