//! Check verdicts with witnesses and margins.
//!
//! Every certification routine in this crate returns a [`CheckReport`] rather
//! than a bare bool: the verdict is accompanied by the numeric evidence (the
//! integral or ratio that was compared), the signed slack at the worst point,
//! a witness when the check fails, and a label saying whether the verdict is
//! exact, grid-based or quadrature-based. Grid verdicts are never upgraded to
//! proofs.

use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Inconclusive,
}

/// How a verdict was established.
///
/// `Exact` means symbolic (e.g. a divergence read off the dominant weight
/// term, or Gamma-function arithmetic); `Grid` means a finite set of sample
/// points; `Quadrature` means adaptive numeric integration within tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Exact,
    Grid,
    Quadrature,
}

/// The point (or structured evidence) at which a failed check fails.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Witness {
    /// A time-domain point t > 0.
    T { t: f64 },
    /// A radial point r ≥ 0 on the boundary measure axis.
    R { r: f64 },
    /// A point of the open right half-plane.
    Z { re: f64, im: f64 },
    /// The integral diverges at the origin.
    DivergentAtZero,
    /// The integral diverges in the tail.
    DivergentAtInfinity,
    /// A scalar exceeded its bound.
    Exceeds { value: f64, bound: f64 },
    /// Two routes that must agree disagreed.
    Discrepancy { lhs: f64, rhs: f64 },
    /// Index of the offending entry in a supplied list (test pair, corpus
    /// element, measure index).
    Index { index: usize },
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckReport {
    pub check: String,
    pub verdict: Verdict,
    /// Principal numeric evidence (integral value, sup ratio, constant K…).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    /// Signed slack at the worst point; nonnegative iff the check holds.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub margin: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    pub method: Method,
}

impl CheckReport {
    pub fn holds(check: impl Into<String>, method: Method) -> Self {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Holds,
            value: None,
            margin: None,
            witness: None,
            method,
        }
    }

    /// A failing report always carries its witness.
    pub fn fails(check: impl Into<String>, method: Method, witness: Witness) -> Self {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Fails,
            value: None,
            margin: None,
            witness: Some(witness),
            method,
        }
    }

    pub fn inconclusive(check: impl Into<String>, method: Method) -> Self {
        CheckReport {
            check: check.into(),
            verdict: Verdict::Inconclusive,
            value: None,
            margin: None,
            witness: None,
            method,
        }
    }

    pub fn with_value(mut self, value: f64) -> Self {
        self.value = Some(value);
        self
    }

    pub fn with_margin(mut self, margin: f64) -> Self {
        self.margin = Some(margin);
        self
    }

    pub fn with_witness(mut self, witness: Witness) -> Self {
        self.witness = Some(witness);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn failing_report_has_witness() {
        let r = CheckReport::fails("x", Method::Grid, Witness::T { t: 4.0 });
        assert_eq!(r.verdict, Verdict::Fails);
        assert!(r.witness.is_some());
    }

    #[test]
    fn serializes_tagged_witness() {
        let r = CheckReport::fails("x", Method::Exact, Witness::DivergentAtInfinity)
            .with_value(2.0)
            .with_margin(-1.0);
        let s = serde_json::to_string(&r).unwrap();
        assert!(s.contains("\"kind\":\"divergent_at_infinity\""), "{s}");
        assert!(s.contains("\"method\":\"exact\""), "{s}");
    }
}
