//! Structured residual reports shared by every check, with JSON-lines and CSV output.

use num_complex::Complex64 as C64;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

pub const SCHEMA: &str = "1";

/// How a report decides pass/fail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Criterion {
    /// rel_residual < tol
    Relative { tol: f64 },
    /// abs_residual < tol
    Absolute { tol: f64 },
    /// lo ≤ measured ≤ hi; a missing side is unbounded.
    Range { lo: Option<f64>, hi: Option<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub schema: &'static str,
    pub id: String,
    pub anchor: String,
    pub params: BTreeMap<String, Value>,
    pub lhs: Vec<C64>,
    pub rhs: Vec<C64>,
    pub abs_residual: f64,
    pub rel_residual: f64,
    pub measured: Option<f64>,
    pub criterion: Criterion,
    pub tolerance: f64,
    pub passed: bool,
    pub diagnostics: BTreeMap<String, Value>,
}

pub fn residuals(lhs: &[C64], rhs: &[C64]) -> (f64, f64) {
    let mut abs: f64 = 0.0;
    let mut scale: f64 = 0.0;
    for (l, r) in lhs.iter().zip(rhs) {
        abs = abs.max((l - r).norm());
        scale = scale.max(l.norm()).max(r.norm());
    }
    let rel = if abs == 0.0 { 0.0 } else { abs / scale.max(1e-300) };
    (abs, rel)
}

impl CheckReport {
    /// A two-sided comparison judged by relative residual.
    pub fn compare(id: &str, anchor: &str, lhs: Vec<C64>, rhs: Vec<C64>, tol: f64) -> Self {
        let (abs, rel) = residuals(&lhs, &rhs);
        CheckReport {
            schema: SCHEMA,
            id: id.to_string(),
            anchor: anchor.to_string(),
            params: BTreeMap::new(),
            lhs,
            rhs,
            abs_residual: abs,
            rel_residual: rel,
            measured: None,
            criterion: Criterion::Relative { tol },
            tolerance: tol,
            passed: rel < tol,
            diagnostics: BTreeMap::new(),
        }
        .rejudged()
    }

    pub fn scalar(id: &str, anchor: &str, lhs: C64, rhs: C64, tol: f64) -> Self {
        CheckReport::compare(id, anchor, vec![lhs], vec![rhs], tol)
    }

    /// A single measured quantity judged against a range.
    pub fn measure(id: &str, anchor: &str, measured: f64, lo: Option<f64>, hi: Option<f64>) -> Self {
        let mut r = CheckReport::compare(id, anchor, Vec::new(), Vec::new(), 0.0);
        r.measured = Some(measured);
        r.criterion = Criterion::Range { lo, hi };
        r.tolerance = match (lo, hi) {
            (Some(a), Some(b)) => 0.5 * (b - a),
            (None, Some(b)) => b,
            (Some(a), None) => a,
            _ => 0.0,
        };
        r.rejudged()
    }

    pub fn with_criterion(mut self, c: Criterion) -> Self {
        self.criterion = c;
        self.tolerance = match c {
            Criterion::Relative { tol } | Criterion::Absolute { tol } => tol,
            _ => self.tolerance,
        };
        self.rejudged()
    }

    pub fn with_measured(mut self, v: f64) -> Self {
        self.measured = Some(v);
        self.rejudged()
    }

    pub fn param(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), v.into());
        self
    }

    pub fn param_c(self, key: &str, v: C64) -> Self {
        if v.im == 0.0 {
            self.param(key, v.re)
        } else {
            self.param(key, vec![v.re, v.im])
        }
    }

    pub fn diag(mut self, key: &str, v: impl Into<Value>) -> Self {
        self.diagnostics.insert(key.to_string(), v.into());
        self
    }

    /// Replaces the tolerance. A one-sided range moves its bound, a two-sided range keeps
    /// its centre and takes `tol` as the half-width.
    pub fn with_tolerance(mut self, tol: f64) -> Self {
        match &mut self.criterion {
            Criterion::Relative { tol: t } | Criterion::Absolute { tol: t } => *t = tol,
            Criterion::Range { lo: None, hi: Some(h) } => *h = tol,
            Criterion::Range { lo: Some(l), hi: None } => *l = tol,
            Criterion::Range { lo: Some(l), hi: Some(h) } => {
                let c = 0.5 * (*l + *h);
                *l = c - tol;
                *h = c + tol;
            }
            Criterion::Range { lo: None, hi: None } => return self,
        }
        self.tolerance = tol;
        self.rejudged()
    }

    fn rejudged(mut self) -> Self {
        self.passed = match self.criterion {
            Criterion::Relative { tol } => self.rel_residual.is_finite() && self.rel_residual < tol,
            Criterion::Absolute { tol } => self.abs_residual.is_finite() && self.abs_residual < tol,
            Criterion::Range { lo, hi } => match self.measured {
                Some(m) if m.is_finite() => {
                    lo.map_or(true, |a| m >= a) && hi.map_or(true, |b| m <= b)
                }
                _ => false,
            },
        };
        self
    }

    /// Key used for deterministic ordering of report streams.
    pub fn sort_key(&self) -> (String, String) {
        (
            self.id.clone(),
            serde_json::to_string(&self.params).unwrap_or_default(),
        )
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }

    pub const CSV_HEADER: &'static str =
        "schema,id,anchor,params,lhs,rhs,abs_residual,rel_residual,measured,tolerance,passed";

    pub fn to_csv(&self) -> String {
        let quote = |s: String| format!("\"{}\"", s.replace('"', "\"\""));
        let vecs = |v: &[C64]| {
            v.iter()
                .map(|c| format!("{}{:+}i", c.re, c.im))
                .collect::<Vec<_>>()
                .join(" ")
        };
        [
            self.schema.to_string(),
            quote(self.id.clone()),
            quote(self.anchor.clone()),
            quote(serde_json::to_string(&self.params).unwrap_or_default()),
            quote(vecs(&self.lhs)),
            quote(vecs(&self.rhs)),
            format!("{:e}", self.abs_residual),
            format!("{:e}", self.rel_residual),
            self.measured.map(|m| format!("{m}")).unwrap_or_default(),
            format!("{:e}", self.tolerance),
            self.passed.to_string(),
        ]
        .join(",")
    }
}

/// Sorts reports by id then parameters, the order every report stream is emitted in.
pub fn sort_reports(reports: &mut [CheckReport]) {
    reports.sort_by_cached_key(|r| r.sort_key());
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn relative_residual_definition() {
        let r = CheckReport::scalar("x", "a", C64::new(1.0, 0.0), C64::new(1.0 + 1e-9, 0.0), 1e-8);
        assert!(r.passed);
        assert!((r.rel_residual - 1e-9 / (1.0 + 1e-9)).abs() < 1e-15);
        let z = CheckReport::scalar("x", "a", C64::new(0.0, 0.0), C64::new(0.0, 0.0), 1e-8);
        assert!(z.passed && z.rel_residual == 0.0);
    }

    #[test]
    fn range_criterion() {
        let r = CheckReport::measure("ratio", "a", 1.25, Some(1.24), Some(1.26));
        assert!(r.passed);
        let r = CheckReport::measure("slope", "a", -7.0, None, Some(-8.0));
        assert!(!r.passed);
        assert!(r.with_tolerance(-6.0).passed);
        let r = CheckReport::measure("ratio", "a", 1.5, Some(0.9), Some(1.1)).with_tolerance(0.6);
        assert!(r.passed && r.tolerance == 0.6);
    }

    #[test]
    fn json_has_schema() {
        let r = CheckReport::scalar("x", "a", C64::new(1.0, 0.0), C64::new(1.0, 0.0), 1e-8)
            .param("s", 0.5);
        let j = r.to_json();
        assert!(j.starts_with("{\"schema\":\"1\""), "{j}");
        assert!(j.contains("\"lhs\":[[1.0,0.0]]"), "{j}");
    }
}
