//! Verification reports and their canonical serializations.

use std::collections::BTreeMap;
use std::time::Duration;

use bas_core::tensor::Tensor;
use bas_core::verdict::{Check, Verdict};
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const TOOL_VERSION: &str = concat!("bas ", env!("CARGO_PKG_VERSION"));

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckSummary {
    pub pass: bool,
    /// First nonzero component of the witness, e.g. `(e, Je; z) = -1`.
    pub witness: Option<String>,
}

/// Dimensions of the canonical presentation and its reduction.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PresentationSummary {
    pub dim_l: usize,
    pub dim_u: usize,
    pub dim_m: usize,
    pub kostant: String,
    pub dim_f: Option<usize>,
    pub dim_base: Option<usize>,
    pub base_flat_kahler: Option<bool>,
}

#[derive(Clone, Debug, Default)]
pub struct Report {
    pub tool_version: String,
    pub input_digest: String,
    pub algebra: BTreeMap<String, Value>,
    pub verdicts: BTreeMap<String, CheckSummary>,
    pub presentation: Option<PresentationSummary>,
    /// Stages that were skipped or stopped, with the reason.
    pub notes: Vec<String>,
    /// Wall-clock time per stage. Never part of the canonical JSON.
    pub timings: Vec<(String, Duration)>,
}

pub fn digest(bytes: &[u8]) -> String {
    format!("sha256:{}", hex::encode(Sha256::digest(bytes)))
}

/// `(a, b; c) = v` for the first nonzero component; upper index last.
pub fn witness_summary(t: &Tensor, names: &[String]) -> Option<String> {
    let (idx, v) = t.first_nonzero()?;
    let name = |i: usize| names.get(i).cloned().unwrap_or_else(|| format!("#{i}"));
    let s = if t.is_upper() {
        let lower: Vec<String> = idx[1..].iter().map(|&i| name(i)).collect();
        format!("({}; {}) = {v}", lower.join(", "), name(idx[0]))
    } else {
        let lower: Vec<String> = idx.iter().map(|&i| name(i)).collect();
        format!("({}) = {v}", lower.join(", "))
    };
    Some(s)
}

impl CheckSummary {
    pub fn of(c: &Check, names: &[String]) -> Self {
        let witness = if c.pass { None } else { c.witness.as_ref().and_then(|w| witness_summary(w, names)) };
        CheckSummary { pass: c.pass, witness }
    }
}

impl Report {
    pub fn new(input: &[u8]) -> Self {
        Report { tool_version: TOOL_VERSION.to_string(), input_digest: digest(input), ..Default::default() }
    }

    pub fn add_verdict(&mut self, prefix: &str, v: &Verdict, names: &[String]) {
        for (k, c) in &v.checks {
            self.verdicts.insert(format!("{prefix}{k}"), CheckSummary::of(c, names));
        }
    }

    pub fn to_value(&self, with_timings: bool) -> Value {
        let verdicts: Map<String, Value> = self
            .verdicts
            .iter()
            .map(|(k, c)| (k.clone(), json!({ "pass": c.pass, "witness": c.witness })))
            .collect();
        let presentation = self.presentation.as_ref().map(|p| {
            json!({
                "dim_l": p.dim_l,
                "dim_u": p.dim_u,
                "dim_m": p.dim_m,
                "kostant": p.kostant,
                "dim_f": p.dim_f,
                "dim_base": p.dim_base,
                "base_flat_kahler": p.base_flat_kahler,
            })
        });
        let mut out = json!({
            "tool": self.tool_version,
            "input_digest": self.input_digest,
            "algebra": Value::Object(self.algebra.clone().into_iter().collect()),
            "verdicts": Value::Object(verdicts),
            "presentation": presentation,
            "notes": self.notes,
        });
        if with_timings {
            let t: Map<String, Value> =
                self.timings.iter().map(|(k, d)| (k.clone(), json!(format!("{}us", d.as_micros())))).collect();
            out["timings"] = Value::Object(t);
        }
        out
    }

    /// Sorted keys, two-space indentation, trailing newline.
    pub fn to_json(&self, with_timings: bool) -> String {
        canonical_json(&self.to_value(with_timings))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (k, c) in &self.verdicts {
            s.push_str(&check_line(k, c));
            s.push('\n');
        }
        if let Some(p) = &self.presentation {
            s.push_str(&format!("presentation: dim l = {}, dim u = {}, dim m = {}, kostant {}\n", p.dim_l, p.dim_u, p.dim_m, p.kostant));
            if let (Some(f), Some(b)) = (p.dim_f, p.dim_base) {
                let flat = if p.base_flat_kahler == Some(true) { ", base flat Kahler" } else { "" };
                s.push_str(&format!("reduction: dim f = {f}, dim base = {b}{flat}\n"));
            }
        }
        for n in &self.notes {
            s.push_str(&format!("note: {n}\n"));
        }
        s
    }
}

pub fn check_line(name: &str, c: &CheckSummary) -> String {
    match (&c.pass, &c.witness) {
        (true, _) => format!("{name}: PASS"),
        (false, Some(w)) => format!("{name}: FAIL (witness {w})"),
        (false, None) => format!("{name}: FAIL"),
    }
}

/// serde_json maps are ordered by key, so pretty printing is canonical.
pub fn canonical_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("values always serialize");
    s.push('\n');
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_report_skeleton() {
        let r = Report::new(b"");
        let v = r.to_value(false);
        assert_eq!(v["verdicts"], json!({}));
        assert!(v.get("timings").is_none());
        let text = r.to_json(false);
        let keys: Vec<&str> = text.lines().filter(|l| l.starts_with("  \"")).map(|l| l.trim().split('"').nth(1).unwrap()).collect();
        let mut sorted = keys.clone();
        sorted.sort();
        assert_eq!(keys, sorted);
    }

    #[test]
    fn text_lines() {
        let c = CheckSummary { pass: false, witness: Some("(x, y; z) = 1/2".into()) };
        assert_eq!(check_line("bas", &c), "bas: FAIL (witness (x, y; z) = 1/2)");
        assert_eq!(check_line("bas", &CheckSummary { pass: true, witness: None }), "bas: PASS");
    }
}
