//! Command implementations. Each returns what to print and the exit code;
//! `main` only does argument parsing and I/O.

use std::collections::BTreeMap;
use std::time::Instant;

use bas_core::algebra::analyze_algebra;
use bas_core::connections::verdict_suite;
use bas_core::constructions::catalog::{self, CatalogEntry};
use bas_core::constructions::nildecide::{NormalFormWitness, WitnessBasis};
use bas_core::constructions::{catalog_build, decide_nilpotent_bas, verify_k_nilpotent, NilVerdict, Obstruction};
use bas_core::hermitian::{analyze_hermitian, HermitianData};
use bas_core::homogeneous::{canonical_reduction, kostant_form, natred_test, ReductionData};
use bas_core::linalg::{unit_vec, Matrix, Vector};
use bas_core::nomizu::{canonical_presentation, CanonicalPresentation};
use bas_core::verdict::Check;
use bas_core::Error;
use serde_json::{json, Value};

use crate::document::{AlgebraDocument, Parsed};
use crate::report::{canonical_json, check_line, PresentationSummary, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INVALID: i32 = 2;

/// What a command prints and how it exits.
#[derive(Clone, Debug, Default)]
pub struct Outcome {
    pub stdout: String,
    pub stderr: String,
    pub code: i32,
}

impl Outcome {
    fn invalid(msg: String) -> Self {
        Outcome { stdout: String::new(), stderr: msg, code: EXIT_INVALID }
    }
}

fn diagnostic(e: &Error) -> String {
    match e {
        Error::Parse { location, message } => format!("invalid input at {location}: {message}\n"),
        Error::NotALieAlgebra { reason, triple: (a, b, c) } => format!("invalid input: {reason} at ({a}, {b}, {c})\n"),
        e => format!("invalid input: {e}\n"),
    }
}

/// Reads and validates a document.
pub fn load(input: &[u8]) -> Result<(AlgebraDocument, Parsed), String> {
    let text = std::str::from_utf8(input).map_err(|e| format!("invalid input: not UTF-8 ({e})\n"))?;
    let doc = AlgebraDocument::from_json(text).map_err(|e| diagnostic(&e))?;
    let parsed = doc.parse().map_err(|e| diagnostic(&e))?;
    Ok((doc, parsed))
}

/// Result of the `check` pipeline.
#[derive(Clone, Debug)]
pub struct CheckRun {
    pub report: Report,
    pub code: i32,
    pub diagnostics: String,
}

/// Algebra analysis, Hermitian analysis, verdicts, canonical presentation
/// and reduction, stopping early with a partial report when a stage cannot
/// run. `expect` lists checks that must pass.
pub fn run_check(input: &[u8], expect: &[String]) -> CheckRun {
    let mut report = Report::new(input);
    let (_, parsed) = match load(input) {
        Ok(p) => p,
        Err(d) => return CheckRun { report, code: EXIT_INVALID, diagnostics: d },
    };
    let mut diagnostics = String::new();
    let mut math_failure = false;
    let names = parsed.carrier.names().to_vec();

    match parsed.carrier.pair() {
        None => {
            let alg = parsed.algebra().expect("group carrier");
            if let Ok(a) = analyze_algebra(alg) {
                report.algebra.insert("dim".into(), json!(alg.dim()));
                report.algebra.insert("centre_dim".into(), json!(a.centre.dim()));
                report.algebra.insert("derived_dim".into(), json!(a.derived.dim()));
                report.algebra.insert("nilpotency_class".into(), json!(a.nilpotency_class));
            }
        }
        Some(p) => {
            report.algebra.insert("dim".into(), json!(p.dim_m()));
            report.algebra.insert("dim_l".into(), json!(p.l().dim()));
            report.algebra.insert("dim_u".into(), json!(p.dim_u()));
        }
    }
    if let (Some(spec), Some(alg)) = (&parsed.k_nilpotent, parsed.algebra()) {
        let n = alg.dim();
        let k = spec.k_dim;
        let kf: Vec<Vector> = (0..k).map(|i| unit_vec(n, i)).collect();
        let vf: Vec<Vector> = (k..n).map(|i| unit_vec(n, i)).collect();
        let v = verify_k_nilpotent(alg, &kf, &vf, spec);
        report.add_verdict("k_nilpotent.", &v, &names);
    }

    let h = match (&parsed.metric, &parsed.j) {
        (Some(_), Some(_)) => match parsed.hermitian() {
            Ok(h) => Some(h),
            Err(e) => return CheckRun { report, code: EXIT_INVALID, diagnostics: diagnostic(&e) },
        },
        _ => {
            report.notes.push("no metric and J given; Hermitian checks skipped".into());
            None
        }
    };
    if let Some(h) = h {
        let started = Instant::now();
        let analysis = analyze_hermitian(&h);
        report.timings.push(("hermitian".into(), started.elapsed()));
        match analysis {
            Err(e) => return CheckRun { report, code: EXIT_INVALID, diagnostics: diagnostic(&e) },
            Ok(a) => {
                report.add_verdict("", &single("integrable", Check::vanishing(a.nijenhuis.clone())), &names);
                report.add_verdict("", &single("abelian_j", Check::flag(a.abelian_j)), &names);
                if !a.integrable {
                    report.notes.push("J is not integrable; Bismut checks skipped".into());
                    if let Err(e) = h.require_integrable() {
                        diagnostics.push_str(&format!("{e}\n"));
                    }
                    math_failure = true;
                } else {
                    let started = Instant::now();
                    match verdict_suite(&h) {
                        Ok(v) => report.add_verdict("", &v, &names),
                        Err(e) => {
                            diagnostics.push_str(&format!("verdicts: {e}\n"));
                            math_failure = true;
                        }
                    }
                    if let Some(p) = h.carrier().pair() {
                        if let Ok(v) = natred_test(p, h.g()) {
                            report.add_verdict("", &v, &names);
                        }
                    }
                    report.timings.push(("verdicts".into(), started.elapsed()));
                    if h.carrier().has_isotropy() {
                        report.notes.push("input already has isotropy; canonical presentation skipped".into());
                    } else if report.verdicts.get("bas").is_some_and(|c| c.pass) {
                        let started = Instant::now();
                        match presentation_summary(&h) {
                            Ok((s, notes)) => {
                                report.presentation = Some(s);
                                report.notes.extend(notes);
                            }
                            Err(e) => {
                                diagnostics.push_str(&format!("canonical presentation: {e}\n"));
                                report.notes.push(format!("canonical presentation failed: {e}"));
                                math_failure = true;
                            }
                        }
                        report.timings.push(("presentation".into(), started.elapsed()));
                    } else if report.verdicts.contains_key("bas") {
                        report.notes.push("not BAS; canonical presentation skipped".into());
                    }
                }
            }
        }
    }

    let mut code = if math_failure { EXIT_FAIL } else { EXIT_OK };
    for e in expect {
        match report.verdicts.get(e) {
            Some(c) if c.pass => {}
            Some(c) => {
                diagnostics.push_str(&format!("expected {}\n", check_line(e, c)));
                code = code.max(EXIT_FAIL);
            }
            None if is_known_check(e) => {
                diagnostics.push_str(&format!("expected check {e} was not evaluated\n"));
                code = code.max(EXIT_FAIL);
            }
            None => {
                return CheckRun { report, code: EXIT_INVALID, diagnostics: format!("invalid input: unknown check {e:?}\n") };
            }
        }
    }
    CheckRun { report, code, diagnostics }
}

const KNOWN_CHECKS: [&str; 11] = [
    "integrable",
    "abelian_j",
    "parallel_torsion",
    "parallel_curvature",
    "bas",
    "bas_crosscheck",
    "pluriclosed",
    "balanced",
    "kahler",
    "naturally_reductive",
    "k_nilpotent",
];

fn is_known_check(name: &str) -> bool {
    KNOWN_CHECKS.contains(&name) || name.starts_with("k_nilpotent.")
}

fn single(name: &str, c: Check) -> bas_core::verdict::Verdict {
    let mut v = bas_core::verdict::Verdict::new();
    v.insert(name, c);
    v
}

fn reduction_of(cp: &CanonicalPresentation) -> Result<Option<ReductionData>, Error> {
    match kostant_form(&cp.pair, &cp.g) {
        Ok(form) => canonical_reduction(&cp.pair, &cp.g, &cp.j, &form).map(Some),
        Err(Error::NonUniqueKostantForm { .. }) => Ok(None),
        Err(e) => Err(e),
    }
}

fn presentation_summary(h: &HermitianData) -> Result<(PresentationSummary, Vec<String>), Error> {
    let cp = canonical_presentation(h)?;
    let mut notes = Vec::new();
    let mut s = PresentationSummary {
        dim_l: cp.pair.l().dim(),
        dim_u: cp.pair.dim_u(),
        dim_m: cp.pair.dim_m(),
        kostant: "unique".into(),
        ..Default::default()
    };
    match kostant_form(&cp.pair, &cp.g) {
        Ok(form) => match canonical_reduction(&cp.pair, &cp.g, &cp.j, &form) {
            Ok(red) => {
                s.dim_f = Some(red.f.dim());
                s.dim_base = Some(red.base.dim_m());
                s.base_flat_kahler = Some(red.base_flat_kahler());
            }
            Err(Error::UnsupportedHypothesis(why)) => {
                s.dim_f = Some(cp.pair.trivial_submodule().dim());
                notes.push(format!("reduction skipped: {why}"));
            }
            Err(e) => return Err(e),
        },
        Err(Error::NonUniqueKostantForm { kernel_dim }) => {
            s.kostant = format!("non-unique ({kernel_dim}-dimensional family)");
            notes.push("invariant form not unique; reduction skipped".into());
        }
        Err(e) => return Err(e),
    }
    Ok((s, notes))
}

/// `check FILE`: the report in text or JSON, plus the canonical JSON for
/// `--report`.
pub fn check(input: &[u8], expect: &[String], json_out: bool, timings: bool) -> (Outcome, Option<String>) {
    let run = run_check(input, expect);
    if run.code == EXIT_INVALID && run.report.verdicts.is_empty() {
        return (Outcome::invalid(run.diagnostics), None);
    }
    let json = run.report.to_json(timings);
    let stdout = if json_out { json.clone() } else { run.report.to_text() };
    (Outcome { stdout, stderr: run.diagnostics, code: run.code }, Some(json))
}

fn matrix_rows(m: &Matrix) -> Value {
    json!((0..m.rows()).map(|r| (0..m.cols()).map(|c| m[(r, c)].to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn vectors(vs: &[Vector]) -> Value {
    json!(vs.iter().map(|v| v.iter().map(|x| x.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn hermitian_input(input: &[u8]) -> Result<HermitianData, Outcome> {
    let (_, parsed) = load(input).map_err(Outcome::invalid)?;
    parsed.hermitian().map_err(|e| Outcome::invalid(diagnostic(&e)))
}

fn math_error(what: &str, e: &Error) -> Outcome {
    let code = if e.is_invalid_input() { EXIT_INVALID } else { EXIT_FAIL };
    Outcome { stdout: String::new(), stderr: format!("{what}: {e}\n"), code }
}

/// `present FILE`: the canonical presentation as a document, with the
/// invariant form when it is unique.
pub fn present(input: &[u8]) -> Outcome {
    let h = match hermitian_input(input) {
        Ok(h) => h,
        Err(o) => return o,
    };
    let cp = match canonical_presentation(&h) {
        Ok(cp) => cp,
        Err(e) => return math_error("canonical presentation", &e),
    };
    let ph = match HermitianData::on_pair(&cp.pair, cp.g.clone(), cp.j.clone()) {
        Ok(ph) => ph,
        Err(e) => return math_error("canonical presentation", &e),
    };
    let doc = AlgebraDocument::from_hermitian(Some("canonical_presentation"), &ph);
    let kostant = match kostant_form(&cp.pair, &cp.g) {
        Ok(f) => json!({ "unique": true, "gram": matrix_rows(&f.q) }),
        Err(Error::NonUniqueKostantForm { kernel_dim }) => json!({ "unique": false, "family_dim": kernel_dim }),
        Err(e) => json!({ "unique": false, "error": e.to_string() }),
    };
    let out = json!({
        "presentation": serde_json::to_value(&doc).expect("documents serialize"),
        "dim_l": cp.pair.l().dim(),
        "dim_u": cp.pair.dim_u(),
        "dim_f": cp.pair.trivial_submodule().dim(),
        "kostant": kostant,
    });
    Outcome { stdout: canonical_json(&out), ..Default::default() }
}

/// `reduce FILE`: trivial submodule, base pair and its induced structure.
pub fn reduce(input: &[u8]) -> Outcome {
    let h = match hermitian_input(input) {
        Ok(h) => h,
        Err(o) => return o,
    };
    let cp = match canonical_presentation(&h) {
        Ok(cp) => cp,
        Err(e) => return math_error("canonical presentation", &e),
    };
    let red = match reduction_of(&cp) {
        Ok(Some(r)) => r,
        Ok(None) => {
            return Outcome {
                stderr: "reduction: the invariant form is not unique\n".into(),
                code: EXIT_FAIL,
                ..Default::default()
            }
        }
        Err(e) => return math_error("reduction", &e),
    };
    let base = match HermitianData::on_pair(&red.base, red.induced_g.clone(), red.induced_j.clone()) {
        Ok(b) => serde_json::to_value(AlgebraDocument::from_hermitian(Some("base"), &b)).expect("documents serialize"),
        Err(e) => return math_error("reduction base", &e),
    };
    let out = json!({
        "f": vectors(red.f.basis()),
        "b": vectors(red.b.basis()),
        "ideal_dim": red.ideal_dim,
        "fibre_dim": red.fibre.dim(),
        "base": base,
        "base_flat_kahler": red.base_flat_kahler(),
        "reduced_input": red.is_reduced_input(),
    });
    Outcome { stdout: canonical_json(&out), ..Default::default() }
}

fn obstruction_value(o: &Obstruction) -> Value {
    match o {
        Obstruction::NotNilpotent => json!({ "kind": "not_nilpotent" }),
        Obstruction::NotTwoStep { class } => json!({ "kind": "not_two_step", "class": class }),
        Obstruction::OddCentre { dim } => json!({ "kind": "odd_centre", "dim": dim }),
        Obstruction::OddComplement { dim } => json!({ "kind": "odd_complement", "dim": dim }),
        Obstruction::DegeneratePencil { samples } => json!({ "kind": "degenerate_pencil", "samples": samples }),
        Obstruction::NonCommuting { i, j } => json!({ "kind": "non_commuting", "i": i, "j": j }),
        Obstruction::NotRealSemisimple { index, min_poly } => {
            json!({ "kind": "not_real_semisimple", "index": index, "min_poly": min_poly.to_string() })
        }
    }
}

fn witness_value(w: &NormalFormWitness) -> Value {
    match &w.basis {
        WitnessBasis::Exact(p) => json!({
            "numeric": false,
            "centre_dim": w.centre_dim,
            "pairs": w.pairs,
            "basis": matrix_rows(p),
            "coefficients": w.exact_coefficients.as_deref().map(vectors),
        }),
        WitnessBasis::Numeric(b) => json!({
            "numeric": true,
            "centre_dim": w.centre_dim,
            "pairs": w.pairs,
            "basis": b,
            "coefficients": w.coefficients,
            "residual": w.residual,
        }),
    }
}

/// `classify-nil FILE`: decision, obstruction or witness, and the verdict
/// of the standard structure on exact witnesses.
pub fn classify_nil(input: &[u8]) -> Outcome {
    let (_, parsed) = match load(input) {
        Ok(p) => p,
        Err(d) => return Outcome::invalid(d),
    };
    let Some(alg) = parsed.algebra() else {
        return Outcome::invalid("invalid input: classify-nil takes a Lie algebra, not a pair\n".into());
    };
    let d = decide_nilpotent_bas(alg);
    let verdict = match d.verdict {
        NilVerdict::Yes => "yes",
        NilVerdict::No => "no",
        NilVerdict::Indeterminate => "indeterminate",
    };
    let mut out = json!({
        "verdict": verdict,
        "probabilistic": d.probabilistic,
        "obstruction": d.obstruction.as_ref().map(obstruction_value),
        "witness": d.witness.as_ref().map(witness_value),
        "note": d.note,
    });
    let mut code = if d.verdict == NilVerdict::Yes { EXIT_OK } else { EXIT_FAIL };
    if let Some(w) = d.witness.as_ref().filter(|w| w.is_exact()) {
        match w.standard_structure(alg).and_then(|h| verdict_suite(&h)) {
            Ok(v) => {
                out["standard_structure_bas"] = json!(v.passes("bas"));
                if !v.passes("bas") {
                    code = EXIT_FAIL;
                }
            }
            Err(e) => return math_error("standard structure", &e),
        }
    }
    Outcome { stdout: canonical_json(&out), code, ..Default::default() }
}

pub fn catalog_list() -> Outcome {
    let mut s = String::new();
    for n in catalog::list() {
        s.push_str(n);
        s.push('\n');
    }
    Outcome { stdout: s, ..Default::default() }
}

fn entry(name: &str, params: &BTreeMap<String, String>) -> Result<CatalogEntry, Outcome> {
    catalog_build(name, params).map_err(|e| Outcome::invalid(format!("{e}\n")))
}

fn verify_line(e: &CatalogEntry) -> (String, bool) {
    match e.verify() {
        Ok(c) if c.ok() => (format!("{}: PASS", e.name), true),
        Ok(c) => {
            let what: Vec<String> =
                c.mismatches.iter().map(|(k, want, got)| format!("{k} expected {want} got {got}")).collect();
            (format!("{}: FAIL ({})", e.name, what.join("; ")), false)
        }
        Err(err) => (format!("{}: FAIL ({err})", e.name), false),
    }
}

/// `catalog verify NAME` or all entries, concurrently; lines keep the
/// catalog order.
pub fn catalog_verify(name: Option<&str>, params: &BTreeMap<String, String>) -> Outcome {
    let names: Vec<&str> = match name {
        Some(n) => vec![n],
        None => catalog::list(),
    };
    let mut entries = Vec::new();
    for n in &names {
        let p = if name.is_some() { params.clone() } else { BTreeMap::new() };
        match entry(n, &p) {
            Ok(e) => entries.push(e),
            Err(o) => return o,
        }
    }
    let lines: Vec<(String, bool)> = std::thread::scope(|s| {
        let handles: Vec<_> = entries.iter().map(|e| s.spawn(move || verify_line(e))).collect();
        handles.into_iter().map(|h| h.join().expect("verification thread")).collect()
    });
    let mut out = String::new();
    for (l, _) in &lines {
        out.push_str(l);
        out.push('\n');
    }
    let code = if lines.iter().all(|(_, ok)| *ok) { EXIT_OK } else { EXIT_FAIL };
    Outcome { stdout: out, code, ..Default::default() }
}

/// The document of a catalog entry.
pub fn export_document(name: &str, params: &BTreeMap<String, String>) -> Result<AlgebraDocument, Error> {
    let e = catalog_build(name, params)?;
    Ok(AlgebraDocument::from_hermitian(Some(&e.name), &e.hermitian))
}

pub fn catalog_export(name: &str, params: &BTreeMap<String, String>) -> Outcome {
    match export_document(name, params) {
        Ok(d) => Outcome { stdout: d.to_json(), ..Default::default() },
        Err(e) => Outcome::invalid(format!("{e}\n")),
    }
}
