use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::{AnalysisReport, Stage, Status};
use crate::family::BoundaryReport;
use crate::phi::{AxiomVerdicts, CheckStatus, CheckVerdict, PhiSpec, RhoPlusCase};

pub const REPORT_SCHEMA_VERSION: u32 = 1;
pub const TOOL_NAME: &str = env!("CARGO_PKG_NAME");
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunMetadata {
    pub schema_version: u32,
    pub tool: String,
    pub tool_version: String,
    pub command: String,
    pub seed: u64,
    /// Only present when timing was requested, so reports stay reproducible.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl RunMetadata {
    pub fn new(command: &str, seed: u64) -> Self {
        Self {
            schema_version: REPORT_SCHEMA_VERSION,
            tool: TOOL_NAME.to_owned(),
            tool_version: TOOL_VERSION.to_owned(),
            command: command.to_owned(),
            seed,
            wall_time_ms: None,
        }
    }
}

/// Output of `analyze`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub meta: RunMetadata,
    pub report: AnalysisReport,
}

/// Output of `check-phi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiReportDocument {
    pub meta: RunMetadata,
    pub phi: PhiSpec,
    pub axioms: AxiomVerdicts,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_plus_case: Option<RhoPlusCase>,
}

pub fn to_json<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("report serializes");
    s.push('\n');
    s
}

fn compact<T: Serialize>(v: &T) -> String {
    serde_json::to_string(v).expect("serializes")
}

fn check_status(s: CheckStatus) -> &'static str {
    match s {
        CheckStatus::Pass => "pass",
        CheckStatus::Fail => "fail",
        CheckStatus::Inconclusive => "inconclusive",
    }
}

struct Rows(Vec<(String, String, String)>);

impl Rows {
    fn push(&mut self, name: impl Into<String>, status: impl ToString, detail: impl Into<String>) {
        self.0.push((name.into(), status.to_string(), detail.into()));
    }

    fn render(&self, out: &mut String) {
        let w0 = self.0.iter().map(|r| r.0.chars().count()).max().unwrap_or(0);
        let w1 = self.0.iter().map(|r| r.1.chars().count()).max().unwrap_or(0);
        for (a, b, c) in &self.0 {
            let line = format!("  {a:<w0$}  {b:<w1$}  {c}");
            out.push_str(line.trim_end());
            out.push('\n');
        }
    }
}

fn axiom_rows(rows: &mut Rows, axioms: &AxiomVerdicts, informational: bool) {
    let tag = |s: &str| if informational { format!("{s}, informational") } else { s.to_owned() };
    let entries: [(&str, &CheckVerdict, String); 4] = [
        ("inc", &axioms.inc, "required".to_owned()),
        ("con", &axioms.con, "required on the additive path".to_owned()),
        ("(a) axis vanishing", &axioms.axis_vanishing, tag("rho_plus case a")),
        ("(b) divergence", &axioms.divergence, tag("rho_plus case b")),
    ];
    for (name, v, role) in entries {
        rows.push(name, check_status(v.status), format!("{role}; {} samples", v.samples_used));
    }
}

fn axiom_details(out: &mut String, axioms: &AxiomVerdicts) {
    for (name, v) in [
        ("inc", &axioms.inc),
        ("con", &axioms.con),
        ("(a) axis vanishing", &axioms.axis_vanishing),
        ("(b) divergence", &axioms.divergence),
    ] {
        if let Some(c) = &v.counterexample {
            let _ = writeln!(out, "  {name} counterexample: {}", compact(c));
        }
        if let Some(n) = &v.note {
            let _ = writeln!(out, "  {name} note: {n}");
        }
    }
}

fn header(out: &mut String, meta: &RunMetadata) {
    let _ = writeln!(
        out,
        "{} {}  {}  seed {}  schema {}",
        meta.tool, meta.tool_version, meta.command, meta.seed, meta.schema_version
    );
    if let Some(ms) = meta.wall_time_ms {
        let _ = writeln!(out, "wall time: {ms:.1} ms");
    }
}

pub fn render_phi_text(doc: &PhiReportDocument) -> String {
    let mut out = String::new();
    header(&mut out, &doc.meta);
    let _ = writeln!(out, "phi: {}", doc.phi);
    let _ = writeln!(out, "\naxioms");
    let mut rows = Rows(Vec::new());
    axiom_rows(&mut rows, &doc.axioms, true);
    rows.render(&mut out);
    let case = match doc.rho_plus_case {
        Some(RhoPlusCase::A) => "a",
        Some(RhoPlusCase::B) => "b",
        None => "none",
    };
    let _ = writeln!(out, "  rho_plus case: {case}");
    axiom_details(&mut out, &doc.axioms);
    out
}

fn stage_row<T>(rows: &mut Rows, name: &str, stage: &Stage<T>, detail: impl FnOnce(&T) -> String) {
    let d = match (&stage.result, &stage.reason) {
        (Some(r), _) => detail(r),
        (None, Some(reason)) => reason.clone(),
        (None, None) => String::new(),
    };
    rows.push(name, stage.status, d);
}

fn boundary_detail(b: &BoundaryReport) -> String {
    let mode = match b.mode {
        crate::family::BoundaryMode::Exact => "exact",
        crate::family::BoundaryMode::Witness => "witness",
    };
    format!("{mode}; delta = {{{}}}", b.delta_points.join(", "))
}

fn details<T: Serialize>(out: &mut String, name: &str, stage: &Stage<T>) {
    if matches!(stage.status, Status::Fail | Status::Vacuous | Status::HypothesisFailed) {
        if let Some(r) = &stage.result {
            let _ = writeln!(out, "  {name}: {}", compact(r));
        }
    }
}

pub fn render_analysis_text(doc: &ReportDocument) -> String {
    let r = &doc.report;
    let h = &r.hypotheses;
    let mut out = String::new();
    header(&mut out, &doc.meta);
    let _ = writeln!(out, "phi: {}   rho: {}   eq_tol: {}", r.phi, r.rho, r.tolerance);
    let _ = write!(out, "overall: {}", compact(&r.overall_verdict).trim_matches('"'));
    if let Some(s) = &r.failed_stage {
        let _ = write!(out, " (stage: {s})");
    }
    out.push('\n');

    let _ = writeln!(out, "\nhypotheses: {}", h.status);
    let mut rows = Rows(Vec::new());
    rows.push("path", "", h.path.to_string());
    rows.push("families", "", format!("{} -> {}; {} pairs", h.domain_kind, h.codomain_kind, h.table_size));
    rows.push(
        "table invariants",
        if h.table_issues.is_empty() { Status::Pass } else { Status::HypothesisFailed },
        format!("{} issue(s)", h.table_issues.len()),
    );
    for (name, b) in [("boundary A", &h.boundary_domain), ("boundary B", &h.boundary_codomain)] {
        rows.push(name, if b.hypothesis_ok { Status::Pass } else { Status::HypothesisFailed }, boundary_detail(b));
    }
    axiom_rows(&mut rows, &h.axioms, false);
    if let Some(case) = h.rho_plus_case {
        rows.push("rho_plus case", "", compact(&case).trim_matches('"').to_owned());
    }
    rows.render(&mut out);
    for f in &h.failures {
        let _ = writeln!(out, "  failure: {f}");
    }
    for issue in &h.table_issues {
        let _ = writeln!(out, "  issue: {}", compact(issue));
    }
    axiom_details(&mut out, &h.axioms);

    let _ = writeln!(out, "\nstages");
    let mut rows = Rows(Vec::new());
    stage_row(&mut rows, "preservation", &r.preservation, |p| {
        format!(
            "norm {} (max dev {:e}); rho {} over {} pairs{} (max dev {:e})",
            p.norm.status,
            p.norm.max_deviation,
            p.rho.status,
            p.rho.pairs_checked,
            if p.rho.exhaustive { "" } else { ", sampled" },
            p.rho.max_deviation
        )
    });
    stage_row(&mut rows, "duality", &r.lemmas.duality, |d| format!("{} triples", d.triples_checked));
    stage_row(&mut rows, "fip", &r.lemmas.fip, |f| format!("{} tested, {} untestable", f.tested, f.untestable));
    stage_row(&mut rows, "recovery", &r.recovery, |s| match (&s.recovery, &s.error) {
        (Some(rec), _) => format!("bijective; r schedule {:?}", rec.r_schedule),
        (None, Some(e)) => e.to_string(),
        (None, None) => String::new(),
    });
    stage_row(&mut rows, "r-consistency", &r.lemmas.r_consistency, |c| {
        format!("{} points over r = {:?}", c.points_certified, c.r_schedule)
    });
    stage_row(&mut rows, "f-transport", &r.lemmas.f_transport, |t| {
        format!("{} points, {} vacuous", t.points_checked, t.vacuous_points.len())
    });
    stage_row(&mut rows, "conclusion", &r.conclusion, |m| format!("max | |Tf(y)| - |f(phi(y))| | = {:e}", m.max_deviation));
    rows.render(&mut out);

    if let Some(rec) = r.recovery.result.as_ref().and_then(|s| s.recovery.as_ref()) {
        let _ = writeln!(out, "\nphi map (y -> x)");
        let mut rows = Rows(Vec::new());
        for e in &rec.phi_map {
            rows.push(e.y.clone(), "->", e.x.clone());
        }
        rows.render(&mut out);
    }

    let mut witness = String::new();
    details(&mut witness, "preservation", &r.preservation);
    details(&mut witness, "duality", &r.lemmas.duality);
    details(&mut witness, "fip", &r.lemmas.fip);
    details(&mut witness, "recovery", &r.recovery);
    details(&mut witness, "f-transport", &r.lemmas.f_transport);
    details(&mut witness, "conclusion", &r.conclusion);
    if !witness.is_empty() {
        let _ = writeln!(out, "\nwitnesses");
        out.push_str(&witness);
    }
    if !r.notes.is_empty() {
        let _ = writeln!(out, "\nnotes");
        for n in &r.notes {
            let _ = writeln!(out, "  - {n}");
        }
    }
    out
}
