use std::fmt;

use serde::{Deserialize, Serialize};

use super::geometry::duality_check;
use super::lemmas::{f_transport_check, fip_check, FipConfig, FipVerdict, TransportVerdict};
use super::preservation::{check_norm_preservation, check_rho_preservation, NormVerdict, PreservationVerdict};
use super::recovery::{recover_phi, verify_modulus_identity, ModulusVerdict, PhiRecovery, RecoveryError, DEFAULT_R_SCHEDULE};
use super::{DualityVerdict, MapTable, Status, TableIssue};
use crate::family::{strong_boundary_points, AlgebraicPath, BoundaryMode, BoundaryReport, FamilyKind};
use crate::phi::{check_all, AxiomVerdicts, PhiSpec, RhoKind, RhoPlusCase, SamplerConfig};
use crate::space::ToleranceConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisOptions {
    pub tolerance: ToleranceConfig,
    pub sampler: SamplerConfig,
    pub r_schedule: Vec<f64>,
    pub fip: FipConfig,
    /// Seed for pair subsampling on large tables.
    pub pair_seed: u64,
}

impl Default for AnalysisOptions {
    fn default() -> Self {
        Self {
            tolerance: ToleranceConfig::default(),
            sampler: SamplerConfig::default(),
            r_schedule: DEFAULT_R_SCHEDULE.to_vec(),
            fip: FipConfig::default(),
            pair_seed: 0,
        }
    }
}

impl AnalysisOptions {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            sampler: SamplerConfig::with_seed(seed),
            fip: FipConfig {
                seed,
                ..FipConfig::default()
            },
            pair_seed: seed,
            ..Self::default()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OverallVerdict {
    Pass,
    Fail,
    HypothesisFailed,
    Vacuous,
}

impl OverallVerdict {
    /// CLI exit code for this verdict.
    pub fn exit_code(self) -> i32 {
        match self {
            OverallVerdict::Pass => 0,
            OverallVerdict::Fail => 1,
            OverallVerdict::HypothesisFailed | OverallVerdict::Vacuous => 3,
        }
    }
}

impl fmt::Display for OverallVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OverallVerdict::Pass => "pass",
            OverallVerdict::Fail => "fail",
            OverallVerdict::HypothesisFailed => "hypothesis_failed",
            OverallVerdict::Vacuous => "vacuous",
        })
    }
}

/// A stage result, or why it did not run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Stage<T> {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub result: Option<T>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

impl<T> Stage<T> {
    fn ran(status: Status, result: T) -> Self {
        Self {
            status,
            result: Some(result),
            reason: None,
        }
    }

    fn skipped(reason: &str) -> Self {
        Self {
            status: Status::Skipped,
            result: None,
            reason: Some(reason.to_owned()),
        }
    }

    fn not_applicable(reason: &str) -> Self {
        Self {
            status: Status::NotApplicable,
            result: None,
            reason: Some(reason.to_owned()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HypothesisSection {
    pub status: Status,
    pub path: AlgebraicPath,
    pub domain_kind: FamilyKind,
    pub codomain_kind: FamilyKind,
    pub table_size: usize,
    pub table_issues: Vec<TableIssue>,
    pub boundary_domain: BoundaryReport,
    pub boundary_codomain: BoundaryReport,
    pub axioms: AxiomVerdicts,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub rho_plus_case: Option<RhoPlusCase>,
    /// One line per failed hypothesis.
    pub failures: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationSection {
    pub status: Status,
    pub norm: NormVerdict,
    pub rho: PreservationVerdict,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RecoverySection {
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recovery: Option<PhiRecovery>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub error: Option<RecoveryError>,
}

/// `I^r ∩ Ch` agrees across the whole schedule at every point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RConsistency {
    pub r_schedule: Vec<f64>,
    pub points_certified: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaSection {
    pub duality: Stage<DualityVerdict>,
    pub r_consistency: Stage<RConsistency>,
    pub fip: Stage<FipVerdict>,
    pub f_transport: Stage<TransportVerdict>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisReport {
    pub overall_verdict: OverallVerdict,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failed_stage: Option<String>,
    pub phi: PhiSpec,
    pub rho: RhoKind,
    pub tolerance: f64,
    pub hypotheses: HypothesisSection,
    pub preservation: Stage<PreservationSection>,
    pub recovery: Stage<RecoverySection>,
    pub lemmas: LemmaSection,
    pub conclusion: Stage<ModulusVerdict>,
    pub notes: Vec<String>,
}

const AFTER_HYPOTHESIS: &str = "hypotheses not met";
const AFTER_PRESERVATION: &str = "preservation failed";
const AFTER_RECOVERY: &str = "boundary map not certified";

fn hypotheses(table: &MapTable, spec: &PhiSpec, kind: RhoKind, options: &AnalysisOptions) -> HypothesisSection {
    let tol = &options.tolerance;
    let table_issues = table.validate(tol);
    let boundary_domain = strong_boundary_points(table.domain(), tol);
    let boundary_codomain = strong_boundary_points(table.codomain(), tol);
    let axioms = check_all(spec, &options.sampler, tol);
    let rho_plus_case = match kind {
        RhoKind::Plus => axioms.rho_plus_case(),
        RhoKind::Max => None,
    };

    let mut failures = Vec::new();
    if !table_issues.is_empty() {
        failures.push(format!("map table violates {} invariant(s)", table_issues.len()));
    }
    for (side, report) in [("domain", &boundary_domain), ("codomain", &boundary_codomain)] {
        if !report.hypothesis_ok {
            let missing: Vec<&String> = report
                .ambient_choquet
                .iter()
                .filter(|p| !report.delta_points.contains(p))
                .collect();
            failures.push(format!("{side} strong boundary misses {missing:?}"));
        }
    }
    if let Some(reason) = super::preservation_precondition(&axioms, table.path()) {
        failures.push(reason);
    }
    if kind == RhoKind::Plus && rho_plus_case.is_none() {
        failures.push("rho_plus needs phi(t,0) = 0 = phi(0,t) or divergence; neither was established".to_owned());
    }

    HypothesisSection {
        status: if failures.is_empty() {
            Status::Pass
        } else {
            Status::HypothesisFailed
        },
        path: table.path(),
        domain_kind: table.domain().kind(),
        codomain_kind: table.codomain().kind(),
        table_size: table.len(),
        table_issues,
        boundary_domain,
        boundary_codomain,
        axioms,
        rho_plus_case,
        failures,
    }
}

fn notes(table: &MapTable, kind: RhoKind, hyp: &HypothesisSection) -> Vec<String> {
    let mut notes = vec!["condition (a) is checked for t >= 0, including t = 0".to_owned()];
    if kind == RhoKind::Plus {
        notes.push("divergence is never reported as a failure; an unconfirmed limit is inconclusive".to_owned());
    }
    if [&hyp.boundary_domain, &hyp.boundary_codomain]
        .iter()
        .any(|b| b.mode == BoundaryMode::Witness)
    {
        notes.push("strong boundary of a list family is relative to the listed members".to_owned());
    }
    notes.push("ambient Choquet boundary is the whole space; on a finite discrete space a bijection is a homeomorphism".to_owned());
    if table.path() == AlgebraicPath::Additive {
        notes.push("F-set transport applies to the multiplicative path only".to_owned());
    }
    notes
}

/// Runs every stage in order; a stage that does not pass marks the later
/// ones as skipped and fixes the overall verdict.
pub fn run_full_analysis(table: &MapTable, spec: &PhiSpec, kind: RhoKind, options: &AnalysisOptions) -> AnalysisReport {
    let tol = &options.tolerance;
    let hyp = hypotheses(table, spec, kind, options);
    let notes = notes(table, kind, &hyp);
    let mut report = AnalysisReport {
        overall_verdict: OverallVerdict::Pass,
        failed_stage: None,
        phi: spec.clone(),
        rho: kind,
        tolerance: tol.eq_tol,
        preservation: Stage::skipped(AFTER_HYPOTHESIS),
        recovery: Stage::skipped(AFTER_HYPOTHESIS),
        lemmas: LemmaSection {
            duality: Stage::skipped(AFTER_HYPOTHESIS),
            r_consistency: Stage::skipped(AFTER_HYPOTHESIS),
            fip: Stage::skipped(AFTER_HYPOTHESIS),
            f_transport: Stage::skipped(AFTER_HYPOTHESIS),
        },
        conclusion: Stage::skipped(AFTER_HYPOTHESIS),
        notes,
        hypotheses: hyp,
    };
    if !report.hypotheses.status.is_pass() {
        report.overall_verdict = OverallVerdict::HypothesisFailed;
        report.failed_stage = Some("hypotheses".into());
        return report;
    }

    let norm = check_norm_preservation(table, tol);
    let rho = check_rho_preservation(table, spec, kind, &report.hypotheses.axioms, tol, options.pair_seed);
    let status = if norm.status.is_pass() && rho.status.is_pass() {
        Status::Pass
    } else {
        Status::Fail
    };
    report.preservation = Stage::ran(status, PreservationSection { status, norm, rho });
    if status != Status::Pass {
        report.overall_verdict = OverallVerdict::Fail;
        report.failed_stage = Some("preservation".into());
        report.recovery = Stage::skipped(AFTER_PRESERVATION);
        report.lemmas = LemmaSection {
            duality: Stage::skipped(AFTER_PRESERVATION),
            r_consistency: Stage::skipped(AFTER_PRESERVATION),
            fip: Stage::skipped(AFTER_PRESERVATION),
            f_transport: Stage::skipped(AFTER_PRESERVATION),
        };
        report.conclusion = Stage::skipped(AFTER_PRESERVATION);
        return report;
    }

    let duality = match duality_check(table, &options.r_schedule, tol) {
        Ok(v) => Stage::ran(v.status, v),
        Err(e) => Stage {
            status: Status::Fail,
            result: None,
            reason: Some(e.to_string()),
        },
    };
    let fip = fip_check(table, &options.fip, tol);
    report.lemmas.duality = duality;
    report.lemmas.fip = Stage::ran(fip.status, fip);

    let recovery = match recover_phi(table, &options.r_schedule, tol) {
        Ok(r) => r,
        Err(error) => {
            let status = if error.is_vacuous() {
                Status::Vacuous
            } else {
                Status::Fail
            };
            report.recovery = Stage::ran(
                status,
                RecoverySection {
                    status,
                    recovery: None,
                    error: Some(error),
                },
            );
            report.lemmas.r_consistency = Stage::skipped(AFTER_RECOVERY);
            report.lemmas.f_transport = Stage::skipped(AFTER_RECOVERY);
            report.conclusion = Stage::skipped(AFTER_RECOVERY);
            report.overall_verdict = if status == Status::Vacuous {
                OverallVerdict::Vacuous
            } else {
                OverallVerdict::Fail
            };
            report.failed_stage = Some("recovery".into());
            return report;
        }
    };

    report.lemmas.r_consistency = Stage::ran(
        Status::Pass,
        RConsistency {
            r_schedule: recovery.r_schedule.clone(),
            points_certified: recovery.singleton_certified.iter().filter(|c| **c).count(),
        },
    );
    report.lemmas.f_transport = match table.path() {
        AlgebraicPath::Multiplicative => {
            let v = f_transport_check(table, &recovery, tol);
            Stage::ran(v.status, v)
        }
        AlgebraicPath::Additive => Stage::not_applicable("additive path"),
    };
    let modulus = verify_modulus_identity(table, &recovery, tol);
    report.conclusion = Stage::ran(modulus.status, modulus);
    report.recovery = Stage::ran(
        Status::Pass,
        RecoverySection {
            status: Status::Pass,
            recovery: Some(recovery),
            error: None,
        },
    );

    let later = [
        ("duality", report.lemmas.duality.status),
        ("fip", report.lemmas.fip.status),
        ("f_transport", report.lemmas.f_transport.status),
        ("conclusion", report.conclusion.status),
    ];
    if let Some((name, _)) = later.iter().find(|(_, s)| *s == Status::Fail) {
        report.overall_verdict = OverallVerdict::Fail;
        report.failed_stage = Some((*name).into());
    }
    report
}
