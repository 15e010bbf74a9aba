//! Map tables `f ↦ Tf`, preservation checks, recovery of the boundary map
//! `Φ: Y → X`, and the intermediate-lemma checks on certified tables.

mod geometry;
mod lemmas;
mod pipeline;
mod preservation;
mod recovery;
mod table;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use geometry::{duality_check, intersection_i, intersection_j, DualityFailure, DualityVerdict, Intersection, TableGeometry};
pub use lemmas::{f_transport_check, fip_check, FipConfig, FipFailure, FipVerdict, Side, TransportFailure, TransportVerdict};
pub use pipeline::{
    run_full_analysis, AnalysisOptions, AnalysisReport, HypothesisSection, LemmaSection, OverallVerdict,
    PreservationSection, RConsistency, RecoverySection, Stage,
};
pub use preservation::{
    check_norm_preservation, check_rho_preservation, preservation_precondition, NormVerdict, NormWitness, PairWitness,
    PreservationVerdict, EXHAUSTIVE_PAIR_LIMIT,
};
pub use recovery::{
    recover_phi, verify_modulus_identity, ModulusVerdict, ModulusWitness, PhiEntry, PhiRecovery, RecoveryError,
    DEFAULT_R_SCHEDULE,
};
pub use table::{MapTable, TableIssue};

/// Outcome of one analysis stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    HypothesisFailed,
    Vacuous,
    Skipped,
    NotApplicable,
}

impl Status {
    pub fn is_pass(self) -> bool {
        self == Status::Pass
    }
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::HypothesisFailed => "hypothesis_failed",
            Status::Vacuous => "vacuous",
            Status::Skipped => "skipped",
            Status::NotApplicable => "not_applicable",
        })
    }
}
