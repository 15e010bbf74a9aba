use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{MapTable, Status};
use crate::family::AlgebraicPath;
use crate::phi::{rho, AxiomVerdicts, PhiSpec, RhoKind};
use crate::space::{sup_norm, Complex, ToleranceConfig};

/// Exhaustive pair loops up to this many table entries.
pub const EXHAUSTIVE_PAIR_LIMIT: usize = 512;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormWitness {
    pub pair: usize,
    pub f: Vec<Complex>,
    pub tf: Vec<Complex>,
    pub norm_f: f64,
    pub norm_tf: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormVerdict {
    pub status: Status,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst: Option<NormWitness>,
}

/// `|‖Tf‖ − ‖f‖| ≤ eq_tol·(1 + ‖f‖)` for every pair.
pub fn check_norm_preservation(table: &MapTable, tol: &ToleranceConfig) -> NormVerdict {
    let mut max_deviation = 0.0_f64;
    let mut worst: Option<(f64, usize)> = None;
    let mut failed = false;
    for i in 0..table.len() {
        let (f, tf) = table.pair(i);
        let (nf, ntf) = (sup_norm(f), sup_norm(tf));
        let dev = (ntf - nf).abs();
        max_deviation = max_deviation.max(dev);
        failed |= dev > tol.eq_tol * (1.0 + nf);
        let scaled = dev / (1.0 + nf);
        if dev > 0.0 && worst.is_none_or(|(w, _)| scaled > w) {
            worst = Some((scaled, i));
        }
    }
    NormVerdict {
        status: if failed { Status::Fail } else { Status::Pass },
        max_deviation,
        worst: worst.map(|(_, i)| {
            let (f, tf) = table.pair(i);
            NormWitness {
                pair: i,
                f: f.values().to_vec(),
                tf: tf.values().to_vec(),
                norm_f: sup_norm(f),
                norm_tf: sup_norm(tf),
            }
        }),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PairWitness {
    pub i: usize,
    pub j: usize,
    pub f: Vec<Complex>,
    pub g: Vec<Complex>,
    pub tf: Vec<Complex>,
    pub tg: Vec<Complex>,
    /// `ρ(f, g)`.
    pub rho_domain: f64,
    /// `ρ(Tf, Tg)`.
    pub rho_codomain: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreservationVerdict {
    pub status: Status,
    pub pairs_checked: usize,
    pub exhaustive: bool,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst: Option<PairWitness>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

/// Why the axioms do not license a preservation check, if they do not.
pub fn preservation_precondition(axioms: &AxiomVerdicts, path: AlgebraicPath) -> Option<String> {
    if !axioms.inc.passed() {
        return Some(format!("phi fails (inc): {:?}", axioms.inc.status));
    }
    if path == AlgebraicPath::Additive && !axioms.con.passed() {
        return Some(format!("phi fails (con), required on the additive path: {:?}", axioms.con.status));
    }
    None
}

/// `ρ(Tf, Tg) = ρ(f, g)` within `eq_tol·(1 + ρ(f, g))` over unordered pairs
/// `i ≤ j` (ρ is symmetric). Tables above [`EXHAUSTIVE_PAIR_LIMIT`] entries
/// check every diagonal pair plus a seeded subsample of the off-diagonal ones.
pub fn check_rho_preservation(
    table: &MapTable,
    spec: &PhiSpec,
    kind: RhoKind,
    axioms: &AxiomVerdicts,
    tol: &ToleranceConfig,
    seed: u64,
) -> PreservationVerdict {
    if let Some(reason) = preservation_precondition(axioms, table.path()) {
        return PreservationVerdict {
            status: Status::HypothesisFailed,
            pairs_checked: 0,
            exhaustive: false,
            max_deviation: 0.0,
            worst: None,
            note: Some(reason),
        };
    }
    let m = table.len();
    let exhaustive = m <= EXHAUSTIVE_PAIR_LIMIT;
    let pairs: Vec<(usize, usize)> = if exhaustive {
        (0..m).flat_map(|i| (i..m).map(move |j| (i, j))).collect()
    } else {
        let budget = EXHAUSTIVE_PAIR_LIMIT * (EXHAUSTIVE_PAIR_LIMIT + 1) / 2;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..m)
            .map(|i| (i, i))
            .chain((0..budget).map(|_| {
                let (a, b) = (rng.gen_range(0..m), rng.gen_range(0..m));
                (a.min(b), a.max(b))
            }))
            .collect()
    };

    let mut max_deviation = 0.0_f64;
    let mut worst: Option<(f64, usize, usize, f64, f64)> = None;
    let mut failed = false;
    let mut note = None;
    for &(i, j) in &pairs {
        let (f, tf) = table.pair(i);
        let (g, tg) = table.pair(j);
        let (lhs, rhs) = match (rho(spec, kind, tf, tg), rho(spec, kind, f, g)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                failed = true;
                note.get_or_insert_with(|| format!("rho evaluation failed at pair ({i}, {j}): {e}"));
                continue;
            }
        };
        let dev = (lhs - rhs).abs();
        max_deviation = max_deviation.max(dev);
        failed |= dev > tol.eq_tol * (1.0 + rhs);
        let scaled = dev / (1.0 + rhs);
        if dev > 0.0 && worst.is_none_or(|w| scaled > w.0) {
            worst = Some((scaled, i, j, rhs, lhs));
        }
    }
    if !exhaustive {
        note.get_or_insert_with(|| format!("{} of {} pairs sampled (seed {seed})", pairs.len(), m * (m + 1) / 2));
    }
    PreservationVerdict {
        status: if failed { Status::Fail } else { Status::Pass },
        pairs_checked: pairs.len(),
        exhaustive,
        max_deviation,
        worst: worst.map(|(_, i, j, rho_domain, rho_codomain)| PairWitness {
            i,
            j,
            f: table.fs()[i].values().to_vec(),
            g: table.fs()[j].values().to_vec(),
            tf: table.tfs()[i].values().to_vec(),
            tg: table.tfs()[j].values().to_vec(),
            rho_domain,
            rho_codomain,
        }),
        note,
    }
}
