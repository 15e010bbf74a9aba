use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::geometry::TableGeometry;
use super::{MapTable, Status};
use crate::error::Error;
use crate::space::{sup_norm, Complex, PointSet, ToleranceConfig};

pub const DEFAULT_R_SCHEDULE: [f64; 3] = [0.5, 1.0, 2.0];

#[derive(Debug, Clone, PartialEq, Error, Serialize, Deserialize)]
#[serde(tag = "error", rename_all = "snake_case")]
pub enum RecoveryError {
    #[error("I at y0 = {y0}, r = {r} is {set:?}, not a singleton{}", vacuity(.vacuous))]
    NonSingleton { y0: String, r: f64, set: Vec<String>, vacuous: bool },
    #[error("I at y0 = {y0} depends on r: {sets:?}")]
    RDependence { y0: String, sets: Vec<(f64, Vec<String>)> },
    #[error("J at x0 = {x0}, r = {r} is {set:?}, expected {{{y0}}}{}", vacuity(.vacuous))]
    JMismatch { x0: String, y0: String, r: f64, set: Vec<String>, vacuous: bool },
    #[error("recovered map is not a bijection: {witness}")]
    NotBijective { witness: String },
    #[error("{0}")]
    Input(String),
}

fn vacuity(vacuous: &bool) -> &'static str {
    if *vacuous {
        " (vacuous selector)"
    } else {
        ""
    }
}

impl RecoveryError {
    /// Failure rests only on empty selectors, so the table is too thin to decide.
    pub fn is_vacuous(&self) -> bool {
        matches!(
            self,
            RecoveryError::NonSingleton { vacuous: true, .. } | RecoveryError::JMismatch { vacuous: true, .. }
        )
    }
}

impl From<Error> for RecoveryError {
    fn from(e: Error) -> Self {
        RecoveryError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiEntry {
    pub y: String,
    pub x: String,
}

/// The recovered boundary map `Φ: Y → X`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PhiRecovery {
    pub phi_map: Vec<PhiEntry>,
    pub r_schedule: Vec<f64>,
    /// Per `y` in space order.
    pub singleton_certified: Vec<bool>,
    pub bijective: bool,
    pub max_modulus_deviation: f64,
    #[serde(skip)]
    map: Vec<usize>,
}

impl PhiRecovery {
    /// `Φ` as point indices, `y ↦ x`.
    pub fn map(&self) -> &[usize] {
        &self.map
    }
}

/// Locates `Φ(y0)` as the unique point of `I^r_{y0}` for every `r` in the
/// schedule, checks `J^r_{Φ(y0)} = {y0}`, and requires a bijection.
pub fn recover_phi(table: &MapTable, r_schedule: &[f64], tol: &ToleranceConfig) -> Result<PhiRecovery, RecoveryError> {
    if r_schedule.is_empty() || r_schedule.iter().any(|r| !(*r > 0.0 && r.is_finite())) {
        return Err(RecoveryError::Input(format!("r schedule must be nonempty and positive: {r_schedule:?}")));
    }
    let geo = TableGeometry::new(table, tol);
    let (xs, ys) = (table.x(), table.y());
    let ids_x = |s: &PointSet| xs.ids_of(s);
    let mut map = Vec::with_capacity(ys.len());

    for y0 in 0..ys.len() {
        let mut sets = Vec::with_capacity(r_schedule.len());
        for &r in r_schedule {
            let i = geo.intersection_i(y0, r)?;
            if i.vacuous || i.points.len() != 1 {
                return Err(RecoveryError::NonSingleton {
                    y0: ys.id(y0).to_owned(),
                    r,
                    set: ids_x(&i.points),
                    vacuous: i.vacuous,
                });
            }
            sets.push((r, i.points));
        }
        if sets.windows(2).any(|w| w[0].1 != w[1].1) {
            return Err(RecoveryError::RDependence {
                y0: ys.id(y0).to_owned(),
                sets: sets.iter().map(|(r, s)| (*r, ids_x(s))).collect(),
            });
        }
        let x0 = *sets[0].1.first().expect("singleton");
        for &r in r_schedule {
            let j = geo.intersection_j(x0, r)?;
            if j.vacuous || j.points.len() != 1 || !j.points.contains(&y0) {
                return Err(RecoveryError::JMismatch {
                    x0: xs.id(x0).to_owned(),
                    y0: ys.id(y0).to_owned(),
                    r,
                    set: ys.ids_of(&j.points),
                    vacuous: j.vacuous,
                });
            }
        }
        map.push(x0);
    }

    let mut preimage: Vec<Option<usize>> = vec![None; xs.len()];
    for (y, &x) in map.iter().enumerate() {
        if let Some(other) = preimage[x] {
            return Err(RecoveryError::NotBijective {
                witness: format!("{} and {} both map to {}", ys.id(other), ys.id(y), xs.id(x)),
            });
        }
        preimage[x] = Some(y);
    }
    if let Some(x) = preimage.iter().position(Option::is_none) {
        return Err(RecoveryError::NotBijective {
            witness: format!("{} has no preimage", xs.id(x)),
        });
    }

    let mut recovery = PhiRecovery {
        phi_map: map
            .iter()
            .enumerate()
            .map(|(y, &x)| PhiEntry {
                y: ys.id(y).to_owned(),
                x: xs.id(x).to_owned(),
            })
            .collect(),
        r_schedule: r_schedule.to_vec(),
        singleton_certified: vec![true; ys.len()],
        bijective: true,
        max_modulus_deviation: 0.0,
        map,
    };
    recovery.max_modulus_deviation = verify_modulus_identity(table, &recovery, tol).max_deviation;
    Ok(recovery)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusWitness {
    pub pair: usize,
    pub y: String,
    pub x: String,
    pub tf_y: Complex,
    pub f_x: Complex,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModulusVerdict {
    pub status: Status,
    pub max_deviation: f64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub worst: Option<ModulusWitness>,
}

/// `max | |Tf(y)| − |f(Φ(y))| |` over pairs and `y`.
pub fn verify_modulus_identity(table: &MapTable, recovery: &PhiRecovery, tol: &ToleranceConfig) -> ModulusVerdict {
    let mut max_deviation = 0.0_f64;
    let mut failed = false;
    let mut worst: Option<(f64, usize, usize)> = None;
    for (i, (f, tf)) in table.fs().iter().zip(table.tfs()).enumerate() {
        let bound = tol.eq_tol * (1.0 + sup_norm(f));
        for (y, &x) in recovery.map.iter().enumerate() {
            let dev = (tf.value(y).norm() - f.value(x).norm()).abs();
            max_deviation = max_deviation.max(dev);
            failed |= dev > bound;
            if dev > 0.0 && worst.is_none_or(|w| dev > w.0) {
                worst = Some((dev, i, y));
            }
        }
    }
    ModulusVerdict {
        status: if failed { Status::Fail } else { Status::Pass },
        max_deviation,
        worst: worst.map(|(_, i, y)| {
            let x = recovery.map[y];
            ModulusWitness {
                pair: i,
                y: table.y().id(y).to_owned(),
                x: table.x().id(x).to_owned(),
                tf_y: table.tfs()[i].value(y),
                f_x: table.fs()[i].value(x),
            }
        }),
    }
}
