use serde::{Deserialize, Serialize};

use super::FunctionFamily;
use crate::error::{Error, Result};
use crate::space::{sup_norm, Complex, ComplexFunction, FiniteSpace, PointSet, ToleranceConfig};

/// Witness-mode schedule is `ε = 2^-k` for `k = 0..=EPS_SCHEDULE_DEPTH`.
pub const EPS_SCHEDULE_DEPTH: u32 = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BoundaryMode {
    /// Indicator membership (closed subspaces and cones).
    Exact,
    /// ε-schedule over a finite member list; verdicts are relative to the list.
    Witness,
}

/// Best peaking function found at one point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryWitness {
    pub point: String,
    pub values: Vec<Complex>,
    /// `max |h|` off the point.
    pub off_point_sup: f64,
    /// Smallest schedule ε met, `None` if even `ε = 1` fails.
    pub epsilon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundaryReport {
    pub mode: BoundaryMode,
    pub relative_to_list: bool,
    pub delta_points: Vec<String>,
    pub ambient_choquet: Vec<String>,
    pub hypothesis_ok: bool,
    /// One entry per point of `delta_points`, same order.
    pub witnesses: Vec<BoundaryWitness>,
    /// Witness mode only: best candidates at points outside `δ(A)`.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub partial_witnesses: Vec<BoundaryWitness>,
    #[serde(skip)]
    delta_set: PointSet,
}

impl BoundaryReport {
    pub fn delta(&self) -> &PointSet {
        &self.delta_set
    }

    pub fn contains(&self, x: usize) -> bool {
        self.delta_set.contains(&x)
    }

    /// Witness (certified or partial) recorded for point id `id`.
    pub fn witness_for(&self, id: &str) -> Option<&BoundaryWitness> {
        self.witnesses
            .iter()
            .chain(&self.partial_witnesses)
            .find(|w| w.point == id)
    }
}

/// `Ch(C(X))`: on a finite discrete space every point.
pub fn ambient_choquet(space: &FiniteSpace) -> PointSet {
    space.all_points()
}

fn check_point(list: &[ComplexFunction], x0: usize) -> Result<()> {
    match list.first() {
        Some(f) if x0 >= f.space().len() => Err(Error::UnknownPoint(x0.to_string())),
        _ => Ok(()),
    }
}

/// Indices of members of `r·V_{x0}`: `f(x0) ≈ r` and `‖f‖ ≈ r`.
pub fn v_set_members(list: &[ComplexFunction], x0: usize, r: f64, tol: &ToleranceConfig) -> Result<Vec<usize>> {
    check_point(list, x0)?;
    let slack = tol.eq_tol * (1.0 + r);
    Ok(list
        .iter()
        .enumerate()
        .filter(|(_, f)| (f.value(x0) - r).norm() <= slack && (sup_norm(f) - r).abs() <= slack)
        .map(|(i, _)| i)
        .collect())
}

/// Indices of members of `r·F_{x0}`: `|f(x0)| ≈ r` and `‖f‖ ≈ r`.
pub fn f_set_members(list: &[ComplexFunction], x0: usize, r: f64, tol: &ToleranceConfig) -> Result<Vec<usize>> {
    check_point(list, x0)?;
    let slack = tol.eq_tol * (1.0 + r);
    Ok(list
        .iter()
        .enumerate()
        .filter(|(_, f)| (f.value(x0).norm() - r).abs() <= slack && (sup_norm(f) - r).abs() <= slack)
        .map(|(i, _)| i)
        .collect())
}

/// `max |h|` over points outside `keep`.
pub(crate) fn sup_outside(h: &ComplexFunction, keep: impl Fn(usize) -> bool) -> f64 {
    h.values()
        .iter()
        .enumerate()
        .filter(|&(i, _)| !keep(i))
        .map(|(_, v)| v.norm())
        .fold(0.0, f64::max)
}

/// Strong-boundary candidates at `x`: `|h(x) − 1| ≤ eq_tol`, `‖h‖ ≤ 1 + eq_tol`.
pub(crate) fn peaking_candidates<'a>(
    members: &'a [ComplexFunction],
    x: usize,
    tol: &'a ToleranceConfig,
) -> impl Iterator<Item = &'a ComplexFunction> + 'a {
    members
        .iter()
        .filter(move |h| (h.value(x) - 1.0).norm() <= tol.eq_tol && sup_norm(h) <= 1.0 + tol.eq_tol)
}

fn schedule_epsilon(off_sup: f64) -> Option<f64> {
    (0..=EPS_SCHEDULE_DEPTH)
        .map(|k| 0.5_f64.powi(k as i32))
        .take_while(|&eps| off_sup < eps)
        .last()
}

/// `δ(A)` with one witness per boundary point.
pub fn strong_boundary_points(family: &FunctionFamily, tol: &ToleranceConfig) -> BoundaryReport {
    let space = family.space();
    let n = space.len();
    let ambient = ambient_choquet(space);
    let mut delta = PointSet::new();
    let mut witnesses = Vec::new();
    let mut partial = Vec::new();

    let mode = if family.kind().is_exact() {
        BoundaryMode::Exact
    } else {
        BoundaryMode::Witness
    };
    match mode {
        BoundaryMode::Exact => {
            for x in 0..n {
                let chi = ComplexFunction::indicator(space.clone(), x);
                if family.contains(&chi, tol).unwrap_or(false) {
                    delta.insert(x);
                    witnesses.push(BoundaryWitness {
                        point: space.id(x).to_owned(),
                        values: chi.values().to_vec(),
                        off_point_sup: 0.0,
                        epsilon: Some(0.0),
                    });
                }
            }
        }
        BoundaryMode::Witness => {
            let members = family.members(tol);
            for x in 0..n {
                let best = peaking_candidates(&members, x, tol)
                    .map(|h| (sup_outside(h, |i| i == x), h))
                    .min_by(|a, b| a.0.total_cmp(&b.0));
                let Some((off, h)) = best else { continue };
                let epsilon = schedule_epsilon(off);
                let w = BoundaryWitness {
                    point: space.id(x).to_owned(),
                    values: h.values().to_vec(),
                    off_point_sup: off,
                    epsilon,
                };
                if epsilon == Some(0.5_f64.powi(EPS_SCHEDULE_DEPTH as i32)) {
                    delta.insert(x);
                    witnesses.push(w);
                } else {
                    partial.push(w);
                }
            }
        }
    }

    BoundaryReport {
        mode,
        relative_to_list: mode == BoundaryMode::Witness,
        delta_points: space.ids_of(&delta),
        ambient_choquet: space.ids_of(&ambient),
        hypothesis_ok: delta == ambient,
        witnesses,
        partial_witnesses: partial,
        delta_set: delta,
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::family::{AlgebraicPath, FamilyKind};

    fn space(n: usize) -> Arc<FiniteSpace> {
        Arc::new(FiniteSpace::numbered(n).unwrap())
    }

    fn real(x: &Arc<FiniteSpace>, v: &[f64]) -> ComplexFunction {
        ComplexFunction::from_real(x.clone(), v).unwrap()
    }

    fn family(x: &Arc<FiniteSpace>, kind: FamilyKind, fs: &[&[f64]]) -> FunctionFamily {
        let path = if kind == FamilyKind::MultList {
            AlgebraicPath::Multiplicative
        } else {
            AlgebraicPath::Additive
        };
        FunctionFamily::new(x.clone(), kind, path, fs.iter().map(|v| real(x, v)).collect()).unwrap()
    }

    #[test]
    fn full_span_has_every_point() {
        let tol = ToleranceConfig::default();
        let x = space(3);
        let fam = family(&x, FamilyKind::SubspaceSpan, &[&[1.0, 1.0, 0.0], &[0.0, 1.0, 1.0], &[1.0, 0.0, 1.0]]);
        let report = strong_boundary_points(&fam, &tol);
        assert_eq!(report.delta_points, vec!["1", "2", "3"]);
        assert!(report.hypothesis_ok);
        for (i, w) in report.witnesses.iter().enumerate() {
            assert_eq!(w.values, ComplexFunction::indicator(x.clone(), i).values());
        }
        assert_eq!(*report.delta(), ambient_choquet(&x));
    }

    #[test]
    fn ray_cone_has_no_boundary() {
        let tol = ToleranceConfig::default();
        let x = space(2);
        let report = strong_boundary_points(&family(&x, FamilyKind::PositiveCone, &[&[1.0, 1.0]]), &tol);
        assert!(report.delta_points.is_empty());
        assert!(!report.hypothesis_ok);
    }

    #[test]
    fn explicit_list_boundary() {
        let tol = ToleranceConfig::default();
        let x = space(2);
        let fam = family(&x, FamilyKind::ExplicitList, &[&[1.0, 0.0], &[0.0, 1.0], &[1.0, 1.0]]);
        let report = strong_boundary_points(&fam, &tol);
        assert_eq!(report.delta_points, vec!["1", "2"]);
        assert!(report.relative_to_list);

        let partial = family(&x, FamilyKind::ExplicitList, &[&[1.0, 0.25], &[0.0, 1.0]]);
        let report = strong_boundary_points(&partial, &tol);
        assert_eq!(report.delta_points, vec!["2"]);
        assert_eq!(report.partial_witnesses[0].epsilon, Some(0.5));
    }

    #[test]
    fn v_and_f_sets() {
        let tol = ToleranceConfig::default();
        let x = space(2);
        let list = vec![real(&x, &[1.0, 0.0]), real(&x, &[0.0, 1.0]), real(&x, &[1.0, 1.0])];
        assert_eq!(v_set_members(&list, 0, 1.0, &tol).unwrap(), vec![0, 2]);
        assert!(v_set_members(&list, 0, 0.5, &tol).unwrap().is_empty());
        assert_eq!(v_set_members(&[real(&x, &[2.0, 0.0])], 0, 2.0, &tol).unwrap(), vec![0]);
        assert!(v_set_members(&list, 5, 1.0, &tol).is_err());

        let i = ComplexFunction::new(x.clone(), vec![Complex::i(), Complex::new(0.0, 0.0)]).unwrap();
        let list = vec![i];
        assert_eq!(f_set_members(&list, 0, 1.0, &tol).unwrap(), vec![0]);
        assert!(v_set_members(&list, 0, 1.0, &tol).unwrap().is_empty());
        assert!(f_set_members(&[real(&x, &[0.5, 0.5])], 0, 1.0, &tol).unwrap().is_empty());
    }

    #[test]
    fn f_set_contains_v_set() {
        let tol = ToleranceConfig::default();
        let x = space(3);
        let list: Vec<_> = [[1.0, 0.5, -1.0], [1.0, 0.0, 0.0], [-1.0, 1.0, 0.2], [0.5, 0.5, 0.5]]
            .iter()
            .map(|v| real(&x, v))
            .collect();
        for x0 in 0..3 {
            let v = v_set_members(&list, x0, 1.0, &tol).unwrap();
            let f = f_set_members(&list, x0, 1.0, &tol).unwrap();
            assert!(v.iter().all(|i| f.contains(i)));
        }
    }

    #[test]
    fn exact_mode_ignores_generator_presentation() {
        let tol = ToleranceConfig::default();
        let x = space(3);
        let a = family(&x, FamilyKind::SubspaceSpan, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 1.0]]);
        let b = family(&x, FamilyKind::SubspaceSpan, &[&[1.0, 1.0, 1.0], &[2.0, -1.0, -1.0]]);
        let ra = strong_boundary_points(&a, &tol);
        assert_eq!(ra.delta_points, vec!["1"]);
        assert_eq!(ra, strong_boundary_points(&b, &tol));
    }
}
