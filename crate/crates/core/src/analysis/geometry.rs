use serde::{Deserialize, Serialize};

use super::{MapTable, Status};
use crate::error::Result;
use crate::family::{f_set_members, v_set_members, AlgebraicPath};
use crate::space::{max_modulus_set, sup_norm, ComplexFunction, PointSet, ToleranceConfig};

/// `∩ M(·)` over a selector; the full space when the selector is empty.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Intersection {
    pub points: PointSet,
    pub vacuous: bool,
    /// Pair indices whose selected side lies in the `r`-scaled peaking set.
    pub selector: Vec<usize>,
}

/// Cached norms and maximizing sets of both table columns.
#[derive(Debug, Clone)]
pub struct TableGeometry<'a> {
    table: &'a MapTable,
    tol: ToleranceConfig,
    m_f: Vec<PointSet>,
    m_tf: Vec<PointSet>,
}

impl<'a> TableGeometry<'a> {
    pub fn new(table: &'a MapTable, tol: &ToleranceConfig) -> Self {
        Self {
            table,
            tol: *tol,
            m_f: table.fs().iter().map(|f| max_modulus_set(f, tol)).collect(),
            m_tf: table.tfs().iter().map(|f| max_modulus_set(f, tol)).collect(),
        }
    }

    pub fn table(&self) -> &MapTable {
        self.table
    }

    pub fn m_f(&self, i: usize) -> &PointSet {
        &self.m_f[i]
    }

    pub fn m_tf(&self, i: usize) -> &PointSet {
        &self.m_tf[i]
    }

    fn select(&self, list: &[ComplexFunction], point: usize, r: f64) -> Result<Vec<usize>> {
        match self.table.path() {
            AlgebraicPath::Additive => v_set_members(list, point, r, &self.tol),
            AlgebraicPath::Multiplicative => f_set_members(list, point, r, &self.tol),
        }
    }

    fn intersect(&self, selector: Vec<usize>, sets: &[PointSet], full: PointSet) -> Intersection {
        let mut points = full;
        for &i in &selector {
            points = points.intersection(&sets[i]).copied().collect();
        }
        Intersection {
            points,
            vacuous: selector.is_empty(),
            selector,
        }
    }

    /// `I^r_{y0} = ∩ M(f)` over pairs with `Tf ∈ r·V_{y0}(B)` (`F` on the
    /// multiplicative path).
    pub fn intersection_i(&self, y0: usize, r: f64) -> Result<Intersection> {
        let selector = self.select(self.table.tfs(), y0, r)?;
        Ok(self.intersect(selector, &self.m_f, self.table.x().all_points()))
    }

    /// `J^r_{x0} = ∩ M(Tf)` over pairs with `f ∈ r·V_{x0}(A)`.
    pub fn intersection_j(&self, x0: usize, r: f64) -> Result<Intersection> {
        let selector = self.select(self.table.fs(), x0, r)?;
        Ok(self.intersect(selector, &self.m_tf, self.table.y().all_points()))
    }
}

pub fn intersection_i(table: &MapTable, y0: usize, r: f64, tol: &ToleranceConfig) -> Result<Intersection> {
    check_index(table.y().len(), y0)?;
    TableGeometry::new(table, tol).intersection_i(y0, r)
}

pub fn intersection_j(table: &MapTable, x0: usize, r: f64, tol: &ToleranceConfig) -> Result<Intersection> {
    check_index(table.x().len(), x0)?;
    TableGeometry::new(table, tol).intersection_j(x0, r)
}

fn check_index(n: usize, i: usize) -> Result<()> {
    if i < n {
        Ok(())
    } else {
        Err(crate::error::Error::UnknownPoint(i.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityFailure {
    pub x0: String,
    pub y0: String,
    pub s: f64,
    /// `"i"`: `x0 ∈ I^1_{y0}` vs `y0 ∈ J^s_{x0}`;
    /// `"ii"`: `y0 ∈ J^1_{x0}` vs `x0 ∈ I^s_{y0}`.
    pub part: String,
    pub left: bool,
    pub right: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DualityVerdict {
    pub status: Status,
    pub triples_checked: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<DualityFailure>,
}

/// Both biconditionals relating `I` and `J` for every `(x0, y0, s)`.
pub fn duality_check(table: &MapTable, r_schedule: &[f64], tol: &ToleranceConfig) -> Result<DualityVerdict> {
    let geo = TableGeometry::new(table, tol);
    let (nx, ny) = (table.x().len(), table.y().len());
    let i1: Vec<Intersection> = (0..ny).map(|y| geo.intersection_i(y, 1.0)).collect::<Result<_>>()?;
    let j1: Vec<Intersection> = (0..nx).map(|x| geo.intersection_j(x, 1.0)).collect::<Result<_>>()?;
    let mut triples = 0;
    for &s in r_schedule {
        let is: Vec<Intersection> = (0..ny).map(|y| geo.intersection_i(y, s)).collect::<Result<_>>()?;
        let js: Vec<Intersection> = (0..nx).map(|x| geo.intersection_j(x, s)).collect::<Result<_>>()?;
        for x0 in 0..nx {
            for y0 in 0..ny {
                triples += 1;
                let checks = [
                    ("i", i1[y0].points.contains(&x0), js[x0].points.contains(&y0)),
                    ("ii", j1[x0].points.contains(&y0), is[y0].points.contains(&x0)),
                ];
                if let Some(&(part, left, right)) = checks.iter().find(|c| c.1 != c.2) {
                    return Ok(DualityVerdict {
                        status: Status::Fail,
                        triples_checked: triples,
                        failure: Some(DualityFailure {
                            x0: table.x().id(x0).to_owned(),
                            y0: table.y().id(y0).to_owned(),
                            s,
                            part: part.to_owned(),
                            left,
                            right,
                        }),
                    });
                }
            }
        }
    }
    Ok(DualityVerdict {
        status: Status::Pass,
        triples_checked: triples,
        failure: None,
    })
}

/// Sup norm helper shared by the lemma checks.
pub(crate) fn on_sphere(f: &ComplexFunction, r: f64, tol: &ToleranceConfig) -> bool {
    tol.close(sup_norm(f), r, r)
}
