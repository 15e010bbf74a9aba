use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::geometry::{on_sphere, TableGeometry};
use super::recovery::PhiRecovery;
use super::{MapTable, Status};
use crate::family::{f_set_members, AlgebraicPath};
use crate::index::FunctionIndex;
use crate::space::{sup_norm, Complex, ComplexFunction, PointSet, ToleranceConfig};

/// How subsets are drawn for the finite-intersection check.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FipConfig {
    pub seed: u64,
    /// Random triples tried per sphere on top of all pairs.
    pub triples_per_sphere: usize,
}

impl Default for FipConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            triples_per_sphere: 64,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// Subsets of `A`, maximizing sets of their images.
    Domain,
    /// Subsets of `B`, maximizing sets of their preimages.
    Codomain,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FipFailure {
    pub side: Side,
    pub radius: f64,
    pub members: Vec<usize>,
    /// Pair index of the combined function `h`.
    pub combined: usize,
    /// Point of `M(Th)` missing from some `M(Tf_i)` (or the mirror).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub point: Option<String>,
    pub intersection: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FipVerdict {
    pub status: Status,
    pub tested: usize,
    pub untestable: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<FipFailure>,
}

/// Groups indices by sup norm (within tolerance), ascending.
fn spheres(list: &[ComplexFunction], tol: &ToleranceConfig) -> Vec<(f64, Vec<usize>)> {
    let mut order: Vec<(f64, usize)> = list.iter().enumerate().map(|(i, f)| (sup_norm(f), i)).collect();
    order.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let mut out: Vec<(f64, Vec<usize>)> = Vec::new();
    for (r, i) in order {
        match out.last_mut() {
            Some((r0, members)) if tol.close(r, *r0, *r0) => members.push(i),
            _ => out.push((r, vec![i])),
        }
    }
    out.retain(|(r, _)| *r > 0.0);
    for (_, members) in &mut out {
        members.sort_unstable();
    }
    out
}

struct SideView<'a> {
    side: Side,
    /// Functions the subset is drawn from.
    source: &'a [ComplexFunction],
    /// Maximizing sets on the other side, by pair index.
    image_m: &'a dyn Fn(usize) -> &'a PointSet,
    ids: &'a dyn Fn(usize) -> String,
}

/// Finite intersection property of maximizing sets over convex (additive)
/// or multiplicative subsets of a sphere, checked in both directions.
///
/// For a subset `f_1..f_n` on `S_r`, the combined function is the average
/// (additive) or `Π f_i / r^n` (multiplicative, on the unit sphere). When it
/// is itself in the table, every point of `M(Th)` must lie in every
/// `M(Tf_i)`; otherwise the subset is counted as untestable.
pub fn fip_check(table: &MapTable, cfg: &FipConfig, tol: &ToleranceConfig) -> FipVerdict {
    let geo = TableGeometry::new(table, tol);
    let m_f = |i: usize| geo.m_f(i);
    let m_tf = |i: usize| geo.m_tf(i);
    let xs = table.x().clone();
    let ys = table.y().clone();
    let id_x = move |i: usize| xs.id(i).to_owned();
    let id_y = move |i: usize| ys.id(i).to_owned();
    let views = [
        SideView {
            side: Side::Domain,
            source: table.fs(),
            image_m: &m_tf,
            ids: &id_y,
        },
        SideView {
            side: Side::Codomain,
            source: table.tfs(),
            image_m: &m_f,
            ids: &id_x,
        },
    ];

    let mut tested = 0;
    let mut untestable = 0;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for view in &views {
        let index = FunctionIndex::build(view.source);
        for (r, members) in spheres(view.source, tol) {
            let mut subsets: Vec<Vec<usize>> = Vec::new();
            for (a, &i) in members.iter().enumerate() {
                let start = if table.path() == AlgebraicPath::Multiplicative { a } else { a + 1 };
                for &j in &members[start..] {
                    subsets.push(vec![i, j]);
                }
            }
            if members.len() >= 3 {
                for _ in 0..cfg.triples_per_sphere {
                    let mut pick = sample(&mut rng, members.len(), 3).into_vec();
                    pick.sort_unstable();
                    subsets.push(pick.into_iter().map(|k| members[k]).collect());
                }
            }
            for subset in subsets {
                let (h, target) = combine(view.source, &subset, r, table.path());
                if !on_sphere(&h, target, tol) {
                    untestable += 1;
                    continue;
                }
                let Some(k) = index.find(view.source, &h, tol) else {
                    untestable += 1;
                    continue;
                };
                tested += 1;
                let mut common: PointSet = (view.image_m)(subset[0]).clone();
                for &i in &subset[1..] {
                    common = common.intersection((view.image_m)(i)).copied().collect();
                }
                let escaping = (view.image_m)(k).iter().find(|p| !common.contains(p)).copied();
                if common.is_empty() || escaping.is_some() {
                    return FipVerdict {
                        status: Status::Fail,
                        tested,
                        untestable,
                        failure: Some(FipFailure {
                            side: view.side,
                            radius: r,
                            members: subset,
                            combined: k,
                            point: escaping.map(view.ids),
                            intersection: common.iter().map(|&p| (view.ids)(p)).collect(),
                        }),
                    };
                }
            }
        }
    }
    FipVerdict {
        status: Status::Pass,
        tested,
        untestable,
        failure: None,
    }
}

/// The combined function and the sphere it must lie on.
fn combine(list: &[ComplexFunction], subset: &[usize], r: f64, path: AlgebraicPath) -> (ComplexFunction, f64) {
    let first = &list[subset[0]];
    match path {
        AlgebraicPath::Additive => {
            let mut h = first.clone();
            for &i in &subset[1..] {
                h = h.add(&list[i]).expect("same space");
            }
            (h.scale_real(1.0 / subset.len() as f64), r)
        }
        AlgebraicPath::Multiplicative => {
            let mut h = first.scale_real(1.0 / r);
            for &i in &subset[1..] {
                h = h.mul(&list[i].scale_real(1.0 / r)).expect("same space");
            }
            (h, 1.0)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportFailure {
    pub y0: String,
    pub x0: String,
    /// `image` if `T(F_{x0}(A))` has a member outside `F_{y0}(B)`, else `codomain`.
    pub side: String,
    pub escaping: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TransportVerdict {
    pub status: Status,
    pub points_checked: usize,
    /// Points where both F-sets were empty.
    pub vacuous_points: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub failure: Option<TransportFailure>,
}

/// `T(F_{x0}(A)) = F_{y0}(B)` for `x0 = Φ(y0)`, as sets up to tolerance.
pub fn f_transport_check(table: &MapTable, recovery: &PhiRecovery, tol: &ToleranceConfig) -> TransportVerdict {
    if table.path() != AlgebraicPath::Multiplicative {
        return TransportVerdict {
            status: Status::NotApplicable,
            points_checked: 0,
            vacuous_points: Vec::new(),
            failure: None,
        };
    }
    let tfs = table.tfs();
    let mut vacuous_points = Vec::new();
    for (y0, &x0) in recovery.map().iter().enumerate() {
        let image: Vec<ComplexFunction> = f_set_members(table.fs(), x0, 1.0, tol)
            .expect("x0 in X")
            .into_iter()
            .map(|i| tfs[i].clone())
            .collect();
        let target: Vec<ComplexFunction> = f_set_members(tfs, y0, 1.0, tol)
            .expect("y0 in Y")
            .into_iter()
            .map(|i| tfs[i].clone())
            .collect();
        if image.is_empty() && target.is_empty() {
            vacuous_points.push(table.y().id(y0).to_owned());
            continue;
        }
        let missing = |from: &[ComplexFunction], into: &[ComplexFunction]| {
            let index = FunctionIndex::build(into);
            from.iter().find(|f| index.find(into, f, tol).is_none()).cloned()
        };
        let escape = missing(&image, &target)
            .map(|f| ("image", f))
            .or_else(|| missing(&target, &image).map(|f| ("codomain", f)));
        if let Some((side, f)) = escape {
            return TransportVerdict {
                status: Status::Fail,
                points_checked: y0 + 1,
                vacuous_points,
                failure: Some(TransportFailure {
                    y0: table.y().id(y0).to_owned(),
                    x0: table.x().id(x0).to_owned(),
                    side: side.to_owned(),
                    escaping: f.values().to_vec(),
                }),
            };
        }
    }
    TransportVerdict {
        status: Status::Pass,
        points_checked: recovery.map().len(),
        vacuous_points,
        failure: None,
    }
}
