//! Ground-truth instances: seeded families, planted composition-in-modulus
//! maps `Tf(y) = u(y)·f(σ(y))`, and controlled perturbations of map tables.

use std::f64::consts::TAU;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::analysis::{AnalysisOptions, MapTable, TableIssue};
use crate::error::{Error, Result};
use crate::family::{product_closure, AlgebraicPath, FamilyKind, FunctionFamily, MEMBER_SCALES};
use crate::index::DedupList;
use crate::phi::{PhiSpec, RhoKind, SamplerConfig};
use crate::space::{max_modulus_set, sup_norm, Complex, ComplexFunction, FiniteSpace, ToleranceConfig};

/// Largest modulus a random generator takes away from its peak point.
pub const OFF_PEAK_MAX: f64 = 0.9;

/// A bijection `σ: Y → X` with unimodular weights `u(y) = e^{iθ(y)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct PlantedMap {
    sigma: Vec<usize>,
    angles: Vec<f64>,
}

impl PlantedMap {
    /// `sigma[y]` is the index in `X` of `σ(y)`; `angles[y]` is `θ(y)` in radians.
    pub fn new(x_len: usize, sigma: Vec<usize>, angles: Vec<f64>) -> Result<Self> {
        if sigma.len() != x_len {
            return Err(Error::InvalidScenario(format!(
                "sigma has {} entries but X has {x_len} points, so it cannot be a bijection",
                sigma.len()
            )));
        }
        if angles.len() != sigma.len() {
            return Err(Error::InvalidScenario(format!(
                "{} weight angles for {} points of Y",
                angles.len(),
                sigma.len()
            )));
        }
        let mut seen = vec![false; x_len];
        for (y, &x) in sigma.iter().enumerate() {
            if x >= x_len || std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidScenario(format!("sigma is not a bijection (entry {y} -> {x})")));
            }
        }
        if let Some(y) = angles.iter().position(|a| !a.is_finite()) {
            return Err(Error::InvalidScenario(format!("weight angle for point {y} is not finite")));
        }
        Ok(Self { sigma, angles })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            sigma: (0..n).collect(),
            angles: vec![0.0; n],
        }
    }

    /// Uniform random permutation; angles uniform in `[0, 2π)` when `phases`, else zero.
    pub fn random(n: usize, phases: bool, rng: &mut impl Rng) -> Self {
        let mut sigma: Vec<usize> = (0..n).collect();
        sigma.shuffle(rng);
        let angles = (0..n).map(|_| if phases { rng.gen_range(0.0..TAU) } else { 0.0 }).collect();
        Self { sigma, angles }
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn angles(&self) -> &[f64] {
        &self.angles
    }

    pub fn weight(&self, y: usize) -> Complex {
        Complex::from_polar(1.0, self.angles[y])
    }

    pub fn is_unweighted(&self) -> bool {
        self.angles.iter().all(|a| *a == 0.0)
    }

    /// `σ⁻¹` as indices.
    pub fn inverse(&self) -> Vec<usize> {
        let mut inv = vec![0; self.sigma.len()];
        for (y, &x) in self.sigma.iter().enumerate() {
            inv[x] = y;
        }
        inv
    }

    /// `Tf` on `y_space`.
    pub fn apply(&self, f: &ComplexFunction, y_space: &Arc<FiniteSpace>) -> ComplexFunction {
        let values = (0..y_space.len()).map(|y| self.weight(y) * f.value(self.sigma[y])).collect();
        ComplexFunction::new(y_space.clone(), values).expect("finite values on a space of the same size")
    }
}

fn random_generator(
    space: &Arc<FiniteSpace>,
    kind: FamilyKind,
    path: AlgebraicPath,
    rng: &mut ChaCha8Rng,
) -> ComplexFunction {
    let n = space.len();
    let peak = rng.gen_range(0..n);
    let real = kind == FamilyKind::PositiveCone;
    let values = (0..n)
        .map(|x| {
            if x == peak {
                return match path {
                    AlgebraicPath::Additive => Complex::new(1.0, 0.0),
                    AlgebraicPath::Multiplicative => Complex::from_polar(1.0, rng.gen_range(0.0..TAU)),
                };
            }
            let m = rng.gen_range(0.0..=OFF_PEAK_MAX);
            if real {
                Complex::new(m, 0.0)
            } else {
                Complex::from_polar(m, rng.gen_range(0.0..TAU))
            }
        })
        .collect();
    ComplexFunction::new(space.clone(), values).expect("finite values")
}

/// A seeded family with `δ(A) = X` by construction.
///
/// The generators are the indicator of every point followed by `count`
/// random functions peaking at one point (value `1` on the additive path,
/// a unimodular value on the multiplicative one; modulus at most
/// [`OFF_PEAK_MAX`] elsewhere, real and nonnegative for cones). Explicit
/// lists also carry the `½` and `2` rescalings of the indicators, and on the
/// multiplicative path are closed under pairwise products first.
pub fn random_family(
    space: Arc<FiniteSpace>,
    kind: FamilyKind,
    path: AlgebraicPath,
    count: usize,
    seed: u64,
) -> Result<FunctionFamily> {
    if !kind.allowed_on(path) {
        return Err(Error::InvalidFamily(format!("kind {kind} is not allowed on the {path} path")));
    }
    let tol = ToleranceConfig::default();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let indicators: Vec<ComplexFunction> = (0..space.len()).map(|x| ComplexFunction::indicator(space.clone(), x)).collect();
    let mut gens = indicators.clone();
    gens.extend((0..count).map(|_| random_generator(&space, kind, path, &mut rng)));
    let functions = match kind {
        FamilyKind::ExplicitList => {
            let base = match path {
                AlgebraicPath::Additive => gens,
                AlgebraicPath::Multiplicative => product_closure(&gens, &tol),
            };
            let mut list = DedupList::default();
            for f in base {
                list.push(f, &tol);
            }
            for s in MEMBER_SCALES {
                for f in &indicators {
                    list.push(f.scale_real(s), &tol);
                }
            }
            list.into_vec()
        }
        _ => gens,
    };
    FunctionFamily::new(space, kind, path, functions)
}

/// Smallest modulus a degenerate family takes anywhere.
pub const DEGENERATE_FLOOR: f64 = 0.2;

/// A family of the requested kind whose strong boundary is empty: lists of
/// functions with every modulus in `[0.2, 1]` (so no member is small off any
/// point, even after products), and spans or cones of a single generator
/// without zeros. Needs at least two points.
pub fn degenerate_family(
    space: Arc<FiniteSpace>,
    kind: FamilyKind,
    path: AlgebraicPath,
    seed: u64,
) -> Result<FunctionFamily> {
    if !kind.allowed_on(path) {
        return Err(Error::InvalidFamily(format!("kind {kind} is not allowed on the {path} path")));
    }
    if space.len() < 2 {
        return Err(Error::InvalidFamily("a degenerate family needs at least two points".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let real = kind == FamilyKind::PositiveCone;
    let count = if kind.is_exact() { 1 } else { 4 };
    let functions = (0..count)
        .map(|_| {
            let peak = rng.gen_range(0..space.len());
            let values = (0..space.len())
                .map(|x| {
                    let m = if x == peak { 1.0 } else { rng.gen_range(DEGENERATE_FLOOR..=OFF_PEAK_MAX) };
                    if real || x == peak {
                        Complex::new(m, 0.0)
                    } else {
                        Complex::from_polar(m, rng.gen_range(0.0..TAU))
                    }
                })
                .collect();
            ComplexFunction::new(space.clone(), values).expect("finite values")
        })
        .collect();
    FunctionFamily::new(space, kind, path, functions)
}

/// Appends to a `mult_list` the rotated indicators `conj(u(y))·1_{σ(y)}`,
/// whose images are the indicators of `Y`. Without them a weighted image
/// list has no member equal to 1 anywhere and `δ(B)` is empty. Other kinds
/// are returned unchanged (spans already contain every rotation).
pub fn align_family(family: &FunctionFamily, planted: &PlantedMap) -> Result<FunctionFamily> {
    if family.kind() != FamilyKind::MultList || planted.is_unweighted() {
        return Ok(family.clone());
    }
    let x = family.space();
    let mut gens = family.functions().to_vec();
    for (y, &sx) in planted.sigma().iter().enumerate() {
        if planted.angles()[y] != 0.0 {
            gens.push(ComplexFunction::indicator(x.clone(), sx).scale(planted.weight(y).conj()));
        }
    }
    family.with_functions(x.clone(), gens)
}

/// The planted table `f ↦ u·(f∘σ)` over the working member list of `family`.
///
/// Spans with nontrivial weights also get, for every member peaking at a
/// single point `x`, the rotated copy whose image is real and positive at
/// `σ⁻¹(x)`, so value-peaking selectors stay inhabited on the codomain side.
/// The codomain is the image: spans and cones keep their kind with the
/// images of the generators, an unweighted `mult_list` keeps its kind, and
/// everything else becomes the explicit list of images.
pub fn build_composition_map(
    family: &FunctionFamily,
    y: Arc<FiniteSpace>,
    planted: &PlantedMap,
    tol: &ToleranceConfig,
) -> Result<MapTable> {
    let x = family.space();
    if y.len() != x.len() || planted.sigma().len() != y.len() {
        return Err(Error::InvalidScenario(format!(
            "sigma must be a bijection between {} points of Y and {} points of X",
            y.len(),
            x.len()
        )));
    }
    if family.kind() == FamilyKind::PositiveCone && !planted.is_unweighted() {
        return Err(Error::InvalidScenario("weights on a positive cone must be identically 1".into()));
    }
    let members = family.members(tol);
    let mut domain = DedupList::default();
    for f in &members {
        domain.push(f.clone(), tol);
    }
    if family.kind() == FamilyKind::SubspaceSpan && !planted.is_unweighted() {
        let inv = planted.inverse();
        for f in &members {
            let peak = max_modulus_set(f, tol);
            let norm = sup_norm(f);
            if peak.len() != 1 || norm == 0.0 {
                continue;
            }
            let px = *peak.first().expect("singleton");
            let v = f.value(px);
            let c = planted.weight(inv[px]).conj() * (norm / v);
            domain.push(f.scale(c), tol);
        }
    }
    let fs = domain.into_vec();
    let image = |list: &[ComplexFunction]| list.iter().map(|f| planted.apply(f, &y)).collect::<Vec<_>>();
    let codomain = match family.kind() {
        FamilyKind::SubspaceSpan | FamilyKind::PositiveCone => family.with_functions(y.clone(), image(family.functions()))?,
        FamilyKind::MultList if planted.is_unweighted() => family.with_functions(y.clone(), image(family.functions()))?,
        _ => FunctionFamily::new(y.clone(), FamilyKind::ExplicitList, family.path(), image(&members))?,
    };
    let tfs = image(&fs);
    MapTable::new(family.clone(), codomain, fs.into_iter().zip(tfs).collect(), true)
}

/// Adds `delta` to `Tf(point)` for pair `pair_index`.
///
/// The codomain stays the image of the table: it keeps its family when the
/// perturbed image is still a member and the table still covers it, and
/// otherwise becomes the explicit list of the new images.
pub fn perturb_table(
    table: &MapTable,
    pair_index: usize,
    point: usize,
    delta: Complex,
    tol: &ToleranceConfig,
) -> Result<MapTable> {
    if pair_index >= table.len() {
        return Err(Error::InvalidTable(format!(
            "pair index {pair_index} out of range (table has {})",
            table.len()
        )));
    }
    if point >= table.y().len() {
        return Err(Error::UnknownPoint(format!("#{point}")));
    }
    if !(delta.re.is_finite() && delta.im.is_finite()) {
        return Err(Error::NonFinite {
            point: table.y().id(point).to_owned(),
        });
    }
    if delta == Complex::new(0.0, 0.0) {
        return Ok(table.clone());
    }
    let mut values = table.tfs()[pair_index].values().to_vec();
    values[point] += delta;
    let tf = ComplexFunction::new(table.y().clone(), values)?;
    let candidate = table.with_tf(pair_index, tf)?;
    let still_image = !candidate
        .validate(tol)
        .iter()
        .any(|i| matches!(i, TableIssue::CodomainNonMember { .. } | TableIssue::NotSurjective { .. }));
    if still_image {
        return Ok(candidate);
    }
    let mut images = DedupList::default();
    for g in candidate.tfs() {
        images.push(g.clone(), tol);
    }
    let codomain = FunctionFamily::new(table.y().clone(), FamilyKind::ExplicitList, table.path(), images.into_vec())?;
    MapTable::new(
        table.domain().clone(),
        codomain,
        candidate.fs().iter().cloned().zip(candidate.tfs().iter().cloned()).collect(),
        table.surjective_onto_list(),
    )
}

/// How the table of a scenario is obtained.
#[derive(Debug, Clone)]
pub enum MapSpec {
    Planted(PlantedMap),
    /// Explicit `(f, Tf)` pairs; the codomain is the list of the `Tf`.
    Pairs(Vec<(ComplexFunction, ComplexFunction)>),
}

/// A single perturbation of one table entry.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Perturbation {
    pub pair_index: usize,
    /// Index in `Y`.
    pub point: usize,
    pub delta: Complex,
}

/// Everything needed to build a table and analyse it.
#[derive(Debug, Clone)]
pub struct ScenarioSpec {
    pub x: Arc<FiniteSpace>,
    pub y: Arc<FiniteSpace>,
    pub phi: PhiSpec,
    pub rho: RhoKind,
    pub family: FunctionFamily,
    pub map: MapSpec,
    pub perturbation: Option<Perturbation>,
    pub tolerance: ToleranceConfig,
    /// Falls back to the default sampler seeded with `seed`.
    pub sampler: Option<SamplerConfig>,
    pub seed: u64,
}

impl ScenarioSpec {
    /// The (possibly perturbed) map table.
    pub fn build_table(&self) -> Result<MapTable> {
        let tol = &self.tolerance;
        if self.family.space().as_ref() != self.x.as_ref() {
            return Err(Error::SpaceMismatch);
        }
        let table = match &self.map {
            MapSpec::Planted(p) => build_composition_map(&self.family, self.y.clone(), p, tol)?,
            MapSpec::Pairs(pairs) => {
                if pairs.is_empty() {
                    return Err(Error::InvalidScenario("map has no pairs".into()));
                }
                let mut images = DedupList::default();
                for (_, tf) in pairs {
                    images.push(tf.clone(), tol);
                }
                let codomain =
                    FunctionFamily::new(self.y.clone(), FamilyKind::ExplicitList, self.family.path(), images.into_vec())?;
                MapTable::new(self.family.clone(), codomain, pairs.clone(), true)?
            }
        };
        match self.perturbation {
            Some(p) => perturb_table(&table, p.pair_index, p.point, p.delta, tol),
            None => Ok(table),
        }
    }

    pub fn options(&self) -> AnalysisOptions {
        let mut o = AnalysisOptions::with_seed(self.seed);
        o.tolerance = self.tolerance;
        if let Some(s) = self.sampler {
            o.sampler = s;
        }
        o
    }
}

/// Phi specs the seeded scenarios draw from.
pub fn scenario_phis() -> [PhiSpec; 3] {
    [PhiSpec::linear(1.0, 1.0), PhiSpec::Product, PhiSpec::pnorm(2.0)]
}

/// Most generators a seeded scenario family may list.
pub const MAX_FAMILY_SIZE: usize = 32;

/// A seeded planted scenario: `|X| = |Y| ∈ 2..=8`, a random path, kind,
/// `ρ` kind and `φ` from [`scenario_phis`], and a random bijection. Weights
/// are random for spans and multiplicative lists (aligned by
/// [`align_family`]) and identically 1 for cones and explicit lists.
pub fn random_scenario(seed: u64) -> ScenarioSpec {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = rng.gen_range(2..=8);
    let x = Arc::new(FiniteSpace::new((1..=n).map(|i| format!("x{i}"))).expect("distinct ids"));
    let y = Arc::new(FiniteSpace::new((1..=n).map(|i| format!("y{i}"))).expect("distinct ids"));
    let path = if rng.gen_bool(0.5) {
        AlgebraicPath::Additive
    } else {
        AlgebraicPath::Multiplicative
    };
    let kinds: &[FamilyKind] = match path {
        AlgebraicPath::Additive => &[FamilyKind::SubspaceSpan, FamilyKind::PositiveCone, FamilyKind::ExplicitList],
        AlgebraicPath::Multiplicative => &[FamilyKind::MultList, FamilyKind::ExplicitList],
    };
    let mut kind = *kinds.choose(&mut rng).expect("nonempty");
    let count = rng.gen_range(1..=3);
    let family_seed = rng.gen();
    let mut family = random_family(x.clone(), kind, path, count, family_seed).expect("kind matches path");
    if family.functions().len() > MAX_FAMILY_SIZE {
        // product-closed explicit lists grow quadratically; fall back to generators
        kind = FamilyKind::MultList;
        family = random_family(x.clone(), kind, path, count, family_seed).expect("kind matches path");
    }
    let rho = if rng.gen_bool(0.5) { RhoKind::Plus } else { RhoKind::Max };
    let phi = scenario_phis().choose(&mut rng).expect("nonempty").clone();
    let phases = matches!(kind, FamilyKind::SubspaceSpan | FamilyKind::MultList);
    let planted = PlantedMap::random(n, phases, &mut rng);
    let family = align_family(&family, &planted).expect("same space");
    ScenarioSpec {
        x,
        y,
        phi,
        rho,
        family,
        map: MapSpec::Planted(planted),
        perturbation: None,
        tolerance: ToleranceConfig::default(),
        sampler: None,
        seed,
    }
}

/// A pair of `table` whose image peaks at a single point, with that point.
/// Prefers non-indicator members so a perturbation leaves the boundary intact.
pub fn peaking_member(table: &MapTable, tol: &ToleranceConfig) -> Option<(usize, usize)> {
    let single = |i: usize| {
        let tf = &table.tfs()[i];
        let m = max_modulus_set(tf, tol);
        (m.len() == 1 && sup_norm(tf) > 0.0).then(|| *m.first().expect("singleton"))
    };
    let nonzero = |i: usize| table.tfs()[i].values().iter().filter(|v| v.norm() > 0.0).count();
    (0..table.len())
        .filter_map(|i| single(i).map(|y| (i, y)))
        .max_by_key(|&(i, _)| (nonzero(i), std::cmp::Reverse(i)))
}

/// Radial perturbation raising `|Tf(point)|` by `amount`.
pub fn modulus_delta(table: &MapTable, pair_index: usize, point: usize, amount: f64) -> Complex {
    let v = table.tfs()[pair_index].value(point);
    if v.norm() == 0.0 {
        Complex::new(amount, 0.0)
    } else {
        v / v.norm() * amount
    }
}

/// Perturbation rotating `Tf(point)` by `angle` without changing its modulus.
pub fn phase_delta(table: &MapTable, pair_index: usize, point: usize, angle: f64) -> Complex {
    let v = table.tfs()[pair_index].value(point);
    v * Complex::from_polar(1.0, angle) - v
}
