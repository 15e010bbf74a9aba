//! Families `A ⊆ C(X)`: spans, positive cones of spans, multiplicative lists
//! and explicit lists, together with their strong boundary points and the
//! peaking witnesses used to locate boundary points through a map.

mod boundary;
mod witness;

use std::fmt;
use std::sync::{Arc, OnceLock};

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::DedupList;
use crate::space::{sup_norm, Complex, ComplexFunction, FiniteSpace, ToleranceConfig};

pub use boundary::{
    ambient_choquet, f_set_members, strong_boundary_points, v_set_members, BoundaryMode,
    BoundaryReport, BoundaryWitness, EPS_SCHEDULE_DEPTH,
};
pub use witness::{
    peaking_witness_romax, peaking_witness_roplus, PeakingWitnesses, RomaxWitness, RoplusCase,
    RoplusWitness, WitnessError,
};

/// Positive scalings applied when materialising the working member list.
pub const MEMBER_SCALES: [f64; 2] = [0.5, 2.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FamilyKind {
    SubspaceSpan,
    PositiveCone,
    MultList,
    ExplicitList,
}

/// Which characterisation governs the family: additive semigroups
/// (spans and cones) or multiplicative ones.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AlgebraicPath {
    Additive,
    Multiplicative,
}

impl FamilyKind {
    pub fn allowed_on(self, path: AlgebraicPath) -> bool {
        matches!(
            (path, self),
            (AlgebraicPath::Additive, FamilyKind::SubspaceSpan)
                | (AlgebraicPath::Additive, FamilyKind::PositiveCone)
                | (AlgebraicPath::Additive, FamilyKind::ExplicitList)
                | (AlgebraicPath::Multiplicative, FamilyKind::MultList)
                | (AlgebraicPath::Multiplicative, FamilyKind::ExplicitList)
        )
    }

    /// Closed subspaces and cones admit the exact rank test for `δ(A)`.
    pub fn is_exact(self) -> bool {
        matches!(self, FamilyKind::SubspaceSpan | FamilyKind::PositiveCone)
    }
}

impl fmt::Display for FamilyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FamilyKind::SubspaceSpan => "subspace_span",
            FamilyKind::PositiveCone => "positive_cone",
            FamilyKind::MultList => "mult_list",
            FamilyKind::ExplicitList => "explicit_list",
        })
    }
}

impl fmt::Display for AlgebraicPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            AlgebraicPath::Additive => "additive",
            AlgebraicPath::Multiplicative => "multiplicative",
        })
    }
}

/// Orthonormal basis of the complex span of the generators.
#[derive(Debug, Clone)]
struct SpanBasis {
    q: DMatrix<Complex>,
}

impl SpanBasis {
    fn new(n: usize, generators: &[ComplexFunction]) -> Self {
        if generators.is_empty() {
            return Self {
                q: DMatrix::zeros(n, 0),
            };
        }
        let m = DMatrix::from_fn(n, generators.len(), |i, j| generators[j].value(i));
        let svd = m.svd(true, false);
        let u = svd.u.expect("left singular vectors requested");
        let largest = svd.singular_values.iter().cloned().fold(0.0_f64, f64::max);
        let cutoff = 1e-12 * largest * n.max(generators.len()) as f64;
        let keep: Vec<usize> = svd
            .singular_values
            .iter()
            .enumerate()
            .filter(|(_, &s)| s > cutoff && s > 0.0)
            .map(|(i, _)| i)
            .collect();
        Self {
            q: u.select_columns(keep.iter()),
        }
    }

    fn rank(&self) -> usize {
        self.q.ncols()
    }

    /// Euclidean distance from `f` to the span.
    fn residual(&self, f: &ComplexFunction) -> f64 {
        let v = DVector::from_column_slice(f.values());
        if self.q.ncols() == 0 {
            return v.norm();
        }
        let coeffs = self.q.adjoint() * &v;
        (v - &self.q * coeffs).norm()
    }
}

/// A family of functions on one finite space.
///
/// For spans and cones `functions` are generators; for `mult_list` they are
/// generators of a product closure; for `explicit_list` they are the members.
#[derive(Debug, Clone)]
pub struct FunctionFamily {
    space: Arc<FiniteSpace>,
    kind: FamilyKind,
    path: AlgebraicPath,
    functions: Vec<ComplexFunction>,
    basis: OnceLock<SpanBasis>,
}

impl FunctionFamily {
    pub fn new(
        space: Arc<FiniteSpace>,
        kind: FamilyKind,
        path: AlgebraicPath,
        functions: Vec<ComplexFunction>,
    ) -> Result<Self> {
        if !kind.allowed_on(path) {
            return Err(Error::InvalidFamily(format!(
                "kind {kind} is not allowed on the {path} path"
            )));
        }
        if functions.is_empty() {
            return Err(Error::InvalidFamily("family has no functions".into()));
        }
        if functions.iter().any(|f| f.space().as_ref() != space.as_ref()) {
            return Err(Error::SpaceMismatch);
        }
        Ok(Self {
            space,
            kind,
            path,
            functions,
            basis: OnceLock::new(),
        })
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn kind(&self) -> FamilyKind {
        self.kind
    }

    pub fn path(&self) -> AlgebraicPath {
        self.path
    }

    pub fn functions(&self) -> &[ComplexFunction] {
        &self.functions
    }

    fn basis(&self) -> &SpanBasis {
        self.basis
            .get_or_init(|| SpanBasis::new(self.space.len(), &self.functions))
    }

    /// Dimension of the span of the generators.
    pub fn span_rank(&self) -> usize {
        self.basis().rank()
    }

    /// Structural invariants that need a tolerance: nonnegative cone
    /// generators and product closure of multiplicative lists.
    pub fn validate(&self, tol: &ToleranceConfig) -> Result<()> {
        if self.kind == FamilyKind::PositiveCone {
            if let Some(i) = self
                .functions
                .iter()
                .position(|g| !g.is_real_nonnegative(tol))
            {
                return Err(Error::InvalidFamily(format!(
                    "positive cone generator #{i} is not real and nonnegative"
                )));
            }
        }
        if let Some((i, j)) = self.multiplicative_closure_defects(tol).first() {
            return Err(Error::InvalidFamily(format!(
                "product of generators #{i} and #{j} is missing from the member list"
            )));
        }
        Ok(())
    }

    /// Pairs of generators whose product is absent from [`Self::members`]
    /// (exhaustive to depth 2). Always empty for non-multiplicative kinds.
    pub fn multiplicative_closure_defects(&self, tol: &ToleranceConfig) -> Vec<(usize, usize)> {
        if self.kind != FamilyKind::MultList {
            return Vec::new();
        }
        let members = self.members(tol);
        let index = crate::index::FunctionIndex::build(&members);
        let mut defects = Vec::new();
        for (i, a) in self.functions.iter().enumerate() {
            for (j, b) in self.functions.iter().enumerate().skip(i) {
                let p = a.mul(b).expect("generators share the family space");
                if index.find(&members, &p, tol).is_none() {
                    defects.push((i, j));
                }
            }
        }
        defects
    }

    /// The finite working list of members used by every list-based computation.
    ///
    /// * spans and cones: generators, midpoints of generator pairs lying on a
    ///   common sphere, and their `½`, `2` rescalings;
    /// * `mult_list`: generators and their pairwise products, with rescalings;
    /// * `explicit_list`: the listed functions as given.
    pub fn members(&self, tol: &ToleranceConfig) -> Vec<ComplexFunction> {
        match self.kind {
            FamilyKind::ExplicitList => self.functions.clone(),
            FamilyKind::SubspaceSpan | FamilyKind::PositiveCone => {
                with_scalings(with_sphere_midpoints(&self.functions, tol), tol)
            }
            FamilyKind::MultList => with_scalings(product_closure(&self.functions, tol), tol),
        }
    }

    /// Whether `f` belongs to the family.
    ///
    /// Spans use a least-squares residual `<= eq_tol·(1 + ‖f‖)`; cones add
    /// real nonnegativity; lists compare against the working member list.
    pub fn contains(&self, f: &ComplexFunction, tol: &ToleranceConfig) -> Result<bool> {
        if f.space().as_ref() != self.space.as_ref() {
            return Err(Error::SpaceMismatch);
        }
        Ok(match self.kind {
            FamilyKind::SubspaceSpan => self.in_span(f, tol),
            FamilyKind::PositiveCone => f.is_real_nonnegative(tol) && self.in_span(f, tol),
            FamilyKind::MultList | FamilyKind::ExplicitList => {
                return Ok(self.contains_each(std::slice::from_ref(f), tol)?[0]);
            }
        })
    }

    /// Membership of many functions, building the list index once.
    pub fn contains_each(&self, fs: &[ComplexFunction], tol: &ToleranceConfig) -> Result<Vec<bool>> {
        if fs.iter().any(|f| f.space().as_ref() != self.space.as_ref()) {
            return Err(Error::SpaceMismatch);
        }
        if self.kind.is_exact() {
            return fs.iter().map(|f| self.contains(f, tol)).collect();
        }
        let members = self.members(tol);
        let index = crate::index::FunctionIndex::build(&members);
        Ok(fs.iter().map(|f| index.find(&members, f, tol).is_some()).collect())
    }

    fn in_span(&self, f: &ComplexFunction, tol: &ToleranceConfig) -> bool {
        self.basis().residual(f) <= tol.eq_tol * (1.0 + sup_norm(f))
    }

    /// Same family with generators replaced (used for images under a map).
    pub fn with_functions(&self, space: Arc<FiniteSpace>, functions: Vec<ComplexFunction>) -> Result<Self> {
        Self::new(space, self.kind, self.path, functions)
    }
}

/// `membership(family, f, tol)`.
pub fn membership(family: &FunctionFamily, f: &ComplexFunction, tol: &ToleranceConfig) -> Result<bool> {
    family.contains(f, tol)
}

fn with_sphere_midpoints(base: &[ComplexFunction], tol: &ToleranceConfig) -> Vec<ComplexFunction> {
    let mut out = DedupList::default();
    for f in base {
        out.push(f.clone(), tol);
    }
    for (i, a) in base.iter().enumerate() {
        let na = sup_norm(a);
        for b in &base[i + 1..] {
            let nb = sup_norm(b);
            if na == 0.0 || !tol.close(na, nb, na) || a.approx_eq(b, tol) {
                continue;
            }
            let mid = a.add(b).expect("same space").scale_real(0.5);
            if tol.close(sup_norm(&mid), na, na) {
                out.push(mid, tol);
            }
        }
    }
    out.into_vec()
}

pub(crate) fn product_closure(gens: &[ComplexFunction], tol: &ToleranceConfig) -> Vec<ComplexFunction> {
    let mut out = DedupList::default();
    for g in gens {
        out.push(g.clone(), tol);
    }
    for (i, a) in gens.iter().enumerate() {
        for b in &gens[i..] {
            out.push(a.mul(b).expect("same space"), tol);
        }
    }
    out.into_vec()
}

fn with_scalings(base: Vec<ComplexFunction>, tol: &ToleranceConfig) -> Vec<ComplexFunction> {
    let mut out = DedupList::default();
    for f in &base {
        out.push(f.clone(), tol);
    }
    for scale in MEMBER_SCALES {
        for f in &base {
            out.push(f.scale(Complex::new(scale, 0.0)), tol);
        }
    }
    out.into_vec()
}
