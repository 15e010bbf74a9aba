//! Constructive peaking functions for the `ρ_max` and `ρ₊` inequalities.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::boundary::{peaking_candidates, strong_boundary_points, sup_outside, BoundaryMode, BoundaryReport};
use super::FunctionFamily;
use crate::error::Error;
use crate::phi::{phi_real, rho, rho_scalar, AxiomVerdicts, PhiSpec, RhoKind, RhoPlusCase};
use crate::space::{sup_norm, Complex, ComplexFunction, ToleranceConfig};

pub use crate::phi::RhoPlusCase as RoplusCase;

/// Halvings tried when shrinking `ε'` in case (a).
const EPS_PRIME_STEPS: i32 = 60;
/// `λ = ‖f‖·2^k` for `k = 1..=LAMBDA_STEPS` in case (b).
const LAMBDA_STEPS: i32 = 40;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum WitnessError {
    #[error("point `{0}` is not a strong boundary point of the family")]
    NotBoundary(String),
    #[error("f is not a member of the family")]
    NotMember,
    #[error("epsilon must be positive and finite, got {0}")]
    BadEpsilon(f64),
    #[error("no peaking member below {required:e} off the neighbourhood; smallest achieved {achieved:e}")]
    NoWitness { required: f64, achieved: f64 },
    #[error("scalar search exhausted; remaining gap {gap:e}")]
    SearchExhausted { gap: f64 },
    #[error("case ({case:?}) is not available: {reason}")]
    GateFailed { case: RhoPlusCase, reason: String },
    #[error("inequality failed on re-evaluation: {lhs} vs {rhs}")]
    InequalityFailed { lhs: f64, rhs: f64 },
    #[error(transparent)]
    Core(#[from] Error),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RomaxWitness {
    pub h: Vec<Complex>,
    /// `ρ_max(f, ‖f‖h)`.
    pub lhs: f64,
    /// `ρ_max(|f(x0)| + ε, ‖f‖)`.
    pub rhs: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RoplusWitness {
    pub case: RhoPlusCase,
    pub lambda: f64,
    pub h: Vec<Complex>,
    /// `ρ₊(f, λh)`.
    pub lhs: f64,
    /// `ρ₊(|f(x0)| + ε, λ)`.
    pub rhs: f64,
}

/// A family with its working member list and boundary report, reused across
/// many witness queries.
#[derive(Debug, Clone)]
pub struct PeakingWitnesses<'a> {
    family: &'a FunctionFamily,
    members: Vec<ComplexFunction>,
    boundary: BoundaryReport,
    tol: ToleranceConfig,
}

impl<'a> PeakingWitnesses<'a> {
    pub fn new(family: &'a FunctionFamily, tol: &ToleranceConfig) -> Self {
        Self {
            family,
            members: family.members(tol),
            boundary: strong_boundary_points(family, tol),
            tol: *tol,
        }
    }

    pub fn boundary(&self) -> &BoundaryReport {
        &self.boundary
    }

    pub fn members(&self) -> &[ComplexFunction] {
        &self.members
    }

    fn precheck(&self, x0: usize, f: &ComplexFunction, eps: f64) -> Result<(), WitnessError> {
        if !(eps > 0.0 && eps.is_finite()) {
            return Err(WitnessError::BadEpsilon(eps));
        }
        let space = self.family.space();
        if x0 >= space.len() {
            return Err(Error::UnknownPoint(x0.to_string()).into());
        }
        if !self.boundary.contains(x0) {
            return Err(WitnessError::NotBoundary(space.id(x0).to_owned()));
        }
        if !self.family.contains(f, &self.tol)? {
            return Err(WitnessError::NotMember);
        }
        Ok(())
    }

    /// A member of `V_{x0}(A)` with `|h| < bound` outside `keep`.
    fn peaking_member(
        &self,
        x0: usize,
        keep: impl Fn(usize) -> bool,
        bound: f64,
    ) -> Result<ComplexFunction, WitnessError> {
        let space = self.family.space();
        if self.boundary.mode == BoundaryMode::Exact {
            return Ok(ComplexFunction::indicator(space.clone(), x0));
        }
        let best = peaking_candidates(&self.members, x0, &self.tol)
            .map(|h| (sup_outside(h, &keep), h))
            .min_by(|a, b| a.0.total_cmp(&b.0));
        match best {
            Some((off, h)) if off < bound => Ok(h.clone()),
            Some((off, _)) => Err(WitnessError::NoWitness {
                required: bound,
                achieved: off,
            }),
            None => Err(WitnessError::NotBoundary(space.id(x0).to_owned())),
        }
    }

    /// `h ∈ V_{x0}(A)` with `ρ_max(f, ‖f‖h) ≤ ρ_max(|f(x0)| + ε, ‖f‖)`.
    pub fn romax(
        &self,
        x0: usize,
        f: &ComplexFunction,
        eps: f64,
        spec: &PhiSpec,
    ) -> Result<RomaxWitness, WitnessError> {
        self.precheck(x0, f, eps)?;
        let norm = sup_norm(f);
        let fx0 = f.value(x0);
        let h = if norm == 0.0 {
            self.peaking_member(x0, |_| true, f64::INFINITY)?
        } else {
            let e = eps.min(1.0);
            self.peaking_member(x0, |i| (f.value(i) - fx0).norm() < e, e / norm)?
        };
        let lhs = rho(spec, RhoKind::Max, f, &h.scale_real(norm))?;
        let rhs = rho_scalar(spec, RhoKind::Max, fx0.norm() + eps, norm)?;
        if lhs > rhs + self.tol.eq_tol * (1.0 + rhs) {
            return Err(WitnessError::InequalityFailed { lhs, rhs });
        }
        Ok(RomaxWitness {
            h: h.values().to_vec(),
            lhs,
            rhs,
        })
    }

    /// `(λ, h)` with `ρ₊(f, λh) < ρ₊(|f(x0)| + ε, λ)`; case (a) has `λ = 1`.
    ///
    /// Case (a) requires the axis-vanishing check to have passed and case (b)
    /// the divergence check.
    pub fn roplus(
        &self,
        x0: usize,
        f: &ComplexFunction,
        eps: f64,
        spec: &PhiSpec,
        case: RhoPlusCase,
        axioms: &AxiomVerdicts,
    ) -> Result<RoplusWitness, WitnessError> {
        let gate = match case {
            RhoPlusCase::A => &axioms.axis_vanishing,
            RhoPlusCase::B => &axioms.divergence,
        };
        if !gate.passed() {
            return Err(WitnessError::GateFailed {
                case,
                reason: format!("gating check returned {:?}", gate.status),
            });
        }
        self.precheck(x0, f, eps)?;
        let norm = sup_norm(f);
        let a = f.value(x0).norm() + eps;
        let inside = |i: usize| f.value(i).norm() < a;

        let (lambda, h) = if norm == 0.0 {
            (1.0, self.peaking_member(x0, |_| true, f64::INFINITY)?)
        } else {
            match case {
                RhoPlusCase::A => {
                    let target_1 = phi_real(spec, a, 1.0)?;
                    let target_2 = phi_real(spec, 1.0, a)?;
                    let mut gap = f64::INFINITY;
                    let mut found = None;
                    for k in 1..=EPS_PRIME_STEPS {
                        let small = eps * 0.5_f64.powi(k) * norm;
                        let g1 = phi_real(spec, norm, small)? - target_1;
                        let g2 = phi_real(spec, small, norm)? - target_2;
                        gap = g1.max(g2);
                        if small < 1.0 && gap < 0.0 {
                            found = Some(small);
                            break;
                        }
                    }
                    let bound = found.ok_or(WitnessError::SearchExhausted { gap })?;
                    (1.0, self.peaking_member(x0, inside, bound)?)
                }
                RhoPlusCase::B => {
                    let diag = phi_real(spec, norm, norm)?;
                    let mut gap = f64::INFINITY;
                    let mut found = None;
                    for k in 1..=LAMBDA_STEPS {
                        let lambda = norm * 2.0_f64.powi(k);
                        gap = (diag - phi_real(spec, lambda, a)?).max(diag - phi_real(spec, a, lambda)?);
                        if gap < 0.0 {
                            found = Some(lambda);
                            break;
                        }
                    }
                    let lambda = found.ok_or(WitnessError::SearchExhausted { gap })?;
                    (lambda, self.peaking_member(x0, inside, norm / lambda)?)
                }
            }
        };
        let lhs = rho(spec, RhoKind::Plus, f, &h.scale_real(lambda))?;
        let rhs = rho_scalar(spec, RhoKind::Plus, a, lambda)?;
        if lhs.partial_cmp(&rhs) != Some(std::cmp::Ordering::Less) {
            return Err(WitnessError::InequalityFailed { lhs, rhs });
        }
        Ok(RoplusWitness {
            case,
            lambda,
            h: h.values().to_vec(),
            lhs,
            rhs,
        })
    }
}

/// One-shot form of [`PeakingWitnesses::romax`].
pub fn peaking_witness_romax(
    family: &FunctionFamily,
    x0: usize,
    f: &ComplexFunction,
    eps: f64,
    spec: &PhiSpec,
    tol: &ToleranceConfig,
) -> Result<RomaxWitness, WitnessError> {
    PeakingWitnesses::new(family, tol).romax(x0, f, eps, spec)
}

/// One-shot form of [`PeakingWitnesses::roplus`].
#[allow(clippy::too_many_arguments)]
pub fn peaking_witness_roplus(
    family: &FunctionFamily,
    x0: usize,
    f: &ComplexFunction,
    eps: f64,
    spec: &PhiSpec,
    tol: &ToleranceConfig,
    case: RhoPlusCase,
    axioms: &AxiomVerdicts,
) -> Result<RoplusWitness, WitnessError> {
    PeakingWitnesses::new(family, tol).roplus(x0, f, eps, spec, case, axioms)
}
