//! Sampling checkers for the axioms a φ must satisfy.
//!
//! The axioms quantify over all of ℂ, so a `Pass` here only means that no
//! counterexample turned up among the grid and random samples. Every `Fail`
//! carries a replayable [`Counterexample`].

use std::f64::consts::{FRAC_PI_3, PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{phi_eval, rho, rho_scalar, AnalyticCertificate, PhiSpec, RhoKind};
use crate::error::{Error, Result};
use crate::space::{sup_norm, Complex, ComplexFunction, ToleranceConfig};

/// Sampling parameters shared by all checkers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SamplerConfig {
    pub seed: u64,
    pub grid_radius: f64,
    pub grid_steps: usize,
    pub random_samples: usize,
    pub strictness_margin: f64,
}

impl Default for SamplerConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            grid_radius: 10.0,
            grid_steps: 21,
            random_samples: 10_000,
            strictness_margin: 1e-12,
        }
    }
}

impl SamplerConfig {
    pub fn with_seed(seed: u64) -> Self {
        Self {
            seed,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.grid_radius.is_finite() && self.grid_radius > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "sampler.grid_radius = {} must be > 0",
                self.grid_radius
            )));
        }
        if self.grid_steps < 3 {
            return Err(Error::InvalidScenario(format!(
                "sampler.grid_steps = {} must be >= 3",
                self.grid_steps
            )));
        }
        if !(self.strictness_margin.is_finite() && self.strictness_margin > 0.0) {
            return Err(Error::InvalidScenario(format!(
                "sampler.strictness_margin = {} must be > 0",
                self.strictness_margin
            )));
        }
        Ok(())
    }

    fn grid_radii(&self) -> impl Iterator<Item = f64> + '_ {
        let last = (self.grid_steps - 1) as f64;
        (0..self.grid_steps).map(move |k| self.grid_radius * k as f64 / last)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckStatus {
    Pass,
    Fail,
    Inconclusive,
}

/// Which argument of φ a relation varies.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Slot {
    First,
    Second,
}

impl Slot {
    fn apply(self, spec: &PhiSpec, varying: Complex, fixed: Complex) -> Result<f64> {
        match self {
            Slot::First => phi_eval(spec, varying, fixed),
            Slot::Second => phi_eval(spec, fixed, varying),
        }
    }
}

/// The inequality a counterexample violates, with all of its inputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "relation", rename_all = "snake_case")]
pub enum Relation {
    /// `|s1| <= |s2|` but φ at `s1` exceeds φ at `s2`.
    IncWeak { slot: Slot, s1: Complex, s2: Complex, t: Complex },
    /// `|s1| < |s2|`, `t != 0`, but φ at `s2` is not strictly larger.
    IncStrict { slot: Slot, s1: Complex, s2: Complex, t: Complex },
    /// φ of the mean exceeds the mean of φ.
    Con { slot: Slot, s: Vec<Complex>, t: Complex },
    /// `φ(t, 0)` or `φ(0, t)` is not zero.
    AxisVanishing { slot: Slot, t: f64 },
    /// φ returned a negative or non-finite value.
    InvalidValue { s: Complex, t: Complex },
    /// `ρ(f,g) < ρ(r,s)` yet `|f(x)| >= r` and `|g(x)| >= s` at `point`.
    Observation {
        kind: RhoKind,
        f: Vec<Complex>,
        g: Vec<Complex>,
        r: f64,
        s: f64,
        point: usize,
    },
}

/// A concrete violation: `lhs` and `rhs` are the two sides of the relation
/// and `threshold` the margin the violation was judged against.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Counterexample {
    #[serde(flatten)]
    pub relation: Relation,
    pub lhs: f64,
    pub rhs: f64,
    pub threshold: f64,
}

impl Counterexample {
    /// Recompute both sides of the relation from the stored inputs.
    pub fn evaluate(&self, spec: &PhiSpec) -> Result<(f64, f64)> {
        match &self.relation {
            Relation::IncWeak { slot, s1, s2, t } | Relation::IncStrict { slot, s1, s2, t } => {
                Ok((slot.apply(spec, *s1, *t)?, slot.apply(spec, *s2, *t)?))
            }
            Relation::Con { slot, s, t } => {
                let n = s.len() as f64;
                let mean = s.iter().sum::<Complex>() / n;
                let lhs = slot.apply(spec, mean, *t)?;
                let mut rhs = 0.0;
                for &si in s {
                    rhs += slot.apply(spec, si, *t)?;
                }
                Ok((lhs, rhs / n))
            }
            Relation::AxisVanishing { slot, t } => Ok((
                slot.apply(spec, Complex::new(*t, 0.0), Complex::new(0.0, 0.0))?,
                self.threshold,
            )),
            Relation::InvalidValue { s, t } => {
                let v = super::PhiSpec::eval_raw(spec, *s, *t);
                Ok((v, 0.0))
            }
            Relation::Observation { kind, f, g, r, s, .. } => {
                let (f, g) = observation_functions(f, g)?;
                Ok((rho(spec, *kind, &f, &g)?, rho_scalar(spec, *kind, *r, *s)?))
            }
        }
    }

    /// True when re-evaluating the stored inputs still violates the relation.
    pub fn reproduces(&self, spec: &PhiSpec) -> bool {
        let Ok((lhs, rhs)) = self.evaluate(spec) else {
            return matches!(self.relation, Relation::InvalidValue { .. });
        };
        match &self.relation {
            Relation::IncWeak { .. } => weak_violation(lhs, rhs, self.threshold),
            Relation::IncStrict { .. } => strict_violation(lhs, rhs, self.threshold),
            Relation::Con { .. } => lhs - rhs > self.threshold * (1.0 + rhs.abs()),
            Relation::AxisVanishing { .. } => lhs > self.threshold,
            Relation::InvalidValue { .. } => !(lhs.is_finite() && lhs >= 0.0),
            Relation::Observation { f, g, r, s, point, .. } => {
                lhs < rhs && f[*point].norm() >= *r && g[*point].norm() >= *s
            }
        }
    }
}

fn observation_functions(f: &[Complex], g: &[Complex]) -> Result<(ComplexFunction, ComplexFunction)> {
    let space = std::sync::Arc::new(crate::space::FiniteSpace::numbered(f.len())?);
    Ok((
        ComplexFunction::new(space.clone(), f.to_vec())?,
        ComplexFunction::new(space, g.to_vec())?,
    ))
}

/// Outcome of one sampling check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckVerdict {
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub counterexample: Option<Counterexample>,
    pub samples_used: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub note: Option<String>,
}

impl CheckVerdict {
    fn pass(samples_used: usize) -> Self {
        Self {
            status: CheckStatus::Pass,
            counterexample: None,
            samples_used,
            note: None,
        }
    }

    fn fail(counterexample: Counterexample, samples_used: usize) -> Self {
        Self {
            status: CheckStatus::Fail,
            counterexample: Some(counterexample),
            samples_used,
            note: None,
        }
    }

    pub fn passed(&self) -> bool {
        self.status == CheckStatus::Pass
    }

    pub fn failed(&self) -> bool {
        self.status == CheckStatus::Fail
    }
}

fn weak_violation(lhs: f64, rhs: f64, margin: f64) -> bool {
    lhs - rhs > margin * lhs.abs().max(rhs.abs())
}

fn strict_violation(lhs: f64, rhs: f64, margin: f64) -> bool {
    rhs - lhs <= margin * lhs.abs().max(rhs.abs())
}

/// Radius sampler mixing uniform and log-uniform scales so both large and
/// tiny moduli are exercised.
fn random_radius(rng: &mut ChaCha8Rng, radius: f64) -> f64 {
    if rng.gen_bool(0.5) {
        rng.gen_range(0.0..radius)
    } else {
        radius * 10f64.powf(-rng.gen_range(0.0..6.0))
    }
}

fn random_complex(rng: &mut ChaCha8Rng, radius: f64) -> Complex {
    Complex::from_polar(random_radius(rng, radius), rng.gen_range(0.0..TAU))
}

fn invalid(s: Complex, t: Complex, samples: usize) -> CheckVerdict {
    CheckVerdict::fail(
        Counterexample {
            relation: Relation::InvalidValue { s, t },
            lhs: f64::NAN,
            rhs: 0.0,
            threshold: 0.0,
        },
        samples,
    )
}

/// Tests one `(s1, s2, t)` triple for (inc) in both slots.
fn inc_triple(
    spec: &PhiSpec,
    s1: Complex,
    s2: Complex,
    t: Complex,
    strict: bool,
    margin: f64,
) -> std::result::Result<(), Counterexample> {
    for slot in [Slot::First, Slot::Second] {
        let (lhs, rhs) = match (slot.apply(spec, s1, t), slot.apply(spec, s2, t)) {
            (Ok(l), Ok(r)) => (l, r),
            _ => {
                let (s, tt) = match slot {
                    Slot::First => (s1, t),
                    Slot::Second => (t, s1),
                };
                return Err(Counterexample {
                    relation: Relation::InvalidValue { s, t: tt },
                    lhs: f64::NAN,
                    rhs: 0.0,
                    threshold: 0.0,
                });
            }
        };
        if weak_violation(lhs, rhs, margin) {
            return Err(Counterexample {
                relation: Relation::IncWeak { slot, s1, s2, t },
                lhs,
                rhs,
                threshold: margin,
            });
        }
        if strict && t != Complex::new(0.0, 0.0) && strict_violation(lhs, rhs, margin) {
            return Err(Counterexample {
                relation: Relation::IncStrict { slot, s1, s2, t },
                lhs,
                rhs,
                threshold: margin,
            });
        }
    }
    Ok(())
}

const STRICT_RATIO: f64 = 0.9;
const STRICT_SCALE: f64 = 1e-2;

/// Strict monotonicity in modulus of both arguments.
pub fn check_inc(spec: &PhiSpec, cfg: &SamplerConfig) -> CheckVerdict {
    let margin = cfg.strictness_margin;
    let radii: Vec<f64> = cfg.grid_radii().collect();
    let mut samples = 0;

    for (i, &r1) in radii.iter().enumerate() {
        for (j, &r2) in radii.iter().enumerate().skip(i) {
            let s1 = Complex::new(r1, 0.0);
            let s2 = Complex::from_polar(r2, j as f64 * TAU / radii.len() as f64);
            for (k, &rt) in radii.iter().enumerate() {
                let t = Complex::from_polar(rt, k as f64 * FRAC_PI_3);
                samples += 1;
                if let Err(cx) = inc_triple(spec, s1, s2, t, i < j, margin) {
                    return CheckVerdict::fail(cx, samples);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..cfg.random_samples {
        let r2 = random_radius(&mut rng, cfg.grid_radius);
        let equal = rng.gen_bool(0.1);
        let r1 = if equal {
            r2
        } else {
            r2 * rng.gen_range(0.0..1.0 - 1e-6)
        };
        let s1 = Complex::from_polar(r1, rng.gen_range(0.0..TAU));
        let s2 = Complex::from_polar(r2, rng.gen_range(0.0..TAU));
        let t = if rng.gen_bool(0.05) {
            Complex::new(0.0, 0.0)
        } else {
            random_complex(&mut rng, cfg.grid_radius)
        };
        // Strictness is only asserted where the modulus gap is material: tiny
        // increments below the margin would otherwise read as plateaus.
        let strict = !equal && r2 > 0.0 && r1 <= STRICT_RATIO * r2 && r2 >= STRICT_SCALE * t.norm();
        samples += 1;
        if let Err(cx) = inc_triple(spec, s1, s2, t, strict, margin) {
            return CheckVerdict::fail(cx, samples);
        }
    }
    CheckVerdict::pass(samples)
}

fn con_tuple(
    spec: &PhiSpec,
    s: &[Complex],
    t: Complex,
    tol: &ToleranceConfig,
) -> std::result::Result<(), Counterexample> {
    for slot in [Slot::First, Slot::Second] {
        let cx = Counterexample {
            relation: Relation::Con {
                slot,
                s: s.to_vec(),
                t,
            },
            lhs: 0.0,
            rhs: 0.0,
            threshold: tol.eq_tol,
        };
        let Ok((lhs, rhs)) = cx.evaluate(spec) else {
            return Err(Counterexample {
                relation: Relation::InvalidValue { s: s[0], t },
                lhs: f64::NAN,
                rhs: 0.0,
                threshold: 0.0,
            });
        };
        if lhs - rhs > tol.eq_tol * (1.0 + rhs.abs()) {
            return Err(Counterexample { lhs, rhs, ..cx });
        }
    }
    Ok(())
}

/// Averaged convexity: `φ(mean s_i, t) <= mean φ(s_i, t)` in both slots,
/// for tuples of length 2 to 5.
pub fn check_con(spec: &PhiSpec, cfg: &SamplerConfig, tol: &ToleranceConfig) -> CheckVerdict {
    let radii: Vec<f64> = cfg.grid_radii().collect();
    let mut samples = 0;

    for (i, &r1) in radii.iter().enumerate() {
        for (j, &r2) in radii.iter().enumerate().skip(i) {
            let phase = if (i + j) % 2 == 0 { 0.0 } else { PI };
            let s = [Complex::new(r1, 0.0), Complex::from_polar(r2, phase)];
            for &rt in &radii {
                samples += 1;
                if let Err(cx) = con_tuple(spec, &s, Complex::new(rt, 0.0), tol) {
                    return CheckVerdict::fail(cx, samples);
                }
            }
        }
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x636f_6e00);
    let mut s = Vec::with_capacity(5);
    for idx in 0..cfg.random_samples {
        let n = 2 + idx % 4;
        s.clear();
        s.extend((0..n).map(|_| random_complex(&mut rng, cfg.grid_radius)));
        let t = random_complex(&mut rng, cfg.grid_radius);
        samples += 1;
        if let Err(cx) = con_tuple(spec, &s, t, tol) {
            return CheckVerdict::fail(cx, samples);
        }
    }
    CheckVerdict::pass(samples)
}

/// `φ(t, 0) = 0 = φ(0, t)` for grid values `t >= 0`, including `t = 0`.
pub fn check_axis_vanishing(
    spec: &PhiSpec,
    cfg: &SamplerConfig,
    tol: &ToleranceConfig,
) -> CheckVerdict {
    let zero = Complex::new(0.0, 0.0);
    let mut samples = 0;
    for t in cfg.grid_radii() {
        samples += 1;
        for slot in [Slot::First, Slot::Second] {
            let Ok(v) = slot.apply(spec, Complex::new(t, 0.0), zero) else {
                return invalid(Complex::new(t, 0.0), zero, samples);
            };
            if v > tol.eq_tol {
                return CheckVerdict::fail(
                    Counterexample {
                        relation: Relation::AxisVanishing { slot, t },
                        lhs: v,
                        rhs: tol.eq_tol,
                        threshold: tol.eq_tol,
                    },
                    samples,
                );
            }
        }
    }
    CheckVerdict::pass(samples)
}

/// Growth factor a sequence must reach at the horizon to count as divergent.
const DIVERGENCE_GROWTH: f64 = 1e6;
const DIVERGENCE_HORIZON: i32 = 40;

/// `φ(t, a) → ∞` and `φ(a, t) → ∞` as `t → ∞`, probed along `t = 2^k`.
///
/// Never returns `Fail`: a limit cannot be refuted by finitely many samples,
/// so a sequence that stays bounded up to the horizon is `Inconclusive`.
pub fn check_divergence(spec: &PhiSpec, cfg: &SamplerConfig) -> CheckVerdict {
    let mut anchors: Vec<f64> = cfg.grid_radii().skip(1).collect();
    anchors.push(cfg.grid_radius * 1e-3);
    let mut samples = 0;
    for &a in &anchors {
        let a_c = Complex::new(a, 0.0);
        for slot in [Slot::First, Slot::Second] {
            let mut seq = Vec::with_capacity(DIVERGENCE_HORIZON as usize);
            for k in 1..=DIVERGENCE_HORIZON {
                samples += 1;
                match slot.apply(spec, Complex::new(2f64.powi(k), 0.0), a_c) {
                    Ok(v) => seq.push(v),
                    Err(e) => {
                        return inconclusive(samples, format!("evaluation failed: {e}"));
                    }
                }
            }
            let first = seq[0].max(f64::MIN_POSITIVE);
            let last = *seq.last().unwrap();
            let increasing_tail = seq[seq.len() - 10..].windows(2).all(|w| w[1] > w[0]);
            if !(last >= DIVERGENCE_GROWTH * first && increasing_tail) {
                let which = match slot {
                    Slot::First => format!("phi(t, {a})"),
                    Slot::Second => format!("phi({a}, t)"),
                };
                return inconclusive(
                    samples,
                    format!(
                        "{which} reached {last} at t = 2^{DIVERGENCE_HORIZON}; bounded growth not ruled out (divergence is never reported as a failure)"
                    ),
                );
            }
        }
    }
    let mut v = CheckVerdict::pass(samples);
    v.note = Some("divergence is never reported as a failure".into());
    v
}

fn inconclusive(samples: usize, note: String) -> CheckVerdict {
    CheckVerdict {
        status: CheckStatus::Inconclusive,
        counterexample: None,
        samples_used: samples,
        note: Some(note),
    }
}

/// Checks the two elementary consequences of `ρ(f₁,g₁) < ρ(f₂,g₂)` and
/// `ρ(f,g) < ρ(r,s)` on concrete functions (the second uses `f₁, g₁`).
#[allow(clippy::too_many_arguments)]
pub fn observation_checks(
    spec: &PhiSpec,
    kind: RhoKind,
    f1: &ComplexFunction,
    g1: &ComplexFunction,
    f2: &ComplexFunction,
    g2: &ComplexFunction,
    r: f64,
    s: f64,
) -> Result<CheckVerdict> {
    for h in [g1, f2, g2] {
        f1.ensure_same_space(h)?;
    }
    if !(r > 0.0 && s > 0.0) {
        return Err(Error::InvalidPhi(format!("r = {r} and s = {s} must be > 0")));
    }

    // part (i): a strict ρ gap forces a strict gap in one of the two sup norms
    let rho1 = rho(spec, kind, f1, g1)?;
    let rho2 = rho(spec, kind, f2, g2)?;
    if rho1 < rho2 {
        let a1 = super::phi_sup(spec, f1, g1)?;
        let b1 = super::phi_sup(spec, g1, f1)?;
        let a2 = super::phi_sup(spec, f2, g2)?;
        let b2 = super::phi_sup(spec, g2, f2)?;
        if !(a1 < a2 || b1 < b2) {
            // unreachable for either kind; kept so a regression surfaces as Fail
            return Ok(CheckVerdict {
                status: CheckStatus::Fail,
                counterexample: None,
                samples_used: 1,
                note: Some(format!(
                    "rho gap {rho1} < {rho2} without a sup-norm gap ({a1} vs {a2}, {b1} vs {b2})"
                )),
            });
        }
    }

    // part (ii)
    let rho_rs = rho_scalar(spec, kind, r, s)?;
    if rho1 < rho_rs {
        for (x, (fv, gv)) in f1.values().iter().zip(g1.values()).enumerate() {
            if fv.norm() >= r && gv.norm() >= s {
                return Ok(CheckVerdict::fail(
                    Counterexample {
                        relation: Relation::Observation {
                            kind,
                            f: f1.values().to_vec(),
                            g: g1.values().to_vec(),
                            r,
                            s,
                            point: x,
                        },
                        lhs: rho1,
                        rhs: rho_rs,
                        threshold: 0.0,
                    },
                    2,
                ));
            }
        }
    }
    Ok(CheckVerdict::pass(2))
}

/// All axiom verdicts for one spec, computed once per analysis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AxiomVerdicts {
    pub certificate: AnalyticCertificate,
    pub inc: CheckVerdict,
    pub con: CheckVerdict,
    pub axis_vanishing: CheckVerdict,
    pub divergence: CheckVerdict,
}

impl AxiomVerdicts {
    /// Which ρ₊ case applies: `a` (axis vanishing) preferred over `b` (divergence).
    pub fn rho_plus_case(&self) -> Option<RhoPlusCase> {
        if self.axis_vanishing.passed() {
            Some(RhoPlusCase::A)
        } else if self.divergence.passed() {
            Some(RhoPlusCase::B)
        } else {
            None
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoPlusCase {
    A,
    B,
}

pub fn check_all(spec: &PhiSpec, cfg: &SamplerConfig, tol: &ToleranceConfig) -> AxiomVerdicts {
    AxiomVerdicts {
        certificate: spec.analytic_certificate(),
        inc: check_inc(spec, cfg),
        con: check_con(spec, cfg, tol),
        axis_vanishing: check_axis_vanishing(spec, cfg, tol),
        divergence: check_divergence(spec, cfg),
    }
}

/// `‖φ(f,f)‖ = φ(‖f‖,‖f‖)`; helper used by tests of the diagonal reduction.
pub fn diagonal_matches(spec: &PhiSpec, f: &ComplexFunction, tol: &ToleranceConfig) -> Result<bool> {
    let n = sup_norm(f);
    let lhs = super::phi_sup(spec, f, f)?;
    let rhs = super::phi_real(spec, n, n)?;
    Ok(tol.close(lhs, rhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SamplerConfig {
        SamplerConfig::with_seed(42)
    }

    #[test]
    fn linear_passes_inc_and_con() {
        let spec = PhiSpec::linear(2.0, 3.0);
        assert!(check_inc(&spec, &cfg()).passed());
        assert!(check_con(&PhiSpec::linear(1.0, 1.0), &cfg(), &ToleranceConfig::default()).passed());
    }

    #[test]
    fn pnorm_passes_inc() {
        assert!(check_inc(&PhiSpec::pnorm(2.0), &cfg()).passed());
    }

    #[test]
    fn product_passes_con() {
        assert!(check_con(&PhiSpec::Product, &cfg(), &ToleranceConfig::default()).passed());
    }

    #[test]
    fn modulus_of_first_argument_fails_strictness_in_second_slot() {
        let spec = PhiSpec::custom("|s|").unwrap();
        let v = check_inc(&spec, &cfg());
        assert!(v.failed());
        let cx = v.counterexample.unwrap();
        assert!(matches!(
            cx.relation,
            Relation::IncStrict { slot: Slot::Second, .. }
        ));
        assert!(cx.reproduces(&spec));
        // the hand-checked instance: φ(1,1) = φ(1,2)
        assert_eq!(phi_eval(&spec, Complex::new(1.0, 0.0), Complex::new(1.0, 0.0)).unwrap(), 1.0);
        assert_eq!(phi_eval(&spec, Complex::new(1.0, 0.0), Complex::new(2.0, 0.0)).unwrap(), 1.0);
    }

    #[test]
    fn square_root_fails_con() {
        let spec = PhiSpec::custom("sqrt(|s|) + |t|").unwrap();
        let tol = ToleranceConfig::default();
        let v = check_con(&spec, &cfg(), &tol);
        assert!(v.failed());
        let cx = v.counterexample.clone().unwrap();
        assert!(cx.reproduces(&spec));
        assert!(cx.lhs > cx.rhs);

        // s = (0, 4), t = 0: left √2, right 1
        let hand = Counterexample {
            relation: Relation::Con {
                slot: Slot::First,
                s: vec![Complex::new(0.0, 0.0), Complex::new(4.0, 0.0)],
                t: Complex::new(0.0, 0.0),
            },
            lhs: 0.0,
            rhs: 0.0,
            threshold: tol.eq_tol,
        };
        let (lhs, rhs) = hand.evaluate(&spec).unwrap();
        assert!((lhs - 2f64.sqrt()).abs() < 1e-15);
        assert_eq!(rhs, 1.0);
        assert!(hand.reproduces(&spec));
    }

    #[test]
    fn axis_vanishing_examples() {
        let tol = ToleranceConfig::default();
        assert!(check_axis_vanishing(&PhiSpec::Product, &cfg(), &tol).passed());
        assert!(check_axis_vanishing(&PhiSpec::power(1.0, 1.0), &cfg(), &tol).passed());
        let v = check_axis_vanishing(&PhiSpec::linear(1.0, 1.0), &cfg(), &tol);
        assert!(v.failed());
        assert!(v.counterexample.unwrap().reproduces(&PhiSpec::linear(1.0, 1.0)));
    }

    #[test]
    fn divergence_examples() {
        assert!(check_divergence(&PhiSpec::linear(1.0, 1.0), &cfg()).passed());
        assert!(check_divergence(&PhiSpec::Product, &cfg()).passed());
        assert!(check_divergence(&PhiSpec::Max, &cfg()).passed());
        let bounded = check_divergence(&PhiSpec::Min, &cfg());
        assert_eq!(bounded.status, CheckStatus::Inconclusive);
        assert!(bounded.counterexample.is_none());
        assert!(bounded.note.unwrap().contains("never reported as a failure"));
    }

    #[test]
    fn max_alone_fails_strict_inc() {
        assert!(check_inc(&PhiSpec::Max, &cfg()).failed());
        assert!(check_inc(&PhiSpec::Min, &cfg()).failed());
    }

    #[test]
    fn observation_singleton_example() {
        use std::sync::Arc;
        let x = Arc::new(crate::space::FiniteSpace::numbered(1).unwrap());
        let half = ComplexFunction::from_real(x, &[0.5]).unwrap();
        let spec = PhiSpec::linear(1.0, 1.0);
        let v = observation_checks(&spec, RhoKind::Plus, &half, &half, &half, &half, 1.0, 1.0).unwrap();
        assert!(v.passed());
        assert_eq!(rho(&spec, RhoKind::Plus, &half, &half).unwrap(), 2.0);
        assert_eq!(rho_scalar(&spec, RhoKind::Plus, 1.0, 1.0).unwrap(), 4.0);
    }

    #[test]
    fn observation_vacuous_when_antecedent_false() {
        use std::sync::Arc;
        let x = Arc::new(crate::space::FiniteSpace::numbered(2).unwrap());
        let f = ComplexFunction::from_real(x.clone(), &[3.0, 1.0]).unwrap();
        let g = ComplexFunction::from_real(x, &[2.0, 2.0]).unwrap();
        let v = observation_checks(&PhiSpec::Product, RhoKind::Max, &f, &g, &f, &g, 0.5, 0.5).unwrap();
        assert!(v.passed());
    }

    #[test]
    fn same_seed_same_verdict() {
        let spec = PhiSpec::custom("sqrt(|s|) + |t|").unwrap();
        let tol = ToleranceConfig::default();
        assert_eq!(check_con(&spec, &cfg(), &tol), check_con(&spec, &cfg(), &tol));
    }
}
