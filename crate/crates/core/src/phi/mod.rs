//! Two-variable functions `φ: ℂ×ℂ → ℝ⁺` and the norm functionals
//! `ρ₊(f,g) = ‖φ(f,g)‖ + ‖φ(g,f)‖`, `ρ_max(f,g) = max(‖φ(f,g)‖, ‖φ(g,f)‖)`.

mod checks;
mod expr;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::space::{sup_norm, Complex, ComplexFunction};

pub use checks::{
    check_all, check_axis_vanishing, check_con, check_divergence, check_inc, diagonal_matches,
    observation_checks, AxiomVerdicts, CheckStatus, CheckVerdict, Counterexample, Relation,
    RhoPlusCase, SamplerConfig, Slot,
};
pub use expr::ParseError;

/// A user-written φ. Evaluation results are not trusted: negative or
/// non-finite values are reported as errors.
#[derive(Clone)]
pub struct CustomPhi {
    source: String,
    compiled: expr::Expr,
}

impl CustomPhi {
    pub fn parse(source: &str) -> std::result::Result<Self, ParseError> {
        Ok(Self {
            source: source.to_string(),
            compiled: expr::Expr::parse(source)?,
        })
    }

    pub fn source(&self) -> &str {
        &self.source
    }
}

impl fmt::Debug for CustomPhi {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_tuple("CustomPhi").field(&self.source).finish()
    }
}

impl PartialEq for CustomPhi {
    fn eq(&self, other: &Self) -> bool {
        self.source == other.source
    }
}

impl Serialize for CustomPhi {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.source)
    }
}

impl<'de> Deserialize<'de> for CustomPhi {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let source = String::deserialize(d)?;
        CustomPhi::parse(&source).map_err(serde::de::Error::custom)
    }
}

/// Symbolic description of φ.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum PhiSpec {
    /// `a|s| + b|t|`
    Linear { a: f64, b: f64 },
    /// `|s|^a · |t|^b`
    Power { a: f64, b: f64 },
    /// `(|s|^p + |t|^p)^{1/p}`
    Pnorm { p: f64 },
    /// `max(|s|, |t|)`
    Max,
    /// `min(|s|, |t|)`
    Min,
    /// `|s·t|`
    Product,
    Sum { terms: Vec<PhiSpec> },
    Custom { expr: CustomPhi },
}

/// Which of the two norm functionals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RhoKind {
    Plus,
    Max,
}

impl fmt::Display for RhoKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RhoKind::Plus => "plus",
            RhoKind::Max => "max",
        })
    }
}

/// Axiom facts known analytically for a spec. `None` means unknown.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnalyticCertificate {
    pub inc: Option<bool>,
    pub con: Option<bool>,
}

impl PhiSpec {
    pub fn linear(a: f64, b: f64) -> Self {
        PhiSpec::Linear { a, b }
    }

    pub fn power(a: f64, b: f64) -> Self {
        PhiSpec::Power { a, b }
    }

    pub fn pnorm(p: f64) -> Self {
        PhiSpec::Pnorm { p }
    }

    pub fn sum(terms: impl IntoIterator<Item = PhiSpec>) -> Self {
        PhiSpec::Sum {
            terms: terms.into_iter().collect(),
        }
    }

    pub fn custom(source: &str) -> Result<Self> {
        CustomPhi::parse(source)
            .map(|expr| PhiSpec::Custom { expr })
            .map_err(|e| Error::InvalidPhi(e.to_string()))
    }

    /// Parameters strictly positive and finite, sums nonempty.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::InvalidPhi(format!("parameter {name} = {v} must be > 0")))
            }
        };
        match self {
            PhiSpec::Linear { a, b } | PhiSpec::Power { a, b } => {
                positive("a", *a)?;
                positive("b", *b)
            }
            PhiSpec::Pnorm { p } => positive("p", *p),
            PhiSpec::Sum { terms } => {
                if terms.is_empty() {
                    return Err(Error::InvalidPhi("sum needs at least one term".into()));
                }
                terms.iter().try_for_each(PhiSpec::validate)
            }
            PhiSpec::Max | PhiSpec::Min | PhiSpec::Product | PhiSpec::Custom { .. } => Ok(()),
        }
    }

    /// Built-in constructors depend on `(s, t)` only through `(|s|, |t|)`.
    pub fn is_builtin(&self) -> bool {
        match self {
            PhiSpec::Custom { .. } => false,
            PhiSpec::Sum { terms } => terms.iter().all(PhiSpec::is_builtin),
            _ => true,
        }
    }

    fn eval_moduli(&self, s: f64, t: f64) -> f64 {
        match self {
            PhiSpec::Linear { a, b } => a * s + b * t,
            PhiSpec::Power { a, b } => s.powf(*a) * t.powf(*b),
            PhiSpec::Pnorm { p } => {
                let m = s.max(t);
                if m == 0.0 {
                    0.0
                } else {
                    m * ((s / m).powf(*p) + (t / m).powf(*p)).powf(1.0 / p)
                }
            }
            PhiSpec::Max => s.max(t),
            PhiSpec::Min => s.min(t),
            PhiSpec::Product => s * t,
            PhiSpec::Sum { terms } => terms.iter().map(|term| term.eval_moduli(s, t)).sum(),
            PhiSpec::Custom { .. } => unreachable!("custom specs are evaluated on complex inputs"),
        }
    }

    fn eval_raw(&self, s: Complex, t: Complex) -> f64 {
        match self {
            PhiSpec::Custom { expr } => expr.compiled.eval(s, t),
            PhiSpec::Sum { terms } => terms.iter().map(|term| term.eval_raw(s, t)).sum(),
            builtin => builtin.eval_moduli(s.norm(), t.norm()),
        }
    }

    /// Analytic (inc)/(con) facts for the built-in families.
    pub fn analytic_certificate(&self) -> AnalyticCertificate {
        match self {
            PhiSpec::Linear { .. } | PhiSpec::Product => AnalyticCertificate {
                inc: Some(true),
                con: Some(true),
            },
            // |s|^a is convex in s exactly when a >= 1
            PhiSpec::Power { a, b } => AnalyticCertificate {
                inc: Some(true),
                con: Some(*a >= 1.0 && *b >= 1.0),
            },
            PhiSpec::Pnorm { p } => AnalyticCertificate {
                inc: Some(true),
                con: Some(*p >= 1.0),
            },
            // plateaus where the other argument dominates
            PhiSpec::Max => AnalyticCertificate {
                inc: Some(false),
                con: Some(true),
            },
            PhiSpec::Min => AnalyticCertificate {
                inc: Some(false),
                con: Some(false),
            },
            PhiSpec::Sum { terms } => {
                let certs: Vec<_> = terms.iter().map(PhiSpec::analytic_certificate).collect();
                let weakly_increasing = terms.iter().all(PhiSpec::is_builtin);
                let inc = if !weakly_increasing {
                    None
                } else if certs.iter().any(|c| c.inc == Some(true)) {
                    Some(true)
                } else {
                    None
                };
                let con = if certs.iter().all(|c| c.con == Some(true)) {
                    Some(true)
                } else {
                    None
                };
                AnalyticCertificate { inc, con }
            }
            PhiSpec::Custom { .. } => AnalyticCertificate {
                inc: None,
                con: None,
            },
        }
    }
}

impl fmt::Display for PhiSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PhiSpec::Linear { a, b } => write!(f, "{a}|s| + {b}|t|"),
            PhiSpec::Power { a, b } => write!(f, "|s|^{a}·|t|^{b}"),
            PhiSpec::Pnorm { p } => write!(f, "(|s|^{p} + |t|^{p})^(1/{p})"),
            PhiSpec::Max => f.write_str("max(|s|, |t|)"),
            PhiSpec::Min => f.write_str("min(|s|, |t|)"),
            PhiSpec::Product => f.write_str("|s·t|"),
            PhiSpec::Sum { terms } => {
                for (i, term) in terms.iter().enumerate() {
                    if i > 0 {
                        f.write_str(" + ")?;
                    }
                    write!(f, "[{term}]")?;
                }
                Ok(())
            }
            PhiSpec::Custom { expr } => write!(f, "custom({})", expr.source),
        }
    }
}

/// `φ(s, t)`.
pub fn phi_eval(spec: &PhiSpec, s: Complex, t: Complex) -> Result<f64> {
    let v = spec.eval_raw(s, t);
    if v.is_finite() && v >= 0.0 {
        Ok(v)
    } else {
        Err(Error::PhiEval {
            s: s.to_string(),
            t: t.to_string(),
            reason: format!("value {v} is not a finite nonnegative real"),
        })
    }
}

/// `φ(r, s)` for real arguments.
pub fn phi_real(spec: &PhiSpec, r: f64, s: f64) -> Result<f64> {
    phi_eval(spec, Complex::new(r, 0.0), Complex::new(s, 0.0))
}

/// `x ↦ φ(f(x), g(x))`.
pub fn phi_pointwise(
    spec: &PhiSpec,
    f: &ComplexFunction,
    g: &ComplexFunction,
) -> Result<ComplexFunction> {
    f.ensure_same_space(g)?;
    let values = f
        .values()
        .iter()
        .zip(g.values())
        .map(|(&s, &t)| phi_eval(spec, s, t).map(|v| Complex::new(v, 0.0)))
        .collect::<Result<Vec<_>>>()?;
    ComplexFunction::new(f.space().clone(), values)
}

/// `‖φ(f, g)‖_X` without materialising the pointwise function.
pub fn phi_sup(spec: &PhiSpec, f: &ComplexFunction, g: &ComplexFunction) -> Result<f64> {
    f.ensure_same_space(g)?;
    f.values()
        .iter()
        .zip(g.values())
        .try_fold(0.0_f64, |acc, (&s, &t)| Ok(acc.max(phi_eval(spec, s, t)?)))
}

fn combine(kind: RhoKind, a: f64, b: f64) -> f64 {
    match kind {
        RhoKind::Plus => a + b,
        RhoKind::Max => a.max(b),
    }
}

/// `ρ(f, g)` for the chosen kind.
pub fn rho(spec: &PhiSpec, kind: RhoKind, f: &ComplexFunction, g: &ComplexFunction) -> Result<f64> {
    Ok(combine(kind, phi_sup(spec, f, g)?, phi_sup(spec, g, f)?))
}

/// `ρ(r·1, s·1)` for constant functions: `φ(r,s) ⊕ φ(s,r)`.
pub fn rho_scalar(spec: &PhiSpec, kind: RhoKind, r: f64, s: f64) -> Result<f64> {
    Ok(combine(kind, phi_real(spec, r, s)?, phi_real(spec, s, r)?))
}

/// `‖φ(f,f)‖ = φ(‖f‖, ‖f‖)` holds for specs satisfying (inc).
pub fn diagonal_rho(spec: &PhiSpec, kind: RhoKind, f: &ComplexFunction) -> Result<f64> {
    let n = sup_norm(f);
    rho_scalar(spec, kind, n, n)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::*;
    use crate::space::FiniteSpace;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    fn func(vals: &[f64]) -> ComplexFunction {
        let x = Arc::new(FiniteSpace::numbered(vals.len()).unwrap());
        ComplexFunction::from_real(x, vals).unwrap()
    }

    #[test]
    fn eval_examples() {
        assert_eq!(phi_eval(&PhiSpec::linear(1.0, 1.0), c(3.0, 0.0), c(4.0, 0.0)).unwrap(), 7.0);
        assert_eq!(phi_eval(&PhiSpec::Product, c(2.0, 0.0), c(3.0, 0.0)).unwrap(), 6.0);
        let zero = c(0.0, 0.0);
        for spec in [PhiSpec::power(1.5, 0.5), PhiSpec::Product, PhiSpec::pnorm(2.0)] {
            assert_eq!(phi_eval(&spec, zero, zero).unwrap(), 0.0);
        }
        assert_eq!(phi_eval(&PhiSpec::pnorm(2.0), c(0.0, 3.0), c(4.0, 0.0)).unwrap(), 5.0);
    }

    #[test]
    fn pnorm_does_not_overflow_for_large_p() {
        let v = phi_real(&PhiSpec::pnorm(400.0), 10.0, 9.0).unwrap();
        assert!((v - 10.0).abs() < 1e-9);
    }

    #[test]
    fn custom_rejects_negative_values() {
        let spec = PhiSpec::custom("|s| - |t|").unwrap();
        let err = phi_real(&spec, 1.0, 2.0).unwrap_err();
        assert!(matches!(err, Error::PhiEval { .. }));
        assert_eq!(phi_real(&spec, 2.0, 1.0).unwrap(), 1.0);
    }

    #[test]
    fn pointwise_examples() {
        let f = func(&[1.0, 2.0]);
        let g = func(&[3.0, 0.0]);
        let h = phi_pointwise(&PhiSpec::linear(1.0, 1.0), &f, &g).unwrap();
        assert_eq!(h.values(), &[c(4.0, 0.0), c(2.0, 0.0)]);

        let z = func(&[0.0, 0.0]);
        let h = phi_pointwise(&PhiSpec::Product, &z, &z).unwrap();
        assert_eq!(h.values(), &[c(0.0, 0.0), c(0.0, 0.0)]);

        let h = phi_pointwise(&PhiSpec::Max, &func(&[1.0, 5.0]), &func(&[2.0, 3.0])).unwrap();
        assert_eq!(h.values(), &[c(2.0, 0.0), c(5.0, 0.0)]);
    }

    #[test]
    fn pointwise_rejects_space_mismatch() {
        let err = phi_pointwise(&PhiSpec::Product, &func(&[1.0]), &func(&[1.0, 2.0])).unwrap_err();
        assert_eq!(err, Error::SpaceMismatch);
    }

    #[test]
    fn rho_examples() {
        let f = func(&[1.0, 2.0]);
        let g = func(&[3.0, 0.0]);
        let lin = PhiSpec::linear(1.0, 1.0);
        // ‖φ(f,g)‖ = max(4, 2) = 4 and ‖φ(g,f)‖ = max(4, 2) = 4
        assert_eq!(rho(&lin, RhoKind::Plus, &f, &g).unwrap(), 8.0);
        assert_eq!(rho(&lin, RhoKind::Max, &f, &g).unwrap(), 4.0);

        let spec = PhiSpec::linear(2.0, 1.0);
        let (r, s) = (0.5, 3.0);
        let fr = func(&[r]);
        let fs = func(&[s]);
        assert_eq!(
            rho(&spec, RhoKind::Plus, &fr, &fs).unwrap(),
            phi_real(&spec, r, s).unwrap() + phi_real(&spec, s, r).unwrap()
        );
        assert_eq!(
            rho(&spec, RhoKind::Max, &fr, &fs).unwrap(),
            rho_scalar(&spec, RhoKind::Max, r, s).unwrap()
        );
    }

    #[test]
    fn serde_tagged_tree() {
        let spec = PhiSpec::sum([PhiSpec::linear(1.0, 1.0), PhiSpec::Product]);
        let json = serde_json::to_string(&spec).unwrap();
        assert_eq!(
            json,
            r#"{"kind":"sum","terms":[{"kind":"linear","a":1.0,"b":1.0},{"kind":"product"}]}"#
        );
        let back: PhiSpec = serde_json::from_str(
            r#"{"kind":"sum","terms":[{"kind":"linear","a":1,"b":1},{"kind":"product"}]}"#,
        )
        .unwrap();
        assert_eq!(back, spec);
        let custom: PhiSpec = serde_json::from_str(r#"{"kind":"custom","expr":"sqrt(|s|) + |t|"}"#).unwrap();
        assert_eq!(custom, PhiSpec::custom("sqrt(|s|) + |t|").unwrap());
        assert!(serde_json::from_str::<PhiSpec>(r#"{"a":1,"b":1}"#).is_err());
        assert!(serde_json::from_str::<PhiSpec>(r#"{"kind":"linear","a":1,"b":1,"c":2}"#).is_err());
        assert!(serde_json::from_str::<PhiSpec>(r#"{"kind":"custom","expr":"|q|"}"#).is_err());
    }

    #[test]
    fn validate_rejects_nonpositive_parameters() {
        assert!(PhiSpec::linear(0.0, 1.0).validate().is_err());
        assert!(PhiSpec::pnorm(-1.0).validate().is_err());
        assert!(PhiSpec::power(1.0, f64::NAN).validate().is_err());
        assert!(PhiSpec::sum([]).validate().is_err());
        assert!(PhiSpec::sum([PhiSpec::Max, PhiSpec::linear(1.0, 2.0)]).validate().is_ok());
    }

    #[test]
    fn certificates_follow_known_examples() {
        let composite = PhiSpec::sum([PhiSpec::Max, PhiSpec::Product]);
        assert_eq!(
            composite.analytic_certificate(),
            AnalyticCertificate { inc: Some(true), con: Some(true) }
        );
        let min_comp = PhiSpec::sum([PhiSpec::Min, PhiSpec::linear(1.0, 1.0)]);
        assert_eq!(min_comp.analytic_certificate().inc, Some(true));
        assert_eq!(min_comp.analytic_certificate().con, None);
        assert_eq!(PhiSpec::Max.analytic_certificate().inc, Some(false));
    }
}
