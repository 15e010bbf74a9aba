//! Finite-space laboratory for the norm functionals `ρ₊` / `ρ_max` induced by
//! a two-variable function `φ`, and for recovering the boundary bijection of
//! a `ρ`-preserving surjection between families of continuous functions.
//!
//! On a finite discrete space `X`, `C_0(X) = ℂⁿ` with the supremum norm, so
//! every construction used to characterise such maps becomes a finite
//! computation. The modules follow the pipeline:
//!
//! * [`space`]: points, functions, sup norm, maximizing sets.
//! * [`phi`]: `φ` specs, `ρ`, and the sampling axiom checkers.
//! * [`family`]: function families, strong boundary points, peaking witnesses.
//! * [`analysis`]: map tables, preservation checks, `Φ` recovery, lemma checks.
//! * [`scenario`]: planted composition-in-modulus maps and perturbations.
//! * [`cli`]: scenario files, reports and the command implementations.

pub mod analysis;
pub mod cli;
pub mod error;
pub mod family;
mod index;
pub mod phi;
pub mod scenario;
pub mod space;

pub use error::{Error, Result};
pub use space::{Complex, ComplexFunction, FiniteSpace, PointSet, ToleranceConfig};
