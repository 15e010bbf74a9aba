//! Finite point spaces and complex-valued functions on them.
//!
//! A finite discrete space is compact Hausdorff, so `C_0(X)` is just `ℂⁿ`
//! with the supremum norm. Everything else in the crate is built on the
//! handful of primitives here.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Complex = Complex64;

/// Index of a point inside its owning [`FiniteSpace`].
pub type PointSet = BTreeSet<usize>;

/// Tolerance policy shared by every scalar comparison in the crate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ToleranceConfig {
    pub eq_tol: f64,
}

impl ToleranceConfig {
    pub const DEFAULT_EQ_TOL: f64 = 1e-9;

    pub fn new(eq_tol: f64) -> Result<Self> {
        if !(eq_tol.is_finite() && (0.0..1e-3).contains(&eq_tol)) {
            return Err(Error::BadTolerance(eq_tol));
        }
        Ok(Self { eq_tol })
    }

    /// `a == b` up to `eq_tol·(1 + scale)`.
    pub fn close(&self, a: f64, b: f64, scale: f64) -> bool {
        (a - b).abs() <= self.eq_tol * (1.0 + scale.abs())
    }
}

impl Default for ToleranceConfig {
    fn default() -> Self {
        Self {
            eq_tol: Self::DEFAULT_EQ_TOL,
        }
    }
}

/// An ordered list of distinct point identifiers.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteSpace {
    points: Vec<String>,
}

impl FiniteSpace {
    pub fn new<I, S>(points: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let points: Vec<String> = points.into_iter().map(Into::into).collect();
        if points.is_empty() {
            return Err(Error::EmptySpace);
        }
        let mut seen = HashSet::with_capacity(points.len());
        for p in &points {
            if !seen.insert(p.as_str()) {
                return Err(Error::DuplicatePoint(p.clone()));
            }
        }
        Ok(Self { points })
    }

    /// Space with identifiers `"1"`, `"2"`, ..., `"n"`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| i.to_string()))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[String] {
        &self.points
    }

    pub fn id(&self, index: usize) -> &str {
        &self.points[index]
    }

    pub fn index_of(&self, id: &str) -> Result<usize> {
        self.points
            .iter()
            .position(|p| p == id)
            .ok_or_else(|| Error::UnknownPoint(id.to_string()))
    }

    pub fn all_points(&self) -> PointSet {
        (0..self.len()).collect()
    }

    pub fn ids_of(&self, set: &PointSet) -> Vec<String> {
        set.iter().map(|&i| self.points[i].clone()).collect()
    }
}

impl fmt::Display for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{}}}", self.points.join(", "))
    }
}

/// A complex-valued function on a finite space, values stored in space order.
#[derive(Debug, Clone)]
pub struct ComplexFunction {
    space: Arc<FiniteSpace>,
    values: Vec<Complex>,
}

impl ComplexFunction {
    pub fn new(space: Arc<FiniteSpace>, values: Vec<Complex>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::LengthMismatch {
                expected: space.len(),
                got: values.len(),
            });
        }
        if let Some(i) = values
            .iter()
            .position(|v| !(v.re.is_finite() && v.im.is_finite()))
        {
            return Err(Error::NonFinite {
                point: space.id(i).to_string(),
            });
        }
        Ok(Self { space, values })
    }

    pub fn from_real(space: Arc<FiniteSpace>, values: &[f64]) -> Result<Self> {
        Self::new(space, values.iter().map(|&v| Complex::new(v, 0.0)).collect())
    }

    pub fn zero(space: Arc<FiniteSpace>) -> Self {
        let n = space.len();
        Self {
            space,
            values: vec![Complex::new(0.0, 0.0); n],
        }
    }

    pub fn constant(space: Arc<FiniteSpace>, c: Complex) -> Self {
        let n = space.len();
        Self {
            space,
            values: vec![c; n],
        }
    }

    /// Indicator of the single point `index`.
    pub fn indicator(space: Arc<FiniteSpace>, index: usize) -> Self {
        let mut f = Self::zero(space);
        f.values[index] = Complex::new(1.0, 0.0);
        f
    }

    pub fn space(&self) -> &Arc<FiniteSpace> {
        &self.space
    }

    pub fn values(&self) -> &[Complex] {
        &self.values
    }

    pub fn value(&self, index: usize) -> Complex {
        self.values[index]
    }

    pub fn same_space(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.space, &other.space) || self.space == other.space
    }

    pub fn ensure_same_space(&self, other: &Self) -> Result<()> {
        if self.same_space(other) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    /// Pointwise map; non-finite results are rejected.
    pub fn map(&self, op: impl Fn(Complex) -> Complex) -> Result<Self> {
        Self::new(self.space.clone(), self.values.iter().map(|&v| op(v)).collect())
    }

    pub fn zip_with(&self, other: &Self, op: impl Fn(Complex, Complex) -> Complex) -> Result<Self> {
        self.ensure_same_space(other)?;
        Self::new(
            self.space.clone(),
            self.values
                .iter()
                .zip(&other.values)
                .map(|(&a, &b)| op(a, b))
                .collect(),
        )
    }

    pub fn scale(&self, c: Complex) -> Self {
        // scaling finite values by a finite scalar can overflow only at absurd magnitudes
        self.map(|v| v * c).expect("scaled function overflowed")
    }

    pub fn scale_real(&self, c: f64) -> Self {
        self.scale(Complex::new(c, 0.0))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn is_real_nonnegative(&self, tol: &ToleranceConfig) -> bool {
        self.values
            .iter()
            .all(|v| v.im.abs() <= tol.eq_tol && v.re >= -tol.eq_tol)
    }

    /// `‖self − other‖_X`.
    pub fn distance(&self, other: &Self) -> Result<f64> {
        self.ensure_same_space(other)?;
        Ok(self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn approx_eq(&self, other: &Self, tol: &ToleranceConfig) -> bool {
        match self.distance(other) {
            Ok(d) => d <= tol.eq_tol * (1.0 + sup_norm(self).max(sup_norm(other))),
            Err(_) => false,
        }
    }
}

impl PartialEq for ComplexFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_space(other) && self.values == other.values
    }
}

/// `‖f‖_X = max_x |f(x)|`.
pub fn sup_norm(f: &ComplexFunction) -> f64 {
    f.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

/// `M(f)`: points where `|f|` attains its supremum, up to `eq_tol`.
pub fn max_modulus_set(f: &ComplexFunction, tol: &ToleranceConfig) -> PointSet {
    let norm = sup_norm(f);
    f.values
        .iter()
        .enumerate()
        .filter(|(_, v)| v.norm() >= norm - tol.eq_tol)
        .map(|(i, _)| i)
        .collect()
}

/// Pointwise modulus `|f|` as a real-valued function.
pub fn modulus(f: &ComplexFunction) -> ComplexFunction {
    ComplexFunction {
        space: f.space.clone(),
        values: f.values.iter().map(|v| Complex::new(v.norm(), 0.0)).collect(),
    }
}
