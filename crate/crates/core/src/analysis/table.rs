use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::family::{AlgebraicPath, FunctionFamily};
use crate::index::FunctionIndex;
use crate::space::{Complex, ComplexFunction, FiniteSpace, ToleranceConfig};

/// A finite pairing `f ↦ Tf` between two families.
#[derive(Debug, Clone)]
pub struct MapTable {
    domain: FunctionFamily,
    codomain: FunctionFamily,
    fs: Vec<ComplexFunction>,
    tfs: Vec<ComplexFunction>,
    surjective_onto_list: bool,
}

/// A violated table invariant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "issue", rename_all = "snake_case")]
pub enum TableIssue {
    /// Pairs `first` and `second` share `f` but not `Tf`.
    NotAFunction { first: usize, second: usize, f: Vec<Complex> },
    DomainNonMember { pair: usize, f: Vec<Complex> },
    CodomainNonMember { pair: usize, tf: Vec<Complex> },
    /// A codomain member that no `Tf` hits.
    NotSurjective { member: Vec<Complex> },
    DomainFamily { message: String },
    CodomainFamily { message: String },
}

impl MapTable {
    pub fn new(
        domain: FunctionFamily,
        codomain: FunctionFamily,
        pairs: Vec<(ComplexFunction, ComplexFunction)>,
        surjective_onto_list: bool,
    ) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::InvalidTable("table has no pairs".into()));
        }
        if domain.path() != codomain.path() {
            return Err(Error::InvalidTable(format!(
                "domain path {} differs from codomain path {}",
                domain.path(),
                codomain.path()
            )));
        }
        let x = domain.space().as_ref();
        let y = codomain.space().as_ref();
        if pairs.iter().any(|(f, tf)| f.space().as_ref() != x || tf.space().as_ref() != y) {
            return Err(Error::SpaceMismatch);
        }
        let (fs, tfs) = pairs.into_iter().unzip();
        Ok(Self {
            domain,
            codomain,
            fs,
            tfs,
            surjective_onto_list,
        })
    }

    pub fn domain(&self) -> &FunctionFamily {
        &self.domain
    }

    pub fn codomain(&self) -> &FunctionFamily {
        &self.codomain
    }

    pub fn path(&self) -> AlgebraicPath {
        self.domain.path()
    }

    pub fn x(&self) -> &Arc<FiniteSpace> {
        self.domain.space()
    }

    pub fn y(&self) -> &Arc<FiniteSpace> {
        self.codomain.space()
    }

    pub fn len(&self) -> usize {
        self.fs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.fs.is_empty()
    }

    /// The `f` column.
    pub fn fs(&self) -> &[ComplexFunction] {
        &self.fs
    }

    /// The `Tf` column.
    pub fn tfs(&self) -> &[ComplexFunction] {
        &self.tfs
    }

    pub fn pair(&self, i: usize) -> (&ComplexFunction, &ComplexFunction) {
        (&self.fs[i], &self.tfs[i])
    }

    pub fn surjective_onto_list(&self) -> bool {
        self.surjective_onto_list
    }

    /// Same metadata, `Tf` of pair `i` replaced.
    pub fn with_tf(&self, i: usize, tf: ComplexFunction) -> Result<Self> {
        if i >= self.len() {
            return Err(Error::InvalidTable(format!("pair index {i} out of range (table has {})", self.len())));
        }
        tf.ensure_same_space(&self.tfs[i])?;
        let mut out = self.clone();
        out.tfs[i] = tf;
        Ok(out)
    }

    /// Every violated invariant, in pair order.
    pub fn validate(&self, tol: &ToleranceConfig) -> Vec<TableIssue> {
        let mut issues = Vec::new();
        if let Err(e) = self.domain.validate(tol) {
            issues.push(TableIssue::DomainFamily { message: e.to_string() });
        }
        if let Err(e) = self.codomain.validate(tol) {
            issues.push(TableIssue::CodomainFamily { message: e.to_string() });
        }

        let index = FunctionIndex::build(&self.fs);
        for (j, f) in self.fs.iter().enumerate() {
            if let Some(i) = index.find(&self.fs, f, tol) {
                if i < j && !self.tfs[i].approx_eq(&self.tfs[j], tol) {
                    issues.push(TableIssue::NotAFunction {
                        first: i,
                        second: j,
                        f: f.values().to_vec(),
                    });
                }
            }
        }

        let dom = self.domain.contains_each(&self.fs, tol).unwrap_or_default();
        for (i, ok) in dom.iter().enumerate() {
            if !ok {
                issues.push(TableIssue::DomainNonMember {
                    pair: i,
                    f: self.fs[i].values().to_vec(),
                });
            }
        }
        let cod = self.codomain.contains_each(&self.tfs, tol).unwrap_or_default();
        for (i, ok) in cod.iter().enumerate() {
            if !ok {
                issues.push(TableIssue::CodomainNonMember {
                    pair: i,
                    tf: self.tfs[i].values().to_vec(),
                });
            }
        }

        if self.surjective_onto_list {
            let index = FunctionIndex::build(&self.tfs);
            for g in self.codomain.members(tol) {
                if index.find(&self.tfs, &g, tol).is_none() {
                    issues.push(TableIssue::NotSurjective {
                        member: g.values().to_vec(),
                    });
                }
            }
        }
        issues
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::FamilyKind;

    fn setup() -> (Arc<FiniteSpace>, FunctionFamily) {
        let x = Arc::new(FiniteSpace::numbered(2).unwrap());
        let list = vec![
            ComplexFunction::from_real(x.clone(), &[1.0, 0.0]).unwrap(),
            ComplexFunction::from_real(x.clone(), &[0.0, 1.0]).unwrap(),
        ];
        let fam = FunctionFamily::new(x.clone(), FamilyKind::ExplicitList, AlgebraicPath::Additive, list).unwrap();
        (x, fam)
    }

    #[test]
    fn identity_table_is_valid() {
        let tol = ToleranceConfig::default();
        let (_, fam) = setup();
        let pairs = fam.functions().iter().map(|f| (f.clone(), f.clone())).collect();
        let t = MapTable::new(fam.clone(), fam, pairs, true).unwrap();
        assert!(t.validate(&tol).is_empty());
    }

    #[test]
    fn detects_each_issue() {
        let tol = ToleranceConfig::default();
        let (x, fam) = setup();
        let a = fam.functions()[0].clone();
        let b = fam.functions()[1].clone();
        let stray = ComplexFunction::from_real(x.clone(), &[0.5, 0.5]).unwrap();
        let pairs = vec![(a.clone(), a.clone()), (a.clone(), stray.clone()), (stray.clone(), a.clone())];
        let t = MapTable::new(fam.clone(), fam, pairs, true).unwrap();
        let issues = t.validate(&tol);
        assert!(issues.contains(&TableIssue::NotAFunction { first: 0, second: 1, f: a.values().to_vec() }));
        assert!(issues.contains(&TableIssue::DomainNonMember { pair: 2, f: stray.values().to_vec() }));
        assert!(issues.contains(&TableIssue::CodomainNonMember { pair: 1, tf: stray.values().to_vec() }));
        assert!(issues.contains(&TableIssue::NotSurjective { member: b.values().to_vec() }));
    }

    #[test]
    fn rejects_mixed_paths_and_empty() {
        let (x, fam) = setup();
        let mult = FunctionFamily::new(x.clone(), FamilyKind::ExplicitList, AlgebraicPath::Multiplicative, fam.functions().to_vec()).unwrap();
        let f = fam.functions()[0].clone();
        assert!(MapTable::new(fam.clone(), mult, vec![(f.clone(), f)], false).is_err());
        assert!(MapTable::new(fam.clone(), fam, vec![], false).is_err());
    }
}
