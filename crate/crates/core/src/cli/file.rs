use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::CliError;
use crate::family::{AlgebraicPath, FamilyKind, FunctionFamily};
use crate::phi::{PhiSpec, RhoKind, SamplerConfig};
use crate::scenario::{MapSpec, Perturbation, PlantedMap, ScenarioSpec};
use crate::space::{Complex, ComplexFunction, FiniteSpace, ToleranceConfig};

pub const SCENARIO_VERSION: u32 = 1;

/// On-disk scenario document.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    pub version: u32,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    pub spaces: SpacesDoc,
    pub phi: PhiSpec,
    pub rho: RhoKind,
    #[serde(rename = "family_A")]
    pub family_a: FamilyDoc,
    pub map: MapDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub perturbation: Option<PerturbationDoc>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sampler: Option<SamplerConfig>,
    #[serde(default)]
    pub seed: u64,
}

fn default_tolerance() -> f64 {
    ToleranceConfig::default().eq_tol
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpacesDoc {
    #[serde(rename = "X")]
    pub x: Vec<String>,
    #[serde(rename = "Y")]
    pub y: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilyDoc {
    pub kind: FamilyKind,
    pub path: AlgebraicPath,
    pub functions: Vec<Vec<Complex>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum MapDoc {
    Planted(PlantedDoc),
    Pairs(Vec<PairDoc>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlantedDoc {
    /// `y ↦ σ(y)` by point id.
    pub sigma: BTreeMap<String, String>,
    /// Missing points get angle 0.
    #[serde(default)]
    pub weights_rad: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PairDoc {
    pub f: Vec<Complex>,
    #[serde(rename = "Tf")]
    pub tf: Vec<Complex>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PerturbationDoc {
    pub pair_index: usize,
    /// Point id in `Y`.
    pub point: String,
    pub delta: Complex,
}

fn input<E: std::fmt::Display>(context: &str) -> impl Fn(E) -> CliError + '_ {
    move |e| CliError::Input(format!("{context}: {e}"))
}

impl ScenarioFile {
    /// Parses a document; errors carry the line and column, and name unknown keys.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(input("scenario"))
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("scenario serializes");
        s.push('\n');
        s
    }

    /// Resolves ids and builds the in-memory scenario.
    pub fn to_spec(&self) -> Result<ScenarioSpec, CliError> {
        if self.version != SCENARIO_VERSION {
            return Err(CliError::Input(format!(
                "unsupported scenario version {} (expected {SCENARIO_VERSION})",
                self.version
            )));
        }
        let tolerance = ToleranceConfig::new(self.tolerance).map_err(input("tolerance"))?;
        let x = Arc::new(FiniteSpace::new(self.spaces.x.iter().cloned()).map_err(input("spaces.X"))?);
        let y = Arc::new(FiniteSpace::new(self.spaces.y.iter().cloned()).map_err(input("spaces.Y"))?);
        self.phi.validate().map_err(input("phi"))?;

        let functions = self
            .family_a
            .functions
            .iter()
            .enumerate()
            .map(|(i, v)| ComplexFunction::new(x.clone(), v.clone()).map_err(input(&format!("family_A.functions[{i}]"))))
            .collect::<Result<Vec<_>, _>>()?;
        let family = FunctionFamily::new(x.clone(), self.family_a.kind, self.family_a.path, functions)
            .map_err(input("family_A"))?;

        let map = match &self.map {
            MapDoc::Planted(p) => {
                let mut sigma = vec![usize::MAX; y.len()];
                for (yid, xid) in &p.sigma {
                    let yi = y.index_of(yid).map_err(input("map.planted.sigma"))?;
                    sigma[yi] = x.index_of(xid).map_err(input("map.planted.sigma"))?;
                }
                if let Some(yi) = sigma.iter().position(|s| *s == usize::MAX) {
                    return Err(CliError::Input(format!("map.planted.sigma: no image for point `{}`", y.id(yi))));
                }
                let mut angles = vec![0.0; y.len()];
                for (yid, a) in &p.weights_rad {
                    angles[y.index_of(yid).map_err(input("map.planted.weights_rad"))?] = *a;
                }
                MapSpec::Planted(PlantedMap::new(x.len(), sigma, angles).map_err(input("map.planted"))?)
            }
            MapDoc::Pairs(pairs) => MapSpec::Pairs(
                pairs
                    .iter()
                    .enumerate()
                    .map(|(i, p)| {
                        let ctx = format!("map.pairs[{i}]");
                        Ok((
                            ComplexFunction::new(x.clone(), p.f.clone()).map_err(input(&ctx))?,
                            ComplexFunction::new(y.clone(), p.tf.clone()).map_err(input(&ctx))?,
                        ))
                    })
                    .collect::<Result<Vec<_>, CliError>>()?,
            ),
        };
        let perturbation = match &self.perturbation {
            Some(p) => Some(Perturbation {
                pair_index: p.pair_index,
                point: y.index_of(&p.point).map_err(input("perturbation.point"))?,
                delta: p.delta,
            }),
            None => None,
        };
        Ok(ScenarioSpec {
            x,
            y,
            phi: self.phi.clone(),
            rho: self.rho,
            family,
            map,
            perturbation,
            tolerance,
            sampler: self.sampler,
            seed: self.seed,
        })
    }

    pub fn from_spec(spec: &ScenarioSpec) -> Self {
        let (x, y) = (&spec.x, &spec.y);
        let map = match &spec.map {
            MapSpec::Planted(p) => MapDoc::Planted(PlantedDoc {
                sigma: p
                    .sigma()
                    .iter()
                    .enumerate()
                    .map(|(yi, &xi)| (y.id(yi).to_owned(), x.id(xi).to_owned()))
                    .collect(),
                weights_rad: p
                    .angles()
                    .iter()
                    .enumerate()
                    .filter(|(_, a)| **a != 0.0)
                    .map(|(yi, a)| (y.id(yi).to_owned(), *a))
                    .collect(),
            }),
            MapSpec::Pairs(pairs) => MapDoc::Pairs(
                pairs
                    .iter()
                    .map(|(f, tf)| PairDoc {
                        f: f.values().to_vec(),
                        tf: tf.values().to_vec(),
                    })
                    .collect(),
            ),
        };
        Self {
            version: SCENARIO_VERSION,
            tolerance: spec.tolerance.eq_tol,
            spaces: SpacesDoc {
                x: x.points().to_vec(),
                y: y.points().to_vec(),
            },
            phi: spec.phi.clone(),
            rho: spec.rho,
            family_a: FamilyDoc {
                kind: spec.family.kind(),
                path: spec.family.path(),
                functions: spec.family.functions().iter().map(|f| f.values().to_vec()).collect(),
            },
            map,
            perturbation: spec.perturbation.map(|p| PerturbationDoc {
                pair_index: p.pair_index,
                point: y.id(p.point).to_owned(),
                delta: p.delta,
            }),
            sampler: spec.sampler,
            seed: spec.seed,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scenario::random_scenario;

    const SWAP: &str = r#"{
      "version": 1,
      "spaces": {"X": ["1", "2"], "Y": ["1", "2"]},
      "phi": {"kind": "linear", "a": 1, "b": 1},
      "rho": "plus",
      "family_A": {"kind": "explicit_list", "path": "additive",
                   "functions": [[[1,0],[0,0]], [[0,0],[1,0]]]},
      "map": {"planted": {"sigma": {"1": "2", "2": "1"}}}
    }"#;

    #[test]
    fn parses_minimal_file() {
        let f = ScenarioFile::parse(SWAP).unwrap();
        assert_eq!(f.tolerance, 1e-9);
        let spec = f.to_spec().unwrap();
        let MapSpec::Planted(p) = &spec.map else { panic!() };
        assert_eq!(p.sigma(), &[1, 0]);
        let t = spec.build_table().unwrap();
        assert_eq!(t.tfs()[0].values(), &[Complex::new(0.0, 0.0), Complex::new(1.0, 0.0)]);
    }

    #[test]
    fn unknown_keys_are_named() {
        let bad = SWAP.replace("\"rho\"", "\"rho_kind\": \"plus\", \"rho\"");
        let e = ScenarioFile::parse(&bad).unwrap_err().to_string();
        assert!(e.contains("rho_kind"), "{e}");
        assert!(e.contains("line"), "{e}");
        let bad = SWAP.replace("\"sigma\"", "\"sigmas\"");
        assert!(ScenarioFile::parse(&bad).unwrap_err().to_string().contains("sigmas"));
    }

    #[test]
    fn unresolved_references_are_input_errors() {
        let bad = SWAP.replace(r#""2": "1""#, r#""2": "9""#);
        let e = ScenarioFile::parse(&bad).unwrap().to_spec().unwrap_err().to_string();
        assert!(e.contains("`9`"), "{e}");
        let bad = SWAP.replace("\"version\": 1", "\"version\": 2");
        assert!(ScenarioFile::parse(&bad).unwrap().to_spec().is_err());
        let bad = SWAP.replace(r#""2": "1""#, r#""2": "2""#);
        assert!(ScenarioFile::parse(&bad).unwrap().to_spec().is_err());
    }

    #[test]
    fn spec_round_trips_through_file() {
        for seed in [3, 8, 21] {
            let spec = random_scenario(seed);
            let file = ScenarioFile::from_spec(&spec);
            let text = file.to_json();
            let back = ScenarioFile::parse(&text).unwrap();
            assert_eq!(back, file);
            let again = back.to_spec().unwrap();
            assert_eq!(again.family.functions(), spec.family.functions());
            assert_eq!(again.build_table().unwrap().tfs(), spec.build_table().unwrap().tfs());
        }
    }
}
