use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::file::ScenarioFile;
use super::CliError;
use crate::family::{AlgebraicPath, FamilyKind};
use crate::phi::{PhiSpec, RhoKind};
use crate::scenario::{
    align_family, degenerate_family, modulus_delta, peaking_member, random_family, MapSpec, Perturbation, PlantedMap, ScenarioSpec,
};
use crate::space::{FiniteSpace, ToleranceConfig};

pub const TEMPLATES: [&str; 4] = ["additive-basic", "multiplicative-basic", "perturbed", "degenerate"];

/// Size of the demo spaces.
const DEMO_POINTS: usize = 3;

fn spaces() -> (Arc<FiniteSpace>, Arc<FiniteSpace>) {
    let ids = |p: &'static str| (1..=DEMO_POINTS).map(move |i| format!("{p}{i}"));
    (
        Arc::new(FiniteSpace::new(ids("x")).expect("distinct ids")),
        Arc::new(FiniteSpace::new(ids("y")).expect("distinct ids")),
    )
}

fn planted(
    kind: FamilyKind,
    path: AlgebraicPath,
    phi: PhiSpec,
    rho: RhoKind,
    seed: u64,
) -> ScenarioSpec {
    let (x, y) = spaces();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = random_family(x.clone(), kind, path, 2, rng.gen()).expect("kind matches path");
    let phases = matches!(kind, FamilyKind::SubspaceSpan | FamilyKind::MultList);
    let map = PlantedMap::random(DEMO_POINTS, phases, &mut rng);
    let family = align_family(&family, &map).expect("same space");
    ScenarioSpec {
        x,
        y,
        phi,
        rho,
        family,
        map: MapSpec::Planted(map),
        perturbation: None,
        tolerance: ToleranceConfig::default(),
        sampler: None,
        seed,
    }
}

fn additive(seed: u64) -> ScenarioSpec {
    planted(
        FamilyKind::SubspaceSpan,
        AlgebraicPath::Additive,
        PhiSpec::linear(1.0, 1.0),
        RhoKind::Plus,
        seed,
    )
}

fn degenerate(seed: u64) -> ScenarioSpec {
    let (x, y) = spaces();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let family = degenerate_family(x.clone(), FamilyKind::ExplicitList, AlgebraicPath::Additive, rng.gen())
        .expect("explicit lists are additive");
    let map = PlantedMap::random(DEMO_POINTS, false, &mut rng);
    ScenarioSpec {
        x,
        y,
        phi: PhiSpec::linear(1.0, 1.0),
        rho: RhoKind::Plus,
        family,
        map: MapSpec::Planted(map),
        perturbation: None,
        tolerance: ToleranceConfig::default(),
        sampler: None,
        seed,
    }
}

/// Builds the named template; deterministic per seed.
pub fn demo_scenario(name: &str, seed: u64) -> Result<ScenarioSpec, CliError> {
    Ok(match name {
        "additive-basic" => additive(seed),
        "multiplicative-basic" => planted(
            FamilyKind::MultList,
            AlgebraicPath::Multiplicative,
            PhiSpec::Product,
            RhoKind::Max,
            seed,
        ),
        "perturbed" => {
            let mut spec = additive(seed);
            let table = spec.build_table().map_err(|e| CliError::Input(e.to_string()))?;
            let (pair_index, point) =
                peaking_member(&table, &spec.tolerance).expect("indicator images peak at one point");
            spec.perturbation = Some(Perturbation {
                pair_index,
                point,
                delta: modulus_delta(&table, pair_index, point, 0.25),
            });
            spec
        }
        "degenerate" => degenerate(seed),
        other => {
            return Err(CliError::Input(format!(
                "unknown template `{other}` (expected one of {})",
                TEMPLATES.join(", ")
            )))
        }
    })
}

pub fn demo_file(name: &str, seed: u64) -> Result<String, CliError> {
    Ok(ScenarioFile::from_spec(&demo_scenario(name, seed)?).to_json())
}
