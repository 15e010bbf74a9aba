//! Scenario files, report documents and the `check-phi` / `analyze` /
//! `gen-demo` commands behind the `cimlab` binary.
//!
//! Exit codes: 0 pass, 1 fail, 2 input error, 3 hypothesis failure or vacuity.

mod demo;
mod file;
mod report;

use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::analysis::{run_full_analysis, OverallVerdict};
use crate::phi::{check_all, CheckStatus, PhiSpec, SamplerConfig};
use crate::space::ToleranceConfig;

pub use demo::{demo_file, demo_scenario, TEMPLATES};
pub use file::{FamilyDoc, MapDoc, PairDoc, PerturbationDoc, PlantedDoc, ScenarioFile, SpacesDoc, SCENARIO_VERSION};
pub use report::{
    render_analysis_text, render_phi_text, to_json, PhiReportDocument, ReportDocument, RunMetadata,
    REPORT_SCHEMA_VERSION, TOOL_NAME, TOOL_VERSION,
};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_HYPOTHESIS: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        EXIT_INPUT
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum ReportFormat {
    #[default]
    Text,
    Json,
}

#[derive(Debug, Clone, Default, Args)]
pub struct GlobalOpts {
    /// Equality tolerance, overriding the scenario's.
    #[arg(long, global = true)]
    pub tolerance: Option<f64>,
    /// Seed, overriding the scenario's.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
    /// Write the output here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Print nothing on stdout.
    #[arg(long, global = true)]
    pub quiet: bool,
    /// Record wall time in the report (makes it non-reproducible).
    #[arg(long, global = true)]
    pub timing: bool,
}

#[derive(Debug, Parser)]
#[command(name = "cimlab", version, about = "Norm functionals of two-variable functions and recovery of composition-in-modulus maps on finite spaces")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalOpts,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sample the axioms of a phi spec.
    CheckPhi(CheckPhiArgs),
    /// Run the full analysis on a scenario file.
    Analyze(AnalyzeArgs),
    /// Write a ready-to-run scenario file.
    GenDemo(GenDemoArgs),
}

#[derive(Debug, Args)]
pub struct CheckPhiArgs {
    /// Path to a phi document, or the document inline.
    pub spec: Option<String>,
    /// Custom expression in `|s|`, `|t|`, instead of a document.
    #[arg(long, conflicts_with = "spec")]
    pub expr: Option<String>,
    #[arg(long)]
    pub samples: Option<usize>,
    #[arg(long)]
    pub grid_steps: Option<usize>,
    #[arg(long)]
    pub grid_radius: Option<f64>,
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    pub file: PathBuf,
    /// Comma-separated radii, e.g. `0.5,1,2`.
    #[arg(long, value_delimiter = ',')]
    pub r_schedule: Option<Vec<f64>>,
}

#[derive(Debug, Args)]
pub struct GenDemoArgs {
    pub name: String,
}

/// Rendered output and the exit code it maps to.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub exit_code: i32,
    pub output: String,
}

fn read(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_owned(),
        source,
    })
}

fn parse_phi(source: &str) -> Result<PhiSpec, CliError> {
    let spec: PhiSpec = serde_json::from_str(source).map_err(|e| CliError::Input(format!("phi: {e}")))?;
    spec.validate().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(spec)
}

fn tolerance(override_: Option<f64>, fallback: ToleranceConfig) -> Result<ToleranceConfig, CliError> {
    match override_ {
        Some(t) => ToleranceConfig::new(t).map_err(|e| CliError::Input(e.to_string())),
        None => Ok(fallback),
    }
}

pub fn cmd_check_phi(args: &CheckPhiArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let spec = match (&args.spec, &args.expr) {
        (_, Some(expr)) => PhiSpec::custom(expr).map_err(|e| CliError::Input(e.to_string()))?,
        (Some(s), None) if s.trim_start().starts_with('{') => parse_phi(s)?,
        (Some(path), None) => parse_phi(&read(Path::new(path))?)?,
        (None, None) => return Err(CliError::Input("check-phi needs a phi document or --expr".into())),
    };
    let tol = tolerance(g.tolerance, ToleranceConfig::default())?;
    let seed = g.seed.unwrap_or(0);
    let mut cfg = SamplerConfig::with_seed(seed);
    if let Some(n) = args.samples {
        cfg.random_samples = n;
    }
    if let Some(n) = args.grid_steps {
        cfg.grid_steps = n;
    }
    if let Some(r) = args.grid_radius {
        if !(r > 0.0 && r.is_finite()) {
            return Err(CliError::Input(format!("grid radius must be positive, got {r}")));
        }
        cfg.grid_radius = r;
    }
    let start = Instant::now();
    let axioms = check_all(&spec, &cfg, &tol);
    let mut meta = RunMetadata::new("check-phi", seed);
    if g.timing {
        meta.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    let exit_code = if axioms.inc.status == CheckStatus::Fail || axioms.con.status == CheckStatus::Fail {
        EXIT_FAIL
    } else {
        EXIT_PASS
    };
    let doc = PhiReportDocument {
        meta,
        phi: spec,
        rho_plus_case: axioms.rho_plus_case(),
        axioms,
    };
    let output = match g.report {
        ReportFormat::Text => render_phi_text(&doc),
        ReportFormat::Json => to_json(&doc),
    };
    Ok(Outcome { exit_code, output })
}

/// Parses, builds and analyses a scenario given as text.
pub fn analyze_document(text: &str, r_schedule: Option<&[f64]>, g: &GlobalOpts) -> Result<ReportDocument, CliError> {
    let mut spec = ScenarioFile::parse(text)?.to_spec()?;
    spec.tolerance = tolerance(g.tolerance, spec.tolerance)?;
    if let Some(seed) = g.seed {
        spec.seed = seed;
        if let Some(s) = spec.sampler.as_mut() {
            s.seed = seed;
        }
    }
    let start = Instant::now();
    let table = spec.build_table().map_err(|e| CliError::Input(e.to_string()))?;
    let mut options = spec.options();
    if let Some(r) = r_schedule {
        if r.is_empty() || r.iter().any(|v| !(*v > 0.0 && v.is_finite())) {
            return Err(CliError::Input(format!("r schedule must be nonempty and positive: {r:?}")));
        }
        options.r_schedule = r.to_vec();
    }
    let report = run_full_analysis(&table, &spec.phi, spec.rho, &options);
    let mut meta = RunMetadata::new("analyze", spec.seed);
    if g.timing {
        meta.wall_time_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    Ok(ReportDocument { meta, report })
}

pub fn verdict_exit_code(v: OverallVerdict) -> i32 {
    v.exit_code()
}

pub fn cmd_analyze(args: &AnalyzeArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    let doc = analyze_document(&read(&args.file)?, args.r_schedule.as_deref(), g)?;
    let output = match g.report {
        ReportFormat::Text => render_analysis_text(&doc),
        ReportFormat::Json => to_json(&doc),
    };
    Ok(Outcome {
        exit_code: verdict_exit_code(doc.report.overall_verdict),
        output,
    })
}

pub fn cmd_gen_demo(args: &GenDemoArgs, g: &GlobalOpts) -> Result<Outcome, CliError> {
    Ok(Outcome {
        exit_code: EXIT_PASS,
        output: demo_file(&args.name, g.seed.unwrap_or(0))?,
    })
}

/// Writes via a temporary file in the target directory, then renames.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let io = |source| CliError::Io {
        path: path.to_owned(),
        source,
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d.to_owned(),
        _ => PathBuf::from("."),
    };
    let name = path.file_name().ok_or_else(|| CliError::Input(format!("{} is not a file path", path.display())))?;
    let tmp = dir.join(format!(".{}.tmp{}", name.to_string_lossy(), std::process::id()));
    std::fs::write(&tmp, contents).map_err(io)?;
    std::fs::rename(&tmp, path).map_err(|e| {
        let _ = std::fs::remove_file(&tmp);
        io(e)
    })
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: Cli) -> i32 {
    let g = &cli.global;
    let outcome = match &cli.command {
        Command::CheckPhi(a) => cmd_check_phi(a, g),
        Command::Analyze(a) => cmd_analyze(a, g),
        Command::GenDemo(a) => cmd_gen_demo(a, g),
    };
    let outcome = match outcome {
        Ok(o) => o,
        Err(e) => {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    };
    if let Some(path) = &g.out {
        if let Err(e) = write_atomic(path, &outcome.output) {
            eprintln!("error: {e}");
            return e.exit_code();
        }
    } else if !g.quiet {
        let mut stdout = std::io::stdout().lock();
        let _ = stdout.write_all(outcome.output.as_bytes());
    }
    outcome.exit_code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn quick() -> CheckPhiArgs {
        CheckPhiArgs {
            spec: None,
            expr: None,
            samples: Some(500),
            grid_steps: None,
            grid_radius: None,
        }
    }

    #[test]
    fn check_phi_linear_and_violator() {
        let g = GlobalOpts::default();
        let mut a = quick();
        a.spec = Some(r#"{"kind": "linear", "a": 1, "b": 1}"#.into());
        let o = cmd_check_phi(&a, &g).unwrap();
        assert_eq!(o.exit_code, EXIT_PASS);
        assert!(o.output.contains("informational"));

        let mut a = quick();
        a.expr = Some("sqrt(|s|) + |t|".into());
        assert_eq!(cmd_check_phi(&a, &g).unwrap().exit_code, EXIT_FAIL);

        let mut a = quick();
        a.spec = Some(r#"{"a": 1, "b": 1}"#.into());
        let e = cmd_check_phi(&a, &g).unwrap_err();
        assert_eq!(e.exit_code(), EXIT_INPUT);
        assert!(e.to_string().contains("kind"), "{e}");
    }

    #[test]
    fn demos_are_deterministic_and_named() {
        for name in TEMPLATES {
            assert_eq!(demo_file(name, 7).unwrap(), demo_file(name, 7).unwrap());
        }
        assert_ne!(demo_file("additive-basic", 7).unwrap(), demo_file("additive-basic", 8).unwrap());
        assert_eq!(demo_file("nope", 7).unwrap_err().exit_code(), EXIT_INPUT);
    }

    #[test]
    fn demo_verdicts() {
        let g = GlobalOpts::default();
        for (name, verdict) in [
            ("additive-basic", OverallVerdict::Pass),
            ("multiplicative-basic", OverallVerdict::Pass),
            ("perturbed", OverallVerdict::Fail),
            ("degenerate", OverallVerdict::HypothesisFailed),
        ] {
            let doc = analyze_document(&demo_file(name, 7).unwrap(), None, &g).unwrap();
            assert_eq!(doc.report.overall_verdict, verdict, "{name}: {:?}", doc.report.failed_stage);
        }
    }

    #[test]
    fn report_round_trips_and_text_carries_verdicts() {
        let g = GlobalOpts::default();
        let doc = analyze_document(&demo_file("perturbed", 3).unwrap(), None, &g).unwrap();
        let json = to_json(&doc);
        let back: ReportDocument = serde_json::from_str(&json).unwrap();
        assert_eq!(to_json(&back), json);
        let text = render_analysis_text(&doc);
        assert!(text.contains("overall: fail"));
        assert!(text.contains("witnesses"));
        assert!(doc.meta.wall_time_ms.is_none());
    }

    #[test]
    fn atomic_write_replaces_file() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("r.json");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);
    }
}
