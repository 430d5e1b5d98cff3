//! The `ifm` command line: `audit`, `contract`, `solve` and `demo`.
//!
//! Exit codes:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | success |
//! | 1 | runtime or I/O error |
//! | 2 | unreadable or invalid configuration |
//! | 3 | an audited axiom or contraction inequality fails |
//! | 4 | no fixed point found |
//! | 5 | fixed points found but not unique |

pub mod config;

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::audit::audit_space;
use crate::contraction::{check_admissible, check_k_contractive, check_psi_phi_contractive};
use crate::contraction::{AdmissibilityReport, ContractionReport};
use crate::solver::{edelstein_solve, solve_fixed_point, IterationTrace, StopReason};
use crate::Error;

pub use config::{ConfigError, RunConfig};
use config::{
    ConormName, Construction, ContractionSpec, DomainSpec, EngineName, MapSpec, OutputSpec, SamplerMode,
    SamplerSpec, SolverSpec, SpaceSpec, SCHEMA_VERSION,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_RUNTIME: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_VIOLATION: i32 = 3;
pub const EXIT_NO_FIXED_POINT: i32 = 4;
pub const EXIT_NOT_UNIQUE: i32 = 5;

/// Grid resolution used when checking the admissibility of ψ and φ.
const ADMISSIBILITY_GRID: usize = 1000;

#[derive(Debug, Parser)]
#[command(name = "ifm", version, about = "Fixed points in intuitionistic fuzzy metric spaces")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `output.dir`; default `out`).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Overrides the sampler seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Print the normalized configuration as JSON and exit.
    #[arg(long, global = true)]
    pub dump_config: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Check the space axioms.
    Audit,
    /// Check the contraction conditions of the configured map.
    Contract,
    /// Compute fixed points.
    Solve,
    /// Run the bundled scenarios into `<out>/<scenario>/`.
    Demo,
}

#[derive(Debug, thiserror::Error)]
enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error(transparent)]
    Core(#[from] Error),
    #[error("cannot write {path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl RunError {
    fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Core(_) | RunError::Io { .. } => EXIT_RUNTIME,
        }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match Cli::try_parse_from(args) {
        Ok(cli) => run(&cli),
        Err(e) => {
            let _ = e.print();
            if e.use_stderr() {
                EXIT_CONFIG
            } else {
                EXIT_OK
            }
        }
    }
}

pub fn run(cli: &Cli) -> i32 {
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli) -> Result<i32, RunError> {
    if cli.command == Command::Demo {
        return run_demo(cli);
    }
    let path = cli.config.as_deref().ok_or_else(|| ConfigError::Invalid {
        field: "--config".into(),
        message: "a configuration file is required".into(),
    })?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(seed) = cli.seed {
        cfg.sampler.seed = seed;
    }
    let cfg = normalize(cfg)?;
    if cli.dump_config {
        println!("{}", cfg.to_json());
        return Ok(EXIT_OK);
    }
    let out = cli
        .out
        .clone()
        .or_else(|| cfg.output.dir.as_ref().map(PathBuf::from))
        .unwrap_or_else(|| PathBuf::from("out"));
    execute(&cfg, cli.command, &out)
}

/// Fills in the defaults that depend on other fields so that the dumped
/// form states every choice explicitly.
fn normalize(mut cfg: RunConfig) -> Result<RunConfig, ConfigError> {
    let space = cfg.build_space()?;
    cfg.space.tconorm = Some(match space.tconorm {
        crate::norm::TConorm::ProbabilisticSum => ConormName::ProbabilisticSum,
        crate::norm::TConorm::Maximum => ConormName::Maximum,
        crate::norm::TConorm::BoundedSum => ConormName::BoundedSum,
        crate::norm::TConorm::Custom(_) => unreachable!("configs name built-in conorms"),
    });
    cfg.space.triangle_mode = Some(space.triangle_mode);
    cfg.validate()?;
    Ok(cfg)
}

fn write_file(path: &Path, contents: &str) -> Result<(), RunError> {
    let io = |source| RunError::Io {
        path: path.display().to_string(),
        source,
    };
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir).map_err(io)?;
    }
    fs::write(path, contents).map_err(io)
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("reports are serializable");
    s.push('\n');
    s
}

fn execute(cfg: &RunConfig, command: Command, out: &Path) -> Result<i32, RunError> {
    match command {
        Command::Audit => cmd_audit(cfg, out),
        Command::Contract => cmd_contract(cfg, out),
        Command::Solve => cmd_solve(cfg, out),
        Command::Demo => unreachable!("demo is dispatched separately"),
    }
}

fn cmd_audit(cfg: &RunConfig, out: &Path) -> Result<i32, RunError> {
    let space = cfg.build_space()?;
    let sampler = cfg.build_sampler()?;
    let report = audit_space(&space, &sampler)?;
    write_file(&out.join("audit.json"), &to_json(&report))?;
    let failing = report.failing();
    if failing.is_empty() {
        log::info!("audit: all axioms pass");
        Ok(EXIT_OK)
    } else {
        log::info!("audit: failing axioms {failing:?}");
        Ok(EXIT_VIOLATION)
    }
}

#[derive(Serialize)]
struct ContractOutput {
    map: String,
    admissibility: AdmissibilityReport,
    checks: Vec<ContractionReport>,
    passed: bool,
}

fn cmd_contract(cfg: &RunConfig, out: &Path) -> Result<i32, RunError> {
    let space = cfg.build_space()?;
    let map = cfg.build_map(&space)?;
    let sampler = cfg.build_sampler()?;
    let (k, pair) = cfg.build_contraction()?;
    let admissibility = check_admissible(&pair, ADMISSIBILITY_GRID)?;
    let mut checks = Vec::new();
    if let Some(k) = k {
        checks.push(check_k_contractive(&space, &map, k, &sampler)?);
    }
    checks.push(check_psi_phi_contractive(&space, &map, &pair, &sampler)?);
    let passed = checks.iter().all(ContractionReport::passed);
    let output = ContractOutput {
        map: format!("{map:?}"),
        admissibility,
        checks,
        passed,
    };
    write_file(&out.join("contract.json"), &to_json(&output))?;
    Ok(if passed { EXIT_OK } else { EXIT_VIOLATION })
}

#[derive(Serialize)]
struct NonConvergenceOutput {
    error: String,
    max_iter: usize,
    seeds: Vec<TraceSummary>,
}

#[derive(Serialize)]
struct TraceSummary {
    seed: crate::space::Point,
    iterations: usize,
    stop_reason: StopReason,
    last: crate::space::Point,
}

fn write_traces(out: &Path, traces: &[IterationTrace]) -> Result<(), RunError> {
    for (i, trace) in traces.iter().enumerate() {
        write_file(&out.join(format!("trace_seed_{i}.csv")), &trace.to_csv())?;
    }
    Ok(())
}

fn cmd_solve(cfg: &RunConfig, out: &Path) -> Result<i32, RunError> {
    let space = cfg.build_space()?;
    let map = cfg.build_map(&space)?;
    let solver = cfg.build_solver(&space)?;
    let result = match cfg.solver.engine {
        EngineName::Picard => solve_fixed_point(&space, &map, &solver),
        EngineName::Edelstein => edelstein_solve(&space, &map, &solver),
    };
    let report = match result {
        Ok(report) => report,
        Err(Error::NonConvergence { max_iter, traces }) => {
            let output = NonConvergenceOutput {
                error: format!("no seed converged within {max_iter} iterations"),
                max_iter,
                seeds: traces
                    .iter()
                    .map(|t| TraceSummary {
                        seed: t.points[0],
                        iterations: t.steps(),
                        stop_reason: t.stop_reason,
                        last: *t.last(),
                    })
                    .collect(),
            };
            write_file(&out.join("solve.json"), &to_json(&output))?;
            write_traces(out, &traces)?;
            log::warn!("solve: no seed converged");
            return Ok(EXIT_NO_FIXED_POINT);
        }
        Err(e) => return Err(e.into()),
    };
    write_file(&out.join("solve.json"), &to_json(&report))?;
    write_traces(out, &report.traces)?;
    Ok(if report.fixed_point.is_none() {
        EXIT_NO_FIXED_POINT
    } else if !report.unique {
        EXIT_NOT_UNIQUE
    } else {
        EXIT_OK
    })
}

/// Default sampler seed of the bundled scenarios.
pub const DEMO_SEED: u64 = 42;

/// The bundled scenarios, in run order.
pub fn demo_scenarios(seed: u64) -> Vec<(&'static str, RunConfig, Vec<Command>)> {
    let halving = RunConfig {
        schema_version: SCHEMA_VERSION,
        space: SpaceSpec {
            construction: Construction::Standard,
            domain: DomainSpec::Interval { lo: 0.0, hi: 1.0 },
            tnorm: config::NormName::Product,
            tconorm: None,
            triangle_mode: None,
        },
        map: Some(MapSpec::Scale { factor: 0.5 }),
        contraction: Some(ContractionSpec {
            k: Some(0.5),
            psi: None,
            phi: None,
        }),
        solver: SolverSpec {
            epsilon: 1e-8,
            seeds: vec![1.0, 0.7, 0.3],
            ..SolverSpec::default()
        },
        sampler: SamplerSpec {
            sample_count: 2000,
            seed,
            ..SamplerSpec::default()
        },
        output: OutputSpec::default(),
    };
    let crisp = RunConfig {
        space: SpaceSpec {
            construction: Construction::CrispThreshold,
            domain: DomainSpec::Line { n: 5 },
            ..halving.space.clone()
        },
        map: Some(MapSpec::Table {
            images: vec![0, 0, 1, 2, 3],
        }),
        solver: SolverSpec::default(),
        sampler: SamplerSpec {
            mode: SamplerMode::Exhaustive,
            sample_count: 1,
            t_grid: vec![0.5, 2.0],
            seed,
        },
        ..halving.clone()
    };
    let edelstein = RunConfig {
        space: SpaceSpec {
            domain: DomainSpec::Line { n: 10 },
            ..halving.space.clone()
        },
        map: Some(MapSpec::Table {
            images: (0..10).map(|i| i / 2).collect(),
        }),
        contraction: None,
        solver: SolverSpec {
            engine: EngineName::Edelstein,
            ..SolverSpec::default()
        },
        ..halving.clone()
    };
    vec![
        ("standard-halving", halving, vec![Command::Audit, Command::Contract, Command::Solve]),
        ("crisp-space", crisp, vec![Command::Audit, Command::Contract]),
        ("finite-edelstein", edelstein, vec![Command::Solve]),
    ]
}

#[derive(Serialize)]
struct DemoStep {
    command: String,
    exit_code: i32,
}

fn run_demo(cli: &Cli) -> Result<i32, RunError> {
    let scenarios = demo_scenarios(cli.seed.unwrap_or(DEMO_SEED));
    let mut normalized = Vec::with_capacity(scenarios.len());
    for (name, cfg, commands) in scenarios {
        normalized.push((name, normalize(cfg)?, commands));
    }
    if cli.dump_config {
        let map: serde_json::Map<String, serde_json::Value> = normalized
            .iter()
            .map(|(name, cfg, _)| (name.to_string(), serde_json::to_value(cfg).expect("serializable")))
            .collect();
        println!("{}", serde_json::to_string_pretty(&map).expect("serializable"));
        return Ok(EXIT_OK);
    }
    let root = cli.out.clone().unwrap_or_else(|| PathBuf::from("out"));
    let mut summary = serde_json::Map::new();
    for (name, cfg, commands) in &normalized {
        let dir = root.join(name);
        write_file(&dir.join("config.json"), &format!("{}\n", cfg.to_json()))?;
        let mut steps = Vec::new();
        for &command in commands {
            let exit_code = execute(cfg, command, &dir)?;
            log::info!("demo {name}: {command:?} exited {exit_code}");
            steps.push(DemoStep {
                command: format!("{command:?}").to_lowercase(),
                exit_code,
            });
        }
        summary.insert(name.to_string(), serde_json::to_value(&steps).expect("serializable"));
    }
    write_file(&root.join("summary.json"), &to_json(&summary))?;
    Ok(EXIT_OK)
}
