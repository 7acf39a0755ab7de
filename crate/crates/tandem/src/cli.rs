//! Command line front end. `run_cli` parses arguments, dispatches, and maps
//! every error to a stable exit code: 0 success, 2 usage, 3 file access,
//! 4 malformed input, 5 inconsistent input, 6 solver failure.
//!
//! Commands print JSON or CSV to stdout; errors go to stderr as one JSON
//! record. `--out` (or the `TANDEM_OUT_DIR` environment variable) selects a
//! directory for full run reports.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::cost::total_objective;
use crate::error::{Error, Result};
use crate::io::{
    gen_instance, parse_genspec_file, parse_mapping_file, parse_problem_file, write_report,
    GenSpec,
};
use crate::model::arch::apply_architecture;
use crate::optim::{
    brute_force, co_search, evolutionary, gradient_descent_relaxed, simulated_annealing,
    AnnealConfig, BruteConfig, CosearchConfig, CosearchMode, EvolveConfig, GdConfig, GradTarget,
    InnerSolver, JointConfig, Problem, ProblemInstance, SolveResult,
};

#[derive(Parser)]
#[command(
    name = "tandem",
    version,
    about = "Joint search over model architectures and hardware mappings"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a problem file, reporting its shape.
    Validate { spec: PathBuf },
    /// Evaluate one mapping (and variant choice) exactly.
    Eval(EvalArgs),
    /// Search for a good mapping of a fixed model.
    Optimize(OptimizeArgs),
    /// Search over architecture variants and mappings together.
    Cosearch(CosearchArgs),
    /// Generate random instances and compare solvers on them.
    Bench(BenchArgs),
    /// Re-solve one problem across a grid of objective weights.
    Sweep(SweepArgs),
}

#[derive(Args)]
struct EvalArgs {
    spec: PathBuf,
    /// Mapping file: a JSON object of component to device.
    #[arg(long)]
    mapping: PathBuf,
    /// Variant choice labels, comma separated, for space problems.
    #[arg(long, value_delimiter = ',')]
    alpha: Option<Vec<String>>,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum MethodArg {
    Brute,
    Anneal,
    Evolve,
    Grad,
}

#[derive(Args)]
struct OptimizeArgs {
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = MethodArg::Anneal)]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory for the full report (solution.json and CSVs).
    #[arg(long)]
    out: Option<PathBuf>,

    /// Enumeration cap for `brute`.
    #[arg(long)]
    limit: Option<u64>,

    /// Iteration count for `anneal`.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long)]
    initial_temp: Option<f64>,
    #[arg(long)]
    cooling_rate: Option<f64>,

    /// Population size for `evolve`.
    #[arg(long)]
    population: Option<usize>,
    #[arg(long)]
    generations: Option<u64>,
    #[arg(long)]
    mutation_rate: Option<f64>,
    #[arg(long)]
    tournament: Option<usize>,
    #[arg(long)]
    elites: Option<usize>,

    /// Step count per restart for `grad`.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    restarts: Option<u32>,
    #[arg(long)]
    tau_start: Option<f64>,
    #[arg(long)]
    tau_end: Option<f64>,
    #[arg(long)]
    beta_start: Option<f64>,
    #[arg(long)]
    beta_end: Option<f64>,
    /// Gradient estimator for `grad`: the deterministic surrogate or
    /// Monte Carlo sampling.
    #[arg(long, value_enum)]
    target: Option<TargetArg>,
    /// Samples per step when `--target mc`.
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long)]
    jitter: Option<f64>,
    /// Hill-climb the hardened mapping after descent.
    #[arg(long)]
    polish: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum TargetArg {
    Surrogate,
    Mc,
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, ValueEnum)]
enum CosearchModeArg {
    Enumerate,
    Joint,
}

#[derive(Args)]
struct CosearchArgs {
    spec: PathBuf,
    #[arg(long, value_enum, default_value_t = CosearchModeArg::Enumerate)]
    mode: CosearchModeArg,
    /// Mapping solver run per variant in `enumerate` mode.
    #[arg(long, value_enum, default_value_t = MethodArg::Brute)]
    inner: MethodArg,
    /// Refuse to enumerate spaces with more variants than this.
    #[arg(long, default_value_t = 1000)]
    cap: u128,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,

    /// Step count per restart in `joint` mode.
    #[arg(long)]
    steps: Option<u64>,
    #[arg(long)]
    learning_rate: Option<f64>,
    #[arg(long)]
    restarts: Option<u32>,
    #[arg(long)]
    beta_start: Option<f64>,
    #[arg(long)]
    beta_end: Option<f64>,
    #[arg(long)]
    jitter: Option<f64>,
}

#[derive(Args)]
struct BenchArgs {
    /// Generator spec file; defaults to the built-in spec.
    #[arg(long)]
    genspec: Option<PathBuf>,
    #[arg(long, default_value_t = 5)]
    count: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Solvers to compare, comma separated.
    #[arg(long, value_enum, value_delimiter = ',',
          default_values_t = [MethodArg::Brute, MethodArg::Anneal, MethodArg::Evolve, MethodArg::Grad])]
    methods: Vec<MethodArg>,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    spec: PathBuf,
    /// Latency-versus-quality weights to sweep, comma separated.
    #[arg(long, value_delimiter = ',', required = true, allow_hyphen_values = true)]
    gamma1: Vec<f64>,
    /// Power weights to sweep; defaults to the problem's own value.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    gamma2: Option<Vec<f64>>,
    #[arg(long, value_enum, default_value_t = MethodArg::Anneal)]
    method: MethodArg,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Runs the CLI and returns the process exit code.
pub fn run_cli<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(()) => 0,
        Err(e) => {
            let code = exit_code(&e);
            eprintln!(
                "{}",
                serde_json::json!({
                    "error": {"kind": error_kind(&e), "code": code, "message": e.to_string()}
                })
            );
            code
        }
    }
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Io(_) => "io",
        Error::Syntax { .. } => "syntax",
        Error::Schema { .. } => "schema",
        Error::Semantic { .. }
        | Error::InfeasibleSpec { .. }
        | Error::QualityKeyMissing { .. }
        | Error::QualityKeyUnknown { .. }
        | Error::UnknownComponent { .. }
        | Error::UnknownDevice { .. }
        | Error::UnknownModality { .. }
        | Error::UnknownSink { .. }
        | Error::UnmappedComponent { .. }
        | Error::Cycle { .. }
        | Error::MissingLink { .. }
        | Error::AlphaLength { .. }
        | Error::AlphaOutOfRange { .. }
        | Error::UnknownChoiceLabel { .. }
        | Error::UnsupportedScheme { .. } => "semantic",
        _ => "solver",
    }
}

fn exit_code(e: &Error) -> i32 {
    match error_kind(e) {
        "io" => 3,
        "syntax" | "schema" => 4,
        "semantic" => 5,
        _ => 6,
    }
}

fn dispatch(command: Command) -> Result<()> {
    match command {
        Command::Validate { spec } => validate_cmd(&spec),
        Command::Eval(args) => eval_cmd(args),
        Command::Optimize(args) => optimize_cmd(args),
        Command::Cosearch(args) => cosearch_cmd(args),
        Command::Bench(args) => bench_cmd(args),
        Command::Sweep(args) => sweep_cmd(args),
    }
}

fn validate_cmd(spec: &Path) -> Result<()> {
    let problem = parse_problem_file(spec)?;
    let summary = match &problem.instance {
        ProblemInstance::Fixed { graph, .. } => serde_json::json!({
            "valid": true,
            "instance": "fixed",
            "components": graph.components.len(),
            "edges": graph.edges.len(),
            "modalities": graph.modalities.len(),
            "sinks": graph.sinks.len(),
            "devices": problem.platform.devices.len(),
        }),
        ProblemInstance::Space(space) => serde_json::json!({
            "valid": true,
            "instance": "space",
            "variants": space.variant_count() as u64,
            "decision_points": space.decision_points.len(),
            "devices": problem.platform.devices.len(),
        }),
    };
    println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
    Ok(())
}

fn eval_cmd(args: EvalArgs) -> Result<()> {
    let problem = parse_problem_file(&args.spec)?;
    let mapping = parse_mapping_file(&args.mapping)?;
    let (graph, quality) = match (&problem.instance, args.alpha) {
        (ProblemInstance::Fixed { graph, quality }, None) => (graph.clone(), quality.clone()),
        (ProblemInstance::Fixed { .. }, Some(_)) => {
            return Err(Error::Semantic {
                message: "--alpha applies only to architecture-space problems".to_string(),
            });
        }
        (ProblemInstance::Space(space), Some(labels)) => {
            let alpha = space.alpha_from_labels(&labels)?;
            apply_architecture(space, &alpha)?
        }
        (ProblemInstance::Space(_), None) => {
            return Err(Error::Semantic {
                message: "an architecture-space problem needs --alpha to pick a variant"
                    .to_string(),
            });
        }
    };
    let breakdown = total_objective(&graph, &problem.platform, &mapping, &quality, &problem.params)?;
    println!("{}", serde_json::to_string_pretty(&breakdown).expect("json"));
    Ok(())
}

fn optimize_cmd(args: OptimizeArgs) -> Result<()> {
    let problem = parse_problem_file(&args.spec)?;
    let result = run_method(&problem, &args, args.method, args.seed)?;
    emit_result(&problem, &result, args.out.as_deref())
}

/// Builds the chosen solver's config from flags and runs it.
fn run_method(
    problem: &Problem,
    args: &OptimizeArgs,
    method: MethodArg,
    seed: u64,
) -> Result<SolveResult> {
    match method {
        MethodArg::Brute => {
            let mut config = BruteConfig::default();
            if let Some(limit) = args.limit {
                config.limit = limit;
            }
            brute_force(problem, &config)
        }
        MethodArg::Anneal => {
            let mut config = AnnealConfig {
                seed,
                ..AnnealConfig::default()
            };
            if let Some(v) = args.iterations {
                config.iterations = v;
            }
            if let Some(v) = args.initial_temp {
                config.initial_temp = v;
            }
            if let Some(v) = args.cooling_rate {
                config.cooling_rate = v;
            }
            simulated_annealing(problem, &config)
        }
        MethodArg::Evolve => {
            let mut config = EvolveConfig {
                seed,
                ..EvolveConfig::default()
            };
            if let Some(v) = args.population {
                config.population = v;
            }
            if let Some(v) = args.generations {
                config.generations = v;
            }
            if let Some(v) = args.mutation_rate {
                config.mutation_rate = v;
            }
            if let Some(v) = args.tournament {
                config.tournament = v;
            }
            if let Some(v) = args.elites {
                config.elites = v;
            }
            evolutionary(problem, &config)
        }
        MethodArg::Grad => {
            let mut config = GdConfig {
                seed,
                ..GdConfig::default()
            };
            if let Some(v) = args.steps {
                config.steps = v;
            }
            if let Some(v) = args.learning_rate {
                config.learning_rate = v;
            }
            if let Some(v) = args.restarts {
                config.restarts = v;
            }
            if let Some(v) = args.tau_start {
                config.tau_start = v;
            }
            if let Some(v) = args.tau_end {
                config.tau_end = v;
            }
            if let Some(v) = args.beta_start {
                config.beta_start = v;
            }
            if let Some(v) = args.beta_end {
                config.beta_end = v;
            }
            config.target = match (args.target, args.samples) {
                (Some(TargetArg::Mc), samples) => GradTarget::MonteCarlo {
                    samples: samples.unwrap_or(8),
                },
                (Some(TargetArg::Surrogate), _) | (None, None) => GradTarget::Surrogate,
                (None, Some(samples)) => GradTarget::MonteCarlo { samples },
            };
            if let Some(v) = args.jitter {
                config.jitter = v;
            }
            config.polish = args.polish;
            gradient_descent_relaxed(problem, &config)
        }
    }
}

fn cosearch_cmd(args: CosearchArgs) -> Result<()> {
    let problem = parse_problem_file(&args.spec)?;
    let mode = match args.mode {
        CosearchModeArg::Enumerate => CosearchMode::Enumerate(match args.inner {
            MethodArg::Brute => InnerSolver::Brute(BruteConfig::default()),
            MethodArg::Anneal => InnerSolver::Anneal(AnnealConfig {
                seed: args.seed,
                ..AnnealConfig::default()
            }),
            MethodArg::Evolve => InnerSolver::Evolve(EvolveConfig {
                seed: args.seed,
                ..EvolveConfig::default()
            }),
            MethodArg::Grad => InnerSolver::Grad(GdConfig {
                seed: args.seed,
                ..GdConfig::default()
            }),
        }),
        CosearchModeArg::Joint => {
            let mut config = JointConfig {
                seed: args.seed,
                ..JointConfig::default()
            };
            if let Some(v) = args.steps {
                config.steps = v;
            }
            if let Some(v) = args.learning_rate {
                config.learning_rate = v;
            }
            if let Some(v) = args.restarts {
                config.restarts = v;
            }
            if let Some(v) = args.beta_start {
                config.beta_start = v;
            }
            if let Some(v) = args.beta_end {
                config.beta_end = v;
            }
            if let Some(v) = args.jitter {
                config.jitter = v;
            }
            CosearchMode::Joint(config)
        }
    };
    let config = CosearchConfig {
        variant_cap: args.cap,
        mode,
    };
    let result = co_search(&problem, &config)?;
    emit_result(&problem, &result, args.out.as_deref())
}

/// Prints the run summary as JSON; writes the full report when a directory
/// was picked via `--out` or `TANDEM_OUT_DIR`.
fn emit_result(problem: &Problem, result: &SolveResult, out: Option<&Path>) -> Result<()> {
    let out_dir = out
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os("TANDEM_OUT_DIR").map(PathBuf::from));
    let mut summary = serde_json::json!({
        "method": result.method,
        "objective": result.objective,
        "mapping": result.mapping,
        "alpha_labels": result.alpha_labels,
        "sw_loss": result.breakdown.sw_loss,
        "max_latency": result.breakdown.hw.max_latency,
        "total_power": result.breakdown.hw.total_power,
        "evaluations": result.evaluations,
        "wall_time_s": result.wall_time_s,
        "diagnostics": result.diagnostics,
    });
    if let Some(dir) = out_dir {
        write_report(&dir, problem, result)?;
        summary["report_dir"] = serde_json::json!(dir.display().to_string());
    }
    println!("{}", serde_json::to_string_pretty(&summary).expect("json"));
    Ok(())
}

fn bench_cmd(args: BenchArgs) -> Result<()> {
    let spec = match &args.genspec {
        Some(path) => parse_genspec_file(path)?,
        None => GenSpec::default(),
    };
    let mut csv = String::from("instance,seed,method,objective,gap,evaluations,wall_time_s\n");
    for i in 0..args.count {
        let seed = args.seed + i;
        let problem = gen_instance(&spec, seed)?;
        let mut rows = Vec::new();
        for &method in &args.methods {
            let flags = OptimizeArgs {
                spec: PathBuf::new(),
                method,
                seed,
                out: None,
                limit: None,
                iterations: None,
                initial_temp: None,
                cooling_rate: None,
                population: None,
                generations: None,
                mutation_rate: None,
                tournament: None,
                elites: None,
                steps: None,
                learning_rate: None,
                restarts: None,
                tau_start: None,
                tau_end: None,
                beta_start: None,
                beta_end: None,
                target: None,
                samples: None,
                jitter: None,
                polish: false,
            };
            let result = run_method(&problem, &flags, method, seed)?;
            rows.push((result.method.clone(), result));
        }
        let best = rows
            .iter()
            .map(|(_, r)| r.objective)
            .fold(f64::INFINITY, f64::min);
        for (name, result) in rows {
            csv.push_str(&format!(
                "{i},{seed},{name},{},{},{},{}\n",
                result.objective,
                result.objective - best,
                result.evaluations,
                result.wall_time_s
            ));
        }
    }
    print!("{csv}");
    write_csv_out(args.out.as_deref(), "bench.csv", &csv)
}

fn sweep_cmd(args: SweepArgs) -> Result<()> {
    let base = parse_problem_file(&args.spec)?;
    let gamma2s = args
        .gamma2
        .clone()
        .unwrap_or_else(|| vec![base.params.gamma2]);
    let mut csv = String::from(
        "gamma1,gamma2,objective,sw_loss,max_latency,total_power,active_devices\n",
    );
    for &gamma1 in &args.gamma1 {
        for &gamma2 in &gamma2s {
            let mut problem = base.clone();
            problem.params.gamma1 = gamma1;
            problem.params.gamma2 = gamma2;
            problem.params.validate()?;
            let flags = OptimizeArgs {
                spec: PathBuf::new(),
                method: args.method,
                seed: args.seed,
                out: None,
                limit: None,
                iterations: None,
                initial_temp: None,
                cooling_rate: None,
                population: None,
                generations: None,
                mutation_rate: None,
                tournament: None,
                elites: None,
                steps: None,
                learning_rate: None,
                restarts: None,
                tau_start: None,
                tau_end: None,
                beta_start: None,
                beta_end: None,
                target: None,
                samples: None,
                jitter: None,
                polish: false,
            };
            let result = run_method(&problem, &flags, args.method, args.seed)?;
            csv.push_str(&format!(
                "{gamma1},{gamma2},{},{},{},{},{}\n",
                result.objective,
                result.breakdown.sw_loss,
                result.breakdown.hw.max_latency,
                result.breakdown.hw.total_power,
                result.breakdown.hw.active_devices.len()
            ));
        }
    }
    print!("{csv}");
    write_csv_out(args.out.as_deref(), "sweep.csv", &csv)
}

fn write_csv_out(out: Option<&Path>, name: &str, csv: &str) -> Result<()> {
    let out_dir = out
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os("TANDEM_OUT_DIR").map(PathBuf::from));
    if let Some(dir) = out_dir {
        std::fs::create_dir_all(&dir)?;
        let path = dir.join(name);
        let tmp = path.with_extension("tmp");
        std::fs::write(&tmp, csv)?;
        std::fs::rename(&tmp, path)?;
    }
    Ok(())
}
