//! `tradeoff`: solve, enumerate and analyse scenario files, or run the HTTP service.
//!
//! Exit status is 0 on success, 2 when the scenario is rejected and 3 on I/O failure.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;

use tradeoff_core::analysis::{Parameter, DEFAULT_RELATIVE_STEP, OBSERVATION_TOLERANCE};
use tradeoff_core::oracle::DEFAULT_SWEEP_POINTS;
use tradeoff_core::report::{
    chain_report, dynamic_report, enumeration_report, inference_report, sensitivity_report, static_report,
};
use tradeoff_core::scenario::{ScenarioError, ScenarioFile, ScenarioPayload};
use tradeoff_core::{ModelError, StaticScenario};
use tradeoff_service::ServiceConfig;

mod plot;
mod render;

const BIND_ENV: &str = "TRADEOFF_BIND";

#[derive(Parser)]
#[command(name = "tradeoff", version, about = "Optimal lives-vs-jobs allocations on an elliptic possibilities frontier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve a static, dynamic or chain scenario.
    Solve(SolveArgs),
    /// Rank the points of a discrete scenario by benefit.
    Enumerate {
        path: PathBuf,
        #[arg(long)]
        json: bool,
    },
    /// Finite-difference sensitivity of a static optimum to one parameter.
    Sensitivity {
        path: PathBuf,
        /// One of a, b, c, p_life, p_job.
        #[arg(long)]
        param: String,
        /// Relative step in (0, 0.1].
        #[arg(long, default_value_t = DEFAULT_RELATIVE_STEP)]
        step: f64,
        #[arg(long)]
        json: bool,
    },
    /// Price ratio under which an observed allocation would be optimal.
    Infer {
        path: PathBuf,
        /// Largest accepted relative constraint residual of the observation.
        #[arg(long, default_value_t = OBSERVATION_TOLERANCE)]
        tolerance: f64,
        #[arg(long)]
        json: bool,
    },
    /// Run the HTTP service.
    Serve {
        #[arg(long, env = BIND_ENV, default_value = "127.0.0.1:8080")]
        bind: String,
    },
}

#[derive(Args)]
struct SolveArgs {
    path: PathBuf,
    /// Compare against a brute-force sweep of the frontier.
    #[arg(long)]
    verify: bool,
    #[arg(long, default_value_t = DEFAULT_SWEEP_POINTS, requires = "verify")]
    oracle_points: usize,
    /// Write an N-point frontier trace with the optimum and tangent line.
    #[arg(long, value_name = "N")]
    trace: Option<usize>,
    /// Trace destination; defaults to the scenario path with a `.trace.csv` extension.
    #[arg(long, requires = "trace")]
    trace_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Invalid(String),
    Io(String),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Self::Invalid(_) => ExitCode::from(2),
            Self::Io(_) => ExitCode::from(3),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Self::Invalid(e.to_string())
    }
}

impl From<ModelError> for Failure {
    fn from(e: ModelError) -> Self {
        Self::Invalid(e.to_string())
    }
}

fn load(path: &Path) -> Result<ScenarioFile, Failure> {
    let text = fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))?;
    ScenarioFile::from_json(&text).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn wrong_kind(file: &ScenarioFile, command: &str, expected: &str) -> Failure {
    Failure::Invalid(format!("`{command}` expects a {expected} scenario, got `{}`", file.kind()))
}

fn print_json<T: Serialize>(value: &T) -> Result<(), Failure> {
    let text = serde_json::to_string_pretty(value).expect("reports serialize");
    emit(&text)
}

fn emit(text: &str) -> Result<(), Failure> {
    let mut out = std::io::stdout().lock();
    writeln!(out, "{text}").map_err(|e| Failure::Io(format!("cannot write output: {e}")))
}

fn static_of(file: &ScenarioFile) -> Result<StaticScenario, Failure> {
    match &file.payload {
        ScenarioPayload::Static(spec) => Ok(spec.validate()?.with_unit_scale(file.unit_scale)?),
        _ => Err(wrong_kind(file, "this command", "static")),
    }
}

fn solve(args: &SolveArgs) -> Result<(), Failure> {
    let file = load(&args.path)?;
    let oracle = args.verify.then_some(args.oracle_points);
    let subproblems = match &file.payload {
        ScenarioPayload::Static(_) => {
            let scenario = static_of(&file)?;
            let report = static_report(&scenario, oracle)?;
            if args.json {
                print_json(&report)?;
            } else {
                emit(&render::static_text(&report))?;
            }
            vec![(String::new(), scenario)]
        }
        ScenarioPayload::Dynamic(spec) => {
            let scenario = spec.validate()?.with_unit_scale(file.unit_scale)?;
            let report = dynamic_report(&scenario, oracle)?;
            if args.json {
                print_json(&report)?;
            } else {
                emit(&render::dynamic_text(&report))?;
            }
            let (sub2, sub1) = tradeoff_core::decouple_dynamic(&scenario);
            vec![("constraint1".to_string(), sub1), ("constraint2".to_string(), sub2)]
        }
        ScenarioPayload::Chain(spec) => {
            let chain = spec.validate()?.with_unit_scale(file.unit_scale)?;
            let report = chain_report(&chain, oracle)?;
            if args.json {
                print_json(&report)?;
            } else {
                emit(&render::chain_text(&report))?;
            }
            (0..chain.constraints().len()).map(|k| (format!("constraint{}", k + 1), chain.subproblem(k))).collect()
        }
        ScenarioPayload::Discrete(_) | ScenarioPayload::Observation(_) => {
            return Err(wrong_kind(&file, "solve", "static, dynamic or chain"));
        }
    };
    if let Some(n) = args.trace {
        let out = args.trace_out.clone().unwrap_or_else(|| args.path.with_extension("trace.csv"));
        let text = plot::trace_file(&subproblems, n)?;
        fs::write(&out, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", out.display())))?;
        if !args.json {
            emit(&format!("trace written to {}", out.display()))?;
        }
    }
    Ok(())
}

fn enumerate(path: &Path, json: bool) -> Result<(), Failure> {
    let file = load(path)?;
    let ScenarioPayload::Discrete(spec) = &file.payload else {
        return Err(wrong_kind(&file, "enumerate", "discrete"));
    };
    let (points, valuation) = spec.validate()?;
    let report = enumeration_report(&points, &valuation, file.unit_scale)?;
    if json {
        print_json(&report)
    } else {
        emit(&render::enumeration_text(&report))
    }
}

fn sensitivity(path: &Path, param: &str, step: f64, json: bool) -> Result<(), Failure> {
    let file = load(path)?;
    let scenario = static_of(&file).map_err(|_| wrong_kind(&file, "sensitivity", "static"))?;
    let parameter: Parameter = param.parse()?;
    let report = sensitivity_report(&scenario, parameter, step)?;
    if json {
        print_json(&report)
    } else {
        emit(&render::sensitivity_text(&report))
    }
}

fn infer(path: &Path, tolerance: f64, json: bool) -> Result<(), Failure> {
    let file = load(path)?;
    let ScenarioPayload::Observation(spec) = &file.payload else {
        return Err(wrong_kind(&file, "infer", "observation"));
    };
    if !(tolerance.is_finite() && tolerance > 0.0) {
        return Err(ModelError::NonPositiveParameter { field: "tolerance".into(), value: tolerance }.into());
    }
    let (frontier, observed) = spec.validate()?;
    let report = inference_report(&frontier, &observed, tolerance)?;
    if json {
        print_json(&report)
    } else {
        emit(&render::inference_text(&report))
    }
}

fn serve(bind: &str) -> Result<(), Failure> {
    let config = ServiceConfig::from_env().map_err(Failure::Invalid)?;
    let runtime = tokio::runtime::Runtime::new().map_err(|e| Failure::Io(format!("cannot start runtime: {e}")))?;
    runtime.block_on(async {
        let listener = tokio::net::TcpListener::bind(bind)
            .await
            .map_err(|e| Failure::Io(format!("cannot bind {bind}: {e}")))?;
        let addr = listener.local_addr().map_err(|e| Failure::Io(e.to_string()))?;
        eprintln!("listening on http://{addr}");
        tradeoff_service::serve(listener, &config).await.map_err(|e| Failure::Io(format!("server error: {e}")))
    })
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => solve(args),
        Command::Enumerate { path, json } => enumerate(path, *json),
        Command::Sensitivity { path, param, step, json } => sensitivity(path, param, *step, *json),
        Command::Infer { path, tolerance, json } => infer(path, *tolerance, *json),
        Command::Serve { bind } => serve(bind),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Invalid(msg) | Failure::Io(msg)) = &failure;
            eprintln!("error: {msg}");
            failure.exit_code()
        }
    }
}

