//! Command-line driver: prove one task, batch-run benchmarks, screen a
//! conjecture, or re-check a proof certificate.
//!
//! Exit codes are stable: 0 = success/proved, 1 = not proved (or a filtered
//! conjecture / failed certificate node), 2 = usage or configuration error.

use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use adt_prover::bench::{run_bench, summarize, BenchConfig};
use adt_prover::engine::{check_certificate, emit_certificate, CertificateError, Engine, EngineConfig};
use adt_prover::filter::{is_filtered, FilterMode, FilterReason, DEFAULT_FILTER_TIMEOUT};
use adt_prover::llm::{LlmClient, Mode, ModelConfig, PromptStrategy, TranscriptStore};
use adt_prover::smt::parse_script;
use adt_prover::solver::{builtin_presets, Portfolio, SolverConfig};

#[derive(Parser)]
#[command(name = "adt-prover", version, about = "LLM-assisted inductive prover over algebraic data types")]
struct Cli {
    /// TOML config file ([engine], [model], [[solver]] sections).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Print the effective configuration (secrets stay in the environment).
    #[arg(long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Prove one .smt2 task and write a proof certificate.
    Prove {
        file: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
        /// Certificate output path (default: <task stem>.cert.json).
        #[arg(long)]
        certificate: Option<PathBuf>,
    },
    /// Run the prover over a directory of .smt2 tasks and emit reports.
    Bench {
        dir: PathBuf,
        #[command(flatten)]
        flags: RunFlags,
        /// Output directory for report.json / report.csv / summary.txt.
        #[arg(long, default_value = "bench-out")]
        out: PathBuf,
        /// Tasks run concurrently (1 keeps timings faithful).
        #[arg(long, default_value_t = 1)]
        task_parallelism: usize,
        /// Explicit task list file (one path per line, relative to DIR).
        #[arg(long)]
        task_list: Option<PathBuf>,
        /// Force all tasks into one benchmark group name.
        #[arg(long)]
        group: Option<String>,
    },
    /// Re-verify every node of a proof certificate through the backend.
    Check {
        certificate: PathBuf,
        #[arg(long)]
        solver_config: Option<PathBuf>,
        /// Per-node re-check timeout in seconds.
        #[arg(long, default_value_t = 60)]
        timeout: u64,
    },
    /// Screen one conjecture against a task (syntax / goal identity /
    /// consistency with axioms).
    Filter {
        file: PathBuf,
        conjecture: String,
        #[arg(long)]
        solver_config: Option<PathBuf>,
        /// Screening timeout in seconds.
        #[arg(long, default_value_t = 1)]
        timeout: u64,
    },
}

#[derive(Args, Clone)]
struct RunFlags {
    /// Wall-clock budget per task, in seconds.
    #[arg(long)]
    timeout: Option<u64>,
    #[arg(long)]
    max_depth: Option<u32>,
    #[arg(long)]
    max_iters: Option<u32>,
    /// Comma-separated prompt pool: strategy1,strategy2,naive.
    #[arg(long)]
    prompts: Option<String>,
    /// live | record | replay
    #[arg(long)]
    mode: Option<String>,
    /// Transcript directory for record/replay.
    #[arg(long)]
    transcripts: Option<PathBuf>,
    /// TOML file with [[solver]] entries replacing the built-in presets.
    #[arg(long)]
    solver_config: Option<PathBuf>,
    /// Baseline mode: run the solver portfolio only, no LLM.
    #[arg(long)]
    engine_off: bool,
    /// strict | drop-bad
    #[arg(long)]
    filter_mode: Option<String>,
    /// Write line-delimited JSON progress events to this file.
    #[arg(long)]
    trace: Option<PathBuf>,
    #[arg(long)]
    temperature: Option<f64>,
    #[arg(long)]
    top_p: Option<f64>,
    #[arg(long)]
    model: Option<String>,
}

/// Optional TOML config file contents; every field falls back to defaults.
#[derive(Debug, Default, Deserialize)]
struct FileConfig {
    #[serde(default)]
    engine: EngineSection,
    #[serde(default)]
    model: ModelSection,
    #[serde(default)]
    solver: Vec<SolverConfig>,
}

#[derive(Debug, Default, Deserialize)]
struct EngineSection {
    max_depth: Option<u32>,
    max_iter_number: Option<u32>,
    task_time_limit: Option<u64>,
    initial_check_timeout: Option<u64>,
    verify_timeout: Option<u64>,
    filter_timeout: Option<u64>,
    subgoal_parallelism: Option<usize>,
    prompts: Option<Vec<String>>,
}

#[derive(Debug, Default, Deserialize)]
struct ModelSection {
    endpoint: Option<String>,
    model: Option<String>,
    temperature: Option<f64>,
    top_p: Option<f64>,
    max_output_tokens: Option<u32>,
    api_key_env: Option<String>,
    requests_per_minute: Option<u32>,
}

#[derive(Debug)]
struct Usage(String);

fn usage(msg: impl Into<String>) -> Usage {
    Usage(msg.into())
}

fn load_file_config(path: Option<&Path>) -> Result<FileConfig, Usage> {
    let Some(path) = path else { return Ok(FileConfig::default()) };
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| usage(format!("bad config {}: {e}", path.display())))
}

fn parse_prompt_pool(spec: &str) -> Result<Vec<PromptStrategy>, Usage> {
    spec.split(',')
        .map(|s| {
            PromptStrategy::parse(s)
                .ok_or_else(|| usage(format!("unknown prompt strategy '{s}' (strategy1|strategy2|naive)")))
        })
        .collect()
}

fn load_solver_file(path: &Path) -> Result<Vec<SolverConfig>, Usage> {
    #[derive(Deserialize)]
    struct SolverFile {
        solver: Vec<SolverConfig>,
    }
    let text = std::fs::read_to_string(path)
        .map_err(|e| usage(format!("cannot read solver config {}: {e}", path.display())))?;
    let parsed: SolverFile = toml::from_str(&text)
        .map_err(|e| usage(format!("bad solver config {}: {e}", path.display())))?;
    if parsed.solver.is_empty() {
        return Err(usage(format!("{} lists no solvers", path.display())));
    }
    Ok(parsed.solver)
}

fn resolve_portfolio(
    flag: Option<&Path>,
    file_cfg: &FileConfig,
) -> Result<Vec<SolverConfig>, Usage> {
    let configs = if let Some(path) = flag {
        load_solver_file(path)?
    } else if !file_cfg.solver.is_empty() {
        file_cfg.solver.clone()
    } else {
        builtin_presets()
    };
    Portfolio { configs }
        .validated()
        .map(|p| p.configs)
        .map_err(|e| usage(e.to_string()))
}

/// Merge defaults < config file < flags into an engine + model + portfolio.
fn build_engine(flags: &RunFlags, file_cfg: &FileConfig, verbose: bool) -> Result<Engine, Usage> {
    let fe = &file_cfg.engine;
    let mut engine_cfg = EngineConfig::default();
    let secs = Duration::from_secs;
    if let Some(v) = fe.max_depth { engine_cfg.max_depth = v; }
    if let Some(v) = fe.max_iter_number { engine_cfg.max_iter_number = v; }
    if let Some(v) = fe.task_time_limit { engine_cfg.task_time_limit = secs(v); }
    if let Some(v) = fe.initial_check_timeout { engine_cfg.initial_check_timeout = secs(v); }
    if let Some(v) = fe.verify_timeout { engine_cfg.verify_timeout = secs(v); }
    if let Some(v) = fe.filter_timeout { engine_cfg.filter_timeout = secs(v); }
    if let Some(v) = fe.subgoal_parallelism { engine_cfg.subgoal_parallelism = v; }
    if let Some(list) = &fe.prompts {
        engine_cfg.prompt_pool = parse_prompt_pool(&list.join(","))?;
    }
    if let Some(v) = flags.timeout { engine_cfg.task_time_limit = secs(v); }
    if let Some(v) = flags.max_depth { engine_cfg.max_depth = v; }
    if let Some(v) = flags.max_iters { engine_cfg.max_iter_number = v; }
    if let Some(spec) = &flags.prompts { engine_cfg.prompt_pool = parse_prompt_pool(spec)?; }
    if let Some(m) = &flags.filter_mode {
        engine_cfg.filter_mode = FilterMode::parse(m)
            .ok_or_else(|| usage(format!("unknown filter mode '{m}' (strict|drop-bad)")))?;
    }
    if flags.engine_off {
        // Baseline: the initial check only — no depth, no prompts.
        engine_cfg.max_depth = 0;
        engine_cfg.prompt_pool = Vec::new();
    }

    let fm = &file_cfg.model;
    let mut model_cfg = ModelConfig::default();
    if let Some(v) = &fm.endpoint { model_cfg.endpoint = v.clone(); }
    if let Some(v) = &fm.model { model_cfg.model = v.clone(); }
    if let Some(v) = fm.temperature { model_cfg.temperature = v; }
    if let Some(v) = fm.top_p { model_cfg.top_p = v; }
    if let Some(v) = fm.max_output_tokens { model_cfg.max_output_tokens = v; }
    if let Some(v) = &fm.api_key_env { model_cfg.api_key_env = v.clone(); }
    if let Some(v) = fm.requests_per_minute { model_cfg.requests_per_minute = Some(v); }
    if let Some(v) = flags.temperature { model_cfg.temperature = v; }
    if let Some(v) = flags.top_p { model_cfg.top_p = v; }
    if let Some(v) = &flags.model { model_cfg.model = v.clone(); }
    if let Some(m) = &flags.mode {
        model_cfg.mode = match m.as_str() {
            "live" => Mode::Live,
            "record" => Mode::Record,
            "replay" => Mode::Replay,
            other => return Err(usage(format!("unknown mode '{other}' (live|record|replay)"))),
        };
    }
    if !(0.0..=2.0).contains(&model_cfg.temperature) {
        return Err(usage("temperature must be in [0, 2]"));
    }
    if !(model_cfg.top_p > 0.0 && model_cfg.top_p <= 1.0) {
        return Err(usage("top-p must be in (0, 1]"));
    }

    let store = flags.transcripts.as_ref().map(TranscriptStore::new);
    if matches!(model_cfg.mode, Mode::Replay | Mode::Record)
        && store.is_none()
        && !flags.engine_off
    {
        return Err(usage("record/replay mode needs --transcripts DIR"));
    }

    let portfolio = resolve_portfolio(flags.solver_config.as_deref(), file_cfg)?;
    let filter_solver = portfolio[0].clone();
    if verbose {
        eprintln!("engine config: {}", serde_json::to_string(&engine_cfg).unwrap());
        eprintln!(
            "model config: {} (API key stays in ${})",
            serde_json::to_string(&model_cfg).unwrap(),
            model_cfg.api_key_env
        );
        eprintln!(
            "solver portfolio: {}",
            portfolio.iter().map(|c| c.name.as_str()).collect::<Vec<_>>().join(", ")
        );
    }

    let llm = LlmClient::new(model_cfg, store);
    let mut engine = Engine::new(engine_cfg, portfolio, filter_solver, llm);
    if let Some(path) = &flags.trace {
        let sink = std::fs::File::create(path)
            .map_err(|e| usage(format!("cannot open trace file {}: {e}", path.display())))?;
        engine = engine.with_trace(Box::new(sink));
    }
    Ok(engine)
}

fn cmd_prove(
    file: &Path,
    flags: &RunFlags,
    certificate: Option<&Path>,
    file_cfg: &FileConfig,
    verbose: bool,
) -> Result<ExitCode, Usage> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let task = parse_script(&text, Some(&file.display().to_string()))
        .map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let engine = build_engine(flags, file_cfg, verbose)?;
    let outcome = engine.run(&task);

    println!(
        "{}: {:?} in {:.1}s ({} attempts, {} tokens)",
        file.display(),
        outcome.root.status,
        outcome.wall_time,
        outcome.root.attempts.len(),
        outcome.tokens.total()
    );
    print_tree(&outcome.root, 0);
    if outcome.proved {
        let default_path = PathBuf::from(format!(
            "{}.cert.json",
            file.file_stem().map_or_else(|| "task".into(), |s| s.to_string_lossy().into_owned())
        ));
        let cert_path = certificate.map_or(default_path, Path::to_path_buf);
        std::fs::write(&cert_path, emit_certificate(&outcome))
            .map_err(|e| usage(format!("cannot write certificate: {e}")))?;
        println!("certificate: {}", cert_path.display());
        Ok(ExitCode::SUCCESS)
    } else {
        Ok(ExitCode::FAILURE)
    }
}

fn print_tree(node: &adt_prover::engine::ProofNode, indent: usize) {
    let pad = "  ".repeat(indent);
    println!("{pad}- depth {} {:?} ({:.1}s)", node.depth, node.status, node.elapsed);
    for (lemma, child) in node.lemmas.iter().zip(&node.children) {
        println!("{pad}  lemma: {lemma}");
        print_tree(child, indent + 1);
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bench(
    dir: &Path,
    flags: &RunFlags,
    out: &Path,
    task_parallelism: usize,
    task_list: Option<PathBuf>,
    group: Option<String>,
    file_cfg: &FileConfig,
    verbose: bool,
) -> Result<ExitCode, Usage> {
    if !dir.is_dir() {
        return Err(usage(format!("{} is not a directory", dir.display())));
    }
    // One engine per worker: build_engine validates once up front.
    build_engine(flags, file_cfg, verbose)?;
    let make_engine = || build_engine(flags, file_cfg, false).expect("validated above");
    let bench = BenchConfig {
        task_parallelism,
        out_dir: Some(out.to_path_buf()),
        group_override: group,
        task_list,
    };
    let report = run_bench(dir, &make_engine, &bench)
        .map_err(|e| usage(format!("bench failed: {e}")))?;
    print!("{}", summarize(&report));
    println!("reports written to {}", out.display());
    Ok(ExitCode::SUCCESS)
}

fn cmd_check(
    certificate: &Path,
    solver_config: Option<&Path>,
    timeout: u64,
    file_cfg: &FileConfig,
) -> Result<ExitCode, Usage> {
    let text = std::fs::read_to_string(certificate)
        .map_err(|e| usage(format!("cannot read {}: {e}", certificate.display())))?;
    let portfolio = resolve_portfolio(solver_config, file_cfg)?;
    match check_certificate(&text, &portfolio, Duration::from_secs(timeout.max(1))) {
        Ok(()) => {
            println!("certificate OK: every proved node re-verified");
            Ok(ExitCode::SUCCESS)
        }
        Err(CertificateError::Json(e)) => Err(usage(format!("malformed certificate: {e}"))),
        Err(e @ CertificateError::Node { .. }) => {
            eprintln!("certificate check failed: {e}");
            Ok(ExitCode::FAILURE)
        }
    }
}

fn cmd_filter(
    file: &Path,
    conjecture: &str,
    solver_config: Option<&Path>,
    timeout: u64,
    file_cfg: &FileConfig,
) -> Result<ExitCode, Usage> {
    let text = std::fs::read_to_string(file)
        .map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let task = parse_script(&text, Some(&file.display().to_string()))
        .map_err(|e| usage(format!("{}: {e}", file.display())))?;
    let portfolio = resolve_portfolio(solver_config, file_cfg)?;
    let budget = if timeout == 0 { DEFAULT_FILTER_TIMEOUT } else { Duration::from_secs(timeout) };
    let verdict = is_filtered(conjecture, &task, budget, &portfolio[0]);
    match verdict.reason {
        None => {
            println!("Pass");
            Ok(ExitCode::SUCCESS)
        }
        Some(reason) => {
            let name = match reason {
                FilterReason::SyntaxError => "SyntaxError",
                FilterReason::IdenticalToGoal => "IdenticalToGoal",
                FilterReason::InconsistentWithAxioms => "InconsistentWithAxioms",
            };
            println!("Filtered: {name}");
            if let Some(detail) = verdict.detail {
                eprintln!("  {detail}");
            }
            Ok(ExitCode::FAILURE)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let file_cfg = match load_file_config(cli.config.as_deref()) {
        Ok(c) => c,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Prove { file, flags, certificate } => {
            cmd_prove(file, flags, certificate.as_deref(), &file_cfg, cli.verbose)
        }
        Command::Bench { dir, flags, out, task_parallelism, task_list, group } => cmd_bench(
            dir,
            flags,
            out,
            *task_parallelism,
            task_list.clone(),
            group.clone(),
            &file_cfg,
            cli.verbose,
        ),
        Command::Check { certificate, solver_config, timeout } => {
            cmd_check(certificate, solver_config.as_deref(), *timeout, &file_cfg)
        }
        Command::Filter { file, conjecture, solver_config, timeout } => {
            cmd_filter(file, conjecture, solver_config.as_deref(), *timeout, &file_cfg)
        }
    };
    match result {
        Ok(code) => code,
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
