//! Batch harness: run the prover over a directory of .smt2 tasks, enforce
//! per-task limits, and emit per-task records plus summary tables shaped like
//! the evaluation tables (solved under 360s/1200s, average time over solved).

use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::Mutex;
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::engine::{emit_certificate, Engine, Status};
use crate::llm::TokenUsage;
use crate::smt::parse_script;

pub const THRESHOLD_FAST: f64 = 360.0;
pub const THRESHOLD_FULL: f64 = 1200.0;

/// Frozen CSV column order; stable for diffing across runs.
pub const CSV_COLUMNS: [&str; 10] = [
    "task-path",
    "benchmark",
    "outcome",
    "wall-seconds",
    "solved-under-360s",
    "solved-under-1200s",
    "prompt-tokens",
    "completion-tokens",
    "attempts",
    "certificate-path",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TaskOutcome {
    ProvedDirect,
    ProvedWithLemmas,
    Failed,
    BudgetExhausted,
    /// Parse failure, spawn failure, or any other per-task infrastructure
    /// problem; never aborts the batch.
    Error,
}

impl TaskOutcome {
    pub fn solved(&self) -> bool {
        matches!(self, TaskOutcome::ProvedDirect | TaskOutcome::ProvedWithLemmas)
    }
}

impl From<Status> for TaskOutcome {
    fn from(s: Status) -> Self {
        match s {
            Status::ProvedDirect => TaskOutcome::ProvedDirect,
            Status::ProvedWithLemmas => TaskOutcome::ProvedWithLemmas,
            Status::Failed => TaskOutcome::Failed,
            Status::BudgetExhausted => TaskOutcome::BudgetExhausted,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskRecord {
    #[serde(rename = "task-path")]
    pub task_path: String,
    pub benchmark: String,
    pub outcome: TaskOutcome,
    #[serde(rename = "wall-seconds")]
    pub wall_seconds: f64,
    #[serde(rename = "solved-under-360s")]
    pub solved_under_360s: bool,
    #[serde(rename = "solved-under-1200s")]
    pub solved_under_1200s: bool,
    pub tokens: TokenUsage,
    pub attempts: usize,
    #[serde(rename = "certificate-path")]
    pub certificate_path: Option<String>,
    /// Diagnostic text for Error outcomes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkSummary {
    pub benchmark: String,
    pub total: usize,
    #[serde(rename = "solved-under-1200s")]
    pub solved_1200: usize,
    #[serde(rename = "solved-under-360s")]
    pub solved_360: usize,
    /// Average wall time over solved tasks only; None when nothing solved.
    #[serde(rename = "avg-time-solved")]
    pub avg_time_solved: Option<f64>,
    #[serde(rename = "total-tokens")]
    pub total_tokens: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunMetadata {
    #[serde(rename = "engine-config")]
    pub engine_config: serde_json::Value,
    #[serde(rename = "model-config")]
    pub model_config: serde_json::Value,
    #[serde(rename = "solver-configs")]
    pub solver_configs: Vec<String>,
    /// Unix seconds at batch start.
    pub timestamp: u64,
    pub mode: String,
    #[serde(rename = "task-parallelism")]
    pub task_parallelism: usize,
    /// Timings are only comparable across runs when tasks ran one at a time.
    #[serde(rename = "timing-reliable")]
    pub timing_reliable: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunReport {
    pub metadata: RunMetadata,
    pub records: Vec<TaskRecord>,
    pub summary: Vec<BenchmarkSummary>,
}

/// Aggregate records per benchmark, plus a trailing "Total" row.
pub fn compute_summary(records: &[TaskRecord]) -> Vec<BenchmarkSummary> {
    let mut order: Vec<String> = Vec::new();
    for r in records {
        if !order.contains(&r.benchmark) {
            order.push(r.benchmark.clone());
        }
    }
    let mut rows: Vec<BenchmarkSummary> = Vec::new();
    for name in order {
        let group: Vec<&TaskRecord> =
            records.iter().filter(|r| r.benchmark == name).collect();
        rows.push(aggregate(&name, &group));
    }
    let all: Vec<&TaskRecord> = records.iter().collect();
    rows.push(aggregate("Total", &all));
    rows
}

fn aggregate(name: &str, group: &[&TaskRecord]) -> BenchmarkSummary {
    let solved: Vec<&&TaskRecord> = group.iter().filter(|r| r.outcome.solved()).collect();
    let sum_time: f64 = solved.iter().map(|r| r.wall_seconds).sum();
    BenchmarkSummary {
        benchmark: name.to_string(),
        total: group.len(),
        solved_1200: group.iter().filter(|r| r.solved_under_1200s).count(),
        solved_360: group.iter().filter(|r| r.solved_under_360s).count(),
        avg_time_solved: if solved.is_empty() { None } else { Some(sum_time / solved.len() as f64) },
        total_tokens: group.iter().map(|r| r.tokens.total()).sum(),
    }
}

/// Known benchmark suites, inferred from path components.
const KNOWN_GROUPS: [&str; 4] = ["StandardDT", "StandardDTLIA", "AutoProofBM", "IndBen"];

fn infer_benchmark(path: &Path, override_name: Option<&str>) -> String {
    if let Some(name) = override_name {
        return name.to_string();
    }
    for comp in path.components().rev() {
        let s = comp.as_os_str().to_string_lossy();
        // StandardDTLIA must win over its prefix StandardDT.
        for group in KNOWN_GROUPS.iter().rev() {
            if s.eq_ignore_ascii_case(group) {
                return (*group).to_string();
            }
        }
    }
    path.parent()
        .and_then(|p| p.file_name())
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| String::from("default"))
}

#[derive(Debug, Clone, Default)]
pub struct BenchConfig {
    /// Tasks in flight at once; 1 (the default) keeps timings faithful.
    pub task_parallelism: usize,
    /// Where report.json / report.csv / summary.txt / certificates go.
    pub out_dir: Option<PathBuf>,
    /// Force every task into one benchmark group instead of inferring.
    pub group_override: Option<String>,
    /// Optional explicit task list (paths relative to the benchmark dir);
    /// used for curated subsets of large suites.
    pub task_list: Option<PathBuf>,
}

#[derive(Debug, thiserror::Error)]
pub enum BenchError {
    #[error("benchmark i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("no .smt2 files under {0}")]
    EmptyDirAllowedButNoted(String),
    #[error("report serialization failed: {0}")]
    Json(#[from] serde_json::Error),
    #[error("csv write failed: {0}")]
    Csv(#[from] csv::Error),
    #[error("stored summary does not match records: {0}")]
    SummaryMismatch(String),
}

/// Run the prover over every .smt2 file under `dir` (recursively, sorted).
/// `make_engine` builds one engine per worker so memo tables and token
/// accounting stay per-task-stream; per-task failures become Error records.
pub fn run_bench(
    dir: &Path,
    make_engine: &(dyn Fn() -> Engine + Sync),
    bench: &BenchConfig,
) -> Result<RunReport, BenchError> {
    let mut files = collect_tasks(dir, bench)?;
    files.sort();
    let parallelism = bench.task_parallelism.max(1);
    let sample = make_engine();
    let metadata = RunMetadata {
        engine_config: serde_json::to_value(&sample.config)?,
        model_config: serde_json::to_value(&sample.llm.config)?,
        solver_configs: sample.portfolio.iter().map(|c| c.name.clone()).collect(),
        timestamp: std::time::SystemTime::now()
            .duration_since(std::time::UNIX_EPOCH)
            .map_or(0, |d| d.as_secs()),
        mode: format!("{:?}", sample.llm.config.mode).to_lowercase(),
        task_parallelism: parallelism,
        timing_reliable: parallelism == 1,
    };

    let cert_dir = bench.out_dir.as_ref().map(|d| d.join("certificates"));
    if let Some(d) = &cert_dir {
        std::fs::create_dir_all(d)?;
    }

    let slots: Vec<Mutex<Option<TaskRecord>>> = files.iter().map(|_| Mutex::new(None)).collect();
    let next = AtomicUsize::new(0);
    std::thread::scope(|scope| {
        for _ in 0..parallelism.min(files.len()).max(1) {
            scope.spawn(|| {
                let engine = make_engine();
                loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= files.len() {
                        break;
                    }
                    let record =
                        run_one(&engine, &files[i], bench.group_override.as_deref(), &cert_dir);
                    *slots[i].lock().unwrap() = Some(record);
                }
            });
        }
    });
    let records: Vec<TaskRecord> =
        slots.into_iter().map(|s| s.into_inner().unwrap().expect("worker filled slot")).collect();
    let summary = compute_summary(&records);
    let report = RunReport { metadata, records, summary };
    if let Some(out) = &bench.out_dir {
        write_report(&report, out)?;
    }
    Ok(report)
}

fn collect_tasks(dir: &Path, bench: &BenchConfig) -> Result<Vec<PathBuf>, BenchError> {
    if let Some(list) = &bench.task_list {
        let text = std::fs::read_to_string(list)?;
        return Ok(text
            .lines()
            .map(str::trim)
            .filter(|l| !l.is_empty() && !l.starts_with('#'))
            .map(|l| dir.join(l))
            .collect());
    }
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d)? {
            let path = entry?.path();
            if path.is_dir() {
                stack.push(path);
            } else if path.extension().is_some_and(|e| e == "smt2") {
                files.push(path);
            }
        }
    }
    Ok(files)
}

fn run_one(
    engine: &Engine,
    path: &Path,
    group_override: Option<&str>,
    cert_dir: &Option<PathBuf>,
) -> TaskRecord {
    let benchmark = infer_benchmark(path, group_override);
    let started = Instant::now();
    let mut record = TaskRecord {
        task_path: path.display().to_string(),
        benchmark,
        outcome: TaskOutcome::Error,
        wall_seconds: 0.0,
        solved_under_360s: false,
        solved_under_1200s: false,
        tokens: TokenUsage::default(),
        attempts: 0,
        certificate_path: None,
        error: None,
    };
    let text = match std::fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) => {
            record.error = Some(format!("unreadable: {e}"));
            record.wall_seconds = started.elapsed().as_secs_f64();
            return record;
        }
    };
    let task = match parse_script(&text, Some(&path.display().to_string())) {
        Ok(t) => t,
        Err(e) => {
            record.error = Some(format!("parse error: {e}"));
            record.wall_seconds = started.elapsed().as_secs_f64();
            return record;
        }
    };
    let outcome = engine.run(&task);
    record.outcome = outcome.root.status.into();
    record.wall_seconds = outcome.wall_time;
    record.solved_under_1200s = record.outcome.solved() && outcome.wall_time < THRESHOLD_FULL;
    record.solved_under_360s = record.outcome.solved() && outcome.wall_time < THRESHOLD_FAST;
    record.tokens = outcome.tokens;
    record.attempts = outcome.root.attempts.len();
    if record.outcome.solved() {
        if let Some(dir) = cert_dir {
            let stem = path.file_stem().map_or_else(
                || String::from("task"),
                |s| s.to_string_lossy().into_owned(),
            );
            let cert_path = dir.join(format!("{stem}.cert.json"));
            if std::fs::write(&cert_path, emit_certificate(&outcome)).is_ok() {
                record.certificate_path = Some(cert_path.display().to_string());
            }
        }
    }
    record
}

/// Render the report as an aligned text table: one row per benchmark plus
/// Total, then a token-total line.
pub fn summarize(report: &RunReport) -> String {
    let mut out = String::new();
    out.push_str(&format!(
        "{:<16} | {:>5} | {:>7} | {:>6} | {:>12}\n",
        "Benchmark", "Total", "<1200s", "<360s", "Avg time (s)"
    ));
    out.push_str(&"-".repeat(60));
    out.push('\n');
    for row in &report.summary {
        let avg = row
            .avg_time_solved
            .map_or_else(|| String::from("N/A"), |t| format!("{t:.1}"));
        out.push_str(&format!(
            "{:<16} | {:>5} | {:>7} | {:>6} | {:>12}\n",
            row.benchmark, row.total, row.solved_1200, row.solved_360, avg
        ));
    }
    let tokens: u64 = report
        .summary
        .last()
        .map_or(0, |total_row| total_row.total_tokens);
    out.push_str(&format!("Tokens (M): {:.2}\n", tokens as f64 / 1.0e6));
    out
}

/// Persist report.json, report.csv (frozen columns), and summary.txt.
pub fn write_report(report: &RunReport, out_dir: &Path) -> Result<(), BenchError> {
    std::fs::create_dir_all(out_dir)?;
    std::fs::write(out_dir.join("report.json"), serde_json::to_string_pretty(report)?)?;
    let mut w = csv::Writer::from_path(out_dir.join("report.csv"))?;
    w.write_record(CSV_COLUMNS)?;
    for r in &report.records {
        w.write_record([
            r.task_path.as_str(),
            r.benchmark.as_str(),
            serde_json::to_value(r.outcome)?.as_str().unwrap_or("error"),
            &format!("{:.3}", r.wall_seconds),
            &r.solved_under_360s.to_string(),
            &r.solved_under_1200s.to_string(),
            &r.tokens.prompt_tokens.to_string(),
            &r.tokens.completion_tokens.to_string(),
            &r.attempts.to_string(),
            r.certificate_path.as_deref().unwrap_or(""),
        ])?;
    }
    w.flush().map_err(BenchError::Io)?;
    std::fs::write(out_dir.join("summary.txt"), summarize(report))?;
    Ok(())
}

/// Load a persisted report and re-check that its stored summary matches a
/// fresh aggregation of its records.
pub fn load_report(path: &Path) -> Result<RunReport, BenchError> {
    let text = std::fs::read_to_string(path)?;
    let report: RunReport = serde_json::from_str(&text)?;
    let recomputed = compute_summary(&report.records);
    if recomputed != report.summary {
        return Err(BenchError::SummaryMismatch(format!(
            "stored {} rows, recomputed {} rows or differing contents",
            report.summary.len(),
            recomputed.len()
        )));
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn record(bench: &str, outcome: TaskOutcome, secs: f64, tokens: u64) -> TaskRecord {
        TaskRecord {
            task_path: format!("{bench}/task.smt2"),
            benchmark: bench.to_string(),
            outcome,
            wall_seconds: secs,
            solved_under_360s: outcome.solved() && secs < THRESHOLD_FAST,
            solved_under_1200s: outcome.solved() && secs < THRESHOLD_FULL,
            tokens: TokenUsage { prompt_tokens: tokens, completion_tokens: 0 },
            attempts: 0,
            certificate_path: None,
            error: None,
        }
    }

    /// Synthesize records matching published per-suite solved counts:
    /// (total, solved under 1200s, solved under 360s).
    fn suite(bench: &str, total: usize, s1200: usize, s360: usize) -> Vec<TaskRecord> {
        let mut out = Vec::new();
        for i in 0..total {
            let rec = if i < s360 {
                record(bench, TaskOutcome::ProvedWithLemmas, 100.0, 1000)
            } else if i < s1200 {
                record(bench, TaskOutcome::ProvedDirect, 700.0, 0)
            } else {
                record(bench, TaskOutcome::Failed, 1200.0, 2000)
            };
            out.push(rec);
        }
        out
    }

    #[test]
    fn summary_reproduces_published_totals_row() {
        let mut records = Vec::new();
        records.extend(suite("StandardDT", 241, 212, 200));
        records.extend(suite("StandardDTLIA", 168, 134, 127));
        records.extend(suite("AutoProofBM", 141, 65, 61));
        records.extend(suite("IndBen", 156, 114, 104));
        let summary = compute_summary(&records);
        let total = summary.last().unwrap();
        assert_eq!(total.benchmark, "Total");
        assert_eq!(total.total, 706);
        assert_eq!(total.solved_1200, 525);
        assert_eq!(total.solved_360, 492);
        let report = RunReport {
            metadata: test_metadata(),
            records,
            summary,
        };
        let text = summarize(&report);
        assert!(text.contains("525"), "{text}");
        let total_line = text.lines().find(|l| l.starts_with("Total")).unwrap();
        assert!(total_line.contains("525") && total_line.contains("492"), "{total_line}");
        assert!(text.contains("Tokens (M)"));
    }

    fn test_metadata() -> RunMetadata {
        RunMetadata {
            engine_config: serde_json::json!({}),
            model_config: serde_json::json!({}),
            solver_configs: vec![],
            timestamp: 0,
            mode: String::from("replay"),
            task_parallelism: 1,
            timing_reliable: true,
        }
    }

    #[test]
    fn average_time_is_over_solved_tasks_only() {
        let records = vec![
            record("X", TaskOutcome::ProvedDirect, 10.0, 0),
            record("X", TaskOutcome::ProvedWithLemmas, 20.0, 0),
            record("X", TaskOutcome::Failed, 1200.0, 0),
        ];
        let summary = compute_summary(&records);
        assert_eq!(summary[0].avg_time_solved, Some(15.0));
        // Nothing solved => no average rather than 0.
        let none = compute_summary(&[record("Y", TaskOutcome::Failed, 5.0, 0)]);
        assert_eq!(none[0].avg_time_solved, None);
    }

    #[test]
    fn fast_threshold_implies_full_threshold() {
        let r = record("X", TaskOutcome::ProvedDirect, 100.0, 0);
        assert!(r.solved_under_360s && r.solved_under_1200s);
        let r = record("X", TaskOutcome::ProvedDirect, 800.0, 0);
        assert!(!r.solved_under_360s && r.solved_under_1200s);
    }

    #[test]
    fn benchmark_inference_prefers_longest_known_name() {
        let p = PathBuf::from("/bench/StandardDTLIA/goal_1.smt2");
        assert_eq!(infer_benchmark(&p, None), "StandardDTLIA");
        let p = PathBuf::from("/bench/StandardDT/goal_1.smt2");
        assert_eq!(infer_benchmark(&p, None), "StandardDT");
        let p = PathBuf::from("/anything/else/goal.smt2");
        assert_eq!(infer_benchmark(&p, None), "else");
        assert_eq!(infer_benchmark(&p, Some("Custom")), "Custom");
    }

    #[test]
    fn persisted_report_round_trips_and_detects_tampered_summary() {
        let dir = tempfile::tempdir().unwrap();
        let records = vec![record("X", TaskOutcome::ProvedDirect, 10.0, 42)];
        let summary = compute_summary(&records);
        let report = RunReport { metadata: test_metadata(), records, summary };
        write_report(&report, dir.path()).unwrap();
        for file in ["report.json", "report.csv", "summary.txt"] {
            assert!(dir.path().join(file).exists(), "{file}");
        }
        let loaded = load_report(&dir.path().join("report.json")).unwrap();
        assert_eq!(loaded.records.len(), 1);
        // CSV header is the frozen column list.
        let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
        assert_eq!(csv.lines().next().unwrap(), CSV_COLUMNS.join(","));
        // Tamper with the stored summary.
        let mut bad = serde_json::from_str::<serde_json::Value>(
            &std::fs::read_to_string(dir.path().join("report.json")).unwrap(),
        )
        .unwrap();
        bad["summary"][0]["total"] = serde_json::json!(99);
        std::fs::write(dir.path().join("report.json"), bad.to_string()).unwrap();
        assert!(matches!(
            load_report(&dir.path().join("report.json")),
            Err(BenchError::SummaryMismatch(_))
        ));
    }
}
