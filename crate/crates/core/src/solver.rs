//! External prover processes: single runs with hard wall-clock timeouts and
//! portfolio racing with first-conclusive-wins semantics.
//!
//! Timeouts are enforced by killing the child's process group, never via
//! solver flags, so behavior is uniform across cvc4/cvc5/Vampire. A global
//! gate caps the number of concurrently running solver processes.

use std::collections::HashMap;
use std::io::Read;
use std::os::unix::process::CommandExt;
use std::path::PathBuf;
use std::process::{Command, Stdio};
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::mpsc;
use std::sync::{Arc, Condvar, Mutex, OnceLock};
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

const STDERR_CAP: usize = 4096;
const POLL_INTERVAL: Duration = Duration::from_millis(10);

/// Outcome of one solver invocation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Unsat,
    Sat,
    Unknown,
    Timeout,
    /// Crash, nonsense output, or missing status token.
    SolverError,
}

impl Verdict {
    pub fn is_conclusive(&self) -> bool {
        matches!(self, Verdict::Unsat | Verdict::Sat)
    }

    /// Preference order among inconclusive verdicts: Unknown > Timeout > SolverError.
    fn inconclusive_rank(&self) -> u8 {
        match self {
            Verdict::Unknown => 2,
            Verdict::Timeout => 1,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverVerdict {
    pub outcome: Verdict,
    /// Wall-clock seconds for this invocation.
    pub elapsed: f64,
    /// Combined stdout plus truncated stderr, for diagnostics.
    pub raw_output: String,
    pub config_name: String,
}

/// How the obligation script reaches the child process.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum InputVia {
    /// Script written to a temporary file whose path is the last argument.
    FileArg,
    /// Script piped to the child's standard input.
    Stdin,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverConfig {
    pub name: String,
    pub executable: PathBuf,
    pub args: Vec<String>,
    #[serde(default = "default_input_via")]
    pub input_via: InputVia,
}

fn default_input_via() -> InputVia {
    InputVia::FileArg
}

impl SolverConfig {
    /// Startup validation: the executable must resolve to something runnable.
    pub fn validate(&self) -> Result<(), SolverFailure> {
        let found = if self.executable.components().count() > 1 {
            self.executable.is_file()
        } else {
            // Bare name: search PATH.
            std::env::var_os("PATH").is_some_and(|path| {
                std::env::split_paths(&path).any(|d| d.join(&self.executable).is_file())
            })
        };
        if found {
            Ok(())
        } else {
            Err(SolverFailure::SpawnFailure {
                config: self.name.clone(),
                message: format!("executable not found: {}", self.executable.display()),
            })
        }
    }
}

/// The built-in portfolio mirrors the solver option sets the workflow was
/// evaluated with: three cvc5 configurations, one cvc4 configuration, and
/// Vampire in portfolio mode. Executable paths can be overridden through
/// CVC5_BIN / CVC4_BIN / VAMPIRE_BIN.
pub fn builtin_presets() -> Vec<SolverConfig> {
    let bin = |var: &str, default: &str| -> PathBuf {
        std::env::var_os(var).map_or_else(|| PathBuf::from(default), PathBuf::from)
    };
    let cvc5 = bin("CVC5_BIN", "cvc5");
    let cvc4 = bin("CVC4_BIN", "cvc4");
    let vampire = bin("VAMPIRE_BIN", "vampire");
    let cfg = |name: &str, exe: &PathBuf, args: &[&str]| SolverConfig {
        name: name.to_string(),
        executable: exe.clone(),
        args: args.iter().map(|s| s.to_string()).collect(),
        input_via: InputVia::FileArg,
    };
    vec![
        cfg("cvc5-saturate", &cvc5, &["--full-saturate-quant"]),
        cfg(
            "cvc5-induction",
            &cvc5,
            &["--full-saturate-quant", "--quant-ind", "--conjecture-gen"],
        ),
        cfg(
            "cvc5-induction-no-ematching",
            &cvc5,
            &[
                "--full-saturate-quant",
                "--quant-ind",
                "--conjecture-gen",
                "--no-e-matching",
            ],
        ),
        cfg(
            "cvc4-induction",
            &cvc4,
            &[
                "--quant-ind",
                "--quant-cf",
                "--conjecture-gen",
                "--full-saturate-quant",
                "--lang=smt2.6",
            ],
        ),
        cfg(
            "vampire-portfolio",
            &vampire,
            &["--mode", "portfolio", "--input_syntax", "smtlib2", "--output_mode", "smtcomp"],
        ),
    ]
}

/// The single fast configuration used for sub-second consistency checks.
pub fn fast_preset() -> SolverConfig {
    builtin_presets().into_iter().next().expect("non-empty presets")
}

#[derive(Debug, thiserror::Error)]
pub enum SolverFailure {
    #[error("failed to start solver '{config}': {message}")]
    SpawnFailure { config: String, message: String },
    #[error("portfolio disagreement on one script: {a} answered {a_verdict:?}, {b} answered {b_verdict:?}")]
    Disagreement { a: String, a_verdict: Verdict, b: String, b_verdict: Verdict },
    #[error("i/o error while running solver: {0}")]
    Io(#[from] std::io::Error),
}

/// Map raw solver stdout to a verdict. Unsat/Sat only when the corresponding
/// token appears alone on a line; a lone `unknown` maps to Unknown; anything
/// else is the caller's problem (None).
pub fn parse_verdict(stdout: &str) -> Option<Verdict> {
    for line in stdout.lines() {
        match line.trim() {
            "unsat" => return Some(Verdict::Unsat),
            "sat" => return Some(Verdict::Sat),
            "unknown" => return Some(Verdict::Unknown),
            _ => {}
        }
    }
    None
}

/// Counting gate over concurrently running solver processes.
pub struct ProcessGate {
    capacity: usize,
    state: Mutex<usize>,
    cond: Condvar,
}

impl ProcessGate {
    pub fn new(capacity: usize) -> Self {
        ProcessGate { capacity: capacity.max(1), state: Mutex::new(0), cond: Condvar::new() }
    }

    /// Process-wide gate sized to the logical core count, floored at the
    /// built-in portfolio size so a full portfolio can always race even on
    /// small machines. Override with ADT_PROVER_MAX_SOLVER_PROCS.
    pub fn global() -> &'static ProcessGate {
        static GATE: OnceLock<ProcessGate> = OnceLock::new();
        GATE.get_or_init(|| {
            let capacity = std::env::var("ADT_PROVER_MAX_SOLVER_PROCS")
                .ok()
                .and_then(|v| v.parse::<usize>().ok())
                .unwrap_or_else(|| {
                    let cores = std::thread::available_parallelism().map_or(4, |n| n.get());
                    cores.max(builtin_presets().len())
                });
            ProcessGate::new(capacity)
        })
    }

    pub fn acquire(&self) -> GateGuard<'_> {
        let mut used = self.state.lock().unwrap();
        while *used >= self.capacity {
            used = self.cond.wait(used).unwrap();
        }
        *used += 1;
        GateGuard { gate: self }
    }

    pub fn in_use(&self) -> usize {
        *self.state.lock().unwrap()
    }
}

pub struct GateGuard<'a> {
    gate: &'a ProcessGate,
}

impl Drop for GateGuard<'_> {
    fn drop(&mut self) {
        let mut used = self.gate.state.lock().unwrap();
        *used -= 1;
        self.gate.cond.notify_one();
    }
}

/// Run one solver on `script` with a hard wall-clock `timeout`.
///
/// Never fails on solver crashes (those come back as `SolverError` verdicts);
/// only a missing executable is an error.
pub fn run_solver(
    script: &str,
    config: &SolverConfig,
    timeout: Duration,
) -> Result<SolverVerdict, SolverFailure> {
    run_solver_cancellable(script, config, timeout, &AtomicBool::new(false), ProcessGate::global())
}

/// `run_solver` with a cooperative cancellation flag, checked before spawn and
/// at every poll. A cancelled run kills the child and reports Timeout.
pub fn run_solver_cancellable(
    script: &str,
    config: &SolverConfig,
    timeout: Duration,
    cancel: &AtomicBool,
    gate: &ProcessGate,
) -> Result<SolverVerdict, SolverFailure> {
    assert!(timeout > Duration::ZERO, "timeout must be positive");
    let start = Instant::now();
    let _slot = gate.acquire();
    if cancel.load(Ordering::SeqCst) {
        return Ok(SolverVerdict {
            outcome: Verdict::Timeout,
            elapsed: start.elapsed().as_secs_f64(),
            raw_output: String::from("(cancelled before spawn)"),
            config_name: config.name.clone(),
        });
    }

    let mut cmd = Command::new(&config.executable);
    cmd.args(&config.args);
    #[allow(clippy::needless_late_init)]
    let _tmp; // keeps the script file alive for the child's lifetime
    match config.input_via {
        InputVia::FileArg => {
            let file = tempfile::Builder::new()
                .prefix("obligation-")
                .suffix(".smt2")
                .tempfile()
                .map_err(SolverFailure::Io)?;
            std::fs::write(file.path(), script)?;
            cmd.arg(file.path());
            cmd.stdin(Stdio::null());
            _tmp = Some(file);
        }
        InputVia::Stdin => {
            cmd.stdin(Stdio::piped());
            _tmp = None;
        }
    }
    cmd.stdout(Stdio::piped()).stderr(Stdio::piped());
    // New session => own process group, so the timeout kill reaps the whole
    // solver tree (Vampire's portfolio mode forks workers).
    unsafe {
        cmd.pre_exec(|| {
            libc::setsid();
            Ok(())
        });
    }

    let mut child = match cmd.spawn() {
        Ok(c) => c,
        Err(e) => {
            return Err(SolverFailure::SpawnFailure {
                config: config.name.clone(),
                message: e.to_string(),
            })
        }
    };
    let pid = child.id() as libc::pid_t;

    if let InputVia::Stdin = config.input_via {
        use std::io::Write;
        if let Some(mut stdin) = child.stdin.take() {
            let _ = stdin.write_all(script.as_bytes());
        }
    }

    // Drain pipes on side threads so a chatty solver can't block on a full pipe.
    let stdout_pipe = child.stdout.take().expect("stdout piped");
    let stderr_pipe = child.stderr.take().expect("stderr piped");
    let out_handle = std::thread::spawn(move || read_capped(stdout_pipe, 1 << 20));
    let err_handle = std::thread::spawn(move || read_capped(stderr_pipe, STDERR_CAP));

    let deadline = start + timeout;
    let mut timed_out = false;
    let status = loop {
        match child.try_wait()? {
            Some(status) => break Some(status),
            None => {
                if cancel.load(Ordering::SeqCst) || Instant::now() >= deadline {
                    timed_out = true;
                    unsafe {
                        libc::kill(-pid, libc::SIGKILL);
                    }
                    break None;
                }
                std::thread::sleep(POLL_INTERVAL);
            }
        }
    };
    if status.is_none() {
        // Reap after the kill so no zombie survives the call.
        let _ = child.wait();
    }
    let stdout = out_handle.join().unwrap_or_default();
    let stderr = err_handle.join().unwrap_or_default();
    let elapsed = start.elapsed().as_secs_f64();

    let outcome = if timed_out {
        Verdict::Timeout
    } else {
        match parse_verdict(&stdout) {
            Some(v) => v,
            None => Verdict::SolverError,
        }
    };
    let mut raw_output = stdout;
    if !stderr.is_empty() {
        raw_output.push_str("\n--- stderr ---\n");
        raw_output.push_str(&stderr);
    }
    Ok(SolverVerdict { outcome, elapsed, raw_output, config_name: config.name.clone() })
}

fn read_capped(mut pipe: impl Read, cap: usize) -> String {
    let mut buf = Vec::new();
    // Read everything (so the child never blocks), keep only the first `cap` bytes.
    let mut chunk = [0u8; 8192];
    loop {
        match pipe.read(&mut chunk) {
            Ok(0) | Err(_) => break,
            Ok(n) => {
                if buf.len() < cap {
                    let take = n.min(cap - buf.len());
                    buf.extend_from_slice(&chunk[..take]);
                }
            }
        }
    }
    String::from_utf8_lossy(&buf).into_owned()
}

/// Pick the portfolio answer from the verdicts of all members, or report a
/// Sat/Unsat disagreement as a fatal consistency error.
pub fn reconcile(verdicts: Vec<SolverVerdict>) -> Result<SolverVerdict, SolverFailure> {
    let mut conclusive: Option<SolverVerdict> = None;
    let mut best_inconclusive: Option<SolverVerdict> = None;
    for v in verdicts {
        if v.outcome.is_conclusive() {
            match &conclusive {
                Some(first) if first.outcome != v.outcome => {
                    return Err(SolverFailure::Disagreement {
                        a: first.config_name.clone(),
                        a_verdict: first.outcome.clone(),
                        b: v.config_name,
                        b_verdict: v.outcome,
                    });
                }
                Some(_) => {}
                None => conclusive = Some(v),
            }
        } else {
            let better = best_inconclusive
                .as_ref()
                .is_none_or(|b| v.outcome.inconclusive_rank() > b.outcome.inconclusive_rank());
            if better {
                best_inconclusive = Some(v);
            }
        }
    }
    conclusive
        .or(best_inconclusive)
        .ok_or_else(|| SolverFailure::SpawnFailure {
            config: String::from("(portfolio)"),
            message: String::from("every portfolio member failed to spawn"),
        })
}

/// Race `configs` on `script`; the first conclusive verdict wins and the rest
/// are cancelled. With no conclusive verdict, the best inconclusive one is
/// returned after all members finish.
pub fn run_portfolio(
    script: &str,
    configs: &[SolverConfig],
    timeout: Duration,
) -> Result<SolverVerdict, SolverFailure> {
    run_portfolio_cancellable(script, configs, timeout, &AtomicBool::new(false))
}

pub fn run_portfolio_cancellable(
    script: &str,
    configs: &[SolverConfig],
    timeout: Duration,
    outer_cancel: &AtomicBool,
) -> Result<SolverVerdict, SolverFailure> {
    assert!(!configs.is_empty(), "portfolio must have at least one config");
    let cancel = Arc::new(AtomicBool::new(false));
    let (tx, rx) = mpsc::channel::<Result<SolverVerdict, SolverFailure>>();
    std::thread::scope(|scope| {
        for config in configs {
            let tx = tx.clone();
            let cancel = Arc::clone(&cancel);
            scope.spawn(move || {
                let res = run_solver_cancellable(
                    script,
                    config,
                    timeout,
                    &cancel,
                    ProcessGate::global(),
                );
                let _ = tx.send(res);
            });
        }
        drop(tx);

        let mut verdicts: Vec<SolverVerdict> = Vec::new();
        let mut spawn_failures: Vec<SolverFailure> = Vec::new();
        for received in rx.iter() {
            match received {
                Ok(v) => {
                    if v.outcome.is_conclusive() || outer_cancel.load(Ordering::SeqCst) {
                        // First conclusive answer (or outer cancellation):
                        // stop the remaining members.
                        cancel.store(true, Ordering::SeqCst);
                    }
                    verdicts.push(v);
                }
                Err(e) => spawn_failures.push(e),
            }
        }
        if verdicts.is_empty() {
            return Err(spawn_failures.into_iter().next().unwrap_or(
                SolverFailure::SpawnFailure {
                    config: String::from("(portfolio)"),
                    message: String::from("no verdicts received"),
                },
            ));
        }
        reconcile(verdicts)
    })
}

/// Named solver presets: built-ins plus user-supplied overrides.
#[derive(Debug, Clone)]
pub struct Portfolio {
    pub configs: Vec<SolverConfig>,
}

impl Portfolio {
    pub fn builtin() -> Self {
        Portfolio { configs: builtin_presets() }
    }

    /// Keep only configs whose executables exist; error if none survive.
    pub fn validated(self) -> Result<Self, SolverFailure> {
        let configs: Vec<SolverConfig> =
            self.configs.into_iter().filter(|c| c.validate().is_ok()).collect();
        if configs.is_empty() {
            return Err(SolverFailure::SpawnFailure {
                config: String::from("(portfolio)"),
                message: String::from(
                    "no solver executable found; install cvc5/cvc4/vampire or point \
                     CVC5_BIN (or a solver config file) at one",
                ),
            });
        }
        Ok(Portfolio { configs })
    }

    pub fn by_name(&self) -> HashMap<&str, &SolverConfig> {
        self.configs.iter().map(|c| (c.name.as_str(), c)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sh(name: &str, script: &str) -> SolverConfig {
        SolverConfig {
            name: name.to_string(),
            executable: PathBuf::from("/bin/sh"),
            args: vec!["-c".to_string(), format!("{script} # $0 consumes the file arg")],
            input_via: InputVia::FileArg,
        }
    }

    #[test]
    fn verdict_parsing_is_token_per_line() {
        assert_eq!(parse_verdict("unsat\n"), Some(Verdict::Unsat));
        assert_eq!(parse_verdict("  sat  \n"), Some(Verdict::Sat));
        assert_eq!(parse_verdict("unknown"), Some(Verdict::Unknown));
        assert_eq!(parse_verdict("unsatisfiable\n"), None);
        assert_eq!(parse_verdict("the answer is sat today"), None);
        assert_eq!(parse_verdict("warning: x\nunsat"), Some(Verdict::Unsat));
        assert_eq!(parse_verdict(""), None);
    }

    #[test]
    fn run_solver_reads_stdout_token() {
        let v = run_solver("(check-sat)", &sh("echo-unsat", "echo unsat"), Duration::from_secs(5))
            .unwrap();
        assert_eq!(v.outcome, Verdict::Unsat);
        assert_eq!(v.config_name, "echo-unsat");
        assert!(v.elapsed < 5.0);
    }

    #[test]
    fn run_solver_kills_at_timeout() {
        let start = Instant::now();
        let v = run_solver("", &sh("sleeper", "sleep 30; echo unsat"), Duration::from_millis(200))
            .unwrap();
        assert_eq!(v.outcome, Verdict::Timeout);
        assert!(start.elapsed() < Duration::from_secs(5), "kill did not happen promptly");
    }

    #[test]
    fn run_solver_missing_executable_is_spawn_failure() {
        let cfg = SolverConfig {
            name: "ghost".into(),
            executable: PathBuf::from("/nonexistent/solver-binary"),
            args: vec![],
            input_via: InputVia::FileArg,
        };
        assert!(matches!(
            run_solver("", &cfg, Duration::from_secs(1)),
            Err(SolverFailure::SpawnFailure { .. })
        ));
        assert!(cfg.validate().is_err());
    }

    #[test]
    fn run_solver_crash_is_solver_error_not_panic() {
        let v = run_solver("", &sh("crasher", "echo oops >&2; exit 3"), Duration::from_secs(5))
            .unwrap();
        assert_eq!(v.outcome, Verdict::SolverError);
        assert!(v.raw_output.contains("oops"));
    }

    #[test]
    fn run_solver_script_arrives_via_file_arg() {
        // $0 is "-c" script name; the temp file path is the next positional arg.
        let cfg = SolverConfig {
            name: "cat".into(),
            executable: PathBuf::from("/bin/sh"),
            args: vec!["-c".into(), "cat \"$1\"".into(), "inline".into()],
            input_via: InputVia::FileArg,
        };
        let v = run_solver("unknown\n", &cfg, Duration::from_secs(5)).unwrap();
        assert_eq!(v.outcome, Verdict::Unknown);
    }

    #[test]
    fn run_solver_script_arrives_via_stdin() {
        let cfg = SolverConfig {
            name: "stdin-cat".into(),
            executable: PathBuf::from("/bin/cat"),
            args: vec![],
            input_via: InputVia::Stdin,
        };
        let v = run_solver("sat\n", &cfg, Duration::from_secs(5)).unwrap();
        assert_eq!(v.outcome, Verdict::Sat);
    }

    #[test]
    fn stderr_is_truncated_to_cap() {
        let v = run_solver(
            "",
            &sh("noisy", "yes error-line | head -c 100000 >&2; echo unknown"),
            Duration::from_secs(5),
        )
        .unwrap();
        assert_eq!(v.outcome, Verdict::Unknown);
        // stdout + separator + 4KiB stderr cap
        assert!(v.raw_output.len() < 8192 + STDERR_CAP);
    }

    #[test]
    fn portfolio_first_conclusive_wins_and_cancels_rest() {
        let configs = vec![sh("slow", "sleep 20; echo sat"), sh("fast", "echo unsat")];
        let start = Instant::now();
        let v = run_portfolio("", &configs, Duration::from_secs(30)).unwrap();
        assert_eq!(v.outcome, Verdict::Unsat);
        assert_eq!(v.config_name, "fast");
        assert!(start.elapsed() < Duration::from_secs(10), "losers were not cancelled");
    }

    #[test]
    fn portfolio_of_one_behaves_like_run_solver() {
        let v = run_portfolio("", &[sh("solo", "echo unknown")], Duration::from_secs(5)).unwrap();
        assert_eq!(v.outcome, Verdict::Unknown);
        assert_eq!(v.config_name, "solo");
    }

    #[test]
    fn portfolio_prefers_unknown_over_timeout_over_error() {
        let configs = vec![
            sh("err", "exit 1"),
            sh("slow", "sleep 20"),
            sh("unk", "echo unknown"),
        ];
        let v = run_portfolio("", &configs, Duration::from_millis(300)).unwrap();
        assert_eq!(v.outcome, Verdict::Unknown);
        assert_eq!(v.config_name, "unk");
    }

    #[test]
    fn portfolio_all_over_budget_times_out_near_deadline() {
        let configs = vec![sh("s1", "sleep 20"), sh("s2", "sleep 20")];
        let start = Instant::now();
        let v = run_portfolio("", &configs, Duration::from_millis(300)).unwrap();
        assert_eq!(v.outcome, Verdict::Timeout);
        assert!(start.elapsed() >= Duration::from_millis(300));
        assert!(start.elapsed() < Duration::from_secs(5));
    }

    #[test]
    fn reconcile_reports_disagreement_loudly() {
        let mk = |name: &str, outcome: Verdict| SolverVerdict {
            outcome,
            elapsed: 0.1,
            raw_output: String::new(),
            config_name: name.to_string(),
        };
        let err = reconcile(vec![mk("a", Verdict::Unsat), mk("b", Verdict::Sat)]).unwrap_err();
        assert!(matches!(err, SolverFailure::Disagreement { .. }));
        // Agreement is fine; first finisher's name is reported.
        let ok = reconcile(vec![mk("a", Verdict::Unsat), mk("b", Verdict::Unsat)]).unwrap();
        assert_eq!(ok.config_name, "a");
    }

    #[test]
    fn no_zombie_processes_after_portfolio() {
        let configs = vec![sh("z1", "sleep 20"), sh("z2", "sleep 20")];
        let _ = run_portfolio("", &configs, Duration::from_millis(200)).unwrap();
        // Zombies would show as children of this test process in state Z.
        let me = std::process::id();
        let out = Command::new("ps")
            .args(["-o", "stat=,ppid=", "-A"])
            .output()
            .expect("ps available");
        let zombies = String::from_utf8_lossy(&out.stdout)
            .lines()
            .filter(|l| {
                let mut it = l.split_whitespace();
                let stat = it.next().unwrap_or("");
                let ppid = it.next().unwrap_or("");
                stat.starts_with('Z') && ppid == me.to_string()
            })
            .count();
        assert_eq!(zombies, 0, "solver children left as zombies");
    }

    #[test]
    fn process_gate_caps_concurrency() {
        let gate = Arc::new(ProcessGate::new(2));
        let peak = Arc::new(Mutex::new(0usize));
        std::thread::scope(|s| {
            for _ in 0..6 {
                let gate = Arc::clone(&gate);
                let peak = Arc::clone(&peak);
                s.spawn(move || {
                    let _g = gate.acquire();
                    {
                        let mut p = peak.lock().unwrap();
                        *p = (*p).max(gate.in_use());
                    }
                    std::thread::sleep(Duration::from_millis(30));
                });
            }
        });
        assert!(*peak.lock().unwrap() <= 2);
    }

    #[test]
    fn builtin_presets_match_expected_option_sets() {
        let presets = builtin_presets();
        assert_eq!(presets.len(), 5);
        assert_eq!(presets[0].args, ["--full-saturate-quant"]);
        assert!(presets[1].args.contains(&"--quant-ind".to_string()));
        assert!(presets[2].args.contains(&"--no-e-matching".to_string()));
        assert!(presets[3].args.contains(&"--lang=smt2.6".to_string()));
        assert!(presets[4].name.contains("vampire"));
        // No preset smuggles in a timeout flag; the harness owns the clock.
        for p in &presets {
            assert!(p.args.iter().all(|a| !a.contains("tlimit") && !a.contains("--time")));
        }
        assert_eq!(fast_preset().name, presets[0].name);
    }
}
