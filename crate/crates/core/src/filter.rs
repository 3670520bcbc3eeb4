//! Fast conjecture screening: reject syntactically broken candidates,
//! restatements of the goal, and conjectures the axioms contradict, before
//! any expensive verification is attempted.

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::llm::Conjecture;
use crate::smt::{alpha_normalize, build_consistency_obligation, parse_formula, Signature, Task, Term};
use crate::solver::{run_solver, SolverConfig, Verdict};

/// Default per-conjecture screening budget.
pub const DEFAULT_FILTER_TIMEOUT: Duration = Duration::from_secs(1);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterReason {
    SyntaxError,
    IdenticalToGoal,
    InconsistentWithAxioms,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FilterVerdict {
    /// None means Pass; Some(reason) means Filtered.
    pub reason: Option<FilterReason>,
    pub elapsed: f64,
    /// Human-readable note, e.g. the parse error or a solver diagnostic.
    pub detail: Option<String>,
}

impl FilterVerdict {
    pub fn passed(&self) -> bool {
        self.reason.is_none()
    }
}

/// How a batch reacts to one filtered member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum FilterMode {
    /// One filtered conjecture rejects the whole batch (the faithful default).
    #[default]
    Strict,
    /// Documented deviation: drop filtered conjectures, keep the rest.
    DropBad,
}

impl FilterMode {
    pub fn parse(s: &str) -> Option<FilterMode> {
        match s {
            "strict" => Some(FilterMode::Strict),
            "drop-bad" => Some(FilterMode::DropBad),
            _ => None,
        }
    }
}

#[derive(Debug)]
pub enum BatchOutcome {
    /// Every conjecture passed; `kept` indexes into the input batch (all of
    /// it in Strict mode, the surviving subset in DropBad mode).
    AllPass { kept: Vec<usize> },
    /// Strict mode: the first filtered conjecture rejected the batch.
    BatchRejected { index: usize, verdict: FilterVerdict },
}

/// Screen one raw candidate line: (1) parse and sort-check against the task
/// signature, (2) compare with the goal up to renaming of bound variables,
/// (3) check consistency with the axioms by solving axioms ∧ c — Unsat means
/// c contradicts the axioms. The consistency check is one-sided: Sat,
/// Unknown, Timeout, and solver failure all pass.
pub fn is_filtered(
    candidate: &str,
    task: &Task,
    filter_timeout: Duration,
    solver: &SolverConfig,
) -> FilterVerdict {
    let start = Instant::now();
    let sig = Signature::from_task(task);
    let stripped = candidate.trim();
    let body = stripped
        .strip_prefix("(assert")
        .and_then(|rest| rest.strip_suffix(')'))
        .unwrap_or(stripped);
    let formula = match parse_formula(body, &sig) {
        Ok(f) if f.is_closed() => f,
        Ok(_) => {
            return FilterVerdict {
                reason: Some(FilterReason::SyntaxError),
                elapsed: start.elapsed().as_secs_f64(),
                detail: Some(String::from("formula has free variables")),
            }
        }
        Err(e) => {
            return FilterVerdict {
                reason: Some(FilterReason::SyntaxError),
                elapsed: start.elapsed().as_secs_f64(),
                detail: Some(e.to_string()),
            }
        }
    };
    is_filtered_formula(&formula, task, filter_timeout, solver, start)
}

/// The goal-identity and axiom-consistency checks for an already-parsed,
/// well-sorted formula.
pub fn is_filtered_conjecture(
    c: &Conjecture,
    task: &Task,
    filter_timeout: Duration,
    solver: &SolverConfig,
) -> FilterVerdict {
    is_filtered_formula(&c.formula, task, filter_timeout, solver, Instant::now())
}

fn is_filtered_formula(
    formula: &Term,
    task: &Task,
    filter_timeout: Duration,
    solver: &SolverConfig,
    start: Instant,
) -> FilterVerdict {
    if alpha_normalize(formula) == alpha_normalize(&task.goal) {
        return FilterVerdict {
            reason: Some(FilterReason::IdenticalToGoal),
            elapsed: start.elapsed().as_secs_f64(),
            detail: None,
        };
    }
    let script = match build_consistency_obligation(task, formula) {
        Ok(s) => s,
        Err(e) => {
            return FilterVerdict {
                reason: Some(FilterReason::SyntaxError),
                elapsed: start.elapsed().as_secs_f64(),
                detail: Some(e.to_string()),
            }
        }
    };
    match run_solver(&script, solver, filter_timeout) {
        Ok(v) if v.outcome == Verdict::Unsat => FilterVerdict {
            reason: Some(FilterReason::InconsistentWithAxioms),
            elapsed: start.elapsed().as_secs_f64(),
            detail: Some(format!("axioms ∧ c unsat per {}", v.config_name)),
        },
        Ok(_) => FilterVerdict {
            reason: None,
            elapsed: start.elapsed().as_secs_f64(),
            detail: None,
        },
        // Screening is an optimization; infrastructure trouble must not veto
        // a conjecture that Verify will vet anyway.
        Err(e) => FilterVerdict {
            reason: None,
            elapsed: start.elapsed().as_secs_f64(),
            detail: Some(format!("consistency check skipped: {e}")),
        },
    }
}

/// Screen a batch in order. Strict mode rejects the whole batch at the first
/// filtered conjecture; DropBad keeps the survivors. An empty batch passes.
pub fn filter_batch(
    batch: &[Conjecture],
    task: &Task,
    filter_timeout: Duration,
    solver: &SolverConfig,
    mode: FilterMode,
) -> BatchOutcome {
    let mut kept = Vec::with_capacity(batch.len());
    for (index, c) in batch.iter().enumerate() {
        let verdict = is_filtered_conjecture(c, task, filter_timeout, solver);
        if verdict.passed() {
            kept.push(index);
        } else if mode == FilterMode::Strict {
            return BatchOutcome::BatchRejected { index, verdict };
        }
    }
    BatchOutcome::AllPass { kept }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::{Provenance, PromptStrategy, TokenUsage};
    use crate::smt::parse_script;
    use std::path::PathBuf;

    fn nat_task() -> Task {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/fixtures/tasks/nat-mult-comm.smt2"
        ))
        .unwrap();
        parse_script(&text, Some("nat-mult-comm.smt2")).unwrap()
    }

    fn fake_solver(answer: &str) -> SolverConfig {
        SolverConfig {
            name: format!("fake-{answer}"),
            executable: PathBuf::from("/bin/sh"),
            args: vec!["-c".into(), format!("echo {answer}")],
            input_via: crate::solver::InputVia::FileArg,
        }
    }

    fn conjecture(task: &Task, text: &str) -> Conjecture {
        let sig = Signature::from_task(task);
        Conjecture {
            formula: parse_formula(text, &sig).unwrap(),
            raw_text: text.to_string(),
            provenance: Provenance {
                strategy: PromptStrategy::Strategy1EquationalReasoning,
                iteration: 0,
                depth: 0,
                model: String::from("test"),
            },
            tokens: TokenUsage::default(),
        }
    }

    #[test]
    fn syntax_error_is_filtered_without_solver() {
        let task = nat_task();
        // Solver would say unsat, but the parse failure must win first.
        let v = is_filtered("(forall ((x Nat)) (= (plus x) x)", &task, DEFAULT_FILTER_TIMEOUT,
            &fake_solver("unsat"));
        assert_eq!(v.reason, Some(FilterReason::SyntaxError));
        let v = is_filtered("(= (plus x zero) x)", &task, DEFAULT_FILTER_TIMEOUT,
            &fake_solver("unsat"));
        assert_eq!(v.reason, Some(FilterReason::SyntaxError));
    }

    #[test]
    fn alpha_renamed_goal_is_identical_to_goal() {
        let task = nat_task();
        let v = is_filtered(
            "(forall ((a Nat) (b Nat)) (= (mult a b) (mult b a)))",
            &task,
            DEFAULT_FILTER_TIMEOUT,
            &fake_solver("sat"),
        );
        assert_eq!(v.reason, Some(FilterReason::IdenticalToGoal));
        // The assert wrapper is stripped before comparison.
        let v = is_filtered(
            "(assert (forall ((q Nat) (r Nat)) (= (mult q r) (mult r q))))",
            &task,
            DEFAULT_FILTER_TIMEOUT,
            &fake_solver("sat"),
        );
        assert_eq!(v.reason, Some(FilterReason::IdenticalToGoal));
    }

    #[test]
    fn unsat_consistency_check_filters() {
        let task = nat_task();
        let v = is_filtered(
            "(forall ((x Nat)) (= (plus x zero) zero))",
            &task,
            DEFAULT_FILTER_TIMEOUT,
            &fake_solver("unsat"),
        );
        assert_eq!(v.reason, Some(FilterReason::InconsistentWithAxioms));
    }

    #[test]
    fn sat_unknown_and_timeout_pass() {
        let task = nat_task();
        for cfg in [fake_solver("sat"), fake_solver("unknown")] {
            let v = is_filtered(
                "(forall ((x Nat) (y Nat)) (= (mult x (succ y)) (plus (mult x y) x)))",
                &task,
                DEFAULT_FILTER_TIMEOUT,
                &cfg,
            );
            assert!(v.passed(), "{}", cfg.name);
        }
        let slow = SolverConfig {
            name: "slow".into(),
            executable: PathBuf::from("/bin/sh"),
            args: vec!["-c".into(), "sleep 30".into()],
            input_via: crate::solver::InputVia::FileArg,
        };
        let start = Instant::now();
        let v = is_filtered(
            "(forall ((x Nat) (y Nat)) (= (mult x (succ y)) (plus (mult x y) x)))",
            &task,
            Duration::from_millis(200),
            &slow,
        );
        assert!(v.passed());
        assert!(start.elapsed() < Duration::from_secs(5), "filter budget not enforced");
    }

    #[test]
    fn solver_failure_degrades_to_pass_with_diagnostic() {
        let task = nat_task();
        let missing = SolverConfig {
            name: "ghost".into(),
            executable: PathBuf::from("/nonexistent/prover"),
            args: vec![],
            input_via: crate::solver::InputVia::FileArg,
        };
        let v = is_filtered(
            "(forall ((x Nat)) (= (mult x zero) zero))",
            &task,
            DEFAULT_FILTER_TIMEOUT,
            &missing,
        );
        assert!(v.passed());
        assert!(v.detail.unwrap().contains("skipped"));
    }

    #[test]
    fn strict_batch_rejects_at_first_filtered() {
        let task = nat_task();
        let batch = vec![
            conjecture(&task, "(forall ((a Nat) (b Nat)) (= (mult a b) (mult b a)))"),
            conjecture(&task, "(forall ((x Nat)) (= (mult x zero) zero))"),
        ];
        match filter_batch(&batch, &task, DEFAULT_FILTER_TIMEOUT, &fake_solver("sat"),
            FilterMode::Strict)
        {
            BatchOutcome::BatchRejected { index, verdict } => {
                assert_eq!(index, 0);
                assert_eq!(verdict.reason, Some(FilterReason::IdenticalToGoal));
            }
            other => panic!("expected rejection, got {other:?}"),
        }
    }

    #[test]
    fn drop_bad_keeps_survivors() {
        let task = nat_task();
        let batch = vec![
            conjecture(&task, "(forall ((a Nat) (b Nat)) (= (mult a b) (mult b a)))"),
            conjecture(&task, "(forall ((x Nat)) (= (mult x zero) zero))"),
        ];
        match filter_batch(&batch, &task, DEFAULT_FILTER_TIMEOUT, &fake_solver("sat"),
            FilterMode::DropBad)
        {
            BatchOutcome::AllPass { kept } => assert_eq!(kept, vec![1]),
            other => panic!("expected survivors, got {other:?}"),
        }
    }

    #[test]
    fn empty_batch_passes() {
        let task = nat_task();
        match filter_batch(&[], &task, DEFAULT_FILTER_TIMEOUT, &fake_solver("sat"),
            FilterMode::Strict)
        {
            BatchOutcome::AllPass { kept } => assert!(kept.is_empty()),
            other => panic!("expected pass, got {other:?}"),
        }
    }
}
