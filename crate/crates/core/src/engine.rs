//! The proof workflow: recursive, bounded, LLM-assisted proof search with
//! parallel sub-goal discharge and a re-checkable proof-tree certificate.
//!
//! `prove_run` follows the main loop faithfully: try the backend directly;
//! below the depth bound, for each prompt strategy and up to three
//! iterations, ask the model for conjectures, screen them, verify that they
//! close the goal, and then recursively prove each surviving conjecture as
//! its own sub-goal (at most `subgoal_parallelism` at a time, first failing
//! child cancels its siblings).

use std::collections::HashMap;
use std::io::Write;
use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

use crate::filter::{filter_batch, BatchOutcome, FilterMode};
use crate::llm::{
    extract_conjectures, render_prompt, Conjecture, LlmClient, PromptStrategy, Provenance,
    TokenUsage, DEFAULT_CONJECTURE_CAP,
};
use crate::smt::{
    alpha_normalize, build_proof_obligation, build_subgoal_task, parse_formula, parse_script,
    preprocess_label, render_script, term_to_smt2, Signature, Task, Term,
};
use crate::solver::{run_portfolio_cancellable, SolverConfig, Verdict};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EngineConfig {
    pub max_depth: u32,
    pub max_iter_number: u32,
    pub prompt_pool: Vec<PromptStrategy>,
    /// Global wall-clock budget for one proof task, shared by the whole tree.
    pub task_time_limit: Duration,
    pub initial_check_timeout: Duration,
    pub verify_timeout: Duration,
    pub filter_timeout: Duration,
    pub subgoal_parallelism: usize,
    pub filter_mode: FilterMode,
    pub conjecture_cap: usize,
}

impl Default for EngineConfig {
    fn default() -> Self {
        EngineConfig {
            max_depth: 3,
            max_iter_number: 3,
            prompt_pool: PromptStrategy::default_pool(),
            task_time_limit: Duration::from_secs(1200),
            initial_check_timeout: Duration::from_secs(60),
            verify_timeout: Duration::from_secs(60),
            filter_timeout: Duration::from_secs(1),
            subgoal_parallelism: 4,
            filter_mode: FilterMode::Strict,
            conjecture_cap: DEFAULT_CONJECTURE_CAP,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    ProvedDirect,
    ProvedWithLemmas,
    Failed,
    BudgetExhausted,
}

impl Status {
    pub fn is_proved(&self) -> bool {
        matches!(self, Status::ProvedDirect | Status::ProvedWithLemmas)
    }
}

/// Where one prompt attempt ended.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttemptRecord {
    pub strategy: PromptStrategy,
    pub iteration: u32,
    pub extracted: usize,
    /// e.g. "replay miss", "batch rejected: identical-to-goal", "verified".
    pub outcome: String,
    pub verified: bool,
}

#[derive(Debug, Clone, Copy, Default, Serialize, Deserialize)]
pub struct Timing {
    pub initial_check: f64,
    pub query: f64,
    pub filter: f64,
    pub verify: f64,
    pub subgoal: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofNode {
    /// The node's goal as a complete SMTLIB2 proof task (declarations,
    /// axioms, negated goal) — enough to re-check this node in isolation.
    #[serde(rename = "goal-smt2")]
    pub goal_smt2: String,
    pub status: Status,
    /// Verified auxiliary lemmas, one SMTLIB2 formula each; children line up
    /// with these index-for-index.
    pub lemmas: Vec<String>,
    pub children: Vec<ProofNode>,
    /// Name of the solver config that closed this node's obligation.
    pub solver: Option<String>,
    pub depth: u32,
    pub elapsed: f64,
    pub tokens: TokenUsage,
    pub timing: Timing,
    pub attempts: Vec<AttemptRecord>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProofOutcome {
    pub proved: bool,
    pub root: ProofNode,
    #[serde(rename = "wall-time")]
    pub wall_time: f64,
    #[serde(rename = "token-usage")]
    pub tokens: TokenUsage,
}

pub struct Engine {
    pub config: EngineConfig,
    pub portfolio: Vec<SolverConfig>,
    /// Single fast config for sub-second consistency screening.
    pub filter_solver: SolverConfig,
    pub llm: LlmClient,
    trace: Option<Mutex<Box<dyn Write + Send>>>,
    memo: Mutex<HashMap<Term, ProofNode>>,
    tokens: Mutex<TokenUsage>,
    queries: AtomicU64,
}

impl Engine {
    pub fn new(
        config: EngineConfig,
        portfolio: Vec<SolverConfig>,
        filter_solver: SolverConfig,
        llm: LlmClient,
    ) -> Self {
        assert!(!portfolio.is_empty(), "engine needs at least one solver config");
        Engine {
            config,
            portfolio,
            filter_solver,
            llm,
            trace: None,
            memo: Mutex::new(HashMap::new()),
            tokens: Mutex::new(TokenUsage::default()),
            queries: AtomicU64::new(0),
        }
    }

    /// Emit line-delimited JSON progress events to `sink`.
    pub fn with_trace(mut self, sink: Box<dyn Write + Send>) -> Self {
        self.trace = Some(Mutex::new(sink));
        self
    }

    pub fn total_queries(&self) -> u64 {
        self.queries.load(Ordering::SeqCst)
    }

    fn trace_event(&self, value: serde_json::Value) {
        if let Some(sink) = &self.trace {
            let mut sink = sink.lock().unwrap();
            let _ = writeln!(sink, "{value}");
        }
    }

    fn note_tokens(&self, usage: TokenUsage) {
        self.tokens.lock().unwrap().add(usage);
    }

    /// Prove `task` within the configured global budget.
    pub fn run(&self, task: &Task) -> ProofOutcome {
        let start = Instant::now();
        let deadline = start + self.config.task_time_limit;
        let cancel = AtomicBool::new(false);
        *self.tokens.lock().unwrap() = TokenUsage::default();
        self.queries.store(0, Ordering::SeqCst);
        let root = self.prove_run(task, 0, deadline, &cancel, &mut Vec::new());
        let tokens = *self.tokens.lock().unwrap();
        ProofOutcome {
            proved: root.status.is_proved(),
            root,
            wall_time: start.elapsed().as_secs_f64(),
            tokens,
        }
    }

    /// Can the backend close the goal with no auxiliary lemmas?
    pub fn initial_check(
        &self,
        task: &Task,
        timeout: Duration,
        cancel: &AtomicBool,
    ) -> (bool, Option<String>) {
        self.solve_obligation(task, &[], timeout, cancel)
    }

    /// Does the goal follow from the axioms plus the conjectures in `c`?
    pub fn verify(
        &self,
        task: &Task,
        c: &[Conjecture],
        timeout: Duration,
        cancel: &AtomicBool,
    ) -> (bool, Option<String>) {
        let formulas: Vec<Term> = c.iter().map(|x| x.formula.clone()).collect();
        self.solve_obligation(task, &formulas, timeout, cancel)
    }

    fn solve_obligation(
        &self,
        task: &Task,
        conjectures: &[Term],
        timeout: Duration,
        cancel: &AtomicBool,
    ) -> (bool, Option<String>) {
        let script = match build_proof_obligation(task, conjectures) {
            Ok(s) => s,
            Err(_) => return (false, None),
        };
        match run_portfolio_cancellable(&script, &self.portfolio, timeout, cancel) {
            Ok(v) if v.outcome == Verdict::Unsat => (true, Some(v.config_name)),
            _ => (false, None),
        }
    }

    /// One prompt attempt: query, extract, filter, verify.
    #[allow(clippy::too_many_arguments)]
    fn prove(
        &self,
        task: &Task,
        strategy: PromptStrategy,
        iteration: u32,
        depth: u32,
        deadline: Instant,
        cancel: &AtomicBool,
        timing: &mut Timing,
    ) -> (bool, Vec<Conjecture>, AttemptRecord) {
        let mut record = AttemptRecord {
            strategy,
            iteration,
            extracted: 0,
            outcome: String::new(),
            verified: false,
        };
        let fail = |record: AttemptRecord| (false, Vec::new(), record);

        let labeled = preprocess_label(task);
        let prompt = render_prompt(strategy, &labeled);
        if Instant::now() >= deadline || cancel.load(Ordering::SeqCst) {
            record.outcome = String::from("budget exhausted before query");
            return fail(record);
        }
        let t0 = Instant::now();
        self.queries.fetch_add(1, Ordering::SeqCst);
        let (response, usage) = match self.llm.query(&prompt, iteration) {
            Ok(r) => r,
            Err(e) => {
                timing.query += t0.elapsed().as_secs_f64();
                record.outcome = format!("query failed: {e}");
                return fail(record);
            }
        };
        timing.query += t0.elapsed().as_secs_f64();
        self.note_tokens(usage);

        let extraction = extract_conjectures(&response, task, self.config.conjecture_cap);
        record.extracted = extraction.formulas.len();
        let batch: Vec<Conjecture> = extraction
            .formulas
            .into_iter()
            .map(|(formula, raw_text)| Conjecture {
                formula,
                raw_text,
                provenance: Provenance {
                    strategy,
                    iteration,
                    depth,
                    model: self.llm.config.model.clone(),
                },
                tokens: usage,
            })
            .collect();

        if Instant::now() >= deadline || cancel.load(Ordering::SeqCst) {
            record.outcome = String::from("budget exhausted before filtering");
            return fail(record);
        }
        let t0 = Instant::now();
        let outcome = filter_batch(
            &batch,
            task,
            self.config.filter_timeout,
            &self.filter_solver,
            self.config.filter_mode,
        );
        timing.filter += t0.elapsed().as_secs_f64();
        let kept: Vec<Conjecture> = match outcome {
            BatchOutcome::BatchRejected { index, verdict } => {
                record.outcome = format!(
                    "batch rejected at {index}: {:?}",
                    verdict.reason.expect("rejection has a reason")
                );
                return fail(record);
            }
            BatchOutcome::AllPass { kept } => {
                let mut batch = batch;
                let mut picked = Vec::with_capacity(kept.len());
                for index in kept.into_iter().rev() {
                    picked.push(batch.swap_remove(index));
                }
                picked.reverse();
                picked
            }
        };

        if Instant::now() >= deadline || cancel.load(Ordering::SeqCst) {
            record.outcome = String::from("budget exhausted before verify");
            return fail(record);
        }
        let t0 = Instant::now();
        let (verified, _solver) =
            self.verify(task, &kept, self.config.verify_timeout, cancel);
        timing.verify += t0.elapsed().as_secs_f64();
        if verified {
            record.verified = true;
            record.outcome = format!("verified with {} conjecture(s)", kept.len());
            (true, kept, record)
        } else {
            record.outcome = String::from("verify failed");
            fail(record)
        }
    }

    /// The main recursive workflow over one goal.
    fn prove_run(
        &self,
        task: &Task,
        depth: u32,
        deadline: Instant,
        cancel: &AtomicBool,
        ancestors: &mut Vec<Term>,
    ) -> ProofNode {
        let start = Instant::now();
        let goal_smt2 = render_script(task);
        let goal_key = alpha_normalize(&task.goal);
        self.trace_event(serde_json::json!({
            "event": "node-open", "depth": depth, "goal": term_to_smt2(&task.goal),
        }));
        if let Some(hit) = self.memo.lock().unwrap().get(&goal_key) {
            self.trace_event(serde_json::json!({
                "event": "node-close", "depth": depth, "status": "memo-hit",
            }));
            return ProofNode { depth, elapsed: start.elapsed().as_secs_f64(), ..hit.clone() };
        }

        let mut node = ProofNode {
            goal_smt2,
            status: Status::Failed,
            lemmas: Vec::new(),
            children: Vec::new(),
            solver: None,
            depth,
            elapsed: 0.0,
            tokens: TokenUsage::default(),
            timing: Timing::default(),
            attempts: Vec::new(),
        };
        let tokens_before = *self.tokens.lock().unwrap();

        let finalize = |mut node: ProofNode, engine: &Engine, start: Instant| {
            node.elapsed = start.elapsed().as_secs_f64();
            let after = *engine.tokens.lock().unwrap();
            node.tokens = TokenUsage {
                prompt_tokens: after.prompt_tokens - tokens_before.prompt_tokens,
                completion_tokens: after.completion_tokens - tokens_before.completion_tokens,
            };
            engine.trace_event(serde_json::json!({
                "event": "node-close", "depth": node.depth,
                "status": serde_json::to_value(node.status).unwrap(),
            }));
            if node.status.is_proved() {
                let key = alpha_normalize(
                    &parse_script(&node.goal_smt2, None).expect("own rendering parses").goal,
                );
                engine.memo.lock().unwrap().entry(key).or_insert_with(|| node.clone());
            }
            node
        };

        if Instant::now() >= deadline || cancel.load(Ordering::SeqCst) {
            node.status = Status::BudgetExhausted;
            return finalize(node, self, start);
        }

        // Step 1: hand the goal to the backend as-is.
        let t0 = Instant::now();
        let remaining = deadline.saturating_duration_since(Instant::now());
        let budget = self.config.initial_check_timeout.min(remaining.max(Duration::from_millis(1)));
        let (direct, solver) = self.initial_check(task, budget, cancel);
        node.timing.initial_check = t0.elapsed().as_secs_f64();
        if direct {
            node.status = Status::ProvedDirect;
            node.solver = solver;
            return finalize(node, self, start);
        }
        if cancel.load(Ordering::SeqCst) || Instant::now() >= deadline {
            node.status = Status::BudgetExhausted;
            return finalize(node, self, start);
        }

        // Step 2: the depth bound.
        if depth >= self.config.max_depth {
            node.status = Status::Failed;
            return finalize(node, self, start);
        }

        // Step 3: strategy × iteration attempts.
        ancestors.push(goal_key.clone());
        for strategy in self.config.prompt_pool.clone() {
            for iteration in 0..self.config.max_iter_number {
                if Instant::now() >= deadline || cancel.load(Ordering::SeqCst) {
                    node.status = Status::BudgetExhausted;
                    ancestors.pop();
                    return finalize(node, self, start);
                }
                let (ok, conjectures, record) = self.prove(
                    task, strategy, iteration, depth, deadline, cancel, &mut node.timing,
                );
                self.trace_event(serde_json::json!({
                    "event": "attempt", "depth": depth, "strategy": strategy.id(),
                    "iteration": iteration, "outcome": record.outcome,
                }));
                node.attempts.push(record);
                if !ok {
                    continue;
                }

                // Circular-lemma guard: a conjecture equal to an ancestor's
                // goal would prove itself through the recursion.
                if conjectures
                    .iter()
                    .any(|c| ancestors.contains(&alpha_normalize(&c.formula)))
                {
                    node.attempts.last_mut().unwrap().outcome =
                        String::from("rejected: conjecture restates an ancestor goal");
                    continue;
                }

                // Step 4: discharge each conjecture as its own sub-goal.
                let t0 = Instant::now();
                let children =
                    self.prove_children(task, &conjectures, depth, deadline, cancel, ancestors);
                node.timing.subgoal += t0.elapsed().as_secs_f64();
                match children {
                    Some(children) => {
                        node.lemmas =
                            conjectures.iter().map(|c| term_to_smt2(&c.formula)).collect();
                        node.children = children;
                        node.status = Status::ProvedWithLemmas;
                        ancestors.pop();
                        return finalize(node, self, start);
                    }
                    None => continue,
                }
            }
        }
        ancestors.pop();
        node.status = if Instant::now() >= deadline || cancel.load(Ordering::SeqCst) {
            Status::BudgetExhausted
        } else {
            Status::Failed
        };
        finalize(node, self, start)
    }

    /// Prove every conjecture as a sub-goal, at most `subgoal_parallelism`
    /// concurrently. Returns the closed children in conjecture order, or None
    /// if any child failed (remaining siblings are cancelled cooperatively).
    fn prove_children(
        &self,
        task: &Task,
        conjectures: &[Conjecture],
        depth: u32,
        deadline: Instant,
        cancel: &AtomicBool,
        ancestors: &[Term],
    ) -> Option<Vec<ProofNode>> {
        if conjectures.is_empty() {
            return Some(Vec::new());
        }
        let attempt_cancel = AtomicBool::new(false);
        let next = std::sync::atomic::AtomicUsize::new(0);
        let slots: Vec<Mutex<Option<ProofNode>>> =
            conjectures.iter().map(|_| Mutex::new(None)).collect();
        let workers = self.config.subgoal_parallelism.min(conjectures.len()).max(1);
        std::thread::scope(|scope| {
            for _ in 0..workers {
                scope.spawn(|| loop {
                    let i = next.fetch_add(1, Ordering::SeqCst);
                    if i >= conjectures.len() {
                        break;
                    }
                    // Outer cancellation (tree-wide) also stops this attempt.
                    if cancel.load(Ordering::SeqCst) {
                        attempt_cancel.store(true, Ordering::SeqCst);
                    }
                    if attempt_cancel.load(Ordering::SeqCst) {
                        break;
                    }
                    let sub = match build_subgoal_task(task, &conjectures[i].formula) {
                        Ok(sub) => sub,
                        // Extraction already sort-checked the conjecture, so
                        // this is unreachable in practice; fail the attempt.
                        Err(_) => {
                            attempt_cancel.store(true, Ordering::SeqCst);
                            break;
                        }
                    };
                    let mut lineage = ancestors.to_vec();
                    let child =
                        self.prove_run(&sub, depth + 1, deadline, &attempt_cancel, &mut lineage);
                    if !child.status.is_proved() {
                        attempt_cancel.store(true, Ordering::SeqCst);
                    }
                    *slots[i].lock().unwrap() = Some(child);
                });
            }
        });
        let mut children = Vec::with_capacity(conjectures.len());
        for slot in slots {
            match slot.into_inner().unwrap() {
                Some(node) if node.status.is_proved() => children.push(node),
                _ => return None,
            }
        }
        Some(children)
    }
}

/// Serialize an outcome as a pretty-printed JSON certificate.
pub fn emit_certificate(outcome: &ProofOutcome) -> String {
    serde_json::to_string_pretty(outcome).expect("outcome serializes")
}

#[derive(Debug, thiserror::Error)]
pub enum CertificateError {
    #[error("certificate is not valid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("node at depth {depth}: {message}")]
    Node { depth: u32, message: String },
}

/// Independently re-verify a certificate: every proved node's obligation
/// (axioms, negated goal, recorded lemmas) must re-solve Unsat, and a node
/// proved with lemmas must have one closed child per lemma.
pub fn check_certificate(
    certificate: &str,
    portfolio: &[SolverConfig],
    timeout: Duration,
) -> Result<(), CertificateError> {
    let outcome: ProofOutcome = serde_json::from_str(certificate)?;
    if outcome.proved != outcome.root.status.is_proved() {
        return Err(CertificateError::Node {
            depth: 0,
            message: String::from("proved flag contradicts root status"),
        });
    }
    check_node(&outcome.root, portfolio, timeout)
}

fn check_node(
    node: &ProofNode,
    portfolio: &[SolverConfig],
    timeout: Duration,
) -> Result<(), CertificateError> {
    let fail = |message: String| CertificateError::Node { depth: node.depth, message };
    if !node.status.is_proved() {
        return Ok(());
    }
    let task = parse_script(&node.goal_smt2, None)
        .map_err(|e| fail(format!("goal script does not parse: {e}")))?;
    let sig = Signature::from_task(&task);
    let lemmas: Vec<Term> = node
        .lemmas
        .iter()
        .map(|l| parse_formula(l, &sig))
        .collect::<Result<_, _>>()
        .map_err(|e| fail(format!("lemma does not parse: {e}")))?;
    if node.status == Status::ProvedWithLemmas {
        if node.children.len() != node.lemmas.len() {
            return Err(fail(format!(
                "{} lemmas but {} children",
                node.lemmas.len(),
                node.children.len()
            )));
        }
        for (lemma, child) in lemmas.iter().zip(&node.children) {
            if !child.status.is_proved() {
                return Err(fail(String::from("child of a proved node is not proved")));
            }
            let child_task = parse_script(&child.goal_smt2, None)
                .map_err(|e| fail(format!("child goal does not parse: {e}")))?;
            if alpha_normalize(&child_task.goal) != alpha_normalize(lemma) {
                return Err(fail(String::from("child goal does not match its lemma")));
            }
        }
    } else if !node.lemmas.is_empty() || !node.children.is_empty() {
        return Err(fail(String::from("directly proved node must have no lemmas")));
    }
    let script = build_proof_obligation(&task, &lemmas)
        .map_err(|e| fail(format!("obligation rebuild failed: {e}")))?;
    match run_portfolio_cancellable(&script, portfolio, timeout, &AtomicBool::new(false)) {
        Ok(v) if v.outcome == Verdict::Unsat => {}
        Ok(v) => return Err(fail(format!("obligation re-check returned {:?}", v.outcome))),
        Err(e) => return Err(fail(format!("obligation re-check failed: {e}"))),
    }
    for child in &node.children {
        check_node(child, portfolio, timeout)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::llm::{Mode, ModelConfig, TranscriptStore};
    use std::path::PathBuf;

    fn nat_task() -> Task {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/fixtures/tasks/nat-mult-comm.smt2"
        ))
        .unwrap();
        parse_script(&text, Some("nat-mult-comm.smt2")).unwrap()
    }

    fn sh(name: &str, script: &str) -> SolverConfig {
        SolverConfig {
            name: name.to_string(),
            executable: PathBuf::from("/bin/sh"),
            args: vec!["-c".into(), script.to_string()],
            input_via: crate::solver::InputVia::FileArg,
        }
    }

    fn replay_client(dir: &std::path::Path) -> LlmClient {
        let config = ModelConfig { mode: Mode::Replay, ..ModelConfig::default() };
        LlmClient::new(config, Some(TranscriptStore::new(dir)))
    }

    fn quick_config() -> EngineConfig {
        EngineConfig {
            initial_check_timeout: Duration::from_secs(5),
            verify_timeout: Duration::from_secs(5),
            filter_timeout: Duration::from_secs(2),
            ..EngineConfig::default()
        }
    }

    #[test]
    fn directly_provable_task_uses_zero_queries() {
        let dir = tempfile::tempdir().unwrap();
        let engine = Engine::new(
            quick_config(),
            vec![sh("always-unsat", "echo unsat")],
            sh("filter", "echo sat"),
            replay_client(dir.path()),
        );
        let outcome = engine.run(&nat_task());
        assert!(outcome.proved);
        assert_eq!(outcome.root.status, Status::ProvedDirect);
        assert_eq!(outcome.root.solver.as_deref(), Some("always-unsat"));
        assert_eq!(engine.total_queries(), 0);
        assert_eq!(outcome.tokens.total(), 0);
        assert!(outcome.root.children.is_empty());
    }

    #[test]
    fn exhausted_attempts_fail_with_full_attempt_log() {
        // Empty replay store: every query is a miss, counted as a failed
        // attempt; 2 strategies x 3 iterations = 6 attempts.
        let dir = tempfile::tempdir().unwrap();
        let engine = Engine::new(
            quick_config(),
            vec![sh("never", "echo unknown")],
            sh("filter", "echo sat"),
            replay_client(dir.path()),
        );
        let outcome = engine.run(&nat_task());
        assert!(!outcome.proved);
        assert_eq!(outcome.root.status, Status::Failed);
        assert_eq!(outcome.root.attempts.len(), 6);
        assert_eq!(engine.total_queries(), 6);
        assert!(outcome.root.attempts.iter().all(|a| a.outcome.contains("query failed")));
    }

    #[test]
    fn depth_bound_stops_before_querying() {
        let dir = tempfile::tempdir().unwrap();
        let config = EngineConfig { max_depth: 0, ..quick_config() };
        let engine = Engine::new(
            config,
            vec![sh("never", "echo unknown")],
            sh("filter", "echo sat"),
            replay_client(dir.path()),
        );
        let outcome = engine.run(&nat_task());
        assert!(!outcome.proved);
        assert_eq!(outcome.root.status, Status::Failed);
        assert_eq!(engine.total_queries(), 0);
    }

    #[test]
    fn expired_budget_reports_budget_exhausted() {
        let dir = tempfile::tempdir().unwrap();
        let config = EngineConfig {
            task_time_limit: Duration::from_millis(50),
            ..quick_config()
        };
        let engine = Engine::new(
            config,
            vec![sh("slow", "sleep 30; echo unknown")],
            sh("filter", "echo sat"),
            replay_client(dir.path()),
        );
        let start = Instant::now();
        let outcome = engine.run(&nat_task());
        assert!(!outcome.proved);
        assert_eq!(outcome.root.status, Status::BudgetExhausted);
        assert!(start.elapsed() < Duration::from_secs(10));
    }

    #[test]
    fn verified_conjectures_spawn_subgoals_and_close_the_tree() {
        // Portfolio always answers unsat but the *first* initial check is
        // forced to miss by making the root check race a sat... simpler: a
        // stateful sh solver: report unsat only when the script asserts the
        // recorded conjecture (grep for succ pattern below).
        let dir = tempfile::tempdir().unwrap();
        let store = TranscriptStore::new(dir.path());
        let model = ModelConfig { mode: Mode::Replay, ..ModelConfig::default() };
        let task = nat_task();
        let labeled = preprocess_label(&task);
        let prompt = render_prompt(PromptStrategy::Strategy1EquationalReasoning, &labeled);
        let conj = "(forall ((x Nat) (y Nat)) (= (plus (mult y x) y) (mult y (succ x))))";
        store
            .record_manual(&prompt, &model, 0, &format!("```\n{conj}\n```"), TokenUsage {
                prompt_tokens: 100,
                completion_tokens: 50,
            })
            .unwrap();
        // Deterministic discriminator: the root obligation alone (5 asserts)
        // stays unknown; adding the conjecture makes 6 asserts (verify), and
        // the sub-goal obligation is recognizable by the conjecture's
        // right-hand side, which appears nowhere in the root task.
        let solver = sh(
            "counting",
            "if [ $(grep -c '(assert' \"$1\") -ge 6 ] || grep -qF 'mult y (succ x)' \"$1\"; \
             then echo unsat; else echo unknown; fi",
        );
        // sh -c needs the extra arg shift: $0 is consumed by the inline name.
        let solver = SolverConfig {
            args: vec!["-c".into(), solver.args[1].clone(), "inline".into()],
            ..solver
        };
        let engine = Engine::new(
            quick_config(),
            vec![solver],
            sh("filter", "echo sat"),
            LlmClient::new(model, Some(TranscriptStore::new(dir.path()))),
        );
        let outcome = engine.run(&task);
        assert!(outcome.proved, "root: {:?}", outcome.root);
        assert_eq!(outcome.root.status, Status::ProvedWithLemmas);
        assert_eq!(outcome.root.lemmas.len(), 1);
        assert_eq!(outcome.root.children.len(), 1);
        assert!(outcome.root.children[0].status.is_proved());
        assert_eq!(outcome.tokens.total(), 150);
        assert_eq!(engine.total_queries(), 1);
    }

    #[test]
    fn certificate_round_trip_and_tamper_detection() {
        let dir = tempfile::tempdir().unwrap();
        let engine = Engine::new(
            quick_config(),
            vec![sh("always-unsat", "echo unsat")],
            sh("filter", "echo sat"),
            replay_client(dir.path()),
        );
        let outcome = engine.run(&nat_task());
        let cert = emit_certificate(&outcome);
        check_certificate(&cert, &[sh("always-unsat", "echo unsat")], Duration::from_secs(5))
            .unwrap();
        // A checker whose backend can't re-prove the node must reject.
        let err = check_certificate(&cert, &[sh("weak", "echo unknown")], Duration::from_secs(5));
        assert!(err.is_err());
        // Tampering with the recorded goal must be caught.
        let tampered = cert.replace("mult", "plus");
        assert_ne!(tampered, cert);
        let err = check_certificate(&tampered, &[sh("always-unsat", "echo unsat")],
            Duration::from_secs(5));
        // Either the script no longer parses or the semantics changed; both
        // must surface as an error when the backend is honest.
        assert!(err.is_err() || tampered == cert);
    }

    #[test]
    fn memo_table_shares_alpha_equal_goals() {
        let dir = tempfile::tempdir().unwrap();
        let engine = Engine::new(
            quick_config(),
            vec![sh("always-unsat", "echo unsat")],
            sh("filter", "echo sat"),
            replay_client(dir.path()),
        );
        let task = nat_task();
        let first = engine.run(&task);
        assert_eq!(first.root.status, Status::ProvedDirect);
        // Same goal again: served from the memo table.
        let again = engine.prove_run(
            &task,
            0,
            Instant::now() + Duration::from_secs(5),
            &AtomicBool::new(false),
            &mut Vec::new(),
        );
        assert_eq!(again.status, Status::ProvedDirect);
    }

    #[test]
    fn trace_emits_line_delimited_json() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("trace.ldjson");
        let sink = std::fs::File::create(&path).unwrap();
        let engine = Engine::new(
            quick_config(),
            vec![sh("always-unsat", "echo unsat")],
            sh("filter", "echo sat"),
            replay_client(dir.path()),
        )
        .with_trace(Box::new(sink));
        let _ = engine.run(&nat_task());
        let text = std::fs::read_to_string(&path).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert!(lines.len() >= 2);
        for line in lines {
            let v: serde_json::Value = serde_json::from_str(line).unwrap();
            assert!(v.get("event").is_some());
        }
    }
}
