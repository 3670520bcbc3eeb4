//! Language-model client: prompt rendering, chat-completion queries with a
//! record/replay transcript store, and conjecture extraction from free text.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::smt::{alpha_normalize, parse_formula, LabeledScript, Signature, Task, Term};

pub const INPUT_FILE_PLACEHOLDER: &str = "{ Input SMTLIB2 file }";

/// Default cap on conjectures taken from one response; the templates say
/// "at most 3 is recommended" and anything past that is treated as noise.
pub const DEFAULT_CONJECTURE_CAP: usize = 3;

const STRATEGY1_TEMPLATE: &str = r#"[Task Description]

You are an expert in constraint solving, inductive reasoning, and functional program verification.
You are good at extracting information from SMTLIB2 files, reasoning about them, and generating necessary conjectures as auxiliary lemmas to help SMT solvers complete automatic proofs.
- Input format:
The input is an SMTLIB2 file. It contains: datatypes, function definitions, and the proof goal, each marked with ";" comments.

[Chain-of-Thought]

Please generate auxiliary lemmas using inductive equational reasoning step by step:
1) Identify the proof goal and list relevant axioms.
2) Assume the SMT solver already knows the induction scheme; you need to generate auxiliary lemmas to help the inductive reasoning.
3) Inductive proof setup:
   - Determine whether the base case requires auxiliary lemmas.
   - Derive the inductive case using equational reasoning.
4) Equational reasoning:
   - Transform the left-hand side of the property step by step, annotating axiom/hypothesis usage.
   - When a step cannot be derived, generate it as a conjecture, annotated as "unknown conjecture", which will be checked by SMT solvers to ensure it is an auxiliary lemma.

[Output Format]

- Please output all the "unknown conjectures" you discover through equational reasoning, but do not generate too many conjectures (at most 3 is recommended).
- Do not generate conjectures that are identical to the original property.
- Output each "unknown conjecture" in SMTLIB2 format on a single line.

[Input file]

{ Input SMTLIB2 file }
"#;

const STRATEGY2_TEMPLATE: &str = r#"[Task Description]

You are an expert in constraint solving, inductive reasoning, and functional program verification.
You are good at extracting information from SMTLIB2 files, reasoning about them, and generating necessary conjectures as auxiliary lemmas to help SMT solvers complete automatic proofs.
- Input format:
The input is an SMTLIB2 file. It contains: datatypes, function definitions, and the proof goal, each marked with ";" comments.

[Chain-of-Thought]

Please generate auxiliary lemmas using the following ideas:
1) Generate basic axioms to help the SMT solver simplify the proof goal.
2) Strengthen the proof goal, e.g., to prove the proof goal P under axioms A, find a stronger conclusion Q, such that A => Q and Q => P hold, and both are easier to prove than A => P.
3) Based on term rewriting to simplify the proof goal:
   - Try to find the pattern term of the proof goal, and rewrite it to a simpler form.
   - If no common term exists, try to rewrite terms in the proof goal using axioms to have a common term.
   - If you think the auxiliary lemma derived from the term rewriting is not sufficient, generate a new auxiliary lemma that bridges it to the proof goal.
4) Identify the conjectures from the above chain of thought, annotated as "unknown conjectures", which will be checked by SMT solvers to ensure they are auxiliary lemmas.

[Output Format]

- Please output all the "unknown conjectures" you discovered through reasoning, but do not generate too many conjectures (at most 3 is recommended).
- Do not generate conjectures that are identical to the proof goal.
- Output each "unknown conjecture" in SMTLIB2 format on a single line.

[Input file]

{ Input SMTLIB2 file }
"#;

const NAIVE_TEMPLATE: &str = r#"You are an expert in constraint solving, inductive reasoning, and functional program verification.
Please generate auxiliary lemmas in SMTLIB2 format to add to the following file, which can help the solver verify the property.

  { Input SMTLIB2 file }
"#;

/// The fixed prompt pool: two designed strategies plus the naive baseline.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PromptStrategy {
    /// Step-by-step inductive equational reasoning.
    Strategy1EquationalReasoning,
    /// Term rewriting and goal generalization.
    Strategy2TermRewritingGeneralization,
    /// Bare "generate auxiliary lemmas" request (baseline).
    Naive,
}

impl PromptStrategy {
    pub fn id(&self) -> &'static str {
        match self {
            PromptStrategy::Strategy1EquationalReasoning => "strategy1",
            PromptStrategy::Strategy2TermRewritingGeneralization => "strategy2",
            PromptStrategy::Naive => "naive",
        }
    }

    pub fn template(&self) -> &'static str {
        match self {
            PromptStrategy::Strategy1EquationalReasoning => STRATEGY1_TEMPLATE,
            PromptStrategy::Strategy2TermRewritingGeneralization => STRATEGY2_TEMPLATE,
            PromptStrategy::Naive => NAIVE_TEMPLATE,
        }
    }

    pub fn parse(s: &str) -> Option<PromptStrategy> {
        match s.trim() {
            "strategy1" => Some(PromptStrategy::Strategy1EquationalReasoning),
            "strategy2" => Some(PromptStrategy::Strategy2TermRewritingGeneralization),
            "naive" => Some(PromptStrategy::Naive),
            _ => None,
        }
    }

    /// The default pool: the two designed strategies, tried in order.
    pub fn default_pool() -> Vec<PromptStrategy> {
        vec![
            PromptStrategy::Strategy1EquationalReasoning,
            PromptStrategy::Strategy2TermRewritingGeneralization,
        ]
    }
}

impl std::fmt::Display for PromptStrategy {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.id())
    }
}

/// Substitute the labeled task text at the template's input-file placeholder.
/// Byte-stable: identical inputs always render identical prompts.
pub fn render_prompt(strategy: PromptStrategy, labeled: &LabeledScript) -> String {
    let template = strategy.template();
    debug_assert_eq!(template.matches(INPUT_FILE_PLACEHOLDER).count(), 1);
    template.replacen(INPUT_FILE_PLACEHOLDER, labeled.full_text.trim_end(), 1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Query the provider directly.
    Live,
    /// Query the provider and persist every exchange as a transcript.
    Record,
    /// Serve responses from recorded transcripts; an unknown key is an error.
    Replay,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModelConfig {
    pub endpoint: String,
    pub model: String,
    pub temperature: f64,
    pub top_p: f64,
    pub max_output_tokens: u32,
    /// Name of the environment variable holding the API key.
    pub api_key_env: String,
    pub mode: Mode,
    /// Live-mode request rate cap; None disables throttling.
    pub requests_per_minute: Option<u32>,
}

impl Default for ModelConfig {
    fn default() -> Self {
        ModelConfig {
            endpoint: String::from("https://api.openai.com/v1/chat/completions"),
            model: String::from("gpt-4o"),
            temperature: 0.9,
            top_p: 0.9,
            max_output_tokens: 4096,
            api_key_env: String::from("LLM_API_KEY"),
            mode: Mode::Replay,
            requests_per_minute: None,
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TokenUsage {
    pub prompt_tokens: u64,
    pub completion_tokens: u64,
}

impl TokenUsage {
    pub fn total(&self) -> u64 {
        self.prompt_tokens + self.completion_tokens
    }

    pub fn add(&mut self, other: TokenUsage) {
        self.prompt_tokens += other.prompt_tokens;
        self.completion_tokens += other.completion_tokens;
    }
}

/// One recorded exchange. The key is a content hash of everything that
/// determines the request, so replay can only ever serve an exact match.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Transcript {
    pub key: String,
    pub prompt_hash: String,
    pub model: String,
    pub temperature: f64,
    pub top_p: f64,
    pub iteration: u32,
    pub response: String,
    pub usage: TokenUsage,
}

/// Content hash of (rendered prompt, model name, temperature, top-p,
/// iteration index). Length-prefixed fields keep the encoding unambiguous.
pub fn transcript_key(
    prompt: &str,
    model: &str,
    temperature: f64,
    top_p: f64,
    iteration: u32,
) -> String {
    let mut h = Sha256::new();
    for field in [
        prompt,
        model,
        &format!("{temperature:?}"),
        &format!("{top_p:?}"),
        &iteration.to_string(),
    ] {
        h.update(field.len().to_le_bytes());
        h.update(field.as_bytes());
    }
    hex::encode(h.finalize())
}

fn prompt_hash(prompt: &str) -> String {
    hex::encode(Sha256::digest(prompt.as_bytes()))
}

/// Directory of transcripts, one JSON file per exchange (filename = key).
#[derive(Debug, Clone)]
pub struct TranscriptStore {
    dir: PathBuf,
}

impl TranscriptStore {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        TranscriptStore { dir: dir.into() }
    }

    pub fn dir(&self) -> &Path {
        &self.dir
    }

    fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.json"))
    }

    pub fn load(&self, key: &str) -> Result<Option<Transcript>, LlmError> {
        let path = self.path_for(key);
        if !path.exists() {
            return Ok(None);
        }
        let text = std::fs::read_to_string(&path)?;
        let t: Transcript = serde_json::from_str(&text)
            .map_err(|e| LlmError::Provider(format!("corrupt transcript {}: {e}", path.display())))?;
        if t.key != key {
            return Err(LlmError::Provider(format!(
                "transcript {} declares key {}, expected {key}",
                path.display(),
                t.key
            )));
        }
        Ok(Some(t))
    }

    pub fn save(&self, t: &Transcript) -> Result<(), LlmError> {
        std::fs::create_dir_all(&self.dir)?;
        let path = self.path_for(&t.key);
        let json = serde_json::to_string_pretty(t).expect("transcript serializes");
        std::fs::write(path, json)?;
        Ok(())
    }

    /// Record an exchange without talking to a provider — used to seed replay
    /// stores for tests and fixtures.
    pub fn record_manual(
        &self,
        prompt: &str,
        config: &ModelConfig,
        iteration: u32,
        response: &str,
        usage: TokenUsage,
    ) -> Result<String, LlmError> {
        let key =
            transcript_key(prompt, &config.model, config.temperature, config.top_p, iteration);
        self.save(&Transcript {
            key: key.clone(),
            prompt_hash: prompt_hash(prompt),
            model: config.model.clone(),
            temperature: config.temperature,
            top_p: config.top_p,
            iteration,
            response: response.to_string(),
            usage,
        })?;
        Ok(key)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum LlmError {
    #[error("provider error: {0}")]
    Provider(String),
    #[error("no transcript recorded for key {key} (replay mode refuses to fall back to live)")]
    ReplayMiss { key: String },
    #[error("API key environment variable {0} is not set")]
    MissingApiKey(String),
    #[error("transcript i/o error: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Serialize)]
struct ChatRequest<'a> {
    model: &'a str,
    messages: [ChatMessage<'a>; 1],
    temperature: f64,
    top_p: f64,
    max_tokens: u32,
}

#[derive(Serialize)]
struct ChatMessage<'a> {
    role: &'a str,
    content: &'a str,
}

#[derive(Deserialize)]
struct ChatResponse {
    choices: Vec<ChatChoice>,
    #[serde(default)]
    usage: Option<ChatUsage>,
}

#[derive(Deserialize)]
struct ChatChoice {
    message: ChatResponseMessage,
}

#[derive(Deserialize)]
struct ChatResponseMessage {
    content: String,
}

#[derive(Deserialize)]
struct ChatUsage {
    #[serde(default)]
    prompt_tokens: u64,
    #[serde(default)]
    completion_tokens: u64,
}

/// Blocking chat-completion client. Safe to share across proof workers; Live
/// requests are serialized through the rate limiter.
pub struct LlmClient {
    pub config: ModelConfig,
    store: Option<TranscriptStore>,
    http: reqwest::blocking::Client,
    /// Earliest instant the next Live request may start.
    next_request_at: Mutex<Instant>,
}

impl LlmClient {
    pub fn new(config: ModelConfig, transcripts: Option<TranscriptStore>) -> Self {
        LlmClient {
            config,
            store: transcripts,
            http: reqwest::blocking::Client::builder()
                .timeout(Duration::from_secs(300))
                .build()
                .expect("http client"),
            next_request_at: Mutex::new(Instant::now()),
        }
    }

    /// One single-shot query. `iteration` distinguishes repeated queries with
    /// the same prompt so each replays its own recorded response.
    pub fn query(&self, prompt: &str, iteration: u32) -> Result<(String, TokenUsage), LlmError> {
        let key = transcript_key(
            prompt,
            &self.config.model,
            self.config.temperature,
            self.config.top_p,
            iteration,
        );
        match self.config.mode {
            Mode::Replay => {
                let store = self.store.as_ref().ok_or_else(|| {
                    LlmError::Provider(String::from("replay mode needs a transcript directory"))
                })?;
                match store.load(&key)? {
                    Some(t) => Ok((t.response, t.usage)),
                    None => Err(LlmError::ReplayMiss { key }),
                }
            }
            Mode::Live => self.query_live(prompt),
            Mode::Record => {
                let (response, usage) = self.query_live(prompt)?;
                let store = self.store.as_ref().ok_or_else(|| {
                    LlmError::Provider(String::from("record mode needs a transcript directory"))
                })?;
                store.save(&Transcript {
                    key,
                    prompt_hash: prompt_hash(prompt),
                    model: self.config.model.clone(),
                    temperature: self.config.temperature,
                    top_p: self.config.top_p,
                    iteration,
                    response: response.clone(),
                    usage,
                })?;
                Ok((response, usage))
            }
        }
    }

    fn throttle(&self) {
        let Some(rpm) = self.config.requests_per_minute else { return };
        if rpm == 0 {
            return;
        }
        let interval = Duration::from_secs_f64(60.0 / f64::from(rpm));
        let mut next = self.next_request_at.lock().unwrap();
        let now = Instant::now();
        if *next > now {
            std::thread::sleep(*next - now);
        }
        *next = Instant::now() + interval;
    }

    fn query_live(&self, prompt: &str) -> Result<(String, TokenUsage), LlmError> {
        let api_key = std::env::var(&self.config.api_key_env)
            .map_err(|_| LlmError::MissingApiKey(self.config.api_key_env.clone()))?;
        let body = ChatRequest {
            model: &self.config.model,
            messages: [ChatMessage { role: "user", content: prompt }],
            temperature: self.config.temperature,
            top_p: self.config.top_p,
            max_tokens: self.config.max_output_tokens,
        };
        let mut last_err = String::new();
        for attempt in 0..3 {
            if attempt > 0 {
                std::thread::sleep(Duration::from_secs(1 << attempt));
            }
            self.throttle();
            let sent = self
                .http
                .post(&self.config.endpoint)
                .bearer_auth(&api_key)
                .json(&body)
                .send();
            let resp = match sent {
                Ok(r) => r,
                Err(e) => {
                    last_err = format!("transport failure: {e}");
                    continue;
                }
            };
            let status = resp.status();
            if status.is_server_error() || status.as_u16() == 429 {
                last_err = format!("retriable status {status}");
                continue;
            }
            if !status.is_success() {
                let text = resp.text().unwrap_or_default();
                return Err(LlmError::Provider(format!("status {status}: {text}")));
            }
            let parsed: ChatResponse = resp
                .json()
                .map_err(|e| LlmError::Provider(format!("malformed completion: {e}")))?;
            let content = parsed
                .choices
                .into_iter()
                .next()
                .map(|c| c.message.content)
                .ok_or_else(|| LlmError::Provider(String::from("completion has no choices")))?;
            let usage = parsed.usage.map_or(TokenUsage::default(), |u| TokenUsage {
                prompt_tokens: u.prompt_tokens,
                completion_tokens: u.completion_tokens,
            });
            return Ok((content, usage));
        }
        Err(LlmError::Provider(last_err))
    }
}

/// Where in the proof search a conjecture came from.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Provenance {
    pub strategy: PromptStrategy,
    pub iteration: u32,
    pub depth: u32,
    pub model: String,
}

#[derive(Debug, Clone)]
pub struct Conjecture {
    /// Closed, well-sorted against the originating task's signature.
    pub formula: Term,
    /// The response line it was extracted from.
    pub raw_text: String,
    pub provenance: Provenance,
    pub tokens: TokenUsage,
}

/// Result of scanning one response: parsed conjectures plus diagnostics for
/// the lines that looked like formulas but didn't check out.
#[derive(Debug, Default)]
pub struct Extraction {
    pub formulas: Vec<(Term, String)>,
    pub diagnostics: Vec<String>,
}

/// Scan a free-text response for conjecture formulas: fenced code blocks
/// first, then any other line holding a `(forall ...)` or `(assert ...)`
/// s-expression. Candidates are sort-checked against the task signature,
/// deduplicated up to renaming of bound variables, and capped.
pub fn extract_conjectures(raw: &str, task: &Task, cap: usize) -> Extraction {
    assert!(cap >= 1, "cap must be at least 1");
    let sig = Signature::from_task(task);
    let mut out = Extraction::default();
    let mut seen: HashSet<Term> = HashSet::new();

    let (fenced, plain) = split_code_blocks(raw);
    let candidates = fenced.into_iter().chain(plain);
    for line in candidates {
        if out.formulas.len() >= cap {
            break;
        }
        let Some(snippet) = candidate_snippet(&line) else { continue };
        let body = strip_assert(snippet).unwrap_or(snippet);
        match parse_formula(body, &sig) {
            Ok(f) => {
                if !f.is_closed() {
                    out.diagnostics.push(format!("open formula skipped: {line}"));
                    continue;
                }
                let canon = alpha_normalize(&f);
                if seen.insert(canon) {
                    out.formulas.push((f, line.to_string()));
                }
            }
            Err(e) => out.diagnostics.push(format!("unparsable candidate: {line} ({e})")),
        }
    }
    out
}

/// Split a response into lines inside fenced ``` blocks and the rest, each in
/// appearance order.
fn split_code_blocks(raw: &str) -> (Vec<String>, Vec<String>) {
    let mut fenced = Vec::new();
    let mut plain = Vec::new();
    let mut in_fence = false;
    for line in raw.lines() {
        if line.trim_start().starts_with("```") {
            in_fence = !in_fence;
            continue;
        }
        if in_fence {
            fenced.push(line.to_string());
        } else {
            plain.push(line.to_string());
        }
    }
    (fenced, plain)
}

/// Pick the formula-shaped part of a line: the line itself if it starts with
/// `(`, otherwise the tail from the first `(forall` / `(assert` / `(exists`,
/// so "1. (forall ...)" style listings still extract.
fn candidate_snippet(line: &str) -> Option<&str> {
    let trimmed = line.trim();
    if trimmed.is_empty() {
        return None;
    }
    if trimmed.starts_with('(') {
        return Some(trimmed);
    }
    for marker in ["(forall", "(assert", "(exists"] {
        if let Some(idx) = trimmed.find(marker) {
            return Some(trimmed[idx..].trim_end());
        }
    }
    None
}

/// Strip one outer `(assert ...)` wrapper, if present.
fn strip_assert(snippet: &str) -> Option<&str> {
    let inner = snippet.trim().strip_prefix("(assert")?;
    let inner = inner.strip_suffix(')')?;
    Some(inner.trim())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::{parse_script, preprocess_label};

    fn nat_task() -> Task {
        let text = std::fs::read_to_string(concat!(
            env!("CARGO_MANIFEST_DIR"),
            "/fixtures/tasks/nat-mult-comm.smt2"
        ))
        .unwrap();
        parse_script(&text, Some("nat-mult-comm.smt2")).unwrap()
    }

    #[test]
    fn templates_have_exactly_one_placeholder() {
        for s in [
            PromptStrategy::Strategy1EquationalReasoning,
            PromptStrategy::Strategy2TermRewritingGeneralization,
            PromptStrategy::Naive,
        ] {
            assert_eq!(s.template().matches(INPUT_FILE_PLACEHOLDER).count(), 1, "{s}");
        }
    }

    #[test]
    fn strategy_templates_have_all_sections() {
        for s in [
            PromptStrategy::Strategy1EquationalReasoning,
            PromptStrategy::Strategy2TermRewritingGeneralization,
        ] {
            let t = s.template();
            for section in ["[Task Description]", "[Chain-of-Thought]", "[Output Format]", "[Input file]"] {
                assert!(t.contains(section), "{s} missing {section}");
            }
            assert!(t.contains("at most 3 is recommended"));
        }
        assert!(PromptStrategy::Naive
            .template()
            .contains("generate auxiliary lemmas in SMTLIB2 format"));
    }

    #[test]
    fn render_is_idempotent_and_inlines_the_file() {
        let task = nat_task();
        let labeled = preprocess_label(&task);
        let a = render_prompt(PromptStrategy::Strategy1EquationalReasoning, &labeled);
        let b = render_prompt(PromptStrategy::Strategy1EquationalReasoning, &labeled);
        assert_eq!(a, b);
        assert!(a.contains("unknown conjecture"));
        assert!(a.contains("declare-datatypes"));
        assert!(!a.contains(INPUT_FILE_PLACEHOLDER));
    }

    #[test]
    fn transcript_key_depends_on_every_field() {
        let base = transcript_key("p", "m", 0.9, 0.9, 0);
        assert_ne!(base, transcript_key("q", "m", 0.9, 0.9, 0));
        assert_ne!(base, transcript_key("p", "n", 0.9, 0.9, 0));
        assert_ne!(base, transcript_key("p", "m", 0.8, 0.9, 0));
        assert_ne!(base, transcript_key("p", "m", 0.9, 0.8, 0));
        assert_ne!(base, transcript_key("p", "m", 0.9, 0.9, 1));
        assert_eq!(base, transcript_key("p", "m", 0.9, 0.9, 0));
    }

    #[test]
    fn record_then_replay_round_trips() {
        let dir = tempfile::tempdir().unwrap();
        let store = TranscriptStore::new(dir.path());
        let config = ModelConfig { mode: Mode::Replay, ..ModelConfig::default() };
        let usage = TokenUsage { prompt_tokens: 10, completion_tokens: 20 };
        store.record_manual("hello", &config, 2, "the response\nline 2", usage).unwrap();
        let client = LlmClient::new(config, Some(TranscriptStore::new(dir.path())));
        let (resp, u) = client.query("hello", 2).unwrap();
        assert_eq!(resp, "the response\nline 2");
        assert_eq!(u, usage);
    }

    #[test]
    fn replay_miss_is_loud() {
        let dir = tempfile::tempdir().unwrap();
        let config = ModelConfig { mode: Mode::Replay, ..ModelConfig::default() };
        let client = LlmClient::new(config, Some(TranscriptStore::new(dir.path())));
        assert!(matches!(client.query("never recorded", 0), Err(LlmError::ReplayMiss { .. })));
        // Same prompt, different iteration, also a miss even after recording.
        let store = TranscriptStore::new(dir.path());
        store
            .record_manual("never recorded", &ModelConfig::default(), 1, "x", TokenUsage::default())
            .unwrap();
        assert!(matches!(client.query("never recorded", 0), Err(LlmError::ReplayMiss { .. })));
        assert!(client.query("never recorded", 1).is_ok());
    }

    #[test]
    fn live_mode_without_key_fails_fast() {
        let config = ModelConfig {
            mode: Mode::Live,
            api_key_env: String::from("ADT_PROVER_TEST_UNSET_KEY_VAR"),
            ..ModelConfig::default()
        };
        let client = LlmClient::new(config, None);
        assert!(matches!(client.query("p", 0), Err(LlmError::MissingApiKey(_))));
    }

    #[test]
    fn extracts_forall_lines_and_strips_assert() {
        let task = nat_task();
        let raw = "Here is my reasoning.\n\
            (assert (forall ((x Nat) (y Nat)) (= (plus (mult y x) y) (mult y (succ x)))))\n\
            And some prose after.";
        let ex = extract_conjectures(raw, &task, 3);
        assert_eq!(ex.formulas.len(), 1);
        assert!(ex.formulas[0].0.is_closed());
    }

    #[test]
    fn fenced_blocks_come_first_and_dedup_is_alpha() {
        let task = nat_task();
        let raw = "prose (forall ((a Nat)) (= (plus a zero) a)) prose\n\
            ```smt\n\
            (forall ((q Nat) (r Nat)) (= (mult q r) (mult r q)))\n\
            ```\n\
            (forall ((x Nat)) (= (plus x zero) x))\n";
        let ex = extract_conjectures(raw, &task, 3);
        // Fenced candidate first, then the two alpha-equivalent plain lines
        // collapse into one.
        assert_eq!(ex.formulas.len(), 2);
        assert!(ex.formulas[0].1.contains("mult q r"));
    }

    #[test]
    fn cap_keeps_first_n_in_order() {
        let task = nat_task();
        let raw = (1..=5)
            .map(|i| format!("(forall ((x Nat)) (= (plus x (succ (succ zero))) (plus x {i})))"))
            .collect::<Vec<_>>()
            .join("\n");
        // Int literals don't sort-check against Nat, so build distinct valid lines instead.
        let _ = raw;
        let raw = "(forall ((x Nat)) (= (plus x zero) x))\n\
            (forall ((x Nat)) (= (plus zero x) x))\n\
            (forall ((x Nat) (y Nat)) (= (plus x y) (plus y x)))\n\
            (forall ((x Nat)) (= (mult x zero) zero))\n\
            (forall ((x Nat)) (= (mult zero x) zero))";
        let ex = extract_conjectures(raw, &task, 3);
        assert_eq!(ex.formulas.len(), 3);
        assert!(ex.formulas[0].1.contains("(plus x zero)"));
        assert!(ex.formulas[2].1.contains("(plus x y)"));
    }

    #[test]
    fn prose_only_response_extracts_nothing() {
        let task = nat_task();
        let ex = extract_conjectures("I could not find any useful lemmas, sorry.", &task, 3);
        assert!(ex.formulas.is_empty());
        assert!(ex.diagnostics.is_empty());
    }

    #[test]
    fn bad_lines_become_diagnostics_not_errors() {
        let task = nat_task();
        let raw = "(forall ((x Nat)) (= (plus x zero) x))\n\
            (forall ((x Nat)) (= (plus x zero) missing_symbol))\n\
            (forall ((x Nat)) (= (plus x zero)\n";
        let ex = extract_conjectures(raw, &task, 3);
        assert_eq!(ex.formulas.len(), 1);
        assert_eq!(ex.diagnostics.len(), 2);
    }

    #[test]
    fn open_formulas_are_rejected() {
        let task = nat_task();
        let ex = extract_conjectures("(= (plus x zero) x)", &task, 3);
        assert!(ex.formulas.is_empty());
        assert_eq!(ex.diagnostics.len(), 1);
    }

    #[test]
    fn symbols_outside_signature_never_extract() {
        let task = nat_task();
        let ex = extract_conjectures("(forall ((x Nat)) (= (minus x x) zero))", &task, 3);
        assert!(ex.formulas.is_empty());
    }

    #[test]
    fn default_model_config_matches_reported_sampling_params() {
        let c = ModelConfig::default();
        assert_eq!(c.temperature, 0.9);
        assert_eq!(c.top_p, 0.9);
    }
}
