//! Regenerates the checked-in replay transcript fixtures. Transcript keys
//! hash the rendered prompt, so they cannot be written by hand; this test
//! derives them through the same code path the engine uses.
//!
//! Run with: cargo test -p adt-prover --test fixture_gen -- --ignored

use std::path::Path;

use adt_prover::llm::{render_prompt, ModelConfig, PromptStrategy, TokenUsage, TranscriptStore};
use adt_prover::smt::{
    build_subgoal_task, parse_formula, parse_script, preprocess_label, Signature, Task,
};

const C1: &str =
    "(forall ((x Nat) (y Nat)) (= (plus (mult y x) y) (mult y (succ x))))";
const C2: &str = "(forall ((x Nat) (y Nat)) (= (plus (plus (mult y x) x) (succ y)) \
                  (plus (plus (mult y x) y) (succ x))))";
const C3: &str = "(forall ((t Nat) (x Nat) (y Nat)) (= (plus (plus t x) (succ y)) \
                  (plus (plus t y) (succ x))))";

fn fixtures() -> &'static Path {
    Path::new(concat!(env!("CARGO_MANIFEST_DIR"), "/fixtures"))
}

fn load_task(name: &str) -> Task {
    let path = fixtures().join("tasks").join(name);
    let text = std::fs::read_to_string(&path).unwrap();
    parse_script(&text, Some(name)).unwrap()
}

fn response_with(conjecture: &str) -> String {
    format!(
        "Looking at the recursive structure of the functions, the goal needs a \
         strengthening that follows the second argument's constructors.\n\n\
         ```\n(assert {conjecture})\n```\n"
    )
}

fn record(
    store: &TranscriptStore,
    config: &ModelConfig,
    task: &Task,
    strategy: PromptStrategy,
    iteration: u32,
    response: &str,
) {
    let prompt = render_prompt(strategy, &preprocess_label(task));
    let usage = TokenUsage { prompt_tokens: 900, completion_tokens: 180 };
    store.record_manual(&prompt, config, iteration, response, usage).unwrap();
}

/// Chain for the worked example: mult commutativity via c1 <- c2 <- c3.
#[test]
#[ignore = "fixture regeneration; output is checked in"]
fn regenerate_running_example_transcripts() {
    let dir = fixtures().join("transcripts/running-example");
    let _ = std::fs::remove_dir_all(&dir);
    let store = TranscriptStore::new(&dir);
    let config = ModelConfig::default();
    let s1 = PromptStrategy::Strategy1EquationalReasoning;

    let root = load_task("nat-mult-comm.smt2");
    let sig = Signature::from_task(&root);
    let c1 = parse_formula(C1, &sig).unwrap();
    let c2 = parse_formula(C2, &sig).unwrap();
    let goal_c1 = build_subgoal_task(&root, &c1).unwrap();
    let goal_c2 = build_subgoal_task(&root, &c2).unwrap();

    record(&store, &config, &root, s1, 0, &response_with(C1));
    record(&store, &config, &goal_c1, s1, 0, &response_with(C2));
    record(&store, &config, &goal_c2, s1, 0, &response_with(C3));
}

/// A store whose every response is useless: the engine must burn through the
/// full strategy x iteration budget without finding a proof.
#[test]
#[ignore = "fixture regeneration; output is checked in"]
fn regenerate_adversarial_transcripts() {
    let dir = fixtures().join("transcripts/adversarial");
    let _ = std::fs::remove_dir_all(&dir);
    let store = TranscriptStore::new(&dir);
    let config = ModelConfig::default();

    let task = load_task("nat-plus-comm-stuck.smt2");
    for strategy in [
        PromptStrategy::Strategy1EquationalReasoning,
        PromptStrategy::Strategy2TermRewritingGeneralization,
    ] {
        for iteration in 0..3 {
            let response = format!(
                "I could not find a helpful auxiliary lemma on pass {iteration}; \
                 the goal seems to need structural induction directly."
            );
            record(&store, &config, &task, strategy, iteration, &response);
        }
    }
}
