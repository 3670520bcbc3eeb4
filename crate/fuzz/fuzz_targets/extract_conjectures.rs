//! Conjecture extraction consumes raw model output: arbitrary text must
//! never panic, and every extracted formula must be closed and well-sorted.
#![no_main]

use libfuzzer_sys::fuzz_target;

use adt_prover::llm::extract_conjectures;
use adt_prover::smt::{parse_script, validate_conjecture};

const TASK: &str = "(set-logic ALL)
(declare-datatype Nat ((zero) (succ (n Nat))))
(declare-fun plus (Nat Nat) Nat)
(declare-fun mult (Nat Nat) Nat)
(assert (forall ((y Nat)) (= (plus zero y) y)))
(assert (not (forall ((x Nat) (y Nat)) (= (mult x y) (mult y x)))))
(check-sat)
";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let task = parse_script(TASK, None).unwrap();
    let extraction = extract_conjectures(text, &task, 3);
    assert!(extraction.formulas.len() <= 3);
    for (formula, _) in &extraction.formulas {
        validate_conjecture(&task, formula).expect("extracted conjecture must be well-sorted");
    }
});
