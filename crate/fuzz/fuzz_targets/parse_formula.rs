//! Formula parsing against a fixed Nat signature must never panic, and a
//! successful parse must survive print/reparse.
#![no_main]

use libfuzzer_sys::fuzz_target;

use adt_prover::smt::{alpha_eq, parse_formula, parse_script, term_to_smt2, Signature};

const TASK: &str = "(set-logic ALL)
(declare-datatype Nat ((zero) (succ (n Nat))))
(declare-fun plus (Nat Nat) Nat)
(declare-fun mult (Nat Nat) Nat)
(assert (forall ((y Nat)) (= (plus zero y) y)))
(assert (not (forall ((x Nat)) (= (plus x zero) x))))
(check-sat)
";

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let task = parse_script(TASK, None).unwrap();
    let sig = Signature::from_task(&task);
    if let Ok(term) = parse_formula(text, &sig) {
        let printed = term_to_smt2(&term);
        let reparsed = parse_formula(&printed, &sig).expect("printed formula must reparse");
        assert!(alpha_eq(&term, &reparsed), "print/reparse changed the formula");
    }
});
