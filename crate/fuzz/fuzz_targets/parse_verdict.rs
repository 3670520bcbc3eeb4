//! Solver stdout decoding must never panic on arbitrary bytes.
#![no_main]

use libfuzzer_sys::fuzz_target;

use adt_prover::solver::parse_verdict;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let _ = parse_verdict(text);
});
