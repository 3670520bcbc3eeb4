//! Certificate deserialization must never panic, and any certificate that
//! deserializes must re-serialize to an equivalent value.
#![no_main]

use libfuzzer_sys::fuzz_target;

use adt_prover::engine::ProofOutcome;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(outcome) = serde_json::from_str::<ProofOutcome>(text) {
        let json = serde_json::to_string(&outcome).expect("certificate must re-serialize");
        let _ = serde_json::from_str::<ProofOutcome>(&json).expect("round trip must parse");
    }
});
