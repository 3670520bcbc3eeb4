//! Full SMTLIB2 script parsing must never panic and, when it succeeds,
//! render/reparse must be a fixpoint up to alpha-equivalence.
#![no_main]

use libfuzzer_sys::fuzz_target;

use adt_prover::smt::{parse_script, render_script, task_alpha_eq};

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    if let Ok(task) = parse_script(text, None) {
        let rendered = render_script(&task);
        let reparsed = parse_script(&rendered, None)
            .expect("rendered script must reparse");
        assert!(task_alpha_eq(&task, &reparsed), "render/reparse changed the task");
    }
});
