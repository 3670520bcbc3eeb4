//! A deterministic scripted stand-in for an external SMT solver, used by the
//! test suite on machines without cvc5/cvc4/Vampire.
//!
//! It reads the input script, alpha-normalizes the asserted formulas into an
//! order-insensitive set, and looks that set up in a rules file (JSON, path
//! in SCRIPTSOLVER_RULES). A matching rule's verdict is printed after its
//! optional delay; anything unmatched answers `unknown`. Being driven by
//! whole-script matching keeps engine tests honest: the stub answers exactly
//! the obligations it was scripted for, nothing else.

use std::collections::BTreeSet;
use std::io::Read;
use std::process::ExitCode;

use serde::Deserialize;

use adt_prover::smt::{alpha_normalize, parse_commands, term_to_smt2};

#[derive(Deserialize)]
struct Rule {
    /// Optional label for diagnostics.
    #[serde(default)]
    name: String,
    /// Full SMTLIB2 script whose assert set this rule matches.
    script: String,
    /// Verdict token to print: "unsat" | "sat" | "unknown".
    verdict: String,
    /// Sleep this long before answering (for timeout tests).
    #[serde(default)]
    delay_ms: u64,
}

fn assert_set(script: &str) -> Result<BTreeSet<String>, String> {
    let parsed = parse_commands(script).map_err(|e| e.to_string())?;
    Ok(parsed
        .asserts
        .iter()
        .map(|t| term_to_smt2(&alpha_normalize(t)))
        .collect())
}

fn main() -> ExitCode {
    let mut input = String::new();
    match std::env::args().nth(1) {
        Some(path) => match std::fs::read_to_string(&path) {
            Ok(text) => input = text,
            Err(e) => {
                eprintln!("scriptsolver: cannot read {path}: {e}");
                return ExitCode::from(2);
            }
        },
        None => {
            if std::io::stdin().read_to_string(&mut input).is_err() {
                eprintln!("scriptsolver: cannot read stdin");
                return ExitCode::from(2);
            }
        }
    }

    let rules: Vec<Rule> = match std::env::var("SCRIPTSOLVER_RULES") {
        Ok(path) => match std::fs::read_to_string(&path) {
            Ok(text) => match serde_json::from_str(&text) {
                Ok(rules) => rules,
                Err(e) => {
                    eprintln!("scriptsolver: bad rules file {path}: {e}");
                    return ExitCode::from(2);
                }
            },
            Err(e) => {
                eprintln!("scriptsolver: cannot read rules {path}: {e}");
                return ExitCode::from(2);
            }
        },
        Err(_) => Vec::new(),
    };

    let goal_set = match assert_set(&input) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("scriptsolver: unparsable input: {e}");
            println!("unknown");
            return ExitCode::SUCCESS;
        }
    };

    for rule in &rules {
        match assert_set(&rule.script) {
            Ok(set) if set == goal_set => {
                if rule.delay_ms > 0 {
                    std::thread::sleep(std::time::Duration::from_millis(rule.delay_ms));
                }
                if !rule.name.is_empty() {
                    eprintln!("scriptsolver: matched rule '{}'", rule.name);
                }
                println!("{}", rule.verdict.trim());
                return ExitCode::SUCCESS;
            }
            Ok(_) => {}
            Err(e) => eprintln!("scriptsolver: skipping unparsable rule '{}': {e}", rule.name),
        }
    }
    println!("unknown");
    ExitCode::SUCCESS
}
