//! Build the solver obligations the workflow needs: the usefulness check
//! `{A, not P} ∪ C` and the one-sided consistency check `A ∧ c`.

use std::fmt::Write;

use super::ast::{Task, Term};
use super::parser::{parse_formula, ParseError, Signature};
use super::printer::{render_declarations, term_to_smt2};

#[derive(Debug, thiserror::Error)]
pub enum ObligationError {
    #[error("ill-sorted conjecture: {0}")]
    IllSortedConjecture(String),
}

/// A conjecture must be closed and well-sorted against the task signature.
/// Checked by re-parsing its rendered form, the same path the solver sees.
pub fn validate_conjecture(task: &Task, c: &Term) -> Result<(), ObligationError> {
    if !c.is_closed() {
        return Err(ObligationError::IllSortedConjecture("formula is not closed".into()));
    }
    let sig = Signature::from_task(task);
    match parse_formula(&term_to_smt2(c), &sig) {
        Ok(_) => Ok(()),
        Err(ParseError::Sexp(e)) => Err(ObligationError::IllSortedConjecture(e.to_string())),
        Err(e) => Err(ObligationError::IllSortedConjecture(e.to_string())),
    }
}

/// Script whose unsatisfiability means the conjectures are useful (with an
/// empty list: that the goal follows from the axioms alone).
pub fn build_proof_obligation(task: &Task, conjectures: &[Term]) -> Result<String, ObligationError> {
    for c in conjectures {
        validate_conjecture(task, c)?;
    }
    let mut out = render_declarations(task);
    for a in &task.axioms {
        let _ = writeln!(out, "(assert {})", term_to_smt2(a));
    }
    for c in conjectures {
        let _ = writeln!(out, "(assert {})", term_to_smt2(c));
    }
    let _ = writeln!(out, "(assert (not {}))", term_to_smt2(&task.goal));
    out.push_str("(check-sat)\n");
    Ok(out)
}

/// Script asserting the axioms and the conjecture positively, goal omitted.
/// Unsat here means the conjecture contradicts the axioms.
pub fn build_consistency_obligation(task: &Task, c: &Term) -> Result<String, ObligationError> {
    validate_conjecture(task, c)?;
    let mut out = render_declarations(task);
    for a in &task.axioms {
        let _ = writeln!(out, "(assert {})", term_to_smt2(a));
    }
    let _ = writeln!(out, "(assert {})", term_to_smt2(c));
    out.push_str("(check-sat)\n");
    Ok(out)
}

/// New task with the same axioms and declarations whose goal is the
/// conjecture. Sibling conjectures are never added as premises.
pub fn build_subgoal_task(task: &Task, c: &Term) -> Result<Task, ObligationError> {
    validate_conjecture(task, c)?;
    Ok(task.with_goal(c.clone()))
}
