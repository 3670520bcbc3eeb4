//! SMTLIB2 fragment front end: AST, parser, printer, alpha normalization,
//! labeled preprocessing and obligation construction.

pub mod alpha;
pub mod ast;
pub mod label;
pub mod obligation;
pub mod parser;
pub mod printer;
pub mod sexp;

pub use alpha::{alpha_eq, alpha_normalize, task_alpha_eq};
pub use ast::{Constructor, DatatypeDecl, FnSym, FunctionBody, FunctionDef, Sort, Task, Term};
pub use label::{preprocess_label, LabeledScript};
pub use obligation::{
    build_consistency_obligation, build_proof_obligation, build_subgoal_task, validate_conjecture,
    ObligationError,
};
pub use parser::{parse_commands, parse_formula, parse_script, ParseError, Signature};
pub use printer::{render_declarations, render_script, term_to_smt2};
