//! LLM-assisted inductive prover over algebraic data types.
//!
//! The pipeline: parse an SMTLIB2 task, try the solver portfolio directly,
//! and otherwise elicit auxiliary-lemma conjectures from a language-model
//! backend, filter them with fast consistency checks, verify their
//! usefulness, and discharge each as a recursive sub-goal. Proved tasks get
//! a re-checkable proof-tree certificate.

pub mod smt;
pub mod bench;
pub mod engine;
pub mod filter;
pub mod llm;
pub mod solver;
