//! Core syntax: sorts, terms, datatype and function declarations, and the
//! `Task` (axioms plus one proof goal) that the rest of the pipeline works on.

use std::collections::HashMap;
use std::fmt;

/// A sort (type). Parametric datatype instances carry their argument sorts;
/// `Param` only appears inside schematic constructor signatures.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Sort {
    Bool,
    Int,
    Named(String, Vec<Sort>),
    Param(String),
}

impl Sort {
    pub fn named(name: &str) -> Sort {
        Sort::Named(name.to_string(), Vec::new())
    }

    pub fn is_param_free(&self) -> bool {
        match self {
            Sort::Bool | Sort::Int => true,
            Sort::Named(_, args) => args.iter().all(Sort::is_param_free),
            Sort::Param(_) => false,
        }
    }

    /// Substitute sort parameters.
    pub fn subst(&self, map: &HashMap<String, Sort>) -> Sort {
        match self {
            Sort::Bool => Sort::Bool,
            Sort::Int => Sort::Int,
            Sort::Named(n, args) => {
                Sort::Named(n.clone(), args.iter().map(|a| a.subst(map)).collect())
            }
            Sort::Param(p) => map.get(p).cloned().unwrap_or_else(|| Sort::Param(p.clone())),
        }
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Sort::Bool => write!(f, "Bool"),
            Sort::Int => write!(f, "Int"),
            Sort::Named(n, args) if args.is_empty() => write!(f, "{n}"),
            Sort::Named(n, args) => {
                write!(f, "({n}")?;
                for a in args {
                    write!(f, " {a}")?;
                }
                write!(f, ")")
            }
            Sort::Param(p) => write!(f, "{p}"),
        }
    }
}

/// Head symbol of an application. Testers print as `(_ is C)` but are kept
/// distinct so they can never collide with user symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum FnSym {
    Named(String),
    Tester(String),
}

impl FnSym {
    pub fn named(s: &str) -> FnSym {
        FnSym::Named(s.to_string())
    }
}

impl fmt::Display for FnSym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FnSym::Named(n) => write!(f, "{n}"),
            FnSym::Tester(c) => write!(f, "(_ is {c})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String, Sort),
    BoolLit(bool),
    IntLit(i128),
    App(FnSym, Vec<Term>),
    Forall(Vec<(String, Sort)>, Box<Term>),
    Exists(Vec<(String, Sort)>, Box<Term>),
    Not(Box<Term>),
    And(Vec<Term>),
    Or(Vec<Term>),
    Implies(Box<Term>, Box<Term>),
    Eq(Box<Term>, Box<Term>),
    Ite(Box<Term>, Box<Term>, Box<Term>),
    /// Sort-annotated application, e.g. `(as nil (List Int))`; required when
    /// a polymorphic head's instance is not inferable from its arguments.
    As(Box<Term>, Sort),
}

impl Term {
    pub fn forall(binders: Vec<(String, Sort)>, body: Term) -> Term {
        Term::Forall(binders, Box::new(body))
    }

    pub fn eq(lhs: Term, rhs: Term) -> Term {
        Term::Eq(Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(t: Term) -> Term {
        Term::Not(Box::new(t))
    }

    pub fn app(name: &str, args: Vec<Term>) -> Term {
        Term::App(FnSym::named(name), args)
    }

    pub fn is_closed(&self) -> bool {
        fn free(t: &Term, bound: &mut Vec<String>) -> bool {
            match t {
                Term::Var(n, _) => bound.iter().any(|b| b == n),
                Term::BoolLit(_) | Term::IntLit(_) => true,
                Term::App(_, args) => args.iter().all(|a| free(a, bound)),
                Term::Forall(bs, body) | Term::Exists(bs, body) => {
                    let len = bound.len();
                    bound.extend(bs.iter().map(|(n, _)| n.clone()));
                    let ok = free(body, bound);
                    bound.truncate(len);
                    ok
                }
                Term::Not(a) => free(a, bound),
                Term::And(ts) | Term::Or(ts) => ts.iter().all(|a| free(a, bound)),
                Term::Implies(a, b) | Term::Eq(a, b) => free(a, bound) && free(b, bound),
                Term::Ite(a, b, c) => free(a, bound) && free(b, bound) && free(c, bound),
                Term::As(a, _) => free(a, bound),
            }
        }
        free(self, &mut Vec::new())
    }

    /// All named symbols applied anywhere in the term.
    pub fn symbols(&self) -> Vec<FnSym> {
        let mut out = Vec::new();
        fn walk(t: &Term, out: &mut Vec<FnSym>) {
            match t {
                Term::Var(..) | Term::BoolLit(_) | Term::IntLit(_) => {}
                Term::App(f, args) => {
                    out.push(f.clone());
                    args.iter().for_each(|a| walk(a, out));
                }
                Term::Forall(_, b) | Term::Exists(_, b) | Term::Not(b) => walk(b, out),
                Term::And(ts) | Term::Or(ts) => ts.iter().for_each(|a| walk(a, out)),
                Term::Implies(a, b) | Term::Eq(a, b) => {
                    walk(a, out);
                    walk(b, out);
                }
                Term::Ite(a, b, c) => {
                    walk(a, out);
                    walk(b, out);
                    walk(c, out);
                }
                Term::As(a, _) => walk(a, out),
            }
        }
        walk(self, &mut out);
        out
    }
}

/// One constructor of a datatype: name plus (selector, sort) pairs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constructor {
    pub name: String,
    pub selectors: Vec<(String, Sort)>,
}

/// A datatype declaration. `params` is non-empty for parametric datatypes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DatatypeDecl {
    pub name: String,
    pub params: Vec<String>,
    pub constructors: Vec<Constructor>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FunctionBody {
    /// define-fun / define-fun-rec with an explicit body.
    RecDefinition { body: Term, recursive: bool },
    /// declare-fun whose semantics are given by quantified axioms in the task.
    Axiomatized,
    /// declare-fun with no defining axioms.
    Uninterpreted,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FunctionDef {
    pub name: String,
    pub params: Vec<(String, Sort)>,
    pub return_sort: Sort,
    pub body: FunctionBody,
}

/// A proof task: the axiom set `A` (datatypes, functions, quantified
/// assertions) plus one goal `P`, stated positively.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Task {
    pub logic: Option<String>,
    /// Mutually recursive declaration groups, in source order.
    pub datatype_groups: Vec<Vec<DatatypeDecl>>,
    /// Plain declared sorts (declare-sort), name and arity.
    pub declared_sorts: Vec<(String, usize)>,
    pub functions: Vec<FunctionDef>,
    pub axioms: Vec<Term>,
    pub goal: Term,
    pub source_path: Option<String>,
}

impl Task {
    pub fn datatypes(&self) -> impl Iterator<Item = &DatatypeDecl> {
        self.datatype_groups.iter().flatten()
    }

    /// Same axioms and declarations, different goal.
    pub fn with_goal(&self, goal: Term) -> Task {
        let mut t = self.clone();
        t.goal = goal;
        t.source_path = None;
        t
    }
}
