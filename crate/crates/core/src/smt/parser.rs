//! Front end for the SMTLIB2 fragment the benchmark suites use: ADT
//! declarations, (recursive) function definitions, quantified assertions and
//! a single proof goal. `match` and `let` are desugared at parse time.

use std::collections::HashMap;

use super::ast::{
    Constructor, DatatypeDecl, FnSym, FunctionBody, FunctionDef, Sort, Task, Term,
};
use super::sexp::{read_all, read_one, Pos, SExp, SexpError};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error(transparent)]
    Sexp(#[from] SexpError),
    #[error("{pos}: {msg}")]
    Syntax { pos: Pos, msg: String },
    #[error("{pos}: unknown symbol `{name}`")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("{pos}: unknown sort `{name}`")]
    UnknownSort { pos: Pos, name: String },
    #[error("{pos}: sort mismatch: {msg}")]
    SortMismatch { pos: Pos, msg: String },
    #[error("{pos}: duplicate declaration of `{name}`")]
    Duplicate { pos: Pos, name: String },
    #[error("{pos}: cannot infer sort parameters for `{name}` (add an `as` annotation)")]
    Ambiguous { pos: Pos, name: String },
    #[error("{pos}: unsupported command `{name}`")]
    Unsupported { pos: Pos, name: String },
    #[error("no proof goal found (no trailing negated assert and no `; proof goal` label)")]
    NoGoalFound,
    #[error("{pos}: multiple `; proof goal` labeled asserts")]
    MultipleGoals { pos: Pos },
}

type Result<T> = std::result::Result<T, ParseError>;

fn syntax<T>(pos: Pos, msg: impl Into<String>) -> Result<T> {
    Err(ParseError::Syntax { pos, msg: msg.into() })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SymKind {
    Constructor,
    Selector,
    Tester,
    Function,
}

#[derive(Debug, Clone)]
pub struct FuncSig {
    /// Sort parameters of the owning parametric datatype, if any.
    pub sort_params: Vec<String>,
    pub params: Vec<Sort>,
    pub ret: Sort,
    pub kind: SymKind,
}

impl FuncSig {
    fn mono(params: Vec<Sort>, ret: Sort, kind: SymKind) -> FuncSig {
        FuncSig { sort_params: Vec::new(), params, ret, kind }
    }
}

/// Symbol table built from declarations; also constructible from a `Task`
/// so conjectures can be checked against an existing signature.
#[derive(Debug, Clone, Default)]
pub struct Signature {
    sorts: HashMap<String, usize>,
    funcs: HashMap<String, FuncSig>,
    testers: HashMap<String, FuncSig>,
    /// constructor name -> datatype name (for match desugaring)
    ctor_dt: HashMap<String, String>,
    /// constructor name -> selector names in field order
    ctor_selectors: HashMap<String, Vec<String>>,
}

impl Signature {
    pub fn new() -> Signature {
        Signature::default()
    }

    pub fn from_task(task: &Task) -> Signature {
        let mut sig = Signature::new();
        for (name, arity) in &task.declared_sorts {
            sig.sorts.insert(name.clone(), *arity);
        }
        for group in &task.datatype_groups {
            sig.register_datatype_group(group);
        }
        for f in &task.functions {
            sig.funcs.insert(
                f.name.clone(),
                FuncSig::mono(
                    f.params.iter().map(|(_, s)| s.clone()).collect(),
                    f.return_sort.clone(),
                    SymKind::Function,
                ),
            );
        }
        sig
    }

    pub fn func(&self, name: &str) -> Option<&FuncSig> {
        self.funcs.get(name)
    }

    fn register_datatype_group(&mut self, group: &[DatatypeDecl]) {
        for dt in group {
            self.sorts.insert(dt.name.clone(), dt.params.len());
        }
        for dt in group {
            let dt_sort = Sort::Named(
                dt.name.clone(),
                dt.params.iter().map(|p| Sort::Param(p.clone())).collect(),
            );
            for c in &dt.constructors {
                self.ctor_dt.insert(c.name.clone(), dt.name.clone());
                self.ctor_selectors
                    .insert(c.name.clone(), c.selectors.iter().map(|(n, _)| n.clone()).collect());
                self.funcs.insert(
                    c.name.clone(),
                    FuncSig {
                        sort_params: dt.params.clone(),
                        params: c.selectors.iter().map(|(_, s)| s.clone()).collect(),
                        ret: dt_sort.clone(),
                        kind: SymKind::Constructor,
                    },
                );
                self.testers.insert(
                    c.name.clone(),
                    FuncSig {
                        sort_params: dt.params.clone(),
                        params: vec![dt_sort.clone()],
                        ret: Sort::Bool,
                        kind: SymKind::Tester,
                    },
                );
                for (sel, ssort) in &c.selectors {
                    self.funcs.insert(
                        sel.clone(),
                        FuncSig {
                            sort_params: dt.params.clone(),
                            params: vec![dt_sort.clone()],
                            ret: ssort.clone(),
                            kind: SymKind::Selector,
                        },
                    );
                }
            }
        }
    }

    fn resolve_sort(&self, e: &SExp, params: &[String]) -> Result<Sort> {
        match e {
            SExp::Atom(name, pos) => match name.as_str() {
                "Bool" => Ok(Sort::Bool),
                "Int" => Ok(Sort::Int),
                _ if params.iter().any(|p| p == name) => Ok(Sort::Param(name.clone())),
                _ => match self.sorts.get(name) {
                    Some(0) => Ok(Sort::Named(name.clone(), Vec::new())),
                    Some(n) => syntax(*pos, format!("sort `{name}` expects {n} arguments")),
                    None => Err(ParseError::UnknownSort { pos: *pos, name: name.clone() }),
                },
            },
            SExp::List(items, pos) => {
                let (head, rest) = items
                    .split_first()
                    .ok_or(ParseError::Syntax { pos: *pos, msg: "empty sort".into() })?;
                let name = head
                    .atom()
                    .ok_or(ParseError::Syntax { pos: *pos, msg: "bad sort head".into() })?;
                match self.sorts.get(name) {
                    Some(n) if *n == rest.len() => {
                        let args = rest
                            .iter()
                            .map(|a| self.resolve_sort(a, params))
                            .collect::<Result<_>>()?;
                        Ok(Sort::Named(name.to_string(), args))
                    }
                    Some(n) => syntax(*pos, format!("sort `{name}` expects {n} arguments")),
                    None => Err(ParseError::UnknownSort { pos: *pos, name: name.to_string() }),
                }
            }
        }
    }
}

fn unify(schematic: &Sort, concrete: &Sort, map: &mut HashMap<String, Sort>, pos: Pos) -> Result<()> {
    match (schematic, concrete) {
        (Sort::Param(p), c) => match map.get(p) {
            Some(bound) if bound == c => Ok(()),
            Some(bound) => Err(ParseError::SortMismatch {
                pos,
                msg: format!("sort parameter {p} bound to both {bound} and {c}"),
            }),
            None => {
                map.insert(p.clone(), c.clone());
                Ok(())
            }
        },
        (Sort::Bool, Sort::Bool) | (Sort::Int, Sort::Int) => Ok(()),
        (Sort::Named(a, xs), Sort::Named(b, ys)) if a == b && xs.len() == ys.len() => {
            for (x, y) in xs.iter().zip(ys) {
                unify(x, y, map, pos)?;
            }
            Ok(())
        }
        _ => Err(ParseError::SortMismatch {
            pos,
            msg: format!("expected {schematic}, got {concrete}"),
        }),
    }
}

/// Sort of an elaborated term. Application result sorts come from the
/// signature; parametric heads are re-instantiated from the argument sorts.
pub fn sort_of(sig: &Signature, t: &Term) -> Sort {
    match t {
        Term::Var(_, s) => s.clone(),
        Term::BoolLit(_)
        | Term::Not(_)
        | Term::And(_)
        | Term::Or(_)
        | Term::Implies(..)
        | Term::Eq(..)
        | Term::Forall(..)
        | Term::Exists(..) => Sort::Bool,
        Term::IntLit(_) => Sort::Int,
        Term::App(f, args) => match f {
            FnSym::Tester(_) => Sort::Bool,
            FnSym::Named(name) => match name.as_str() {
                "+" | "-" | "*" | "div" | "mod" | "abs" => Sort::Int,
                "<" | "<=" | ">" | ">=" => Sort::Bool,
                _ => {
                    let fs = sig
                        .funcs
                        .get(name)
                        .unwrap_or_else(|| panic!("sort_of: unknown symbol `{name}`"));
                    if fs.ret.is_param_free() {
                        return fs.ret.clone();
                    }
                    let dummy = Pos { line: 0, col: 0, byte: 0 };
                    let mut map = HashMap::new();
                    for (p, a) in fs.params.iter().zip(args) {
                        let _ = unify(p, &sort_of(sig, a), &mut map, dummy);
                    }
                    fs.ret.subst(&map)
                }
            },
        },
        Term::Ite(_, a, _) => sort_of(sig, a),
        Term::As(_, s) => s.clone(),
    }
}

/// Capture-avoiding substitution of variables by terms.
pub fn subst_vars(t: &Term, map: &HashMap<String, Term>) -> Term {
    if map.is_empty() {
        return t.clone();
    }
    match t {
        Term::Var(n, _) => map.get(n).cloned().unwrap_or_else(|| t.clone()),
        Term::BoolLit(_) | Term::IntLit(_) => t.clone(),
        Term::App(f, args) => {
            Term::App(f.clone(), args.iter().map(|a| subst_vars(a, map)).collect())
        }
        Term::Forall(bs, body) | Term::Exists(bs, body) => {
            // Rename binders that would capture free variables of the images.
            let mut free_in_images = Vec::new();
            for v in map.values() {
                collect_vars(v, &mut free_in_images);
            }
            let mut inner = map.clone();
            let mut new_bs = Vec::new();
            let mut renames: HashMap<String, Term> = HashMap::new();
            for (n, s) in bs {
                inner.remove(n);
                if free_in_images.iter().any(|f| f == n) {
                    let mut fresh = format!("{n}!");
                    while free_in_images.iter().any(|f| f == &fresh) {
                        fresh.push('!');
                    }
                    renames.insert(n.clone(), Term::Var(fresh.clone(), s.clone()));
                    new_bs.push((fresh, s.clone()));
                } else {
                    new_bs.push((n.clone(), s.clone()));
                }
            }
            let body = if renames.is_empty() { (**body).clone() } else { subst_vars(body, &renames) };
            let body = Box::new(subst_vars(&body, &inner));
            match t {
                Term::Forall(..) => Term::Forall(new_bs, body),
                _ => Term::Exists(new_bs, body),
            }
        }
        Term::Not(a) => Term::not(subst_vars(a, map)),
        Term::And(ts) => Term::And(ts.iter().map(|a| subst_vars(a, map)).collect()),
        Term::Or(ts) => Term::Or(ts.iter().map(|a| subst_vars(a, map)).collect()),
        Term::Implies(a, b) => {
            Term::Implies(Box::new(subst_vars(a, map)), Box::new(subst_vars(b, map)))
        }
        Term::Eq(a, b) => Term::eq(subst_vars(a, map), subst_vars(b, map)),
        Term::Ite(a, b, c) => Term::Ite(
            Box::new(subst_vars(a, map)),
            Box::new(subst_vars(b, map)),
            Box::new(subst_vars(c, map)),
        ),
        Term::As(a, s) => Term::As(Box::new(subst_vars(a, map)), s.clone()),
    }
}

fn collect_vars(t: &Term, out: &mut Vec<String>) {
    match t {
        Term::Var(n, _) => out.push(n.clone()),
        Term::BoolLit(_) | Term::IntLit(_) => {}
        Term::App(_, args) => args.iter().for_each(|a| collect_vars(a, out)),
        Term::Forall(bs, b) | Term::Exists(bs, b) => {
            bs.iter().for_each(|(n, _)| out.push(n.clone()));
            collect_vars(b, out);
        }
        Term::Not(a) => collect_vars(a, out),
        Term::And(ts) | Term::Or(ts) => ts.iter().for_each(|a| collect_vars(a, out)),
        Term::Implies(a, b) | Term::Eq(a, b) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Term::Ite(a, b, c) => {
            collect_vars(a, out);
            collect_vars(b, out);
            collect_vars(c, out);
        }
        Term::As(a, _) => collect_vars(a, out),
    }
}

struct Elab<'a> {
    sig: &'a Signature,
    vars: Vec<(String, Sort)>,
}

impl<'a> Elab<'a> {
    fn lookup_var(&self, name: &str) -> Option<&Sort> {
        self.vars.iter().rev().find(|(n, _)| n == name).map(|(_, s)| s)
    }

    fn term(&mut self, e: &SExp, expected: Option<&Sort>) -> Result<Term> {
        match e {
            SExp::Atom(a, pos) => self.atom(a, *pos, expected),
            SExp::List(items, pos) => {
                let (head, args) = items
                    .split_first()
                    .ok_or(ParseError::Syntax { pos: *pos, msg: "empty application".into() })?;
                match head {
                    SExp::Atom(h, _) => self.form(h, args, *pos, expected),
                    SExp::List(hitems, hpos) => {
                        // (_ is C) tester, or (as sym Sort)
                        let atoms: Vec<_> = hitems.iter().filter_map(|x| x.atom()).collect();
                        if atoms.len() == 3 && atoms[0] == "_" && atoms[1] == "is" {
                            let ctor = atoms[2];
                            let tsig = self.sig.testers.get(ctor).ok_or_else(|| {
                                ParseError::UnknownSymbol { pos: *hpos, name: ctor.to_string() }
                            })?;
                            let tsig = tsig.clone();
                            let arg = self.term(&args_one(args, *pos)?, None)?;
                            let mut map = HashMap::new();
                            unify(&tsig.params[0], &sort_of(self.sig, &arg), &mut map, *pos)?;
                            Ok(Term::App(FnSym::Tester(ctor.to_string()), vec![arg]))
                        } else {
                            syntax(*hpos, "unsupported application head")
                        }
                    }
                }
            }
        }
    }

    fn atom(&mut self, a: &str, pos: Pos, expected: Option<&Sort>) -> Result<Term> {
        if a == "true" {
            return Ok(Term::BoolLit(true));
        }
        if a == "false" {
            return Ok(Term::BoolLit(false));
        }
        if a.chars().all(|c| c.is_ascii_digit()) && !a.is_empty() {
            return a
                .parse::<i128>()
                .map(Term::IntLit)
                .map_err(|_| ParseError::Syntax { pos, msg: "integer literal overflow".into() });
        }
        if let Some(s) = self.lookup_var(a) {
            return Ok(Term::Var(a.to_string(), s.clone()));
        }
        if let Some(fs) = self.sig.funcs.get(a) {
            let fs = fs.clone();
            if !fs.params.is_empty() {
                return Err(ParseError::SortMismatch {
                    pos,
                    msg: format!("`{a}` expects {} arguments", fs.params.len()),
                });
            }
            return self.apply(a, &fs, Vec::new(), pos, expected);
        }
        Err(ParseError::UnknownSymbol { pos, name: a.to_string() })
    }

    fn apply(
        &mut self,
        name: &str,
        fs: &FuncSig,
        args: Vec<Term>,
        pos: Pos,
        expected: Option<&Sort>,
    ) -> Result<Term> {
        let mut map = HashMap::new();
        for (p, a) in fs.params.iter().zip(&args) {
            unify(p, &sort_of(self.sig, a), &mut map, pos)?;
        }
        let ret = fs.ret.subst(&map);
        if ret.is_param_free() {
            return Ok(Term::App(FnSym::named(name), args));
        }
        // The instance is not determined by the arguments; fall back to the
        // expected sort and keep an explicit annotation so printing is exact.
        if let Some(exp) = expected.filter(|e| e.is_param_free()) {
            unify(&ret, exp, &mut map, pos)?;
            let ret = fs.ret.subst(&map);
            if ret.is_param_free() {
                return Ok(Term::As(Box::new(Term::App(FnSym::named(name), args)), ret));
            }
        }
        Err(ParseError::Ambiguous { pos, name: name.to_string() })
    }

    fn check_args(&mut self, args: &[SExp], expect: &Sort) -> Result<Vec<Term>> {
        args.iter().map(|a| self.typed(a, expect)).collect()
    }

    fn typed(&mut self, e: &SExp, expect: &Sort) -> Result<Term> {
        let t = self.term(e, Some(expect))?;
        let got = sort_of(self.sig, &t);
        if &got != expect {
            return Err(ParseError::SortMismatch {
                pos: e.pos(),
                msg: format!("expected {expect}, got {got}"),
            });
        }
        Ok(t)
    }

    fn binders(&self, e: &SExp) -> Result<Vec<(String, Sort)>> {
        let items = e
            .list()
            .ok_or(ParseError::Syntax { pos: e.pos(), msg: "expected binder list".into() })?;
        let mut out = Vec::new();
        for b in items {
            let pair = b
                .list()
                .filter(|l| l.len() == 2)
                .ok_or(ParseError::Syntax { pos: b.pos(), msg: "expected (name Sort)".into() })?;
            let name = pair[0]
                .atom()
                .ok_or(ParseError::Syntax { pos: pair[0].pos(), msg: "expected name".into() })?;
            let sort = self.sig.resolve_sort(&pair[1], &[])?;
            out.push((name.to_string(), sort));
        }
        Ok(out)
    }

    fn form(&mut self, h: &str, args: &[SExp], pos: Pos, expected: Option<&Sort>) -> Result<Term> {
        match h {
            "forall" | "exists" => {
                if args.len() != 2 {
                    return syntax(pos, format!("`{h}` expects binders and a body"));
                }
                let bs = self.binders(&args[0])?;
                if bs.is_empty() {
                    return syntax(pos, "empty binder list");
                }
                let depth = self.vars.len();
                self.vars.extend(bs.iter().cloned());
                let body = self.typed(&args[1], &Sort::Bool);
                self.vars.truncate(depth);
                let body = Box::new(body?);
                Ok(if h == "forall" { Term::Forall(bs, body) } else { Term::Exists(bs, body) })
            }
            "not" => Ok(Term::not(self.typed(&args_one(args, pos)?, &Sort::Bool)?)),
            "and" => Ok(Term::And(self.check_args(args, &Sort::Bool)?)),
            "or" => Ok(Term::Or(self.check_args(args, &Sort::Bool)?)),
            "=>" => {
                if args.len() < 2 {
                    return syntax(pos, "`=>` expects at least two arguments");
                }
                let ts = self.check_args(args, &Sort::Bool)?;
                let mut it = ts.into_iter().rev();
                let mut acc = it.next().unwrap();
                for t in it {
                    acc = Term::Implies(Box::new(t), Box::new(acc));
                }
                Ok(acc)
            }
            "=" | "distinct" => {
                if args.len() < 2 {
                    return syntax(pos, format!("`{h}` expects at least two arguments"));
                }
                let first = match self.term(&args[0], None) {
                    Err(ParseError::Ambiguous { .. }) if args.len() >= 2 => {
                        // e.g. (= nil xs): infer the ambiguous side from the other.
                        let second = self.term(&args[1], None)?;
                        let s = sort_of(self.sig, &second);
                        self.typed(&args[0], &s)?
                    }
                    other => other?,
                };
                let s = sort_of(self.sig, &first);
                let mut terms = vec![first];
                for a in &args[1..] {
                    terms.push(self.typed(a, &s)?);
                }
                let mut pairs = Vec::new();
                if h == "=" {
                    for w in terms.windows(2) {
                        pairs.push(Term::eq(w[0].clone(), w[1].clone()));
                    }
                } else {
                    for i in 0..terms.len() {
                        for j in i + 1..terms.len() {
                            pairs.push(Term::not(Term::eq(terms[i].clone(), terms[j].clone())));
                        }
                    }
                }
                Ok(if pairs.len() == 1 { pairs.pop().unwrap() } else { Term::And(pairs) })
            }
            "ite" => {
                if args.len() != 3 {
                    return syntax(pos, "`ite` expects three arguments");
                }
                let c = self.typed(&args[0], &Sort::Bool)?;
                let a = self.term(&args[1], expected)?;
                let b = self.typed(&args[2], &sort_of(self.sig, &a))?;
                Ok(Term::Ite(Box::new(c), Box::new(a), Box::new(b)))
            }
            "+" | "*" => {
                if args.is_empty() {
                    return syntax(pos, format!("`{h}` expects arguments"));
                }
                Ok(Term::App(FnSym::named(h), self.check_args(args, &Sort::Int)?))
            }
            "-" => {
                if args.is_empty() {
                    return syntax(pos, "`-` expects arguments");
                }
                Ok(Term::App(FnSym::named(h), self.check_args(args, &Sort::Int)?))
            }
            "div" | "mod" | "abs" | "<" | "<=" | ">" | ">=" => {
                let arity = if h == "abs" { 1 } else { 2 };
                if args.len() != arity {
                    return syntax(pos, format!("`{h}` expects {arity} arguments"));
                }
                Ok(Term::App(FnSym::named(h), self.check_args(args, &Sort::Int)?))
            }
            "let" => {
                let bindings = args
                    .first()
                    .and_then(|a| a.list())
                    .ok_or(ParseError::Syntax { pos, msg: "`let` expects bindings".into() })?;
                if args.len() != 2 {
                    return syntax(pos, "`let` expects bindings and a body");
                }
                let mut map = HashMap::new();
                let mut bound = Vec::new();
                for b in bindings {
                    let pair = b.list().filter(|l| l.len() == 2).ok_or(ParseError::Syntax {
                        pos: b.pos(),
                        msg: "expected (name value)".into(),
                    })?;
                    let name = pair[0].atom().ok_or(ParseError::Syntax {
                        pos: pair[0].pos(),
                        msg: "expected name".into(),
                    })?;
                    let value = self.term(&pair[1], None)?;
                    bound.push((name.to_string(), sort_of(self.sig, &value)));
                    map.insert(name.to_string(), value);
                }
                let depth = self.vars.len();
                self.vars.extend(bound);
                let body = self.term(&args[1], expected);
                self.vars.truncate(depth);
                Ok(subst_vars(&body?, &map))
            }
            "match" => self.desugar_match(args, pos, expected),
            "as" => {
                if args.len() != 2 {
                    return syntax(pos, "`as` expects a term and a sort");
                }
                let sort = self.sig.resolve_sort(&args[1], &[])?;
                self.typed(&args[0], &sort)
            }
            _ => {
                if self.lookup_var(h).is_some() {
                    return syntax(pos, format!("variable `{h}` applied to arguments"));
                }
                let fs = self
                    .sig
                    .funcs
                    .get(h)
                    .ok_or(ParseError::UnknownSymbol { pos, name: h.to_string() })?
                    .clone();
                if fs.params.len() != args.len() {
                    return Err(ParseError::SortMismatch {
                        pos,
                        msg: format!("`{h}` expects {} arguments, got {}", fs.params.len(), args.len()),
                    });
                }
                let mut terms = Vec::new();
                for (a, p) in args.iter().zip(&fs.params) {
                    let t = if p.is_param_free() {
                        self.typed(a, p)?
                    } else {
                        self.term(a, None)?
                    };
                    terms.push(t);
                }
                self.apply(h, &fs, terms, pos, expected)
            }
        }
    }

    /// Rewrite `match` into tester/selector form: a chain of `ite` guarded by
    /// `(_ is C)` with pattern variables replaced by selector applications.
    fn desugar_match(&mut self, args: &[SExp], pos: Pos, expected: Option<&Sort>) -> Result<Term> {
        if args.len() != 2 {
            return syntax(pos, "`match` expects a scrutinee and branch list");
        }
        let scrut = self.term(&args[0], None)?;
        let scrut_sort = sort_of(self.sig, &scrut);
        let dt_name = match &scrut_sort {
            Sort::Named(n, _) => n.clone(),
            s => {
                return Err(ParseError::SortMismatch {
                    pos,
                    msg: format!("`match` scrutinee must have datatype sort, got {s}"),
                })
            }
        };
        let branches = args[1]
            .list()
            .ok_or(ParseError::Syntax { pos, msg: "expected branch list".into() })?;
        if branches.is_empty() {
            return syntax(pos, "`match` with no branches");
        }

        struct Branch {
            ctor: Option<String>, // None = default variable pattern
            body: Term,
        }
        let mut elaborated = Vec::new();
        for br in branches {
            let parts = br.list().filter(|l| l.len() == 2).ok_or(ParseError::Syntax {
                pos: br.pos(),
                msg: "expected (pattern body)".into(),
            })?;
            let (pat, body_e) = (&parts[0], &parts[1]);
            // Pattern is either `C`, `(C x...)`, or a fresh variable.
            let (ctor, pat_vars): (Option<String>, Vec<String>) = match pat {
                SExp::Atom(a, _) if self.sig.funcs.get(a).map(|f| f.kind == SymKind::Constructor).unwrap_or(false) => {
                    (Some(a.clone()), Vec::new())
                }
                SExp::Atom(a, _) => (None, vec![a.clone()]), // default case variable
                SExp::List(items, ppos) => {
                    let head = items.first().and_then(|x| x.atom()).ok_or(ParseError::Syntax {
                        pos: *ppos,
                        msg: "bad pattern".into(),
                    })?;
                    let vars = items[1..]
                        .iter()
                        .map(|x| {
                            x.atom().map(str::to_string).ok_or(ParseError::Syntax {
                                pos: x.pos(),
                                msg: "pattern variables must be symbols".into(),
                            })
                        })
                        .collect::<Result<Vec<_>>>()?;
                    (Some(head.to_string()), vars)
                }
            };
            let mut map = HashMap::new();
            let mut bound = Vec::new();
            match &ctor {
                Some(c) => {
                    let csig = self
                        .sig
                        .funcs
                        .get(c)
                        .filter(|f| f.kind == SymKind::Constructor)
                        .ok_or(ParseError::UnknownSymbol { pos: pat.pos(), name: c.clone() })?
                        .clone();
                    if csig.params.len() != pat_vars.len() {
                        return Err(ParseError::SortMismatch {
                            pos: pat.pos(),
                            msg: format!(
                                "pattern `{c}` expects {} variables, got {}",
                                csig.params.len(),
                                pat_vars.len()
                            ),
                        });
                    }
                    // Instantiate selector result sorts from the scrutinee sort.
                    let mut inst = HashMap::new();
                    unify(&csig.ret, &scrut_sort, &mut inst, pat.pos())?;
                    let dt = self.sig.ctor_dt.get(c).cloned().unwrap_or_default();
                    if dt != dt_name {
                        return Err(ParseError::SortMismatch {
                            pos: pat.pos(),
                            msg: format!("constructor `{c}` does not belong to `{dt_name}`"),
                        });
                    }
                    // Find selector names for this constructor in the decl.
                    for (i, v) in pat_vars.iter().enumerate() {
                        let vsort = csig.params[i].subst(&inst);
                        let sel = self.selector_name(c, i).ok_or(ParseError::Syntax {
                            pos: pat.pos(),
                            msg: format!("no selector for field {i} of `{c}`"),
                        })?;
                        map.insert(v.clone(), Term::app(&sel, vec![scrut.clone()]));
                        bound.push((v.clone(), vsort));
                    }
                }
                None => {
                    bound.push((pat_vars[0].clone(), scrut_sort.clone()));
                    map.insert(pat_vars[0].clone(), scrut.clone());
                }
            }
            let depth = self.vars.len();
            self.vars.extend(bound);
            let body = self.term(body_e, expected);
            self.vars.truncate(depth);
            elaborated.push(Branch { ctor, body: subst_vars(&body?, &map) });
        }

        // Build right-nested ite; the final branch is the unconditional else.
        let mut it = elaborated.into_iter().rev();
        let last = it.next().unwrap();
        let mut acc = last.body;
        for br in it {
            let c = br.ctor.ok_or(ParseError::Syntax {
                pos,
                msg: "default `match` pattern must come last".into(),
            })?;
            acc = Term::Ite(
                Box::new(Term::App(FnSym::Tester(c), vec![scrut.clone()])),
                Box::new(br.body),
                Box::new(acc),
            );
        }
        Ok(acc)
    }

    fn selector_name(&self, ctor: &str, index: usize) -> Option<String> {
        // Selectors were registered per constructor; recover them by scanning
        // the signature for selectors whose owning constructor matches.
        self.sig.ctor_selectors.get(ctor).and_then(|v| v.get(index)).cloned()
    }
}

fn args_one(args: &[SExp], pos: Pos) -> Result<SExp> {
    if args.len() == 1 {
        Ok(args[0].clone())
    } else {
        syntax(pos, "expected exactly one argument")
    }
}

/// Parse a single formula against an existing signature. Used for
/// conjecture extraction and the `filter` command.
pub fn parse_formula(text: &str, sig: &Signature) -> Result<Term> {
    let e = read_one(text)?;
    parse_formula_sexp(&e, sig)
}

pub fn parse_formula_sexp(e: &SExp, sig: &Signature) -> Result<Term> {
    let mut elab = Elab { sig, vars: Vec::new() };
    let t = elab.typed(e, &Sort::Bool)?;
    if !t.is_closed() {
        return syntax(e.pos(), "formula is not closed");
    }
    Ok(t)
}

// The remainder drives whole-script parsing.

#[derive(Debug, Clone)]
struct RawAssert {
    term: Term,
    byte: usize,
    pos: Pos,
}

pub struct ParsedScript {
    pub task: Option<Task>,
    pub asserts: Vec<Term>,
    pub signature: Signature,
    no_goal: Option<ParseError>,
}

/// Parse the commands of a script without requiring a goal. The scripted
/// test solver uses this to compare assert sets.
pub fn parse_commands(text: &str) -> Result<ParsedScript> {
    parse_internal(text, None)
}

/// Parse a proof task from SMTLIB2 source. The goal is the single assert
/// labeled `; proof goal`, or else the final `(not G)` assert.
pub fn parse_script(text: &str, source_path: Option<&str>) -> Result<Task> {
    let parsed = parse_internal(text, source_path)?;
    match parsed.task {
        Some(t) => Ok(t),
        None => Err(parsed.no_goal.unwrap_or(ParseError::NoGoalFound)),
    }
}

fn label_offsets(text: &str) -> Vec<usize> {
    let mut out = Vec::new();
    let mut byte = 0;
    for line in text.split_inclusive('\n') {
        let trimmed = line.trim_start();
        if let Some(rest) = trimmed.strip_prefix(';') {
            if rest.trim() == "proof goal" {
                out.push(byte);
            }
        }
        byte += line.len();
    }
    out
}

fn parse_internal(text: &str, source_path: Option<&str>) -> Result<ParsedScript> {
    let cmds = read_all(text)?;
    let mut sig = Signature::new();
    let mut logic = None;
    let mut datatype_groups = Vec::new();
    let mut declared_sorts = Vec::new();
    let mut functions: Vec<FunctionDef> = Vec::new();
    let mut asserts: Vec<RawAssert> = Vec::new();

    for cmd in &cmds {
        let items = cmd
            .list()
            .ok_or(ParseError::Syntax { pos: cmd.pos(), msg: "expected a command".into() })?;
        let (head, args) = items
            .split_first()
            .ok_or(ParseError::Syntax { pos: cmd.pos(), msg: "empty command".into() })?;
        let name = head
            .atom()
            .ok_or(ParseError::Syntax { pos: head.pos(), msg: "bad command head".into() })?;
        match name {
            "set-logic" => {
                logic = args.first().and_then(|a| a.atom()).map(str::to_string);
            }
            "set-option" | "set-info" => {} // recorded nowhere, deliberately ignored
            "check-sat" | "exit" => {}
            "declare-sort" => {
                let sname = args
                    .first()
                    .and_then(|a| a.atom())
                    .ok_or(ParseError::Syntax { pos: cmd.pos(), msg: "bad declare-sort".into() })?;
                let arity: usize = args
                    .get(1)
                    .and_then(|a| a.atom())
                    .and_then(|a| a.parse().ok())
                    .unwrap_or(0);
                if sig.sorts.contains_key(sname) {
                    return Err(ParseError::Duplicate { pos: cmd.pos(), name: sname.into() });
                }
                sig.sorts.insert(sname.to_string(), arity);
                declared_sorts.push((sname.to_string(), arity));
            }
            "declare-datatype" => {
                let group = parse_declare_datatype(&mut sig, args, cmd.pos())?;
                datatype_groups.push(group);
            }
            "declare-datatypes" => {
                let group = parse_declare_datatypes(&mut sig, args, cmd.pos())?;
                datatype_groups.push(group);
            }
            "declare-fun" | "declare-const" => {
                let f = parse_declare_fun(&sig, name, args, cmd.pos())?;
                if sig.funcs.contains_key(&f.name) {
                    return Err(ParseError::Duplicate { pos: cmd.pos(), name: f.name });
                }
                sig.funcs.insert(
                    f.name.clone(),
                    FuncSig::mono(
                        f.params.iter().map(|(_, s)| s.clone()).collect(),
                        f.return_sort.clone(),
                        SymKind::Function,
                    ),
                );
                functions.push(f);
            }
            "define-fun" | "define-fun-rec" => {
                let (fname, params, ret, body_e) = parse_define_header(&sig, args, cmd.pos())?;
                if sig.funcs.contains_key(&fname) {
                    return Err(ParseError::Duplicate { pos: cmd.pos(), name: fname });
                }
                sig.funcs.insert(
                    fname.clone(),
                    FuncSig::mono(
                        params.iter().map(|(_, s)| s.clone()).collect(),
                        ret.clone(),
                        SymKind::Function,
                    ),
                );
                let mut elab = Elab { sig: &sig, vars: params.clone() };
                let body = elab.typed(&body_e, &ret)?;
                functions.push(FunctionDef {
                    name: fname,
                    params,
                    return_sort: ret,
                    body: FunctionBody::RecDefinition {
                        body,
                        recursive: name == "define-fun-rec",
                    },
                });
            }
            "define-funs-rec" => {
                let decls = args
                    .first()
                    .and_then(|a| a.list())
                    .ok_or(ParseError::Syntax { pos: cmd.pos(), msg: "bad define-funs-rec".into() })?;
                let bodies = args
                    .get(1)
                    .and_then(|a| a.list())
                    .ok_or(ParseError::Syntax { pos: cmd.pos(), msg: "bad define-funs-rec".into() })?;
                if decls.len() != bodies.len() {
                    return syntax(cmd.pos(), "declaration/body count mismatch");
                }
                let mut headers = Vec::new();
                for d in decls {
                    let parts = d.list().ok_or(ParseError::Syntax {
                        pos: d.pos(),
                        msg: "bad function declaration".into(),
                    })?;
                    if parts.len() != 3 {
                        return syntax(d.pos(), "expected (name ((x S)...) S)");
                    }
                    let fname = parts[0].atom().ok_or(ParseError::Syntax {
                        pos: parts[0].pos(),
                        msg: "expected name".into(),
                    })?;
                    let params = Elab { sig: &sig, vars: Vec::new() }.binders(&parts[1])?;
                    let ret = sig.resolve_sort(&parts[2], &[])?;
                    if sig.funcs.contains_key(fname) {
                        return Err(ParseError::Duplicate { pos: d.pos(), name: fname.into() });
                    }
                    sig.funcs.insert(
                        fname.to_string(),
                        FuncSig::mono(
                            params.iter().map(|(_, s)| s.clone()).collect(),
                            ret.clone(),
                            SymKind::Function,
                        ),
                    );
                    headers.push((fname.to_string(), params, ret));
                }
                for ((fname, params, ret), body_e) in headers.into_iter().zip(bodies) {
                    let mut elab = Elab { sig: &sig, vars: params.clone() };
                    let body = elab.typed(body_e, &ret)?;
                    functions.push(FunctionDef {
                        name: fname,
                        params,
                        return_sort: ret,
                        body: FunctionBody::RecDefinition { body, recursive: true },
                    });
                }
            }
            "assert" => {
                if args.len() != 1 {
                    return syntax(cmd.pos(), "`assert` expects one formula");
                }
                let mut elab = Elab { sig: &sig, vars: Vec::new() };
                let t = elab.typed(&args[0], &Sort::Bool)?;
                if !t.is_closed() {
                    return syntax(cmd.pos(), "asserted formula is not closed");
                }
                asserts.push(RawAssert { term: t, byte: cmd.pos().byte, pos: cmd.pos() });
            }
            other => {
                return Err(ParseError::Unsupported { pos: cmd.pos(), name: other.to_string() })
            }
        }
    }

    // Goal identification.
    let labels = label_offsets(text);
    let mut labeled: Vec<usize> = Vec::new();
    for l in &labels {
        if let Some((i, _)) = asserts.iter().enumerate().find(|(_, a)| a.byte >= *l) {
            if !labeled.contains(&i) {
                labeled.push(i);
            }
        }
    }
    let (goal, axiom_terms): (Option<Term>, Vec<Term>) = if labeled.len() > 1 {
        return Err(ParseError::MultipleGoals { pos: asserts[labeled[1]].pos });
    } else if labeled.len() == 1 {
        let gi = labeled[0];
        let goal = asserts[gi].term.clone();
        let axioms = asserts
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != gi)
            .map(|(_, a)| a.term.clone())
            .collect();
        (Some(goal), axioms)
    } else {
        match asserts.split_last() {
            Some((last, rest)) => match &last.term {
                Term::Not(g) => ((**g).clone().into(), rest.iter().map(|a| a.term.clone()).collect()),
                _ => (None, asserts.iter().map(|a| a.term.clone()).collect()),
            },
            None => (None, Vec::new()),
        }
    };

    let all_asserts: Vec<Term> = asserts.iter().map(|a| a.term.clone()).collect();
    let task = goal.map(|goal| {
        // Declared functions mentioned in axioms are axiomatized.
        let axiom_syms: Vec<FnSym> =
            axiom_terms.iter().flat_map(|a| a.symbols()).collect();
        let functions = functions
            .iter()
            .map(|f| {
                let mut f = f.clone();
                if f.body == FunctionBody::Uninterpreted
                    && axiom_syms.iter().any(|s| s == &FnSym::named(&f.name))
                {
                    f.body = FunctionBody::Axiomatized;
                }
                f
            })
            .collect();
        Task {
            logic: logic.clone(),
            datatype_groups: datatype_groups.clone(),
            declared_sorts: declared_sorts.clone(),
            functions,
            axioms: axiom_terms.clone(),
            goal,
            source_path: source_path.map(str::to_string),
        }
    });

    Ok(ParsedScript { task, asserts: all_asserts, signature: sig, no_goal: Some(ParseError::NoGoalFound) })
}

fn parse_declare_fun(
    sig: &Signature,
    cmd: &str,
    args: &[SExp],
    pos: Pos,
) -> Result<FunctionDef> {
    let fname = args
        .first()
        .and_then(|a| a.atom())
        .ok_or(ParseError::Syntax { pos, msg: format!("bad {cmd}") })?;
    let (param_sorts, ret_e): (Vec<Sort>, &SExp) = if cmd == "declare-const" {
        let ret = args.get(1).ok_or(ParseError::Syntax { pos, msg: "bad declare-const".into() })?;
        (Vec::new(), ret)
    } else {
        let params = args
            .get(1)
            .and_then(|a| a.list())
            .ok_or(ParseError::Syntax { pos, msg: "bad declare-fun".into() })?;
        let sorts = params
            .iter()
            .map(|p| sig.resolve_sort(p, &[]))
            .collect::<Result<Vec<_>>>()?;
        let ret = args.get(2).ok_or(ParseError::Syntax { pos, msg: "bad declare-fun".into() })?;
        (sorts, ret)
    };
    let ret = sig.resolve_sort(ret_e, &[])?;
    let params = param_sorts
        .into_iter()
        .enumerate()
        .map(|(i, s)| (format!("x{i}"), s))
        .collect();
    Ok(FunctionDef {
        name: fname.to_string(),
        params,
        return_sort: ret,
        body: FunctionBody::Uninterpreted,
    })
}

#[allow(clippy::type_complexity)]
fn parse_define_header(
    sig: &Signature,
    args: &[SExp],
    pos: Pos,
) -> Result<(String, Vec<(String, Sort)>, Sort, SExp)> {
    if args.len() != 4 {
        return syntax(pos, "expected (define-fun name ((x S)...) S body)");
    }
    let fname = args[0]
        .atom()
        .ok_or(ParseError::Syntax { pos: args[0].pos(), msg: "expected name".into() })?;
    let params = Elab { sig, vars: Vec::new() }.binders(&args[1])?;
    let ret = sig.resolve_sort(&args[2], &[])?;
    Ok((fname.to_string(), params, ret, args[3].clone()))
}

fn parse_constructor(sig: &Signature, e: &SExp, params: &[String]) -> Result<Constructor> {
    match e {
        SExp::Atom(name, _) => Ok(Constructor { name: name.clone(), selectors: Vec::new() }),
        SExp::List(items, pos) => {
            let (head, sels) = items
                .split_first()
                .ok_or(ParseError::Syntax { pos: *pos, msg: "empty constructor".into() })?;
            let name = head
                .atom()
                .ok_or(ParseError::Syntax { pos: *pos, msg: "bad constructor name".into() })?;
            let mut selectors = Vec::new();
            for s in sels {
                let pair = s.list().filter(|l| l.len() == 2).ok_or(ParseError::Syntax {
                    pos: s.pos(),
                    msg: "expected (selector Sort)".into(),
                })?;
                let sel = pair[0].atom().ok_or(ParseError::Syntax {
                    pos: pair[0].pos(),
                    msg: "expected selector name".into(),
                })?;
                let sort = sig.resolve_sort(&pair[1], params)?;
                selectors.push((sel.to_string(), sort));
            }
            Ok(Constructor { name: name.to_string(), selectors })
        }
    }
}

fn parse_declare_datatype(
    sig: &mut Signature,
    args: &[SExp],
    pos: Pos,
) -> Result<Vec<DatatypeDecl>> {
    if args.len() != 2 {
        return syntax(pos, "expected (declare-datatype Name (ctor...))");
    }
    let name = args[0]
        .atom()
        .ok_or(ParseError::Syntax { pos, msg: "expected datatype name".into() })?;
    if sig.sorts.contains_key(name) {
        return Err(ParseError::Duplicate { pos, name: name.to_string() });
    }
    // Register the sort before parsing constructors so recursion works.
    sig.sorts.insert(name.to_string(), 0);
    let (params, ctor_list): (Vec<String>, &[SExp]) = match args[1].list() {
        Some([SExp::Atom(p, _), ps, cs]) if p == "par" => {
            let params = ps
                .list()
                .map(|l| l.iter().filter_map(|x| x.atom().map(str::to_string)).collect())
                .unwrap_or_default();
            (params, std::slice::from_ref(cs))
        }
        Some(cs) => (Vec::new(), cs),
        None => return syntax(pos, "expected constructor list"),
    };
    sig.sorts.insert(name.to_string(), params.len());
    let ctor_list: Vec<SExp> = if params.is_empty() {
        ctor_list.to_vec()
    } else {
        ctor_list[0].list().map(|l| l.to_vec()).unwrap_or_default()
    };
    let ctors = ctor_list
        .iter()
        .map(|c| parse_constructor(sig, c, &params))
        .collect::<Result<Vec<_>>>()?;
    let dt = DatatypeDecl { name: name.to_string(), params, constructors: ctors };
    let group = vec![dt];
    finish_group(sig, &group, pos)?;
    Ok(group)
}

fn parse_declare_datatypes(
    sig: &mut Signature,
    args: &[SExp],
    pos: Pos,
) -> Result<Vec<DatatypeDecl>> {
    if args.len() != 2 {
        return syntax(pos, "expected (declare-datatypes ((Name arity)...) (decl...))");
    }
    let heads = args[0]
        .list()
        .ok_or(ParseError::Syntax { pos, msg: "expected sort declarations".into() })?;
    let decls = args[1]
        .list()
        .ok_or(ParseError::Syntax { pos, msg: "expected datatype bodies".into() })?;
    if heads.len() != decls.len() {
        return syntax(pos, "sort/body count mismatch");
    }
    let mut names = Vec::new();
    for h in heads {
        let pair = h.list().filter(|l| l.len() == 2).ok_or(ParseError::Syntax {
            pos: h.pos(),
            msg: "expected (Name arity)".into(),
        })?;
        let name = pair[0]
            .atom()
            .ok_or(ParseError::Syntax { pos: pair[0].pos(), msg: "expected name".into() })?;
        let arity: usize = pair[1].atom().and_then(|a| a.parse().ok()).unwrap_or(0);
        if sig.sorts.contains_key(name) {
            return Err(ParseError::Duplicate { pos: h.pos(), name: name.into() });
        }
        sig.sorts.insert(name.to_string(), arity);
        names.push((name.to_string(), arity));
    }
    let mut group = Vec::new();
    for ((name, arity), decl) in names.into_iter().zip(decls) {
        let (params, ctor_exprs): (Vec<String>, Vec<SExp>) = match decl.list() {
            Some([SExp::Atom(p, _), ps, cs]) if p == "par" => {
                let params: Vec<String> = ps
                    .list()
                    .map(|l| l.iter().filter_map(|x| x.atom().map(str::to_string)).collect())
                    .unwrap_or_default();
                (params, cs.list().map(|l| l.to_vec()).unwrap_or_default())
            }
            Some(cs) => (Vec::new(), cs.to_vec()),
            None => return syntax(decl.pos(), "expected constructor list"),
        };
        if params.len() != arity {
            return syntax(decl.pos(), format!("`{name}` declared with arity {arity}"));
        }
        let ctors = ctor_exprs
            .iter()
            .map(|c| parse_constructor(sig, c, &params))
            .collect::<Result<Vec<_>>>()?;
        group.push(DatatypeDecl { name, params, constructors: ctors });
    }
    finish_group(sig, &group, pos)?;
    Ok(group)
}

fn finish_group(sig: &mut Signature, group: &[DatatypeDecl], pos: Pos) -> Result<()> {
    for dt in group {
        for c in &dt.constructors {
            if sig.funcs.contains_key(&c.name) {
                return Err(ParseError::Duplicate { pos, name: c.name.clone() });
            }
            for (s, _) in &c.selectors {
                if sig.funcs.contains_key(s) {
                    return Err(ParseError::Duplicate { pos, name: s.clone() });
                }
            }
        }
    }
    sig.register_datatype_group(group);
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::alpha::task_alpha_eq;
    use crate::smt::printer::render_script;

    const RUNNING_EXAMPLE: &str = include_str!("../../fixtures/tasks/nat-mult-comm.smt2");

    #[test]
    fn running_example_parses() {
        let task = parse_script(RUNNING_EXAMPLE, None).unwrap();
        assert_eq!(task.axioms.len(), 4);
        let goal = parse_formula(
            "(forall ((a Nat) (b Nat)) (= (mult a b) (mult b a)))",
            &Signature::from_task(&task),
        )
        .unwrap();
        assert!(crate::smt::alpha::alpha_eq(&task.goal, &goal));
    }

    #[test]
    fn no_goal_when_trailing_assert_is_positive() {
        let err = parse_script("(assert true)(check-sat)", None).unwrap_err();
        assert!(matches!(err, ParseError::NoGoalFound), "{err}");
    }

    #[test]
    fn labeled_goal_overrides_negation_rule() {
        let src = "\
(declare-datatype Nat ((zero) (succ (n Nat))))
(declare-fun plus (Nat Nat) Nat)
(assert (forall ((y Nat)) (= (plus zero y) y)))
; proof goal
(assert (forall ((x Nat)) (= (plus zero x) x)))
(check-sat)
";
        let task = parse_script(src, None).unwrap();
        assert_eq!(task.axioms.len(), 1);
        assert!(matches!(task.goal, Term::Forall(..)));
    }

    #[test]
    fn two_labels_are_rejected() {
        let src = "\
(declare-fun p () Bool)
; proof goal
(assert p)
; proof goal
(assert (not p))
(check-sat)
";
        let err = parse_script(src, None).unwrap_err();
        assert!(matches!(err, ParseError::MultipleGoals { .. }), "{err}");
    }

    #[test]
    fn unknown_symbol_has_position() {
        let src = "(assert (not (frob 1)))(check-sat)";
        match parse_script(src, None) {
            Err(ParseError::UnknownSymbol { name, pos }) => {
                assert_eq!(name, "frob");
                assert_eq!(pos.line, 1);
            }
            other => panic!("expected UnknownSymbol, got {other:?}"),
        }
    }

    #[test]
    fn sort_mismatch_is_reported() {
        let src = "\
(declare-datatype Nat ((zero) (succ (n Nat))))
(assert (not (= zero true)))
(check-sat)
";
        assert!(matches!(parse_script(src, None), Err(ParseError::SortMismatch { .. })));
    }

    #[test]
    fn roundtrip_running_example() {
        let task = parse_script(RUNNING_EXAMPLE, None).unwrap();
        let printed = render_script(&task);
        let again = parse_script(&printed, None).unwrap();
        assert!(task_alpha_eq(&task, &again));
    }

    #[test]
    fn match_desugars_to_testers_and_selectors() {
        let src = "\
(declare-datatype Nat ((zero) (succ (n Nat))))
(define-fun-rec pred ((x Nat)) Nat (match x ((zero zero) ((succ m) m))))
(assert (not (forall ((x Nat)) (= (pred (succ x)) x))))
(check-sat)
";
        let task = parse_script(src, None).unwrap();
        let body = match &task.functions[0].body {
            FunctionBody::RecDefinition { body, .. } => body.clone(),
            _ => panic!(),
        };
        match body {
            Term::Ite(c, t, e) => {
                assert_eq!(*c, Term::App(FnSym::Tester("zero".into()), vec![Term::Var("x".into(), Sort::named("Nat"))]));
                assert_eq!(*t, Term::app("zero", vec![]));
                assert_eq!(*e, Term::app("n", vec![Term::Var("x".into(), Sort::named("Nat"))]));
            }
            other => panic!("expected ite, got {other:?}"),
        }
        // and the desugared form still round-trips
        let again = parse_script(&render_script(&task), None).unwrap();
        assert!(task_alpha_eq(&task, &again));
    }

    #[test]
    fn let_is_substituted() {
        let src = "\
(declare-fun f (Int) Int)
(assert (not (forall ((x Int)) (= (let ((y (f x))) (+ y y)) (* 2 (f x))))))
(check-sat)
";
        let task = parse_script(src, None).unwrap();
        let printed = render_script(&task);
        assert!(!printed.contains("let"));
        assert!(parse_script(&printed, None).is_ok());
    }

    #[test]
    fn parametric_datatypes_infer_instances() {
        let src = "\
(declare-datatypes ((List 1)) ((par (a) ((nil) (cons (head a) (tail (List a)))))))
(declare-fun len ((List Int)) Int)
(assert (= (len (as nil (List Int))) 0))
(assert (forall ((h Int) (t (List Int))) (= (len (cons h t)) (+ 1 (len t)))))
(assert (not (forall ((t (List Int))) (>= (len t) 0))))
(check-sat)
";
        let task = parse_script(src, None).unwrap();
        assert_eq!(task.axioms.len(), 2);
        let again = parse_script(&render_script(&task), None).unwrap();
        assert!(task_alpha_eq(&task, &again));
    }

    #[test]
    fn unsupported_command_is_an_error() {
        let err = parse_script("(push 1)(check-sat)", None).unwrap_err();
        assert!(matches!(err, ParseError::Unsupported { .. }));
    }
}
