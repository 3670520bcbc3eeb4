//! Render tasks and terms back to SMTLIB2 text. One assert per axiom, in
//! original order; the goal is asserted negated before `check-sat`.

use std::fmt::Write;

use super::ast::{DatatypeDecl, FunctionBody, Task, Term};

pub fn term_to_smt2(t: &Term) -> String {
    let mut s = String::new();
    write_term(&mut s, t);
    s
}

fn write_term(out: &mut String, t: &Term) {
    match t {
        Term::Var(n, _) => out.push_str(n),
        Term::BoolLit(b) => out.push_str(if *b { "true" } else { "false" }),
        Term::IntLit(i) => {
            if *i < 0 {
                let _ = write!(out, "(- {})", -i);
            } else {
                let _ = write!(out, "{i}");
            }
        }
        Term::App(f, args) => {
            if args.is_empty() {
                let _ = write!(out, "{f}");
            } else {
                let _ = write!(out, "({f}");
                for a in args {
                    out.push(' ');
                    write_term(out, a);
                }
                out.push(')');
            }
        }
        Term::Forall(bs, body) | Term::Exists(bs, body) => {
            out.push_str(if matches!(t, Term::Forall(..)) { "(forall (" } else { "(exists (" });
            for (i, (n, s)) in bs.iter().enumerate() {
                if i > 0 {
                    out.push(' ');
                }
                let _ = write!(out, "({n} {s})");
            }
            out.push_str(") ");
            write_term(out, body);
            out.push(')');
        }
        Term::Not(a) => {
            out.push_str("(not ");
            write_term(out, a);
            out.push(')');
        }
        Term::And(ts) | Term::Or(ts) => {
            let op = if matches!(t, Term::And(_)) { "and" } else { "or" };
            if ts.is_empty() {
                out.push_str(if op == "and" { "true" } else { "false" });
                return;
            }
            if ts.len() == 1 {
                write_term(out, &ts[0]);
                return;
            }
            let _ = write!(out, "({op}");
            for a in ts {
                out.push(' ');
                write_term(out, a);
            }
            out.push(')');
        }
        Term::Implies(a, b) => {
            out.push_str("(=> ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        Term::Eq(a, b) => {
            out.push_str("(= ");
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        Term::Ite(c, a, b) => {
            out.push_str("(ite ");
            write_term(out, c);
            out.push(' ');
            write_term(out, a);
            out.push(' ');
            write_term(out, b);
            out.push(')');
        }
        Term::As(inner, sort) => match &**inner {
            Term::App(f, args) if args.is_empty() => {
                let _ = write!(out, "(as {f} {sort})");
            }
            Term::App(f, args) => {
                let _ = write!(out, "((as {f} {sort})");
                for a in args {
                    out.push(' ');
                    write_term(out, a);
                }
                out.push(')');
            }
            other => {
                // Parser only wraps applications, but stay total.
                write_term(out, other);
            }
        },
    }
}

fn write_datatype_group(out: &mut String, group: &[DatatypeDecl]) {
    let _ = write!(out, "(declare-datatypes (");
    for (i, dt) in group.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "({} {})", dt.name, dt.params.len());
    }
    out.push_str(") (");
    for (i, dt) in group.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        if dt.params.is_empty() {
            write_ctor_list(out, dt);
        } else {
            let _ = write!(out, "(par ({}) ", dt.params.join(" "));
            write_ctor_list(out, dt);
            out.push(')');
        }
    }
    out.push_str("))\n");
}

fn write_ctor_list(out: &mut String, dt: &DatatypeDecl) {
    out.push('(');
    for (i, c) in dt.constructors.iter().enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "({}", c.name);
        for (sel, sort) in &c.selectors {
            let _ = write!(out, " ({sel} {sort})");
        }
        out.push(')');
    }
    out.push(')');
}

/// Declarations only (datatypes, sorts, functions), no asserts.
pub fn render_declarations(task: &Task) -> String {
    let mut out = String::new();
    if let Some(logic) = &task.logic {
        let _ = writeln!(out, "(set-logic {logic})");
    }
    for (name, arity) in &task.declared_sorts {
        let _ = writeln!(out, "(declare-sort {name} {arity})");
    }
    for group in &task.datatype_groups {
        write_datatype_group(&mut out, group);
    }
    for f in &task.functions {
        match &f.body {
            FunctionBody::RecDefinition { body, recursive } => {
                let kw = if *recursive { "define-fun-rec" } else { "define-fun" };
                let _ = write!(out, "({kw} {} (", f.name);
                for (i, (n, s)) in f.params.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "({n} {s})");
                }
                let _ = write!(out, ") {} ", f.return_sort);
                write_term(&mut out, body);
                out.push_str(")\n");
            }
            FunctionBody::Axiomatized | FunctionBody::Uninterpreted => {
                let _ = write!(out, "(declare-fun {} (", f.name);
                for (i, (_, s)) in f.params.iter().enumerate() {
                    if i > 0 {
                        out.push(' ');
                    }
                    let _ = write!(out, "{s}");
                }
                let _ = writeln!(out, ") {})", f.return_sort);
            }
        }
    }
    out
}

/// Standard form: declarations, axioms, `(assert (not goal))`, `(check-sat)`.
pub fn render_script(task: &Task) -> String {
    let mut out = render_declarations(task);
    for a in &task.axioms {
        let _ = writeln!(out, "(assert {})", term_to_smt2(a));
    }
    let _ = writeln!(out, "(assert (not {}))", term_to_smt2(&task.goal));
    out.push_str("(check-sat)\n");
    out
}
