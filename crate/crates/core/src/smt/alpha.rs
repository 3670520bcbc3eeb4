//! Alpha normalization: canonical bound-variable names in binder order, with
//! nested same-quantifier binders flattened. No commutativity or AC matching;
//! two formulas are "syntactically equivalent" iff their normal forms match.

use std::collections::HashMap;

use super::ast::{Sort, Task, Term};

/// Canonical form of a closed formula. Idempotent.
pub fn alpha_normalize(t: &Term) -> Term {
    let mut counter = 0;
    norm(t, &mut HashMap::new(), &mut counter)
}

/// Alpha-equivalence after binder flattening.
pub fn alpha_eq(a: &Term, b: &Term) -> bool {
    alpha_normalize(a) == alpha_normalize(b)
}

fn canon_name(i: usize) -> String {
    format!("$v{i}")
}

fn norm(t: &Term, env: &mut HashMap<String, String>, counter: &mut usize) -> Term {
    match t {
        Term::Var(n, s) => {
            let name = env.get(n).cloned().unwrap_or_else(|| n.clone());
            Term::Var(name, s.clone())
        }
        Term::BoolLit(_) | Term::IntLit(_) => t.clone(),
        Term::App(f, args) => {
            Term::App(f.clone(), args.iter().map(|a| norm(a, env, counter)).collect())
        }
        Term::Forall(..) => norm_binder(t, true, env, counter),
        Term::Exists(..) => norm_binder(t, false, env, counter),
        Term::Not(a) => Term::not(norm(a, env, counter)),
        Term::And(ts) => Term::And(ts.iter().map(|a| norm(a, env, counter)).collect()),
        Term::Or(ts) => Term::Or(ts.iter().map(|a| norm(a, env, counter)).collect()),
        Term::Implies(a, b) => {
            Term::Implies(Box::new(norm(a, env, counter)), Box::new(norm(b, env, counter)))
        }
        Term::Eq(a, b) => Term::eq(norm(a, env, counter), norm(b, env, counter)),
        Term::Ite(a, b, c) => Term::Ite(
            Box::new(norm(a, env, counter)),
            Box::new(norm(b, env, counter)),
            Box::new(norm(c, env, counter)),
        ),
        Term::As(a, s) => Term::As(Box::new(norm(a, env, counter)), s.clone()),
    }
}

fn norm_binder(
    t: &Term,
    universal: bool,
    env: &mut HashMap<String, String>,
    counter: &mut usize,
) -> Term {
    // Flatten directly nested binders of the same quantifier.
    let mut binders: Vec<(String, Sort)> = Vec::new();
    let mut body = t;
    while let (Term::Forall(bs, inner), true) | (Term::Exists(bs, inner), false) =
        (body, universal)
    {
        binders.extend(bs.iter().cloned());
        body = inner;
    }
    let mut shadowed = Vec::new();
    let mut new_binders = Vec::new();
    for (n, s) in &binders {
        let fresh = canon_name(*counter);
        *counter += 1;
        shadowed.push((n.clone(), env.insert(n.clone(), fresh.clone())));
        new_binders.push((fresh, s.clone()));
    }
    let new_body = norm(body, env, counter);
    for (n, old) in shadowed.into_iter().rev() {
        match old {
            Some(v) => {
                env.insert(n, v);
            }
            None => {
                env.remove(&n);
            }
        }
    }
    if universal {
        Term::Forall(new_binders, Box::new(new_body))
    } else {
        Term::Exists(new_binders, Box::new(new_body))
    }
}

/// Structural task equality up to alpha-equivalence of all formulas.
pub fn task_alpha_eq(a: &Task, b: &Task) -> bool {
    let norm_fns = |t: &Task| {
        t.functions
            .iter()
            .map(|f| {
                let mut f = f.clone();
                if let super::ast::FunctionBody::RecDefinition { body, recursive } = &f.body {
                    // Definition bodies are open in the parameters; close them
                    // for comparison.
                    let closed = Term::forall(
                        f.params.clone(),
                        Term::eq(
                            Term::app(
                                &f.name,
                                f.params.iter().map(|(n, s)| Term::Var(n.clone(), s.clone())).collect(),
                            ),
                            body.clone(),
                        ),
                    );
                    f.body = super::ast::FunctionBody::RecDefinition {
                        body: alpha_normalize(&closed),
                        recursive: *recursive,
                    };
                    f.params = Vec::new();
                } else {
                    // Declared functions carry no surface param names; only
                    // their sorts are comparable.
                    for (i, p) in f.params.iter_mut().enumerate() {
                        p.0 = format!("${i}");
                    }
                }
                f
            })
            .collect::<Vec<_>>()
    };
    a.datatype_groups == b.datatype_groups
        && a.declared_sorts == b.declared_sorts
        && norm_fns(a) == norm_fns(b)
        && a.axioms.len() == b.axioms.len()
        && a.axioms.iter().zip(&b.axioms).all(|(x, y)| alpha_eq(x, y))
        && alpha_eq(&a.goal, &b.goal)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smt::ast::Sort;

    fn nat() -> Sort {
        Sort::named("Nat")
    }

    fn v(n: &str) -> Term {
        Term::Var(n.into(), nat())
    }

    #[test]
    fn renaming_is_invisible() {
        let a = Term::forall(
            vec![("a".into(), nat()), ("b".into(), nat())],
            Term::eq(Term::app("mult", vec![v("a"), v("b")]), Term::app("mult", vec![v("b"), v("a")])),
        );
        let b = Term::forall(
            vec![("x".into(), nat()), ("y".into(), nat())],
            Term::eq(Term::app("mult", vec![v("x"), v("y")]), Term::app("mult", vec![v("y"), v("x")])),
        );
        assert!(alpha_eq(&a, &b));
    }

    #[test]
    fn different_heads_stay_distinct() {
        let a = Term::forall(
            vec![("x".into(), nat()), ("y".into(), nat())],
            Term::eq(Term::app("plus", vec![v("x"), v("y")]), Term::app("plus", vec![v("y"), v("x")])),
        );
        let b = Term::forall(
            vec![("x".into(), nat()), ("y".into(), nat())],
            Term::eq(Term::app("mult", vec![v("x"), v("y")]), Term::app("mult", vec![v("y"), v("x")])),
        );
        assert!(!alpha_eq(&a, &b));
    }

    #[test]
    fn nested_binders_flatten() {
        let body = Term::eq(Term::app("plus", vec![v("x"), v("y")]), Term::app("plus", vec![v("y"), v("x")]));
        let nested = Term::forall(
            vec![("x".into(), nat())],
            Term::forall(vec![("y".into(), nat())], body.clone()),
        );
        let flat = Term::forall(vec![("x".into(), nat()), ("y".into(), nat())], body);
        assert!(alpha_eq(&nested, &flat));
    }

    #[test]
    fn idempotent() {
        let t = Term::forall(
            vec![("x".into(), nat())],
            Term::Exists(
                vec![("y".into(), nat())],
                Box::new(Term::eq(v("x"), v("y"))),
            ),
        );
        let once = alpha_normalize(&t);
        assert_eq!(once, alpha_normalize(&once));
    }
}
