//! Three-section labeled rendering of a task, with the goal stated
//! positively so the model sees the property to prove.

use std::fmt::Write;

use super::ast::Task;
use super::printer::term_to_smt2;

pub const DATATYPE_LABEL: &str = "; datatype definitions";
pub const FUNCTION_LABEL: &str = "; function definitions";
pub const GOAL_LABEL: &str = "; proof goal";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LabeledScript {
    pub datatype_section: String,
    pub function_section: String,
    pub goal_section: String,
    pub full_text: String,
}

pub fn preprocess_label(task: &Task) -> LabeledScript {
    let mut dt = String::new();
    for (name, arity) in &task.declared_sorts {
        let _ = writeln!(dt, "(declare-sort {name} {arity})");
    }
    for group in &task.datatype_groups {
        let one = Task {
            logic: None,
            datatype_groups: vec![group.clone()],
            declared_sorts: Vec::new(),
            functions: Vec::new(),
            axioms: Vec::new(),
            goal: super::ast::Term::BoolLit(true),
            source_path: None,
        };
        dt.push_str(&super::printer::render_declarations(&one));
    }

    let mut fns = String::new();
    for f in &task.functions {
        let one = Task {
            logic: None,
            datatype_groups: Vec::new(),
            declared_sorts: Vec::new(),
            functions: vec![f.clone()],
            axioms: Vec::new(),
            goal: super::ast::Term::BoolLit(true),
            source_path: None,
        };
        fns.push_str(&super::printer::render_declarations(&one));
    }
    for a in &task.axioms {
        let _ = writeln!(fns, "(assert {})", term_to_smt2(a));
    }

    let mut goal = String::new();
    let _ = writeln!(goal, "(assert {})", term_to_smt2(&task.goal));
    goal.push_str("(check-sat)\n");

    let mut full = String::new();
    if let Some(logic) = &task.logic {
        let _ = writeln!(full, "(set-logic {logic})");
    }
    let _ = writeln!(full, "{DATATYPE_LABEL}");
    full.push_str(&dt);
    let _ = writeln!(full, "{FUNCTION_LABEL}");
    full.push_str(&fns);
    let _ = writeln!(full, "{GOAL_LABEL}");
    full.push_str(&goal);

    LabeledScript {
        datatype_section: dt,
        function_section: fns,
        goal_section: goal,
        full_text: full,
    }
}
