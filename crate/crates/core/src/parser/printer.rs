use std::fmt::Write;

use super::{parse_formula, ProblemFile};
use crate::intensionality::IntensionalityStatement;
use crate::syntax::{annotated, Formula, Rule, Statement};

/// Canonical text for a problem file. Sections appear in a fixed order:
/// sorts, predicates, domains, statements, intensionality, parts,
/// partitions, theories, contexts, approximators, formulas.
pub fn print_problem(p: &ProblemFile) -> String {
    let mut out = String::from("% htsplit problem\n");
    let w = &mut out;
    for s in p.sig.sorts() {
        if s.is_int() {
            let (lo, hi) = p.domains.int_range.expect("the int sort is declared through its range");
            let _ = writeln!(w, "int range {lo}..{hi}.");
        } else if let Some(parent) = p.sig.parent(s) {
            let _ = writeln!(w, "sort {s} < {parent}.");
        } else {
            let _ = writeln!(w, "sort {s}.");
        }
    }
    for (name, sorts) in p.sig.predicates() {
        if sorts.is_empty() {
            let _ = writeln!(w, "pred {name}.");
        } else {
            let ss: Vec<String> = sorts.iter().map(|s| s.to_string()).collect();
            let _ = writeln!(w, "pred {name}({}).", ss.join(","));
        }
    }
    for (s, cs) in &p.domains.sorts {
        let names: Vec<String> = cs.iter().map(|c| c.to_string()).collect();
        let _ = writeln!(w, "domain {s} = {{{}}}.", names.join(","));
    }
    for st in &p.statements {
        let _ = writeln!(w, "{}", statement_text(p, st));
    }
    for line in lambda_lines(p, &p.intensional) {
        let _ = writeln!(w, "#intensional {line}.");
    }
    for (name, l) in &p.parts {
        let _ = writeln!(w, "#part {name} {{ {} }}.", lambda_lines(p, l).join(" ; "));
    }
    for d in &p.partitions {
        let ms: Vec<String> = d
            .members
            .iter()
            .map(|(part, th)| match th {
                Some(t) => format!("{part} : {t}"),
                None => part.to_string(),
            })
            .collect();
        let _ = writeln!(w, "#partition {} = {}.", d.name, ms.join(", "));
    }
    for (name, body) in &p.theories {
        let _ = writeln!(w, "#theory {name} {{");
        for st in body {
            let _ = writeln!(w, "  {}", statement_text(p, st));
        }
        let _ = writeln!(w, "}}.");
    }
    for (kw, list) in [("context", &p.contexts), ("approx", &p.approximators)] {
        for (name, body) in list {
            let _ = writeln!(w, "#{kw} {name} {{");
            for f in body {
                let _ = writeln!(w, "  {}", sentence_text(p, f));
            }
            let _ = writeln!(w, "}}.");
        }
    }
    for (name, f) in &p.formulas {
        let _ = writeln!(w, "#formula {name} : {}.", open_formula_text(p, f));
    }
    out
}

fn statement_text(p: &ProblemFile, st: &Statement) -> String {
    match st {
        Statement::Rule(r) => rule_text(r),
        Statement::Sentence(f) => sentence_text(p, f),
    }
}

fn rule_text(r: &Rule) -> String {
    format!("{r}.")
}

/// A closed sentence, printed without its outer universal prefix when the
/// parser would rebuild exactly the same closure from the matrix.
fn sentence_text(p: &ProblemFile, f: &Formula) -> String {
    let mut matrix = f;
    while let Formula::Forall(_, b) = matrix {
        matrix = b;
    }
    let fact_shaped = Rule::from_sentence(matrix).is_some_and(|r| r.body.is_empty());
    let text = annotated(matrix);
    let text = if fact_shaped { format!("({text})") } else { text };
    match parse_formula(p, &text) {
        Ok(g) if g.clone().universal_closure() == *f => format!("{text}."),
        _ => format!("{}.", annotated_closed(f)),
    }
}

fn annotated_closed(f: &Formula) -> String {
    let text = annotated(f);
    let fact_shaped = Rule::from_sentence(f).is_some_and(|r| r.body.is_empty());
    if fact_shaped {
        format!("({text})")
    } else {
        text
    }
}

fn open_formula_text(_p: &ProblemFile, f: &Formula) -> String {
    annotated(f)
}

fn lambda_lines(p: &ProblemFile, l: &IntensionalityStatement) -> Vec<String> {
    // Entries follow the predicate declaration order.
    p.sig
        .predicates()
        .filter_map(|(name, _)| l.entry(name).map(|e| (name, e)))
        .map(|(name, e)| {
            let head = if e.params.is_empty() {
                name.to_string()
            } else {
                let ps: Vec<String> = e.params.iter().map(|v| v.name.to_string()).collect();
                format!("{name}({})", ps.join(","))
            };
            format!("{head} : {}", annotated(&e.formula))
        })
        .collect()
}
