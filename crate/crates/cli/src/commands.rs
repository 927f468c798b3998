use std::sync::Arc;

use htsplit::depgraph::{program_dep_graph, theory_dep_graph, DependencyGraph, Verdict};
use htsplit::occurrences::{fresh_vars, normal_form, transform, Variant};
use htsplit::parser::{parse_problem, print_problem, ProblemFile};
use htsplit::semantics::{
    check_strong_equivalence, enumerate_ht_models, enumerate_lambda_stable_models, StrongEquivalence, Universe,
    DEFAULT_NODE_CAP,
};
use htsplit::splitting::{check_split_program, check_split_theory, verify_split, SplitProblem};
use htsplit::syntax::{sentences, Formula};
use htsplit::{depgraph::occurrence_by_name, intensionality::IntensionalityStatement, Error, Result};
use serde_json::json;

use crate::{Cli, Command, Format, Selection, SplitArgs, Status};

pub fn run(cli: &Cli) -> Result<Status> {
    match &cli.command {
        Command::Parse(input) => {
            let p = load(&input.file)?;
            let text = print_problem(&p);
            match cli.format {
                Format::Json => println!("{}", json!({ "canonical": text })),
                _ => print!("{text}"),
            }
            Ok(Status::Ok)
        }
        Command::Models { input, sel } => {
            let p = load(&input.file)?;
            let u = universe(&p, cli)?;
            let (gamma, lambda) = select(&p, sel)?;
            let models = enumerate_lambda_stable_models(&u, &gamma, &lambda)?;
            match cli.format {
                Format::Json => {
                    let list: Vec<Vec<String>> =
                        models.iter().map(|m| m.true_atoms().iter().map(|a| a.to_string()).collect()).collect();
                    println!("{}", json!({ "models": list }));
                }
                _ => models.iter().for_each(|m| println!("{m}")),
            }
            Ok(Status::Ok)
        }
        Command::HtModels { input, sel } => {
            let p = load(&input.file)?;
            let u = universe(&p, cli)?;
            let (gamma, lambda) = select(&p, sel)?;
            let models = enumerate_ht_models(&u, &gamma, &lambda)?;
            match cli.format {
                Format::Json => {
                    let list: Vec<_> = models
                        .iter()
                        .map(|m| {
                            json!({
                                "here": m.here_atoms().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                                "there": m.there.true_atoms().iter().map(|a| a.to_string()).collect::<Vec<_>>(),
                            })
                        })
                        .collect();
                    println!("{}", json!({ "models": list }));
                }
                _ => models.iter().for_each(|m| println!("{m}")),
            }
            Ok(Status::Ok)
        }
        Command::StrongEq { input, left, right, lambda } => {
            let p = load(&input.file)?;
            let u = universe(&p, cli)?;
            let g1 = sentences(theory(&p, left)?);
            let g2 = sentences(theory(&p, right)?);
            let l = lambda_of(&p, lambda.as_deref())?;
            let v = check_strong_equivalence(&u, &g1, &g2, &l)?;
            let (text, status) = match &v {
                StrongEquivalence::Equivalent => ("equivalent".to_string(), Status::Ok),
                StrongEquivalence::Counterexample { model, left: l } => {
                    let side = if *l { left } else { right };
                    (format!("counterexample {model} (HT-model of {side} only)"), Status::Failed)
                }
            };
            match cli.format {
                Format::Json => match v {
                    StrongEquivalence::Equivalent => println!("{}", json!({ "equivalent": true })),
                    StrongEquivalence::Counterexample { model, left: l } => println!(
                        "{}",
                        json!({ "equivalent": false, "model": model.to_string(), "side": if l { left } else { right } })
                    ),
                },
                _ => println!("{text}"),
            }
            Ok(status)
        }
        Command::Transform { input, formula, occurrence, variant, context } => {
            let p = load(&input.file)?;
            let u = universe(&p, cli)?;
            let f = p.formula(formula).ok_or_else(|| missing("formula", formula))?;
            let variant: Variant = variant.parse().map_err(Error::Semantic)?;
            let occ = occurrence_by_name(f, occurrence)?;
            let Some(Formula::Atom(atom)) = f.subformula(&occ) else { unreachable!("selectors resolve to atoms") };
            let y = fresh_vars(&u, atom, if variant == Variant::Pos { 'z' } else { 'y' });
            let psi = match context {
                Some(c) => p.context(c).ok_or_else(|| missing("context", c))?.to_vec(),
                None => Vec::new(),
            };
            let out = normal_form(&transform(&u, f, &occ, &psi, variant, &y)?);
            match cli.format {
                Format::Json => println!("{}", json!({ "formula": out.to_string() })),
                _ => println!("{out}"),
            }
            Ok(Status::Ok)
        }
        Command::Graph { input, split, allow_unknown } => {
            let p = load(&input.file)?;
            let s = split_problem(&p, split, cli)?;
            let g = graph(&p, &s, split)?;
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&g).expect("graphs serialize")),
                Format::DotLike => print!("{}", g.to_dot()),
                Format::Text => print!("{}", g.to_text()),
            }
            if g.has_unknown_edges() && !allow_unknown {
                eprintln!("some edge conditions were undecided within the cap; pass --allow-unknown to accept");
                return Ok(Status::Inconclusive);
            }
            Ok(Status::Ok)
        }
        Command::Split { input, split, verify } => {
            let p = load(&input.file)?;
            let s = split_problem(&p, split, cli)?;
            let programs = s.programs().filter(|_| s.psi.is_empty() && !split.theory_graph);
            let mut report = match &programs {
                Some(progs) => check_split_program(&s.universe, progs, &s.partition)?,
                None => check_split_theory(&s.universe, &s.theories(), &s.partition, &s.psi)?,
            };
            if *verify && report.partition_valid {
                report.verification = Some(verify_split(&s.universe, &s.theories(), &s.partition, &s.psi)?);
            }
            match cli.format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&report).expect("reports serialize")),
                _ => print!("{}", report.to_text()),
            }
            Ok(match report.verdict() {
                Verdict::Pass => Status::Ok,
                Verdict::Fail => Status::Failed,
                Verdict::Inconclusive => Status::Inconclusive,
            })
        }
        Command::Selftest => Ok(crate::selftest::run()),
    }
}

fn load(path: &std::path::Path) -> Result<ProblemFile> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Semantic(format!("cannot read {}: {e}", path.display())))?;
    parse_problem(&text).map_err(|e| Error::Semantic(format!("{}:{e}", path.display())))
}

fn missing(kind: &str, name: &str) -> Error {
    Error::Semantic(format!("no {kind} named `{name}`"))
}

fn universe(p: &ProblemFile, cli: &Cli) -> Result<Arc<Universe>> {
    let u = Universe::new(Arc::new(p.sig.clone()), p.domains.clone())?;
    Ok(Arc::new(u.with_cap(cli.cap.unwrap_or(DEFAULT_NODE_CAP))))
}

fn theory<'a>(p: &'a ProblemFile, name: &str) -> Result<&'a [htsplit::syntax::Statement]> {
    p.theory(name).ok_or_else(|| missing("theory", name))
}

fn lambda_of(p: &ProblemFile, name: Option<&str>) -> Result<IntensionalityStatement> {
    Ok(match name {
        Some("top") => IntensionalityStatement::top(&p.sig),
        Some("bottom") => IntensionalityStatement::bottom(),
        Some("intensional") => p.intensional.clone(),
        Some(n) => p.part(n).ok_or_else(|| missing("part", n))?.clone(),
        None if p.intensional.entries().next().is_some() => p.intensional.clone(),
        None => IntensionalityStatement::top(&p.sig),
    })
}

fn select(p: &ProblemFile, sel: &Selection) -> Result<(Vec<Formula>, IntensionalityStatement)> {
    let stmts = match &sel.theory {
        Some(t) => theory(p, t)?,
        None => &p.statements,
    };
    Ok((sentences(stmts), lambda_of(p, sel.lambda.as_deref())?))
}

fn split_problem(p: &ProblemFile, args: &SplitArgs, cli: &Cli) -> Result<SplitProblem> {
    let ctx = args.context.as_deref().or(args.approx.as_deref());
    let mut s = SplitProblem::load(p, &args.partition, ctx)?;
    s.universe = universe(p, cli)?;
    Ok(s)
}

/// The program graph when the parts are programs and there is no context,
/// the theory graph otherwise. Members without theories fall back to the
/// top-level statements.
fn graph(p: &ProblemFile, s: &SplitProblem, args: &SplitArgs) -> Result<DependencyGraph> {
    let mut theories: Vec<Formula> = s.theories().concat();
    let mut programs = s.programs().map(|ps| ps.concat());
    if s.parts.iter().all(Vec::is_empty) {
        theories = sentences(&p.statements);
        programs = htsplit::syntax::as_program(&p.statements);
    }
    match programs {
        Some(prog) if s.psi.is_empty() && !args.theory_graph => program_dep_graph(&s.universe, &prog, &s.partition),
        _ => theory_dep_graph(&s.universe, &theories, &s.partition, &s.psi),
    }
}
