//! Quick end-to-end checks against the bundled problem files.

use htsplit::depgraph::{is_negative_program, program_dep_graph, theory_dep_graph, Verdict};
use htsplit::occurrences::{fresh_vars, normal_form, nth_occurrence, pnn_formula};
use htsplit::parser::parse_problem;
use htsplit::semantics::{enumerate_lambda_stable_models, universe_of};
use htsplit::splitting::{check_split_theory, verify_split, SplitProblem, Verification};
use htsplit::syntax::{sentences, Formula};
use htsplit::Result;

use crate::Status;

const PEX: &str = include_str!("../../../problems/pex.htsplit");
const BLOCKS: &str = include_str!("../../../problems/blocks.htsplit");
const META: &str = include_str!("../../../problems/meta.htsplit");
const PROP: &str = include_str!("../../../problems/transforms_prop.htsplit");

fn four_models() -> Result<bool> {
    let p = parse_problem(PEX)?;
    let u = universe_of(&p)?;
    let ms = enumerate_lambda_stable_models(&u, &sentences(&p.statements), &p.intensional)?;
    let got: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
    Ok(got == ["{}", "{p(1,1), p(1,2)}", "{p(2,1), p(2,2)}", "{p(1,1), p(1,2), p(2,1), p(2,2)}"])
}

fn blocks_graph() -> Result<bool> {
    let p = parse_problem(BLOCKS)?;
    let s = SplitProblem::load(&p, "lambda_block", None)?;
    let g = program_dep_graph(&s.universe, &s.programs().expect("rules").concat(), &s.partition)?;
    Ok(g.vertices.len() == 4 && g.edges.len() == 5 && !g.has_edge("on@beta1", "on@beta2"))
}

fn blocks_negative() -> Result<bool> {
    let p = parse_problem(BLOCKS)?;
    let s = SplitProblem::load(&p, "lambda_block", None)?;
    let progs = s.programs().expect("rules");
    let a = is_negative_program(&s.universe, &progs[0], s.partition.member(1))?;
    let b = is_negative_program(&s.universe, &progs[1], s.partition.member(0))?;
    Ok(a.is_negative() && b.is_negative())
}

fn transform_f1() -> Result<bool> {
    let p = parse_problem(PROP)?;
    let u = universe_of(&p)?;
    let f = p.formula("f1").expect("f1");
    let occ = nth_occurrence(f, "p", 1).expect("p");
    let Some(Formula::Atom(a)) = f.subformula(&occ) else { return Ok(false) };
    let out = normal_form(&pnn_formula(&u, f, &occ, &[], &fresh_vars(&u, a, 'y'))?);
    let under_psi1 = pnn_formula(&u, f, &occ, p.context("psi1").expect("psi1"), &[])?;
    Ok(out.to_string() == "r & p" && under_psi1.is_bottom())
}

fn meta_graph() -> Result<bool> {
    let p = parse_problem(META)?;
    let s = SplitProblem::load(&p, "pair", Some("psi3"))?;
    let g = theory_dep_graph(&s.universe, &s.theories().concat(), &s.partition, &s.psi)?;
    Ok(g.edges.len() == 1 && g.has_edge("holds@gamma1", "holds@gamma2"))
}

fn meta_split() -> Result<bool> {
    let p = parse_problem(META)?;
    let s = SplitProblem::load(&p, "lambda", Some("psi3"))?;
    let r = check_split_theory(&s.universe, &s.theories(), &s.partition, &s.psi)?;
    let v = verify_split(&s.universe, &s.theories(), &s.partition, &s.psi)?;
    Ok(r.hypotheses() == Verdict::Pass && matches!(v, Verification::Verified { .. }))
}

pub fn run() -> Status {
    type Check = (&'static str, fn() -> Result<bool>);
    let checks: [Check; 6] = [
        ("four lambda-stable models", four_models),
        ("blocks graph has five edges", blocks_graph),
        ("blocks parts are negative", blocks_negative),
        ("pnn of f1", transform_f1),
        ("meta graph under completion", meta_graph),
        ("meta split verified", meta_split),
    ];
    let mut status = Status::Ok;
    for (name, check) in checks {
        match check() {
            Ok(true) => println!("ok    {name}"),
            Ok(false) => {
                println!("FAIL  {name}");
                status = Status::Failed;
            }
            Err(e) => {
                println!("ERROR {name}: {e}");
                status = Status::Failed;
            }
        }
    }
    status
}
