use std::collections::BTreeSet;

use super::*;
use crate::intensionality::{IntensionalityStatement, Partition};
use crate::parser::{parse_problem, ProblemFile};
use crate::semantics::{satisfies, universe_of};
use crate::splitting::SplitProblem;
use crate::syntax::{as_program, sentences, Formula, Rule};

const BLOCKS: &str = include_str!("../../../../problems/blocks.htsplit");
const META: &str = include_str!("../../../../problems/meta.htsplit");

fn edges(g: &DependencyGraph) -> BTreeSet<(String, String)> {
    g.edge_labels()
}

fn set(pairs: &[(&str, &str)]) -> BTreeSet<(String, String)> {
    pairs.iter().map(|(a, b)| (a.to_string(), b.to_string())).collect()
}

fn program(p: &ProblemFile, theory: &str) -> Vec<Rule> {
    as_program(p.theory(theory).unwrap()).unwrap()
}

fn blocks() -> (ProblemFile, SplitProblem) {
    let p = parse_problem(BLOCKS).unwrap();
    let s = SplitProblem::load(&p, "lambda_block", None).unwrap();
    (p, s)
}

#[test]
fn blocks_graph_has_five_edges() {
    let (p, s) = blocks();
    let prog: Vec<Rule> = [program(&p, "lower"), program(&p, "upper")].concat();
    let g = program_dep_graph(&s.universe, &prog, &s.partition).unwrap();
    let vs: Vec<&str> = g.vertices.iter().map(|v| v.label.as_str()).collect();
    assert_eq!(vs, ["non@beta1", "non@beta2", "on@beta1", "on@beta2"]);
    assert_eq!(
        edges(&g),
        set(&[
            ("on@beta1", "on@beta1"),
            ("on@beta2", "on@beta2"),
            ("on@beta2", "on@beta1"),
            ("non@beta1", "on@beta1"),
            ("non@beta2", "on@beta2"),
        ])
    );
    assert!(!g.has_edge("on@beta1", "on@beta2"));
    assert!(g.is_separable());
    for ps in g.edges.values() {
        for pv in ps {
            let w = pv.verdict.witness().expect("decisive edge");
            assert!(!w.universe().space().is_empty());
        }
    }
}

#[test]
fn blocks_theory_graph_without_context_matches_program_graph() {
    let (p, s) = blocks();
    let prog: Vec<Rule> = [program(&p, "lower"), program(&p, "upper")].concat();
    let gamma: Vec<Formula> = prog.iter().map(Rule::to_sentence).collect();
    let pg = program_dep_graph(&s.universe, &prog, &s.partition).unwrap();
    let tg = theory_dep_graph(&s.universe, &gamma, &s.partition, &[]).unwrap();
    assert_eq!(edges(&pg), edges(&tg));
}

#[test]
fn blocks_parts_are_negative() {
    let (p, s) = blocks();
    let lower = is_negative_program(&s.universe, &program(&p, "lower"), p.part("beta2").unwrap()).unwrap();
    let upper = is_negative_program(&s.universe, &program(&p, "upper"), p.part("beta1").unwrap()).unwrap();
    assert!(lower.is_negative(), "{lower:?}");
    assert!(upper.is_negative(), "{upper:?}");
    // The other way round is false: lower defines on(b,l,1) and beta1 holds there.
    let back = is_negative_program(&s.universe, &program(&p, "lower"), p.part("beta1").unwrap()).unwrap();
    assert_eq!(back.verdict, Verdict::Fail);
    assert!(back.witness.is_some());
    // The theory-level check agrees on programs.
    let lower_t = sentences(p.theory("lower").unwrap());
    assert!(is_psi_negative(&s.universe, &lower_t, p.part("beta2").unwrap(), &[]).unwrap().is_negative());
    assert_eq!(is_psi_negative(&s.universe, &lower_t, p.part("beta1").unwrap(), &[]).unwrap().verdict, Verdict::Fail);
}

#[test]
fn every_program_is_negative_on_bottom() {
    let (p, s) = blocks();
    let all: Vec<Rule> = as_program(&p.statements).unwrap();
    let n = is_negative_program(&s.universe, &all, &IntensionalityStatement::bottom()).unwrap();
    assert!(n.is_negative());
}

fn tiny(src: &str) -> (ProblemFile, std::sync::Arc<crate::semantics::Universe>) {
    let p = parse_problem(src).unwrap();
    let u = universe_of(&p).unwrap();
    (p, u)
}

#[test]
fn loop_gives_two_cycle_and_empty_program_only_vertices() {
    let (p, u) = tiny("pred p. pred q. p :- q. q :- p.");
    let part = Partition::of_members(&p.sig, vec![("all".into(), IntensionalityStatement::top(&p.sig))]);
    let g = program_dep_graph(&u, &as_program(&p.statements).unwrap(), &part).unwrap();
    assert_eq!(edges(&g), set(&[("p@all", "q@all"), ("q@all", "p@all")]));
    assert!(g.is_separable());
    let g0 = program_dep_graph(&u, &[], &part).unwrap();
    assert_eq!(g0.vertices.len(), 2);
    assert!(g0.edges.is_empty());

    let (mut lp, mut lq) = (IntensionalityStatement::bottom(), IntensionalityStatement::bottom());
    lp.set(&p.sig, "p".into(), vec![], Formula::top()).unwrap();
    lq.set(&p.sig, "q".into(), vec![], Formula::top()).unwrap();
    let split = Partition::of_members(&p.sig, vec![("lp".into(), lp), ("lq".into(), lq)]);
    let g = program_dep_graph(&u, &as_program(&p.statements).unwrap(), &split).unwrap();
    let cycle = g.mixed_cycle().expect("mixed cycle");
    assert_eq!(cycle.first(), cycle.last());
    assert_eq!(cycle.len(), 3);
}

#[test]
fn unreachable_occurrence_contributes_no_edge() {
    let (p, u) = tiny("pred p. pred q. #theory t { (q | (#false & p)) -> p. }.");
    let part = Partition::of_members(&p.sig, vec![("all".into(), IntensionalityStatement::top(&p.sig))]);
    let g = theory_dep_graph(&u, &sentences(p.theory("t").unwrap()), &part, &[]).unwrap();
    assert_eq!(edges(&g), set(&[("p@all", "q@all")]));
}

fn meta(partition: &str, context: Option<&str>) -> SplitProblem {
    SplitProblem::load(&parse_problem(META).unwrap(), partition, context).unwrap()
}

#[test]
fn meta_graph_without_context_is_mutual_and_reflexive() {
    let s = meta("pair", None);
    let gamma: Vec<Formula> = s.theories().concat();
    let g = theory_dep_graph(&s.universe, &gamma, &s.partition, &s.psi).unwrap();
    assert_eq!(
        edges(&g),
        set(&[
            ("holds@gamma1", "holds@gamma1"),
            ("holds@gamma1", "holds@gamma2"),
            ("holds@gamma2", "holds@gamma1"),
            ("holds@gamma2", "holds@gamma2"),
        ])
    );
    assert!(!g.is_separable());
}

#[test]
fn meta_graph_under_completion_has_one_edge() {
    let s = meta("pair", Some("psi3"));
    let gamma: Vec<Formula> = s.theories().concat();
    let g = theory_dep_graph(&s.universe, &gamma, &s.partition, &s.psi).unwrap();
    assert_eq!(edges(&g), set(&[("holds@gamma1", "holds@gamma2")]));
    assert!(g.is_separable());
    // Replaying the witness: it satisfies the context.
    let w = g.edges.values().next().unwrap()[0].verdict.witness().unwrap().clone();
    assert!(s.psi.iter().all(|f| satisfies(&w, f)));
}

#[test]
fn meta_three_way_graph_is_separable_under_completion() {
    let s = meta("lambda", Some("psi3"));
    let gamma: Vec<Formula> = s.theories().concat();
    let g = theory_dep_graph(&s.universe, &gamma, &s.partition, &s.psi).unwrap();
    let holds: BTreeSet<_> = edges(&g).into_iter().filter(|(a, b)| a.starts_with("holds") && b.starts_with("holds")).collect();
    assert_eq!(holds, set(&[("holds@gamma1", "holds@gamma2")]));
    assert!(g.is_separable(), "{:?}", g.mixed_cycle());
    let unguarded = theory_dep_graph(&s.universe, &gamma, &s.partition, &[]).unwrap();
    assert!(!unguarded.is_separable());
    // A stronger context never adds edges.
    assert!(edges(&g).is_subset(&edges(&unguarded)));
}

#[test]
fn first_meta_rule_is_negative_on_the_other_members() {
    let s = meta("lambda", Some("psi3"));
    let g1 = &s.theories()[0];
    for j in [1, 2] {
        let n = is_psi_negative(&s.universe, g1, s.partition.member(j), &s.psi).unwrap();
        assert!(n.is_negative(), "{}: {n:?}", s.partition.name(j));
    }
    let n = is_psi_negative(&s.universe, g1, s.partition.member(0), &s.psi).unwrap();
    assert_eq!(n.verdict, Verdict::Fail);
}

#[test]
fn approximators() {
    let s = meta("lambda", Some("psi3"));
    let gamma: Vec<Formula> = s.theories().concat();
    let lam = s.lambda();
    assert_eq!(is_approximator(&s.universe, &[], &gamma, lam).unwrap().verdict, Verdict::Pass);
    assert_eq!(is_approximator(&s.universe, &s.psi, &gamma, lam).unwrap().verdict, Verdict::Pass);
    let bad = is_approximator(&s.universe, &[Formula::Bottom], &gamma, lam).unwrap();
    assert_eq!(bad.verdict, Verdict::Fail);
    assert!(bad.counterexample.is_some());
}

#[test]
fn grounded_graph_of_simple_rule() {
    let (p, u) = tiny("pred p. pred q. p :- q. q.");
    let gamma = sentences(&p.statements);
    let i = crate::semantics::FiniteInterpretation::new(u.clone(), fixedbitset::FixedBitSet::with_capacity_and_blocks(2, [3]));
    let a = i.bits().clone();
    let g = grounded_dep_graph(&i, &a, &gamma, &|_| 0);
    assert_eq!(edges(&g), set(&[("p", "q")]));
    let empty = fixedbitset::FixedBitSet::with_capacity(2);
    assert!(grounded_dep_graph(&i, &empty, &gamma, &|_| 0).vertices.is_empty());
}

#[test]
fn verdict_combination() {
    use Verdict::*;
    assert_eq!(Pass.and(Pass), Pass);
    assert_eq!(Pass.and(Inconclusive), Inconclusive);
    assert_eq!(Inconclusive.and(Fail), Fail);
}
