use super::*;
use crate::depgraph::Verdict;
use crate::intensionality::{IntensionalityStatement, Partition};
use crate::parser::parse_problem;
use crate::semantics::universe_of;
use crate::syntax::{sentences, Formula};

const BLOCKS: &str = include_str!("../../../../problems/blocks.htsplit");
const BLOCKS_H3: &str = include_str!("../../../../problems/blocks_h3.htsplit");
const META: &str = include_str!("../../../../problems/meta.htsplit");

fn load(src: &str, partition: &str, context: Option<&str>) -> SplitProblem {
    SplitProblem::load(&parse_problem(src).unwrap(), partition, context).unwrap()
}

#[test]
fn blocks_program_split_passes() {
    let s = load(BLOCKS, "lambda_block", None);
    let r = check_split_program(&s.universe, &s.programs().unwrap(), &s.partition).unwrap();
    assert_eq!(r.hypotheses(), Verdict::Pass, "{}", r.to_text());
    assert_eq!(r.negativity.len(), 2);
}

#[test]
fn blocks_split_is_verified_at_horizon_three() {
    let s = load(BLOCKS_H3, "lambda_block", None);
    let r = check_split_program(&s.universe, &s.programs().unwrap(), &s.partition).unwrap();
    assert_eq!(r.hypotheses(), Verdict::Pass, "{}", r.to_text());
    let v = verify_split(&s.universe, &s.theories(), &s.partition, &[]).unwrap();
    assert!(matches!(v, Verification::Verified { models } if models > 0), "{v:?}");
}

/// `p :- q.` and `q :- p.` with each atom in its own member.
fn loop_split() -> (std::sync::Arc<crate::semantics::Universe>, Vec<Vec<Formula>>, Partition) {
    let p = parse_problem("pred p. pred q. #theory a { p :- q. }. #theory b { q :- p. }.").unwrap();
    let u = universe_of(&p).unwrap();
    let (mut lp, mut lq) = (IntensionalityStatement::bottom(), IntensionalityStatement::bottom());
    lp.set(&p.sig, "p".into(), vec![], Formula::top()).unwrap();
    lq.set(&p.sig, "q".into(), vec![], Formula::top()).unwrap();
    let part = Partition::new(IntensionalityStatement::top(&p.sig), vec![("lp".into(), lp), ("lq".into(), lq)]);
    (u, vec![sentences(p.theory("a").unwrap()), sentences(p.theory("b").unwrap())], part)
}

#[test]
fn loop_split_fails_separability_and_verification() {
    let (u, parts, part) = loop_split();
    let progs: Vec<_> = parts.iter().map(|g| g.iter().map(|f| crate::syntax::Rule::from_sentence(f).unwrap()).collect()).collect::<Vec<Vec<_>>>();
    let r = check_split_program(&u, &progs, &part).unwrap();
    assert_eq!(r.separable, Verdict::Fail);
    assert_eq!(r.cycle.as_ref().map(Vec::len), Some(3));
    let Verification::Mismatch { interpretation, side } = verify_split(&u, &parts, &part, &[]).unwrap() else {
        panic!("expected a mismatch")
    };
    assert_eq!(interpretation.to_string(), "{p, q}");
    assert_eq!(side, Side::PartsOnly);
    // The union's only stable model is still stable for each part.
    assert_eq!(check_one_direction(&u, &parts, &part).unwrap(), OneDirection::Holds { models: 1 });
}

#[test]
fn single_part_split_is_trivial() {
    let p = parse_problem("pred p. pred q. p :- not q.").unwrap();
    let u = universe_of(&p).unwrap();
    let top = IntensionalityStatement::top(&p.sig);
    let part = Partition::new(top.clone(), vec![("all".into(), top)]);
    let prog = crate::syntax::as_program(&p.statements).unwrap();
    let r = check_split_program(&u, &[prog], &part).unwrap();
    assert_eq!(r.hypotheses(), Verdict::Pass);
    assert!(r.negativity.is_empty());
}

#[test]
fn wrong_number_of_parts_is_reported() {
    let (u, parts, part) = loop_split();
    let r = check_split_theory(&u, &parts[..1], &part, &[]).unwrap();
    assert!(!r.partition_valid);
    assert_eq!(r.hypotheses(), Verdict::Fail);
}

#[test]
fn meta_split_under_completion_is_verified() {
    let s = load(META, "lambda", Some("psi3"));
    let parts = s.theories();
    let r = check_split_theory(&s.universe, &parts, &s.partition, &s.psi).unwrap();
    assert_eq!(r.hypotheses(), Verdict::Pass, "{}", r.to_text());
    let v = verify_split(&s.universe, &parts, &s.partition, &s.psi).unwrap();
    // holds(c), holds(r1) and holds(r2) are extensional: 2^3 choices.
    assert_eq!(v, Verification::Verified { models: 8 });
}

#[test]
fn meta_split_without_context_is_not_separable() {
    let s = load(META, "lambda", None);
    let parts = s.theories();
    let r = check_split_theory(&s.universe, &parts, &s.partition, &[]).unwrap();
    assert_eq!(r.separable, Verdict::Fail);
    assert!(r.cycle.as_ref().unwrap().iter().all(|v| v.starts_with("holds@")));
    assert!(matches!(check_one_direction(&s.universe, &parts, &s.partition).unwrap(), OneDirection::Holds { .. }));
}

#[test]
fn false_context_is_no_approximator() {
    let s = load(META, "lambda", None);
    let r = check_split_theory(&s.universe, &s.theories(), &s.partition, &[Formula::Bottom]).unwrap();
    let a = r.approximator.unwrap();
    assert_eq!(a.verdict, Verdict::Fail);
    assert!(a.counterexample.is_some());
}

#[test]
fn empty_theory_satisfies_one_direction() {
    let p = parse_problem("pred p.").unwrap();
    let u = universe_of(&p).unwrap();
    let top = IntensionalityStatement::top(&p.sig);
    let part = Partition::new(top.clone(), vec![("all".into(), top)]);
    assert_eq!(check_one_direction(&u, &[vec![]], &part).unwrap(), OneDirection::Holds { models: 1 });
}

/// `{p}` with `p` extensional, next to the empty theory with `p` intensional.
/// The union's stable model `{p}` is not stable for the second part, where
/// nothing supports `p`.
#[test]
fn one_direction_fails_when_support_lies_in_another_part() {
    let p = parse_problem("pred p. #theory a { p. }.").unwrap();
    let u = universe_of(&p).unwrap();
    let top = IntensionalityStatement::top(&p.sig);
    let part = Partition::new(top.clone(), vec![("bot".into(), IntensionalityStatement::bottom()), ("top".into(), top)]);
    assert_eq!(part.defect(&u).unwrap(), None);
    let parts = vec![sentences(p.theory("a").unwrap()), vec![]];
    let OneDirection::Violated { interpretation, part: which } = check_one_direction(&u, &parts, &part).unwrap() else {
        panic!("expected a violation")
    };
    assert_eq!(interpretation.to_string(), "{p}");
    assert_eq!(which, "top");
}

#[test]
fn report_serializes() {
    let s = load(META, "lambda", Some("psi3"));
    let mut r = check_split_theory(&s.universe, &s.theories(), &s.partition, &s.psi).unwrap();
    r.verification = Some(Verification::Verified { models: 1 });
    let j = serde_json::to_string(&r).unwrap();
    assert!(j.contains("\"separable\":\"pass\""), "{j}");
    assert!(j.contains("\"status\":\"verified\""), "{j}");
}

