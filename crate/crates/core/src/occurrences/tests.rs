use super::*;
use crate::parser::{parse_formula, parse_problem, ProblemFile};
use crate::semantics::{universe_of, HTInterpretation};
use crate::syntax::{sentences, Sort};

const PROP: &str = include_str!("../../../../problems/transforms_prop.htsplit");
const FO: &str = include_str!("../../../../problems/transforms_fo.htsplit");
const META: &str = include_str!("../../../../problems/meta.htsplit");

fn load(src: &str) -> (ProblemFile, Arc<Universe>) {
    let p = parse_problem(src).unwrap();
    let u = universe_of(&p).unwrap();
    (p, u)
}

fn same(p: &ProblemFile, got: &Formula, expected: &str) {
    let e = parse_formula(p, expected).unwrap();
    assert_eq!(normal_form(got), normal_form(&e), "got {got}, expected {e}");
}

#[test]
fn propositional_pnn_and_its_context() {
    let (p, u) = load(PROP);
    let f1 = p.formula("f1").unwrap();
    let occ = nth_occurrence(f1, "p", 1).unwrap();
    let got = pnn_formula(&u, f1, &occ, &[], &[]).unwrap();
    same(&p, &got, "r & p");
    let psi1 = p.context("psi1").unwrap();
    assert!(pnn_formula(&u, f1, &occ, psi1, &[]).unwrap().is_bottom());
    assert_eq!(restrict_formula(&u, f1, &[]).unwrap(), *f1);
    assert!(restrict_formula(&u, &Formula::Bottom, psi1).unwrap().is_bottom());
}

#[test]
fn first_order_pnn_equates_fresh_variable() {
    let (p, u) = load(FO);
    let f2 = p.formula("f2").unwrap();
    let occ = nth_occurrence(f2, "p", 1).unwrap();
    let Formula::Atom(a) = f2.subformula(&occ).unwrap() else { unreachable!() };
    let y = fresh_vars(&u, a, 'y');
    assert_eq!(y, vec![Var::new("$y0", Sort::new("obj"))]);
    let got = pnn_formula(&u, f2, &occ, &[], &y).unwrap();
    same(&p, &got, "exists X (r & p(X) & $y0 = X)");
    assert!(pnn_formula(&u, f2, &occ, p.context("psi1").unwrap(), &y).unwrap().is_bottom());
}

#[test]
fn distinguished_occurrences_of_f3() {
    let (p, u) = load(FO);
    let f3 = p.formula("f3").unwrap();
    let first = nth_occurrence(f3, "p", 1).unwrap();
    let second = nth_occurrence(f3, "p", 2).unwrap();
    let y = [Var::new("$y0", Sort::new("obj"))];
    same(&p, &pnn_formula(&u, f3, &first, &[], &y).unwrap(), "exists X (X = a & p(X) & $y0 = X)");
    same(&p, &pnn_formula(&u, f3, &second, &[], &y).unwrap(), "exists X (X = b & p(X) & $y0 = X)");
    let psi2 = p.context("psi2").unwrap();
    same(&p, &pnn_formula(&u, f3, &first, psi2, &y).unwrap(), "exists X (X = a & p(X) & $y0 = X)");
    assert!(pnn_formula(&u, f3, &second, psi2, &y).unwrap().is_bottom());
}

#[test]
fn meta_rule_transforms() {
    let (p, u) = load(META);
    let g1 = &sentences(p.theory("g1").unwrap())[0];
    let rule = &crate::syntax::rules_of(std::slice::from_ref(g1))[0];
    let h = &rule.consequent;
    let Formula::Atom(ha) = h else { panic!("atomic head") };
    let z = fresh_vars(&u, ha, 'z');
    same(&p, &pos_formula(&u, h, &OccurrencePath::root(), &[], &z).unwrap(), "holds(X) & X = $z0");
    let b = &rule.antecedent;
    let occ = nth_occurrence(b, "holds", 1).unwrap();
    let y = [Var::new("$y0", Sort::new("obj"))];
    same(
        &p,
        &pnn_formula(&u, b, &occ, &[], &y).unwrap(),
        "head(r1,X) & exists W (body(r1,W) & holds(W) & $y0 = W)",
    );
}

#[test]
fn polarity_mismatch_is_an_error() {
    let (p, u) = load(PROP);
    let rule = p.formula("rule1").unwrap();
    let body_p = nth_occurrence(rule, "p", 1).unwrap();
    assert!(pos_formula(&u, rule, &body_p, &[], &[]).is_err());
    assert!(nnn_formula(&u, rule, &body_p, &[], &[]).is_ok());
    let head_p = nth_occurrence(rule, "p", 2).unwrap();
    assert!(nnn_formula(&u, rule, &head_p, &[], &[]).is_err());
}

#[test]
fn grounded_sets_follow_the_recursion() {
    let (p, u) = load("pred p. pred q. pred r.");
    let all = FiniteInterpretation::new(u.clone(), (0..3).collect());
    let none = FiniteInterpretation::empty(u.clone());
    let f = parse_formula(&p, "(q -> p) & (not r -> q)").unwrap();
    // Atom ids: p = 0, q = 1, r = 2.
    assert_eq!(pos_atoms(&all, &f).ones().collect::<Vec<_>>(), vec![0]);
    assert_eq!(pnn_atoms(&all, &f).ones().collect::<Vec<_>>(), vec![0]);
    assert_eq!(nnn_atoms(&all, &f).ones().collect::<Vec<_>>(), vec![1]);
    assert_eq!(pos_atoms(&none, &f).count_ones(..), 0);
    let atom = parse_formula(&p, "q").unwrap();
    assert_eq!(nnn_atoms(&all, &atom).count_ones(..), 0);
    assert_eq!(pos_atoms(&all, &atom).ones().collect::<Vec<_>>(), vec![1]);
    assert_eq!(pos_atoms(&none, &atom).count_ones(..), 0);
    // One instance of the law: Pos_I(F) ⊆ H gives an HT-model.
    let h = HTInterpretation::new(pos_atoms(&all, &f), all.clone()).unwrap();
    assert!(crate::semantics::ht_satisfies(&h, &f));
}
