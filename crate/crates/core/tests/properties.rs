//! Property suites for the laws the library relies on.

mod common;

use std::collections::{BTreeMap, BTreeSet};

use common::{fo_formula, prop, FO_HEADER};
use fixedbitset::FixedBitSet;
use htsplit::depgraph::{grounded_dep_graph, is_psi_negative, member_of, theory_dep_graph, Verdict};
use htsplit::intensionality::{equivalent, IntensionalityStatement};
use htsplit::occurrences::{fresh_vars, pos_atoms, pos_formula};
use htsplit::parser::{parse_formula, parse_problem};
use htsplit::semantics::{
    atoms_of_lambda, enumerate_lambda_stable_models, ht_satisfies, is_a_stable_reference,
    is_lambda_stable, is_lambda_stable_reference, is_stable, is_stable_reference, name_of, satisfies, universe_of,
    FiniteInterpretation, HTInterpretation,
};
use htsplit::splitting::{check_one_direction, check_split_theory, verify_split, OneDirection, SplitProblem, Verification};
use htsplit::syntax::{annotated, classify, rules_of, Formula, Rule, Sort, Term, Var};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    (0..=mask).filter(move |h| h & !mask == 0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn printed_sentences_parse_back(seed in any::<u64>()) {
        let file = parse_problem(FO_HEADER).unwrap();
        let f = fo_formula(&mut rng(seed), 4, true).universal_closure();
        let back = parse_formula(&file, &annotated(&f)).unwrap();
        prop_assert_eq!(back, f);
    }

    #[test]
    fn substitution_distributes(seed in any::<u64>()) {
        let mut r = rng(seed);
        let (f, g) = (fo_formula(&mut r, 3, true), fo_formula(&mut r, 3, true));
        let obj = Sort::new("obj");
        let b = BTreeMap::from([(Var::new("X", obj.clone()), Term::sym("a", obj.clone()))]);
        let (sf, sg) = (f.substitute(&b), g.substitute(&b));
        prop_assert_eq!(Formula::And(vec![f.clone(), g.clone()]).substitute(&b), Formula::And(vec![sf.clone(), sg.clone()]));
        prop_assert_eq!(Formula::Or(vec![f.clone(), g.clone()]).substitute(&b), Formula::Or(vec![sf.clone(), sg.clone()]));
        prop_assert_eq!(Formula::implies(f.clone(), g.clone()).substitute(&b), Formula::implies(sf.clone(), sg));
        let y = Var::new("Y", obj);
        prop_assert_eq!(Formula::exists(y.clone(), f.clone()).substitute(&b), Formula::exists(y, sf));
        // A bound variable shields its body.
        let x = Var::new("X", Sort::new("obj"));
        prop_assert_eq!(Formula::forall(x.clone(), f.clone()).substitute(&b), Formula::forall(x, f));
    }

    #[test]
    fn rules_of_a_program_match_its_rules(seed in any::<u64>()) {
        let p = prop(3);
        let mut r = rng(seed);
        let program: Vec<Formula> = (0..r.gen_range(1..5)).map(|_| p.rule(&mut r, &[0, 1, 2])).collect();
        let rules: Vec<Rule> = program.iter().filter_map(Rule::from_sentence).collect();
        prop_assume!(rules.len() == program.len());
        let ros = rules_of(&program);
        // Facts and constraints are rules with an empty body or head.
        let implications = program.iter().filter(|f| matches!(f, Formula::Implies(..))).count();
        prop_assert!(ros.len() >= implications);
        for ro in ros.iter().filter(|ro| ro.path.0.is_empty()) {
            let rule = &rules[ro.sentence];
            prop_assert_eq!(&ro.antecedent, &rule.antecedent());
            prop_assert_eq!(&ro.consequent, &rule.consequent());
        }
    }

    #[test]
    fn persistence_and_total_worlds(seed in any::<u64>()) {
        let p = prop(3);
        let mut r = rng(seed);
        let f = p.formula(&mut r, 4);
        let there: u32 = r.gen_range(0..8);
        let i = p.interp(there);
        for h in subsets(there) {
            let ht = HTInterpretation::new(p.bits(h), i.clone()).unwrap();
            if ht_satisfies(&ht, &f) {
                prop_assert!(satisfies(&i, &f), "{} at <{}, {}>", f, h, there);
            }
            if h == there {
                prop_assert_eq!(ht_satisfies(&ht, &f), satisfies(&i, &f));
            }
        }
    }

    #[test]
    fn polarity_facts(seed in any::<u64>()) {
        let f = fo_formula(&mut rng(seed), 5, true);
        for (path, _) in f.atom_occurrences() {
            let pl = classify(&f, &path).unwrap();
            if pl.strictly_positive() {
                prop_assert!(pl.positive() && pl.nonnegated());
            }
            if pl.negated {
                prop_assert!(!pl.strictly_positive());
            }
            prop_assert!(pl.positive() != pl.negative());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(1000))]

    /// `I ⊨ F` and `Pos_I(F) ⊆ H` give `⟨H, I⟩ ⊨ht F`.
    #[test]
    fn positive_atoms_suffice_for_here(seed in any::<u64>()) {
        let p = prop(3);
        let mut r = rng(seed);
        let f = p.formula(&mut r, 4);
        let i = p.interp(r.gen_range(0..8));
        prop_assume!(satisfies(&i, &f));
        let pos = pos_atoms(&i, &f);
        let there = i.bits().clone();
        for h in subsets(there.ones().map(|k| 1u32 << k).sum()) {
            let h = p.bits(h);
            if pos.is_subset(&h) {
                let ht = HTInterpretation::new(h, i.clone()).unwrap();
                prop_assert!(ht_satisfies(&ht, &f), "{}", f);
            }
        }
    }
}

#[test]
fn every_atom_intensional_means_plain_stability() {
    let p = prop(3);
    let alpha = common::rule_alphabet(&p);
    let top = IntensionalityStatement::top(&p.file.sig);
    for a in 0..alpha.len() {
        for b in a..alpha.len() {
            let gamma = vec![alpha[a].clone(), alpha[b].clone()];
            for m in 0..8 {
                let i = p.interp(m);
                let want = is_stable_reference(&i, &gamma).unwrap();
                assert_eq!(is_lambda_stable(&i, &gamma, &top).unwrap(), want, "{gamma:?} at {i}");
                assert_eq!(is_stable(&i, &gamma).unwrap(), want);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn lambda_stability_is_atom_set_stability(seed in any::<u64>()) {
        let p = prop(3);
        let mut r = rng(seed);
        let gamma: Vec<Formula> = (0..r.gen_range(1..4)).map(|_| p.formula(&mut r, 3)).collect();
        let lambda = p.lambda(r.gen_range(0..8));
        for m in 0..8 {
            let i = p.interp(m);
            let by_def = is_lambda_stable_reference(&i, &gamma, &lambda).unwrap();
            let by_atoms = is_a_stable_reference(&i, &gamma, &atoms_of_lambda(&i, &lambda)).unwrap();
            prop_assert_eq!(by_def, by_atoms);
            prop_assert_eq!(is_lambda_stable(&i, &gamma, &lambda).unwrap(), by_def);
        }
    }
}

/// Random intensionality statements for the first-order signature, drawn
/// from a pool of formulas per predicate.
fn fo_lambda(r: &mut impl Rng) -> IntensionalityStatement {
    let pools: [(&str, &[&str]); 3] = [
        ("p(X1)", &["#true", "#false", "X1 = a", "X1 = b", "not X1 = a", "X1 = a | X1 = b"]),
        ("q(X1,X2)", &["#true", "#false", "X1 = X2", "X1 = a", "X2 = b", "X1 = a & X2 = a"]),
        ("r", &["#true", "#false"]),
    ];
    let decls: String =
        pools.iter().map(|(atom, pool)| format!(" #intensional {atom} : {}.", pool[r.gen_range(0..pool.len())])).collect();
    parse_problem(&format!("{FO_HEADER}{decls}")).unwrap().intensional
}

fn has_forall(f: &Formula) -> bool {
    match f {
        Formula::Forall(..) => true,
        Formula::Atom(_) | Formula::Eq(..) | Formula::Bottom => false,
        Formula::And(v) | Formula::Or(v) => v.iter().any(has_forall),
        Formula::Implies(a, b) => has_forall(a) || has_forall(b),
        Formula::Exists(_, b) => has_forall(b),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(60))]

    #[test]
    fn join_and_meet_laws(seed in any::<u64>()) {
        let file = parse_problem(FO_HEADER).unwrap();
        let u = universe_of(&file).unwrap();
        let sig = &file.sig;
        let mut r = rng(seed);
        let (a, b, c) = (fo_lambda(&mut r), fo_lambda(&mut r), fo_lambda(&mut r));
        let eq = |x: &IntensionalityStatement, y: &IntensionalityStatement| equivalent(&u, x, y).unwrap();
        prop_assert!(eq(&a.join(&b, sig), &b.join(&a, sig)));
        prop_assert!(eq(&a.meet(&b, sig), &b.meet(&a, sig)));
        prop_assert!(eq(&a.join(&b, sig).join(&c, sig), &a.join(&b.join(&c, sig), sig)));
        prop_assert!(eq(&a.meet(&b, sig).meet(&c, sig), &a.meet(&b.meet(&c, sig), sig)));
        prop_assert!(eq(&a.join(&a, sig), &a));
        prop_assert!(eq(&a.meet(&a, sig), &a));
        let bot = IntensionalityStatement::bottom();
        prop_assert!(eq(&a.join(&bot, sig), &a));
        prop_assert!(eq(&a.meet(&bot, sig), &bot));
    }

    /// For implication-free `F`, a witness assignment of `Pos^∅(F)` makes
    /// the occurrence's atom true. `Pos` turns `∀` into `∃`, so `F` itself is
    /// only entailed when no universal quantifier is present.
    #[test]
    fn strictly_positive_transform_entails_the_formula(seed in any::<u64>()) {
        let file = parse_problem(FO_HEADER).unwrap();
        let u = universe_of(&file).unwrap();
        let f = fo_formula(&mut rng(seed), 3, false).existential_closure();
        let occs = f.atom_occurrences();
        prop_assume!(occs.iter().any(|(_, a)| a.user_name().is_some()));
        let (path, atom) = occs.into_iter().find(|(_, a)| a.user_name().is_some()).unwrap();
        let y = fresh_vars(&u, atom, 'y');
        let pos = pos_formula(&u, &f, &path, &[], &y).unwrap();
        let n = u.space().len();
        let mut tuples: Vec<Vec<Term>> = vec![vec![]];
        for v in &y {
            let names: Vec<Term> = u.domain(&v.sort).iter().map(|d| name_of(&u, d)).collect();
            tuples = tuples
                .into_iter()
                .flat_map(|t| names.iter().map(move |n| [t.clone(), vec![n.clone()]].concat()))
                .collect();
        }
        for mask in 0..(1u32 << n) {
            let mut bits = FixedBitSet::with_capacity(n);
            (0..n).filter(|k| mask >> k & 1 == 1).for_each(|k| bits.insert(k));
            let i = FiniteInterpretation::new(u.clone(), bits);
            for t in &tuples {
                let bind: BTreeMap<Var, Term> = y.iter().cloned().zip(t.iter().cloned()).collect();
                if satisfies(&i, &pos.substitute(&bind)) {
                    if !has_forall(&f) {
                        prop_assert!(satisfies(&i, &f), "{} from {}", f, pos);
                    }
                    let inst = Formula::user(atom.user_name().unwrap().as_str(), t.clone());
                    prop_assert!(satisfies(&i, &inst), "{} missing from {}", inst, i);
                }
            }
        }
    }

    /// Every atom of `Pos_I(F)` is witnessed by some strictly positive
    /// occurrence's `Pos^∅` transform.
    #[test]
    fn grounded_positive_atoms_have_a_formula_witness(seed in any::<u64>()) {
        let file = parse_problem(FO_HEADER).unwrap();
        let u = universe_of(&file).unwrap();
        let mut r = rng(seed);
        let f = fo_formula(&mut r, 3, true).universal_closure();
        let n = u.space().len();
        let mut bits = FixedBitSet::with_capacity(n);
        (0..n).filter(|_| r.gen_bool(0.5)).for_each(|k| bits.insert(k));
        let i = FiniteInterpretation::new(u.clone(), bits);
        let pos = pos_atoms(&i, &f);
        for id in pos.ones() {
            let ga = u.atom(id as u32);
            let args: Vec<Term> = ga.args.iter().map(|d| name_of(&u, d)).collect();
            let mut found = false;
            for (path, atom) in f.atom_occurrences() {
                if atom.user_name() != Some(&ga.pred) || !classify(&f, &path).unwrap().strictly_positive() {
                    continue;
                }
                let y = fresh_vars(&u, atom, 'y');
                let t = pos_formula(&u, &f, &path, &[], &y).unwrap();
                let bind: BTreeMap<Var, Term> = y.into_iter().zip(args.iter().cloned()).collect();
                found |= satisfies(&i, &t.substitute(&bind).existential_closure());
            }
            prop_assert!(found, "{} in Pos_I({})", ga, f);
        }
    }
}

/// Vertex label of ground atom `id` under its partition member.
fn class_label(s: &SplitProblem, i: &FiniteInterpretation, id: u32) -> String {
    let lambdas: Vec<IntensionalityStatement> = s.partition.members.iter().map(|(_, l)| l.clone()).collect();
    let k = member_of(i, &lambdas, id).expect("atom of At^{I,λ} lies in some member");
    format!("{}@{}", s.universe.atom(id).pred, s.partition.name(k))
}

fn project(s: &SplitProblem, abstract_edges: &BTreeSet<(String, String)>, gamma: &[Formula], i: &FiniteInterpretation) {
    let a = atoms_of_lambda(i, s.lambda());
    let lambdas: Vec<IntensionalityStatement> = s.partition.members.iter().map(|(_, l)| l.clone()).collect();
    let g = grounded_dep_graph(i, &a, gamma, &|id| member_of(i, &lambdas, id).unwrap());
    let ids: Vec<u32> = a.ones().map(|k| k as u32).collect();
    for &(v, w) in g.edges.keys() {
        let e = (class_label(s, i, ids[v]), class_label(s, i, ids[w]));
        assert!(abstract_edges.contains(&e), "{e:?} at {i}");
    }
    assert!(g.is_separable(), "grounded graph at {i}");
}

#[test]
fn meta_grounded_edges_project_onto_the_theory_graph() {
    let p = parse_problem(include_str!("../../../problems/meta.htsplit")).unwrap();
    let s = SplitProblem::load(&p, "lambda", Some("psi3")).unwrap();
    let gamma: Vec<Formula> = s.theories().concat();
    let g = theory_dep_graph(&s.universe, &gamma, &s.partition, &s.psi).unwrap();
    assert!(g.is_separable());
    // Models of the completion: the r1/r2 rows of head and body are fixed,
    // holds ranges over all 32 choices and the remaining rows are random.
    let fixed = ["head(r1,a)", "body(r1,b)", "head(r2,b)", "body(r2,c)"];
    let rows = ["head(r1,", "body(r1,", "head(r2,", "body(r2,"];
    let mut r = rng(11);
    let n = s.universe.space().len();
    for holds in 0..32u32 {
        for _ in 0..4 {
            let mut bits = FixedBitSet::with_capacity(n);
            for (k, a) in s.universe.space().atoms().iter().enumerate() {
                let text = a.to_string();
                let on = if rows.iter().any(|r| text.starts_with(r)) {
                    fixed.contains(&text.as_str())
                } else if let Some(x) = text.strip_prefix("holds(") {
                    let idx = ["a)", "b)", "c)", "r1)", "r2)"].iter().position(|y| *y == x).unwrap();
                    holds >> idx & 1 == 1
                } else {
                    r.gen_bool(0.3)
                };
                bits.set(k, on);
            }
            let i = FiniteInterpretation::new(s.universe.clone(), bits);
            assert!(s.psi.iter().all(|f| satisfies(&i, f)));
            project(&s, &g.edge_labels(), &gamma, &i);
        }
    }
}

#[test]
fn blocks_grounded_edges_project_onto_the_program_graph() {
    let p = parse_problem(include_str!("../../../problems/blocks_h3.htsplit")).unwrap();
    let s = SplitProblem::load(&p, "lambda_block", None).unwrap();
    let gamma: Vec<Formula> = s.theories().concat();
    let g = theory_dep_graph(&s.universe, &gamma, &s.partition, &[]).unwrap();
    let mut sample = enumerate_lambda_stable_models(&s.universe, &gamma, s.lambda()).unwrap();
    sample.truncate(300);
    let mut r = rng(7);
    let n = s.universe.space().len();
    for _ in 0..200 {
        let mut bits = FixedBitSet::with_capacity(n);
        (0..n).filter(|_| r.gen_bool(0.5)).for_each(|k| bits.insert(k));
        sample.push(FiniteInterpretation::new(s.universe.clone(), bits));
    }
    for i in &sample {
        project(&s, &g.edge_labels(), &gamma, i);
    }
}

#[test]
fn stronger_context_never_adds_edges() {
    let p = parse_problem(include_str!("../../../problems/meta.htsplit")).unwrap();
    let s = SplitProblem::load(&p, "lambda", Some("psi3")).unwrap();
    let gamma: Vec<Formula> = s.theories().concat();
    let graphs: Vec<(u32, BTreeSet<(String, String)>)> = (0..16u32)
        .map(|mask| {
            let psi: Vec<Formula> = s.psi.iter().enumerate().filter(|(k, _)| mask >> k & 1 == 1).map(|(_, f)| f.clone()).collect();
            (mask, theory_dep_graph(&s.universe, &gamma, &s.partition, &psi).unwrap().edge_labels())
        })
        .collect();
    for (m1, e1) in &graphs {
        for (m2, e2) in &graphs {
            if m1 & m2 == *m1 {
                assert!(e2.is_subset(e1), "context {m2:04b} adds edges over {m1:04b}");
            }
        }
    }
}

#[test]
fn edge_witnesses_satisfy_their_conditions() {
    for (src, partition, ctx) in [
        (include_str!("../../../problems/meta.htsplit"), "lambda", None),
        (include_str!("../../../problems/meta.htsplit"), "lambda", Some("psi3")),
        (include_str!("../../../problems/blocks.htsplit"), "lambda_block", None),
    ] {
        let p = parse_problem(src).unwrap();
        let s = SplitProblem::load(&p, partition, ctx).unwrap();
        let g = theory_dep_graph(&s.universe, &s.theories().concat(), &s.partition, &s.psi).unwrap();
        for pv in g.edges.values().flatten() {
            let w = pv.verdict.witness().expect("decisive");
            assert!(pv.condition.iter().all(|f| satisfies(w, f)), "{}", pv.rule);
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(150))]

    /// One direction of splitting holds once every part is negative on the
    /// other members.
    #[test]
    fn union_models_are_part_models_for_negative_parts(seed in any::<u64>()) {
        let p = prop(3);
        let mut r = rng(seed);
        let (part, _) = p.partition(&mut r);
        prop_assume!(part.defect(&p.u).unwrap().is_none());
        let parts: Vec<Vec<Formula>> =
            (0..2).map(|_| (0..r.gen_range(0..3)).map(|_| p.formula(&mut r, 3)).collect()).collect();
        let negative = (0..2).all(|i| is_psi_negative(&p.u, &parts[i], part.member(1 - i), &[]).unwrap().is_negative());
        prop_assume!(negative);
        let holds = matches!(check_one_direction(&p.u, &parts, &part).unwrap(), OneDirection::Holds { .. });
        prop_assert!(holds);
    }

    /// When every hypothesis passes, the split is verified.
    #[test]
    fn passing_hypotheses_verify(seed in any::<u64>()) {
        let p = prop(3);
        let mut r = rng(seed);
        let (part, owner) = p.partition(&mut r);
        prop_assume!(part.defect(&p.u).unwrap().is_none());
        let heads = |i: usize| -> Vec<usize> { (0..3).filter(|&k| owner[k] != Some(1 - i)).collect() };
        let parts: Vec<Vec<Formula>> =
            (0..2).map(|i| (0..r.gen_range(1..4)).map(|_| p.rule(&mut r, &heads(i))).collect()).collect();
        let report = check_split_theory(&p.u, &parts, &part, &[]).unwrap();
        prop_assume!(report.hypotheses() == Verdict::Pass);
        let v = verify_split(&p.u, &parts, &part, &[]).unwrap();
        prop_assert!(matches!(v, Verification::Verified { .. }), "{:?} {:?}", parts, v);
    }
}

#[test]
fn fact_supported_elsewhere_breaks_the_unrestricted_direction() {
    let p = prop(1);
    let parts = vec![vec![p.atom(0)], vec![]];
    let part = p.partition_of(&[Some(1)]);
    assert!(part.defect(&p.u).unwrap().is_none());
    let v = check_one_direction(&p.u, &parts, &part).unwrap();
    assert_eq!(v, OneDirection::Violated { interpretation: p.interp(1), part: "l2".into() });
    // The first part is not negative on the second member, so the
    // restricted form above does not apply.
    assert!(!is_psi_negative(&p.u, &parts[0], part.member(1), &[]).unwrap().is_negative());
}
