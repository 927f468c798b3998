//! Stable, `λ`-stable and `A`-stable models.
//!
//! The fast checks ground everything and search only below `A`; the
//! `*_reference` versions follow the definitions literally (every proper
//! subset of `At^I`, with the excluded-middle sentences added) and serve as
//! test oracles on small universes.

use std::collections::BTreeMap;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::ground::{ground_conjuncts, ground_with, G};
use super::interp::{em_atoms, ht_satisfies, satisfies, FiniteInterpretation, HTInterpretation};
use super::search::{self, all_models, first_model, here_subsets, Budget, Component, Problem};
use super::Universe;
use crate::error::{Error, Result};
use crate::intensionality::IntensionalityStatement;
use crate::syntax::{Formula, Var};

/// One part `(Γi, λi)` of a split.
#[derive(Clone, Debug)]
pub struct SplitComponent {
    pub gamma: Vec<Formula>,
    pub lambda: IntensionalityStatement,
}

/// `λ(u)` for every ground atom `u`, indexed by atom id.
///
/// Fails when a predicate used inside some λ-formula is not extensional
/// (its own formula is satisfiable somewhere).
pub fn ground_lambda(u: &Universe, lambda: &IntensionalityStatement) -> Result<Vec<G>> {
    let mut out = vec![G::F; u.space().len()];
    for (pred, e) in lambda.entries() {
        let Some(range) = u.space().pred_range(pred) else { continue };
        for id in range {
            let atom = u.atom(id);
            let env: BTreeMap<Var, _> = e.params.iter().cloned().zip(atom.args.iter().cloned()).collect();
            out[id as usize] = ground_with(u, &e.formula, &env)?;
        }
    }
    let budget = Budget::new(u.cap);
    for q in lambda.referenced_predicates() {
        let Some(range) = u.space().pred_range(&q) else { continue };
        for id in range {
            let g = &out[id as usize];
            let sat = match g {
                G::F => false,
                G::T => true,
                _ => {
                    let p = Problem { n: out.len(), components: vec![], constraints: vec![g.clone()], all_atoms: false };
                    first_model(&p, &budget)?.is_some()
                }
            };
            if sat {
                return Err(Error::Semantic(format!(
                    "predicate `{q}` occurs inside an intensionality formula but is not extensional (at {})",
                    u.atom(id)
                )));
            }
        }
    }
    Ok(out)
}

fn truth_of(i: &FiniteInterpretation) -> impl Fn(u32) -> bool + '_ {
    move |u| i.holds(u)
}

/// `I` is an `A`-stable model of `gamma`.
pub fn is_a_stable(i: &FiniteInterpretation, gamma: &[Formula], a: &FixedBitSet) -> Result<bool> {
    let u = i.universe();
    let g = ground_conjuncts(u, gamma)?;
    let truth = truth_of(i);
    if !g.iter().all(|c| c.eval(&truth)) {
        return Ok(false);
    }
    let a: Vec<u32> = i.bits().ones().filter(|&k| a.contains(k)).map(|k| k as u32).collect();
    search::is_a_stable(&g, &truth, &a, u.space().len(), &Budget::new(u.cap))
}

/// `I` is a stable model of `gamma` (every atom intensional).
pub fn is_stable(i: &FiniteInterpretation, gamma: &[Formula]) -> Result<bool> {
    is_a_stable(i, gamma, i.bits())
}

/// `I` is a `λ`-stable model of `gamma`, decided as `At^{I,λ}`-stability.
pub fn is_lambda_stable(i: &FiniteInterpretation, gamma: &[Formula], lambda: &IntensionalityStatement) -> Result<bool> {
    let l = ground_lambda(i.universe(), lambda)?;
    let truth = truth_of(i);
    let mut a = FixedBitSet::with_capacity(l.len());
    for k in i.bits().ones() {
        if l[k].eval(&truth) {
            a.insert(k);
        }
    }
    is_a_stable(i, gamma, &a)
}

/// Largest `|At^I|` the reference checks accept.
const REFERENCE_LIMIT: usize = 20;

/// Stability by definition: `I ⊨ gamma` and no `H ⊊ At^I` with
/// `⟨H, I⟩ ⊨ht gamma`.
pub fn is_stable_reference(i: &FiniteInterpretation, gamma: &[Formula]) -> Result<bool> {
    if !gamma.iter().all(|f| satisfies(i, f)) {
        return Ok(false);
    }
    let at: Vec<usize> = i.bits().ones().collect();
    if at.len() > REFERENCE_LIMIT {
        return Err(Error::Resource(format!("reference check over {} true atoms", at.len())));
    }
    let n = i.bits().len();
    for mask in 0..(1u64 << at.len()) - 1 {
        let mut h = FixedBitSet::with_capacity(n);
        for (k, &id) in at.iter().enumerate() {
            if mask >> k & 1 == 1 {
                h.insert(id);
            }
        }
        let ht = HTInterpretation::new(h, i.clone()).expect("subset of At^I");
        if gamma.iter().all(|f| ht_satisfies(&ht, f)) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Stability of `gamma ∪ EM_{I,A}` by definition.
pub fn is_a_stable_reference(i: &FiniteInterpretation, gamma: &[Formula], a: &FixedBitSet) -> Result<bool> {
    let mut g = gamma.to_vec();
    g.extend(em_atoms(i, a));
    is_stable_reference(i, &g)
}

/// Stability of `gamma ∪ EM(λ)` by definition.
pub fn is_lambda_stable_reference(
    i: &FiniteInterpretation,
    gamma: &[Formula],
    lambda: &IntensionalityStatement,
) -> Result<bool> {
    let mut g = gamma.to_vec();
    g.extend(lambda.em_theory(&i.universe().sig));
    is_stable_reference(i, &g)
}

fn wrap(u: &Arc<Universe>, models: Vec<FixedBitSet>) -> Vec<FiniteInterpretation> {
    let mut v: Vec<FiniteInterpretation> = models.into_iter().map(|b| FiniteInterpretation::new(u.clone(), b)).collect();
    v.sort_by_cached_key(|m| (m.bits().count_ones(..), m.canonical()));
    v
}

/// Every classical model of `gamma`.
pub fn enumerate_models(u: &Arc<Universe>, gamma: &[Formula]) -> Result<Vec<FiniteInterpretation>> {
    let p = Problem { n: u.space().len(), components: vec![], constraints: ground_conjuncts(u, gamma)?, all_atoms: true };
    Ok(wrap(u, all_models(&p, &Budget::new(u.cap))?))
}

/// Every `λ`-stable model of `gamma`, ordered by size and then text.
pub fn enumerate_lambda_stable_models(
    u: &Arc<Universe>,
    gamma: &[Formula],
    lambda: &IntensionalityStatement,
) -> Result<Vec<FiniteInterpretation>> {
    enumerate_split_models(u, &[SplitComponent { gamma: gamma.to_vec(), lambda: lambda.clone() }], &[])
}

/// Interpretations satisfying `psi` that are `λi`-stable models of `Γi` for
/// every component at once.
pub fn enumerate_split_models(
    u: &Arc<Universe>,
    components: &[SplitComponent],
    psi: &[Formula],
) -> Result<Vec<FiniteInterpretation>> {
    let mut comps = Vec::new();
    for c in components {
        comps.push(Component { gamma: ground_conjuncts(u, &c.gamma)?, lambda: ground_lambda(u, &c.lambda)? });
    }
    let p = Problem { n: u.space().len(), components: comps, constraints: ground_conjuncts(u, psi)?, all_atoms: true };
    Ok(wrap(u, all_models(&p, &Budget::new(u.cap))?))
}

/// Some interpretation satisfying `constraints` that is a `λi`-stable model
/// of `Γi` for every component, or `None`.
pub fn find_split_model(
    u: &Arc<Universe>,
    components: &[SplitComponent],
    constraints: &[Formula],
) -> Result<Option<FiniteInterpretation>> {
    let mut comps = Vec::new();
    for c in components {
        comps.push(Component { gamma: ground_conjuncts(u, &c.gamma)?, lambda: ground_lambda(u, &c.lambda)? });
    }
    let p = Problem { n: u.space().len(), components: comps, constraints: ground_conjuncts(u, constraints)?, all_atoms: true };
    Ok(first_model(&p, &Budget::new(u.cap))?.map(|b| FiniteInterpretation::new(u.clone(), b)))
}

/// Every HT-model `⟨H, I⟩` of `gamma ∪ EM(λ)`, ordered by `I` and then `H`.
pub fn enumerate_ht_models(
    u: &Arc<Universe>,
    gamma: &[Formula],
    lambda: &IntensionalityStatement,
) -> Result<Vec<HTInterpretation>> {
    let g = ground_conjuncts(u, gamma)?;
    let l = ground_lambda(u, lambda)?;
    let n = u.space().len();
    let budget = Budget::new(u.cap);
    let p = Problem { n, components: vec![], constraints: g.clone(), all_atoms: true };
    let mut out = Vec::new();
    for there in wrap(u, all_models(&p, &budget)?) {
        let truth = truth_of(&there);
        let a: Vec<u32> = there.bits().ones().map(|k| k as u32).filter(|&k| l[k as usize].eval(&truth)).collect();
        let mut fixed = there.bits().clone();
        a.iter().for_each(|&k| fixed.set(k as usize, false));
        let mut heres: Vec<FiniteInterpretation> = Vec::new();
        for s in here_subsets(&g, &truth, &a, n, &budget)? {
            let mut h = fixed.clone();
            s.ones().for_each(|k| h.insert(a[k] as usize));
            heres.push(FiniteInterpretation::new(u.clone(), h));
        }
        heres.sort_by_cached_key(|m| (m.bits().count_ones(..), m.canonical()));
        for h in heres {
            out.push(HTInterpretation::new(h.bits().clone(), there.clone()).expect("here below there"));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;
    use crate::semantics::universe_of;
    use crate::syntax::sentences;

    const PEX: &str = include_str!("../../../../problems/pex.htsplit");

    #[test]
    fn pex_has_four_lambda_stable_models() {
        let p = parse_problem(PEX).unwrap();
        let u = universe_of(&p).unwrap();
        let gamma = sentences(&p.statements);
        let ms = enumerate_lambda_stable_models(&u, &gamma, &p.intensional).unwrap();
        let text: Vec<String> = ms.iter().map(|m| m.to_string()).collect();
        assert_eq!(text, ["{}", "{p(1,1), p(1,2)}", "{p(2,1), p(2,2)}", "{p(1,1), p(1,2), p(2,1), p(2,2)}"]);
        for m in &ms {
            assert!(is_lambda_stable_reference(m, &gamma, &p.intensional).unwrap());
        }
    }

    #[test]
    fn fast_and_reference_checks_agree_on_pex() {
        let p = parse_problem(PEX).unwrap();
        let u = universe_of(&p).unwrap();
        let gamma = sentences(&p.statements);
        for mask in 0u32..16 {
            let mut b = FixedBitSet::with_capacity(4);
            (0..4).filter(|k| mask >> k & 1 == 1).for_each(|k| b.insert(k));
            let i = FiniteInterpretation::new(u.clone(), b);
            assert_eq!(
                is_lambda_stable(&i, &gamma, &p.intensional).unwrap(),
                is_lambda_stable_reference(&i, &gamma, &p.intensional).unwrap(),
                "{i}"
            );
            assert_eq!(is_stable(&i, &gamma).unwrap(), is_stable_reference(&i, &gamma).unwrap(), "{i}");
        }
    }

    #[test]
    fn nested_intensional_predicate_is_rejected() {
        let p = parse_problem("pred p. pred q. #intensional p : q. #intensional q : #true.").unwrap();
        let u = universe_of(&p).unwrap();
        assert!(ground_lambda(&u, &p.intensional).is_err());
        let ok = parse_problem("pred p. pred q. #intensional p : q.").unwrap();
        assert!(ground_lambda(&universe_of(&ok).unwrap(), &ok.intensional).is_ok());
    }

    #[test]
    fn ht_models_of_double_negation() {
        let p = parse_problem("pred p. not not p.").unwrap();
        let u = universe_of(&p).unwrap();
        let l = IntensionalityStatement::top(&p.sig);
        let hts = enumerate_ht_models(&u, &sentences(&p.statements), &l).unwrap();
        let text: Vec<String> = hts.iter().map(|h| h.to_string()).collect();
        assert_eq!(text, ["<{}, {p}>", "<{p}, {p}>"]);
    }
}
