//! Bounded strong equivalence under an intensionality statement: `Γ1` and
//! `Γ2` are compared through the HT-models of `Γi ∪ EM(λ)` over the declared
//! domains.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::ground::{ground_conjuncts, G, UNK};
use super::interp::{FiniteInterpretation, HTInterpretation};
use super::search::Budget;
use super::stable::ground_lambda;
use super::Universe;
use crate::error::Result;
use crate::intensionality::IntensionalityStatement;
use crate::syntax::Formula;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StrongEquivalence {
    /// Same HT-models over the declared domains (a bounded verdict).
    Equivalent,
    /// An HT-model of exactly one side; `left` tells which.
    Counterexample { model: HTInterpretation, left: bool },
}

fn and3(a: u8, b: u8) -> u8 {
    match (a, b) {
        (0, _) | (_, 0) => 0,
        (1, 1) => 1,
        _ => UNK,
    }
}

/// Three-valued HT truth at the here-world.
fn ht3(g: &G, here: &[u8], there: &[u8]) -> u8 {
    match g {
        G::T => 1,
        G::F => 0,
        G::Atom(a) => here[*a as usize],
        G::And(v) => {
            let mut r = 1;
            for c in v {
                r = and3(r, ht3(c, here, there));
                if r == 0 {
                    return 0;
                }
            }
            r
        }
        G::Or(v) => {
            let mut r = 0;
            for c in v {
                match ht3(c, here, there) {
                    1 => return 1,
                    UNK => r = UNK,
                    _ => {}
                }
            }
            r
        }
        G::Imp(x, y) => {
            let h = match ht3(x, here, there) {
                0 => 1,
                hx => match ht3(y, here, there) {
                    1 => 1,
                    0 if hx == 1 => 0,
                    _ => UNK,
                },
            };
            if h == 0 {
                return 0;
            }
            and3(h, g.kleene(there))
        }
    }
}

/// Atom states: `(here, there)` in the order tried.
const STATES: [(u8, u8); 3] = [(0, 0), (1, 1), (0, 1)];

struct Search<'a> {
    side: &'a [G],
    goal: &'a G,
    occ: Vec<Vec<u32>>,
    order: Vec<u32>,
    classical: &'a FixedBitSet,
    budget: &'a Budget,
}

struct St {
    here: Vec<u8>,
    there: Vec<u8>,
    status: Vec<u8>,
    sat: usize,
    ticks: u64,
}

impl Search<'_> {
    /// Finds an assignment making every `side` conjunct true and `goal` false.
    fn dfs(&self, st: &mut St, depth: usize) -> Result<bool> {
        st.ticks += 1;
        if st.ticks >= 1024 {
            self.budget.spend(st.ticks)?;
            st.ticks = 0;
        }
        let g = ht3(self.goal, &st.here, &st.there);
        if g == 1 {
            return Ok(false);
        }
        if g == 0 && st.sat == self.side.len() {
            return Ok(true);
        }
        if depth == self.order.len() {
            return Ok(false);
        }
        let u = self.order[depth] as usize;
        for (h, t) in STATES {
            if h != t && self.classical.contains(u) {
                continue;
            }
            st.here[u] = h;
            st.there[u] = t;
            let mut changed = Vec::new();
            let mut ok = true;
            for &c in &self.occ[u] {
                let c = c as usize;
                if st.status[c] == 1 {
                    continue;
                }
                let s = ht3(&self.side[c], &st.here, &st.there);
                if s != st.status[c] {
                    changed.push((c, st.status[c]));
                    st.status[c] = s;
                    if s == 1 {
                        st.sat += 1;
                    }
                    if s == 0 {
                        ok = false;
                        break;
                    }
                }
            }
            if ok && self.dfs(st, depth + 1)? {
                return Ok(true);
            }
            for (c, s0) in changed.into_iter().rev() {
                if st.status[c] == 1 {
                    st.sat -= 1;
                }
                st.status[c] = s0;
            }
            st.here[u] = UNK;
            st.there[u] = UNK;
        }
        Ok(false)
    }
}

/// An HT-model of every `side` conjunct violating some conjunct of `other`.
fn one_direction(
    n: usize,
    side: &[G],
    other: &[G],
    classical: &FixedBitSet,
    budget: &Budget,
) -> Result<Option<(FixedBitSet, FixedBitSet)>> {
    let mut occ = vec![Vec::new(); n];
    for (k, g) in side.iter().enumerate() {
        for u in g.atoms() {
            occ[u as usize].push(k as u32);
        }
    }
    let mut rest: Vec<u32> = side.iter().flat_map(G::atoms).collect();
    rest.sort_unstable();
    rest.dedup();
    for goal in other {
        let mut order = goal.atoms();
        order.extend(rest.iter().filter(|u| !order.contains(u)).collect::<Vec<_>>());
        let s = Search { side, goal, occ: occ.clone(), order, classical, budget };
        let (here, there) = (vec![UNK; n], vec![UNK; n]);
        let status: Vec<u8> = side.iter().map(|g| ht3(g, &here, &there)).collect();
        if status.contains(&0) {
            return Ok(None);
        }
        let sat = status.iter().filter(|&&x| x == 1).count();
        let mut st = St { here, there, status, sat, ticks: 0 };
        let found = s.dfs(&mut st, 0)?;
        budget.spend(st.ticks)?;
        if found {
            let mut h = FixedBitSet::with_capacity(n);
            let mut t = FixedBitSet::with_capacity(n);
            for u in 0..n {
                // Unassigned atoms are left false in both worlds.
                if st.here[u] == 1 {
                    h.insert(u);
                }
                if st.there[u] == 1 {
                    t.insert(u);
                }
            }
            return Ok(Some((h, t)));
        }
    }
    Ok(None)
}

/// Compares the HT-models of `Γ1 ∪ EM(λ)` and `Γ2 ∪ EM(λ)`.
pub fn check_strong_equivalence(
    u: &Arc<Universe>,
    gamma1: &[Formula],
    gamma2: &[Formula],
    lambda: &IntensionalityStatement,
) -> Result<StrongEquivalence> {
    let n = u.space().len();
    let l = ground_lambda(u, lambda)?;
    let mut classical = FixedBitSet::with_capacity(n);
    let mut em = Vec::new();
    for (k, g) in l.iter().enumerate() {
        match g {
            G::F => classical.insert(k),
            G::T => {}
            _ => {
                let a = G::Atom(k as u32);
                em.push(G::imp(G::not(g.clone()), G::or(vec![a.clone(), G::not(a)])));
            }
        }
    }
    let g1 = ground_conjuncts(u, gamma1)?;
    let g2 = ground_conjuncts(u, gamma2)?;
    let budget = Budget::new(u.cap);
    for (left, side, other) in [(true, &g1, &g2), (false, &g2, &g1)] {
        let mut s = side.clone();
        s.extend(em.iter().cloned());
        if let Some((h, t)) = one_direction(n, &s, other, &classical, &budget)? {
            let there = FiniteInterpretation::new(u.clone(), t);
            let model = HTInterpretation::new(h, there).expect("here below there");
            return Ok(StrongEquivalence::Counterexample { model, left });
        }
    }
    Ok(StrongEquivalence::Equivalent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;
    use crate::semantics::{ht_satisfies, universe_of};
    use crate::syntax::sentences;

    #[test]
    fn fact_and_double_negation_differ() {
        let p = parse_problem("pred p. #theory a { p. }. #theory b { not not p. }.").unwrap();
        let u = universe_of(&p).unwrap();
        let a = sentences(p.theory("a").unwrap());
        let b = sentences(p.theory("b").unwrap());
        let l = IntensionalityStatement::top(&p.sig);
        let StrongEquivalence::Counterexample { model, left } = check_strong_equivalence(&u, &a, &b, &l).unwrap() else {
            panic!("expected a counterexample")
        };
        assert_eq!(model.to_string(), "<{}, {p}>");
        assert!(!left);
        assert!(b.iter().all(|f| ht_satisfies(&model, f)));
        assert!(!a.iter().all(|f| ht_satisfies(&model, f)));
        // With p extensional the two coincide.
        let bottom = IntensionalityStatement::bottom();
        assert_eq!(check_strong_equivalence(&u, &a, &b, &bottom).unwrap(), StrongEquivalence::Equivalent);
    }

    #[test]
    fn theory_is_equivalent_to_itself() {
        let p = parse_problem("pred p. pred q. p :- not q. q :- not p.").unwrap();
        let u = universe_of(&p).unwrap();
        let g = sentences(&p.statements);
        let l = IntensionalityStatement::top(&p.sig);
        assert_eq!(check_strong_equivalence(&u, &g, &g, &l).unwrap(), StrongEquivalence::Equivalent);
    }
}
