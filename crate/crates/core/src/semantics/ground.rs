//! Grounding of sentences over a [`Universe`] into propositional formulas
//! over atom ids.
//!
//! Integer terms are evaluated in the mathematical integers. A quantifier
//! instance whose guard terms (atom arguments built with arithmetic that
//! become ground at that quantifier) fall outside the declared range does not
//! exist: it is skipped under `∀` and contributes nothing under `∃`. A ground
//! atom argument outside the range makes the atom false.

use std::collections::BTreeMap;

use super::Universe;
use crate::error::{Error, Result};
use crate::syntax::{CmpOp, Formula, Pred, Term, Value, Var};

/// A ground formula over atom ids. `¬F` is `Imp(F, F)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum G {
    T,
    F,
    Atom(u32),
    And(Vec<G>),
    Or(Vec<G>),
    Imp(Box<G>, Box<G>),
}

/// Three-valued truth: `0` false, `1` true, [`UNK`] unknown.
pub const UNK: u8 = 2;

impl G {
    pub fn and(items: Vec<G>) -> G {
        let mut out = Vec::with_capacity(items.len());
        for g in items {
            match g {
                G::T => {}
                G::F => return G::F,
                G::And(v) => out.extend(v),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => G::T,
            1 => out.pop().unwrap(),
            _ => G::And(out),
        }
    }

    pub fn or(items: Vec<G>) -> G {
        let mut out = Vec::with_capacity(items.len());
        for g in items {
            match g {
                G::F => {}
                G::T => return G::T,
                G::Or(v) => out.extend(v),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => G::F,
            1 => out.pop().unwrap(),
            _ => G::Or(out),
        }
    }

    pub fn imp(a: G, b: G) -> G {
        match (a, b) {
            (G::F, _) | (_, G::T) => G::T,
            (G::T, b) => b,
            (a, b) => G::Imp(Box::new(a), Box::new(b)),
        }
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(a: G) -> G {
        G::imp(a, G::F)
    }

    pub fn is_const(&self) -> bool {
        matches!(self, G::T | G::F)
    }

    /// Atom ids in the formula, with repetitions.
    pub fn atoms_into(&self, out: &mut Vec<u32>) {
        match self {
            G::T | G::F => {}
            G::Atom(a) => out.push(*a),
            G::And(v) | G::Or(v) => v.iter().for_each(|g| g.atoms_into(out)),
            G::Imp(a, b) => {
                a.atoms_into(out);
                b.atoms_into(out);
            }
        }
    }

    pub fn atoms(&self) -> Vec<u32> {
        let mut v = Vec::new();
        self.atoms_into(&mut v);
        v.sort_unstable();
        v.dedup();
        v
    }

    /// Classical truth under a total assignment.
    pub fn eval(&self, truth: &dyn Fn(u32) -> bool) -> bool {
        match self {
            G::T => true,
            G::F => false,
            G::Atom(a) => truth(*a),
            G::And(v) => v.iter().all(|g| g.eval(truth)),
            G::Or(v) => v.iter().any(|g| g.eval(truth)),
            G::Imp(a, b) => !a.eval(truth) || b.eval(truth),
        }
    }

    /// Strong Kleene truth under a partial assignment.
    pub fn kleene(&self, vals: &[u8]) -> u8 {
        match self {
            G::T => 1,
            G::F => 0,
            G::Atom(a) => vals[*a as usize],
            G::And(v) => {
                let mut r = 1;
                for g in v {
                    match g.kleene(vals) {
                        0 => return 0,
                        UNK => r = UNK,
                        _ => {}
                    }
                }
                r
            }
            G::Or(v) => {
                let mut r = 0;
                for g in v {
                    match g.kleene(vals) {
                        1 => return 1,
                        UNK => r = UNK,
                        _ => {}
                    }
                }
                r
            }
            G::Imp(a, b) => match a.kleene(vals) {
                0 => 1,
                x => match b.kleene(vals) {
                    1 => 1,
                    0 if x == 1 => 0,
                    _ => UNK,
                },
            },
        }
    }

    /// Replaces atoms by the value chosen by `f` (`None` keeps the atom).
    pub fn assign(&self, f: &dyn Fn(u32) -> Option<bool>) -> G {
        match self {
            G::T | G::F => self.clone(),
            G::Atom(a) => match f(*a) {
                Some(true) => G::T,
                Some(false) => G::F,
                None => self.clone(),
            },
            G::And(v) => G::and(v.iter().map(|g| g.assign(f)).collect()),
            G::Or(v) => G::or(v.iter().map(|g| g.assign(f)).collect()),
            G::Imp(a, b) => G::imp(a.assign(f), b.assign(f)),
        }
    }

    pub fn size(&self) -> usize {
        match self {
            G::T | G::F | G::Atom(_) => 1,
            G::And(v) | G::Or(v) => 1 + v.iter().map(G::size).sum::<usize>(),
            G::Imp(a, b) => 1 + a.size() + b.size(),
        }
    }
}

/// Upper bound on the number of ground nodes produced by one call.
const GROUND_NODE_LIMIT: usize = 20_000_000;

/// Value of a ground term in the mathematical integers, or `None` on
/// arithmetic overflow.
pub(crate) fn eval_math(t: &Term, env: &dyn Fn(&Var) -> Option<Value>) -> Option<Value> {
    match t {
        Term::Var(v) => env(v),
        Term::Name(v, _) => Some(v.clone()),
        Term::App(op, a, b) => match (eval_math(a, env)?, eval_math(b, env)?) {
            (Value::Int(x), Value::Int(y)) => op.apply(x, y).map(Value::Int),
            _ => None,
        },
    }
}

pub(crate) fn compare(op: CmpOp, a: &Value, b: &Value) -> bool {
    match (a, b) {
        (Value::Int(x), Value::Int(y)) => match op {
            CmpOp::Lt => x < y,
            CmpOp::Le => x <= y,
            CmpOp::Gt => x > y,
            CmpOp::Ge => x >= y,
            CmpOp::Ne => x != y,
        },
        _ => op == CmpOp::Ne && a != b,
    }
}

/// Guard terms of the quantifier binding `v` over `body`: arithmetic atom
/// arguments that mention `v` and no variable bound inside `body`.
pub(crate) fn guard_terms(body: &Formula, v: &Var) -> Vec<Term> {
    fn go(f: &Formula, v: &Var, inner: &mut Vec<Var>, out: &mut Vec<Term>) {
        match f {
            Formula::Atom(a) if matches!(a.pred, Pred::User(_)) => {
                for t in &a.args {
                    if matches!(t, Term::App(..)) && t.contains_var(v) {
                        let mut vs = Vec::new();
                        t.vars_into(&mut vs);
                        if !vs.iter().any(|w| inner.contains(w)) && !out.contains(t) {
                            out.push(t.clone());
                        }
                    }
                }
            }
            Formula::Forall(w, b) | Formula::Exists(w, b) => {
                inner.push(w.clone());
                go(b, v, inner, out);
                inner.pop();
            }
            _ => f.children().into_iter().for_each(|c| go(c, v, inner, out)),
        }
    }
    let mut out = Vec::new();
    go(body, v, &mut Vec::new(), &mut out);
    out
}

/// Whether a guard value exists in the universe.
pub(crate) fn guard_ok(u: &Universe, val: Option<Value>) -> bool {
    match (val, u.int_range()) {
        (Some(Value::Int(k)), Some((lo, hi))) => lo <= k && k <= hi,
        _ => false,
    }
}

/// `Term::Name` for a domain element of sort-appropriate kind.
pub fn name_of(u: &Universe, v: &Value) -> Term {
    match v {
        Value::Int(i) => Term::int(*i),
        Value::Sym(s) => Term::Name(v.clone(), u.constant_sort(s).cloned().unwrap_or_else(|| crate::syntax::Sort::new("?"))),
    }
}

struct Grounder<'a> {
    u: &'a Universe,
    env: Vec<(Var, Value)>,
    nodes: usize,
}

impl Grounder<'_> {
    fn lookup(&self, v: &Var) -> Option<Value> {
        self.env.iter().rev().find(|(w, _)| w == v).map(|(_, d)| d.clone())
    }

    fn term(&self, t: &Term) -> Result<Option<Value>> {
        let unbound = std::cell::Cell::new(None);
        let val = eval_math(t, &|v| {
            let r = self.lookup(v);
            if r.is_none() {
                unbound.set(Some(v.name.clone()));
            }
            r
        });
        if let Some(n) = unbound.into_inner() {
            return Err(Error::Semantic(format!("variable `{n}` is free; only sentences can be grounded")));
        }
        Ok(val)
    }

    fn go(&mut self, f: &Formula) -> Result<G> {
        self.nodes += 1;
        if self.nodes > GROUND_NODE_LIMIT {
            return Err(Error::Resource(format!("grounding exceeds {GROUND_NODE_LIMIT} nodes")));
        }
        Ok(match f {
            Formula::Bottom => G::F,
            Formula::Atom(a) => {
                let mut vals = Vec::with_capacity(a.args.len());
                for t in &a.args {
                    match self.term(t)? {
                        Some(v) => vals.push(v),
                        None => return Ok(G::F),
                    }
                }
                match &a.pred {
                    Pred::User(p) => match self.u.atom_id(p, &vals) {
                        Some(id) => G::Atom(id),
                        None => G::F,
                    },
                    Pred::Cmp(op) => {
                        if compare(*op, &vals[0], &vals[1]) {
                            G::T
                        } else {
                            G::F
                        }
                    }
                }
            }
            Formula::Eq(a, b) => match (self.term(a)?, self.term(b)?) {
                (Some(x), Some(y)) if x == y => G::T,
                _ => G::F,
            },
            Formula::And(v) => {
                let mut out = Vec::with_capacity(v.len());
                for g in v {
                    let g = self.go(g)?;
                    if g == G::F {
                        return Ok(G::F);
                    }
                    out.push(g);
                }
                G::and(out)
            }
            Formula::Or(v) => {
                let mut out = Vec::with_capacity(v.len());
                for g in v {
                    let g = self.go(g)?;
                    if g == G::T {
                        return Ok(G::T);
                    }
                    out.push(g);
                }
                G::or(out)
            }
            Formula::Implies(a, b) => {
                let a = self.go(a)?;
                if a == G::F {
                    return Ok(G::T);
                }
                G::imp(a, self.go(b)?)
            }
            Formula::Forall(v, body) | Formula::Exists(v, body) => {
                let forall = matches!(f, Formula::Forall(..));
                let guards = guard_terms(body, v);
                let mut out = Vec::new();
                for d in self.u.domain(&v.sort).to_vec() {
                    self.env.push((v.clone(), d));
                    let mut ok = true;
                    for t in &guards {
                        if !guard_ok(self.u, self.term(t)?) {
                            ok = false;
                            break;
                        }
                    }
                    let g = if ok { Some(self.go(body)?) } else { None };
                    self.env.pop();
                    match g {
                        Some(G::F) if forall => return Ok(G::F),
                        Some(G::T) if !forall => return Ok(G::T),
                        Some(g) => out.push(g),
                        None => {}
                    }
                }
                if forall {
                    G::and(out)
                } else {
                    G::or(out)
                }
            }
        })
    }
}

/// Grounds a sentence.
pub fn ground(u: &Universe, f: &Formula) -> Result<G> {
    Grounder { u, env: Vec::new(), nodes: 0 }.go(f)
}

/// Grounds a formula whose free variables are bound by `env`.
pub fn ground_with(u: &Universe, f: &Formula, env: &BTreeMap<Var, Value>) -> Result<G> {
    let env = env.iter().map(|(v, d)| (v.clone(), d.clone())).collect();
    Grounder { u, env, nodes: 0 }.go(f)
}

/// Grounds every sentence and splits top-level conjunctions. Trivially true
/// conjuncts are dropped; a false one is kept.
pub fn ground_conjuncts(u: &Universe, sentences: &[Formula]) -> Result<Vec<G>> {
    let mut out = Vec::new();
    for s in sentences {
        match ground(u, s)? {
            G::T => {}
            G::And(v) => out.extend(v),
            g => out.push(g),
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parser::parse_problem;
    use std::sync::Arc;

    fn universe(src: &str) -> (crate::parser::ProblemFile, Universe) {
        let p = parse_problem(src).unwrap();
        let u = Universe::new(Arc::new(p.sig.clone()), p.domains.clone()).unwrap();
        (p, u)
    }

    #[test]
    fn out_of_range_instances_are_dropped() {
        let (p, u) = universe("int range 0..3. pred q(int). q(T+1) :- q(T).");
        let g = ground_conjuncts(&u, &crate::syntax::sentences(&p.statements)).unwrap();
        // T = 0, 1, 2 only; the instance at T = 3 does not exist.
        assert_eq!(g.len(), 3);
        assert!(g.iter().all(|c| matches!(c, G::Imp(..))));
    }

    #[test]
    fn ground_out_of_range_atom_is_false() {
        let (p, u) = universe("int range 0..3. pred q(int). q(3+1) -> q(0).");
        let g = ground_conjuncts(&u, &crate::syntax::sentences(&p.statements)).unwrap();
        assert!(g.is_empty(), "false antecedent makes the implication true");
    }

    #[test]
    fn comparisons_are_mathematical() {
        let (p, u) = universe("int range 0..3. pred q(int). forall T (T + 1 > 3 -> q(T)).");
        let g = ground_conjuncts(&u, &crate::syntax::sentences(&p.statements)).unwrap();
        assert_eq!(g, vec![G::Atom(u.atom_id(&"q".into(), &[Value::Int(3)]).unwrap())]);
    }

    #[test]
    fn kleene_implication() {
        let g = G::imp(G::Atom(0), G::Atom(1));
        assert_eq!(g.kleene(&[0, UNK]), 1);
        assert_eq!(g.kleene(&[1, UNK]), UNK);
        assert_eq!(g.kleene(&[1, 0]), 0);
        assert_eq!(g.kleene(&[UNK, 1]), 1);
    }
}
