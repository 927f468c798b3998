use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::syntax::{Formula, Signature, Sort, Sym, Term, Var};

/// The formula attached to one predicate, over its parameter variables.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaEntry {
    pub params: Vec<Var>,
    pub formula: Formula,
}

/// Maps each predicate symbol to a formula over its argument variables.
/// Predicates without an explicit entry are extensional (`⊥`).
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IntensionalityStatement {
    entries: BTreeMap<Sym, LambdaEntry>,
}

/// Canonical parameters `X1, ..., Xn` for a predicate.
pub fn default_params(sorts: &[Sort]) -> Vec<Var> {
    sorts.iter().enumerate().map(|(i, s)| Var::new(&format!("X{}", i + 1), s.clone())).collect()
}

impl IntensionalityStatement {
    /// Every predicate extensional.
    pub fn bottom() -> Self {
        Self::default()
    }

    /// Every predicate of `sig` intensional.
    pub fn top(sig: &Signature) -> Self {
        let mut l = Self::default();
        for (p, sorts) in sig.predicates() {
            l.entries.insert(p.clone(), LambdaEntry { params: default_params(sorts), formula: Formula::top() });
        }
        l
    }

    /// Adds (or replaces) the entry for `pred`. The formula may only mention
    /// the parameters freely.
    pub fn set(&mut self, sig: &Signature, pred: Sym, params: Vec<Var>, formula: Formula) -> Result<()> {
        let sorts = sig
            .pred_sorts(&pred)
            .ok_or_else(|| Error::Semantic(format!("intensionality statement for undeclared predicate `{pred}`")))?;
        if sorts.len() != params.len() || sorts.iter().zip(&params).any(|(s, v)| *s != v.sort) {
            return Err(Error::Semantic(format!("parameters of `{pred}` do not match its declaration")));
        }
        for (i, v) in params.iter().enumerate() {
            if params[..i].iter().any(|w| w.name == v.name) {
                return Err(Error::Semantic(format!("parameter `{}` of `{pred}` is repeated", v.name)));
            }
        }
        if let Some(v) = formula.free_variables().into_iter().find(|v| !params.contains(v)) {
            return Err(Error::Semantic(format!(
                "variable `{}` is free in the formula for `{pred}` but is not one of its parameters",
                v.name
            )));
        }
        self.entries.insert(pred, LambdaEntry { params, formula });
        Ok(())
    }

    pub fn entry(&self, pred: &Sym) -> Option<&LambdaEntry> {
        self.entries.get(pred)
    }

    /// Explicit entries in predicate-name order.
    pub fn entries(&self) -> impl Iterator<Item = (&Sym, &LambdaEntry)> {
        self.entries.iter()
    }

    /// The entry for `pred`, with `⊥` and canonical parameters as default.
    pub fn get(&self, sig: &Signature, pred: &Sym) -> LambdaEntry {
        self.entries.get(pred).cloned().unwrap_or_else(|| LambdaEntry {
            params: default_params(sig.pred_sorts(pred).unwrap_or(&[])),
            formula: Formula::Bottom,
        })
    }

    /// `λ^p(t)`: the formula for `pred` with its parameters replaced by `args`.
    pub fn instantiate(&self, pred: &Sym, args: &[Term]) -> Formula {
        match self.entries.get(pred) {
            None => Formula::Bottom,
            Some(e) => {
                let b: BTreeMap<Var, Term> = e.params.iter().cloned().zip(args.iter().cloned()).collect();
                e.formula.substitute(&b)
            }
        }
    }

    /// Whether the formula for `pred` is syntactically `⊥` (after folding).
    pub fn is_syntactically_bottom(&self, pred: &Sym) -> bool {
        self.entries.get(pred).is_none_or(|e| e.formula.fold_constants().is_bottom())
    }

    pub fn is_syntactically_top(&self, pred: &Sym) -> bool {
        self.entries.get(pred).is_some_and(|e| e.formula.fold_constants().is_top())
    }

    /// Pointwise combination, renaming the parameters of `other` to ours.
    fn combine(&self, other: &Self, sig: &Signature, f: fn(Vec<Formula>) -> Formula) -> Self {
        let mut out = Self::default();
        let keys: std::collections::BTreeSet<&Sym> = self.entries.keys().chain(other.entries.keys()).collect();
        for p in keys {
            let a = self.get(sig, p);
            let b = other.get(sig, p);
            let args: Vec<Term> = a.params.iter().map(Term::var).collect();
            let b_on_a = match other.entries.get(p) {
                Some(_) => {
                    let bind: BTreeMap<Var, Term> = b.params.iter().cloned().zip(args.iter().cloned()).collect();
                    b.formula.substitute(&bind)
                }
                None => Formula::Bottom,
            };
            let formula = f(vec![a.formula, b_on_a]).fold_constants();
            out.entries.insert(p.clone(), LambdaEntry { params: a.params, formula });
        }
        out
    }

    /// `λ1 ⊔ λ2`: pointwise disjunction.
    pub fn join(&self, other: &Self, sig: &Signature) -> Self {
        self.combine(other, sig, Formula::or)
    }

    /// `λ1 ⊓ λ2`: pointwise conjunction.
    pub fn meet(&self, other: &Self, sig: &Signature) -> Self {
        self.combine(other, sig, Formula::and)
    }

    /// Predicates mentioned inside any λ-formula.
    pub fn referenced_predicates(&self) -> std::collections::BTreeSet<Sym> {
        self.entries.values().flat_map(|e| e.formula.predicates()).collect()
    }

    /// The excluded-middle theory `EM(λ)`: one sentence
    /// `∀X (¬λ^p(X) → p(X) ∨ ¬p(X))` per predicate of the signature.
    pub fn em_theory(&self, sig: &Signature) -> Vec<Formula> {
        sig.predicates()
            .map(|(p, _)| {
                let e = self.get(sig, p);
                let atom = Formula::user(p.as_str(), e.params.iter().map(Term::var).collect());
                let body = Formula::implies(
                    Formula::not(e.formula.clone()),
                    Formula::or(vec![atom.clone(), Formula::not(atom)]),
                );
                Formula::forall_many(&e.params, body)
            })
            .collect()
    }
}
