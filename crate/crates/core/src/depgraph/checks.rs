use std::sync::Arc;

use serde::Serialize;

use super::{bounded_sat, SatVerdict};
use crate::error::Result;
use crate::intensionality::IntensionalityStatement;
use crate::occurrences::{fresh_vars, pos_formula};
use crate::semantics::{find_split_model, FiniteInterpretation, SplitComponent, Universe};
use crate::syntax::{classify, rules_of, unruled_positive_atoms, Formula, Rule, Term};

/// Three-valued outcome of a bounded check.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Pass,
    Fail,
    /// Undecided within the search cap; never counted as a pass.
    Inconclusive,
}

impl Verdict {
    pub fn passed(self) -> bool {
        self == Verdict::Pass
    }

    /// Pass only if both pass; fail dominates inconclusive.
    pub fn and(self, other: Verdict) -> Verdict {
        match (self, other) {
            (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
            (Verdict::Pass, Verdict::Pass) => Verdict::Pass,
            _ => Verdict::Inconclusive,
        }
    }
}

/// Negativity verdict with the first offending head occurrence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Negativity {
    pub verdict: Verdict,
    pub witness: Option<String>,
}

impl Negativity {
    fn pass() -> Self {
        Negativity { verdict: Verdict::Pass, witness: None }
    }

    /// Records a failing (or undecided) occurrence, keeping the first
    /// failure as witness.
    fn record(&mut self, v: &SatVerdict, what: impl FnOnce() -> String) {
        let now = match v {
            SatVerdict::UnsatisfiableOnClosedDomains => return,
            SatVerdict::Satisfiable(_) => Verdict::Fail,
            SatVerdict::UnknownWithinBound(_) => Verdict::Inconclusive,
        };
        if self.verdict != Verdict::Fail && (now == Verdict::Fail || self.witness.is_none()) {
            self.witness = Some(what());
        }
        self.verdict = self.verdict.and(now);
    }

    pub fn is_negative(&self) -> bool {
        self.verdict.passed()
    }
}

/// `Π` is negative on `λ`: `∃X(B ∧ p(t) ∧ λ^p(t))` is unsatisfiable for every
/// rule and head atom `p(t)`.
pub fn is_negative_program(u: &Arc<Universe>, program: &[Rule], lambda: &IntensionalityStatement) -> Result<Negativity> {
    let mut out = Negativity::pass();
    for r in program {
        for h in &r.head {
            let Some(p) = h.user_name() else { continue };
            let s = Formula::and(vec![r.antecedent(), Formula::atom(h.clone()), lambda.instantiate(p, &h.args)]);
            let v = bounded_sat(u, &[s.existential_closure()])?;
            out.record(&v, || format!("head {h} of rule {r}"));
        }
    }
    Ok(out)
}

/// `Γ` is `Ψ`-negative on `λ`: `Ψ ∪ {∃XY(B ∧ Pos^Ψ(H) ∧ λ^p(Y))}` is
/// unsatisfiable for every rule `B → H` and strictly positive `p(t)` in `H`.
/// Strictly positive atoms outside every rule count as rules `⊤ → p(t)`.
pub fn is_psi_negative(
    u: &Arc<Universe>,
    gamma: &[Formula],
    lambda: &IntensionalityStatement,
    psi: &[Formula],
) -> Result<Negativity> {
    let mut out = Negativity::pass();
    let mut check = |b: &Formula, h: &Formula, scope: &[crate::syntax::Var], what: &dyn Fn(&str) -> String| -> Result<()> {
        for (hp, ha) in h.atom_occurrences() {
            if !classify(h, &hp).is_some_and(|pl| pl.strictly_positive()) {
                continue;
            }
            let p = ha.user_name().unwrap();
            let lam = lambda.get(&u.sig, p);
            if lam.formula.is_bottom() {
                continue;
            }
            let y = fresh_vars(u, ha, 'z');
            let pos = pos_formula(u, h, &hp, psi, &y)?;
            if pos.is_bottom() {
                continue;
            }
            let ys: Vec<Term> = y.iter().map(Term::var).collect();
            let s = Formula::exists_many(scope, Formula::and(vec![b.clone(), pos, lambda.instantiate(p, &ys)]));
            let mut theory = psi.to_vec();
            theory.push(s.existential_closure());
            let v = bounded_sat(u, &theory)?;
            out.record(&v, || what(&format!("{ha} at {hp}")));
        }
        Ok(())
    };
    for ro in rules_of(gamma) {
        let rule = Formula::implies(ro.antecedent.clone(), ro.consequent.clone());
        check(&ro.antecedent, &ro.consequent, &[], &|occ| {
            format!("{occ} in rule {rule} (sentence {})", ro.sentence + 1)
        })?;
    }
    for (k, f) in gamma.iter().enumerate() {
        for (path, scope) in unruled_positive_atoms(f) {
            let atom = f.subformula(&path).expect("path resolves").clone();
            check(&Formula::top(), &atom, &scope, &|occ| format!("{occ} in sentence {} at {path}", k + 1))?;
        }
    }
    Ok(out)
}

/// Outcome of the approximator check, with a λ-stable model of `Γ` that
/// violates `Ψ` when there is one.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Approximation {
    pub verdict: Verdict,
    pub counterexample: Option<FiniteInterpretation>,
}

/// `Ψ` is a `λ`-approximator of `Γ`: every `λ`-stable model of `Γ` satisfies `Ψ`.
pub fn is_approximator(
    u: &Arc<Universe>,
    psi: &[Formula],
    gamma: &[Formula],
    lambda: &IntensionalityStatement,
) -> Result<Approximation> {
    if psi.is_empty() {
        return Ok(Approximation { verdict: Verdict::Pass, counterexample: None });
    }
    let violated = Formula::not(Formula::and(psi.to_vec()));
    let comp = SplitComponent { gamma: gamma.to_vec(), lambda: lambda.clone() };
    match find_split_model(u, &[comp], &[violated]) {
        Ok(Some(m)) => Ok(Approximation { verdict: Verdict::Fail, counterexample: Some(m) }),
        Ok(None) => Ok(Approximation { verdict: Verdict::Pass, counterexample: None }),
        Err(e) if e.is_resource() => Ok(Approximation { verdict: Verdict::Inconclusive, counterexample: None }),
        Err(e) => Err(e),
    }
}
