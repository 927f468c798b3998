//! Occurrence-directed transforms `F^Ψ`, `Pos^Ψ`, `Pnn^Ψ`, `Nnn^Ψ` and the
//! grounded atom sets `Pos_I`, `Pnn_I`, `Nnn_I`.
//!
//! Satisfiability of `Ψ ∪ {∃X F}` is decided by [`bounded_sat`]; an unknown
//! verdict counts as satisfiable, which can only add dependencies.

use std::sync::Arc;

use fixedbitset::FixedBitSet;

use crate::depgraph::bounded_sat;
use crate::error::{Error, Result};
use crate::semantics::{instances_of, satisfies, FiniteInterpretation, Universe};
use crate::syntax::{classify, Atom, Formula, OccurrencePath, Pred, Term, Var};

pub use crate::syntax::Polarity;

/// Which of the three occurrence transforms to build.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Variant {
    /// Strictly positive occurrence.
    Pos,
    /// Positive nonnegated occurrence.
    Pnn,
    /// Negative nonnegated occurrence.
    Nnn,
}

impl Variant {
    pub fn name(self) -> &'static str {
        match self {
            Variant::Pos => "pos",
            Variant::Pnn => "pnn",
            Variant::Nnn => "nnn",
        }
    }

    /// Whether an occurrence of this polarity may be transformed.
    pub fn admits(self, p: Polarity) -> bool {
        match self {
            Variant::Pos => p.strictly_positive(),
            Variant::Pnn => p.positive() && p.nonnegated(),
            Variant::Nnn => p.negative() && p.nonnegated(),
        }
    }

    fn flip(self) -> Variant {
        match self {
            Variant::Pnn => Variant::Nnn,
            Variant::Nnn => Variant::Pnn,
            Variant::Pos => Variant::Pos,
        }
    }
}

impl std::str::FromStr for Variant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "pos" => Ok(Variant::Pos),
            "pnn" => Ok(Variant::Pnn),
            "nnn" => Ok(Variant::Nnn),
            _ => Err(format!("unknown variant `{s}` (expected pos, pnn or nnn)")),
        }
    }
}

/// Fresh variables `$<prefix>0, $<prefix>1, ...` with the argument sorts of
/// the atom's predicate.
pub fn fresh_vars(u: &Universe, atom: &Atom, prefix: char) -> Vec<Var> {
    let sorts: Vec<_> = match &atom.pred {
        Pred::User(p) => u.sig.pred_sorts(p).map(|s| s.to_vec()).unwrap_or_default(),
        Pred::Cmp(_) => vec![],
    };
    sorts.into_iter().enumerate().map(|(k, s)| Var::new(&format!("${prefix}{k}"), s)).collect()
}

/// `Ψ ∪ {∃X f}` is satisfiable or undecided.
fn possibly_sat(u: &Arc<Universe>, f: &Formula, psi: &[Formula]) -> Result<bool> {
    if f.is_bottom() {
        return Ok(false);
    }
    let mut theory = psi.to_vec();
    theory.push(f.clone().existential_closure());
    Ok(bounded_sat(u, &theory)?.possibly_satisfiable())
}

/// `F^Ψ`: `f` when `Ψ ∪ {∃X f}` is satisfiable, `⊥` otherwise.
pub fn restrict_formula(u: &Arc<Universe>, f: &Formula, psi: &[Formula]) -> Result<Formula> {
    Ok(if possibly_sat(u, f, psi)? { f.clone() } else { Formula::Bottom })
}

struct Transform<'a> {
    u: &'a Arc<Universe>,
    psi: &'a [Formula],
    y: &'a [Var],
}

impl Transform<'_> {
    fn go(&self, f: &Formula, rest: Option<&[usize]>, v: Variant) -> Result<Formula> {
        if !possibly_sat(self.u, f, self.psi)? {
            return Ok(Formula::Bottom);
        }
        let Some(rest) = rest else { return Ok(f.clone()) };
        let inner = |i: usize| (rest.first() == Some(&i)).then(|| &rest[1..]);
        Ok(match f {
            Formula::Atom(a) => {
                let mut parts = vec![f.clone()];
                for (y, t) in self.y.iter().zip(&a.args) {
                    parts.push(Formula::eq(Term::var(y), t.clone()));
                }
                Formula::and(parts)
            }
            Formula::And(cs) => {
                let mut parts = Vec::with_capacity(cs.len());
                for (i, c) in cs.iter().enumerate() {
                    parts.push(self.go(c, inner(i), v)?);
                }
                Formula::and(parts)
            }
            Formula::Or(cs) => self.go(&cs[rest[0]], Some(&rest[1..]), v)?,
            Formula::Forall(x, b) | Formula::Exists(x, b) => Formula::exists(x.clone(), self.go(b, Some(&rest[1..]), v)?),
            Formula::Implies(a, b) => {
                if rest[0] == 0 && v != Variant::Pos {
                    self.go(a, Some(&rest[1..]), v.flip())?
                } else if rest[0] == 0 {
                    return Err(Error::Semantic("a strictly positive occurrence cannot lie in an antecedent".into()));
                } else {
                    let a = if possibly_sat(self.u, a, self.psi)? { (**a).clone() } else { Formula::Bottom };
                    Formula::and(vec![a, self.go(b, Some(&rest[1..]), v)?])
                }
            }
            Formula::Eq(..) | Formula::Bottom => unreachable!("occurrence paths end at user atoms"),
        })
    }
}

/// `Pos^Ψ(f)`, `Pnn^Ψ(f)` or `Nnn^Ψ(f)` for the atom occurrence at `occ`,
/// with `y` the fresh variables equated to its arguments. The result is
/// constant-folded.
pub fn transform(
    u: &Arc<Universe>,
    f: &Formula,
    occ: &OccurrencePath,
    psi: &[Formula],
    variant: Variant,
    y: &[Var],
) -> Result<Formula> {
    let atom = match f.subformula(occ) {
        Some(Formula::Atom(a)) if a.user_name().is_some() => a,
        _ => return Err(Error::Semantic(format!("no predicate occurrence at {occ}"))),
    };
    let pol = classify(f, occ).expect("path resolves");
    if !variant.admits(pol) {
        return Err(Error::Semantic(format!(
            "occurrence of `{}` at {occ} does not have the polarity required by {}",
            atom.user_name().unwrap(),
            variant.name()
        )));
    }
    if y.len() != atom.args.len() {
        return Err(Error::Semantic("fresh tuple has the wrong length".into()));
    }
    Ok(Transform { u, psi, y }.go(f, Some(&occ.0), variant)?.fold_constants())
}

pub fn pos_formula(u: &Arc<Universe>, f: &Formula, occ: &OccurrencePath, psi: &[Formula], y: &[Var]) -> Result<Formula> {
    transform(u, f, occ, psi, Variant::Pos, y)
}

pub fn pnn_formula(u: &Arc<Universe>, f: &Formula, occ: &OccurrencePath, psi: &[Formula], y: &[Var]) -> Result<Formula> {
    transform(u, f, occ, psi, Variant::Pnn, y)
}

pub fn nnn_formula(u: &Arc<Universe>, f: &Formula, occ: &OccurrencePath, psi: &[Formula], y: &[Var]) -> Result<Formula> {
    transform(u, f, occ, psi, Variant::Nnn, y)
}

/// Id of a ground user atom true in `i`.
fn ground_atom_id(i: &FiniteInterpretation, a: &Atom) -> Option<u32> {
    let Pred::User(p) = &a.pred else { return None };
    let vals = a.args.iter().map(|t| crate::semantics::eval_term(i, t)).collect::<Option<Vec<_>>>()?;
    i.universe().atom_id(p, &vals)
}

fn grounded(i: &FiniteInterpretation, f: &Formula, v: Variant, out: &mut FixedBitSet) {
    if !satisfies(i, f) {
        return;
    }
    match f {
        Formula::Atom(a) => {
            if v != Variant::Nnn {
                if let Some(id) = ground_atom_id(i, a) {
                    out.insert(id as usize);
                }
            }
        }
        Formula::Eq(..) | Formula::Bottom => {}
        Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| grounded(i, c, v, out)),
        Formula::Implies(a, b) => {
            // `I ⊨ a` holds here unless the implication is vacuous.
            if satisfies(i, a) {
                if v != Variant::Pos {
                    grounded(i, a, v.flip(), out);
                }
                grounded(i, b, v, out);
            }
        }
        Formula::Forall(x, b) | Formula::Exists(x, b) => {
            for inst in instances_of(i.universe(), x, b) {
                grounded(i, &inst, v, out);
            }
        }
    }
}

fn atom_set(i: &FiniteInterpretation, f: &Formula, v: Variant) -> FixedBitSet {
    let mut out = FixedBitSet::with_capacity(i.universe().space().len());
    grounded(i, f, v, &mut out);
    out
}

/// `Pos_I(f)` for a sentence.
pub fn pos_atoms(i: &FiniteInterpretation, f: &Formula) -> FixedBitSet {
    atom_set(i, f, Variant::Pos)
}

/// `Pnn_I(f)` for a sentence.
pub fn pnn_atoms(i: &FiniteInterpretation, f: &Formula) -> FixedBitSet {
    atom_set(i, f, Variant::Pnn)
}

/// `Nnn_I(f)` for a sentence.
pub fn nnn_atoms(i: &FiniteInterpretation, f: &Formula) -> FixedBitSet {
    atom_set(i, f, Variant::Nnn)
}

/// Constant folding plus a canonical operand order for equalities: the
/// normal form under which transform results are compared.
pub fn normal_form(f: &Formula) -> Formula {
    fn orient(f: &Formula) -> Formula {
        match f {
            Formula::Eq(a, b) if a.to_string() > b.to_string() => Formula::Eq(b.clone(), a.clone()),
            Formula::Atom(_) | Formula::Eq(..) | Formula::Bottom => f.clone(),
            Formula::And(v) => Formula::and(v.iter().map(orient).collect()),
            Formula::Or(v) => Formula::or(v.iter().map(orient).collect()),
            Formula::Implies(a, b) => Formula::implies(orient(a), orient(b)),
            Formula::Forall(x, b) => Formula::forall(x.clone(), orient(b)),
            Formula::Exists(x, b) => Formula::exists(x.clone(), orient(b)),
        }
    }
    orient(&f.fold_constants())
}

/// Path of the `k`-th (1-based) occurrence of predicate `pred` in `f`.
pub fn nth_occurrence(f: &Formula, pred: &str, k: usize) -> Option<OccurrencePath> {
    f.atom_occurrences()
        .into_iter()
        .filter(|(_, a)| a.user_name().is_some_and(|n| n.as_str() == pred))
        .nth(k.checked_sub(1)?)
        .map(|(p, _)| p)
}

#[cfg(test)]
mod tests;
