//! Abstract syntax: many-sorted signatures, terms, formulas, rules and
//! theories, plus substitution and polarity-aware traversals.

mod display;
mod formula;
mod rule;
mod signature;
mod term;

pub use display::annotated;
pub use formula::{classify, Atom, CmpOp, Formula, OccurrencePath, Polarity, Pred};
pub use rule::{as_program, rules_of, sentences, unruled_positive_atoms, Literal, Rule, RuleOccurrence, Statement};
pub use signature::{Signature, SignatureError};
pub use term::{ArithOp, Sort, Sym, Term, Value, Var, INT_SORT};

use std::collections::BTreeMap;

/// Substitution with a sort check: every substituted term must have a sort
/// that is a subsort of the variable it replaces.
pub fn substitute_checked(
    sig: &Signature,
    f: &Formula,
    binding: &BTreeMap<Var, Term>,
) -> Result<Formula, SignatureError> {
    for (v, t) in binding {
        let s = t.sort();
        if !sig.is_subsort(&s, &v.sort) {
            return Err(SignatureError::SortMismatch { var: v.name.clone(), term: s, expected: v.sort.clone() });
        }
    }
    Ok(f.substitute(binding))
}
