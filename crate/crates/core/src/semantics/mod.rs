//! Finite interpretations, grounding, here-and-there satisfaction and the
//! search procedures for stable models.

mod ground;
mod interp;
pub(crate) mod search;
mod stable;
mod strong_eq;
mod universe;

use std::sync::Arc;

pub use ground::{ground, ground_conjuncts, ground_with, name_of, G, UNK};
pub(crate) use interp::instances as instances_of;
pub use interp::{
    atoms_of, atoms_of_lambda, em_atoms, eval_term, ht_satisfies, satisfies, FiniteInterpretation, HTInterpretation,
};
pub use stable::{
    enumerate_ht_models, enumerate_lambda_stable_models, enumerate_models, enumerate_split_models, find_split_model, ground_lambda,
    is_a_stable, is_a_stable_reference, is_lambda_stable, is_lambda_stable_reference, is_stable, is_stable_reference,
    SplitComponent,
};
pub use strong_eq::{check_strong_equivalence, StrongEquivalence};
pub use universe::{AtomSpace, DomainDecls, GroundAtom, Universe, DEFAULT_NODE_CAP};

use crate::error::Result;
use crate::parser::ProblemFile;

/// The universe declared by a problem file, with the default node cap.
pub fn universe_of(p: &ProblemFile) -> Result<Arc<Universe>> {
    Ok(Arc::new(Universe::new(Arc::new(p.sig.clone()), p.domains.clone())?))
}
