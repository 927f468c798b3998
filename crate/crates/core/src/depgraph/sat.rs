use std::sync::Arc;

use serde::Serialize;

use crate::error::Result;
use crate::semantics::search::{first_model, Budget, Problem};
use crate::semantics::{ground_conjuncts, FiniteInterpretation, Universe};
use crate::syntax::Formula;

/// Outcome of a bounded satisfiability test.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", content = "detail", rename_all = "snake_case")]
pub enum SatVerdict {
    /// A model, checkable with [`crate::semantics::satisfies`].
    Satisfiable(FiniteInterpretation),
    UnsatisfiableOnClosedDomains,
    /// The search cap was reached; the payload describes the bound.
    UnknownWithinBound(String),
}

impl SatVerdict {
    /// Satisfiable or unknown: the conservative reading for edges.
    pub fn possibly_satisfiable(&self) -> bool {
        !matches!(self, SatVerdict::UnsatisfiableOnClosedDomains)
    }

    pub fn is_unsat(&self) -> bool {
        matches!(self, SatVerdict::UnsatisfiableOnClosedDomains)
    }

    pub fn witness(&self) -> Option<&FiniteInterpretation> {
        match self {
            SatVerdict::Satisfiable(w) => Some(w),
            _ => None,
        }
    }
}

/// Exhaustive model search over the declared domains. Every sort is closed,
/// so the only indecisive outcome is hitting the node cap.
pub fn bounded_sat(u: &Arc<Universe>, theory: &[Formula]) -> Result<SatVerdict> {
    let constraints = match ground_conjuncts(u, theory) {
        Ok(c) => c,
        Err(e) if e.is_resource() => return Ok(SatVerdict::UnknownWithinBound(e.to_string())),
        Err(e) => return Err(e),
    };
    let p = Problem { n: u.space().len(), components: vec![], constraints, all_atoms: false };
    match first_model(&p, &Budget::new(u.cap)) {
        Ok(Some(bits)) => Ok(SatVerdict::Satisfiable(FiniteInterpretation::new(u.clone(), bits))),
        Ok(None) => Ok(SatVerdict::UnsatisfiableOnClosedDomains),
        Err(e) if e.is_resource() => {
            Ok(SatVerdict::UnknownWithinBound(format!("{} nodes over {}", u.cap, u.describe())))
        }
        Err(e) => Err(e),
    }
}
