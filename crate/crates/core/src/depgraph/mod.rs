//! Bounded satisfiability, the dependency graphs and the hypotheses they
//! feed: separability, negativity and approximation.

mod checks;
mod graph;
mod sat;

pub use checks::{is_approximator, is_negative_program, is_psi_negative, Approximation, Negativity, Verdict};
pub use graph::{
    grounded_dep_graph, member_of, occurrence_by_name, program_dep_graph, theory_dep_graph, DependencyGraph, Provenance, Vertex,
};
pub use sat::{bounded_sat, SatVerdict};

#[cfg(test)]
mod tests;
