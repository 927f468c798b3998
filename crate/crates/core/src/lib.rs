//! Stable models of many-sorted first-order theories under intensionality
//! statements, together with the dependency graphs and the checks needed to
//! split a theory into parts whose models can be computed separately.
//!
//! Everything is evaluated over finite, explicitly declared domains. Integer
//! arithmetic is confined to a declared interval; a quantifier instance whose
//! arithmetic leaves that interval is dropped, and a ground atom mentioning an
//! out-of-range value is false.

pub mod depgraph;
pub mod error;
pub mod intensionality;
pub mod occurrences;
pub mod parser;
pub mod semantics;
pub mod splitting;
pub mod syntax;

pub use error::{Error, Result};
