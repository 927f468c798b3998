//! Intensionality statements and their algebra.

mod checks;
mod partition;
mod statement;

pub use checks::{equivalent, is_partition, is_purely_extensional, is_purely_intensional, partition_defect};
pub use partition::Partition;
pub use statement::{default_params, IntensionalityStatement, LambdaEntry};
