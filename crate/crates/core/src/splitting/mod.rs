//! Hypotheses and conclusions of the splitting theorems for programs and
//! theories, plus brute-force verification of a split.

mod check;
mod problem;

pub use check::{
    check_one_direction, check_split_program, check_split_theory, verify_split, NegativityEntry, OneDirection, Side,
    SplitReport, Verification,
};
pub use problem::SplitProblem;

#[cfg(test)]
mod tests;
