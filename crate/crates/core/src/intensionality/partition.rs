use crate::error::Result;
use crate::semantics::Universe;
use crate::syntax::Signature;

use super::{partition_defect, IntensionalityStatement};

/// Named members `λ1, ..., λk` meant to partition `target`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Partition {
    pub target: IntensionalityStatement,
    pub members: Vec<(String, IntensionalityStatement)>,
}

impl Partition {
    pub fn new(target: IntensionalityStatement, members: Vec<(String, IntensionalityStatement)>) -> Self {
        Partition { target, members }
    }

    /// Members whose target is their own join.
    pub fn of_members(sig: &Signature, members: Vec<(String, IntensionalityStatement)>) -> Self {
        let target = members.iter().fold(IntensionalityStatement::bottom(), |acc, (_, l)| acc.join(l, sig));
        Partition { target, members }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.members[i].0
    }

    pub fn member(&self, i: usize) -> &IntensionalityStatement {
        &self.members[i].1
    }

    /// Why this is not a partition of its target, or `None`.
    pub fn defect(&self, u: &Universe) -> Result<Option<String>> {
        let parts: Vec<IntensionalityStatement> = self.members.iter().map(|(_, l)| l.clone()).collect();
        partition_defect(u, &parts, &self.target)
    }
}
