use std::sync::Arc;

use crate::error::{Error, Result};
use crate::intensionality::{IntensionalityStatement, Partition};
use crate::parser::ProblemFile;
use crate::semantics::{universe_of, Universe};
use crate::syntax::{as_program, sentences, Formula, Rule, Statement};

/// A split read from a `#partition` declaration: one theory per member,
/// plus an optional context.
#[derive(Clone, Debug)]
pub struct SplitProblem {
    pub universe: Arc<Universe>,
    pub partition: Partition,
    pub parts: Vec<Vec<Statement>>,
    pub psi: Vec<Formula>,
}

impl SplitProblem {
    /// `partition` names a `#partition`; `context` a `#context` or `#approx`
    /// block. The split targets the top-level `#intensional` statement when
    /// the file has one, and the join of the members otherwise. A member
    /// without a theory contributes an empty part.
    pub fn load(p: &ProblemFile, partition: &str, context: Option<&str>) -> Result<Self> {
        let decl = p.partition(partition).ok_or_else(|| Error::Semantic(format!("no partition named `{partition}`")))?;
        let mut members = Vec::new();
        let mut parts = Vec::new();
        for (m, theory) in &decl.members {
            let l = p.part(m.as_str()).ok_or_else(|| Error::Semantic(format!("no part named `{m}`")))?;
            members.push((m.to_string(), l.clone()));
            parts.push(match theory {
                Some(t) => p.theory(t.as_str()).ok_or_else(|| Error::Semantic(format!("no theory named `{t}`")))?.to_vec(),
                None => Vec::new(),
            });
        }
        let partition = if p.intensional.entries().next().is_some() {
            Partition::new(p.intensional.clone(), members)
        } else {
            Partition::of_members(&p.sig, members)
        };
        let psi = match context {
            None => Vec::new(),
            Some(c) => p
                .context(c)
                .or_else(|| p.approximator(c))
                .ok_or_else(|| Error::Semantic(format!("no context named `{c}`")))?
                .to_vec(),
        };
        Ok(SplitProblem { universe: universe_of(p)?, partition, parts, psi })
    }

    pub fn theories(&self) -> Vec<Vec<Formula>> {
        self.parts.iter().map(|s| sentences(s)).collect()
    }

    /// The parts as programs, if every statement is a rule.
    pub fn programs(&self) -> Option<Vec<Vec<Rule>>> {
        self.parts.iter().map(|s| as_program(s)).collect()
    }

    pub fn lambda(&self) -> &IntensionalityStatement {
        &self.partition.target
    }
}
