use std::collections::BTreeSet;
use std::sync::Arc;

use rayon::prelude::*;
use serde::Serialize;

use crate::depgraph::{
    is_approximator, is_negative_program, is_psi_negative, program_dep_graph, theory_dep_graph, Approximation,
    DependencyGraph, Negativity, Verdict,
};
use crate::error::Result;
use crate::intensionality::Partition;
use crate::semantics::{
    enumerate_lambda_stable_models, enumerate_split_models, is_lambda_stable, FiniteInterpretation, SplitComponent,
    Universe,
};
use crate::syntax::{Formula, Rule};

/// Negativity of part `i` on member `j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NegativityEntry {
    pub part: String,
    pub lambda: String,
    pub verdict: Verdict,
    pub witness: Option<String>,
}

/// Which side of the comparison an interpretation belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// `λ`-stable for the union but not a model of the split.
    UnionOnly,
    /// A model of the split but not `λ`-stable for the union.
    PartsOnly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Verification {
    /// Both sides have exactly these `models`.
    Verified { models: usize },
    Mismatch { interpretation: FiniteInterpretation, side: Side },
}

/// The hypotheses of a split, and its verified conclusion when requested.
#[derive(Clone, Debug, Serialize)]
pub struct SplitReport {
    pub partition_valid: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub partition_defect: Option<String>,
    pub separable: Verdict,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cycle: Option<Vec<String>>,
    pub negativity: Vec<NegativityEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub approximator: Option<Approximation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip)]
    pub graph: Option<DependencyGraph>,
}

impl SplitReport {
    fn invalid(why: String) -> Self {
        SplitReport {
            partition_valid: false,
            partition_defect: Some(why),
            separable: Verdict::Inconclusive,
            cycle: None,
            negativity: Vec::new(),
            approximator: None,
            verification: None,
            graph: None,
        }
    }

    /// Combined verdict of the theorem's hypotheses.
    pub fn hypotheses(&self) -> Verdict {
        if !self.partition_valid {
            return Verdict::Fail;
        }
        let mut v = self.separable;
        for n in &self.negativity {
            v = v.and(n.verdict);
        }
        if let Some(a) = &self.approximator {
            v = v.and(a.verdict);
        }
        v
    }

    /// Hypotheses and, when it ran, verification.
    pub fn verdict(&self) -> Verdict {
        match &self.verification {
            Some(Verification::Mismatch { .. }) => Verdict::Fail,
            _ => self.hypotheses(),
        }
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let word = |v: Verdict| match v {
            Verdict::Pass => "pass",
            Verdict::Fail => "FAIL",
            Verdict::Inconclusive => "inconclusive",
        };
        match &self.partition_defect {
            None => s.push_str("partition: pass\n"),
            Some(d) => s.push_str(&format!("partition: FAIL ({d})\n")),
        }
        if !self.partition_valid {
            return s;
        }
        s.push_str(&format!("separable: {}\n", word(self.separable)));
        if let Some(c) = &self.cycle {
            s.push_str(&format!("  cycle: {}\n", c.join(" -> ")));
        }
        for n in &self.negativity {
            s.push_str(&format!("negative({} on {}): {}\n", n.part, n.lambda, word(n.verdict)));
            if let Some(w) = &n.witness {
                s.push_str(&format!("  witness: {w}\n"));
            }
        }
        if let Some(a) = &self.approximator {
            s.push_str(&format!("approximator: {}\n", word(a.verdict)));
            if let Some(m) = &a.counterexample {
                s.push_str(&format!("  counterexample: {m}\n"));
            }
        }
        match &self.verification {
            Some(Verification::Verified { models }) => s.push_str(&format!("verification: verified ({models} models)\n")),
            Some(Verification::Mismatch { interpretation, side }) => {
                let which = match side {
                    Side::UnionOnly => "stable for the union only",
                    Side::PartsOnly => "stable for the parts only",
                };
                s.push_str(&format!("verification: MISMATCH {interpretation} ({which})\n"));
            }
            None => {}
        }
        s.push_str(&format!("verdict: {}\n", word(self.verdict())));
        s
    }
}

fn separability(g: &DependencyGraph) -> (Verdict, Option<Vec<String>>) {
    match g.mixed_cycle() {
        None => (Verdict::Pass, None),
        Some(c) => {
            // A cycle that vanishes without the undecided edges is not a failure.
            let definite = if g.has_unknown_edges() { g.definite().mixed_cycle() } else { Some(c.clone()) };
            match definite {
                Some(d) => (Verdict::Fail, Some(d)),
                None => (Verdict::Inconclusive, Some(c)),
            }
        }
    }
}

fn pairs(n: usize) -> Vec<(usize, usize)> {
    (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).collect()
}

fn negativity_entries(
    part: &Partition,
    check: impl Fn(usize, usize) -> Result<Negativity> + Sync,
) -> Result<Vec<NegativityEntry>> {
    pairs(part.len())
        .into_par_iter()
        .map(|(i, j)| {
            let n = check(i, j)?;
            Ok(NegativityEntry {
                part: part.name(i).to_string(),
                lambda: part.name(j).to_string(),
                verdict: n.verdict,
                witness: n.witness,
            })
        })
        .collect()
}

fn check_parts(u: &Universe, n: usize, part: &Partition) -> Result<Option<SplitReport>> {
    if n != part.len() {
        return Ok(Some(SplitReport::invalid(format!("{n} parts for {} partition members", part.len()))));
    }
    Ok(part.defect(u)?.map(SplitReport::invalid))
}

/// Separability of `G_Λ(Π)` and pairwise negativity: the hypotheses of the
/// splitting theorem for programs. No models are enumerated.
pub fn check_split_program(u: &Arc<Universe>, parts: &[Vec<Rule>], part: &Partition) -> Result<SplitReport> {
    if let Some(bad) = check_parts(u, parts.len(), part)? {
        return Ok(bad);
    }
    let program: Vec<Rule> = parts.concat();
    let g = program_dep_graph(u, &program, part)?;
    let (separable, cycle) = separability(&g);
    let negativity = negativity_entries(part, |i, j| is_negative_program(u, &parts[i], part.member(j)))?;
    Ok(SplitReport {
        partition_valid: true,
        partition_defect: None,
        separable,
        cycle,
        negativity,
        approximator: None,
        verification: None,
        graph: Some(g),
    })
}

/// Approximation, separability of `G_{Λ,Ψ}(Γ)` and pairwise `Ψ`-negativity:
/// the hypotheses of the splitting theorem for theories.
pub fn check_split_theory(
    u: &Arc<Universe>,
    parts: &[Vec<Formula>],
    part: &Partition,
    psi: &[Formula],
) -> Result<SplitReport> {
    if let Some(bad) = check_parts(u, parts.len(), part)? {
        return Ok(bad);
    }
    let gamma: Vec<Formula> = parts.concat();
    let approximator = is_approximator(u, psi, &gamma, &part.target)?;
    let g = theory_dep_graph(u, &gamma, part, psi)?;
    let (separable, cycle) = separability(&g);
    let negativity = negativity_entries(part, |i, j| is_psi_negative(u, &parts[i], part.member(j), psi))?;
    Ok(SplitReport {
        partition_valid: true,
        partition_defect: None,
        separable,
        cycle,
        negativity,
        approximator: Some(approximator),
        verification: None,
        graph: Some(g),
    })
}

/// Compares the `λ`-stable models of the union of `parts` with the models of
/// `Ψ` that are `λi`-stable models of every part `i`.
pub fn verify_split(u: &Arc<Universe>, parts: &[Vec<Formula>], part: &Partition, psi: &[Formula]) -> Result<Verification> {
    let gamma: Vec<Formula> = parts.concat();
    let whole = enumerate_lambda_stable_models(u, &gamma, &part.target)?;
    let comps: Vec<SplitComponent> = parts
        .iter()
        .zip(&part.members)
        .map(|(g, (_, l))| SplitComponent { gamma: g.clone(), lambda: l.clone() })
        .collect();
    let split = enumerate_split_models(u, &comps, psi)?;
    let left: BTreeSet<&FiniteInterpretation> = whole.iter().collect();
    let right: BTreeSet<&FiniteInterpretation> = split.iter().collect();
    if let Some(m) = whole.iter().find(|m| !right.contains(m)) {
        return Ok(Verification::Mismatch { interpretation: m.clone(), side: Side::UnionOnly });
    }
    if let Some(m) = split.iter().find(|m| !left.contains(m)) {
        return Ok(Verification::Mismatch { interpretation: m.clone(), side: Side::PartsOnly });
    }
    Ok(Verification::Verified { models: whole.len() })
}

/// Whether every `λ`-stable model of the union is a `λi`-stable model of
/// each part.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum OneDirection {
    Holds { models: usize },
    Violated { interpretation: FiniteInterpretation, part: String },
}

pub fn check_one_direction(u: &Arc<Universe>, parts: &[Vec<Formula>], part: &Partition) -> Result<OneDirection> {
    let gamma: Vec<Formula> = parts.concat();
    let whole = enumerate_lambda_stable_models(u, &gamma, &part.target)?;
    for m in &whole {
        for (k, g) in parts.iter().enumerate() {
            if !is_lambda_stable(m, g, part.member(k))? {
                return Ok(OneDirection::Violated { interpretation: m.clone(), part: part.name(k).to_string() });
            }
        }
    }
    Ok(OneDirection::Holds { models: whole.len() })
}
