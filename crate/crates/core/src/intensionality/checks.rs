//! Bounded equivalence, partition and purity checks. Each verdict is
//! decisive for the declared domains of the universe it is computed over.

use crate::error::Result;
use crate::semantics::search::{first_model, Budget, Problem};
use crate::semantics::{ground_lambda, Universe, G};
use crate::syntax::Sym;

use super::IntensionalityStatement;

/// Whether the ground formula has a model; `T`/`F` are answered directly.
fn satisfiable(u: &Universe, g: &G, budget: &Budget) -> Result<bool> {
    Ok(match g {
        G::T => true,
        G::F => false,
        _ => {
            let p = Problem { n: u.space().len(), components: vec![], constraints: vec![g.clone()], all_atoms: false };
            first_model(&p, budget)?.is_some()
        }
    })
}

fn iff(a: &G, b: &G) -> G {
    G::and(vec![G::imp(a.clone(), b.clone()), G::imp(b.clone(), a.clone())])
}

/// `∀X (λ1^p(X) ↔ λ2^p(X))` is valid over the domains of `u` for every `p`.
pub fn equivalent(u: &Universe, l1: &IntensionalityStatement, l2: &IntensionalityStatement) -> Result<bool> {
    let a = ground_lambda(u, l1)?;
    let b = ground_lambda(u, l2)?;
    let budget = Budget::new(u.cap);
    for (x, y) in a.iter().zip(&b) {
        if x != y && satisfiable(u, &G::not(iff(x, y)), &budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Why `parts` is not a partition of `lambda`, or `None` if it is.
pub fn partition_defect(
    u: &Universe,
    parts: &[IntensionalityStatement],
    lambda: &IntensionalityStatement,
) -> Result<Option<String>> {
    if parts.is_empty() {
        return Ok(Some("a partition needs at least one member".into()));
    }
    let whole = ground_lambda(u, lambda)?;
    let ground: Vec<Vec<G>> = parts.iter().map(|l| ground_lambda(u, l)).collect::<Result<_>>()?;
    let budget = Budget::new(u.cap);
    for (id, w) in whole.iter().enumerate() {
        let join = G::or(ground.iter().map(|g| g[id].clone()).collect());
        if *w != join && satisfiable(u, &G::not(iff(w, &join)), &budget)? {
            return Ok(Some(format!("the join of the members differs from the statement at {}", u.atom(id as u32))));
        }
        for i in 0..ground.len() {
            for j in i + 1..ground.len() {
                let meet = G::and(vec![ground[i][id].clone(), ground[j][id].clone()]);
                if satisfiable(u, &meet, &budget)? {
                    return Ok(Some(format!("members {} and {} overlap at {}", i + 1, j + 1, u.atom(id as u32))));
                }
            }
        }
    }
    Ok(None)
}

pub fn is_partition(u: &Universe, parts: &[IntensionalityStatement], lambda: &IntensionalityStatement) -> Result<bool> {
    Ok(partition_defect(u, parts, lambda)?.is_none())
}

/// `λ^p` is valid on every argument tuple.
pub fn is_purely_intensional(u: &Universe, lambda: &IntensionalityStatement, p: &Sym) -> Result<bool> {
    let l = ground_lambda(u, lambda)?;
    let budget = Budget::new(u.cap);
    for id in u.space().pred_range(p).unwrap_or(0..0) {
        if satisfiable(u, &G::not(l[id as usize].clone()), &budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `λ^p` is unsatisfiable on every argument tuple.
pub fn is_purely_extensional(u: &Universe, lambda: &IntensionalityStatement, p: &Sym) -> Result<bool> {
    let l = ground_lambda(u, lambda)?;
    let budget = Budget::new(u.cap);
    for id in u.space().pred_range(p).unwrap_or(0..0) {
        if satisfiable(u, &l[id as usize], &budget)? {
            return Ok(false);
        }
    }
    Ok(true)
}
