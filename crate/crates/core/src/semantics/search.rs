//! Exhaustive search over interpretations of a ground problem.
//!
//! A problem is a set of classical constraints plus a list of components
//! `(Γi, λi)`. A solution is an interpretation satisfying every constraint
//! and every `Γi` that is, for each component, a `λi`-stable model of `Γi`.
//! Without components the search is plain bounded satisfiability.

use std::sync::atomic::{AtomicU64, Ordering};

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::DiGraph;
use rayon::prelude::*;

use super::ground::{G, UNK};
use crate::error::{Error, Result};

pub(crate) struct Component {
    /// Ground conjuncts of `Γi`.
    pub gamma: Vec<G>,
    /// `λi(u)` grounded, indexed by atom id.
    pub lambda: Vec<G>,
}

pub(crate) struct Problem {
    pub n: usize,
    pub components: Vec<Component>,
    pub constraints: Vec<G>,
    /// Enumerate atoms that occur nowhere as well. When false they are
    /// fixed to false.
    pub all_atoms: bool,
}

/// Node budget shared by every search started for one call.
pub(crate) struct Budget {
    used: AtomicU64,
    cap: u64,
}

impl Budget {
    pub fn new(cap: u64) -> Self {
        Budget { used: AtomicU64::new(0), cap }
    }

    pub(crate) fn spend(&self, k: u64) -> Result<()> {
        let before = self.used.fetch_add(k, Ordering::Relaxed);
        if before + k > self.cap {
            Err(Error::Resource(format!("search exceeded the cap of {} nodes", self.cap)))
        } else {
            Ok(())
        }
    }
}

/// Atoms that may belong to `Pos_I(g)` for some completion of `vals`.
fn may_pos(g: &G, u: u32, vals: &[u8]) -> bool {
    if !g.atoms_contains(u) || g.kleene(vals) == 0 {
        return false;
    }
    match g {
        G::Atom(a) => *a == u,
        G::And(v) | G::Or(v) => v.iter().any(|c| may_pos(c, u, vals)),
        G::Imp(a, b) => a.kleene(vals) != 0 && may_pos(b, u, vals),
        G::T | G::F => false,
    }
}

impl G {
    fn atoms_contains(&self, u: u32) -> bool {
        match self {
            G::T | G::F => false,
            G::Atom(a) => *a == u,
            G::And(v) | G::Or(v) => v.iter().any(|c| c.atoms_contains(u)),
            G::Imp(a, b) => a.atoms_contains(u) || b.atoms_contains(u),
        }
    }

    /// Atoms at strictly positive positions.
    pub(crate) fn positive_atoms_into(&self, out: &mut Vec<u32>) {
        match self {
            G::T | G::F => {}
            G::Atom(a) => out.push(*a),
            G::And(v) | G::Or(v) => v.iter().for_each(|c| c.positive_atoms_into(out)),
            G::Imp(_, b) => b.positive_atoms_into(out),
        }
    }

    /// `Pos_I(g)` under a total assignment.
    pub(crate) fn pos_exact(&self, truth: &dyn Fn(u32) -> bool, out: &mut Vec<u32>) {
        if !self.eval(truth) {
            return;
        }
        match self {
            G::T | G::F => {}
            G::Atom(a) => out.push(*a),
            G::And(v) | G::Or(v) => v.iter().for_each(|c| c.pos_exact(truth, out)),
            G::Imp(a, b) => {
                if a.eval(truth) {
                    b.pos_exact(truth, out)
                }
            }
        }
    }
}

/// `Γ` specialised to `(I, A)`: `⟨H, I⟩ ⊨ht g` iff `H ∩ A` satisfies the
/// result classically, provided `H ⊇ At^I \ A`. Atom ids are remapped
/// through `map` (defined on `A`).
fn specialise(g: &G, truth: &dyn Fn(u32) -> bool, map: &[u32]) -> G {
    match g {
        G::T | G::F => g.clone(),
        G::Atom(u) => {
            if !truth(*u) {
                G::F
            } else if map[*u as usize] == u32::MAX {
                G::T
            } else {
                G::Atom(map[*u as usize])
            }
        }
        G::And(v) => G::and(v.iter().map(|c| specialise(c, truth, map)).collect()),
        G::Or(v) => G::or(v.iter().filter(|c| c.eval(truth)).map(|c| specialise(c, truth, map)).collect()),
        G::Imp(a, b) => {
            if !a.eval(truth) {
                G::T
            } else if !b.eval(truth) {
                G::F
            } else {
                G::imp(specialise(a, truth, map), specialise(b, truth, map))
            }
        }
    }
}

/// Whether `I` is an `A`-stable model of the ground theory `gamma`, where
/// `I ⊨ gamma` is assumed: no `H` with `At^I \ A ⊆ H ⊊ At^I` HT-satisfies it.
pub(crate) fn is_a_stable(gamma: &[G], truth: &dyn Fn(u32) -> bool, a: &[u32], n: usize, budget: &Budget) -> Result<bool> {
    if a.is_empty() {
        return Ok(true);
    }
    let mut pos = Vec::new();
    for g in gamma {
        g.pos_exact(truth, &mut pos);
    }
    let mut in_pos = FixedBitSet::with_capacity(n);
    pos.iter().for_each(|&u| in_pos.insert(u as usize));
    if a.iter().any(|&u| !in_pos.contains(u as usize)) {
        return Ok(false);
    }
    let mut map = vec![u32::MAX; n];
    for (k, &u) in a.iter().enumerate() {
        map[u as usize] = k as u32;
    }
    let mut cons: Vec<G> = Vec::new();
    for g in gamma {
        match specialise(g, truth, &map) {
            G::T => {}
            G::F => return Ok(true),
            s => cons.push(s),
        }
    }
    let mut mentioned = FixedBitSet::with_capacity(a.len());
    for c in &cons {
        let mut v = Vec::new();
        c.atoms_into(&mut v);
        v.into_iter().for_each(|k| mentioned.insert(k as usize));
    }
    if mentioned.count_ones(..) < a.len() {
        return Ok(false);
    }
    cons.push(G::or((0..a.len() as u32).map(|k| G::not(G::Atom(k))).collect()));
    let sub = Problem { n: a.len(), components: vec![], constraints: cons, all_atoms: false };
    Ok(first_model(&sub, budget)?.is_none())
}

/// Every `S ⊆ A` (as a set of positions in `a`) such that
/// `⟨(At^I \ A) ∪ S, I⟩` HT-satisfies `gamma`.
pub(crate) fn here_subsets(gamma: &[G], truth: &dyn Fn(u32) -> bool, a: &[u32], n: usize, budget: &Budget) -> Result<Vec<FixedBitSet>> {
    let mut map = vec![u32::MAX; n];
    for (k, &u) in a.iter().enumerate() {
        map[u as usize] = k as u32;
    }
    let mut cons = Vec::new();
    for g in gamma {
        match specialise(g, truth, &map) {
            G::T => {}
            G::F => return Ok(vec![]),
            s => cons.push(s),
        }
    }
    all_models(&Problem { n: a.len(), components: vec![], constraints: cons, all_atoms: true }, budget)
}

struct Engine<'p> {
    p: &'p Problem,
    cons: Vec<&'p G>,
    occ: Vec<Vec<u32>>,
    order: Vec<u32>,
    /// Per atom: `(component, conjunct)` pairs where it occurs positively.
    support: Vec<Vec<(u32, u32)>>,
    budget: &'p Budget,
}

#[derive(Clone)]
struct State {
    vals: Vec<u8>,
    status: Vec<u8>,
    sat: usize,
    trail: Vec<(u32, u8)>,
    ticks: u64,
}

const TICK_BATCH: u64 = 1024;

impl<'p> Engine<'p> {
    fn new(p: &'p Problem, budget: &'p Budget) -> Self {
        let mut cons: Vec<&G> = p.constraints.iter().collect();
        let mut support = vec![Vec::new(); p.n];
        for (ci, comp) in p.components.iter().enumerate() {
            for (gi, g) in comp.gamma.iter().enumerate() {
                cons.push(g);
                let mut v = Vec::new();
                g.positive_atoms_into(&mut v);
                v.sort_unstable();
                v.dedup();
                for u in v {
                    support[u as usize].push((ci as u32, gi as u32));
                }
            }
        }
        let mut occ = vec![Vec::new(); p.n];
        for (k, g) in cons.iter().enumerate() {
            for u in g.atoms() {
                occ[u as usize].push(k as u32);
            }
        }
        let order = variable_order(p, &cons);
        Engine { p, cons, occ, order, support, budget }
    }

    fn initial(&self) -> Option<State> {
        let vals = vec![UNK; self.p.n];
        let status: Vec<u8> = self.cons.iter().map(|g| g.kleene(&vals)).collect();
        if status.contains(&0) {
            return None;
        }
        let sat = status.iter().filter(|&&s| s == 1).count();
        Some(State { vals, status, sat, trail: Vec::new(), ticks: 0 })
    }

    fn assign(&self, st: &mut State, u: u32, v: u8) -> bool {
        st.vals[u as usize] = v;
        let mut ok = true;
        for &c in &self.occ[u as usize] {
            let s0 = st.status[c as usize];
            if s0 == 1 {
                continue;
            }
            let s = self.cons[c as usize].kleene(&st.vals);
            if s != s0 {
                st.trail.push((c, s0));
                st.status[c as usize] = s;
                if s == 1 {
                    st.sat += 1;
                } else if s == 0 {
                    ok = false;
                    break;
                }
            }
        }
        ok
    }

    fn undo(&self, st: &mut State, mark: usize, u: u32) {
        while st.trail.len() > mark {
            let (c, s0) = st.trail.pop().unwrap();
            if st.status[c as usize] == 1 {
                st.sat -= 1;
            }
            st.status[c as usize] = s0;
        }
        st.vals[u as usize] = UNK;
    }

    fn tick(&self, st: &mut State) -> Result<()> {
        st.ticks += 1;
        if st.ticks >= TICK_BATCH {
            self.budget.spend(st.ticks)?;
            st.ticks = 0;
        }
        Ok(())
    }

    /// `u` may be true unless some component where it is intensional can no
    /// longer support it.
    fn may_be_true(&self, st: &State, u: u32) -> bool {
        for (ci, comp) in self.p.components.iter().enumerate() {
            if comp.lambda[u as usize].kleene(&st.vals) != 1 {
                continue;
            }
            let ok = self.support[u as usize]
                .iter()
                .filter(|(c, _)| *c == ci as u32)
                .any(|&(_, gi)| may_pos(&comp.gamma[gi as usize], u, &st.vals));
            if !ok {
                return false;
            }
        }
        true
    }

    fn leaf(&self, st: &State) -> Result<Option<FixedBitSet>> {
        let mut bits = FixedBitSet::with_capacity(self.p.n);
        for (u, &v) in st.vals.iter().enumerate() {
            if v == 1 {
                bits.insert(u);
            }
        }
        let truth = |u: u32| bits.contains(u as usize);
        for comp in &self.p.components {
            let a: Vec<u32> =
                bits.ones().map(|u| u as u32).filter(|&u| comp.lambda[u as usize].eval(&truth)).collect();
            if !is_a_stable(&comp.gamma, &truth, &a, self.p.n, self.budget)? {
                return Ok(None);
            }
        }
        Ok(Some(bits))
    }

    /// Depth-first search from `depth`. With `first`, stops at the first
    /// solution. With `split`, records states at that depth instead of
    /// descending further.
    fn dfs(
        &self,
        st: &mut State,
        depth: usize,
        first: bool,
        split: Option<usize>,
        out: &mut Vec<FixedBitSet>,
        prefixes: &mut Vec<Vec<(u32, u8)>>,
    ) -> Result<bool> {
        self.tick(st)?;
        if split == Some(depth) {
            prefixes.push(self.order[..depth].iter().map(|&u| (u, st.vals[u as usize])).collect());
            return Ok(false);
        }
        if first && self.p.components.is_empty() && st.sat == self.cons.len() {
            let mut bits = FixedBitSet::with_capacity(self.p.n);
            for (u, &v) in st.vals.iter().enumerate() {
                if v == 1 {
                    bits.insert(u);
                }
            }
            out.push(bits);
            return Ok(true);
        }
        if depth == self.order.len() {
            if let Some(m) = self.leaf(st)? {
                out.push(m);
                return Ok(first);
            }
            return Ok(false);
        }
        let u = self.order[depth];
        for v in [0u8, 1] {
            if v == 1 && !self.may_be_true(st, u) {
                continue;
            }
            let mark = st.trail.len();
            if self.assign(st, u, v) && self.dfs(st, depth + 1, first, split, out, prefixes)? {
                self.undo(st, mark, u);
                return Ok(true);
            }
            self.undo(st, mark, u);
        }
        Ok(false)
    }

    fn flush(&self, st: &State) -> Result<()> {
        self.budget.spend(st.ticks)
    }
}

/// Order: atoms used by λ-formulas, then atoms extensional in every
/// component, then the rest in dependency order (bodies before heads).
fn variable_order(p: &Problem, cons: &[&G]) -> Vec<u32> {
    let n = p.n;
    let mut seen = vec![false; n];
    let mut order = Vec::new();
    let push = |u: u32, seen: &mut Vec<bool>, order: &mut Vec<u32>| {
        if !seen[u as usize] {
            seen[u as usize] = true;
            order.push(u);
        }
    };
    let mut lam = Vec::new();
    for comp in &p.components {
        for g in &comp.lambda {
            g.atoms_into(&mut lam);
        }
    }
    lam.sort_unstable();
    lam.dedup();
    for u in lam {
        push(u, &mut seen, &mut order);
    }
    let extensional = |u: u32| p.components.iter().all(|c| c.lambda[u as usize] == G::F);
    let mut mentioned = vec![false; n];
    for g in cons {
        for u in g.atoms() {
            mentioned[u as usize] = true;
        }
    }
    for g in cons {
        let mut v = Vec::new();
        g.atoms_into(&mut v);
        for u in v {
            if extensional(u) {
                push(u, &mut seen, &mut order);
            }
        }
    }
    let mut graph: DiGraph<u32, ()> = DiGraph::new();
    let mut node = vec![None; n];
    for u in 0..n as u32 {
        if mentioned[u as usize] && !seen[u as usize] {
            node[u as usize] = Some(graph.add_node(u));
        }
    }
    for comp in &p.components {
        for g in &comp.gamma {
            let mut heads = Vec::new();
            g.positive_atoms_into(&mut heads);
            let all = g.atoms();
            if heads.len() * all.len() > 10_000 {
                continue;
            }
            for &b in &all {
                for &h in &heads {
                    if b != h {
                        if let (Some(x), Some(y)) = (node[b as usize], node[h as usize]) {
                            graph.update_edge(x, y, ());
                        }
                    }
                }
            }
        }
    }
    let mut sccs = tarjan_scc(&graph);
    sccs.reverse();
    for scc in sccs {
        let mut us: Vec<u32> = scc.into_iter().map(|x| graph[x]).collect();
        us.sort_unstable();
        for u in us {
            push(u, &mut seen, &mut order);
        }
    }
    if p.all_atoms {
        for u in 0..n as u32 {
            push(u, &mut seen, &mut order);
        }
    }
    order
}

/// Some solution, or `None` if there is none.
pub(crate) fn first_model(p: &Problem, budget: &Budget) -> Result<Option<FixedBitSet>> {
    let e = Engine::new(p, budget);
    let Some(mut st) = e.initial() else { return Ok(None) };
    let mut out = Vec::new();
    e.dfs(&mut st, 0, true, None, &mut out, &mut Vec::new())?;
    e.flush(&st)?;
    Ok(out.pop())
}

/// Every solution, in a deterministic order independent of parallelism.
pub(crate) fn all_models(p: &Problem, budget: &Budget) -> Result<Vec<FixedBitSet>> {
    let e = Engine::new(p, budget);
    let Some(mut st) = e.initial() else { return Ok(vec![]) };
    let split = e.order.len().min(10);
    let mut prefixes = Vec::new();
    let mut out = Vec::new();
    e.dfs(&mut st, 0, false, Some(split), &mut out, &mut prefixes)?;
    e.flush(&st)?;
    let base = e.initial().expect("initial state is consistent");
    let parts: Vec<Result<Vec<FixedBitSet>>> = prefixes
        .par_iter()
        .map(|pre| {
            let mut st = base.clone();
            for &(u, v) in pre {
                // Prefixes were consistent when recorded.
                e.assign(&mut st, u, v);
            }
            let mut out = Vec::new();
            e.dfs(&mut st, split, false, None, &mut out, &mut Vec::new())?;
            e.flush(&st)?;
            Ok(out)
        })
        .collect();
    let mut models = Vec::new();
    for r in parts {
        models.extend(r?);
    }
    models.sort();
    Ok(models)
}
