use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use fixedbitset::FixedBitSet;
use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rayon::prelude::*;
use serde::Serialize;

use super::{bounded_sat, SatVerdict};
use crate::error::{Error, Result};
use crate::intensionality::{IntensionalityStatement, Partition};
use crate::occurrences::{fresh_vars, nth_occurrence, pnn_atoms, pnn_formula, pos_atoms, pos_formula};
use crate::semantics::{name_of, FiniteInterpretation, Universe};
use crate::syntax::{classify, rules_of, Formula, Rule, Sym, Term, Var};

/// A vertex: a predicate paired with the index of a partition member, or a
/// ground atom (grounded graphs) with the member it is attributed to.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub struct Vertex {
    pub pred: Sym,
    pub part: usize,
    pub label: String,
}

/// Why an edge exists.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Provenance {
    pub rule: String,
    pub head: String,
    pub body: String,
    pub verdict: SatVerdict,
    /// The edge condition as a theory; a satisfiable verdict's witness is a
    /// model of it.
    #[serde(skip)]
    pub condition: Vec<Formula>,
}

#[derive(Clone, Debug, Default)]
pub struct DependencyGraph {
    pub part_names: Vec<String>,
    pub vertices: Vec<Vertex>,
    pub edges: BTreeMap<(usize, usize), Vec<Provenance>>,
}

#[derive(Serialize)]
struct EdgeOut<'a> {
    from: &'a str,
    to: &'a str,
    provenance: &'a [Provenance],
}

impl Serialize for DependencyGraph {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let edges: Vec<EdgeOut> = self
            .edges
            .iter()
            .map(|(&(a, b), p)| EdgeOut { from: &self.vertices[a].label, to: &self.vertices[b].label, provenance: p })
            .collect();
        let mut st = s.serialize_struct("DependencyGraph", 3)?;
        st.serialize_field("parts", &self.part_names)?;
        st.serialize_field("vertices", &self.vertices.iter().map(|v| &v.label).collect::<Vec<_>>())?;
        st.serialize_field("edges", &edges)?;
        st.end()
    }
}

impl DependencyGraph {
    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v.label == label)
    }

    /// Edges as `(from, to)` label pairs.
    pub fn edge_labels(&self) -> BTreeSet<(String, String)> {
        self.edges.keys().map(|&(a, b)| (self.vertices[a].label.clone(), self.vertices[b].label.clone())).collect()
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        match (self.index_of(from), self.index_of(to)) {
            (Some(a), Some(b)) => self.edges.contains_key(&(a, b)),
            _ => false,
        }
    }

    fn add(&mut self, from: usize, to: usize, p: Provenance) {
        self.edges.entry((from, to)).or_default().push(p);
    }

    /// Textual digraph with `pred@part` node labels.
    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph dependencies {\n");
        for v in &self.vertices {
            let _ = writeln!(s, "  \"{}\";", v.label);
        }
        for &(a, b) in self.edges.keys() {
            let _ = writeln!(s, "  \"{}\" -> \"{}\";", self.vertices[a].label, self.vertices[b].label);
        }
        s.push_str("}\n");
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "vertices: {}", self.vertices.iter().map(|v| v.label.as_str()).collect::<Vec<_>>().join(" "));
        for &(a, b) in self.edges.keys() {
            let _ = writeln!(s, "{} -> {}", self.vertices[a].label, self.vertices[b].label);
        }
        s
    }

    /// `None` if every cycle stays inside one partition member; otherwise a
    /// cycle (as vertex labels, first vertex repeated at the end) visiting
    /// two members.
    pub fn mixed_cycle(&self) -> Option<Vec<String>> {
        let mut g: DiGraph<usize, ()> = DiGraph::new();
        let nodes: Vec<NodeIndex> = (0..self.vertices.len()).map(|i| g.add_node(i)).collect();
        for &(a, b) in self.edges.keys() {
            g.add_edge(nodes[a], nodes[b], ());
        }
        let mut sccs = tarjan_scc(&g);
        sccs.iter_mut().for_each(|c| c.sort());
        sccs.sort();
        for scc in sccs {
            let members: Vec<usize> = scc.iter().map(|&n| g[n]).collect();
            let part = self.vertices[members[0]].part;
            let Some(&other) = members.iter().find(|&&v| self.vertices[v].part != part) else { continue };
            let start = members[0];
            let inside: BTreeSet<usize> = members.iter().copied().collect();
            let mut cycle = self.path(start, other, &inside);
            let back = self.path(other, start, &inside);
            cycle.extend(back.into_iter().skip(1));
            return Some(cycle.into_iter().map(|v| self.vertices[v].label.clone()).collect());
        }
        None
    }

    pub fn is_separable(&self) -> bool {
        self.mixed_cycle().is_none()
    }

    /// The subgraph of edges backed by a satisfiable edge condition, dropping
    /// those present only because the search cap was hit.
    pub fn definite(&self) -> DependencyGraph {
        let mut g = self.clone();
        g.edges.retain(|_, ps| ps.iter().any(|p| matches!(p.verdict, SatVerdict::Satisfiable(_))));
        g
    }

    pub fn has_unknown_edges(&self) -> bool {
        self.edges.values().flatten().any(|p| matches!(p.verdict, SatVerdict::UnknownWithinBound(_)))
    }

    /// Shortest path inside a strongly connected set.
    fn path(&self, from: usize, to: usize, inside: &BTreeSet<usize>) -> Vec<usize> {
        let mut prev: BTreeMap<usize, usize> = BTreeMap::new();
        let mut queue = VecDeque::from([from]);
        let mut seen = BTreeSet::from([from]);
        while let Some(v) = queue.pop_front() {
            if v == to {
                break;
            }
            for &(a, b) in self.edges.keys() {
                if a == v && inside.contains(&b) && seen.insert(b) {
                    prev.insert(b, v);
                    queue.push_back(b);
                }
            }
        }
        let mut out = vec![to];
        let mut cur = to;
        while cur != from {
            cur = prev[&cur];
            out.push(cur);
        }
        out.reverse();
        out
    }
}

/// Checks the partition and lays out the vertices `(p, λi)` for which
/// `Ψ ∪ {∃X λi^p(X)}` may be satisfiable.
fn vertices(u: &Arc<Universe>, part: &Partition, psi: &[Formula]) -> Result<DependencyGraph> {
    if let Some(why) = part.defect(u)? {
        return Err(Error::Semantic(format!("not a partition: {why}")));
    }
    let mut g = DependencyGraph { part_names: part.members.iter().map(|(n, _)| n.clone()).collect(), ..Default::default() };
    let mut preds: Vec<&Sym> = u.sig.predicates().map(|(p, _)| p).collect();
    preds.sort();
    for p in preds {
        for i in 0..part.len() {
            let e = part.member(i).get(&u.sig, p);
            if e.formula.is_bottom() {
                continue;
            }
            let mut theory = psi.to_vec();
            theory.push(Formula::exists_many(&e.params, e.formula.clone()));
            if bounded_sat(u, &theory)?.possibly_satisfiable() {
                g.vertices.push(Vertex { pred: p.clone(), part: i, label: format!("{p}@{}", part.name(i)) });
            }
        }
    }
    Ok(g)
}

fn vertex_ids(g: &DependencyGraph, pred: &Sym) -> Vec<(usize, usize)> {
    g.vertices.iter().enumerate().filter(|(_, v)| v.pred == *pred).map(|(k, v)| (k, v.part)).collect()
}

struct Task {
    from: usize,
    to: usize,
    theory: Vec<Formula>,
    rule: String,
    head: String,
    body: String,
}

fn run_tasks(u: &Arc<Universe>, g: &mut DependencyGraph, tasks: Vec<Task>) -> Result<()> {
    let verdicts: Vec<Result<SatVerdict>> = tasks.par_iter().map(|t| bounded_sat(u, &t.theory)).collect();
    for (t, v) in tasks.into_iter().zip(verdicts) {
        let v = v?;
        if v.possibly_satisfiable() {
            g.add(t.from, t.to, Provenance { rule: t.rule, head: t.head, body: t.body, verdict: v, condition: t.theory });
        }
    }
    Ok(())
}

/// `G_Λ(Π)`: edge `(p,λi) → (q,λj)` when `∃X(B ∧ p(t) ∧ λi^p(t) ∧ λj^q(r))`
/// is satisfiable for a head atom `p(t)` and a nonnegated body atom `q(r)`.
pub fn program_dep_graph(u: &Arc<Universe>, program: &[Rule], part: &Partition) -> Result<DependencyGraph> {
    let mut g = vertices(u, part, &[])?;
    let mut tasks = Vec::new();
    for r in program {
        let body = r.antecedent();
        for (hk, h) in r.head.iter().enumerate() {
            let Some(p) = h.user_name() else { continue };
            for (bk, lit) in r.body.iter().enumerate() {
                let Formula::Atom(b) = &lit.atom else { continue };
                let Some(q) = b.user_name() else { continue };
                if lit.negations != 0 {
                    continue;
                }
                for &(vi, i) in &vertex_ids(&g, p) {
                    for &(vj, j) in &vertex_ids(&g, q) {
                        let s = Formula::and(vec![
                            body.clone(),
                            Formula::atom(h.clone()),
                            part.member(i).instantiate(p, &h.args),
                            part.member(j).instantiate(q, &b.args),
                        ]);
                        tasks.push(Task {
                            from: vi,
                            to: vj,
                            theory: vec![s.existential_closure()],
                            rule: r.to_string(),
                            head: format!("head[{hk}]"),
                            body: format!("body[{bk}]"),
                        });
                    }
                }
            }
        }
    }
    run_tasks(u, &mut g, tasks)?;
    Ok(g)
}

fn vars_as_terms(vs: &[Var]) -> Vec<Term> {
    vs.iter().map(Term::var).collect()
}

/// `G_{Λ,Ψ}(Γ)`: for every rule `B → H` of `Γ`, strictly positive `p(t)` in
/// `H` and positive nonnegated `q(r)` in `B`, an edge when
/// `Ψ ∪ {∃XYZ(Pnn^Ψ(B) ∧ Pos^Ψ(H) ∧ λj^q(Y) ∧ λi^p(Z))}` is satisfiable.
pub fn theory_dep_graph(
    u: &Arc<Universe>,
    gamma: &[Formula],
    part: &Partition,
    psi: &[Formula],
) -> Result<DependencyGraph> {
    let mut g = vertices(u, part, psi)?;
    let mut tasks = Vec::new();
    for ro in rules_of(gamma) {
        let (b, h) = (&ro.antecedent, &ro.consequent);
        let rule = format!("sentence {} at {}: {}", ro.sentence + 1, ro.path, Formula::implies(b.clone(), h.clone()));
        for (hp, ha) in h.atom_occurrences() {
            if !classify(h, &hp).is_some_and(|pl| pl.strictly_positive()) {
                continue;
            }
            let p = ha.user_name().unwrap();
            let z = fresh_vars(u, ha, 'z');
            let pos = pos_formula(u, h, &hp, psi, &z)?;
            if pos.is_bottom() {
                continue;
            }
            for (bp, ba) in b.atom_occurrences() {
                if !classify(b, &bp).is_some_and(|pl| pl.positive() && pl.nonnegated()) {
                    continue;
                }
                let q = ba.user_name().unwrap();
                let y = fresh_vars(u, ba, 'y');
                let pnn = pnn_formula(u, b, &bp, psi, &y)?;
                if pnn.is_bottom() {
                    continue;
                }
                for &(vi, i) in &vertex_ids(&g, p) {
                    for &(vj, j) in &vertex_ids(&g, q) {
                        let s = Formula::and(vec![
                            pnn.clone(),
                            pos.clone(),
                            part.member(j).instantiate(q, &vars_as_terms(&y)),
                            part.member(i).instantiate(p, &vars_as_terms(&z)),
                        ]);
                        let mut theory = psi.to_vec();
                        theory.push(s.existential_closure());
                        tasks.push(Task {
                            from: vi,
                            to: vj,
                            theory,
                            rule: rule.clone(),
                            head: format!("{ha} at {hp}"),
                            body: format!("{ba} at {bp}"),
                        });
                    }
                }
            }
        }
    }
    run_tasks(u, &mut g, tasks)?;
    Ok(g)
}

/// Every instance of `f` obtained by substituting names for `vars`.
/// Out-of-range arithmetic makes the affected atoms false, so such
/// instances contribute no atoms.
fn instances_over(u: &Universe, vars: &[Var], f: &Formula) -> Vec<Formula> {
    let mut out = vec![f.clone()];
    for v in vars {
        out = out
            .into_iter()
            .flat_map(|g| {
                u.domain(&v.sort)
                    .iter()
                    .map(|d| g.substitute(&BTreeMap::from([(v.clone(), name_of(u, d))])))
                    .collect::<Vec<_>>()
            })
            .collect();
    }
    out
}

/// `G_{I,A}(Γ)`: vertices are the atoms of `a`; an edge `p(d) → q(e)` when
/// some rule instance `F1 → F2` has `p(d) ∈ Pos_I(F2)` and `q(e) ∈ Pnn_I(F1)`.
/// `part_of` attributes each atom to a partition member.
pub fn grounded_dep_graph(
    i: &FiniteInterpretation,
    a: &FixedBitSet,
    gamma: &[Formula],
    part_of: &dyn Fn(u32) -> usize,
) -> DependencyGraph {
    let u = i.universe();
    let mut g = DependencyGraph::default();
    let mut index = BTreeMap::new();
    for id in a.ones() {
        let atom = u.atom(id as u32);
        index.insert(id, g.vertices.len());
        g.vertices.push(Vertex { pred: atom.pred.clone(), part: part_of(id as u32), label: atom.to_string() });
    }
    for ro in rules_of(gamma) {
        let rule = Formula::implies(ro.antecedent.clone(), ro.consequent.clone());
        let vars = rule.free_vars_ordered();
        for inst in instances_over(u, &vars, &rule) {
            let Formula::Implies(f1, f2) = &inst else { continue };
            let heads = pos_atoms(i, f2);
            let bodies = pnn_atoms(i, f1);
            for h in heads.ones().filter(|h| a.contains(*h)) {
                for b in bodies.ones().filter(|b| a.contains(*b)) {
                    g.edges.entry((index[&h], index[&b])).or_default();
                }
            }
        }
    }
    g
}

/// Name terms for the arguments of atom `id`.
pub(crate) fn atom_args(u: &Universe, id: u32) -> Vec<Term> {
    u.atom(id).args.iter().map(|d| name_of(u, d)).collect()
}

/// The occurrence `pred#k` of a formula, as used on the command line.
pub fn occurrence_by_name(f: &Formula, spec: &str) -> Result<crate::syntax::OccurrencePath> {
    let (p, k) = spec.split_once('#').unwrap_or((spec, "1"));
    let k: usize = k.parse().map_err(|_| Error::Semantic(format!("bad occurrence `{spec}`")))?;
    nth_occurrence(f, p, k).ok_or_else(|| Error::Semantic(format!("no occurrence `{spec}` in {f}")))
}

/// Index of the member of `lambdas` whose formula holds for atom `id` in `i`.
pub fn member_of(i: &FiniteInterpretation, lambdas: &[IntensionalityStatement], id: u32) -> Option<usize> {
    let u = i.universe();
    let atom = u.atom(id);
    lambdas
        .iter()
        .position(|l| crate::semantics::satisfies(i, &l.instantiate(&atom.pred, &atom_args(u, id))))
}
