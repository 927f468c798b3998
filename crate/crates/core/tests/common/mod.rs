//! Random and exhaustive generators shared by the property suites and the
//! acceptance run. Everything is propositional unless noted.

#![allow(dead_code)]

use std::sync::Arc;

use fixedbitset::FixedBitSet;
use htsplit::intensionality::{IntensionalityStatement, Partition};
use htsplit::parser::{parse_problem, ProblemFile};
use htsplit::semantics::{universe_of, FiniteInterpretation, Universe};
use htsplit::syntax::{Formula, Sort, Term, Var};
use rand::Rng;

pub const ATOMS: [&str; 3] = ["p", "q", "r"];

pub struct Prop {
    pub file: ProblemFile,
    pub u: Arc<Universe>,
}

/// The signature `{p, q, r}` (or the first `n` letters from `p`).
pub fn prop(n: usize) -> Prop {
    let names = ["p", "q", "r", "s", "t"];
    let src: String = names[..n].iter().map(|a| format!("pred {a}. ")).collect();
    let file = parse_problem(&src).unwrap();
    let u = universe_of(&file).unwrap();
    Prop { file, u }
}

impl Prop {
    pub fn names(&self) -> Vec<String> {
        let mut v: Vec<String> = self.file.sig.predicates().map(|(p, _)| p.to_string()).collect();
        v.sort();
        v
    }

    pub fn atom(&self, k: usize) -> Formula {
        Formula::user(&self.names()[k], vec![])
    }

    pub fn n(&self) -> usize {
        self.u.space().len()
    }

    /// The interpretation whose bit `k` says whether atom `k` is true.
    pub fn interp(&self, mask: u32) -> FiniteInterpretation {
        let names = self.names();
        let mut b = FixedBitSet::with_capacity(self.n());
        for (k, name) in names.iter().enumerate() {
            if mask >> k & 1 == 1 {
                b.insert(self.u.atom_id(&name.as_str().into(), &[]).unwrap() as usize);
            }
        }
        FiniteInterpretation::new(self.u.clone(), b)
    }

    pub fn bits(&self, mask: u32) -> FixedBitSet {
        self.interp(mask).bits().clone()
    }

    /// `λ` making exactly the atoms in `mask` intensional.
    pub fn lambda(&self, mask: u32) -> IntensionalityStatement {
        let mut l = IntensionalityStatement::bottom();
        for (k, name) in self.names().iter().enumerate() {
            if mask >> k & 1 == 1 {
                l.set(&self.file.sig, name.as_str().into(), vec![], Formula::top()).unwrap();
            }
        }
        l
    }

    /// A random formula of the given depth over the atoms.
    pub fn formula(&self, rng: &mut impl Rng, depth: u32) -> Formula {
        if depth == 0 || rng.gen_ratio(1, 4) {
            return match rng.gen_range(0..10) {
                0 => Formula::Bottom,
                1 => Formula::top(),
                _ => self.atom(rng.gen_range(0..self.n())),
            };
        }
        let k = rng.gen_range(0..4);
        let a = self.formula(rng, depth - 1);
        if k == 3 {
            return Formula::not(a);
        }
        let b = self.formula(rng, depth - 1);
        match k {
            0 => Formula::And(vec![a, b]),
            1 => Formula::Or(vec![a, b]),
            _ => Formula::implies(a, b),
        }
    }

    /// A random rule `l1 & ... & lk -> h1 | ... | hm` with literals that may
    /// be negated once or twice. `heads` restricts the head atoms.
    pub fn rule(&self, rng: &mut impl Rng, heads: &[usize]) -> Formula {
        let mut body = Vec::new();
        for _ in 0..rng.gen_range(0..=2) {
            let a = self.atom(rng.gen_range(0..self.n()));
            body.push(match rng.gen_range(0..4) {
                0 => Formula::not(a),
                1 => Formula::not(Formula::not(a)),
                _ => a,
            });
        }
        let mut head = Vec::new();
        if !heads.is_empty() {
            for _ in 0..rng.gen_range(1..=2) {
                head.push(self.atom(heads[rng.gen_range(0..heads.len())]));
            }
        }
        let h = if head.is_empty() || rng.gen_ratio(1, 10) { Formula::Bottom } else { Formula::or(head) };
        if body.is_empty() {
            h
        } else {
            Formula::implies(Formula::and(body), h)
        }
    }

    /// A random two-member partition: each atom goes to member 0, member 1
    /// or stays extensional. Returns the partition and each atom's owner.
    pub fn partition(&self, rng: &mut impl Rng) -> (Partition, Vec<Option<usize>>) {
        let owner: Vec<Option<usize>> = (0..self.n())
            .map(|_| match rng.gen_range(0..5) {
                0 => None,
                k => Some(k % 2),
            })
            .collect();
        (self.partition_of(&owner), owner)
    }

    pub fn partition_of(&self, owner: &[Option<usize>]) -> Partition {
        let mask = |i: usize| owner.iter().enumerate().filter(|(_, o)| **o == Some(i)).map(|(k, _)| 1 << k).sum::<u32>();
        Partition::of_members(
            &self.file.sig,
            vec![("l1".to_string(), self.lambda(mask(0))), ("l2".to_string(), self.lambda(mask(1)))],
        )
    }
}

/// The rule alphabet of the exhaustive suite: a head atom or `⊥` under a
/// body of at most two distinct literals `a` or `not a`.
pub fn rule_alphabet(p: &Prop) -> Vec<Formula> {
    let n = p.n();
    let lits: Vec<Formula> = (0..n).flat_map(|k| [p.atom(k), Formula::not(p.atom(k))]).collect();
    let mut bodies: Vec<Vec<Formula>> = vec![vec![]];
    for i in 0..lits.len() {
        bodies.push(vec![lits[i].clone()]);
        for j in i + 1..lits.len() {
            bodies.push(vec![lits[i].clone(), lits[j].clone()]);
        }
    }
    let heads: Vec<Formula> = (0..n).map(|k| p.atom(k)).chain([Formula::Bottom]).collect();
    let mut out = Vec::new();
    for h in &heads {
        for b in &bodies {
            out.push(if b.is_empty() { h.clone() } else { Formula::implies(Formula::and(b.clone()), h.clone()) });
        }
    }
    out
}

/// First-order signature for the syntactic suites.
pub const FO_HEADER: &str = "sort obj. domain obj = {a,b}. pred p(obj). pred q(obj,obj). pred r.";

fn obj() -> Sort {
    Sort::new("obj")
}

/// A random first-order formula; variables are drawn from `X`, `Y`, `Z`
/// and may occur free. With `full` unset there are no implications (and so
/// no negations).
pub fn fo_formula(rng: &mut impl Rng, depth: u32, full: bool) -> Formula {
    let term = |rng: &mut dyn rand::RngCore| -> Term {
        match rng.gen_range(0..5) {
            0 => Term::sym("a", obj()),
            1 => Term::sym("b", obj()),
            k => Term::var(&Var::new(["X", "Y", "Z"][k - 2], obj())),
        }
    };
    if depth == 0 || rng.gen_ratio(1, 4) {
        return match rng.gen_range(0..6) {
            0 => Formula::Bottom,
            1 => Formula::user("r", vec![]),
            2 => Formula::eq(term(rng), term(rng)),
            3 => Formula::user("q", vec![term(rng), term(rng)]),
            _ => Formula::user("p", vec![term(rng)]),
        };
    }
    let v = Var::new(["X", "Y", "Z"][rng.gen_range(0..3)], obj());
    let k = if full { rng.gen_range(0..6) } else { [0, 1, 4, 5][rng.gen_range(0..4)] };
    match k {
        0 => Formula::and(vec![fo_formula(rng, depth - 1, full), fo_formula(rng, depth - 1, full)]),
        1 => Formula::or(vec![fo_formula(rng, depth - 1, full), fo_formula(rng, depth - 1, full)]),
        2 => Formula::implies(fo_formula(rng, depth - 1, full), fo_formula(rng, depth - 1, full)),
        3 => Formula::not(fo_formula(rng, depth - 1, full)),
        4 => Formula::forall(v, fo_formula(rng, depth - 1, full)),
        _ => Formula::exists(v, fo_formula(rng, depth - 1, full)),
    }
}
