use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use fixedbitset::FixedBitSet;

use super::ground::{compare, eval_math, guard_ok, guard_terms, name_of};
use super::{GroundAtom, Universe};
use crate::intensionality::IntensionalityStatement;
use crate::syntax::{Formula, Pred, Term, Value, Var};

/// An interpretation over the closed domains of a universe. Sort domains,
/// arithmetic and comparisons are fixed by the universe; only the predicate
/// tables vary, stored as the set of true atoms `At^I`.
#[derive(Clone)]
pub struct FiniteInterpretation {
    universe: Arc<Universe>,
    atoms: FixedBitSet,
}

impl FiniteInterpretation {
    pub fn new(universe: Arc<Universe>, atoms: FixedBitSet) -> Self {
        let mut atoms = atoms;
        atoms.grow(universe.space().len());
        FiniteInterpretation { universe, atoms }
    }

    pub fn empty(universe: Arc<Universe>) -> Self {
        let n = universe.space().len();
        FiniteInterpretation { universe, atoms: FixedBitSet::with_capacity(n) }
    }

    /// Interpretation making exactly `true_atoms` true. Unknown atoms are
    /// rejected.
    pub fn from_atoms<'a>(
        universe: Arc<Universe>,
        true_atoms: impl IntoIterator<Item = &'a GroundAtom>,
    ) -> Option<Self> {
        let mut bits = FixedBitSet::with_capacity(universe.space().len());
        for a in true_atoms {
            bits.insert(universe.ground_atom_id(a)? as usize);
        }
        Some(FiniteInterpretation { universe, atoms: bits })
    }

    pub fn universe(&self) -> &Arc<Universe> {
        &self.universe
    }

    pub fn bits(&self) -> &FixedBitSet {
        &self.atoms
    }

    pub fn holds(&self, id: u32) -> bool {
        self.atoms.contains(id as usize)
    }

    /// `At^I`, in canonical (lexicographic) order.
    pub fn true_atoms(&self) -> Vec<GroundAtom> {
        let mut v: Vec<GroundAtom> = self.atoms.ones().map(|i| self.universe.atom(i as u32).clone()).collect();
        v.sort_by_key(|a| a.to_string());
        v
    }

    /// Canonical text, one of the sorting keys of model listings.
    pub fn canonical(&self) -> String {
        self.to_string()
    }
}

impl PartialEq for FiniteInterpretation {
    fn eq(&self, other: &Self) -> bool {
        self.atoms == other.atoms
    }
}

impl Eq for FiniteInterpretation {}

impl PartialOrd for FiniteInterpretation {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FiniteInterpretation {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        let a: Vec<usize> = self.atoms.ones().collect();
        let b: Vec<usize> = other.atoms.ones().collect();
        a.len().cmp(&b.len()).then(a.cmp(&b))
    }
}

impl std::hash::Hash for FiniteInterpretation {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.atoms.hash(state)
    }
}

impl fmt::Display for FiniteInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = self.true_atoms().iter().map(|a| a.to_string()).collect();
        write!(f, "{{{}}}", names.join(", "))
    }
}

impl fmt::Debug for FiniteInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl serde::Serialize for FiniteInterpretation {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(self.true_atoms().iter().map(|a| a.to_string()))
    }
}

/// An HT-interpretation `⟨H, I⟩` with `H ⊆ At^I`.
#[derive(Clone, PartialEq, Eq)]
pub struct HTInterpretation {
    here: FixedBitSet,
    pub there: FiniteInterpretation,
}

impl HTInterpretation {
    /// `None` unless `here ⊆ At^I`.
    pub fn new(here: FixedBitSet, there: FiniteInterpretation) -> Option<Self> {
        let mut here = here;
        here.grow(there.atoms.len());
        here.is_subset(&there.atoms).then_some(HTInterpretation { here, there })
    }

    pub fn here(&self) -> &FixedBitSet {
        &self.here
    }

    pub fn here_holds(&self, id: u32) -> bool {
        self.here.contains(id as usize)
    }

    pub fn here_atoms(&self) -> Vec<GroundAtom> {
        FiniteInterpretation::new(self.there.universe.clone(), self.here.clone()).true_atoms()
    }
}

impl fmt::Display for HTInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let h = FiniteInterpretation::new(self.there.universe.clone(), self.here.clone());
        write!(f, "<{h}, {}>", self.there)
    }
}

impl fmt::Debug for HTInterpretation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// `t^I` for a ground term: `None` when arithmetic leaves the integer range.
pub fn eval_term(i: &FiniteInterpretation, t: &Term) -> Option<Value> {
    let v = eval_math(t, &|_| None)?;
    match v {
        Value::Int(_) if matches!(t, Term::App(..)) => guard_ok(&i.universe, Some(v.clone())).then_some(v),
        _ => Some(v),
    }
}

/// Truth of a ground atom (user predicate or comparison) in a world.
fn atom_truth(u: &Universe, f: &Formula, world: &dyn Fn(u32) -> bool) -> bool {
    match f {
        Formula::Atom(a) => {
            let Some(vals) = a.args.iter().map(|t| eval_math(t, &|_| None)).collect::<Option<Vec<_>>>() else {
                return false;
            };
            match &a.pred {
                Pred::User(p) => u.atom_id(p, &vals).is_some_and(world),
                Pred::Cmp(op) => compare(*op, &vals[0], &vals[1]),
            }
        }
        Formula::Eq(a, b) => match (eval_math(a, &|_| None), eval_math(b, &|_| None)) {
            (Some(x), Some(y)) => x == y,
            _ => false,
        },
        _ => unreachable!("atomic formula expected"),
    }
}

/// Instances of a quantified body obtained by substituting domain names,
/// skipping instances whose guard terms leave the integer range.
pub(crate) fn instances(u: &Universe, v: &Var, body: &Formula) -> Vec<Formula> {
    let guards = guard_terms(body, v);
    u.domain(&v.sort)
        .iter()
        .filter_map(|d| {
            let name = name_of(u, d);
            let ok = guards.iter().all(|t| {
                let g = t.substitute(&|w| (w == v).then(|| name.clone()));
                guard_ok(u, eval_math(&g, &|_| None))
            });
            ok.then(|| {
                let mut b = BTreeMap::new();
                b.insert(v.clone(), name);
                body.substitute(&b)
            })
        })
        .collect()
}

/// Reference classical satisfaction by substitution. Independent of the
/// grounder; used as the oracle for it.
pub fn satisfies(i: &FiniteInterpretation, f: &Formula) -> bool {
    classical(&i.universe, f, &|id| i.holds(id))
}

fn classical(u: &Universe, f: &Formula, world: &dyn Fn(u32) -> bool) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Atom(_) | Formula::Eq(..) => atom_truth(u, f, world),
        Formula::And(v) => v.iter().all(|g| classical(u, g, world)),
        Formula::Or(v) => v.iter().any(|g| classical(u, g, world)),
        Formula::Implies(a, b) => !classical(u, a, world) || classical(u, b, world),
        Formula::Forall(v, b) => instances(u, v, b).iter().all(|g| classical(u, g, world)),
        Formula::Exists(v, b) => instances(u, v, b).iter().any(|g| classical(u, g, world)),
    }
}

/// Reference here-and-there satisfaction by substitution.
pub fn ht_satisfies(h: &HTInterpretation, f: &Formula) -> bool {
    let u = &h.there.universe;
    ht(u, f, &|id| h.here_holds(id), &|id| h.there.holds(id))
}

fn ht(u: &Universe, f: &Formula, here: &dyn Fn(u32) -> bool, there: &dyn Fn(u32) -> bool) -> bool {
    match f {
        Formula::Bottom => false,
        Formula::Atom(_) | Formula::Eq(..) => atom_truth(u, f, here),
        Formula::And(v) => v.iter().all(|g| ht(u, g, here, there)),
        Formula::Or(v) => v.iter().any(|g| ht(u, g, here, there)),
        Formula::Implies(a, b) => {
            (!ht(u, a, here, there) || ht(u, b, here, there)) && (!classical(u, a, there) || classical(u, b, there))
        }
        Formula::Forall(v, b) => instances(u, v, b).iter().all(|g| ht(u, g, here, there)),
        Formula::Exists(v, b) => instances(u, v, b).iter().any(|g| ht(u, g, here, there)),
    }
}

/// `At^I`.
pub fn atoms_of(i: &FiniteInterpretation) -> FixedBitSet {
    i.atoms.clone()
}

/// `At^{I,λ}`: true atoms whose λ-formula holds on their arguments.
pub fn atoms_of_lambda(i: &FiniteInterpretation, lambda: &IntensionalityStatement) -> FixedBitSet {
    let u = &i.universe;
    let mut out = FixedBitSet::with_capacity(u.space().len());
    for id in i.atoms.ones() {
        let a = u.atom(id as u32);
        let args: Vec<Term> = a.args.iter().map(|d| name_of(u, d)).collect();
        if satisfies(i, &lambda.instantiate(&a.pred, &args)) {
            out.insert(id);
        }
    }
    out
}

/// `EM_{I,A}`: the ground disjunction `p(d) ∨ ¬p(d)` for every atom of
/// `At^I \ A`.
pub fn em_atoms(i: &FiniteInterpretation, a: &FixedBitSet) -> Vec<Formula> {
    let u = &i.universe;
    i.atoms
        .ones()
        .filter(|id| !a.contains(*id))
        .map(|id| {
            let at = u.atom(id as u32);
            let atom = Formula::user(at.pred.as_str(), at.args.iter().map(|d| name_of(u, d)).collect());
            Formula::or(vec![atom.clone(), Formula::not(atom)])
        })
        .collect()
}
