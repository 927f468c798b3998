use std::collections::{BTreeMap, BTreeSet};

use super::term::{Sym, Term, Var};

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Ne,
}

impl CmpOp {
    pub fn symbol(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Pred {
    User(Sym),
    /// Built-in comparison; always extensional and evaluated structurally.
    Cmp(CmpOp),
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Atom {
    pub pred: Pred,
    pub args: Vec<Term>,
}

impl Atom {
    pub fn user(name: &str, args: Vec<Term>) -> Self {
        Atom { pred: Pred::User(Sym::new(name)), args }
    }

    pub fn cmp(op: CmpOp, a: Term, b: Term) -> Self {
        Atom { pred: Pred::Cmp(op), args: vec![a, b] }
    }

    pub fn user_name(&self) -> Option<&Sym> {
        match &self.pred {
            Pred::User(s) => Some(s),
            Pred::Cmp(_) => None,
        }
    }
}

/// First-order formulas. `¬F` is `F → ⊥`, `⊤` is `⊥ → ⊥`, and `F ↔ G` is
/// expanded into two implications. `And`/`Or` are flattened and always have at
/// least two children when built through the smart constructors.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Formula {
    Atom(Atom),
    Eq(Term, Term),
    Bottom,
    And(Vec<Formula>),
    Or(Vec<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Forall(Var, Box<Formula>),
    Exists(Var, Box<Formula>),
}

/// Child indices from a formula root down to a subformula occurrence.
/// `And`/`Or` use the child position, `Implies` uses 0 for the antecedent
/// and 1 for the consequent, quantifiers use 0 for their body.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct OccurrencePath(pub Vec<usize>);

impl OccurrencePath {
    pub fn root() -> Self {
        OccurrencePath(Vec::new())
    }

    pub fn child(&self, i: usize) -> Self {
        let mut v = self.0.clone();
        v.push(i);
        OccurrencePath(v)
    }

    pub fn starts_with(&self, prefix: &OccurrencePath) -> bool {
        self.0.starts_with(&prefix.0)
    }
}

impl std::fmt::Display for OccurrencePath {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "[{}]", parts.join("."))
    }
}

impl Formula {
    pub fn atom(a: Atom) -> Self {
        Formula::Atom(a)
    }

    pub fn user(name: &str, args: Vec<Term>) -> Self {
        Formula::Atom(Atom::user(name, args))
    }

    pub fn eq(a: Term, b: Term) -> Self {
        Formula::Eq(a, b)
    }

    pub fn top() -> Self {
        Formula::Implies(Box::new(Formula::Bottom), Box::new(Formula::Bottom))
    }

    pub fn is_top(&self) -> bool {
        matches!(self, Formula::Implies(a, b) if **a == Formula::Bottom && **b == Formula::Bottom)
    }

    pub fn is_bottom(&self) -> bool {
        matches!(self, Formula::Bottom)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Self {
        Formula::Implies(Box::new(f), Box::new(Formula::Bottom))
    }

    /// The operand of `F → ⊥`, if this is a negation (and not `⊤`).
    pub fn negated(&self) -> Option<&Formula> {
        match self {
            Formula::Implies(a, b) if **b == Formula::Bottom && **a != Formula::Bottom => Some(a),
            _ => None,
        }
    }

    pub fn implies(a: Formula, b: Formula) -> Self {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn iff(a: Formula, b: Formula) -> Self {
        Formula::and(vec![Formula::implies(a.clone(), b.clone()), Formula::implies(b, a)])
    }

    /// Flattening conjunction; the empty conjunction is `⊤`.
    pub fn and(items: Vec<Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::And(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::top(),
            1 => out.pop().unwrap(),
            _ => Formula::And(out),
        }
    }

    /// Flattening disjunction; the empty disjunction is `⊥`.
    pub fn or(items: Vec<Formula>) -> Self {
        let mut out = Vec::new();
        for f in items {
            match f {
                Formula::Or(inner) => out.extend(inner),
                other => out.push(other),
            }
        }
        match out.len() {
            0 => Formula::Bottom,
            1 => out.pop().unwrap(),
            _ => Formula::Or(out),
        }
    }

    pub fn forall(v: Var, body: Formula) -> Self {
        Formula::Forall(v, Box::new(body))
    }

    pub fn exists(v: Var, body: Formula) -> Self {
        Formula::Exists(v, Box::new(body))
    }

    pub fn forall_many(vars: &[Var], body: Formula) -> Self {
        vars.iter().rev().fold(body, |acc, v| Formula::forall(v.clone(), acc))
    }

    pub fn exists_many(vars: &[Var], body: Formula) -> Self {
        vars.iter().rev().fold(body, |acc, v| Formula::exists(v.clone(), acc))
    }

    pub fn is_atomic(&self) -> bool {
        matches!(self, Formula::Atom(_) | Formula::Eq(..))
    }

    pub fn children(&self) -> Vec<&Formula> {
        match self {
            Formula::Atom(_) | Formula::Eq(..) | Formula::Bottom => vec![],
            Formula::And(v) | Formula::Or(v) => v.iter().collect(),
            Formula::Implies(a, b) => vec![a, b],
            Formula::Forall(_, b) | Formula::Exists(_, b) => vec![b],
        }
    }

    pub fn subformula(&self, path: &OccurrencePath) -> Option<&Formula> {
        let mut cur = self;
        for &i in &path.0 {
            cur = *cur.children().get(i)?;
        }
        Some(cur)
    }

    /// Free variables in order of first occurrence.
    pub fn free_vars_ordered(&self) -> Vec<Var> {
        fn go(f: &Formula, bound: &mut Vec<Var>, out: &mut Vec<Var>) {
            let push_term = |t: &Term, bound: &Vec<Var>, out: &mut Vec<Var>| {
                let mut vs = Vec::new();
                t.vars_into(&mut vs);
                for v in vs {
                    if !bound.contains(&v) && !out.contains(&v) {
                        out.push(v);
                    }
                }
            };
            match f {
                Formula::Atom(a) => {
                    for t in &a.args {
                        push_term(t, bound, out);
                    }
                }
                Formula::Eq(a, b) => {
                    push_term(a, bound, out);
                    push_term(b, bound, out);
                }
                Formula::Bottom => {}
                Formula::And(v) | Formula::Or(v) => v.iter().for_each(|g| go(g, bound, out)),
                Formula::Implies(a, b) => {
                    go(a, bound, out);
                    go(b, bound, out);
                }
                Formula::Forall(v, b) | Formula::Exists(v, b) => {
                    bound.push(v.clone());
                    go(b, bound, out);
                    bound.pop();
                }
            }
        }
        let mut out = Vec::new();
        go(self, &mut Vec::new(), &mut out);
        out
    }

    pub fn free_variables(&self) -> BTreeSet<Var> {
        self.free_vars_ordered().into_iter().collect()
    }

    pub fn is_sentence(&self) -> bool {
        self.free_vars_ordered().is_empty()
    }

    /// Every variable name used anywhere (free or bound).
    pub fn all_var_names(&self) -> BTreeSet<Sym> {
        fn go(f: &Formula, out: &mut BTreeSet<Sym>) {
            let terms = |ts: &[&Term], out: &mut BTreeSet<Sym>| {
                for t in ts {
                    let mut vs = Vec::new();
                    t.vars_into(&mut vs);
                    out.extend(vs.into_iter().map(|v| v.name));
                }
            };
            match f {
                Formula::Atom(a) => terms(&a.args.iter().collect::<Vec<_>>(), out),
                Formula::Eq(a, b) => terms(&[a, b], out),
                Formula::Bottom => {}
                Formula::Forall(v, b) | Formula::Exists(v, b) => {
                    out.insert(v.name.clone());
                    go(b, out);
                }
                _ => f.children().into_iter().for_each(|c| go(c, out)),
            }
        }
        let mut out = BTreeSet::new();
        go(self, &mut out);
        out
    }

    /// Universal closure over the free variables, in first-occurrence order.
    pub fn universal_closure(self) -> Formula {
        let vars = self.free_vars_ordered();
        Formula::forall_many(&vars, self)
    }

    pub fn existential_closure(self) -> Formula {
        let vars = self.free_vars_ordered();
        Formula::exists_many(&vars, self)
    }

    /// Capture-avoiding substitution of terms for free variables.
    pub fn substitute(&self, binding: &BTreeMap<Var, Term>) -> Formula {
        if binding.is_empty() {
            return self.clone();
        }
        let mut avoid: BTreeSet<Sym> = self.all_var_names();
        for t in binding.values() {
            let mut vs = Vec::new();
            t.vars_into(&mut vs);
            avoid.extend(vs.into_iter().map(|v| v.name));
        }
        subst(self, binding, &mut avoid)
    }

    pub fn map_terms(&self, f: &dyn Fn(&Term) -> Term) -> Formula {
        match self {
            Formula::Atom(a) => Formula::Atom(Atom { pred: a.pred.clone(), args: a.args.iter().map(f).collect() }),
            Formula::Eq(a, b) => Formula::Eq(f(a), f(b)),
            Formula::Bottom => Formula::Bottom,
            Formula::And(v) => Formula::And(v.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Or(v) => Formula::Or(v.iter().map(|g| g.map_terms(f)).collect()),
            Formula::Implies(a, b) => Formula::implies(a.map_terms(f), b.map_terms(f)),
            Formula::Forall(v, b) => Formula::forall(v.clone(), b.map_terms(f)),
            Formula::Exists(v, b) => Formula::exists(v.clone(), b.map_terms(f)),
        }
    }

    /// Constant folding of `⊥`/`⊤` (sorts are assumed non-empty).
    pub fn fold_constants(&self) -> Formula {
        match self {
            Formula::Atom(_) | Formula::Eq(..) | Formula::Bottom => self.clone(),
            Formula::And(v) => {
                let mut out = Vec::new();
                for g in v {
                    let g = g.fold_constants();
                    if g.is_bottom() {
                        return Formula::Bottom;
                    }
                    if !g.is_top() {
                        out.push(g);
                    }
                }
                Formula::and(out)
            }
            Formula::Or(v) => {
                let mut out = Vec::new();
                for g in v {
                    let g = g.fold_constants();
                    if g.is_top() {
                        return Formula::top();
                    }
                    if !g.is_bottom() {
                        out.push(g);
                    }
                }
                Formula::or(out)
            }
            Formula::Implies(a, b) => {
                let a = a.fold_constants();
                let b = b.fold_constants();
                if a.is_bottom() || b.is_top() {
                    Formula::top()
                } else if a.is_top() {
                    b
                } else {
                    Formula::implies(a, b)
                }
            }
            Formula::Forall(v, b) | Formula::Exists(v, b) => {
                let b = b.fold_constants();
                if b.is_bottom() || b.is_top() {
                    b
                } else if matches!(self, Formula::Forall(..)) {
                    Formula::forall(v.clone(), b)
                } else {
                    Formula::exists(v.clone(), b)
                }
            }
        }
    }

    /// User-predicate atom occurrences in pre-order.
    pub fn atom_occurrences(&self) -> Vec<(OccurrencePath, &Atom)> {
        fn go<'a>(f: &'a Formula, path: OccurrencePath, out: &mut Vec<(OccurrencePath, &'a Atom)>) {
            match f {
                Formula::Atom(a) => {
                    if a.user_name().is_some() {
                        out.push((path, a))
                    }
                }
                _ => {
                    for (i, c) in f.children().into_iter().enumerate() {
                        go(c, path.child(i), out);
                    }
                }
            }
        }
        let mut out = Vec::new();
        go(self, OccurrencePath::root(), &mut out);
        out
    }

    /// Names of user predicates occurring in the formula.
    pub fn predicates(&self) -> BTreeSet<Sym> {
        self.atom_occurrences().into_iter().filter_map(|(_, a)| a.user_name().cloned()).collect()
    }
}

fn subst(f: &Formula, binding: &BTreeMap<Var, Term>, avoid: &mut BTreeSet<Sym>) -> Formula {
    let lookup = |v: &Var| binding.get(v).cloned();
    match f {
        Formula::Atom(a) => Formula::Atom(Atom {
            pred: a.pred.clone(),
            args: a.args.iter().map(|t| t.substitute(&lookup)).collect(),
        }),
        Formula::Eq(a, b) => Formula::Eq(a.substitute(&lookup), b.substitute(&lookup)),
        Formula::Bottom => Formula::Bottom,
        Formula::And(v) => Formula::And(v.iter().map(|g| subst(g, binding, avoid)).collect()),
        Formula::Or(v) => Formula::Or(v.iter().map(|g| subst(g, binding, avoid)).collect()),
        Formula::Implies(a, b) => Formula::implies(subst(a, binding, avoid), subst(b, binding, avoid)),
        Formula::Forall(v, body) | Formula::Exists(v, body) => {
            let mut inner = binding.clone();
            inner.remove(v);
            let fv = body.free_variables();
            inner.retain(|k, _| fv.contains(k));
            let captures = inner.values().any(|t| t.contains_var(v));
            let (v2, body2) = if captures {
                let fresh = fresh_name(&v.name, avoid);
                avoid.insert(fresh.clone());
                let nv = Var { name: fresh, sort: v.sort.clone() };
                let mut ren = BTreeMap::new();
                ren.insert(v.clone(), Term::Var(nv.clone()));
                (nv, subst(body, &ren, avoid))
            } else {
                (v.clone(), (**body).clone())
            };
            let body3 = if inner.is_empty() { body2 } else { subst(&body2, &inner, avoid) };
            if matches!(f, Formula::Forall(..)) {
                Formula::forall(v2, body3)
            } else {
                Formula::exists(v2, body3)
            }
        }
    }
}

fn fresh_name(base: &Sym, avoid: &BTreeSet<Sym>) -> Sym {
    (1..)
        .map(|k| Sym::from(format!("{}_{}", base, k)))
        .find(|s| !avoid.contains(s))
        .unwrap()
}

/// Polarity of an occurrence: how many antecedents enclose it and whether
/// one of them belongs to a negation.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Default)]
pub struct Polarity {
    pub antecedent_depth: usize,
    pub negated: bool,
}

impl Polarity {
    pub fn strictly_positive(self) -> bool {
        self.antecedent_depth == 0
    }

    pub fn positive(self) -> bool {
        self.antecedent_depth.is_multiple_of(2)
    }

    pub fn negative(self) -> bool {
        self.antecedent_depth % 2 == 1
    }

    pub fn nonnegated(self) -> bool {
        !self.negated
    }
}

/// Polarity of the occurrence at `path`, or `None` if the path is invalid.
pub fn classify(f: &Formula, path: &OccurrencePath) -> Option<Polarity> {
    let mut pol = Polarity::default();
    let mut cur = f;
    for &i in &path.0 {
        if let Formula::Implies(_, b) = cur {
            if i == 0 {
                pol.antecedent_depth += 1;
                if **b == Formula::Bottom {
                    pol.negated = true;
                }
            }
        }
        cur = *cur.children().get(i)?;
    }
    Some(pol)
}
