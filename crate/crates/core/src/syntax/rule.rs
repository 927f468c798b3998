use super::formula::{Atom, Formula, OccurrencePath};
use super::term::Var;

/// An atomic formula preceded by zero, one or two `not`s.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Literal {
    pub negations: u8,
    /// Always an `Atom` or an `Eq`.
    pub atom: Formula,
}

impl Literal {
    pub fn pos(atom: Formula) -> Self {
        Literal { negations: 0, atom }
    }

    pub fn neg(atom: Formula) -> Self {
        Literal { negations: 1, atom }
    }

    pub fn to_formula(&self) -> Formula {
        (0..self.negations).fold(self.atom.clone(), |acc, _| Formula::not(acc))
    }
}

/// A disjunctive rule `H1 | ... | Hm :- L1, ..., Ln`. An empty head is `⊥`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Rule {
    pub head: Vec<Atom>,
    pub body: Vec<Literal>,
}

impl Rule {
    pub fn fact(head: Atom) -> Self {
        Rule { head: vec![head], body: vec![] }
    }

    /// The conjunction `B` of the body (⊤ when empty).
    pub fn antecedent(&self) -> Formula {
        Formula::and(self.body.iter().map(Literal::to_formula).collect())
    }

    /// The disjunction `H` of the head (⊥ when empty).
    pub fn consequent(&self) -> Formula {
        Formula::or(self.head.iter().cloned().map(Formula::Atom).collect())
    }

    /// Free variables of `B → H`, body first.
    pub fn variables(&self) -> Vec<Var> {
        Formula::implies(self.antecedent(), self.consequent()).free_vars_ordered()
    }

    /// The universal closure of `B → H`; facts become the closure of `H`.
    pub fn to_sentence(&self) -> Formula {
        let body = if self.body.is_empty() {
            self.consequent()
        } else {
            Formula::implies(self.antecedent(), self.consequent())
        };
        body.universal_closure()
    }

    /// Recognises sentences that have the shape of a (universally closed)
    /// disjunctive rule.
    pub fn from_sentence(f: &Formula) -> Option<Rule> {
        let mut cur = f;
        while let Formula::Forall(_, b) = cur {
            cur = b;
        }
        let head_of = |h: &Formula| -> Option<Vec<Atom>> {
            match h {
                Formula::Bottom => Some(vec![]),
                Formula::Atom(a) if a.user_name().is_some() => Some(vec![a.clone()]),
                Formula::Or(v) => v
                    .iter()
                    .map(|g| match g {
                        Formula::Atom(a) if a.user_name().is_some() => Some(a.clone()),
                        _ => None,
                    })
                    .collect(),
                _ => None,
            }
        };
        if let Some(head) = head_of(cur) {
            if !head.is_empty() {
                return Some(Rule { head, body: vec![] });
            }
        }
        if let Formula::Implies(b, h) = cur {
            let head = head_of(h)?;
            let lits: Vec<&Formula> = match &**b {
                Formula::And(v) => v.iter().collect(),
                other => vec![other],
            };
            let body = lits.into_iter().map(literal_of).collect::<Option<Vec<_>>>()?;
            return Some(Rule { head, body });
        }
        None
    }
}

fn literal_of(f: &Formula) -> Option<Literal> {
    let mut negs = 0u8;
    let mut cur = f;
    while let Some(inner) = cur.negated() {
        negs += 1;
        cur = inner;
        if negs > 2 {
            return None;
        }
    }
    if cur.is_atomic() {
        Some(Literal { negations: negs, atom: cur.clone() })
    } else {
        None
    }
}

/// A top-level statement of a theory: either a rule or a closed sentence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Statement {
    Rule(Rule),
    Sentence(Formula),
}

impl Statement {
    pub fn to_sentence(&self) -> Formula {
        match self {
            Statement::Rule(r) => r.to_sentence(),
            Statement::Sentence(f) => f.clone(),
        }
    }
}

pub fn sentences(stmts: &[Statement]) -> Vec<Formula> {
    stmts.iter().map(Statement::to_sentence).collect()
}

/// The rules of `stmts` if every statement is a rule (or rule-shaped sentence).
pub fn as_program(stmts: &[Statement]) -> Option<Vec<Rule>> {
    stmts
        .iter()
        .map(|s| match s {
            Statement::Rule(r) => Some(r.clone()),
            Statement::Sentence(f) => Rule::from_sentence(f),
        })
        .collect()
}

/// A strictly positive occurrence of an implication inside a sentence.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RuleOccurrence {
    pub sentence: usize,
    pub path: OccurrencePath,
    pub antecedent: Formula,
    pub consequent: Formula,
    /// Variables bound by quantifiers enclosing the occurrence, outermost first.
    pub scope: Vec<Var>,
}

impl RuleOccurrence {
    /// Free variables of `B → H` (a subset of `scope`), in scope order.
    pub fn variables(&self) -> Vec<Var> {
        let fv = Formula::implies(self.antecedent.clone(), self.consequent.clone()).free_variables();
        let mut seen = Vec::new();
        for v in self.scope.iter().rev() {
            if fv.contains(v) && !seen.contains(v) {
                seen.push(v.clone());
            }
        }
        seen.reverse();
        seen
    }
}

/// Every strictly positive occurrence of an implication, nested ones included.
/// `⊤` (that is `⊥ → ⊥`) is not reported as a rule.
pub fn rules_of(sentences: &[Formula]) -> Vec<RuleOccurrence> {
    fn go(f: &Formula, idx: usize, path: OccurrencePath, scope: &mut Vec<Var>, out: &mut Vec<RuleOccurrence>) {
        match f {
            Formula::And(v) | Formula::Or(v) => {
                for (i, g) in v.iter().enumerate() {
                    go(g, idx, path.child(i), scope, out);
                }
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                scope.push(x.clone());
                go(b, idx, path.child(0), scope, out);
                scope.pop();
            }
            Formula::Implies(a, b) => {
                if !f.is_top() {
                    out.push(RuleOccurrence {
                        sentence: idx,
                        path: path.clone(),
                        antecedent: (**a).clone(),
                        consequent: (**b).clone(),
                        scope: scope.clone(),
                    });
                }
                go(b, idx, path.child(1), scope, out);
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    for (i, s) in sentences.iter().enumerate() {
        go(s, i, OccurrencePath::root(), &mut Vec::new(), &mut out);
    }
    out
}

/// Strictly positive atom occurrences of a sentence that lie outside the
/// consequent of every rule, together with the enclosing quantifier scope.
pub fn unruled_positive_atoms(f: &Formula) -> Vec<(OccurrencePath, Vec<Var>)> {
    fn go(f: &Formula, path: OccurrencePath, scope: &mut Vec<Var>, out: &mut Vec<(OccurrencePath, Vec<Var>)>) {
        match f {
            Formula::Atom(a) if a.user_name().is_some() => out.push((path, scope.clone())),
            Formula::And(v) | Formula::Or(v) => {
                for (i, g) in v.iter().enumerate() {
                    go(g, path.child(i), scope, out);
                }
            }
            Formula::Forall(x, b) | Formula::Exists(x, b) => {
                scope.push(x.clone());
                go(b, path.child(0), scope, out);
                scope.pop();
            }
            _ => {}
        }
    }
    let mut out = Vec::new();
    go(f, OccurrencePath::root(), &mut Vec::new(), &mut out);
    out
}
