use std::collections::{BTreeMap, BTreeSet};

use super::term::{Sort, Sym};

/// Many-sorted signature. Sorts form a forest under the declared subsort
/// relation; `supers` stores its reflexive-transitive closure. Function
/// symbols are limited to the built-in integer arithmetic, and comparison
/// predicates are built in as well.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Signature {
    sorts: BTreeMap<Sort, Option<Sort>>,
    decl_order: Vec<Sort>,
    supers: BTreeMap<Sort, BTreeSet<Sort>>,
    preds: BTreeMap<Sym, Vec<Sort>>,
    pred_order: Vec<Sym>,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum SignatureError {
    #[error("sort `{0}` declared twice")]
    DuplicateSort(Sort),
    #[error("unknown sort `{0}`")]
    UnknownSort(Sort),
    #[error("predicate `{0}` declared twice")]
    DuplicatePredicate(Sym),
    #[error("the integer sort cannot take part in subsort declarations")]
    IntSubsort,
    #[error("term of sort `{term}` cannot replace variable `{var}` of sort `{expected}`")]
    SortMismatch { var: Sym, term: Sort, expected: Sort },
}

impl Signature {
    pub fn new() -> Self {
        Self::default()
    }

    /// Declares the integer sort (needed before integer-typed predicates).
    pub fn add_int(&mut self) {
        let int = Sort::int();
        if !self.sorts.contains_key(&int) {
            self.sorts.insert(int.clone(), None);
            self.decl_order.push(int.clone());
            self.supers.insert(int.clone(), [int].into_iter().collect());
        }
    }

    pub fn has_int(&self) -> bool {
        self.sorts.contains_key(&Sort::int())
    }

    pub fn add_sort(&mut self, s: Sort, parent: Option<Sort>) -> Result<(), SignatureError> {
        if s.is_int() || parent.as_ref().is_some_and(|p| p.is_int()) {
            return Err(SignatureError::IntSubsort);
        }
        if self.sorts.contains_key(&s) {
            return Err(SignatureError::DuplicateSort(s));
        }
        let mut sup: BTreeSet<Sort> = [s.clone()].into_iter().collect();
        if let Some(p) = &parent {
            let ps = self.supers.get(p).ok_or_else(|| SignatureError::UnknownSort(p.clone()))?;
            sup.extend(ps.iter().cloned());
        }
        self.sorts.insert(s.clone(), parent);
        self.decl_order.push(s.clone());
        self.supers.insert(s, sup);
        Ok(())
    }

    pub fn add_pred(&mut self, name: Sym, args: Vec<Sort>) -> Result<(), SignatureError> {
        if self.preds.contains_key(&name) {
            return Err(SignatureError::DuplicatePredicate(name));
        }
        for s in &args {
            if !self.sorts.contains_key(s) {
                return Err(SignatureError::UnknownSort(s.clone()));
            }
        }
        self.preds.insert(name.clone(), args);
        self.pred_order.push(name);
        Ok(())
    }

    pub fn has_sort(&self, s: &Sort) -> bool {
        self.sorts.contains_key(s)
    }

    /// Sorts in declaration order.
    pub fn sorts(&self) -> &[Sort] {
        &self.decl_order
    }

    pub fn parent(&self, s: &Sort) -> Option<&Sort> {
        self.sorts.get(s).and_then(|p| p.as_ref())
    }

    /// Predicates in declaration order with their argument sorts.
    pub fn predicates(&self) -> impl Iterator<Item = (&Sym, &Vec<Sort>)> {
        self.pred_order.iter().map(move |p| (p, &self.preds[p]))
    }

    pub fn pred_sorts(&self, name: &Sym) -> Option<&[Sort]> {
        self.preds.get(name).map(|v| v.as_slice())
    }

    pub fn is_subsort(&self, a: &Sort, b: &Sort) -> bool {
        self.supers.get(a).is_some_and(|s| s.contains(b))
    }

    pub fn have_common_supersort(&self, a: &Sort, b: &Sort) -> bool {
        match (self.supers.get(a), self.supers.get(b)) {
            (Some(x), Some(y)) => x.intersection(y).next().is_some(),
            _ => false,
        }
    }

    /// The most specific sort among `bounds`, provided it is a subsort of all
    /// the others.
    pub fn glb(&self, bounds: &[Sort]) -> Option<Sort> {
        bounds.iter().find(|c| bounds.iter().all(|o| self.is_subsort(c, o))).cloned()
    }
}
