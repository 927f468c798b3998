use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::Serialize;

use crate::error::Error;
use crate::syntax::{Signature, Sort, Sym, Value};

/// Default bound on search nodes for every exhaustive procedure.
pub const DEFAULT_NODE_CAP: u64 = 200_000_000;

/// A ground atom `p(d1*,...,dn*)` over a user predicate.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct GroundAtom {
    pub pred: Sym,
    pub args: Vec<Value>,
}

impl fmt::Display for GroundAtom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.pred)?;
        if !self.args.is_empty() {
            let a: Vec<String> = self.args.iter().map(|v| v.to_string()).collect();
            write!(f, "({})", a.join(","))?;
        }
        Ok(())
    }
}

impl Serialize for GroundAtom {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Declared finite extents: one list of constants per sort plus the integer
/// interval.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DomainDecls {
    pub sorts: Vec<(Sort, Vec<Sym>)>,
    pub int_range: Option<(i64, i64)>,
}

#[derive(Clone, Debug)]
struct PredSpace {
    sorts: Vec<Sort>,
    offset: u32,
    count: u32,
}

/// Dense numbering of every ground atom over the user predicates.
#[derive(Clone, Debug)]
pub struct AtomSpace {
    preds: Vec<PredSpace>,
    by_name: HashMap<Sym, usize>,
    atoms: Vec<GroundAtom>,
}

impl AtomSpace {
    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn atom(&self, id: u32) -> &GroundAtom {
        &self.atoms[id as usize]
    }

    pub fn atoms(&self) -> &[GroundAtom] {
        &self.atoms
    }

    /// Id range of the atoms of `pred`.
    pub fn pred_range(&self, pred: &Sym) -> Option<std::ops::Range<u32>> {
        self.by_name.get(pred).map(|&i| {
            let p = &self.preds[i];
            p.offset..p.offset + p.count
        })
    }

    pub fn pred_sorts(&self, pred: &Sym) -> Option<&[Sort]> {
        self.by_name.get(pred).map(|&i| self.preds[i].sorts.as_slice())
    }
}

/// Signature together with finite domains: everything needed to enumerate
/// interpretations. Sorts are closed, so every verdict computed over a
/// universe is decisive for that universe.
#[derive(Clone, Debug)]
pub struct Universe {
    pub sig: Arc<Signature>,
    pub decls: DomainDecls,
    elems: BTreeMap<Sort, Vec<Value>>,
    positions: HashMap<Sort, HashMap<Value, usize>>,
    const_sort: BTreeMap<Sym, Sort>,
    space: AtomSpace,
    /// Bound on search nodes for each exhaustive call.
    pub cap: u64,
}

impl Universe {
    pub fn new(sig: Arc<Signature>, decls: DomainDecls) -> Result<Self, Error> {
        let mut own: BTreeMap<Sort, Vec<Value>> = BTreeMap::new();
        let mut const_sort = BTreeMap::new();
        for (s, cs) in &decls.sorts {
            if !sig.has_sort(s) || s.is_int() {
                return Err(Error::Semantic(format!("domain declared for unknown sort `{s}`")));
            }
            for c in cs {
                if let Some(prev) = const_sort.insert(c.clone(), s.clone()) {
                    return Err(Error::Semantic(format!(
                        "constant `{c}` declared in the domains of both `{prev}` and `{s}`"
                    )));
                }
                own.entry(s.clone()).or_default().push(Value::Sym(c.clone()));
            }
        }
        let mut elems: BTreeMap<Sort, Vec<Value>> = BTreeMap::new();
        for s in sig.sorts() {
            if s.is_int() {
                let (lo, hi) = decls
                    .int_range
                    .ok_or_else(|| Error::Semantic("the integer sort needs an `int range` declaration".into()))?;
                if lo > hi {
                    return Err(Error::Semantic(format!("empty integer range {lo}..{hi}")));
                }
                if hi - lo > 1_000_000 {
                    return Err(Error::Resource(format!("integer range {lo}..{hi} is too large")));
                }
                elems.insert(s.clone(), (lo..=hi).map(Value::Int).collect());
                continue;
            }
            let mut vals = Vec::new();
            for t in sig.sorts() {
                if sig.is_subsort(t, s) {
                    vals.extend(own.get(t).cloned().unwrap_or_default());
                }
            }
            vals.sort();
            vals.dedup();
            if vals.is_empty() {
                return Err(Error::Semantic(format!("sort `{s}` has an empty domain")));
            }
            elems.insert(s.clone(), vals);
        }
        let positions = elems
            .iter()
            .map(|(s, vs)| (s.clone(), vs.iter().enumerate().map(|(i, v)| (v.clone(), i)).collect()))
            .collect();
        let mut preds = Vec::new();
        let mut by_name = HashMap::new();
        let mut atoms = Vec::new();
        let mut names: Vec<(&Sym, &Vec<Sort>)> = sig.predicates().collect();
        names.sort_by(|a, b| a.0.cmp(b.0));
        for (name, sorts) in names {
            let offset = atoms.len() as u32;
            let doms: Vec<&Vec<Value>> = sorts.iter().map(|s| &elems[s]).collect();
            let mut idx = vec![0usize; sorts.len()];
            loop {
                atoms.push(GroundAtom { pred: name.clone(), args: idx.iter().zip(&doms).map(|(&i, d)| d[i].clone()).collect() });
                if atoms.len() > 4_000_000 {
                    return Err(Error::Resource("more than 4,000,000 ground atoms".into()));
                }
                // Mixed-radix increment, last argument fastest.
                let mut k = sorts.len();
                loop {
                    if k == 0 {
                        break;
                    }
                    k -= 1;
                    idx[k] += 1;
                    if idx[k] < doms[k].len() {
                        break;
                    }
                    idx[k] = 0;
                    if k == 0 {
                        k = usize::MAX;
                        break;
                    }
                }
                if k == usize::MAX || sorts.is_empty() {
                    break;
                }
            }
            by_name.insert(name.clone(), preds.len());
            preds.push(PredSpace { sorts: sorts.clone(), offset, count: atoms.len() as u32 - offset });
        }
        Ok(Universe {
            sig,
            decls,
            elems,
            positions,
            const_sort,
            space: AtomSpace { preds, by_name, atoms },
            cap: DEFAULT_NODE_CAP,
        })
    }

    pub fn with_cap(mut self, cap: u64) -> Self {
        self.cap = cap;
        self
    }

    pub fn space(&self) -> &AtomSpace {
        &self.space
    }

    /// All elements of sort `s`, subsort elements included, sorted.
    pub fn domain(&self, s: &Sort) -> &[Value] {
        self.elems.get(s).map(|v| v.as_slice()).unwrap_or(&[])
    }

    pub fn contains(&self, s: &Sort, v: &Value) -> bool {
        self.positions.get(s).is_some_and(|m| m.contains_key(v))
    }

    pub fn int_range(&self) -> Option<(i64, i64)> {
        self.decls.int_range
    }

    /// Declared sort of a constant.
    pub fn constant_sort(&self, c: &Sym) -> Option<&Sort> {
        self.const_sort.get(c)
    }

    /// Id of the ground atom `pred(args)`, if every argument lies in the
    /// corresponding domain.
    pub fn atom_id(&self, pred: &Sym, args: &[Value]) -> Option<u32> {
        let &pi = self.space.by_name.get(pred)?;
        let p = &self.space.preds[pi];
        if args.len() != p.sorts.len() {
            return None;
        }
        let mut idx: u64 = 0;
        for (v, s) in args.iter().zip(&p.sorts) {
            let m = &self.positions[s];
            let pos = *m.get(v)?;
            idx = idx * m.len() as u64 + pos as u64;
        }
        Some(p.offset + idx as u32)
    }

    pub fn atom(&self, id: u32) -> &GroundAtom {
        self.space.atom(id)
    }

    pub fn ground_atom_id(&self, a: &GroundAtom) -> Option<u32> {
        self.atom_id(&a.pred, &a.args)
    }

    /// Human-readable description of the domains, for bounded verdicts.
    pub fn describe(&self) -> String {
        let mut parts = Vec::new();
        for s in self.sig.sorts() {
            if s.is_int() {
                let (lo, hi) = self.decls.int_range.unwrap_or((0, -1));
                parts.push(format!("int = {lo}..{hi}"));
            } else {
                let vs: Vec<String> = self.domain(s).iter().map(|v| v.to_string()).collect();
                parts.push(format!("{s} = {{{}}}", vs.join(",")));
            }
        }
        parts.join("; ")
    }
}
