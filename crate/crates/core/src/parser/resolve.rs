//! Name resolution and sort inference for parsed formulas.
//!
//! Every variable occurrence is attached to a slot (one per binder, plus one
//! per free variable name). Slots collect constraints from the positions they
//! occur in; a sort is then chosen per slot, and anything left undetermined
//! is reported rather than guessed.

use std::collections::BTreeMap;

use super::lexer::Pos;
use super::ParseError;
use crate::syntax::{ArithOp, Atom, CmpOp, Formula, Literal, Rule, Signature, Sort, Sym, Term, Value, Var};

#[derive(Clone, Debug)]
pub enum RTerm {
    Var { name: String, pos: Pos },
    Const { name: String, pos: Pos },
    Int(i64, Pos),
    App(ArithOp, Box<RTerm>, Box<RTerm>),
}

#[derive(Clone, Debug)]
pub enum RForm {
    Atom { name: String, args: Vec<RTerm>, pos: Pos },
    Eq(RTerm, RTerm, Pos),
    Cmp(CmpOp, RTerm, RTerm, Pos),
    Top,
    Bot,
    Not(Box<RForm>),
    And(Vec<RForm>),
    Or(Vec<RForm>),
    Imp(Box<RForm>, Box<RForm>),
    Iff(Box<RForm>, Box<RForm>),
    Quant { forall: bool, vars: Vec<(String, Option<Sort>, Pos)>, body: Box<RForm> },
    Group(Box<RForm>),
}

#[derive(Default)]
struct Slot {
    name: String,
    pos: Option<Pos>,
    fixed: Option<Sort>,
    uppers: Vec<Sort>,
    int_ctx: bool,
    eq_consts: Vec<Sort>,
    eq_slots: Vec<usize>,
    sort: Option<Sort>,
}

pub struct Resolver<'a> {
    sig: &'a Signature,
    consts: &'a BTreeMap<Sym, Sort>,
    range: Option<(i64, i64)>,
    slots: Vec<Slot>,
    free: BTreeMap<String, usize>,
    scope: Vec<(String, usize)>,
    // Slot assigned to each binder and variable occurrence, in walk order.
    binder_slots: Vec<usize>,
    occ_slots: Vec<usize>,
    cursor: (usize, usize),
}

type R<T> = Result<T, ParseError>;

fn err(pos: Pos, m: impl Into<String>) -> ParseError {
    ParseError::at(pos, m)
}

impl<'a> Resolver<'a> {
    pub fn new(sig: &'a Signature, consts: &'a BTreeMap<Sym, Sort>, range: Option<(i64, i64)>) -> Self {
        Resolver {
            sig,
            consts,
            range,
            slots: Vec::new(),
            free: BTreeMap::new(),
            scope: Vec::new(),
            binder_slots: Vec::new(),
            occ_slots: Vec::new(),
            cursor: (0, 0),
        }
    }

    /// Resolves a formula. `params` pre-declares free variables with fixed
    /// sorts; when non-empty, no other free variable is allowed.
    pub fn formula(&mut self, f: &RForm, params: &[Var]) -> R<Formula> {
        for v in params {
            let id = self.new_slot(v.name.as_str(), None);
            self.slots[id].fixed = Some(v.sort.clone());
            self.free.insert(v.name.to_string(), id);
        }
        self.collect(f)?;
        if !params.is_empty() {
            if let Some((name, &id)) = self.free.iter().find(|(n, _)| !params.iter().any(|p| p.name.as_str() == n.as_str())) {
                return Err(err(
                    self.slots[id].pos.unwrap_or(Pos { line: 0, col: 0 }),
                    format!("variable `{name}` is not a parameter of the predicate"),
                ));
            }
        }
        self.solve()?;
        self.cursor = (0, 0);
        self.build(f)
    }

    pub fn rule(&mut self, head: &[RForm], body: &[RForm], pos: Pos) -> R<Rule> {
        for h in head {
            self.collect(h)?;
        }
        let body: Vec<&RForm> = body.iter().filter(|b| !matches!(b, RForm::Top)).collect();
        for b in &body {
            self.collect(b)?;
        }
        self.solve()?;
        self.cursor = (0, 0);
        let mut heads = Vec::new();
        for h in head {
            match self.build(h)? {
                Formula::Atom(a) => heads.push(a),
                _ => return Err(err(pos, "a rule head must be a disjunction of atoms")),
            }
        }
        let mut lits = Vec::new();
        for b in body {
            let mut negs = 0u8;
            let mut cur = b;
            while let RForm::Not(inner) = cur {
                negs += 1;
                cur = inner;
            }
            while let RForm::Group(inner) = cur {
                cur = inner;
            }
            if negs > 2 {
                return Err(err(pos, "a body literal may carry at most two `not`"));
            }
            let atom = self.build(cur)?;
            if !atom.is_atomic() {
                return Err(err(pos, "rule bodies may contain only literals; write a sentence with `->` instead"));
            }
            lits.push(Literal { negations: negs, atom });
        }
        Ok(Rule { head: heads, body: lits })
    }

    fn new_slot(&mut self, name: &str, pos: Option<Pos>) -> usize {
        self.slots.push(Slot { name: name.to_string(), pos, ..Default::default() });
        self.slots.len() - 1
    }

    fn var_slot(&mut self, name: &str, pos: Pos) -> usize {
        if let Some((_, id)) = self.scope.iter().rev().find(|(n, _)| n == name) {
            return *id;
        }
        if let Some(&id) = self.free.get(name) {
            if self.slots[id].pos.is_none() {
                self.slots[id].pos = Some(pos);
            }
            return id;
        }
        let id = self.new_slot(name, Some(pos));
        self.free.insert(name.to_string(), id);
        id
    }

    fn collect_term(&mut self, t: &RTerm, expected: Option<&Sort>, int: bool) -> R<()> {
        match t {
            RTerm::Var { name, pos } => {
                let id = self.var_slot(name, *pos);
                self.occ_slots.push(id);
                if let Some(s) = expected {
                    self.slots[id].uppers.push(s.clone());
                }
                if int {
                    self.slots[id].int_ctx = true;
                }
            }
            RTerm::Const { .. } | RTerm::Int(..) => {}
            RTerm::App(_, a, b) => {
                let int = Sort::int();
                self.collect_term(a, Some(&int), true)?;
                self.collect_term(b, Some(&int), true)?;
            }
        }
        Ok(())
    }

    fn const_sort(&self, name: &str, pos: Pos) -> R<Sort> {
        self.consts.get(&Sym::from(name)).cloned().ok_or_else(|| err(pos, format!("undeclared constant `{name}`")))
    }

    fn collect_pair(&mut self, a: &RTerm, b: &RTerm, int_only: bool) -> R<()> {
        let first = self.occ_slots.len();
        self.collect_term(a, None, int_only)?;
        let mid = self.occ_slots.len();
        self.collect_term(b, None, int_only)?;
        let var_of = |t: &RTerm, idx: usize| matches!(t, RTerm::Var { .. }).then_some(idx);
        let sa = var_of(a, first).map(|i| self.occ_slots[i]);
        let sb = var_of(b, mid).map(|i| self.occ_slots[i]);
        let hint = |t: &RTerm, me: &Self| -> R<Option<Sort>> {
            Ok(match t {
                RTerm::Const { name, pos } => Some(me.const_sort(name, *pos)?),
                RTerm::Int(..) | RTerm::App(..) => Some(Sort::int()),
                RTerm::Var { .. } => None,
            })
        };
        match (sa, sb) {
            (Some(x), Some(y)) => {
                self.slots[x].eq_slots.push(y);
                self.slots[y].eq_slots.push(x);
            }
            (Some(x), None) => {
                if let Some(s) = hint(b, self)? {
                    self.slots[x].eq_consts.push(s);
                }
            }
            (None, Some(y)) => {
                if let Some(s) = hint(a, self)? {
                    self.slots[y].eq_consts.push(s);
                }
            }
            (None, None) => {}
        }
        Ok(())
    }

    fn collect(&mut self, f: &RForm) -> R<()> {
        match f {
            RForm::Atom { name, args, pos } => {
                let sorts = self
                    .sig
                    .pred_sorts(&Sym::from(name.as_str()))
                    .ok_or_else(|| err(*pos, format!("undeclared predicate `{name}`")))?
                    .to_vec();
                if sorts.len() != args.len() {
                    return Err(err(*pos, format!("`{name}` expects {} arguments, got {}", sorts.len(), args.len())));
                }
                for (t, s) in args.iter().zip(&sorts) {
                    self.collect_term(t, Some(s), false)?;
                }
            }
            RForm::Eq(a, b, _) => self.collect_pair(a, b, false)?,
            RForm::Cmp(op, a, b, _) => self.collect_pair(a, b, *op != CmpOp::Ne)?,
            RForm::Top | RForm::Bot => {}
            RForm::Not(g) | RForm::Group(g) => self.collect(g)?,
            RForm::And(v) | RForm::Or(v) => {
                for g in v {
                    self.collect(g)?;
                }
            }
            RForm::Imp(a, b) | RForm::Iff(a, b) => {
                self.collect(a)?;
                self.collect(b)?;
            }
            RForm::Quant { vars, body, .. } => {
                for (v, ann, pos) in vars {
                    let id = self.new_slot(v, Some(*pos));
                    self.slots[id].fixed = ann.clone();
                    self.binder_slots.push(id);
                    self.scope.push((v.clone(), id));
                }
                self.collect(body)?;
                self.scope.truncate(self.scope.len() - vars.len());
            }
        }
        Ok(())
    }

    fn solve(&mut self) -> R<()> {
        let sig = self.sig;
        for s in &mut self.slots {
            let pos = s.pos.unwrap_or(Pos { line: 0, col: 0 });
            if let Some(f) = &s.fixed {
                if let Some(u) = s.uppers.iter().find(|u| !sig.is_subsort(f, u)) {
                    return Err(err(pos, format!("variable `{}` of sort `{f}` used where `{u}` is expected", s.name)));
                }
                if s.int_ctx && !f.is_int() {
                    return Err(err(pos, format!("variable `{}` of sort `{f}` used in arithmetic", s.name)));
                }
                s.sort = Some(f.clone());
            } else if !s.uppers.is_empty() {
                let g = sig.glb(&s.uppers).ok_or_else(|| {
                    err(pos, format!("variable `{}` is used at incompatible sorts", s.name))
                })?;
                if s.int_ctx && !g.is_int() {
                    return Err(err(pos, format!("variable `{}` of sort `{g}` used in arithmetic", s.name)));
                }
                s.sort = Some(g);
            } else if s.int_ctx {
                s.sort = Some(Sort::int());
            }
        }
        loop {
            let mut changed = false;
            for i in 0..self.slots.len() {
                if self.slots[i].sort.is_some() {
                    continue;
                }
                let from_const = sig.glb(&self.slots[i].eq_consts).or_else(|| self.slots[i].eq_consts.first().cloned());
                let from_var = self.slots[i].eq_slots.iter().find_map(|&j| self.slots[j].sort.clone());
                if let Some(s) = from_const.or(from_var) {
                    self.slots[i].sort = Some(s);
                    changed = true;
                }
            }
            if !changed {
                break;
            }
        }
        if let Some(s) = self.slots.iter().find(|s| s.sort.is_none()) {
            return Err(err(
                s.pos.unwrap_or(Pos { line: 0, col: 0 }),
                format!("cannot infer the sort of variable `{}`; annotate its quantifier as `{}:sort`", s.name, s.name),
            ));
        }
        Ok(())
    }

    fn slot_var(&self, id: usize) -> Var {
        let s = &self.slots[id];
        Var::new(&s.name, s.sort.clone().expect("sorts are solved before building"))
    }

    fn next_occ(&mut self) -> usize {
        let id = self.occ_slots[self.cursor.0];
        self.cursor.0 += 1;
        id
    }

    fn next_binder(&mut self) -> usize {
        let id = self.binder_slots[self.cursor.1];
        self.cursor.1 += 1;
        id
    }

    fn build_term(&mut self, t: &RTerm) -> R<Term> {
        Ok(match t {
            RTerm::Var { .. } => {
                let id = self.next_occ();
                Term::Var(self.slot_var(id))
            }
            RTerm::Const { name, pos } => {
                let s = self.const_sort(name, *pos)?;
                Term::Name(Value::Sym(Sym::from(name.as_str())), s)
            }
            RTerm::Int(v, pos) => {
                if !self.sig.has_int() {
                    return Err(err(*pos, "integer literal used but no `int range` is declared"));
                }
                if let Some((lo, hi)) = self.range {
                    if *v < lo || *v > hi {
                        return Err(err(*pos, format!("integer literal {v} lies outside the declared range {lo}..{hi}")));
                    }
                }
                Term::int(*v)
            }
            RTerm::App(op, a, b) => {
                let a = self.build_term(a)?;
                let b = self.build_term(b)?;
                for x in [&a, &b] {
                    if !x.sort().is_int() {
                        return Err(err(rterm_pos(t), format!("arithmetic on `{x}` of sort `{}`", x.sort())));
                    }
                }
                Term::app(*op, a, b)
            }
        })
    }

    fn build(&mut self, f: &RForm) -> R<Formula> {
        Ok(match f {
            RForm::Atom { name, args, pos } => {
                let sorts = self.sig.pred_sorts(&Sym::from(name.as_str())).expect("checked in collect").to_vec();
                let mut ts = Vec::new();
                for (t, s) in args.iter().zip(&sorts) {
                    let t = self.build_term(t)?;
                    if !self.sig.is_subsort(&t.sort(), s) {
                        return Err(err(*pos, format!("argument `{t}` of `{name}` has sort `{}`, expected `{s}`", t.sort())));
                    }
                    ts.push(t);
                }
                Formula::Atom(Atom::user(name, ts))
            }
            RForm::Eq(a, b, pos) => {
                let (a, b) = (self.build_term(a)?, self.build_term(b)?);
                if !self.sig.have_common_supersort(&a.sort(), &b.sort()) {
                    return Err(err(*pos, format!("`{a} = {b}` compares unrelated sorts")));
                }
                Formula::Eq(a, b)
            }
            RForm::Cmp(op, a, b, pos) => {
                let (a, b) = (self.build_term(a)?, self.build_term(b)?);
                if *op == CmpOp::Ne {
                    if !self.sig.have_common_supersort(&a.sort(), &b.sort()) {
                        return Err(err(*pos, format!("`{a} != {b}` compares unrelated sorts")));
                    }
                } else if !a.sort().is_int() || !b.sort().is_int() {
                    return Err(err(*pos, format!("`{}` needs integer operands", op.symbol())));
                }
                Formula::Atom(Atom::cmp(*op, a, b))
            }
            RForm::Top => Formula::top(),
            RForm::Bot => Formula::Bottom,
            RForm::Not(g) => Formula::not(self.build(g)?),
            RForm::Group(g) => self.build(g)?,
            RForm::And(v) => {
                let items = v.iter().map(|g| self.build(g)).collect::<R<Vec<_>>>()?;
                Formula::and(items)
            }
            RForm::Or(v) => {
                let items = v.iter().map(|g| self.build(g)).collect::<R<Vec<_>>>()?;
                Formula::or(items)
            }
            RForm::Imp(a, b) => {
                let a = self.build(a)?;
                Formula::implies(a, self.build(b)?)
            }
            RForm::Iff(a, b) => {
                let a = self.build(a)?;
                Formula::iff(a, self.build(b)?)
            }
            RForm::Quant { forall, vars, body } => {
                let vs: Vec<Var> = vars.iter().map(|_| self.next_binder()).collect::<Vec<_>>().into_iter().map(|id| self.slot_var(id)).collect();
                let b = self.build(body)?;
                if *forall {
                    Formula::forall_many(&vs, b)
                } else {
                    Formula::exists_many(&vs, b)
                }
            }
        })
    }
}

fn rterm_pos(t: &RTerm) -> Pos {
    match t {
        RTerm::Var { pos, .. } | RTerm::Const { pos, .. } | RTerm::Int(_, pos) => *pos,
        RTerm::App(_, a, _) => rterm_pos(a),
    }
}
