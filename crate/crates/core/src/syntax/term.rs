use std::fmt;
use std::sync::Arc;

use serde::{Serialize, Serializer};

/// Interned-ish symbol. Cheap to clone, ordered by string content.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Sym(Arc<str>);

impl Sym {
    pub fn new(s: &str) -> Self {
        Sym(Arc::from(s))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl From<&str> for Sym {
    fn from(s: &str) -> Self {
        Sym::new(s)
    }
}

impl From<String> for Sym {
    fn from(s: String) -> Self {
        Sym(Arc::from(s))
    }
}

impl fmt::Display for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl fmt::Debug for Sym {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", &*self.0)
    }
}

impl Serialize for Sym {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.0)
    }
}

/// A sort name. The integer sort is the reserved name `int`.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Sort(pub Sym);

pub const INT_SORT: &str = "int";

impl Sort {
    pub fn new(name: &str) -> Self {
        Sort(Sym::new(name))
    }

    pub fn int() -> Self {
        Sort::new(INT_SORT)
    }

    pub fn is_int(&self) -> bool {
        self.0.as_str() == INT_SORT
    }
}

impl fmt::Display for Sort {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// A domain element. Integers are ordered numerically and precede symbols.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Value {
    Int(i64),
    Sym(Sym),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Int(i) => write!(f, "{i}"),
            Value::Sym(s) => s.fmt(f),
        }
    }
}

impl Serialize for Value {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// A typed variable. Two variables are the same only if name and sort agree.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct Var {
    pub name: Sym,
    pub sort: Sort,
}

impl Var {
    pub fn new(name: &str, sort: Sort) -> Self {
        Var { name: Sym::new(name), sort }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum ArithOp {
    Add,
    Sub,
    Mul,
}

impl ArithOp {
    pub fn symbol(self) -> &'static str {
        match self {
            ArithOp::Add => "+",
            ArithOp::Sub => "-",
            ArithOp::Mul => "*",
        }
    }

    pub fn apply(self, a: i64, b: i64) -> Option<i64> {
        match self {
            ArithOp::Add => a.checked_add(b),
            ArithOp::Sub => a.checked_sub(b),
            ArithOp::Mul => a.checked_mul(b),
        }
    }
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub enum Term {
    Var(Var),
    /// Name of a domain element (`d*`), tagged with the sort it was declared in.
    Name(Value, Sort),
    /// Built-in integer arithmetic.
    App(ArithOp, Box<Term>, Box<Term>),
}

impl Term {
    pub fn int(i: i64) -> Self {
        Term::Name(Value::Int(i), Sort::int())
    }

    pub fn sym(name: &str, sort: Sort) -> Self {
        Term::Name(Value::Sym(Sym::new(name)), sort)
    }

    pub fn var(v: &Var) -> Self {
        Term::Var(v.clone())
    }

    pub fn app(op: ArithOp, a: Term, b: Term) -> Self {
        Term::App(op, Box::new(a), Box::new(b))
    }

    pub fn sort(&self) -> Sort {
        match self {
            Term::Var(v) => v.sort.clone(),
            Term::Name(_, s) => s.clone(),
            Term::App(..) => Sort::int(),
        }
    }

    pub fn is_ground(&self) -> bool {
        match self {
            Term::Var(_) => false,
            Term::Name(..) => true,
            Term::App(_, a, b) => a.is_ground() && b.is_ground(),
        }
    }

    pub fn contains_var(&self, v: &Var) -> bool {
        match self {
            Term::Var(w) => w == v,
            Term::Name(..) => false,
            Term::App(_, a, b) => a.contains_var(v) || b.contains_var(v),
        }
    }

    pub fn vars_into(&self, out: &mut Vec<Var>) {
        match self {
            Term::Var(v) => {
                if !out.contains(v) {
                    out.push(v.clone())
                }
            }
            Term::Name(..) => {}
            Term::App(_, a, b) => {
                a.vars_into(out);
                b.vars_into(out);
            }
        }
    }

    pub fn substitute(&self, binding: &dyn Fn(&Var) -> Option<Term>) -> Term {
        match self {
            Term::Var(v) => binding(v).unwrap_or_else(|| self.clone()),
            Term::Name(..) => self.clone(),
            Term::App(op, a, b) => Term::app(*op, a.substitute(binding), b.substitute(binding)),
        }
    }
}
