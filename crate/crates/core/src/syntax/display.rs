//! Concrete syntax for terms, formulas and rules.
//!
//! `Display` prints without sort annotations. [`annotated`] adds `X:sort` to
//! every quantified variable, which the parser accepts back verbatim.

use std::fmt::{self, Write};

use super::formula::{Atom, Formula, Pred};
use super::rule::{Literal, Rule};
use super::term::{ArithOp, Term};

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(f, self, 0)
    }
}

fn term_level(op: ArithOp) -> u8 {
    match op {
        ArithOp::Add | ArithOp::Sub => 1,
        ArithOp::Mul => 2,
    }
}

fn write_term(out: &mut dyn Write, t: &Term, min: u8) -> fmt::Result {
    match t {
        Term::Var(v) => write!(out, "{}", v.name),
        Term::Name(v, _) => write!(out, "{v}"),
        Term::App(op, a, b) => {
            let lvl = term_level(*op);
            if lvl < min {
                out.write_char('(')?;
            }
            write_term(out, a, lvl)?;
            write!(out, " {} ", op.symbol())?;
            write_term(out, b, lvl + 1)?;
            if lvl < min {
                out.write_char(')')?;
            }
            Ok(())
        }
    }
}

impl fmt::Display for Atom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.pred {
            Pred::User(name) => {
                write!(f, "{name}")?;
                if !self.args.is_empty() {
                    let args: Vec<String> = self.args.iter().map(|t| t.to_string()).collect();
                    write!(f, "({})", args.join(","))?;
                }
                Ok(())
            }
            Pred::Cmp(op) => write!(f, "{} {} {}", self.args[0], op.symbol(), self.args[1]),
        }
    }
}

// Precedence levels: 1 implication, 2 disjunction, 3 conjunction, 4 unary.
struct Printer {
    annotate: bool,
}

impl Printer {
    fn level(f: &Formula) -> u8 {
        match f {
            Formula::Implies(..) if f.is_top() || f.negated().is_some() => 4,
            Formula::Implies(..) => 1,
            Formula::Or(_) => 2,
            Formula::And(_) => 3,
            _ => 4,
        }
    }

    fn write(&self, out: &mut dyn Write, f: &Formula, min: u8) -> fmt::Result {
        let lvl = Self::level(f);
        let paren = lvl < min;
        if paren {
            out.write_char('(')?;
        }
        match f {
            Formula::Atom(a) => write!(out, "{a}")?,
            Formula::Eq(a, b) => write!(out, "{a} = {b}")?,
            Formula::Bottom => out.write_str("#false")?,
            Formula::Implies(..) if f.is_top() => out.write_str("#true")?,
            Formula::Implies(a, _) if f.negated().is_some() => {
                out.write_str("not ")?;
                self.write(out, a, 4)?;
            }
            Formula::Implies(a, b) => {
                self.write(out, a, 2)?;
                out.write_str(" -> ")?;
                self.write(out, b, 1)?;
            }
            Formula::Or(v) => {
                for (i, g) in v.iter().enumerate() {
                    if i > 0 {
                        out.write_str(" | ")?;
                    }
                    self.write(out, g, 3)?;
                }
            }
            Formula::And(v) => {
                for (i, g) in v.iter().enumerate() {
                    if i > 0 {
                        out.write_str(" & ")?;
                    }
                    self.write(out, g, 4)?;
                }
            }
            Formula::Forall(..) | Formula::Exists(..) => {
                let universal = matches!(f, Formula::Forall(..));
                out.write_str(if universal { "forall" } else { "exists" })?;
                let mut cur = f;
                loop {
                    match cur {
                        Formula::Forall(x, b) | Formula::Exists(x, b)
                            if matches!(cur, Formula::Forall(..)) == universal =>
                        {
                            write!(out, " {}", x.name)?;
                            if self.annotate {
                                write!(out, ":{}", x.sort)?;
                            }
                            cur = b;
                        }
                        _ => break,
                    }
                }
                out.write_str(" (")?;
                self.write(out, cur, 0)?;
                out.write_char(')')?;
            }
        }
        if paren {
            out.write_char(')')?;
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        Printer { annotate: false }.write(f, self, 0)
    }
}

/// Prints a formula with explicit sorts on quantified variables.
pub fn annotated(f: &Formula) -> String {
    let mut s = String::new();
    Printer { annotate: true }.write(&mut s, f, 0).expect("writing to a String cannot fail");
    s
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for _ in 0..self.negations {
            f.write_str("not ")?;
        }
        write!(f, "{}", self.atom)
    }
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.head.iter().map(|a| a.to_string()).collect();
        f.write_str(&head.join(" | "))?;
        if !self.body.is_empty() {
            let body: Vec<String> = self.body.iter().map(|l| l.to_string()).collect();
            if !head.is_empty() {
                f.write_char(' ')?;
            }
            write!(f, ":- {}", body.join(", "))?;
        } else if head.is_empty() {
            f.write_str(":- #true")?;
        }
        Ok(())
    }
}
