//! The `.htsplit` text format.
//!
//! ```text
//! sort block.  sort loc.  int range 0..3.
//! pred on(block,loc,int).  pred move(block,loc,int).
//! domain block = {b}.  domain loc = {l1,l2}.
//! on(B,L,T+1) :- on(B,L,T), not non(B,L,T+1).
//! forall X (p(X,1) -> p(X,2)).
//! #intensional on(B,L,T) : T != 0.
//! #part beta1 { on(B,L,T) : T != 0 & T <= 2 ; non(B,L,T) : T <= 2 }.
//! #partition lb = beta1 : lower, beta2 : upper.
//! #theory lower { ... }.   #context psi { sentence. ... }.
//! #approx psi { ... }.     #formula f1 : q | r & p.
//! ```
//!
//! Parsing is all-or-nothing: the first error aborts with its position.

mod lexer;
mod printer;
mod resolve;

use std::collections::BTreeMap;
use std::fmt;

pub use printer::print_problem;

use crate::intensionality::IntensionalityStatement;
use crate::semantics::DomainDecls;
use crate::syntax::{ArithOp, CmpOp, Formula, Signature, Sort, Statement, Sym, Var};
use lexer::{tokenize, Pos, Tok};
use resolve::{RForm, RTerm, Resolver};

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub message: String,
}

impl ParseError {
    fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError { line: pos.line, col: pos.col, message: message.into() }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.col, self.message)
    }
}

/// A `#partition` declaration: members are named `#part`s, each optionally
/// paired with the `#theory` forming the corresponding part of the split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PartitionDecl {
    pub name: Sym,
    pub members: Vec<(Sym, Option<Sym>)>,
}

/// Everything declared in one `.htsplit` file, fully resolved.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ProblemFile {
    pub sig: Signature,
    pub domains: DomainDecls,
    /// Top-level rules and sentences.
    pub statements: Vec<Statement>,
    /// Top-level `#intensional` declarations.
    pub intensional: IntensionalityStatement,
    pub parts: Vec<(Sym, IntensionalityStatement)>,
    pub partitions: Vec<PartitionDecl>,
    pub theories: Vec<(Sym, Vec<Statement>)>,
    pub contexts: Vec<(Sym, Vec<Formula>)>,
    pub approximators: Vec<(Sym, Vec<Formula>)>,
    pub formulas: Vec<(Sym, Formula)>,
}

fn lookup<'a, T>(items: &'a [(Sym, T)], name: &str) -> Option<&'a T> {
    items.iter().find(|(n, _)| n.as_str() == name).map(|(_, t)| t)
}

impl ProblemFile {
    pub fn part(&self, name: &str) -> Option<&IntensionalityStatement> {
        lookup(&self.parts, name)
    }

    pub fn theory(&self, name: &str) -> Option<&[Statement]> {
        lookup(&self.theories, name).map(|v| v.as_slice())
    }

    pub fn context(&self, name: &str) -> Option<&[Formula]> {
        lookup(&self.contexts, name).map(|v| v.as_slice())
    }

    pub fn approximator(&self, name: &str) -> Option<&[Formula]> {
        lookup(&self.approximators, name).map(|v| v.as_slice())
    }

    pub fn formula(&self, name: &str) -> Option<&Formula> {
        lookup(&self.formulas, name)
    }

    pub fn partition(&self, name: &str) -> Option<&PartitionDecl> {
        self.partitions.iter().find(|p| p.name.as_str() == name)
    }

    /// Declared sort of every constant.
    pub fn constants(&self) -> BTreeMap<Sym, Sort> {
        constants_of(&self.domains)
    }
}

fn constants_of(d: &DomainDecls) -> BTreeMap<Sym, Sort> {
    d.sorts.iter().flat_map(|(s, cs)| cs.iter().map(move |c| (c.clone(), s.clone()))).collect()
}

pub fn parse_problem(text: &str) -> Result<ProblemFile, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, i: 0, file: ProblemFile::default(), consts: BTreeMap::new() };
    p.file_body()?;
    Ok(p.file)
}

/// Parses a single formula against the declarations of `file`. Free
/// variables are left free; their sorts are inferred.
pub fn parse_formula(file: &ProblemFile, text: &str) -> Result<Formula, ParseError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, i: 0, file: file.clone(), consts: file.constants() };
    let f = p.formula()?;
    p.expect_opt_dot_eof()?;
    let mut r = Resolver::new(&p.file.sig, &p.consts, p.file.domains.int_range);
    r.formula(&f, &[])
}

struct Parser {
    toks: Vec<(Tok, Pos)>,
    i: usize,
    file: ProblemFile,
    consts: BTreeMap<Sym, Sort>,
}

type PResult<T> = Result<T, ParseError>;

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.i].0
    }

    fn peek_at(&self, k: usize) -> &Tok {
        &self.toks[(self.i + k).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.i].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.i].0.clone();
        if self.i + 1 < self.toks.len() {
            self.i += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: &Tok) -> PResult<()> {
        if self.eat(t) {
            Ok(())
        } else {
            Err(self.unexpected(&t.describe()))
        }
    }

    fn unexpected(&self, wanted: &str) -> ParseError {
        ParseError::at(self.pos(), format!("expected {wanted}, found {}", self.peek().describe()))
    }

    fn ident(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("an identifier")),
        }
    }

    fn name(&mut self) -> PResult<String> {
        match self.peek().clone() {
            Tok::Ident(s) | Tok::Var(s) => {
                self.bump();
                Ok(s)
            }
            _ => Err(self.unexpected("a name")),
        }
    }

    fn expect_opt_dot_eof(&mut self) -> PResult<()> {
        self.eat(&Tok::Dot);
        if *self.peek() != Tok::Eof {
            return Err(self.unexpected("end of input"));
        }
        Ok(())
    }

    fn resolver(&self) -> Resolver<'_> {
        Resolver::new(&self.file.sig, &self.consts, self.file.domains.int_range)
    }

    fn file_body(&mut self) -> PResult<()> {
        while *self.peek() != Tok::Eof {
            let pos = self.pos();
            match self.peek().clone() {
                Tok::Ident(k) if k == "sort" && matches!(self.peek_at(1), Tok::Ident(_)) => self.sort_decl()?,
                Tok::Ident(k) if k == "pred" && matches!(self.peek_at(1), Tok::Ident(_)) => self.pred_decl()?,
                Tok::Ident(k) if k == "domain" && matches!(self.peek_at(1), Tok::Ident(_)) => self.domain_decl()?,
                Tok::Ident(k) if k == "int" && *self.peek_at(1) == Tok::Ident("range".into()) => self.range_decl()?,
                Tok::Hash(h) => match h.as_str() {
                    "intensional" => {
                        self.bump();
                        let mut l = std::mem::take(&mut self.file.intensional);
                        let (pred, params, f) = self.lambda_entry()?;
                        if l.entry(&pred).is_some() {
                            return Err(ParseError::at(pos, format!("second intensionality declaration for `{pred}`")));
                        }
                        l.set(&self.file.sig, pred, params, f).map_err(|e| ParseError::at(pos, e.to_string()))?;
                        self.file.intensional = l;
                        self.expect(&Tok::Dot)?;
                    }
                    "part" => self.part_decl()?,
                    "partition" => self.partition_decl()?,
                    "theory" => {
                        self.bump();
                        let name = self.fresh_name(pos, |f, n| f.theory(n).is_some())?;
                        let body = self.block_statements()?;
                        self.file.theories.push((name, body));
                    }
                    "context" | "approx" => {
                        self.bump();
                        let ctx = h == "context";
                        let name = self.fresh_name(pos, |f, n| {
                            if ctx {
                                f.context(n).is_some()
                            } else {
                                f.approximator(n).is_some()
                            }
                        })?;
                        let body: Vec<Formula> = self.block_statements()?.iter().map(Statement::to_sentence).collect();
                        if ctx {
                            self.file.contexts.push((name, body));
                        } else {
                            self.file.approximators.push((name, body));
                        }
                    }
                    "formula" => {
                        self.bump();
                        let name = self.fresh_name(pos, |f, n| f.formula(n).is_some())?;
                        self.expect(&Tok::Colon)?;
                        let f = self.formula()?;
                        let f = self.resolver().formula(&f, &[])?;
                        self.expect(&Tok::Dot)?;
                        self.file.formulas.push((name, f));
                    }
                    _ => self.statement_into_main()?,
                },
                _ => self.statement_into_main()?,
            }
        }
        self.check_partitions()
    }

    fn statement_into_main(&mut self) -> PResult<()> {
        let s = self.statement()?;
        self.file.statements.push(s);
        Ok(())
    }

    fn fresh_name(&mut self, pos: Pos, taken: impl Fn(&ProblemFile, &str) -> bool) -> PResult<Sym> {
        let n = self.name()?;
        if taken(&self.file, &n) {
            return Err(ParseError::at(pos, format!("`{n}` is declared twice")));
        }
        Ok(Sym::from(n))
    }

    fn sort_ref(&mut self) -> PResult<Sort> {
        let pos = self.pos();
        let n = self.ident()?;
        let s = Sort::new(&n);
        if !self.file.sig.has_sort(&s) {
            return Err(ParseError::at(pos, format!("undeclared sort `{n}`")));
        }
        Ok(s)
    }

    fn sort_decl(&mut self) -> PResult<()> {
        self.bump();
        let pos = self.pos();
        let n = self.ident()?;
        let parent = if self.eat(&Tok::Lt) { Some(self.sort_ref()?) } else { None };
        self.file.sig.add_sort(Sort::new(&n), parent).map_err(|e| ParseError::at(pos, e.to_string()))?;
        self.expect(&Tok::Dot)
    }

    fn pred_decl(&mut self) -> PResult<()> {
        self.bump();
        let pos = self.pos();
        let n = self.ident()?;
        let mut sorts = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                sorts.push(self.sort_ref()?);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        if self.consts.contains_key(&Sym::from(n.as_str())) {
            return Err(ParseError::at(pos, format!("`{n}` is already a constant")));
        }
        self.file.sig.add_pred(Sym::from(n), sorts).map_err(|e| ParseError::at(pos, e.to_string()))?;
        self.expect(&Tok::Dot)
    }

    fn domain_decl(&mut self) -> PResult<()> {
        self.bump();
        let pos = self.pos();
        let s = self.sort_ref()?;
        if s.is_int() {
            return Err(ParseError::at(pos, "use `int range lo..hi.` for the integer sort"));
        }
        if self.file.domains.sorts.iter().any(|(t, _)| *t == s) {
            return Err(ParseError::at(pos, format!("second domain declaration for `{s}`")));
        }
        self.expect(&Tok::Eq)?;
        self.expect(&Tok::LBrace)?;
        let mut cs = Vec::new();
        if *self.peek() != Tok::RBrace {
            loop {
                let cpos = self.pos();
                let c = Sym::from(self.ident()?);
                if self.consts.contains_key(&c) || cs.contains(&c) {
                    return Err(ParseError::at(cpos, format!("constant `{c}` declared twice")));
                }
                if self.file.sig.pred_sorts(&c).is_some() {
                    return Err(ParseError::at(cpos, format!("`{c}` is already a predicate")));
                }
                cs.push(c);
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
        }
        self.expect(&Tok::RBrace)?;
        self.expect(&Tok::Dot)?;
        for c in &cs {
            self.consts.insert(c.clone(), s.clone());
        }
        self.file.domains.sorts.push((s, cs));
        Ok(())
    }

    fn signed_int(&mut self) -> PResult<i64> {
        let neg = self.eat(&Tok::Minus);
        match self.bump() {
            Tok::Int(v) => Ok(if neg { -v } else { v }),
            _ => {
                self.i -= 1;
                Err(self.unexpected("an integer"))
            }
        }
    }

    fn range_decl(&mut self) -> PResult<()> {
        let pos = self.pos();
        self.bump();
        self.bump();
        if self.file.domains.int_range.is_some() {
            return Err(ParseError::at(pos, "second `int range` declaration"));
        }
        let lo = self.signed_int()?;
        self.expect(&Tok::DotDot)?;
        let hi = self.signed_int()?;
        if lo > hi {
            return Err(ParseError::at(pos, format!("empty integer range {lo}..{hi}")));
        }
        self.expect(&Tok::Dot)?;
        self.file.sig.add_int();
        self.file.domains.int_range = Some((lo, hi));
        Ok(())
    }

    /// `p(X1,...,Xn) : F` with distinct variables as arguments.
    fn lambda_entry(&mut self) -> PResult<(Sym, Vec<Var>, Formula)> {
        let pos = self.pos();
        let pred = Sym::from(self.ident()?);
        let sorts = self
            .file
            .sig
            .pred_sorts(&pred)
            .ok_or_else(|| ParseError::at(pos, format!("undeclared predicate `{pred}`")))?
            .to_vec();
        let mut names = Vec::new();
        if self.eat(&Tok::LParen) {
            loop {
                let vpos = self.pos();
                match self.bump() {
                    Tok::Var(v) => {
                        if names.contains(&v) {
                            return Err(ParseError::at(vpos, format!("parameter `{v}` is repeated")));
                        }
                        names.push(v)
                    }
                    _ => {
                        self.i -= 1;
                        return Err(self.unexpected("a variable"));
                    }
                }
                if !self.eat(&Tok::Comma) {
                    break;
                }
            }
            self.expect(&Tok::RParen)?;
        }
        if names.len() != sorts.len() {
            return Err(ParseError::at(pos, format!("`{pred}` expects {} arguments", sorts.len())));
        }
        let params: Vec<Var> = names.iter().zip(&sorts).map(|(n, s)| Var::new(n, s.clone())).collect();
        self.expect(&Tok::Colon)?;
        let f = self.formula()?;
        let f = self.resolver().formula(&f, &params)?;
        Ok((pred, params, f))
    }

    fn part_decl(&mut self) -> PResult<()> {
        let pos = self.pos();
        self.bump();
        let name = self.fresh_name(pos, |f, n| f.part(n).is_some())?;
        self.expect(&Tok::LBrace)?;
        let mut l = IntensionalityStatement::bottom();
        if *self.peek() != Tok::RBrace {
            loop {
                let epos = self.pos();
                let (pred, params, f) = self.lambda_entry()?;
                if l.entry(&pred).is_some() {
                    return Err(ParseError::at(epos, format!("second entry for `{pred}` in part `{name}`")));
                }
                l.set(&self.file.sig, pred, params, f).map_err(|e| ParseError::at(epos, e.to_string()))?;
                if !self.eat(&Tok::Semi) {
                    break;
                }
            }
        }
        self.expect(&Tok::RBrace)?;
        self.eat(&Tok::Dot);
        self.file.parts.push((name, l));
        Ok(())
    }

    fn partition_decl(&mut self) -> PResult<()> {
        let pos = self.pos();
        self.bump();
        let name = self.fresh_name(pos, |f, n| f.partition(n).is_some())?;
        self.expect(&Tok::Eq)?;
        let mut members = Vec::new();
        loop {
            let part = Sym::from(self.name()?);
            let theory = if self.eat(&Tok::Colon) { Some(Sym::from(self.name()?)) } else { None };
            members.push((part, theory));
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        self.expect(&Tok::Dot)?;
        self.file.partitions.push(PartitionDecl { name, members });
        Ok(())
    }

    /// Partition members must name parts and theories declared anywhere in
    /// the file.
    fn check_partitions(&self) -> PResult<()> {
        for d in &self.file.partitions {
            for (part, th) in &d.members {
                let missing = if self.file.part(part.as_str()).is_none() {
                    Some(format!("part `{part}`"))
                } else {
                    th.as_ref().filter(|t| self.file.theory(t.as_str()).is_none()).map(|t| format!("theory `{t}`"))
                };
                if let Some(m) = missing {
                    return Err(ParseError {
                        line: 0,
                        col: 0,
                        message: format!("partition `{}` refers to undeclared {m}", d.name),
                    });
                }
            }
        }
        Ok(())
    }

    fn block_statements(&mut self) -> PResult<Vec<Statement>> {
        self.expect(&Tok::LBrace)?;
        let mut out = Vec::new();
        while *self.peek() != Tok::RBrace {
            if *self.peek() == Tok::Eof {
                return Err(self.unexpected("`}`"));
            }
            out.push(self.statement()?);
        }
        self.bump();
        self.eat(&Tok::Dot);
        Ok(out)
    }

    /// A rule `H :- B.`, a constraint `:- B.`, a fact `H.`, or a sentence.
    fn statement(&mut self) -> PResult<Statement> {
        let pos = self.pos();
        if self.eat(&Tok::If) {
            let body = self.body()?;
            self.expect(&Tok::Dot)?;
            return self.resolver().rule(&[], &body, pos).map(Statement::Rule);
        }
        let f = self.formula()?;
        if self.eat(&Tok::If) {
            let head = head_atoms(&f).ok_or_else(|| ParseError::at(pos, "a rule head must be a disjunction of atoms"))?;
            let body = self.body()?;
            self.expect(&Tok::Dot)?;
            return self.resolver().rule(&head, &body, pos).map(Statement::Rule);
        }
        self.expect(&Tok::Dot)?;
        if let Some(head) = head_atoms(&f) {
            return self.resolver().rule(&head, &[], pos).map(Statement::Rule);
        }
        let g = self.resolver().formula(&f, &[])?;
        Ok(Statement::Sentence(g.universal_closure()))
    }

    fn body(&mut self) -> PResult<Vec<RForm>> {
        let mut lits = Vec::new();
        loop {
            lits.push(self.unary()?);
            if !self.eat(&Tok::Comma) {
                break;
            }
        }
        Ok(lits)
    }

    fn formula(&mut self) -> PResult<RForm> {
        let lhs = self.disjunction()?;
        match self.peek() {
            Tok::Arrow => {
                self.bump();
                let rhs = self.formula()?;
                Ok(RForm::Imp(Box::new(lhs), Box::new(rhs)))
            }
            Tok::BackArrow => {
                self.bump();
                let rhs = self.formula()?;
                Ok(RForm::Imp(Box::new(rhs), Box::new(lhs)))
            }
            Tok::Iff => {
                self.bump();
                let rhs = self.formula()?;
                Ok(RForm::Iff(Box::new(lhs), Box::new(rhs)))
            }
            _ => Ok(lhs),
        }
    }

    fn disjunction(&mut self) -> PResult<RForm> {
        let mut items = vec![self.conjunction()?];
        while self.eat(&Tok::Bar) {
            items.push(self.conjunction()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { RForm::Or(items) })
    }

    fn conjunction(&mut self) -> PResult<RForm> {
        let mut items = vec![self.unary()?];
        while self.eat(&Tok::Amp) {
            items.push(self.unary()?);
        }
        Ok(if items.len() == 1 { items.pop().unwrap() } else { RForm::And(items) })
    }

    fn unary(&mut self) -> PResult<RForm> {
        let pos = self.pos();
        match self.peek().clone() {
            Tok::Ident(k) if k == "not" => {
                self.bump();
                Ok(RForm::Not(Box::new(self.unary()?)))
            }
            Tok::Ident(k) if (k == "forall" || k == "exists") && matches!(self.peek_at(1), Tok::Var(_)) => {
                self.bump();
                let mut vars = Vec::new();
                while let Tok::Var(v) = self.peek().clone() {
                    let vpos = self.pos();
                    self.bump();
                    let ann = if self.eat(&Tok::Colon) { Some(self.sort_ref()?) } else { None };
                    vars.push((v, ann, vpos));
                }
                self.expect(&Tok::LParen)?;
                let body = self.formula()?;
                self.expect(&Tok::RParen)?;
                Ok(RForm::Quant { forall: k == "forall", vars, body: Box::new(body) })
            }
            Tok::Hash(h) if h == "true" => {
                self.bump();
                Ok(RForm::Top)
            }
            Tok::Hash(h) if h == "false" => {
                self.bump();
                Ok(RForm::Bot)
            }
            Tok::LParen => {
                // Either a parenthesised formula or a comparison whose left
                // operand is a parenthesised term.
                let save = self.i;
                self.bump();
                if let Ok(f) = self.formula() {
                    if self.eat(&Tok::RParen) && !is_term_continuation(self.peek()) {
                        return Ok(RForm::Group(Box::new(f)));
                    }
                }
                self.i = save;
                self.comparison(pos)
            }
            Tok::Ident(name) if matches!(self.peek_at(1), Tok::LParen) => {
                self.bump();
                self.bump();
                let mut args = Vec::new();
                loop {
                    args.push(self.term()?);
                    if !self.eat(&Tok::Comma) {
                        break;
                    }
                }
                self.expect(&Tok::RParen)?;
                Ok(RForm::Atom { name, args, pos })
            }
            Tok::Ident(name) if self.file.sig.pred_sorts(&Sym::from(name.as_str())).is_some() => {
                self.bump();
                Ok(RForm::Atom { name, args: vec![], pos })
            }
            _ => self.comparison(pos),
        }
    }

    fn comparison(&mut self, pos: Pos) -> PResult<RForm> {
        let a = self.term()?;
        let op = match self.peek() {
            Tok::Eq => None,
            Tok::Ne => Some(CmpOp::Ne),
            Tok::Lt => Some(CmpOp::Lt),
            Tok::Le => Some(CmpOp::Le),
            Tok::Gt => Some(CmpOp::Gt),
            Tok::Ge => Some(CmpOp::Ge),
            _ => {
                if let RTerm::Const { name, .. } = &a {
                    return Err(ParseError::at(pos, format!("`{name}` is neither a declared predicate nor part of a comparison")));
                }
                return Err(self.unexpected("a comparison operator"));
            }
        };
        self.bump();
        let b = self.term()?;
        Ok(match op {
            None => RForm::Eq(a, b, pos),
            Some(op) => RForm::Cmp(op, a, b, pos),
        })
    }

    fn term(&mut self) -> PResult<RTerm> {
        let mut lhs = self.product()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => ArithOp::Add,
                Tok::Minus => ArithOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.product()?;
            lhs = RTerm::App(op, Box::new(lhs), Box::new(rhs));
        }
    }

    fn product(&mut self) -> PResult<RTerm> {
        let mut lhs = self.primary()?;
        while self.eat(&Tok::Star) {
            let rhs = self.primary()?;
            lhs = RTerm::App(ArithOp::Mul, Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn primary(&mut self) -> PResult<RTerm> {
        let pos = self.pos();
        match self.bump() {
            Tok::Var(name) => Ok(RTerm::Var { name, pos }),
            Tok::Ident(name) => Ok(RTerm::Const { name, pos }),
            Tok::Int(v) => Ok(RTerm::Int(v, pos)),
            Tok::Minus => match self.bump() {
                Tok::Int(v) => Ok(RTerm::Int(-v, pos)),
                _ => Err(ParseError::at(pos, "`-` must be followed by an integer literal here")),
            },
            Tok::LParen => {
                let t = self.term()?;
                self.expect(&Tok::RParen)?;
                Ok(t)
            }
            _ => {
                self.i -= 1;
                Err(self.unexpected("a term"))
            }
        }
    }
}

fn is_term_continuation(t: &Tok) -> bool {
    matches!(t, Tok::Plus | Tok::Minus | Tok::Star | Tok::Eq | Tok::Ne | Tok::Lt | Tok::Le | Tok::Gt | Tok::Ge)
}

/// The atoms of `f` if it is an atom or a flat disjunction of atoms that was
/// not written inside parentheses.
fn head_atoms(f: &RForm) -> Option<Vec<RForm>> {
    match f {
        RForm::Atom { .. } => Some(vec![f.clone()]),
        RForm::Or(v) if v.iter().all(|g| matches!(g, RForm::Atom { .. })) => Some(v.clone()),
        _ => None,
    }
}
