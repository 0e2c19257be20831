//! Ortholattice terms and identities.
//!
//! Terms are built from variables, the constants `0` and `1`, meet (`*`),
//! join (`+`) and postfix orthocomplement (`'`). The AST is never normalized:
//! `a + b + c` and `a + (b + c)` are different terms, which keeps generated
//! families in exactly the shape they were written in.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

/// An ortholattice term.
///
/// Children are reference counted so that generated families, which reuse
/// large subterms many times, stay cheap to clone.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Term {
    Var(String),
    Zero,
    One,
    Meet(Arc<Term>, Arc<Term>),
    Join(Arc<Term>, Arc<Term>),
    Comp(Arc<Term>),
}

/// An equation `lhs = rhs` between two terms.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Identity {
    pub lhs: Term,
    pub rhs: Term,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseError {
    #[error("unexpected character {found:?} at position {pos}")]
    UnexpectedChar { pos: usize, found: char },
    #[error("unexpected end of input at position {pos}, expected {expected}")]
    UnexpectedEnd { pos: usize, expected: &'static str },
    #[error("expected {expected} at position {pos}")]
    Expected { pos: usize, expected: &'static str },
    #[error("identity is missing '='")]
    MissingEquals,
    #[error("trailing input at position {pos}")]
    Trailing { pos: usize },
}

impl ParseError {
    pub fn position(&self) -> Option<usize> {
        match self {
            ParseError::UnexpectedChar { pos, .. }
            | ParseError::UnexpectedEnd { pos, .. }
            | ParseError::Expected { pos, .. }
            | ParseError::Trailing { pos } => Some(*pos),
            ParseError::MissingEquals => None,
        }
    }
}

#[derive(Debug, Error)]
#[error("cannot convert an empty list of identities")]
pub struct EmptyConjunction;

impl Term {
    pub fn var(name: impl Into<String>) -> Term {
        Term::Var(name.into())
    }

    pub fn meet(a: Term, b: Term) -> Term {
        Term::Meet(Arc::new(a), Arc::new(b))
    }

    pub fn join(a: Term, b: Term) -> Term {
        Term::Join(Arc::new(a), Arc::new(b))
    }

    pub fn comp(a: Term) -> Term {
        Term::Comp(Arc::new(a))
    }

    /// Left-nested meet of a nonempty sequence; `None` when empty.
    pub fn meet_all<I: IntoIterator<Item = Term>>(terms: I) -> Option<Term> {
        terms.into_iter().reduce(Term::meet)
    }

    /// Left-nested join of a nonempty sequence; `None` when empty.
    pub fn join_all<I: IntoIterator<Item = Term>>(terms: I) -> Option<Term> {
        terms.into_iter().reduce(Term::join)
    }

    /// Number of AST nodes.
    pub fn len(&self) -> usize {
        match self {
            Term::Var(_) | Term::Zero | Term::One => 1,
            Term::Comp(a) => 1 + a.len(),
            Term::Meet(a, b) | Term::Join(a, b) => 1 + a.len() + b.len(),
        }
    }

    /// Always false; every term has at least one node.
    pub fn is_empty(&self) -> bool {
        false
    }

    /// Distinct variables in order of first occurrence (left to right).
    pub fn vars(&self) -> Vec<String> {
        let mut out: Vec<String> = Vec::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut Vec<String>) {
        match self {
            Term::Var(v) => {
                if !out.iter().any(|w| w == v) {
                    out.push(v.clone());
                }
            }
            Term::Zero | Term::One => {}
            Term::Comp(a) => a.collect_vars(out),
            Term::Meet(a, b) | Term::Join(a, b) => {
                a.collect_vars(out);
                b.collect_vars(out);
            }
        }
    }

    /// Immediate children.
    pub fn children(&self) -> Vec<&Term> {
        match self {
            Term::Var(_) | Term::Zero | Term::One => vec![],
            Term::Comp(a) => vec![a],
            Term::Meet(a, b) | Term::Join(a, b) => vec![a, b],
        }
    }
}

impl Identity {
    pub fn new(lhs: Term, rhs: Term) -> Self {
        Identity { lhs, rhs }
    }

    /// Variables of both sides, lhs first.
    pub fn vars(&self) -> Vec<String> {
        let mut out = self.lhs.vars();
        for v in self.rhs.vars() {
            if !out.contains(&v) {
                out.push(v);
            }
        }
        out
    }

    pub fn len(&self) -> usize {
        self.lhs.len() + self.rhs.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

pub fn term_length(t: &Term) -> usize {
    t.len()
}

pub fn vars_of(t: &Term) -> Vec<String> {
    t.vars()
}

/// Turns a conjunction of identities into a single term `T` such that, in
/// any modular ortholattice, `T` evaluates to `1` exactly when every identity
/// holds. Each `s = t` contributes `(s + t)' + s*t`; the pieces are met
/// together left to right.
pub fn to_tautology(ids: &[Identity]) -> Result<Term, EmptyConjunction> {
    Term::meet_all(ids.iter().map(|id| {
        Term::join(
            Term::comp(Term::join(id.lhs.clone(), id.rhs.clone())),
            Term::meet(id.lhs.clone(), id.rhs.clone()),
        )
    }))
    .ok_or(EmptyConjunction)
}

// ---------------------------------------------------------------------------
// Printing

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Prec {
    Join,
    Meet,
    Unary,
}

fn prec(t: &Term) -> Prec {
    match t {
        Term::Join(..) => Prec::Join,
        Term::Meet(..) => Prec::Meet,
        _ => Prec::Unary,
    }
}

fn write_term(t: &Term, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    match t {
        Term::Var(v) => f.write_str(v),
        Term::Zero => f.write_str("0"),
        Term::One => f.write_str("1"),
        Term::Comp(a) => {
            write_at(a, Prec::Unary, f)?;
            f.write_str("'")
        }
        Term::Meet(a, b) => {
            write_at(a, Prec::Meet, f)?;
            f.write_str("*")?;
            // right operand of the same operator needs parentheses to keep
            // left association on reparse
            write_strict(b, Prec::Meet, f)
        }
        Term::Join(a, b) => {
            write_at(a, Prec::Join, f)?;
            f.write_str(" + ")?;
            write_strict(b, Prec::Join, f)
        }
    }
}

fn write_at(t: &Term, min: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(t) >= min {
        write_term(t, f)
    } else {
        f.write_str("(")?;
        write_term(t, f)?;
        f.write_str(")")
    }
}

fn write_strict(t: &Term, op: Prec, f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if prec(t) > op {
        write_term(t, f)
    } else {
        f.write_str("(")?;
        write_term(t, f)?;
        f.write_str(")")
    }
}

impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_term(self, f)
    }
}

impl fmt::Display for Identity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} = {}", self.lhs, self.rhs)
    }
}

pub fn print_term(t: &Term) -> String {
    t.to_string()
}

// ---------------------------------------------------------------------------
// Parsing

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Self {
        Parser {
            src: text.as_bytes(),
            pos: 0,
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn unexpected(&self, expected: &'static str) -> ParseError {
        match std::str::from_utf8(&self.src[self.pos..])
            .ok()
            .and_then(|s| s.chars().next())
        {
            Some(c) => ParseError::UnexpectedChar {
                pos: self.pos,
                found: c,
            },
            None => ParseError::UnexpectedEnd {
                pos: self.pos,
                expected,
            },
        }
    }

    fn join(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.meet()?;
        while self.eat(b'+') {
            let rhs = self.meet()?;
            acc = Term::join(acc, rhs);
        }
        Ok(acc)
    }

    fn meet(&mut self) -> Result<Term, ParseError> {
        let mut acc = self.unary()?;
        while self.eat(b'*') {
            let rhs = self.unary()?;
            acc = Term::meet(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Term, ParseError> {
        let mut t = self.atom()?;
        while self.eat(b'\'') {
            t = Term::comp(t);
        }
        Ok(t)
    }

    fn atom(&mut self) -> Result<Term, ParseError> {
        match self.peek() {
            Some(b'0') => {
                self.pos += 1;
                Ok(Term::Zero)
            }
            Some(b'1') => {
                self.pos += 1;
                Ok(Term::One)
            }
            Some(b'(') => {
                self.pos += 1;
                let t = self.join()?;
                if !self.eat(b')') {
                    return Err(match self.peek() {
                        None => ParseError::UnexpectedEnd {
                            pos: self.pos,
                            expected: "')'",
                        },
                        Some(_) => ParseError::Expected {
                            pos: self.pos,
                            expected: "')'",
                        },
                    });
                }
                Ok(t)
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_alphanumeric() || self.src[self.pos] == b'_')
                {
                    self.pos += 1;
                }
                // the slice is ASCII by construction
                let name = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                Ok(Term::Var(name.to_string()))
            }
            _ => Err(self.unexpected("a term")),
        }
    }
}

pub fn parse_term(text: &str) -> Result<Term, ParseError> {
    let mut p = Parser::new(text);
    let t = p.join()?;
    if p.peek().is_some() {
        return Err(ParseError::Trailing { pos: p.pos });
    }
    Ok(t)
}

pub fn parse_identity(text: &str) -> Result<Identity, ParseError> {
    let mut p = Parser::new(text);
    let lhs = p.join()?;
    match p.peek() {
        Some(b'=') => p.pos += 1,
        None => return Err(ParseError::MissingEquals),
        Some(_) => return Err(ParseError::Trailing { pos: p.pos }),
    }
    let rhs = p.join()?;
    if p.peek().is_some() {
        return Err(ParseError::Trailing { pos: p.pos });
    }
    Ok(Identity { lhs, rhs })
}

impl std::str::FromStr for Term {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_term(s)
    }
}

impl std::str::FromStr for Identity {
    type Err = ParseError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_identity(s)
    }
}
