//! A syntax checker for the QF_NRA subset of SMT-LIB2 that [`super::emit`]
//! produces: `set-logic`, `set-info`, `set-option`, `declare-const` and
//! `declare-fun` of sort `Real`, `assert` of equalities between polynomial
//! terms built from `+ - *`, numerals and declared constants, `check-sat`,
//! `get-model` and `exit`.

use std::collections::HashSet;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("SMT-LIB syntax error at byte {pos}: {message}")]
pub struct SmtError {
    pub pos: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SmtSummary {
    pub logic: Option<String>,
    pub declarations: usize,
    pub assertions: usize,
    pub check_sat: bool,
}

#[derive(Debug, Clone)]
enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

impl Sexp {
    fn pos(&self) -> usize {
        match self {
            Sexp::Atom(_, p) | Sexp::List(_, p) => *p,
        }
    }
}

fn err<T>(pos: usize, message: impl Into<String>) -> Result<T, SmtError> {
    Err(SmtError {
        pos,
        message: message.into(),
    })
}

fn parse_all(text: &str) -> Result<Vec<Sexp>, SmtError> {
    let bytes = text.as_bytes();
    let mut stack: Vec<(Vec<Sexp>, usize)> = vec![(vec![], 0)];
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        match c {
            b';' => {
                while i < bytes.len() && bytes[i] != b'\n' {
                    i += 1;
                }
            }
            b'(' => {
                stack.push((vec![], i));
                i += 1;
            }
            b')' => {
                if stack.len() == 1 {
                    return err(i, "unbalanced ')'");
                }
                let (items, start) = stack.pop().expect("checked");
                stack.last_mut().expect("outer").0.push(Sexp::List(items, start));
                i += 1;
            }
            c if c.is_ascii_whitespace() => i += 1,
            b'|' => {
                let start = i;
                i += 1;
                while i < bytes.len() && bytes[i] != b'|' {
                    i += 1;
                }
                if i == bytes.len() {
                    return err(start, "unterminated quoted symbol");
                }
                i += 1;
                stack.last_mut().expect("outer").0.push(Sexp::Atom(text[start..i].to_string(), start));
            }
            _ => {
                let start = i;
                while i < bytes.len() && !bytes[i].is_ascii_whitespace() && !b"();|".contains(&bytes[i]) {
                    i += 1;
                }
                stack.last_mut().expect("outer").0.push(Sexp::Atom(text[start..i].to_string(), start));
            }
        }
    }
    if stack.len() != 1 {
        return err(stack.last().expect("nonempty").1, "unclosed '('");
    }
    Ok(stack.pop().expect("outer").0)
}

fn is_numeral(s: &str) -> bool {
    let int_ok = |t: &str| !t.is_empty() && t.bytes().all(|b| b.is_ascii_digit()) && (t == "0" || !t.starts_with('0'));
    match s.split_once('.') {
        None => int_ok(s),
        Some((a, b)) => int_ok(a) && !b.is_empty() && b.bytes().all(|c| c.is_ascii_digit()),
    }
}

fn is_symbol(s: &str) -> bool {
    if s.starts_with('|') {
        return s.len() >= 2 && s.ends_with('|');
    }
    let ok = |b: u8| b.is_ascii_alphanumeric() || b"~!@$%^&*_-+=<>.?/".contains(&b);
    !s.is_empty() && !s.as_bytes()[0].is_ascii_digit() && s.bytes().all(ok)
}

#[derive(PartialEq)]
enum Sort {
    Real,
    Bool,
}

fn check_term(t: &Sexp, declared: &HashSet<String>) -> Result<Sort, SmtError> {
    match t {
        Sexp::Atom(a, p) => {
            if is_numeral(a) || declared.contains(a) {
                Ok(Sort::Real)
            } else if is_symbol(a) {
                err(*p, format!("undeclared symbol {a}"))
            } else {
                err(*p, format!("malformed token {a}"))
            }
        }
        Sexp::List(items, p) => {
            let Some(Sexp::Atom(op, _)) = items.first() else {
                return err(*p, "expected an operator");
            };
            let args = &items[1..];
            let (min, result) = match op.as_str() {
                "+" | "*" => (2, Sort::Real),
                "-" => (1, Sort::Real),
                "=" => (2, Sort::Bool),
                other => return err(*p, format!("unsupported operator {other}")),
            };
            if args.len() < min {
                return err(*p, format!("{op} needs at least {min} arguments"));
            }
            for a in args {
                if check_term(a, declared)? != Sort::Real {
                    return err(a.pos(), "expected a Real term");
                }
            }
            Ok(result)
        }
    }
}

/// Checks `text` and counts its commands.
pub fn check_smt_syntax(text: &str) -> Result<SmtSummary, SmtError> {
    let mut summary = SmtSummary::default();
    let mut declared = HashSet::new();
    for cmd in parse_all(text)? {
        let Sexp::List(items, p) = &cmd else {
            return err(cmd.pos(), "expected a command");
        };
        let name = match items.first() {
            Some(Sexp::Atom(a, _)) => a.as_str(),
            _ => return err(*p, "expected a command name"),
        };
        let atom = |k: usize| match items.get(k) {
            Some(Sexp::Atom(a, _)) => Some(a.as_str()),
            _ => None,
        };
        match name {
            "set-logic" => {
                if summary.logic.is_some() || summary.declarations > 0 || summary.assertions > 0 {
                    return err(*p, "set-logic must come first");
                }
                match (atom(1), items.len()) {
                    (Some(l), 2) if is_symbol(l) => summary.logic = Some(l.to_string()),
                    _ => return err(*p, "set-logic takes one symbol"),
                }
            }
            "set-info" | "set-option" => match atom(1) {
                Some(k) if k.starts_with(':') && items.len() <= 3 => {}
                _ => return err(*p, format!("{name} takes a keyword and an optional value")),
            },
            "declare-const" | "declare-fun" => {
                let sym = atom(1).filter(|s| is_symbol(s));
                let sort_ok = if name == "declare-const" {
                    items.len() == 3 && atom(2) == Some("Real")
                } else {
                    items.len() == 4
                        && matches!(&items[2], Sexp::List(a, _) if a.is_empty())
                        && atom(3) == Some("Real")
                };
                match sym {
                    Some(s) if sort_ok => {
                        if !declared.insert(s.to_string()) {
                            return err(*p, format!("{s} declared twice"));
                        }
                        summary.declarations += 1;
                    }
                    _ => return err(*p, format!("malformed {name}")),
                }
            }
            "assert" => {
                if items.len() != 2 {
                    return err(*p, "assert takes one term");
                }
                if check_term(&items[1], &declared)? != Sort::Bool {
                    return err(items[1].pos(), "assertion is not a formula");
                }
                summary.assertions += 1;
            }
            "check-sat" | "get-model" | "exit" => {
                if items.len() != 1 {
                    return err(*p, format!("{name} takes no arguments"));
                }
                if name == "check-sat" {
                    summary.check_sat = true;
                }
            }
            other => return err(*p, format!("unsupported command {other}")),
        }
    }
    Ok(summary)
}
