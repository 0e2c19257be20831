//! JSON and SMT-LIB2 output.
//!
//! JSON layout:
//!
//! ```json
//! {"d":2,"vars":["p_0_0_0",...],
//!  "constraints":[{"monomials":[{"coef":1,"exps":{"p_0_0_0":2}}],"node":0,"kind":"idempotent"}],
//!  "root":17,"leaves":{"x":0}}
//! ```

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::encode::{Constraint, ConstraintKind, PolySystem};
use super::poly::Poly;
use super::FeasError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EmitFormat {
    Json,
    Smt,
}

impl FromStr for EmitFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "json" => Ok(EmitFormat::Json),
            "smt" | "smt2" | "smtlib" => Ok(EmitFormat::Smt),
            other => Err(format!("unknown format {other:?} (expected json or smt)")),
        }
    }
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonMonomial {
    coef: i64,
    exps: BTreeMap<String, u32>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonConstraint {
    monomials: Vec<JsonMonomial>,
    node: usize,
    kind: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct JsonSystem {
    d: usize,
    vars: Vec<String>,
    constraints: Vec<JsonConstraint>,
    root: usize,
    leaves: BTreeMap<String, usize>,
}

pub fn emit(sys: &PolySystem, format: EmitFormat) -> String {
    match format {
        EmitFormat::Json => to_json(sys),
        EmitFormat::Smt => to_smt(sys),
    }
}

fn to_json(sys: &PolySystem) -> String {
    let js = JsonSystem {
        d: sys.d,
        vars: sys.vars.clone(),
        constraints: sys
            .constraints
            .iter()
            .map(|c| JsonConstraint {
                monomials: c
                    .poly
                    .terms()
                    .iter()
                    .map(|(coef, m)| JsonMonomial {
                        coef: *coef,
                        exps: m.iter().map(|&(v, e)| (sys.vars[v].clone(), e)).collect(),
                    })
                    .collect(),
                node: c.node,
                kind: c.kind.as_str().to_string(),
            })
            .collect(),
        root: sys.root,
        leaves: sys.leaves.iter().cloned().collect(),
    };
    serde_json::to_string(&js).expect("plain data serializes")
}

/// Reads the JSON form back.
pub fn parse_json(text: &str) -> Result<PolySystem, FeasError> {
    let js: JsonSystem = serde_json::from_str(text).map_err(|e| FeasError::Json(e.to_string()))?;
    let index: HashMap<&str, usize> = js.vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
    if index.len() != js.vars.len() {
        return Err(FeasError::Json("duplicate variable names".into()));
    }
    let constraints = js
        .constraints
        .iter()
        .map(|c| {
            let kind = ConstraintKind::parse(&c.kind)
                .ok_or_else(|| FeasError::Json(format!("unknown constraint kind {:?}", c.kind)))?;
            let terms = c
                .monomials
                .iter()
                .map(|m| {
                    let mono = m
                        .exps
                        .iter()
                        .map(|(v, &e)| {
                            index
                                .get(v.as_str())
                                .map(|&i| (i, e))
                                .ok_or_else(|| FeasError::UnknownVariable(v.clone()))
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    Ok((m.coef, mono))
                })
                .collect::<Result<Vec<_>, FeasError>>()?;
            Ok(Constraint {
                poly: Poly::from_terms(terms),
                node: c.node,
                kind,
            })
        })
        .collect::<Result<Vec<_>, FeasError>>()?;
    // leaves in node order, as the encoder produces them
    let mut leaves: Vec<(String, usize)> = js.leaves.into_iter().collect();
    leaves.sort_by_key(|&(_, n)| n);
    Ok(PolySystem {
        d: js.d,
        vars: js.vars,
        constraints,
        root: js.root,
        leaves,
    })
}

fn smt_term(vars: &[String], coef: i64, m: &[(usize, u32)]) -> String {
    let mut factors: Vec<String> = vec![];
    let c = coef.unsigned_abs();
    if c != 1 || m.is_empty() {
        factors.push(c.to_string());
    }
    for &(v, e) in m {
        factors.extend(std::iter::repeat_n(vars[v].clone(), e as usize));
    }
    if factors.len() == 1 {
        factors.pop().expect("one factor")
    } else {
        format!("(* {})", factors.join(" "))
    }
}

fn smt_sum(mut parts: Vec<String>) -> String {
    if parts.len() == 1 {
        parts.pop().expect("one part")
    } else {
        format!("(+ {})", parts.join(" "))
    }
}

/// A polynomial as an SMT-LIB2 real term.
pub(crate) fn smt_poly(vars: &[String], p: &Poly) -> String {
    let (pos, neg): (Vec<_>, Vec<_>) = p.terms().iter().partition(|(c, _)| *c > 0);
    let pos: Vec<String> = pos.iter().map(|(c, m)| smt_term(vars, *c, m)).collect();
    let neg: Vec<String> = neg.iter().map(|(c, m)| smt_term(vars, *c, m)).collect();
    match (pos.is_empty(), neg.is_empty()) {
        (true, true) => "0".to_string(),
        (false, true) => smt_sum(pos),
        (true, false) => format!("(- {})", smt_sum(neg)),
        (false, false) => format!("(- {} {})", smt_sum(pos), neg.join(" ")),
    }
}

fn to_smt(sys: &PolySystem) -> String {
    let mut out = String::from("(set-logic QF_NRA)\n");
    for v in &sys.vars {
        writeln!(out, "(declare-const {v} Real)").expect("writing to a string");
    }
    for c in &sys.constraints {
        writeln!(out, "(assert (= {} 0))", smt_poly(&sys.vars, &c.poly)).expect("writing to a string");
    }
    out.push_str("(check-sat)\n");
    out
}
