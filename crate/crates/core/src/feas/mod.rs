//! Refutation in L(R^d) as real polynomial feasibility.
//!
//! [`encode`] turns "identity fails in L(R^d)" into integer polynomial
//! equations over projection matrices, [`penalty_solve`] looks for a common
//! zero numerically, and [`rationalize_and_verify`] turns a numeric zero
//! back into an exact counterexample in L(Q^d). Systems can be written out
//! as JSON or SMT-LIB2 ([`emit`]) for external solvers.

mod decode;
mod emit;
mod encode;
mod poly;
mod smt;
mod solve;

use thiserror::Error;

use crate::checker::{CheckError, EvalError};

pub use decode::{inject, rationalize_and_verify, realify_assignment, DENOMINATOR_CAP};
pub use emit::{emit, parse_json, EmitFormat};
pub use encode::{encode, encode_gaussian, Constraint, ConstraintKind, PolySystem};
pub use poly::{Monomial, Poly};
pub use smt::{check_smt_syntax, SmtError, SmtSummary};
pub use solve::{
    gradient, penalty_solve, refine, residual, Evaluator, Method, SolveOutcome, SolveParams,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FeasError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("point has {found} coordinates, the system has {expected} variables")]
    LengthMismatch { expected: usize, found: usize },
    #[error("point is not a solution: residual {residual:e} is not below {tol:e}")]
    NotASolution { residual: f64, tol: f64 },
    #[error("system does not match the identity in dimension {0}")]
    SystemMismatch(usize),
    #[error("assignment does not refute the identity")]
    NotARefutation,
    #[error("unknown variable {0:?}")]
    UnknownVariable(String),
    #[error("invalid system file: {0}")]
    Json(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Check(#[from] CheckError),
}
