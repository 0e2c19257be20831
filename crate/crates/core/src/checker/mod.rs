//! Evaluating and checking identities.
//!
//! * [`holds`] and [`test_set_check`] enumerate assignments in a finite model.
//! * [`refute_random`] and [`refute_bounded`] search L(F^d) for an exact
//!   counterexample. A search that finds none reports
//!   [`Verdict::ValidUpToBudget`], never plain validity.
//! * [`satisfiable_bounded`] looks for a simultaneous solution of equations
//!   in a nontrivial model.

pub mod eval;
mod file;
mod finite;
mod refute;
mod sat;

use thiserror::Error;

use crate::field::FieldError;
use crate::subspace::SubspaceError;

pub use eval::{eval_identity, eval_term, Assignment, EvalError, Program};
pub use file::{subspace_rows, AssignmentFile};
pub use finite::{holds, test_set_check, FiniteWitness, HoldsReport, DEFAULT_HOLDS_CAP};
pub use refute::{
    refute_bounded, refute_random, replay, sample_assignment, RefutationReport, RefuteConfig,
    SearchStats, SubspaceWitness, Verdict,
};
pub use sat::{satisfiable_bounded, SatConfig, SatReport, SatWitness, SAT_CATALOG};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CheckError {
    #[error("{elements}^{vars} assignments exceed the budget of {cap}")]
    BudgetExceeded { elements: usize, vars: usize, cap: u64 },
    #[error("element {0} is not in the model")]
    NotInModel(usize),
    #[error("dimension must be at least 1 (got {0})")]
    InvalidDimension(usize),
    #[error(transparent)]
    Subspace(#[from] SubspaceError),
    #[error(transparent)]
    Eval(#[from] EvalError),
    #[error(transparent)]
    Field(#[from] FieldError),
    #[error("invalid assignment file: {0}")]
    AssignmentFile(String),
}
