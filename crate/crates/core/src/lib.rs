//! Workbench for ortholattice identities over modular ortholattices.
//!
//! Models come in two flavours: exact subspace lattices L(F^d)
//! ([`subspace`]) and explicit finite tables ([`model`]). Both implement
//! [`Ortholattice`], so the same term evaluator, identity checks and
//! refutation searches ([`checker`]) run on either. [`generators`] builds the
//! standard identity families, and [`feas`] reduces refutation in L(R^d) to
//! real polynomial feasibility.

pub mod checker;
pub mod feas;
pub mod field;
pub mod generators;
pub mod lattice;
pub mod model;
pub mod subspace;
pub mod term;

pub use field::{Field, FieldElem, FieldError, FieldTag, GaussRational, Gf, Rational};
pub use lattice::Ortholattice;
pub use subspace::{Form, Subspace, SubspaceError, SubspaceLattice};
pub use term::{parse_identity, parse_term, Identity, Term};

/// Subspaces of Q^d.
pub type QSubspace = Subspace<Rational>;
/// Subspaces of Q(i)^d.
pub type QiSubspace = Subspace<GaussRational>;
/// L(Q^d) with the canonical scalar product.
pub type QLattice = SubspaceLattice<Rational>;
/// L(Q(i)^d) with the canonical hermitean product.
pub type QiLattice = SubspaceLattice<GaussRational>;
