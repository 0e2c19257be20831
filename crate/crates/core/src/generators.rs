//! Generators for the standard identity families: diamond terms, the
//! d-distributive laws, the diamond identities, the test-set identities
//! `sigma(d, m)` and canonical frames in L(F^d).
//!
//! Everything is emitted as plain [`Term`]s so that every engine consumes the
//! families unchanged.

use itertools::Itertools;
use thiserror::Error;

use crate::field::Field;
use crate::lattice::Ortholattice;
use crate::subspace::{Subspace, SubspaceLattice};
use crate::term::{Identity, Term};

/// Largest d for which [`diamond_terms`] will build terms. d ≤ 3 is covered
/// by the property suite; larger values use the same construction.
pub const MAX_DIAMOND_D: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenError {
    #[error("d must be at least {min} (got {d})")]
    TooSmall { d: usize, min: usize },
    #[error("diamond terms are only generated for d <= {MAX_DIAMOND_D} (got {0})")]
    Unsupported(usize),
    #[error("m must be at least 2 (got {0})")]
    TooFewTestVariables(usize),
    #[error("test variable index {0} must be at least 1")]
    BadIndex(usize),
}

pub fn z(i: usize) -> Term {
    Term::var(format!("z{i}"))
}

pub fn x(j: usize) -> Term {
    Term::var(format!("x{j}"))
}

/// Terms `t_0 … t_d` in `z0 … zd` whose values always form a d-diamond and
/// reproduce any d-diamond they are applied to.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiamondTerms {
    pub d: usize,
    pub terms: Vec<Term>,
    /// The common lower bound the components are lifted over.
    pub bottom: Term,
    /// The common upper bound the components are cut down to.
    pub top: Term,
}

/// Builds the diamond terms for `d`.
///
/// With `top` the meet over all d-element subsets of the join of the subset,
/// and `bottom` the join over all d-element subsets S and i in S of
/// `z_i * (join of S without i)`, the terms are `t_i = (z_i + bottom)*top`.
/// Every such defect lies below `top`, so by modularity the components sit in
/// `[bottom, top]`; for d = 2 this is the classical median construction
/// `b = z0*z1 + z1*z2 + z0*z2`, `t = (z0+z1)*(z1+z2)*(z0+z2)`.
/// On a genuine diamond every defect is its bottom and every subset join its
/// top, so each `t_i` returns `z_i`.
pub fn diamond_terms(d: usize) -> Result<DiamondTerms, GenError> {
    if d < 2 {
        return Err(GenError::TooSmall { d, min: 2 });
    }
    if d > MAX_DIAMOND_D {
        return Err(GenError::Unsupported(d));
    }
    let (bottom, top) = if d == 2 {
        (
            Term::join(
                Term::join(Term::meet(z(0), z(1)), Term::meet(z(1), z(2))),
                Term::meet(z(0), z(2)),
            ),
            Term::meet(
                Term::meet(Term::join(z(0), z(1)), Term::join(z(1), z(2))),
                Term::join(z(0), z(2)),
            ),
        )
    } else {
        let subsets: Vec<Vec<usize>> = (0..=d).combinations(d).collect();
        let top = Term::meet_all(
            subsets
                .iter()
                .map(|s| Term::join_all(s.iter().map(|&i| z(i))).expect("nonempty")),
        )
        .expect("nonempty");
        let defects = subsets.iter().flat_map(|s| {
            s.iter().map(move |&i| {
                let rest = Term::join_all(s.iter().filter(|&&j| j != i).map(|&j| z(j)))
                    .expect("d >= 2 leaves a nonempty rest");
                Term::meet(z(i), rest)
            })
        });
        (Term::join_all(defects).expect("nonempty"), top)
    };
    let terms = (0..=d)
        .map(|i| Term::meet(Term::join(z(i), bottom.clone()), top.clone()))
        .collect();
    Ok(DiamondTerms {
        d,
        terms,
        bottom,
        top,
    })
}

/// Whether `values` form a d-diamond (d = len − 1) in the interval between
/// their meet and their join: every d of them are independent over the meet
/// and join to the common top. A trivial diamond (all equal) qualifies.
pub fn is_diamond<L: Ortholattice>(lat: &L, values: &[L::Elem]) -> bool {
    let d = values.len() - 1;
    let bot = lat.meet_all(values);
    let top = lat.join_all(values);
    (0..=d).combinations(d).all(|s| {
        let members: Vec<&L::Elem> = s.iter().map(|&i| &values[i]).collect();
        lat.join_all(members.iter().copied()) == top
            && (0..members.len()).all(|k| {
                let rest = lat.join_all(
                    members
                        .iter()
                        .enumerate()
                        .filter(|&(j, _)| j != k)
                        .map(|(_, e)| *e),
                );
                lat.meet(members[k], &rest) == bot
            })
    })
}

/// `x*(y0 + … + yd) = Σ_j x*(Σ_{i≠j} y_i)`, summands ordered so that d = 1
/// gives `x*y0 + x*y1`.
pub fn delta_distributive(d: usize) -> Result<Identity, GenError> {
    if d == 0 {
        return Err(GenError::TooSmall { d, min: 1 });
    }
    let xv = Term::var("x");
    let y = |i: usize| Term::var(format!("y{i}"));
    let lhs = Term::meet(xv.clone(), Term::join_all((0..=d).map(y)).expect("nonempty"));
    let rhs = Term::join_all((0..=d).rev().map(|j| {
        Term::meet(
            xv.clone(),
            Term::join_all((0..=d).filter(|&i| i != j).map(y)).expect("d >= 1"),
        )
    }))
    .expect("nonempty");
    Ok(Identity::new(lhs, rhs))
}

/// `Π_i t_i = Σ_i t_i` for the (d+1)-diamond terms in `z0 … z(d+1)`.
pub fn delta_diamond(d: usize) -> Result<Identity, GenError> {
    if d == 0 {
        return Err(GenError::TooSmall { d, min: 1 });
    }
    let dt = diamond_terms(d + 1)?;
    Ok(Identity::new(
        Term::meet_all(dt.terms.iter().cloned()).expect("nonempty"),
        Term::join_all(dt.terms.iter().cloned()).expect("nonempty"),
    ))
}

fn s_from(t0: &Term, t1: &Term, xj: Term) -> Term {
    // (t0*xj)' * (t0 + t1) * xj + t0*t1
    Term::join(
        Term::meet(
            Term::meet(
                Term::comp(Term::meet(t0.clone(), xj.clone())),
                Term::join(t0.clone(), t1.clone()),
            ),
            xj,
        ),
        Term::meet(t0.clone(), t1.clone()),
    )
}

/// `s_j = (t0*x_j)' * (t0 + t1) * x_j + t0*t1` with the d-diamond terms.
pub fn s_term(d: usize, j: usize) -> Result<Term, GenError> {
    if j == 0 {
        return Err(GenError::BadIndex(j));
    }
    let dt = diamond_terms(d)?;
    Ok(s_from(&dt.terms[0], &dt.terms[1], x(j)))
}

/// `t0*t1 = t0 * Π_{j<k} (s_j + s_k)` over `x1 … xm`.
pub fn sigma(d: usize, m: usize) -> Result<Identity, GenError> {
    if m < 2 {
        return Err(GenError::TooFewTestVariables(m));
    }
    let dt = diamond_terms(d)?;
    let (t0, t1) = (&dt.terms[0], &dt.terms[1]);
    let s: Vec<Term> = (1..=m).map(|j| s_from(t0, t1, x(j))).collect();
    let pairs = (0..m)
        .tuple_combinations()
        .map(|(j, k)| Term::join(s[j].clone(), s[k].clone()));
    let product = Term::meet_all(pairs).expect("m >= 2 gives a pair");
    Ok(Identity::new(
        Term::meet(t0.clone(), t1.clone()),
        Term::meet(t0.clone(), product),
    ))
}

/// A d-frame in L(F^d): independent points `a_1 … a_d` and axes of
/// perspectivity `c_{1j}` from `a_1` to `a_j` (`axes[j-2]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Frame<F: Field> {
    pub d: usize,
    pub a: Vec<Subspace<F>>,
    pub axes: Vec<Subspace<F>>,
}

/// `a_i = span(e_i)`, `c_{1j} = span(e_1 − e_j)`.
pub fn frame_canonical<F: Field>(d: usize) -> Result<Frame<F>, GenError> {
    if d < 2 {
        return Err(GenError::TooSmall { d, min: 2 });
    }
    let a = (0..d).map(|i| Subspace::axis(d, i)).collect();
    let axes = (1..d)
        .map(|j| {
            let mut v = vec![F::zero(); d];
            v[0] = F::one();
            v[j] = -F::one();
            Subspace::from_rows(vec![v], d).expect("row has length d")
        })
        .collect();
    Ok(Frame { d, a, axes })
}

impl<F: Field> Frame<F> {
    /// Independence of the `a_i` with join the top, and for every axis
    /// `c*a_1 = 0 = c*a_j` and `c + a_j = a_1 + a_j`.
    pub fn check(&self, lat: &SubspaceLattice<F>) -> bool {
        let independent = (0..self.d).all(|i| {
            let rest = lat.join_all(self.a.iter().enumerate().filter(|&(k, _)| k != i).map(|(_, e)| e));
            lat.meet(&self.a[i], &rest).is_zero()
        });
        independent
            && lat.join_all(&self.a).is_full()
            && self.axes.iter().enumerate().all(|(k, c)| {
                let (a1, aj) = (&self.a[0], &self.a[k + 1]);
                lat.meet(c, a1).is_zero()
                    && lat.meet(c, aj).is_zero()
                    && lat.join(c, aj) == lat.join(a1, aj)
            })
    }
}
