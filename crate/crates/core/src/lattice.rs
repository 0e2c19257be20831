//! The interface every evaluation engine works against.

use std::fmt::Debug;

/// A bounded lattice with an orthocomplementation.
///
/// Implementations are expected to be ortholattices; the modular law is
/// checked separately ([`crate::model::FiniteModel::validate`] for tables,
/// property tests for subspace lattices).
pub trait Ortholattice {
    type Elem: Clone + PartialEq + Debug + Send + Sync;

    fn bottom(&self) -> Self::Elem;
    fn top(&self) -> Self::Elem;
    fn meet(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn join(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn ortho(&self, a: &Self::Elem) -> Self::Elem;

    fn leq(&self, a: &Self::Elem, b: &Self::Elem) -> bool {
        self.meet(a, b) == *a
    }

    fn meet_all<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.top(), |acc, x| self.meet(&acc, x))
    }

    fn join_all<'a, I>(&self, items: I) -> Self::Elem
    where
        I: IntoIterator<Item = &'a Self::Elem>,
        Self::Elem: 'a,
    {
        items
            .into_iter()
            .fold(self.bottom(), |acc, x| self.join(&acc, x))
    }
}
