//! Sparse integer polynomials.

use std::cmp::Reverse;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::Float;

/// Variable indices with positive exponents, sorted by index.
pub type Monomial = Vec<(usize, u32)>;

/// A polynomial with integer coefficients in canonical form: distinct
/// monomials, no zero coefficients, higher degree first and then by
/// monomial.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    terms: Vec<(i64, Monomial)>,
}

fn degree(m: &Monomial) -> u32 {
    m.iter().map(|&(_, e)| e).sum()
}

fn mul_monomials(a: &[(usize, u32)], b: &[(usize, u32)]) -> Monomial {
    let mut out: BTreeMap<usize, u32> = BTreeMap::new();
    for &(v, e) in a.iter().chain(b) {
        *out.entry(v).or_insert(0) += e;
    }
    out.into_iter().collect()
}

impl Poly {
    pub fn zero() -> Poly {
        Poly::default()
    }

    pub fn constant(c: i64) -> Poly {
        Poly::from_terms([(c, vec![])])
    }

    pub fn var(i: usize) -> Poly {
        Poly::from_terms([(1, vec![(i, 1)])])
    }

    /// Collects like terms and sorts; monomials need not be normalized.
    pub fn from_terms<I: IntoIterator<Item = (i64, Monomial)>>(terms: I) -> Poly {
        let mut acc: BTreeMap<Monomial, i64> = BTreeMap::new();
        for (c, m) in terms {
            let m: Monomial = mul_monomials(&m, &[]).into_iter().filter(|&(_, e)| e > 0).collect();
            *acc.entry(m).or_insert(0) += c;
        }
        let mut terms: Vec<(i64, Monomial)> = acc
            .into_iter()
            .filter(|&(_, c)| c != 0)
            .map(|(m, c)| (c, m))
            .collect();
        terms.sort_by(|a, b| (Reverse(degree(&a.1)), &a.1).cmp(&(Reverse(degree(&b.1)), &b.1)));
        Poly { terms }
    }

    pub fn terms(&self) -> &[(i64, Monomial)] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.terms.iter().map(|(_, m)| degree(m)).max().unwrap_or(0)
    }

    /// Largest variable index used, plus one.
    pub fn var_bound(&self) -> usize {
        self.terms
            .iter()
            .flat_map(|(_, m)| m.iter().map(|&(v, _)| v + 1))
            .max()
            .unwrap_or(0)
    }

    pub fn eval<T: Float>(&self, x: &[T]) -> T {
        self.terms.iter().fold(T::zero(), |acc, (c, m)| {
            let c = T::from(*c).expect("integer coefficient fits a float");
            acc + m.iter().fold(c, |p, &(v, e)| p * x[v].powi(e as i32))
        })
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        Poly::from_terms(self.terms.iter().chain(&rhs.terms).cloned())
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            terms: self.terms.iter().map(|(c, m)| (-c, m.clone())).collect(),
        }
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        Poly::from_terms(self.terms.iter().flat_map(|(a, ma)| {
            rhs.terms.iter().map(move |(b, mb)| (a * b, mul_monomials(ma, mb)))
        }))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let x = Poly::var(0);
        let y = Poly::var(1);
        let p = &(&x * &x) - &x;
        assert_eq!(p.terms(), &[(1, vec![(0, 2)]), (-1, vec![(0, 1)])]);
        assert_eq!(p.degree(), 2);
        let q = &(&x + &y) * &(&x - &y);
        assert_eq!(q, &(&x * &x) - &(&y * &y));
        assert!((&q - &q).is_zero());
        assert_eq!(p.eval(&[3.0f64]), 6.0);
        assert_eq!(Poly::constant(0), Poly::zero());
        assert_eq!(q.var_bound(), 2);
    }
}
