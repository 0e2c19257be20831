//! The lattice of subspaces of F^d over an exact field.
//!
//! A subspace is stored as the reduced row echelon form of any spanning set,
//! with zero rows dropped. RREF is unique, so set equality is structural
//! equality. Meet and join never consult the form; orthocomplement is the
//! only form-dependent operation.

use std::cmp::Ordering;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::field::{Field, FieldTag, GaussRational, Rational};
use crate::lattice::Ortholattice;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SubspaceError {
    #[error("row {row} has length {found}, expected {expected}")]
    Ragged {
        row: usize,
        found: usize,
        expected: usize,
    },
    #[error("ambient dimensions differ ({0} and {1})")]
    DimensionMismatch(usize, usize),
    #[error("form is not hermitean")]
    NotHermitean,
    #[error("form has not been validated as anisotropic")]
    UnvalidatedForm,
    #[error("form over {field} in dimension {d} is not anisotropic: {verdict}")]
    NotAnisotropic {
        field: FieldTag,
        d: usize,
        verdict: String,
    },
    #[error("requested dimension {k} exceeds ambient dimension {d}")]
    TooLarge { k: usize, d: usize },
}

/// Brings `rows` (each of length `ncols`) into reduced row echelon form in
/// place, drops zero rows and returns the pivot columns.
pub fn rref_in_place<F: Field>(rows: &mut Vec<Vec<F>>, ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let Some(p) = (rank..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(rank, p);
        let inv = rows[rank][col].inv().expect("pivot is nonzero");
        for x in rows[rank].iter_mut().skip(col) {
            *x = x.clone() * inv.clone();
        }
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r == rank || row[col].is_zero() {
                continue;
            }
            let factor = row[col].clone();
            for (x, p) in row.iter_mut().zip(&pivot_row).skip(col) {
                if !p.is_zero() {
                    *x = x.clone() - factor.clone() * p.clone();
                }
            }
        }
        pivots.push(col);
        rank += 1;
    }
    rows.truncate(rank);
    pivots
}

/// Basis of `{x : rows · x = 0}`.
pub fn nullspace<F: Field>(rows: &[Vec<F>], ncols: usize) -> Vec<Vec<F>> {
    let mut m = rows.to_vec();
    let pivots = rref_in_place(&mut m, ncols);
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivots.contains(c)) {
        let mut v = vec![F::zero(); ncols];
        v[free] = F::one();
        for (row, &pc) in m.iter().zip(&pivots) {
            v[pc] = -row[free].clone();
        }
        out.push(v);
    }
    out
}

/// A subspace of F^d in canonical form.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Subspace<F: Field> {
    d: usize,
    rows: Vec<Vec<F>>,
}

impl<F: Field> Subspace<F> {
    pub fn zero(d: usize) -> Self {
        Subspace { d, rows: vec![] }
    }

    pub fn full(d: usize) -> Self {
        let rows = (0..d)
            .map(|i| {
                (0..d)
                    .map(|j| if i == j { F::one() } else { F::zero() })
                    .collect()
            })
            .collect();
        Subspace { d, rows }
    }

    /// Canonical form of the row space of `rows`.
    pub fn from_rows(rows: Vec<Vec<F>>, d: usize) -> Result<Self, SubspaceError> {
        if let Some((row, r)) = rows.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(SubspaceError::Ragged {
                row,
                found: r.len(),
                expected: d,
            });
        }
        let mut rows = rows;
        rref_in_place(&mut rows, d);
        Ok(Subspace { d, rows })
    }

    /// Span of the given integer vectors.
    pub fn span_ints(rows: &[&[i64]]) -> Self {
        let d = rows.first().map_or(0, |r| r.len());
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| F::from_i64(x)).collect())
                .collect(),
            d,
        )
        .expect("rows have equal length")
    }

    /// Span of the `i`-th standard basis vector of F^d.
    pub fn axis(d: usize, i: usize) -> Self {
        let mut v = vec![F::zero(); d];
        v[i] = F::one();
        Subspace { d, rows: vec![v] }
    }

    pub fn ambient(&self) -> usize {
        self.d
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vec<F>] {
        &self.rows
    }

    pub fn is_zero(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rows.len() == self.d
    }

    fn check(&self, other: &Self) -> Result<(), SubspaceError> {
        if self.d != other.d {
            Err(SubspaceError::DimensionMismatch(self.d, other.d))
        } else {
            Ok(())
        }
    }

    pub fn join(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check(other)?;
        if other.is_zero() || self.is_full() {
            return Ok(self.clone());
        }
        if self.is_zero() || other.is_full() {
            return Ok(other.clone());
        }
        let mut rows = self.rows.clone();
        rows.extend(other.rows.iter().cloned());
        rref_in_place(&mut rows, self.d);
        Ok(Subspace { d: self.d, rows })
    }

    /// Intersection by the Zassenhaus scheme: reduce `[[U, U], [V, 0]]`; the
    /// rows whose left half vanishes span U ∩ V in their right half.
    pub fn meet(&self, other: &Self) -> Result<Self, SubspaceError> {
        self.check(other)?;
        if self.is_zero() || other.is_full() {
            return Ok(self.clone());
        }
        if other.is_zero() || self.is_full() {
            return Ok(other.clone());
        }
        let d = self.d;
        let mut m: Vec<Vec<F>> = self
            .rows
            .iter()
            .map(|r| r.iter().chain(r.iter()).cloned().collect())
            .chain(other.rows.iter().map(|r| {
                r.iter()
                    .cloned()
                    .chain(std::iter::repeat_n(F::zero(), d))
                    .collect()
            }))
            .collect();
        let pivots = rref_in_place(&mut m, 2 * d);
        let rows: Vec<Vec<F>> = m
            .into_iter()
            .zip(pivots)
            .filter(|&(_, p)| p >= d)
            .map(|(r, _)| r[d..].to_vec())
            .collect();
        Subspace::from_rows(rows, d)
    }

    pub fn contains_vector(&self, v: &[F]) -> bool {
        let mut rows = self.rows.clone();
        rows.push(v.to_vec());
        rref_in_place(&mut rows, self.d);
        rows.len() == self.rows.len()
    }

    pub fn is_subspace_of(&self, other: &Self) -> bool {
        self.d == other.d && self.rows.iter().all(|r| other.contains_vector(r))
    }

    /// Orthogonal complement with respect to `form`.
    pub fn ortho(&self, form: &Form<F>) -> Result<Self, SubspaceError> {
        if form.d != self.d {
            return Err(SubspaceError::DimensionMismatch(self.d, form.d));
        }
        if !form.validated {
            return Err(SubspaceError::UnvalidatedForm);
        }
        Ok(self.ortho_unchecked(form))
    }

    fn ortho_unchecked(&self, form: &Form<F>) -> Self {
        // <v, u> = sum_ij v_i G_ij conj(u_j); one linear condition on v per
        // basis row u
        let conditions: Vec<Vec<F>> = self
            .rows
            .iter()
            .map(|u| {
                (0..self.d)
                    .map(|i| {
                        (0..self.d).fold(F::zero(), |acc, j| {
                            acc + form.gram[i][j].clone() * u[j].involute()
                        })
                    })
                    .collect()
            })
            .collect();
        let mut rows = nullspace(&conditions, self.d);
        rref_in_place(&mut rows, self.d);
        Subspace { d: self.d, rows }
    }
}

impl<F: Field> fmt::Debug for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl<F: Field> fmt::Display for Subspace<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("span{")?;
        for (k, row) in self.rows.iter().enumerate() {
            if k > 0 {
                f.write_str(", ")?;
            }
            f.write_str("(")?;
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{}", x.to_elem())?;
            }
            f.write_str(")")?;
        }
        write!(f, "}} in F^{}", self.d)
    }
}

pub fn rref<F: Field>(rows: Vec<Vec<F>>, d: usize) -> Result<Subspace<F>, SubspaceError> {
    Subspace::from_rows(rows, d)
}

pub fn join<F: Field>(u: &Subspace<F>, v: &Subspace<F>) -> Result<Subspace<F>, SubspaceError> {
    u.join(v)
}

pub fn meet<F: Field>(u: &Subspace<F>, v: &Subspace<F>) -> Result<Subspace<F>, SubspaceError> {
    u.meet(v)
}

pub fn ortho<F: Field>(u: &Subspace<F>, form: &Form<F>) -> Result<Subspace<F>, SubspaceError> {
    u.ortho(form)
}

// ---------------------------------------------------------------------------
// Forms

/// A hermitean form on F^d given by its Gram matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Form<F: Field> {
    d: usize,
    gram: Vec<Vec<F>>,
    validated: bool,
}

/// Outcome of an anisotropy check.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Anisotropy<F: Field> {
    Anisotropic,
    /// A nonzero vector `x` with `<x, x> = 0`.
    Isotropic(Vec<F>),
    Unknown,
}

impl<F: Field> fmt::Display for Anisotropy<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Anisotropy::Anisotropic => f.write_str("anisotropic"),
            Anisotropy::Unknown => f.write_str("unknown"),
            Anisotropy::Isotropic(v) => {
                f.write_str("isotropic witness (")?;
                for (i, x) in v.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    write!(f, "{}", x.to_elem())?;
                }
                f.write_str(")")
            }
        }
    }
}

impl<F: Field> Form<F> {
    /// The canonical scalar product (identity Gram matrix), not yet validated.
    pub fn canonical(d: usize) -> Self {
        Form {
            d,
            gram: Subspace::<F>::full(d).rows,
            validated: false,
        }
    }

    pub fn from_gram(gram: Vec<Vec<F>>) -> Result<Self, SubspaceError> {
        let d = gram.len();
        if let Some((row, r)) = gram.iter().enumerate().find(|(_, r)| r.len() != d) {
            return Err(SubspaceError::Ragged {
                row,
                found: r.len(),
                expected: d,
            });
        }
        for i in 0..d {
            for j in 0..d {
                if gram[i][j] != gram[j][i].involute() {
                    return Err(SubspaceError::NotHermitean);
                }
            }
        }
        Ok(Form {
            d,
            gram,
            validated: false,
        })
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn gram(&self) -> &[Vec<F>] {
        &self.gram
    }

    pub fn is_validated(&self) -> bool {
        self.validated
    }

    /// `<x, y> = sum_ij x_i G_ij conj(y_j)`.
    pub fn apply(&self, x: &[F], y: &[F]) -> F {
        let mut acc = F::zero();
        for i in 0..self.d {
            if x[i].is_zero() {
                continue;
            }
            for j in 0..self.d {
                acc = acc + x[i].clone() * self.gram[i][j].clone() * y[j].involute();
            }
        }
        acc
    }

    /// Runs [`check_anisotropic`] and marks the form usable when it passes.
    pub fn validate(mut self, budget: u64) -> Result<Self, SubspaceError> {
        match check_anisotropic(&self, budget) {
            Anisotropy::Anisotropic => {
                self.validated = true;
                Ok(self)
            }
            other => Err(SubspaceError::NotAnisotropic {
                field: F::tag(),
                d: self.d,
                verdict: other.to_string(),
            }),
        }
    }
}

/// Signs of the pivots of a symmetric elimination without row exchanges,
/// when all leading principal minors are real and nonzero.
fn definite_sign<F: Field>(gram: &[Vec<F>]) -> Option<Ordering> {
    let d = gram.len();
    let mut a: Vec<Vec<F>> = gram.to_vec();
    let mut sign = None;
    for k in 0..d {
        let s = a[k][k].real_sign()?;
        if s == Ordering::Equal || sign.is_some_and(|t| t != s) {
            return None;
        }
        sign = Some(s);
        let piv = a[k][k].clone();
        for i in k + 1..d {
            let f = a[i][k].clone() / piv.clone();
            for j in k..d {
                let t = f.clone() * a[k][j].clone();
                a[i][j] = a[i][j].clone() - t;
            }
        }
    }
    sign
}

/// Decides anisotropy of `form` where possible.
///
/// Over ordered fields a definite Gram matrix settles it: then
/// `<x, x> = sum_k p_k |y_k|^2` with all pivots `p_k` of one sign, which is
/// zero only for `x = 0`. Over GF(p) every nonzero vector up to scaling is
/// scanned when `p^d <= budget`. Otherwise a singular Gram matrix yields a
/// kernel vector as witness and the verdict is `Unknown`.
pub fn check_anisotropic<F: Field>(form: &Form<F>, budget: u64) -> Anisotropy<F> {
    let d = form.d;
    if d == 0 {
        return Anisotropy::Anisotropic;
    }
    if let FieldTag::Gf(p) = F::tag() {
        let total = (p as u128).checked_pow(d as u32);
        if total.is_some_and(|t| t <= budget as u128) {
            return scan_prime_field(form, p);
        }
    } else if definite_sign(&form.gram).is_some() {
        return Anisotropy::Anisotropic;
    }
    if let Some(v) = nullspace(&form.gram, d).into_iter().next() {
        return Anisotropy::Isotropic(v);
    }
    Anisotropy::Unknown
}

fn scan_prime_field<F: Field>(form: &Form<F>, p: u64) -> Anisotropy<F> {
    let d = form.d;
    let total = p.pow(d as u32);
    // counting with coordinate 0 least significant; only vectors whose first
    // nonzero coordinate is 1 are checked (one per line)
    for n in 1..total {
        let mut digits = Vec::with_capacity(d);
        let mut m = n;
        for _ in 0..d {
            digits.push(m % p);
            m /= p;
        }
        if digits.iter().find(|&&x| x != 0) != Some(&1) {
            continue;
        }
        let v: Vec<F> = digits.iter().map(|&x| F::from_i64(x as i64)).collect();
        if form.apply(&v, &v).is_zero() {
            return Anisotropy::Isotropic(v);
        }
    }
    Anisotropy::Anisotropic
}

// ---------------------------------------------------------------------------
// Random subspaces

/// Entries of random spanning sets are drawn from `-RANDOM_RANGE..=RANDOM_RANGE`.
pub const RANDOM_RANGE: i64 = 3;

pub fn random_subspace_with<F: Field, R: Rng + ?Sized>(rng: &mut R, d: usize, k: usize) -> Subspace<F> {
    assert!(k <= d, "subspace dimension {k} exceeds ambient {d}");
    if k == 0 {
        return Subspace::zero(d);
    }
    if k == d {
        return Subspace::full(d);
    }
    loop {
        let rows: Vec<Vec<F>> = (0..k)
            .map(|_| (0..d).map(|_| F::sample_small(rng, RANDOM_RANGE)).collect())
            .collect();
        let s = Subspace::from_rows(rows, d).expect("rows have length d");
        if s.dim() == k {
            return s;
        }
    }
}

/// A `k`-dimensional subspace of F^d determined by `seed`.
pub fn random_subspace<F: Field>(d: usize, k: usize, seed: u64) -> Result<Subspace<F>, SubspaceError> {
    if k > d {
        return Err(SubspaceError::TooLarge { k, d });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(random_subspace_with(&mut rng, d, k))
}

// ---------------------------------------------------------------------------
// The ortholattice L(F^d)

/// L(F^d) with a validated anisotropic form.
#[derive(Debug, Clone)]
pub struct SubspaceLattice<F: Field> {
    form: Form<F>,
}

/// Budget for exhaustive anisotropy scans when none is given.
pub const DEFAULT_ANISOTROPY_BUDGET: u64 = 1 << 20;

impl<F: Field> SubspaceLattice<F> {
    pub fn new(form: Form<F>) -> Result<Self, SubspaceError> {
        let form = if form.validated {
            form
        } else {
            form.validate(DEFAULT_ANISOTROPY_BUDGET)?
        };
        Ok(SubspaceLattice { form })
    }

    /// L(F^d) with the canonical scalar product.
    pub fn canonical(d: usize) -> Result<Self, SubspaceError> {
        Self::new(Form::canonical(d))
    }

    pub fn dim(&self) -> usize {
        self.form.d
    }

    pub fn form(&self) -> &Form<F> {
        &self.form
    }

    pub fn axis(&self, i: usize) -> Subspace<F> {
        Subspace::axis(self.dim(), i)
    }
}

impl<F: Field> Ortholattice for SubspaceLattice<F> {
    type Elem = Subspace<F>;

    fn bottom(&self) -> Subspace<F> {
        Subspace::zero(self.dim())
    }

    fn top(&self) -> Subspace<F> {
        Subspace::full(self.dim())
    }

    fn meet(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        a.meet(b).expect("elements of one lattice share the ambient dimension")
    }

    fn join(&self, a: &Subspace<F>, b: &Subspace<F>) -> Subspace<F> {
        a.join(b).expect("elements of one lattice share the ambient dimension")
    }

    fn ortho(&self, a: &Subspace<F>) -> Subspace<F> {
        a.ortho_unchecked(&self.form)
    }

    fn leq(&self, a: &Subspace<F>, b: &Subspace<F>) -> bool {
        a.is_subspace_of(b)
    }
}

/// Image of a subspace of Q(i)^d under the real structure
/// `x + iy ↦ (x, y)` in Q^{2d}. This is a lattice embedding that carries
/// the hermitean orthocomplement to the euclidean one.
pub fn realify(u: &Subspace<GaussRational>) -> Subspace<Rational> {
    let d = u.ambient();
    let mut rows = Vec::with_capacity(2 * u.dim());
    for v in u.basis() {
        // v and i·v
        rows.push(v.iter().map(|z| z.re.clone()).chain(v.iter().map(|z| z.im.clone())).collect());
        rows.push(v.iter().map(|z| -z.im.clone()).chain(v.iter().map(|z| z.re.clone())).collect());
    }
    Subspace::from_rows(rows, 2 * d).expect("rows have length 2d")
}
