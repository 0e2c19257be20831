//! The projection-matrix encoding.
//!
//! The identity is first turned into its tautology form T, meets are
//! rewritten as `(a' + b')'`, and the result is hash-consed into a DAG with a
//! few ortholattice simplifications (`a'' = a`, `a + a = a`, `a + a' = 1`,
//! absorption of 0 and 1). Each node then denotes a d×d orthogonal
//! projection:
//!
//! * a variable gets a fresh block `P` with `P² = P`, `P = Pᵀ`;
//! * `0`, `1` and `a'` are substituted as `0`, `I` and `I − A`;
//! * a join of `A`, `B` gets a fresh projection `J` and witnesses `X`, `Y`
//!   with `J² = J`, `J = Jᵀ`, `JA = A`, `JB = B` and `J = AX + BY`, which
//!   pins `J` to the projection onto `range A + range B`.
//!
//! A vector `v` with `vᵀ(I − R)v = 1` for the root projection `R` certifies
//! `T ≠ 1`, that is, a failing assignment.

use std::collections::HashMap;
use std::fmt;

use super::poly::Poly;
use super::FeasError;
use crate::term::{to_tautology, Identity, Term};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub(crate) enum Node {
    Var(String),
    Zero,
    One,
    Comp(usize),
    Join(usize, usize),
}

/// Hash-consed tautology form of an identity; children precede parents.
#[derive(Debug, Clone)]
pub(crate) struct Dag {
    pub nodes: Vec<Node>,
    pub root: usize,
}

impl Dag {
    pub fn of_identity(id: &Identity) -> Dag {
        let t = to_tautology(std::slice::from_ref(id)).expect("one identity");
        let mut b = DagBuilder::default();
        let root = b.term(&t);
        Dag { nodes: b.nodes, root }
    }
}

#[derive(Default)]
struct DagBuilder {
    nodes: Vec<Node>,
    index: HashMap<Node, usize>,
}

impl DagBuilder {
    fn intern(&mut self, n: Node) -> usize {
        if let Some(&i) = self.index.get(&n) {
            return i;
        }
        self.nodes.push(n.clone());
        self.index.insert(n, self.nodes.len() - 1);
        self.nodes.len() - 1
    }

    fn comp(&mut self, a: usize) -> usize {
        match self.nodes[a] {
            Node::Comp(b) => b,
            Node::Zero => self.intern(Node::One),
            Node::One => self.intern(Node::Zero),
            _ => self.intern(Node::Comp(a)),
        }
    }

    fn join(&mut self, a: usize, b: usize) -> usize {
        let complementary = |x: usize, y: usize| matches!(self.nodes[x], Node::Comp(c) if c == y);
        match (&self.nodes[a], &self.nodes[b]) {
            _ if a == b => a,
            (Node::Zero, _) => b,
            (_, Node::Zero) => a,
            (Node::One, _) => a,
            (_, Node::One) => b,
            _ if complementary(a, b) || complementary(b, a) => self.intern(Node::One),
            _ => self.intern(Node::Join(a.min(b), a.max(b))),
        }
    }

    fn term(&mut self, t: &Term) -> usize {
        match t {
            Term::Var(v) => self.intern(Node::Var(v.clone())),
            Term::Zero => self.intern(Node::Zero),
            Term::One => self.intern(Node::One),
            Term::Comp(a) => {
                let a = self.term(a);
                self.comp(a)
            }
            Term::Join(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                self.join(a, b)
            }
            Term::Meet(a, b) => {
                let (a, b) = (self.term(a), self.term(b));
                let (ca, cb) = (self.comp(a), self.comp(b));
                let j = self.join(ca, cb);
                self.comp(j)
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ConstraintKind {
    /// `P² = P`
    Idempotent,
    /// `P = Pᵀ`
    Symmetric,
    /// `JA = A` for the left child
    CoversLeft,
    /// `JB = B` for the right child
    CoversRight,
    /// `J = AX + BY`
    Factor,
    /// `vᵀ(I − R)v = 1`
    Refutation,
}

impl ConstraintKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ConstraintKind::Idempotent => "idempotent",
            ConstraintKind::Symmetric => "symmetric",
            ConstraintKind::CoversLeft => "covers-left",
            ConstraintKind::CoversRight => "covers-right",
            ConstraintKind::Factor => "factor",
            ConstraintKind::Refutation => "refutation",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        use ConstraintKind::*;
        [Idempotent, Symmetric, CoversLeft, CoversRight, Factor, Refutation]
            .into_iter()
            .find(|k| k.as_str() == s)
    }
}

impl fmt::Display for ConstraintKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// `poly = 0`, with the DAG node it came from.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Constraint {
    pub poly: Poly,
    pub node: usize,
    pub kind: ConstraintKind,
}

/// A list of integer polynomial equations over named real scalars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PolySystem {
    pub d: usize,
    pub vars: Vec<String>,
    pub constraints: Vec<Constraint>,
    /// DAG node of the tautology form.
    pub root: usize,
    /// Identity variable → node owning its projection block `p_{node}_i_j`.
    pub leaves: Vec<(String, usize)>,
}

impl PolySystem {
    pub fn var_index(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }

    /// Indices of the d×d block `{prefix}_{node}_i_j`, row-major.
    pub fn block(&self, prefix: &str, node: usize) -> Result<Vec<usize>, FeasError> {
        let names: HashMap<&str, usize> = self.vars.iter().enumerate().map(|(i, v)| (v.as_str(), i)).collect();
        let mut out = Vec::with_capacity(self.d * self.d);
        for i in 0..self.d {
            for j in 0..self.d {
                let name = format!("{prefix}_{node}_{i}_{j}");
                out.push(*names.get(name.as_str()).ok_or(FeasError::UnknownVariable(name))?);
            }
        }
        Ok(out)
    }

    pub fn max_degree(&self) -> u32 {
        self.constraints.iter().map(|c| c.poly.degree()).max().unwrap_or(0)
    }
}

type Matrix = Vec<Vec<Poly>>;

fn identity(d: usize) -> Matrix {
    (0..d)
        .map(|i| (0..d).map(|j| Poly::constant((i == j) as i64)).collect())
        .collect()
}

fn zeros(d: usize) -> Matrix {
    vec![vec![Poly::zero(); d]; d]
}

fn mat_mul(a: &Matrix, b: &Matrix) -> Matrix {
    let d = a.len();
    (0..d)
        .map(|i| {
            (0..d)
                .map(|j| {
                    (0..d).fold(Poly::zero(), |acc, k| {
                        if a[i][k].is_zero() || b[k][j].is_zero() {
                            acc
                        } else {
                            &acc + &(&a[i][k] * &b[k][j])
                        }
                    })
                })
                .collect()
        })
        .collect()
}

fn mat_sub(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x - y).collect())
        .collect()
}

fn mat_add(a: &Matrix, b: &Matrix) -> Matrix {
    a.iter()
        .zip(b)
        .map(|(ra, rb)| ra.iter().zip(rb).map(|(x, y)| x + y).collect())
        .collect()
}

struct Encoder {
    d: usize,
    vars: Vec<String>,
    constraints: Vec<Constraint>,
}

impl Encoder {
    fn block(&mut self, prefix: &str, node: usize) -> Matrix {
        (0..self.d)
            .map(|i| {
                (0..self.d)
                    .map(|j| {
                        self.vars.push(format!("{prefix}_{node}_{i}_{j}"));
                        Poly::var(self.vars.len() - 1)
                    })
                    .collect()
            })
            .collect()
    }

    fn require(&mut self, m: &Matrix, node: usize, kind: ConstraintKind) {
        for row in m {
            for p in row {
                self.require_poly(p.clone(), node, kind);
            }
        }
    }

    fn require_poly(&mut self, poly: Poly, node: usize, kind: ConstraintKind) {
        if !poly.is_zero() {
            self.constraints.push(Constraint { poly, node, kind });
        }
    }

    fn projection(&mut self, node: usize) -> Matrix {
        let p = self.block("p", node);
        self.require(&mat_sub(&mat_mul(&p, &p), &p), node, ConstraintKind::Idempotent);
        for i in 0..self.d {
            for j in i + 1..self.d {
                self.require_poly(&p[i][j] - &p[j][i], node, ConstraintKind::Symmetric);
            }
        }
        p
    }
}

/// Encodes "`id` fails in L(R^d)" as a polynomial system.
pub fn encode(id: &Identity, d: usize) -> Result<PolySystem, FeasError> {
    if d == 0 {
        return Err(FeasError::ZeroDimension);
    }
    let dag = Dag::of_identity(id);
    let mut enc = Encoder {
        d,
        vars: vec![],
        constraints: vec![],
    };
    let mut leaves = vec![];
    let mut mats: Vec<Matrix> = Vec::with_capacity(dag.nodes.len());
    for (n, node) in dag.nodes.iter().enumerate() {
        let m = match node {
            Node::Var(name) => {
                leaves.push((name.clone(), n));
                enc.projection(n)
            }
            Node::Zero => zeros(d),
            Node::One => identity(d),
            Node::Comp(a) => mat_sub(&identity(d), &mats[*a]),
            Node::Join(a, b) => {
                let j = enc.projection(n);
                let x = enc.block("x", n);
                let y = enc.block("y", n);
                let (ma, mb) = (&mats[*a], &mats[*b]);
                enc.require(&mat_sub(&mat_mul(&j, ma), ma), n, ConstraintKind::CoversLeft);
                enc.require(&mat_sub(&mat_mul(&j, mb), mb), n, ConstraintKind::CoversRight);
                let factor = mat_add(&mat_mul(ma, &x), &mat_mul(mb, &y));
                enc.require(&mat_sub(&j, &factor), n, ConstraintKind::Factor);
                j
            }
        };
        mats.push(m);
    }
    let v: Vec<Poly> = (0..d)
        .map(|i| {
            enc.vars.push(format!("v_{i}"));
            Poly::var(enc.vars.len() - 1)
        })
        .collect();
    let complement = mat_sub(&identity(d), &mats[dag.root]);
    let mut quad = Poly::constant(-1);
    for i in 0..d {
        for j in 0..d {
            if !complement[i][j].is_zero() {
                quad = &quad + &(&(&v[i] * &complement[i][j]) * &v[j]);
            }
        }
    }
    // kept even when constant: -1 = 0 records that T is identically 1
    enc.constraints.push(Constraint {
        poly: quad,
        node: dag.root,
        kind: ConstraintKind::Refutation,
    });
    Ok(PolySystem {
        d,
        vars: enc.vars,
        constraints: enc.constraints,
        root: dag.root,
        leaves,
    })
}

/// Refutation over Q(i)^d is searched in the real structure R^{2d}: if an
/// identity fails in L(C^d) it fails in L(R^{2d}).
pub fn encode_gaussian(id: &Identity, d: usize) -> Result<PolySystem, FeasError> {
    encode(id, 2 * d)
}
