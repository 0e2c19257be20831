//! Term evaluation over any [`Ortholattice`].
//!
//! Terms are compiled once into a straight-line [`Program`] with common
//! subterms merged, then run against many assignments. Generated identity
//! families reuse the same large subterms many times, so the merge matters.

use std::collections::HashMap;
use std::fmt;

use thiserror::Error;

use crate::lattice::Ortholattice;
use crate::term::{Identity, Term};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EvalError {
    #[error("variable {0:?} is not assigned")]
    Unbound(String),
}

/// Variable bindings, kept in insertion order.
#[derive(Clone, PartialEq, Eq)]
pub struct Assignment<E> {
    bindings: Vec<(String, E)>,
}

impl<E> Default for Assignment<E> {
    fn default() -> Self {
        Assignment { bindings: vec![] }
    }
}

impl<E> Assignment<E> {
    pub fn new() -> Self {
        Self::default()
    }

    /// Binds `name`, replacing an earlier binding.
    pub fn bind(&mut self, name: impl Into<String>, value: E) {
        let name = name.into();
        match self.bindings.iter_mut().find(|(n, _)| *n == name) {
            Some(slot) => slot.1 = value,
            None => self.bindings.push((name, value)),
        }
    }

    pub fn with(mut self, name: impl Into<String>, value: E) -> Self {
        self.bind(name, value);
        self
    }

    pub fn get(&self, name: &str) -> Option<&E> {
        self.bindings.iter().find(|(n, _)| n == name).map(|(_, e)| e)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &E)> {
        self.bindings.iter().map(|(n, e)| (n.as_str(), e))
    }

    pub fn len(&self) -> usize {
        self.bindings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.bindings.is_empty()
    }

    pub fn map<G>(&self, mut f: impl FnMut(&E) -> G) -> Assignment<G> {
        Assignment {
            bindings: self.bindings.iter().map(|(n, e)| (n.clone(), f(e))).collect(),
        }
    }
}

impl<E> FromIterator<(String, E)> for Assignment<E> {
    fn from_iter<I: IntoIterator<Item = (String, E)>>(iter: I) -> Self {
        let mut a = Assignment::new();
        for (n, e) in iter {
            a.bind(n, e);
        }
        a
    }
}

impl<E: fmt::Debug> fmt::Debug for Assignment<E> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map().entries(self.bindings.iter().map(|(n, e)| (n, e))).finish()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
enum Op {
    Var(usize),
    Zero,
    One,
    Meet(usize, usize),
    Join(usize, usize),
    Comp(usize),
}

/// A compiled set of terms sharing one variable list.
#[derive(Debug, Clone)]
pub struct Program {
    ops: Vec<Op>,
    vars: Vec<String>,
    roots: Vec<usize>,
}

struct Compiler {
    ops: Vec<Op>,
    interned: HashMap<Op, usize>,
    by_ptr: HashMap<*const Term, usize>,
    vars: Vec<String>,
}

impl Compiler {
    fn intern(&mut self, op: Op) -> usize {
        if let Some(&i) = self.interned.get(&op) {
            return i;
        }
        self.ops.push(op);
        self.interned.insert(op, self.ops.len() - 1);
        self.ops.len() - 1
    }

    fn compile(&mut self, t: &Term) -> usize {
        let key = t as *const Term;
        if let Some(&i) = self.by_ptr.get(&key) {
            return i;
        }
        let op = match t {
            Term::Var(v) => {
                let slot = match self.vars.iter().position(|w| w == v) {
                    Some(s) => s,
                    None => {
                        self.vars.push(v.clone());
                        self.vars.len() - 1
                    }
                };
                Op::Var(slot)
            }
            Term::Zero => Op::Zero,
            Term::One => Op::One,
            Term::Comp(a) => Op::Comp(self.compile(a)),
            Term::Meet(a, b) => {
                let (a, b) = (self.compile(a), self.compile(b));
                Op::Meet(a, b)
            }
            Term::Join(a, b) => {
                let (a, b) = (self.compile(a), self.compile(b));
                Op::Join(a, b)
            }
        };
        let i = self.intern(op);
        self.by_ptr.insert(key, i);
        i
    }
}

impl Program {
    /// Compiles `terms`; variables are numbered in first-occurrence order
    /// across all of them.
    pub fn new(terms: &[&Term]) -> Program {
        let mut c = Compiler {
            ops: vec![],
            interned: HashMap::new(),
            by_ptr: HashMap::new(),
            vars: vec![],
        };
        let roots = terms.iter().map(|t| c.compile(t)).collect();
        Program {
            ops: c.ops,
            vars: c.vars,
            roots,
        }
    }

    pub fn for_identity(id: &Identity) -> Program {
        Program::new(&[&id.lhs, &id.rhs])
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    /// Number of distinct subterms after merging.
    pub fn size(&self) -> usize {
        self.ops.len()
    }

    /// Evaluates with `values[i]` bound to `vars()[i]`; returns the value of
    /// each root.
    pub fn run<L: Ortholattice>(&self, lat: &L, values: &[L::Elem]) -> Vec<L::Elem> {
        assert_eq!(values.len(), self.vars.len(), "one value per variable");
        let mut regs: Vec<L::Elem> = Vec::with_capacity(self.ops.len());
        for op in &self.ops {
            let v = match *op {
                Op::Var(s) => values[s].clone(),
                Op::Zero => lat.bottom(),
                Op::One => lat.top(),
                Op::Meet(a, b) => lat.meet(&regs[a], &regs[b]),
                Op::Join(a, b) => lat.join(&regs[a], &regs[b]),
                Op::Comp(a) => lat.ortho(&regs[a]),
            };
            regs.push(v);
        }
        self.roots.iter().map(|&r| regs[r].clone()).collect()
    }

    /// Runs on a table model, leaving every subterm value in `regs`.
    pub(crate) fn exec_indices<L>(&self, lat: &L, values: &[usize], regs: &mut Vec<usize>)
    where
        L: Ortholattice<Elem = usize>,
    {
        regs.clear();
        for op in &self.ops {
            let v = match *op {
                Op::Var(s) => values[s],
                Op::Zero => lat.bottom(),
                Op::One => lat.top(),
                Op::Meet(a, b) => lat.meet(&regs[a], &regs[b]),
                Op::Join(a, b) => lat.join(&regs[a], &regs[b]),
                Op::Comp(a) => lat.ortho(&regs[a]),
            };
            regs.push(v);
        }
    }

    /// Table-model check that the first two roots agree; reuses `regs`.
    pub(crate) fn run_indices<L>(&self, lat: &L, values: &[usize], regs: &mut Vec<usize>) -> bool
    where
        L: Ortholattice<Elem = usize>,
    {
        self.exec_indices(lat, values, regs);
        regs[self.roots[0]] == regs[self.roots[1]]
    }

    /// Register index of each root, for use with `exec_indices`.
    pub(crate) fn roots(&self) -> &[usize] {
        &self.roots
    }

    /// Looks up every variable in `a`.
    pub fn bind<E: Clone>(&self, a: &Assignment<E>) -> Result<Vec<E>, EvalError> {
        self.vars
            .iter()
            .map(|v| a.get(v).cloned().ok_or_else(|| EvalError::Unbound(v.clone())))
            .collect()
    }
}

pub fn eval_term<L: Ortholattice>(
    lat: &L,
    t: &Term,
    a: &Assignment<L::Elem>,
) -> Result<L::Elem, EvalError> {
    let p = Program::new(&[t]);
    let values = p.bind(a)?;
    Ok(p.run(lat, &values).pop().expect("one root"))
}

/// Both sides of `id` under `a`.
pub fn eval_identity<L: Ortholattice>(
    lat: &L,
    id: &Identity,
    a: &Assignment<L::Elem>,
) -> Result<(L::Elem, L::Elem), EvalError> {
    let p = Program::for_identity(id);
    let values = p.bind(a)?;
    let mut out = p.run(lat, &values);
    let rhs = out.pop().expect("two roots");
    let lhs = out.pop().expect("two roots");
    Ok((lhs, rhs))
}
