//! Explicit finite ortholattices given by order and complement tables.
//!
//! A [`FiniteModel`] is raw table data as read from a file. Running
//! [`FiniteModel::validate`] checks every modular-ortholattice axiom
//! exhaustively; only a model that passes becomes a [`Mol`], which carries
//! the memoized meet and join tables and is what the evaluators accept.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::lattice::Ortholattice;

/// Models above this size are rejected by the constructors and validator.
pub const MAX_MODEL_SIZE: usize = 512;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("malformed model: {0}")]
    Malformed(String),
    #[error("model has {0} elements, above the cap of {MAX_MODEL_SIZE}")]
    TooLarge(usize),
    #[error("model fails the MOL axioms:\n{0}")]
    NotMol(MolReport),
    #[error("unknown catalog model {0:?} (expected boolean(n) or mo(n))")]
    UnknownCatalog(String),
    #[error("catalog parameter must be at least 1")]
    BadParameter,
    #[error("{lower} is not below {upper}")]
    NotBelow { lower: String, upper: String },
    #[error("no element named {0:?}")]
    UnknownElement(String),
    #[error("invalid model file: {0}")]
    Json(String),
}

/// Unvalidated table data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteModel {
    pub elements: Vec<String>,
    pub leq: Vec<Vec<bool>>,
    pub ortho: Vec<usize>,
    pub bottom: usize,
    pub top: usize,
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    elements: Vec<String>,
    leq: Vec<Vec<u8>>,
    ortho: Vec<usize>,
    bottom: usize,
    top: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Axiom {
    PartialOrder,
    Bounds,
    Lattice,
    OrthoInvolution,
    OrthoAntitone,
    Complement,
    Modular,
}

impl Axiom {
    pub const ALL: [Axiom; 7] = [
        Axiom::PartialOrder,
        Axiom::Bounds,
        Axiom::Lattice,
        Axiom::OrthoInvolution,
        Axiom::OrthoAntitone,
        Axiom::Complement,
        Axiom::Modular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Axiom::PartialOrder => "partial order",
            Axiom::Bounds => "bounds",
            Axiom::Lattice => "lattice (all meets and joins exist)",
            Axiom::OrthoInvolution => "ortho is an involution",
            Axiom::OrthoAntitone => "ortho reverses order",
            Axiom::Complement => "x*x' = 0 and x + x' = 1",
            Axiom::Modular => "modular law",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// Not checked because a prerequisite failed.
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub axiom: Axiom,
    pub status: Status,
    /// Element names of a violating tuple.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MolReport {
    pub size: usize,
    pub checks: Vec<AxiomCheck>,
}

impl MolReport {
    pub fn usable(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    pub fn check(&self, axiom: Axiom) -> &AxiomCheck {
        self.checks
            .iter()
            .find(|c| c.axiom == axiom)
            .expect("every axiom is reported")
    }
}

impl fmt::Display for MolReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} elements", self.size)?;
        for c in &self.checks {
            let status = match c.status {
                Status::Pass => "pass",
                Status::Fail => "FAIL",
                Status::Skipped => "skipped",
            };
            write!(f, "  {:<7} {}", status, c.axiom.name())?;
            if let Some(w) = &c.witness {
                write!(f, "  witness ({})", w.join(", "))?;
            }
            if let Some(d) = &c.detail {
                write!(f, "  {d}")?;
            }
            writeln!(f)?;
        }
        write!(f, "usable: {}", if self.usable() { "yes" } else { "no" })
    }
}

/// Bitset over element indices.
#[derive(Clone, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
}

/// Meet table from the order, if every pair has a greatest lower bound.
/// Returns the first pair without one on failure.
fn meet_table(leq: &[Vec<bool>]) -> Result<Vec<usize>, (usize, usize)> {
    let n = leq.len();
    let mut down = Vec::with_capacity(n);
    let mut principal = HashMap::with_capacity(n);
    for x in 0..n {
        let mut b = Bits::new(n);
        for (y, row) in leq.iter().enumerate() {
            if row[x] {
                b.set(y);
            }
        }
        principal.insert(b.clone(), x);
        down.push(b);
    }
    let mut table = vec![0; n * n];
    for x in 0..n {
        for y in x..n {
            let common = down[x].and(&down[y]);
            // in a poset the glb exists iff the common down-set is principal
            let m = *principal.get(&common).ok_or((x, y))?;
            table[x * n + y] = m;
            table[y * n + x] = m;
        }
    }
    Ok(table)
}

fn transpose(leq: &[Vec<bool>]) -> Vec<Vec<bool>> {
    let n = leq.len();
    (0..n).map(|i| (0..n).map(|j| leq[j][i]).collect()).collect()
}

impl FiniteModel {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    fn check_shape(&self) -> Result<(), ModelError> {
        let n = self.len();
        let bad = |s: String| Err(ModelError::Malformed(s));
        if n == 0 {
            return bad("no elements".into());
        }
        if n > MAX_MODEL_SIZE {
            return Err(ModelError::TooLarge(n));
        }
        if self.leq.len() != n || self.leq.iter().any(|r| r.len() != n) {
            return bad(format!("leq must be a {n}x{n} table"));
        }
        if self.ortho.len() != n {
            return bad(format!("ortho must list {n} indices"));
        }
        if let Some(&i) = self.ortho.iter().find(|&&i| i >= n) {
            return bad(format!("ortho index {i} out of range"));
        }
        if self.bottom >= n || self.top >= n {
            return bad("bottom/top index out of range".into());
        }
        let mut seen = vec![false; n];
        for &i in &self.ortho {
            if std::mem::replace(&mut seen[i], true) {
                return bad(format!("ortho is not a permutation (index {i} repeats)"));
            }
        }
        let mut names: Vec<&String> = self.elements.iter().collect();
        names.sort();
        if names.windows(2).any(|w| w[0] == w[1]) {
            return bad("duplicate element names".into());
        }
        Ok(())
    }

    fn names(&self, idx: &[usize]) -> Option<Vec<String>> {
        Some(idx.iter().map(|&i| self.elements[i].clone()).collect())
    }

    /// Checks every axiom family exhaustively and reports each with a
    /// violating tuple on failure.
    pub fn validate(&self) -> Result<MolReport, ModelError> {
        self.check_shape()?;
        Ok(self.validate_inner().0)
    }

    fn validate_inner(&self) -> (MolReport, Option<(Vec<usize>, Vec<usize>)>) {
        let n = self.len();
        let leq = &self.leq;
        let o = &self.ortho;
        let mut checks = Vec::new();
        let mut push = |axiom, failure: Option<(Vec<usize>, Option<String>)>| {
            checks.push(match failure {
                None => AxiomCheck {
                    axiom,
                    status: Status::Pass,
                    witness: None,
                    detail: None,
                },
                Some((w, detail)) => AxiomCheck {
                    axiom,
                    status: Status::Fail,
                    witness: self.names(&w),
                    detail,
                },
            });
        };

        let order_fail = (0..n)
            .find(|&x| !leq[x][x])
            .map(|x| (vec![x], Some("not reflexive".to_string())))
            .or_else(|| {
                (0..n)
                    .flat_map(|x| (0..n).map(move |y| (x, y)))
                    .find(|&(x, y)| x != y && leq[x][y] && leq[y][x])
                    .map(|(x, y)| (vec![x, y], Some("not antisymmetric".to_string())))
            })
            .or_else(|| {
                (0..n)
                    .flat_map(|x| (0..n).flat_map(move |y| (0..n).map(move |z| (x, y, z))))
                    .find(|&(x, y, z)| leq[x][y] && leq[y][z] && !leq[x][z])
                    .map(|(x, y, z)| (vec![x, y, z], Some("not transitive".to_string())))
            });
        let order_ok = order_fail.is_none();
        push(Axiom::PartialOrder, order_fail);

        let bounds_fail = (0..n)
            .find(|&x| !leq[self.bottom][x] || !leq[x][self.top])
            .map(|x| (vec![x], None));
        let bounds_ok = bounds_fail.is_none();
        push(Axiom::Bounds, bounds_fail);

        let tables = if order_ok {
            match (meet_table(leq), meet_table(&transpose(leq))) {
                (Ok(m), Ok(j)) => {
                    push(Axiom::Lattice, None);
                    Some((m, j))
                }
                (Err((x, y)), _) => {
                    push(Axiom::Lattice, Some((vec![x, y], Some("no meet".into()))));
                    None
                }
                (_, Err((x, y))) => {
                    push(Axiom::Lattice, Some((vec![x, y], Some("no join".into()))));
                    None
                }
            }
        } else {
            None
        };

        push(
            Axiom::OrthoInvolution,
            (0..n).find(|&x| o[o[x]] != x).map(|x| (vec![x], None)),
        );
        push(
            Axiom::OrthoAntitone,
            (0..n)
                .flat_map(|x| (0..n).map(move |y| (x, y)))
                .find(|&(x, y)| leq[x][y] && !leq[o[y]][o[x]])
                .map(|(x, y)| (vec![x, y], None)),
        );

        match &tables {
            Some((m, j)) if bounds_ok => {
                push(
                    Axiom::Complement,
                    (0..n)
                        .find(|&x| m[x * n + o[x]] != self.bottom || j[x * n + o[x]] != self.top)
                        .map(|x| (vec![x], None)),
                );
                // x <= z  implies  x + y*z = (x + y)*z
                let modular_fail = (0..n)
                    .flat_map(|x| (0..n).map(move |z| (x, z)))
                    .filter(|&(x, z)| leq[x][z])
                    .find_map(|(x, z)| {
                        (0..n)
                            .find(|&y| j[x * n + m[y * n + z]] != m[j[x * n + y] * n + z])
                            .map(|y| vec![x, y, z])
                    })
                    .map(|w| (w, Some("x <= z but x + y*z != (x + y)*z".to_string())));
                push(Axiom::Modular, modular_fail);
            }
            _ => {
                for axiom in [Axiom::Complement, Axiom::Modular] {
                    checks.push(AxiomCheck {
                        axiom,
                        status: Status::Skipped,
                        witness: None,
                        detail: Some("requires a bounded lattice".into()),
                    });
                }
            }
        }

        (MolReport { size: n, checks }, tables)
    }

    /// Validates and, if every axiom holds, returns the usable model.
    pub fn into_mol(self) -> Result<Mol, ModelError> {
        self.check_shape()?;
        let (report, tables) = self.validate_inner();
        if !report.usable() {
            return Err(ModelError::NotMol(report));
        }
        let (meet, join) = tables.expect("tables exist when the report passes");
        let mut mol = Mol {
            model: self,
            meet,
            join,
            height: 0,
        };
        mol.height = mol.compute_height();
        Ok(mol)
    }

    pub fn from_json(text: &str) -> Result<FiniteModel, ModelError> {
        let f: ModelFile = serde_json::from_str(text).map_err(|e| ModelError::Json(e.to_string()))?;
        let mut leq = Vec::with_capacity(f.leq.len());
        for row in f.leq {
            let mut out = Vec::with_capacity(row.len());
            for v in row {
                match v {
                    0 => out.push(false),
                    1 => out.push(true),
                    other => return Err(ModelError::Malformed(format!("leq entry {other} is not 0 or 1"))),
                }
            }
            leq.push(out);
        }
        Ok(FiniteModel {
            elements: f.elements,
            leq,
            ortho: f.ortho,
            bottom: f.bottom,
            top: f.top,
        })
    }

    pub fn to_json(&self) -> String {
        let f = ModelFile {
            elements: self.elements.clone(),
            leq: self
                .leq
                .iter()
                .map(|r| r.iter().map(|&b| b as u8).collect())
                .collect(),
            ortho: self.ortho.clone(),
            bottom: self.bottom,
            top: self.top,
        };
        serde_json::to_string(&f).expect("model serializes")
    }

    /// The pentagon N5 (0 < a < b < 1, c incomparable) with the complement
    /// 0↔1, a↔c, b↔b. Not modular, hence not an MOL.
    pub fn pentagon() -> FiniteModel {
        let names = ["0", "a", "b", "c", "1"];
        let below = |x: usize, y: usize| {
            x == y || x == 0 || y == 4 || (x == 1 && y == 2)
        };
        FiniteModel {
            elements: names.iter().map(|s| s.to_string()).collect(),
            leq: (0..5).map(|x| (0..5).map(|y| below(x, y)).collect()).collect(),
            ortho: vec![4, 3, 2, 1, 0],
            bottom: 0,
            top: 4,
        }
    }
}

/// A validated finite modular ortholattice.
#[derive(Debug, Clone)]
pub struct Mol {
    model: FiniteModel,
    meet: Vec<usize>,
    join: Vec<usize>,
    height: usize,
}

impl PartialEq for Mol {
    fn eq(&self, other: &Self) -> bool {
        self.model == other.model
    }
}

impl Mol {
    pub fn len(&self) -> usize {
        self.model.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn model(&self) -> &FiniteModel {
        &self.model
    }

    pub fn name(&self, i: usize) -> &str {
        &self.model.elements[i]
    }

    pub fn index_of(&self, name: &str) -> Result<usize, ModelError> {
        self.model
            .elements
            .iter()
            .position(|e| e == name)
            .ok_or_else(|| ModelError::UnknownElement(name.to_string()))
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.len()
    }

    pub fn le(&self, a: usize, b: usize) -> bool {
        self.model.leq[a][b]
    }

    /// Atoms: elements covering the bottom.
    pub fn atoms(&self) -> Vec<usize> {
        let bot = self.model.bottom;
        self.elements()
            .filter(|&x| x != bot)
            .filter(|&x| {
                !self
                    .elements()
                    .any(|y| y != bot && y != x && self.le(y, x))
            })
            .collect()
    }

    fn compute_height(&self) -> usize {
        let n = self.len();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by_key(|&x| (0..n).filter(|&y| self.le(y, x)).count());
        let mut h = vec![0usize; n];
        for (k, &x) in order.iter().enumerate() {
            h[x] = order[..k]
                .iter()
                .filter(|&&y| y != x && self.le(y, x))
                .map(|&y| h[y] + 1)
                .max()
                .unwrap_or(0);
        }
        h[self.model.top]
    }

    /// Length of a longest chain minus one.
    pub fn height(&self) -> usize {
        self.height
    }

    pub fn validate(&self) -> MolReport {
        self.model.validate_inner().0
    }
}

impl Ortholattice for Mol {
    type Elem = usize;

    fn bottom(&self) -> usize {
        self.model.bottom
    }

    fn top(&self) -> usize {
        self.model.top
    }

    fn meet(&self, a: &usize, b: &usize) -> usize {
        self.meet[a * self.len() + b]
    }

    fn join(&self, a: &usize, b: &usize) -> usize {
        self.join[a * self.len() + b]
    }

    fn ortho(&self, a: &usize) -> usize {
        self.model.ortho[*a]
    }

    fn leq(&self, a: &usize, b: &usize) -> bool {
        self.model.leq[*a][*b]
    }
}

pub fn validate_mol(m: &FiniteModel) -> Result<MolReport, ModelError> {
    m.validate()
}

// ---------------------------------------------------------------------------
// Constructions

/// The Boolean algebra 2^n; elements are bit strings, set complement.
pub fn boolean(n: usize) -> Result<Mol, ModelError> {
    if n == 0 {
        return Err(ModelError::BadParameter);
    }
    if n >= usize::BITS as usize || 1usize << n > MAX_MODEL_SIZE {
        return Err(ModelError::TooLarge(1usize.checked_shl(n as u32).unwrap_or(usize::MAX)));
    }
    let size = 1usize << n;
    let full = size - 1;
    FiniteModel {
        elements: (0..size).map(|x| format!("{x:0n$b}")).collect(),
        leq: (0..size)
            .map(|x| (0..size).map(|y| x & y == x).collect())
            .collect(),
        ortho: (0..size).map(|x| full ^ x).collect(),
        bottom: 0,
        top: full,
    }
    .into_mol()
}

/// MO_n: the height-2 MOL with atoms a, a', b, b', ... (n pairs).
pub fn mo(n: usize) -> Result<Mol, ModelError> {
    if n == 0 {
        return Err(ModelError::BadParameter);
    }
    let size = 2 * n + 2;
    if size > MAX_MODEL_SIZE {
        return Err(ModelError::TooLarge(size));
    }
    let top = size - 1;
    let mut elements = vec!["0".to_string()];
    for k in 0..n {
        let base = if n <= 26 {
            ((b'a' + k as u8) as char).to_string()
        } else {
            format!("a{}", k + 1)
        };
        elements.push(base.clone());
        elements.push(format!("{base}'"));
    }
    elements.push("1".to_string());
    let ortho = (0..size)
        .map(|x| match x {
            0 => top,
            x if x == top => 0,
            x if x % 2 == 1 => x + 1,
            x => x - 1,
        })
        .collect();
    FiniteModel {
        elements,
        leq: (0..size)
            .map(|x| (0..size).map(|y| x == y || x == 0 || y == top).collect())
            .collect(),
        ortho,
        bottom: 0,
        top,
    }
    .into_mol()
}

/// The one-element MOL (0 = 1).
pub fn trivial() -> Mol {
    FiniteModel {
        elements: vec!["0".into()],
        leq: vec![vec![true]],
        ortho: vec![0],
        bottom: 0,
        top: 0,
    }
    .into_mol()
    .expect("the trivial lattice is an MOL")
}

/// Catalog lookup: `boolean` or `mo` with a parameter ≥ 1.
pub fn catalog(name: &str, parameter: usize) -> Result<Mol, ModelError> {
    match name {
        "boolean" => boolean(parameter),
        "mo" => mo(parameter),
        other => Err(ModelError::UnknownCatalog(other.to_string())),
    }
}

/// Parses `boolean(3)`, `mo:2` or a product such as `mo(2)xboolean(1)`.
pub fn catalog_spec(spec: &str) -> Result<Mol, ModelError> {
    let mut factors = spec.split('x').map(|part| {
        let part = part.trim();
        let (name, param) = part
            .split_once(':')
            .or_else(|| part.strip_suffix(')').and_then(|p| p.split_once('(')))
            .ok_or_else(|| ModelError::UnknownCatalog(part.to_string()))?;
        let param: usize = param
            .trim()
            .parse()
            .map_err(|_| ModelError::UnknownCatalog(part.to_string()))?;
        catalog(name.trim(), param)
    });
    let first = factors.next().expect("split yields at least one part")?;
    factors.try_fold(first, |acc, m| direct_product(&acc, &m?))
}

/// Componentwise order and complement.
pub fn direct_product(a: &Mol, b: &Mol) -> Result<Mol, ModelError> {
    let (n1, n2) = (a.len(), b.len());
    if n1 * n2 > MAX_MODEL_SIZE {
        return Err(ModelError::TooLarge(n1 * n2));
    }
    let pair = |i: usize, j: usize| i * n2 + j;
    let mut elements = Vec::with_capacity(n1 * n2);
    for i in 0..n1 {
        for j in 0..n2 {
            elements.push(if n2 == 1 {
                a.name(i).to_string()
            } else if n1 == 1 {
                b.name(j).to_string()
            } else {
                format!("({},{})", a.name(i), b.name(j))
            });
        }
    }
    let leq = (0..n1 * n2)
        .map(|x| {
            (0..n1 * n2)
                .map(|y| a.le(x / n2, y / n2) && b.le(x % n2, y % n2))
                .collect()
        })
        .collect();
    let ortho = (0..n1 * n2)
        .map(|x| pair(a.ortho(&(x / n2)), b.ortho(&(x % n2))))
        .collect();
    FiniteModel {
        elements,
        leq,
        ortho,
        bottom: pair(a.bottom(), b.bottom()),
        top: pair(a.top(), b.top()),
    }
    .into_mol()
}

/// The interval `[lower, upper]` with the relative complement
/// `x ↦ (x' * upper) + lower`.
pub fn interval_mol(m: &Mol, lower: usize, upper: usize) -> Result<Mol, ModelError> {
    if !m.le(lower, upper) {
        return Err(ModelError::NotBelow {
            lower: m.name(lower).to_string(),
            upper: m.name(upper).to_string(),
        });
    }
    let members: Vec<usize> = m
        .elements()
        .filter(|&x| m.le(lower, x) && m.le(x, upper))
        .collect();
    let pos = |x: usize| members.iter().position(|&y| y == x).expect("closed under the relative complement");
    let ortho = members
        .iter()
        .map(|&x| pos(m.join(&m.meet(&m.ortho(&x), &upper), &lower)))
        .collect();
    FiniteModel {
        elements: members.iter().map(|&x| m.name(x).to_string()).collect(),
        leq: members
            .iter()
            .map(|&x| members.iter().map(|&y| m.le(x, y)).collect())
            .collect(),
        ortho,
        bottom: pos(lower),
        top: pos(upper),
    }
    .into_mol()
}

pub fn height(m: &Mol) -> usize {
    m.height()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn catalog_models_validate() {
        for n in 1..=4 {
            let b = boolean(n).unwrap();
            assert_eq!(b.len(), 1 << n);
            assert_eq!(b.height(), n);
            assert!(b.validate().usable());
            let m = mo(n).unwrap();
            assert_eq!(m.len(), 2 * n + 2);
            assert_eq!(m.height(), 2);
        }
        assert_eq!(boolean(1).unwrap().model().elements, vec!["0", "1"]);
        assert_eq!(
            mo(2).unwrap().model().elements,
            vec!["0", "a", "a'", "b", "b'", "1"]
        );
        assert_eq!(mo(7).unwrap().height(), 2);
        assert_eq!(boolean(3).unwrap().height(), 3);
        assert!(matches!(catalog("chain", 2), Err(ModelError::UnknownCatalog(_))));
        assert!(matches!(catalog("mo", 0), Err(ModelError::BadParameter)));
        assert!(matches!(boolean(10), Err(ModelError::TooLarge(_))));
    }

    #[test]
    fn pentagon_is_not_modular() {
        let report = FiniteModel::pentagon().validate().unwrap();
        assert!(!report.usable());
        let modular = report.check(Axiom::Modular);
        assert_eq!(modular.status, Status::Fail);
        let w = modular.witness.clone().unwrap();
        assert_eq!(w.len(), 3);
        // the witness must actually violate the law
        let n5 = FiniteModel::pentagon();
        let idx = |s: &String| n5.elements.iter().position(|e| e == s).unwrap();
        let (x, y, z) = (idx(&w[0]), idx(&w[1]), idx(&w[2]));
        assert!(n5.leq[x][z]);
        let (m, j) = (meet_table(&n5.leq).unwrap(), meet_table(&transpose(&n5.leq)).unwrap());
        assert_ne!(j[x * 5 + m[y * 5 + z]], m[j[x * 5 + y] * 5 + z]);
        assert!(matches!(FiniteModel::pentagon().into_mol(), Err(ModelError::NotMol(_))));
    }

    #[test]
    fn malformed_and_failing_tables() {
        let mut m = mo(2).unwrap().model().clone();
        m.ortho[1] = 9;
        assert!(matches!(m.validate(), Err(ModelError::Malformed(_))));
        let mut m = mo(2).unwrap().model().clone();
        m.ortho.swap(1, 3);
        let r = m.validate().unwrap();
        assert_eq!(r.check(Axiom::OrthoInvolution).status, Status::Fail);
        // a 4-element antichain-with-bounds missing a join: two maximal elements
        let m = FiniteModel {
            elements: vec!["0".into(), "p".into(), "q".into()],
            leq: vec![
                vec![true, true, true],
                vec![false, true, false],
                vec![false, false, true],
            ],
            ortho: vec![0, 2, 1],
            bottom: 0,
            top: 1,
        };
        let r = m.validate().unwrap();
        assert_eq!(r.check(Axiom::Lattice).status, Status::Fail);
        assert_eq!(r.check(Axiom::Modular).status, Status::Skipped);
        assert!(FiniteModel::from_json(r#"{"elements":["0"],"leq":[[2]],"ortho":[0],"bottom":0,"top":0}"#).is_err());
    }

    #[test]
    fn json_round_trip() {
        let m = mo(3).unwrap();
        let text = m.model().to_json();
        assert_eq!(FiniteModel::from_json(&text).unwrap(), *m.model());
    }

    #[test]
    fn products() {
        let b1 = boolean(1).unwrap();
        let p = direct_product(&b1, &b1).unwrap();
        let b2 = boolean(2).unwrap();
        assert_eq!(p.len(), 4);
        assert_eq!(p.height(), 2);
        assert_eq!(p.model().leq, b2.model().leq);
        assert_eq!(p.model().ortho, b2.model().ortho);
        let q = direct_product(&mo(2).unwrap(), &b1).unwrap();
        assert_eq!(q.len(), 12);
        assert_eq!(q.height(), 3);
        assert!(q.validate().usable());
        let m = mo(3).unwrap();
        let t = direct_product(&m, &trivial()).unwrap();
        assert_eq!(t, m);
        assert_eq!(catalog_spec("mo(2)xboolean(1)").unwrap(), q);
        assert_eq!(catalog_spec("mo:3").unwrap(), m);
        assert!(catalog_spec("foo(1)").is_err());
    }

    #[test]
    fn intervals() {
        let m = mo(2).unwrap();
        assert_eq!(interval_mol(&m, 0, 5).unwrap(), m);
        let a = m.index_of("a").unwrap();
        let seg = interval_mol(&m, 0, a).unwrap();
        assert_eq!(seg.len(), 2);
        assert_eq!(seg.height(), 1);
        let b3 = boolean(3).unwrap();
        let atom = b3.index_of("001").unwrap();
        let up = interval_mol(&b3, atom, b3.top()).unwrap();
        assert_eq!(up.len(), 4);
        assert_eq!(up.height(), 2);
        let b2 = boolean(2).unwrap();
        // isomorphic to 2^2: same shape of order and complement
        let mut degrees: Vec<usize> = (0..4).map(|x| (0..4).filter(|&y| up.le(y, x)).count()).collect();
        let mut expected: Vec<usize> = (0..4).map(|x| (0..4).filter(|&y| b2.le(y, x)).count()).collect();
        degrees.sort();
        expected.sort();
        assert_eq!(degrees, expected);
        assert!(matches!(
            interval_mol(&m, a, m.index_of("b").unwrap()),
            Err(ModelError::NotBelow { .. })
        ));
    }

    #[test]
    fn every_interval_of_small_models_is_an_mol() {
        for m in [mo(3).unwrap(), boolean(3).unwrap(), direct_product(&mo(2).unwrap(), &boolean(1).unwrap()).unwrap()] {
            for b in m.elements() {
                for c in m.elements().filter(|&c| m.le(b, c)) {
                    let i = interval_mol(&m, b, c).unwrap();
                    assert!(i.validate().usable());
                }
            }
        }
    }

    #[test]
    fn atoms() {
        assert_eq!(mo(2).unwrap().atoms(), vec![1, 2, 3, 4]);
        assert_eq!(boolean(2).unwrap().atoms(), vec![1, 2]);
    }
}
