//! Brute-force checks on finite tables.

use rayon::prelude::*;

use super::eval::{Assignment, Program};
use super::CheckError;
use crate::model::Mol;
use crate::term::Identity;

/// Largest number of assignments [`holds`] enumerates without an explicit cap.
pub const DEFAULT_HOLDS_CAP: u64 = 1 << 26;

const CHUNK: u64 = 1 << 12;

/// A falsifying assignment in a finite model, by element index.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteWitness {
    pub assignment: Assignment<usize>,
    pub lhs: usize,
    pub rhs: usize,
}

impl FiniteWitness {
    /// The assignment with element names in place of indices.
    pub fn named(&self, m: &Mol) -> Assignment<String> {
        self.assignment.map(|&e| m.name(e).to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HoldsReport {
    pub holds: bool,
    pub witness: Option<FiniteWitness>,
    /// Size of the enumerated assignment space.
    pub assignments: u64,
}

/// Whether `id` holds under every assignment into `m`.
///
/// Enumerates all `|m|^k` assignments (k = number of variables) in
/// lexicographic order, variables in first-occurrence order with the last
/// varying fastest; the witness is the first failure in that order.
pub fn holds(id: &Identity, m: &Mol, cap: Option<u64>) -> Result<HoldsReport, CheckError> {
    let domain: Vec<usize> = m.elements().collect();
    search(id, m, &domain, cap.unwrap_or(DEFAULT_HOLDS_CAP))
}

/// Like [`holds`] but with every variable restricted to `subset`.
pub fn test_set_check(
    id: &Identity,
    m: &Mol,
    subset: &[usize],
    cap: Option<u64>,
) -> Result<HoldsReport, CheckError> {
    if let Some(&bad) = subset.iter().find(|&&e| e >= m.len()) {
        return Err(CheckError::NotInModel(bad));
    }
    let mut domain = subset.to_vec();
    domain.sort_unstable();
    domain.dedup();
    search(id, m, &domain, cap.unwrap_or(DEFAULT_HOLDS_CAP))
}

fn search(id: &Identity, m: &Mol, domain: &[usize], cap: u64) -> Result<HoldsReport, CheckError> {
    let program = Program::for_identity(id);
    let k = program.vars().len();
    let total = (domain.len() as u64)
        .checked_pow(k as u32)
        .filter(|&t| t <= cap)
        .ok_or(CheckError::BudgetExceeded {
            elements: domain.len(),
            vars: k,
            cap,
        })?;
    let n = domain.len() as u64;
    let decode = |mut idx: u64, values: &mut [usize]| {
        for slot in values.iter_mut().rev() {
            *slot = domain[(idx % n) as usize];
            idx /= n;
        }
    };
    let chunks = total.div_ceil(CHUNK);
    let failure = (0..chunks).into_par_iter().find_map_first(|c| {
        let mut values = vec![0usize; k];
        let mut regs = Vec::with_capacity(program.size());
        (c * CHUNK..((c + 1) * CHUNK).min(total)).find(|&idx| {
            decode(idx, &mut values);
            !program.run_indices(m, &values, &mut regs)
        })
    });
    let witness = failure.map(|idx| {
        let mut values = vec![0usize; k];
        decode(idx, &mut values);
        let out = program.run(m, &values);
        FiniteWitness {
            assignment: program.vars().iter().cloned().zip(values).collect(),
            lhs: out[0],
            rhs: out[1],
        }
    });
    Ok(HoldsReport {
        holds: witness.is_none(),
        witness,
        assignments: total,
    })
}

/// Searches `m` for an assignment satisfying every equation at once.
pub(crate) fn satisfy_all(
    eqs: &[Identity],
    m: &Mol,
    cap: u64,
) -> Result<Option<Assignment<usize>>, CheckError> {
    let terms: Vec<_> = eqs.iter().flat_map(|e| [&e.lhs, &e.rhs]).collect();
    let program = Program::new(&terms);
    let k = program.vars().len();
    let n = m.len() as u64;
    let total = n
        .checked_pow(k as u32)
        .filter(|&t| t <= cap)
        .ok_or(CheckError::BudgetExceeded {
            elements: m.len(),
            vars: k,
            cap,
        })?;
    let decode = |mut idx: u64, values: &mut [usize]| {
        for slot in values.iter_mut().rev() {
            *slot = (idx % n) as usize;
            idx /= n;
        }
    };
    let chunks = total.div_ceil(CHUNK);
    let found = (0..chunks).into_par_iter().find_map_first(|c| {
        let mut values = vec![0usize; k];
        let mut regs = Vec::with_capacity(program.size());
        (c * CHUNK..((c + 1) * CHUNK).min(total)).find(|&idx| {
            decode(idx, &mut values);
            program.exec_indices(m, &values, &mut regs);
            program
                .roots()
                .chunks(2)
                .all(|pair| regs[pair[0]] == regs[pair[1]])
        })
    });
    Ok(found.map(|idx| {
        let mut values = vec![0usize; k];
        decode(idx, &mut values);
        program.vars().iter().cloned().zip(values).collect()
    }))
}
