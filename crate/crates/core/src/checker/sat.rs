//! Bounded search for solutions of equation systems.

use std::fmt;

use rayon::prelude::*;

use super::eval::{Assignment, Program};
use super::finite::satisfy_all;
use super::refute::{sample_assignment, RefuteConfig};
use super::CheckError;
use crate::field::Field;
use crate::model::catalog_spec;
use crate::subspace::{Subspace, SubspaceLattice};
use crate::term::Identity;

/// Finite models tried first, in order.
pub const SAT_CATALOG: &[&str] = &[
    "boolean(1)",
    "boolean(2)",
    "mo(2)",
    "boolean(3)",
    "mo(3)",
    "mo(4)",
    "mo(2)xboolean(1)",
];

#[derive(Debug, Clone, PartialEq)]
pub struct SatConfig {
    /// Largest d searched in L(F^d).
    pub dcap: usize,
    /// Random assignments per dimension.
    pub trials: u64,
    pub seed: u64,
    /// Assignment budget per finite model; larger models are skipped.
    pub finite_cap: u64,
    pub sampling: RefuteConfig,
}

impl Default for SatConfig {
    fn default() -> Self {
        SatConfig {
            dcap: 3,
            trials: 256,
            seed: 0,
            finite_cap: 1 << 22,
            sampling: RefuteConfig::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SatWitness<F: Field> {
    Finite {
        model: String,
        /// Element names.
        assignment: Assignment<String>,
    },
    Subspace {
        d: usize,
        trial_seed: u64,
        assignment: Assignment<Subspace<F>>,
    },
}

#[derive(Debug, Clone, PartialEq)]
pub struct SatReport<F: Field> {
    pub equations: Vec<Identity>,
    pub found: Option<SatWitness<F>>,
    /// Models searched in order: catalog names, then `F^d`.
    pub searched: Vec<String>,
    /// Catalog models skipped for exceeding the finite budget.
    pub skipped: Vec<String>,
}

impl<F: Field> fmt::Display for SatReport<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.found {
            None => write!(f, "not found within budget (searched {})", self.searched.join(", ")),
            Some(SatWitness::Finite { model, assignment }) => {
                write!(f, "found in {model}:")?;
                for (v, e) in assignment.iter() {
                    write!(f, " {v}={e}")?;
                }
                Ok(())
            }
            Some(SatWitness::Subspace { d, assignment, .. }) => {
                write!(f, "found in L({}^{d}):", F::tag())?;
                for (v, s) in assignment.iter() {
                    write!(f, " {v}={s}")?;
                }
                Ok(())
            }
        }
    }
}

/// Looks for one assignment satisfying every equation, first in the
/// [`SAT_CATALOG`] models by brute force, then by random sampling in
/// L(F^d) for d = 1..=dcap. Every model searched has bottom ≠ top.
/// A miss only means none was found within the budget.
pub fn satisfiable_bounded<F: Field>(
    eqs: &[Identity],
    config: &SatConfig,
) -> Result<SatReport<F>, CheckError> {
    let mut report = SatReport {
        equations: eqs.to_vec(),
        found: None,
        searched: vec![],
        skipped: vec![],
    };
    for name in SAT_CATALOG {
        let m = catalog_spec(name).expect("catalog names are valid");
        match satisfy_all(eqs, &m, config.finite_cap) {
            Ok(found) => {
                report.searched.push(name.to_string());
                if let Some(a) = found {
                    report.found = Some(SatWitness::Finite {
                        model: name.to_string(),
                        assignment: a.map(|&e| m.name(e).to_string()),
                    });
                    return Ok(report);
                }
            }
            Err(CheckError::BudgetExceeded { .. }) => report.skipped.push(name.to_string()),
            Err(e) => return Err(e),
        }
    }
    let terms: Vec<_> = eqs.iter().flat_map(|e| [&e.lhs, &e.rhs]).collect();
    let program = Program::new(&terms);
    for d in 1..=config.dcap {
        let lat = SubspaceLattice::<F>::canonical(d)?;
        report.searched.push(format!("{}^{d}", F::tag()));
        let hit = (0..config.trials).into_par_iter().find_map_first(|trial| {
            let trial_seed = config.seed.wrapping_add(trial);
            let values = sample_assignment::<F>(program.vars(), d, trial_seed, &config.sampling);
            let out = program.run(&lat, &values);
            out.chunks(2)
                .all(|pair| pair[0] == pair[1])
                .then_some((trial_seed, values))
        });
        if let Some((trial_seed, values)) = hit {
            report.found = Some(SatWitness::Subspace {
                d,
                trial_seed,
                assignment: program.vars().iter().cloned().zip(values).collect(),
            });
            return Ok(report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::checker::eval::eval_identity;
    use crate::term::parse_identity;
    use crate::Rational;

    fn eqs(texts: &[&str]) -> Vec<Identity> {
        texts.iter().map(|t| parse_identity(t).unwrap()).collect()
    }

    #[test]
    fn self_complementary_element_is_impossible() {
        let cfg = SatConfig {
            trials: 64,
            ..SatConfig::default()
        };
        let r = satisfiable_bounded::<Rational>(&eqs(&["x = x'"]), &cfg).unwrap();
        assert!(r.found.is_none());
        assert!(r.to_string().starts_with("not found within budget"));
        assert_eq!(r.searched.len(), SAT_CATALOG.len() + 3);
    }

    #[test]
    fn complements_are_found() {
        let r = satisfiable_bounded::<Rational>(&eqs(&["x*y = 0", "x+y = 1", "x = y'"]), &SatConfig::default())
            .unwrap();
        match r.found {
            Some(SatWitness::Finite { model, assignment }) => {
                assert_eq!(model, "boolean(1)");
                assert_eq!(assignment.get("x").unwrap(), "0");
                assert_eq!(assignment.get("y").unwrap(), "1");
            }
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn falls_through_to_subspaces() {
        // A 3-diamond: none of the catalog models has one, L(Q^3) does.
        let system = eqs(&[
            "z0*(z1+z2) = 0",
            "z1*(z0+z2) = 0",
            "z2*(z0+z1) = 0",
            "z3*(z0+z1) = 0",
            "z3*(z1+z2) = 0",
            "z3*(z0+z2) = 0",
            "z0*(z1+z3) = 0",
            "z1*(z2+z3) = 0",
            "z2*(z0+z3) = 0",
            "z0*(z2+z3) = 0",
            "z1*(z0+z3) = 0",
            "z2*(z1+z3) = 0",
            "z0+z1+z2 = 1",
            "z0+z1+z3 = 1",
            "z0+z2+z3 = 1",
            "z1+z2+z3 = 1",
        ]);
        let cfg = SatConfig {
            trials: 4096,
            ..SatConfig::default()
        };
        let r = satisfiable_bounded::<Rational>(&system, &cfg).unwrap();
        match &r.found {
            Some(SatWitness::Subspace { d, assignment, .. }) => {
                assert_eq!(*d, 3);
                let lat = SubspaceLattice::<Rational>::canonical(3).unwrap();
                for e in &system {
                    let (l, rr) = eval_identity(&lat, e, assignment).unwrap();
                    assert_eq!(l, rr);
                }
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
