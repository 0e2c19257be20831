//! Randomized exact refutation in L(F^d).

use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::eval::{eval_identity, Assignment, Program};
use super::CheckError;
use crate::field::{Field, FieldTag};
use crate::subspace::{random_subspace_with, Subspace, SubspaceLattice};
use crate::term::Identity;

const CHUNK: u64 = 8;

#[derive(Debug, Clone, PartialEq)]
pub struct RefuteConfig {
    /// Trials at dimension d in [`refute_bounded`] are `base_trials * 2^d`.
    pub base_trials: u64,
    /// Upper limit on trials per dimension in [`refute_bounded`].
    pub max_trials_per_dim: u64,
    /// Probability that a variable is drawn as an atom or coatom rather
    /// than with a uniform dimension.
    pub atom_bias: f64,
}

impl Default for RefuteConfig {
    fn default() -> Self {
        RefuteConfig {
            base_trials: 64,
            max_trials_per_dim: 1 << 14,
            atom_bias: 0.2,
        }
    }
}

impl RefuteConfig {
    pub fn trials_for(&self, d: usize) -> u64 {
        let scaled = self.base_trials.saturating_mul(1u64.checked_shl(d as u32).unwrap_or(u64::MAX));
        scaled.min(self.max_trials_per_dim)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    ValidUpToBudget,
    Refuted,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::ValidUpToBudget => "valid-up-to-budget",
            Verdict::Refuted => "refuted",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SubspaceWitness<F: Field> {
    pub d: usize,
    /// Trial index within the dimension.
    pub trial: u64,
    /// The seed the assignment was drawn from: search seed + trial.
    pub trial_seed: u64,
    pub assignment: Assignment<Subspace<F>>,
    pub lhs: Subspace<F>,
    pub rhs: Subspace<F>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SearchStats {
    /// Trials evaluated, up to and including the witness.
    pub trials: u64,
    pub seed: u64,
    /// Dimensions visited, in order.
    pub dims: Vec<usize>,
    pub elapsed: Duration,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RefutationReport<F: Field> {
    pub identity: Identity,
    pub field: FieldTag,
    pub status: Verdict,
    pub witness: Option<SubspaceWitness<F>>,
    pub stats: SearchStats,
    /// The dimension bound of [`refute_bounded`]; `None` for a single
    /// dimension search.
    pub bound: Option<usize>,
}

impl<F: Field> RefutationReport<F> {
    pub fn is_refuted(&self) -> bool {
        self.status == Verdict::Refuted
    }

    /// Re-evaluates the witness exactly and replays its trial seed; true
    /// when there is no witness.
    pub fn verify(&self, config: &RefuteConfig) -> Result<bool, CheckError> {
        let Some(w) = &self.witness else {
            return Ok(true);
        };
        let lat = SubspaceLattice::<F>::canonical(w.d)?;
        let (lhs, rhs) = eval_identity(&lat, &self.identity, &w.assignment)?;
        let replayed = replay::<F>(&self.identity, w.d, w.trial_seed, config)?;
        Ok(lhs != rhs && lhs == w.lhs && rhs == w.rhs && replayed.0 == w.assignment)
    }
}

/// Draws one value per variable in L(F^d) from `trial_seed`.
pub fn sample_assignment<F: Field>(
    vars: &[String],
    d: usize,
    trial_seed: u64,
    config: &RefuteConfig,
) -> Vec<Subspace<F>> {
    let mut rng = ChaCha8Rng::seed_from_u64(trial_seed);
    vars.iter()
        .map(|_| {
            let k = if rng.gen_bool(config.atom_bias) {
                if rng.gen_bool(0.5) {
                    1
                } else {
                    d - 1
                }
            } else {
                rng.gen_range(0..=d)
            };
            random_subspace_with(&mut rng, d, k)
        })
        .collect()
}

/// Regenerates the assignment of one trial and evaluates both sides.
pub fn replay<F: Field>(
    id: &Identity,
    d: usize,
    trial_seed: u64,
    config: &RefuteConfig,
) -> Result<(Assignment<Subspace<F>>, Subspace<F>, Subspace<F>), CheckError> {
    if d == 0 {
        return Err(CheckError::InvalidDimension(d));
    }
    let lat = SubspaceLattice::<F>::canonical(d)?;
    let program = Program::for_identity(id);
    let values = sample_assignment::<F>(program.vars(), d, trial_seed, config);
    let mut out = program.run(&lat, &values);
    let rhs = out.pop().expect("two roots");
    let lhs = out.pop().expect("two roots");
    Ok((program.vars().iter().cloned().zip(values).collect(), lhs, rhs))
}

fn search_dim<F: Field>(
    program: &Program,
    lat: &SubspaceLattice<F>,
    trials: u64,
    seed: u64,
    config: &RefuteConfig,
) -> Option<SubspaceWitness<F>> {
    let d = lat.dim();
    let chunks = trials.div_ceil(CHUNK);
    (0..chunks).into_par_iter().find_map_first(|c| {
        (c * CHUNK..((c + 1) * CHUNK).min(trials)).find_map(|trial| {
            let trial_seed = seed.wrapping_add(trial);
            let values = sample_assignment::<F>(program.vars(), d, trial_seed, config);
            let mut out = program.run(lat, &values);
            let rhs = out.pop().expect("two roots");
            let lhs = out.pop().expect("two roots");
            (lhs != rhs).then(|| SubspaceWitness {
                d,
                trial,
                trial_seed,
                assignment: program.vars().iter().cloned().zip(values).collect(),
                lhs,
                rhs,
            })
        })
    })
}

/// Up to `trials` random assignments in L(F^d) with the canonical form;
/// trial `t` draws from seed `seed + t` and the lowest failing trial wins.
pub fn refute_random<F: Field>(
    id: &Identity,
    d: usize,
    trials: u64,
    seed: u64,
    config: &RefuteConfig,
) -> Result<RefutationReport<F>, CheckError> {
    if d == 0 {
        return Err(CheckError::InvalidDimension(d));
    }
    let start = Instant::now();
    let lat = SubspaceLattice::<F>::canonical(d)?;
    let program = Program::for_identity(id);
    let witness = search_dim(&program, &lat, trials, seed, config);
    Ok(report(id, witness, trials, seed, vec![d], None, start))
}

/// Searches d = 1, 2, … up to `D = min(cap, len(lhs) + len(rhs))` with
/// [`RefuteConfig::trials_for`] trials each, stopping at the first witness.
pub fn refute_bounded<F: Field>(
    id: &Identity,
    cap: Option<usize>,
    seed: u64,
    config: &RefuteConfig,
) -> Result<RefutationReport<F>, CheckError> {
    let start = Instant::now();
    let length = id.lhs.len() + id.rhs.len();
    let bound = cap.map_or(length, |c| c.min(length));
    let program = Program::for_identity(id);
    let mut trials = 0;
    let mut dims = vec![];
    for d in 1..=bound {
        let lat = SubspaceLattice::<F>::canonical(d)?;
        let budget = config.trials_for(d);
        dims.push(d);
        if let Some(w) = search_dim(&program, &lat, budget, seed, config) {
            trials += w.trial + 1;
            return Ok(report(id, Some(w), trials, seed, dims, Some(bound), start));
        }
        trials += budget;
    }
    Ok(report(id, None, trials, seed, dims, Some(bound), start))
}

fn report<F: Field>(
    id: &Identity,
    witness: Option<SubspaceWitness<F>>,
    budget: u64,
    seed: u64,
    dims: Vec<usize>,
    bound: Option<usize>,
    start: Instant,
) -> RefutationReport<F> {
    let trials = match (&witness, bound) {
        (Some(w), None) => w.trial + 1,
        _ => budget,
    };
    RefutationReport {
        identity: id.clone(),
        field: F::tag(),
        status: if witness.is_some() {
            Verdict::Refuted
        } else {
            Verdict::ValidUpToBudget
        },
        witness,
        stats: SearchStats {
            trials,
            seed,
            dims,
            elapsed: start.elapsed(),
        },
        bound,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::delta_distributive;
    use crate::term::parse_identity;
    use crate::{GaussRational, Rational};

    type Q = Rational;

    fn dist() -> Identity {
        parse_identity("x*(y+z) = x*y + x*z").unwrap()
    }

    #[test]
    fn distributivity_fails_in_the_plane() {
        let cfg = RefuteConfig::default();
        let r = refute_random::<Q>(&dist(), 2, 100, 1, &cfg).unwrap();
        assert!(r.is_refuted());
        let w = r.witness.as_ref().unwrap();
        assert!(w.assignment.iter().all(|(_, s)| s.dim() == 1));
        let lines: Vec<_> = w.assignment.iter().map(|(_, s)| s.clone()).collect();
        assert!(lines[0] != lines[1] && lines[1] != lines[2] && lines[0] != lines[2]);
        assert!(r.verify(&cfg).unwrap());
        assert_eq!(r.stats.trials, w.trial + 1);
    }

    #[test]
    fn laws_survive() {
        let cfg = RefuteConfig::default();
        let id = parse_identity("x = x''").unwrap();
        for d in 1..=3 {
            let r = refute_random::<Q>(&id, d, 50, 7, &cfg).unwrap();
            assert_eq!(r.status, Verdict::ValidUpToBudget);
            assert_eq!(r.stats.trials, 50);
            let r = refute_random::<GaussRational>(&id, d, 20, 7, &cfg).unwrap();
            assert_eq!(r.status, Verdict::ValidUpToBudget);
        }
        assert_eq!(
            refute_random::<Q>(&id, 0, 1, 0, &cfg).unwrap_err(),
            CheckError::InvalidDimension(0)
        );
    }

    #[test]
    fn isotropic_prime_field_is_rejected() {
        let cfg = RefuteConfig::default();
        let err = refute_random::<crate::Gf<5>>(&dist(), 2, 10, 0, &cfg).unwrap_err();
        assert!(matches!(err, CheckError::Subspace(_)));
    }

    #[test]
    fn bounded_search() {
        let cfg = RefuteConfig::default();
        let r = refute_bounded::<Q>(&dist(), None, 0, &cfg).unwrap();
        assert!(r.is_refuted());
        assert_eq!(r.witness.as_ref().unwrap().d, 2);
        assert_eq!(r.bound, Some(dist().lhs.len() + dist().rhs.len()));
        assert_eq!(r.stats.dims, vec![1, 2]);
        assert!(r.verify(&cfg).unwrap());

        let r = refute_bounded::<Q>(&parse_identity("1 = 1").unwrap(), None, 0, &cfg).unwrap();
        assert_eq!(r.status, Verdict::ValidUpToBudget);
        assert_eq!(r.bound, Some(2));
        assert_eq!(r.stats.dims, vec![1, 2]);
        assert_eq!(r.stats.trials, cfg.trials_for(1) + cfg.trials_for(2));

        let r = refute_bounded::<Q>(&dist(), Some(1), 0, &cfg).unwrap();
        assert_eq!(r.status, Verdict::ValidUpToBudget);
        assert_eq!(r.stats.dims, vec![1]);
    }

    #[test]
    fn delta2_needs_three_dimensions() {
        let cfg = RefuteConfig::default();
        let id = delta_distributive(2).unwrap();
        let r = refute_bounded::<Q>(&id, None, 3, &cfg).unwrap();
        assert!(r.is_refuted());
        let w = r.witness.as_ref().unwrap();
        assert_eq!(w.d, 3);
        assert!(r.stats.dims.iter().all(|&d| d <= r.bound.unwrap()));
        assert!(r.verify(&cfg).unwrap());
    }

    #[test]
    fn replay_is_deterministic() {
        let cfg = RefuteConfig::default();
        let a = replay::<Q>(&dist(), 3, 42, &cfg).unwrap();
        let b = replay::<Q>(&dist(), 3, 42, &cfg).unwrap();
        assert_eq!(a, b);
        let r1 = refute_random::<Q>(&dist(), 3, 200, 9, &cfg).unwrap();
        let r2 = refute_random::<Q>(&dist(), 3, 200, 9, &cfg).unwrap();
        assert_eq!(r1.witness, r2.witness);
    }
}
