//! Penalty minimization of `Σ g²` over the constraints `g = 0`.

use std::collections::{BTreeSet, VecDeque};

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use nalgebra::DMatrix;
use rayon::prelude::*;

use super::encode::{ConstraintKind, PolySystem};
use super::FeasError;

/// Constraints flattened for repeated evaluation.
#[derive(Debug, Clone)]
pub struct Evaluator {
    n: usize,
    constraints: Vec<Vec<(i64, Vec<(usize, u32)>)>>,
}

impl Evaluator {
    pub fn new(sys: &PolySystem) -> Evaluator {
        Evaluator {
            n: sys.vars.len(),
            constraints: sys
                .constraints
                .iter()
                .map(|c| c.poly.terms().to_vec())
                .collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    fn check<T>(&self, x: &[T]) -> Result<(), FeasError> {
        if x.len() != self.n {
            return Err(FeasError::LengthMismatch {
                expected: self.n,
                found: x.len(),
            });
        }
        Ok(())
    }

    fn value<T: Float>(terms: &[(i64, Vec<(usize, u32)>)], x: &[T]) -> T {
        terms.iter().fold(T::zero(), |acc, (c, m)| {
            acc + m.iter().fold(T::from(*c).expect("small coefficient"), |p, &(v, e)| p * x[v].powi(e as i32))
        })
    }

    /// `Σ g(x)²`.
    pub fn residual<T: Float>(&self, x: &[T]) -> Result<T, FeasError> {
        self.check(x)?;
        Ok(self.residual_unchecked(x))
    }

    fn residual_unchecked<T: Float>(&self, x: &[T]) -> T {
        self.constraints.iter().fold(T::zero(), |acc, g| {
            let v = Self::value(g, x);
            acc + v * v
        })
    }

    /// Residual and its gradient `Σ 2 g ∇g`.
    pub fn residual_and_gradient<T: Float>(&self, x: &[T]) -> Result<(T, Vec<T>), FeasError> {
        self.check(x)?;
        let mut grad = vec![T::zero(); self.n];
        let f = self.fill_gradient(x, &mut grad);
        Ok((f, grad))
    }

    fn fill_gradient<T: Float>(&self, x: &[T], grad: &mut [T]) -> T {
        grad.iter_mut().for_each(|g| *g = T::zero());
        let two = T::one() + T::one();
        let mut f = T::zero();
        for g in &self.constraints {
            let v = Self::value(g, x);
            f = f + v * v;
            if v == T::zero() {
                continue;
            }
            let scale = two * v;
            for (c, m) in g {
                let c = T::from(*c).expect("small coefficient");
                for (k, &(var, e)) in m.iter().enumerate() {
                    let mut d = c * T::from(e).expect("small exponent") * x[var].powi(e as i32 - 1);
                    for (l, &(w, f2)) in m.iter().enumerate() {
                        if l != k {
                            d = d * x[w].powi(f2 as i32);
                        }
                    }
                    grad[var] = grad[var] + scale * d;
                }
            }
        }
        f
    }
}

/// `Σ g(x)²` over the constraints of `sys`.
pub fn residual<T: Float>(sys: &PolySystem, x: &[T]) -> Result<T, FeasError> {
    Evaluator::new(sys).residual(x)
}

/// Exact derivative of [`residual`].
pub fn gradient<T: Float>(sys: &PolySystem, x: &[T]) -> Result<Vec<T>, FeasError> {
    Ok(Evaluator::new(sys).residual_and_gradient(x)?.1)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// Limited-memory BFGS directions.
    Lbfgs,
    /// Steepest descent.
    GradientDescent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveParams {
    /// Success threshold on the residual.
    pub tol: f64,
    pub restarts: u64,
    /// Iterations per restart.
    pub max_iters: usize,
    /// Step shrink factor of the backtracking line search.
    pub backtrack: f64,
    /// Restart `r` starts from a point drawn with seed `seed + r`.
    pub seed: u64,
    pub method: Method,
    /// Correction pairs kept by L-BFGS.
    pub memory: usize,
}

impl Default for SolveParams {
    fn default() -> Self {
        SolveParams {
            tol: 1e-9,
            restarts: 32,
            max_iters: 5000,
            backtrack: 0.5,
            seed: 0,
            method: Method::Lbfgs,
            memory: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SolveOutcome {
    Solved {
        point: Vec<f64>,
        residual: f64,
        /// Lowest restart index that succeeded.
        restart: u64,
        iterations: usize,
    },
    Exhausted {
        /// Best point over all restarts.
        point: Vec<f64>,
        residual: f64,
        restarts: u64,
    },
}

impl SolveOutcome {
    pub fn is_solved(&self) -> bool {
        matches!(self, SolveOutcome::Solved { .. })
    }

    pub fn point(&self) -> &[f64] {
        match self {
            SolveOutcome::Solved { point, .. } | SolveOutcome::Exhausted { point, .. } => point,
        }
    }

    pub fn residual(&self) -> f64 {
        match self {
            SolveOutcome::Solved { residual, .. } | SolveOutcome::Exhausted { residual, .. } => *residual,
        }
    }
}

struct Run {
    point: Vec<f64>,
    residual: f64,
    iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn descend(ev: &Evaluator, mut x: Vec<f64>, params: &SolveParams) -> Run {
    let n = x.len();
    let mut g = vec![0.0; n];
    let mut f = ev.fill_gradient(&x, &mut g);
    let mut history: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new();
    let mut g_new = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut it = 0;
    while it < params.max_iters && f >= params.tol {
        it += 1;
        let mut dir: Vec<f64> = g.iter().map(|v| -v).collect();
        if params.method == Method::Lbfgs && !history.is_empty() {
            // two-loop recursion
            let mut alphas = Vec::with_capacity(history.len());
            for (s, y, rho) in history.iter().rev() {
                let a = rho * dot(s, &dir);
                dir.iter_mut().zip(y).for_each(|(q, yi)| *q -= a * yi);
                alphas.push(a);
            }
            let (s, y, _) = history.back().expect("nonempty");
            let gamma = dot(s, y) / dot(y, y);
            dir.iter_mut().for_each(|q| *q *= gamma);
            for ((s, y, rho), a) in history.iter().zip(alphas.iter().rev()) {
                let b = rho * dot(y, &dir);
                dir.iter_mut().zip(s).for_each(|(r, si)| *r += (a - b) * si);
            }
        }
        let mut slope = dot(&g, &dir);
        if slope >= 0.0 {
            history.clear();
            dir = g.iter().map(|v| -v).collect();
            slope = -dot(&g, &g);
        }
        if slope == 0.0 {
            break;
        }
        let mut step = if history.is_empty() {
            (1.0 / (-slope).sqrt()).min(1.0)
        } else {
            1.0
        };
        let accepted = loop {
            x_new.iter_mut().zip(&x).zip(&dir).for_each(|((xn, xi), di)| *xn = xi + step * di);
            let f_new = ev.fill_gradient(&x_new, &mut g_new);
            if f_new.is_finite() && f_new <= f + 1e-4 * step * slope {
                break Some(f_new);
            }
            step *= params.backtrack;
            if step < 1e-20 {
                break None;
            }
        };
        let Some(f_new) = accepted else {
            if history.is_empty() {
                break;
            }
            history.clear();
            continue;
        };
        let s: Vec<f64> = x_new.iter().zip(&x).map(|(a, b)| a - b).collect();
        let y: Vec<f64> = g_new.iter().zip(&g).map(|(a, b)| a - b).collect();
        let sy = dot(&s, &y);
        if params.method == Method::Lbfgs && sy > 1e-16 {
            if history.len() == params.memory.max(1) {
                history.pop_front();
            }
            history.push_back((s, y, 1.0 / sy));
        }
        std::mem::swap(&mut x, &mut x_new);
        std::mem::swap(&mut g, &mut g_new);
        f = f_new;
    }
    Run {
        point: x,
        residual: f,
        iterations: it,
    }
}

// Uniform starts in every coordinate mostly slide into degenerate valleys
// where a join witness grows without bound.
fn start_point(sys: &PolySystem, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let d = sys.d;
    let mut x: Vec<f64> = (0..sys.vars.len()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
    let nodes: BTreeSet<usize> = sys
        .constraints
        .iter()
        .filter(|c| c.kind == ConstraintKind::Idempotent)
        .map(|c| c.node)
        .collect();
    for node in nodes {
        let Ok(idx) = sys.block("p", node) else { continue };
        let k = rng.gen_range(0..=d);
        let mut p = DMatrix::zeros(d, d);
        if k > 0 {
            let a = DMatrix::from_fn(d, k, |_, _| rng.gen_range(-1.0..=1.0));
            let q = a.qr().q();
            p = &q * q.transpose();
        }
        for (slot, v) in idx.iter().zip(p.transpose().iter()) {
            x[*slot] = *v;
        }
    }
    x
}

/// A single descent from `start`.
pub fn refine(sys: &PolySystem, start: &[f64], params: &SolveParams) -> Result<SolveOutcome, FeasError> {
    let ev = Evaluator::new(sys);
    ev.check(start)?;
    let run = descend(&ev, start.to_vec(), params);
    Ok(if run.residual < params.tol {
        SolveOutcome::Solved {
            point: run.point,
            residual: run.residual,
            restart: 0,
            iterations: run.iterations,
        }
    } else {
        SolveOutcome::Exhausted {
            point: run.point,
            residual: run.residual,
            restarts: 1,
        }
    })
}

/// Multi-restart descent on the residual. Projection blocks start as random
/// orthogonal projections, everything else uniform in [−1, 1].
/// Restarts run in parallel; the result depends only on `params`.
pub fn penalty_solve(sys: &PolySystem, params: &SolveParams) -> SolveOutcome {
    let ev = Evaluator::new(sys);
    let runs: Vec<Run> = (0..params.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(params.seed.wrapping_add(r));
            descend(&ev, start_point(sys, &mut rng), params)
        })
        .collect();
    if let Some((r, run)) = runs.iter().enumerate().find(|(_, run)| run.residual < params.tol) {
        return SolveOutcome::Solved {
            point: run.point.clone(),
            residual: run.residual,
            restart: r as u64,
            iterations: run.iterations,
        };
    }
    let best = runs
        .into_iter()
        .reduce(|a, b| if b.residual < a.residual { b } else { a });
    match best {
        Some(run) => SolveOutcome::Exhausted {
            point: run.point,
            residual: run.residual,
            restarts: params.restarts,
        },
        None => SolveOutcome::Exhausted {
            point: vec![0.0; ev.len()],
            residual: ev.residual_unchecked(&vec![0.0; ev.len()]),
            restarts: 0,
        },
    }
}
