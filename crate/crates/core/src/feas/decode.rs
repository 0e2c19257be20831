//! Between numeric points and exact subspace assignments.

use nalgebra::DMatrix;
use num_traits::{One, ToPrimitive, Zero};

use super::encode::{encode, Dag, Node, PolySystem};
use super::solve::Evaluator;
use super::FeasError;
use crate::checker::{eval_identity, Assignment};
use crate::lattice::Ortholattice;
use crate::subspace::{realify, rref_in_place, Subspace, SubspaceLattice};
use crate::term::Identity;
use crate::{GaussRational, Rational};

/// Largest denominator produced when rounding matrix entries.
pub const DENOMINATOR_CAP: i64 = 10_000;

/// Best rational approximation of `x` with denominator at most `cap`, by
/// continued fractions.
fn approximate(x: f64, cap: i64) -> Rational {
    let (mut h0, mut h1) = (0i128, 1i128);
    let (mut k0, mut k1) = (1i128, 0i128);
    let mut r = x;
    loop {
        let a = r.floor();
        if a.abs() > 1e15 {
            break;
        }
        let a = a as i128;
        let (h2, k2) = (a * h1 + h0, a * k1 + k0);
        if k2 > cap as i128 {
            break;
        }
        (h0, h1, k0, k1) = (h1, h2, k1, k2);
        let frac = r - r.floor();
        if frac < 1e-12 {
            break;
        }
        r = 1.0 / frac;
    }
    if k1 == 0 {
        return Rational::from_integer(0.into());
    }
    Rational::new((h1 as i64).into(), (k1 as i64).into())
}

/// Reduced row echelon form with partial pivoting; entries below `eps` in
/// absolute value count as zero.
fn float_rref(mut rows: Vec<Vec<f64>>, eps: f64) -> Vec<Vec<f64>> {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for col in 0..ncols {
        if rank == rows.len() {
            break;
        }
        let (p, best) = (rank..rows.len())
            .map(|r| (r, rows[r][col].abs()))
            .fold((rank, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
        if best < eps {
            continue;
        }
        rows.swap(rank, p);
        let piv = rows[rank][col];
        rows[rank].iter_mut().for_each(|x| *x /= piv);
        let pivot_row = rows[rank].clone();
        for (r, row) in rows.iter_mut().enumerate() {
            if r != rank {
                let f = row[col];
                row.iter_mut().zip(&pivot_row).for_each(|(x, p)| *x -= f * p);
            }
        }
        rank += 1;
    }
    rows.truncate(rank);
    rows
}

/// Column space of a numeric projection block, rounded to Q^d.
fn decode_block(values: &[f64], d: usize) -> Subspace<Rational> {
    let p = DMatrix::from_row_slice(d, d, values);
    let sym = (&p + p.transpose()) * 0.5;
    let eig = sym.symmetric_eigen();
    let rows: Vec<Vec<f64>> = (0..d)
        .filter(|&k| eig.eigenvalues[k] > 0.5)
        .map(|k| eig.eigenvectors.column(k).iter().copied().collect())
        .collect();
    if rows.is_empty() {
        return Subspace::zero(d);
    }
    let exact: Vec<Vec<Rational>> = float_rref(rows, 1e-8)
        .into_iter()
        .map(|row| row.into_iter().map(|x| approximate(x, DENOMINATOR_CAP)).collect())
        .collect();
    Subspace::from_rows(exact, d).expect("rows have length d")
}

/// Decodes the variable blocks of a numeric solution into subspaces of
/// Q^d and checks the identity exactly. Returns the assignment only when it
/// really falsifies `id`.
pub fn rationalize_and_verify(
    sys: &PolySystem,
    point: &[f64],
    id: &Identity,
    tol: f64,
) -> Result<Option<Assignment<Subspace<Rational>>>, FeasError> {
    let res = Evaluator::new(sys).residual(point)?;
    if !(res < tol) {
        return Err(FeasError::NotASolution { residual: res, tol });
    }
    let vars = id.vars();
    if sys.leaves.iter().any(|(v, _)| !vars.contains(v)) {
        return Err(FeasError::SystemMismatch(sys.d));
    }
    let d = sys.d;
    let mut a = Assignment::new();
    for v in &vars {
        let s = match sys.leaves.iter().find(|(w, _)| w == v) {
            Some(&(_, node)) => {
                let idx = sys.block("p", node)?;
                let vals: Vec<f64> = idx.iter().map(|&i| point[i]).collect();
                decode_block(&vals, d)
            }
            // simplified away: any value will do
            None => Subspace::zero(d),
        };
        a.bind(v.clone(), s);
    }
    let lat = SubspaceLattice::<Rational>::canonical(d).map_err(crate::checker::CheckError::from)?;
    let (lhs, rhs) = eval_identity(&lat, id, &a)?;
    Ok((lhs != rhs).then_some(a))
}

type QMatrix = Vec<Vec<Rational>>;

/// Orthogonal projection onto `u`: `Bᵀ (B Bᵀ)⁻¹ B` for a basis `B`.
fn projection(u: &Subspace<Rational>) -> QMatrix {
    let d = u.ambient();
    let b = u.basis();
    let k = b.len();
    let mut aug: QMatrix = (0..k)
        .map(|i| {
            let gram = (0..k).map(|j| {
                b[i].iter().zip(&b[j]).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
            });
            gram.chain(b[i].iter().cloned()).collect()
        })
        .collect();
    rref_in_place(&mut aug, k + d);
    (0..d)
        .map(|r| {
            (0..d)
                .map(|c| (0..k).fold(Rational::zero(), |acc, i| acc + &b[i][r] * &aug[i][k + c]))
                .collect()
        })
        .collect()
}

/// Some `X`, `Y` with `A X + B Y = J`.
fn factor(a: &QMatrix, b: &QMatrix, j: &QMatrix) -> (QMatrix, QMatrix) {
    let d = a.len();
    let mut aug: QMatrix = (0..d)
        .map(|r| a[r].iter().chain(&b[r]).chain(&j[r]).cloned().collect())
        .collect();
    let pivots = rref_in_place(&mut aug, 3 * d);
    let mut z = vec![vec![Rational::zero(); d]; 2 * d];
    for (row, &pc) in aug.iter().zip(&pivots) {
        assert!(pc < 2 * d, "J lies in the span of A and B");
        z[pc] = row[2 * d..].to_vec();
    }
    let y = z.split_off(d);
    (z, y)
}

/// Numeric point of `sys` built from an exact falsifying assignment: the
/// projections of every node, exact factor witnesses and a unit vector in
/// the complement of the root.
pub fn inject(
    sys: &PolySystem,
    id: &Identity,
    a: &Assignment<Subspace<Rational>>,
) -> Result<Vec<f64>, FeasError> {
    let d = sys.d;
    if encode(id, d)? != *sys {
        return Err(FeasError::SystemMismatch(d));
    }
    let lat = SubspaceLattice::<Rational>::canonical(d).map_err(crate::checker::CheckError::from)?;
    let dag = Dag::of_identity(id);
    let mut values: Vec<Subspace<Rational>> = Vec::with_capacity(dag.nodes.len());
    for node in &dag.nodes {
        let v = match node {
            Node::Var(name) => a
                .get(name)
                .cloned()
                .ok_or_else(|| crate::checker::EvalError::Unbound(name.clone()))?,
            Node::Zero => lat.bottom(),
            Node::One => lat.top(),
            Node::Comp(c) => lat.ortho(&values[*c]),
            Node::Join(l, r) => lat.join(&values[*l], &values[*r]),
        };
        if v.ambient() != d {
            return Err(FeasError::SystemMismatch(d));
        }
        values.push(v);
    }
    let projs: Vec<QMatrix> = values.iter().map(projection).collect();
    let mut point = vec![0.0; sys.vars.len()];
    let mut fill = |prefix: &str, node: usize, m: &QMatrix| -> Result<(), FeasError> {
        for (k, idx) in sys.block(prefix, node)?.into_iter().enumerate() {
            point[idx] = m[k / d][k % d].to_f64().expect("finite");
        }
        Ok(())
    };
    for (n, node) in dag.nodes.iter().enumerate() {
        match node {
            Node::Var(_) => fill("p", n, &projs[n])?,
            Node::Join(l, r) => {
                fill("p", n, &projs[n])?;
                let (x, y) = factor(&projs[*l], &projs[*r], &projs[n]);
                fill("x", n, &x)?;
                fill("y", n, &y)?;
            }
            _ => {}
        }
    }
    let root = &projs[dag.root];
    let column = |c: usize| -> Vec<f64> {
        (0..d)
            .map(|r| {
                let delta = if r == c { Rational::one() } else { Rational::zero() };
                (delta - &root[r][c]).to_f64().expect("finite")
            })
            .collect()
    };
    let w = (0..d)
        .map(column)
        .max_by(|x, y| {
            let nx: f64 = x.iter().map(|v| v * v).sum();
            let ny: f64 = y.iter().map(|v| v * v).sum();
            nx.total_cmp(&ny)
        })
        .expect("d >= 1");
    let norm = w.iter().map(|v| v * v).sum::<f64>().sqrt();
    if norm < 1e-12 {
        return Err(FeasError::NotARefutation);
    }
    for (i, wi) in w.iter().enumerate() {
        let idx = sys.var_index(&format!("v_{i}")).ok_or_else(|| FeasError::UnknownVariable(format!("v_{i}")))?;
        point[idx] = wi / norm;
    }
    Ok(point)
}

/// Image of a Q(i)^d assignment in Q^{2d} under the real structure.
pub fn realify_assignment(a: &Assignment<Subspace<GaussRational>>) -> Assignment<Subspace<Rational>> {
    a.map(realify)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::feas::solve::residual;
    use crate::term::parse_identity;

    fn dist() -> Identity {
        parse_identity("x*(y+z) = x*y + x*z").unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn continued_fractions() {
        assert_eq!(approximate(0.75, 100), q(3, 4));
        assert_eq!(approximate(-1.5, 100), q(-3, 2));
        assert_eq!(approximate(1.0 / 3.0 + 1e-12, DENOMINATOR_CAP), q(1, 3));
        assert_eq!(approximate(std::f64::consts::PI, 1000), q(355, 113));
        assert_eq!(approximate(0.0, 10), q(0, 1));
    }

    #[test]
    fn projections_are_exact() {
        let u = Subspace::<Rational>::span_ints(&[&[1, 1]]);
        let p = projection(&u);
        assert_eq!(p, vec![vec![q(1, 2), q(1, 2)], vec![q(1, 2), q(1, 2)]]);
        let z = projection(&Subspace::zero(2));
        assert!(z.iter().flatten().all(|x| x.is_zero()));
        let vals: Vec<f64> = p.iter().flatten().map(|x| x.to_f64().unwrap()).collect();
        assert_eq!(decode_block(&vals, 2), u);
    }

    #[test]
    fn injected_witness_is_a_solution() {
        let sys = encode(&dist(), 2).unwrap();
        let a = Assignment::new()
            .with("x", Subspace::span_ints(&[&[1, 1]]))
            .with("y", Subspace::span_ints(&[&[1, 0]]))
            .with("z", Subspace::span_ints(&[&[0, 1]]));
        let point = inject(&sys, &dist(), &a).unwrap();
        assert!(residual(&sys, &point).unwrap() < 1e-20);
        let back = rationalize_and_verify(&sys, &point, &dist(), 1e-9).unwrap().unwrap();
        for (v, s) in a.iter() {
            assert_eq!(back.get(v), Some(s));
        }
    }

    #[test]
    fn non_refuting_assignment_is_rejected() {
        let sys = encode(&dist(), 2).unwrap();
        let a = Assignment::new()
            .with("x", Subspace::span_ints(&[&[1, 1]]))
            .with("y", Subspace::span_ints(&[&[1, 0]]))
            .with("z", Subspace::span_ints(&[&[1, 0]]));
        assert_eq!(inject(&sys, &dist(), &a), Err(FeasError::NotARefutation));
        let other = encode(&dist(), 3).unwrap();
        assert_eq!(inject(&other, &parse_identity("x = x'").unwrap(), &a), Err(FeasError::SystemMismatch(3)));
    }

    #[test]
    fn perturbed_point_violates_precondition() {
        let sys = encode(&dist(), 2).unwrap();
        let a = Assignment::new()
            .with("x", Subspace::span_ints(&[&[1, 1]]))
            .with("y", Subspace::span_ints(&[&[1, 0]]))
            .with("z", Subspace::span_ints(&[&[0, 1]]));
        let mut point = inject(&sys, &dist(), &a).unwrap();
        point[0] += 0.2;
        assert!(matches!(
            rationalize_and_verify(&sys, &point, &dist(), 1e-9),
            Err(FeasError::NotASolution { .. })
        ));
    }

    #[test]
    fn collapsed_decode_is_absent() {
        // a genuine numeric solution of the system, but with the blocks of
        // y and z both set to the same line the decoded assignment no longer
        // refutes; rationalization must say so rather than return it
        let sys = encode(&dist(), 2).unwrap();
        let a = Assignment::new()
            .with("x", Subspace::span_ints(&[&[1, 1]]))
            .with("y", Subspace::span_ints(&[&[1, 0]]))
            .with("z", Subspace::span_ints(&[&[0, 1]]));
        let mut point = inject(&sys, &dist(), &a).unwrap();
        let (y, z) = (sys.leaves[1].1, sys.leaves[2].1);
        let (yb, zb) = (sys.block("p", y).unwrap(), sys.block("p", z).unwrap());
        for (i, j) in yb.iter().zip(&zb) {
            point[*j] = point[*i];
        }
        let tol = residual(&sys, &point).unwrap() + 1.0;
        assert_eq!(rationalize_and_verify(&sys, &point, &dist(), tol).unwrap(), None);
    }

    #[test]
    fn gaussian_witness_realifies() {
        let i = GaussRational::new(q(0, 1), q(1, 1));
        let one = GaussRational::one();
        let zero = GaussRational::zero();
        let line = |a: GaussRational, b: GaussRational| Subspace::from_rows(vec![vec![a, b]], 2).unwrap();
        let a = Assignment::new()
            .with("x", line(one.clone(), i.clone()))
            .with("y", line(one.clone(), zero.clone()))
            .with("z", line(zero, one));
        let clat = SubspaceLattice::<GaussRational>::canonical(2).unwrap();
        let (l, r) = eval_identity(&clat, &dist(), &a).unwrap();
        assert_ne!(l, r);
        let real = realify_assignment(&a);
        assert!(real.iter().all(|(_, s)| s.ambient() == 4 && s.dim() == 2));
        let rlat = SubspaceLattice::<Rational>::canonical(4).unwrap();
        let (rl, rr) = eval_identity(&rlat, &dist(), &real).unwrap();
        assert_eq!((rl.clone(), rr.clone()), (realify(&l), realify(&r)));
        assert_ne!(rl, rr);
        let sys = super::super::encode_gaussian(&dist(), 2).unwrap();
        let point = inject(&sys, &dist(), &real).unwrap();
        assert!(residual(&sys, &point).unwrap() < 1e-20);
    }
}
