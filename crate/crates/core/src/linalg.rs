//! Small dense linear algebra over a [`Field`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::scalar::{Field, Rational, C64};

/// Whether `x` counts as zero: exact test for exact fields, otherwise a
/// magnitude test relative to `scale`.
pub fn negligible<S: Field>(x: &S, scale: f64, tol: f64) -> bool {
    if S::EXACT {
        x.is_zero()
    } else {
        x.magnitude() <= tol * scale
    }
}

/// Row echelon form with partial pivoting; returns pivot columns.
fn echelon<S: Field>(m: &mut [Vec<S>], tol: f64) -> Vec<usize> {
    let rows = m.len();
    if rows == 0 {
        return Vec::new();
    }
    let cols = m[0].len();
    let scale = m
        .iter()
        .flat_map(|r| r.iter())
        .map(|v| v.magnitude())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows {
            break;
        }
        let (best, mag) = (r..rows)
            .map(|i| (i, m[i][c].magnitude()))
            .fold((r, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if negligible(&m[best][c], scale, tol) || mag < 0.0 {
            continue;
        }
        m.swap(r, best);
        let inv = S::one() / m[r][c].clone();
        for j in c..cols {
            m[r][j] = m[r][j].clone() * inv.clone();
        }
        for i in 0..rows {
            if i == r || m[i][c].is_zero() {
                continue;
            }
            let factor = m[i][c].clone();
            for j in c..cols {
                let v = m[r][j].clone() * factor.clone();
                m[i][j] = m[i][j].clone() - v;
            }
        }
        pivots.push(c);
        r += 1;
    }
    pivots
}

pub fn rank<S: Field>(rows: &[Vec<S>], tol: f64) -> usize {
    let mut m = rows.to_vec();
    echelon(&mut m, tol).len()
}

/// Basis of the right null space `{v : rows * v = 0}`.
pub fn nullspace<S: Field>(rows: &[Vec<S>], ncols: usize, tol: f64) -> Vec<Vec<S>> {
    let mut m = rows.to_vec();
    let pivots = echelon(&mut m, tol);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&fc| {
            let mut v = vec![S::zero(); ncols];
            v[fc] = S::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -m[r][fc].clone();
            }
            v
        })
        .collect()
}

/// Solves `a x = b` by Gaussian elimination with full pivoting.
///
/// Returns the solution and the ratio of smallest to largest pivot
/// magnitude, a cheap reciprocal condition estimate.
pub fn solve_c64(a: &[Vec<C64>], b: &[C64]) -> Option<(Vec<C64>, f64)> {
    let n = b.len();
    let mut m: Vec<Vec<C64>> = a.to_vec();
    let mut rhs = b.to_vec();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut pmax: f64 = 0.0;
    let mut pmin = f64::INFINITY;
    for k in 0..n {
        let mut best = (k, k, -1.0);
        for i in k..n {
            for j in k..n {
                let v = m[i][j].norm();
                if v > best.2 {
                    best = (i, j, v);
                }
            }
        }
        let (bi, bj, mag) = best;
        if mag <= 0.0 || !mag.is_finite() {
            return None;
        }
        pmax = pmax.max(mag);
        pmin = pmin.min(mag);
        m.swap(k, bi);
        rhs.swap(k, bi);
        for row in m.iter_mut() {
            row.swap(k, bj);
        }
        perm.swap(k, bj);
        for i in k + 1..n {
            let f = m[i][k] / m[k][k];
            if f == C64::zero() {
                continue;
            }
            for j in k..n {
                let v = m[k][j] * f;
                m[i][j] -= v;
            }
            let v = rhs[k] * f;
            rhs[i] -= v;
        }
    }
    let mut y = vec![C64::zero(); n];
    for k in (0..n).rev() {
        let mut s = rhs[k];
        for j in k + 1..n {
            s -= m[k][j] * y[j];
        }
        y[k] = s / m[k][k];
    }
    let mut x = vec![C64::zero(); n];
    for k in 0..n {
        x[perm[k]] = y[k];
    }
    Some((x, pmin / pmax))
}

/// Exact determinant by fraction-free (Bareiss) elimination.
pub fn det_rational(m: &[Vec<Rational>]) -> Rational {
    let n = m.len();
    if n == 0 {
        return Rational::one();
    }
    // clear denominators row by row
    let mut scale = Rational::one();
    let mut a: Vec<Vec<BigInt>> = Vec::with_capacity(n);
    for row in m {
        let l = row.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
        scale *= Rational::from_integer(l.clone());
        a.push(row.iter().map(|q| q.numer() * (&l / q.denom())).collect());
    }
    let mut sign = 1;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(k, i);
                    sign = -sign;
                }
                None => return Rational::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    let det = Rational::from_integer(a[n - 1][n - 1].clone() * sign);
    det / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    fn q(rows: &[&[i64]]) -> Vec<Vec<Rational>> {
        rows.iter().map(|r| r.iter().map(|&v| int(v)).collect()).collect()
    }

    #[test]
    fn nullspace_of_two_planes_is_a_line() {
        let m = q(&[&[1, 0, 0, 0], &[0, 1, 0, 0]]);
        let ns = nullspace(&m, 4, 0.0);
        assert_eq!(ns.len(), 2);
        for v in &ns {
            assert!(v[0].is_zero() && v[1].is_zero());
        }
        assert_eq!(rank(&m, 0.0), 2);
    }

    #[test]
    fn bareiss_matches_cofactor_expansion() {
        let m = vec![
            vec![rat(1, 2), int(3), int(-1)],
            vec![int(2), rat(-5, 3), int(4)],
            vec![int(0), int(7), rat(1, 7)],
        ];
        // cofactor expansion along the first row
        let minor = |r0: usize, c0: usize, c1: usize| {
            m[r0][c0].clone() * m[r0 + 1][c1].clone() - m[r0][c1].clone() * m[r0 + 1][c0].clone()
        };
        let expect = m[0][0].clone() * minor(1, 1, 2) - m[0][1].clone() * minor(1, 0, 2)
            + m[0][2].clone() * minor(1, 0, 1);
        assert_eq!(det_rational(&m), expect);
    }

    #[test]
    fn singular_determinant_is_zero() {
        let m = q(&[&[1, 2, 3], &[2, 4, 6], &[0, 1, 1]]);
        assert!(det_rational(&m).is_zero());
        let swap_needed = q(&[&[0, 1], &[1, 0]]);
        assert_eq!(det_rational(&swap_needed), int(-1));
    }

    #[test]
    fn complex_solve() {
        let a = vec![
            vec![C64::new(2.0, 1.0), C64::new(0.0, -1.0)],
            vec![C64::new(1.0, 0.0), C64::new(3.0, 0.5)],
        ];
        let x = vec![C64::new(0.3, -0.2), C64::new(-1.0, 2.0)];
        let b: Vec<C64> = a.iter().map(|r| r[0] * x[0] + r[1] * x[1]).collect();
        let (sol, rcond) = solve_c64(&a, &b).unwrap();
        assert!((sol[0] - x[0]).norm() < 1e-14 && (sol[1] - x[1]).norm() < 1e-14);
        assert!(rcond > 0.1);
    }
}
