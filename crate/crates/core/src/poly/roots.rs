//! All-roots solver: Aberth–Ehrlich iteration followed by multiplicity
//! clustering with a Taylor-coefficient certificate.

use num_complex::Complex;
use num_traits::{Float, Zero};
use twofloat::TwoFloat;

use crate::error::{Error, Result};
use crate::poly::univariate::UniPoly;
use crate::scalar::{rational_to_twofloat, Rational, C64};

/// Leading coefficients below this fraction of the largest one are noise.
pub const TRIM_REL: f64 = 1e-13;

const MAX_ITER: usize = 2000;

#[derive(Clone, Copy, Debug)]
pub struct RootOptions {
    /// Two roots closer than this (relative to `max(1, |z|)`) always merge;
    /// a wider cluster merges only if its centroid is certified as a root of
    /// that multiplicity to this relative tolerance.
    pub cluster_tol: f64,
    /// Mantissa bits; above 53 roots are polished in double-double.
    pub precision: u32,
}

impl Default for RootOptions {
    fn default() -> Self {
        Self { cluster_tol: 1e-8, precision: 53 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Root {
    pub value: C64,
    pub multiplicity: usize,
}

/// Drops leading coefficients that are negligible against the largest one.
/// Returns the trimmed polynomial and the number of coefficients dropped.
pub fn trim_leading(p: &UniPoly<C64>, rel_tol: f64) -> (UniPoly<C64>, usize) {
    let scale = p.coeffs().iter().map(|c| c.norm()).fold(0.0, f64::max);
    let mut c = p.coeffs().to_vec();
    let n0 = c.len();
    while c.last().is_some_and(|v| v.norm() <= rel_tol * scale) {
        c.pop();
    }
    let dropped = n0 - c.len();
    (UniPoly::new(c), dropped)
}

/// Roots of `p` with multiplicities summing to its degree (after trimming
/// leading coefficients below [`TRIM_REL`]).
pub fn find_roots(p: &UniPoly<C64>, opts: &RootOptions) -> Result<Vec<Root>> {
    find_roots_impl(p, None, opts)
}

/// As [`find_roots`], for a polynomial known exactly; the exact coefficients
/// feed the extended-precision polish when `opts.precision > 53`.
pub fn find_roots_exact(p: &UniPoly<Rational>, opts: &RootOptions) -> Result<Vec<Root>> {
    find_roots_impl(&p.to_c64(), Some(p), opts)
}

fn find_roots_impl(
    p: &UniPoly<C64>,
    exact: Option<&UniPoly<Rational>>,
    opts: &RootOptions,
) -> Result<Vec<Root>> {
    if p.is_zero() {
        return Err(Error::Degenerate("zero polynomial has no finite root set".into()));
    }
    let (trimmed, dropped) = trim_leading(p, TRIM_REL);
    let degree = trimmed.degree().unwrap_or(0);
    if degree == 0 {
        if dropped > 0 {
            return Err(Error::Degenerate(
                "all leading coefficients below trimming tolerance".into(),
            ));
        }
        return Err(Error::Degenerate("constant polynomial".into()));
    }
    // exact zeros at the origin
    let coeffs = trimmed.coeffs();
    let zeros = coeffs.iter().take_while(|c| c.is_zero()).count();
    let reduced: Vec<C64> = coeffs[zeros..].to_vec();
    let mut approx = aberth(&reduced);
    approx.extend(std::iter::repeat(C64::zero()).take(zeros));

    let mut roots = cluster(&trimmed, &approx, opts.cluster_tol);
    if opts.precision > 53 {
        let ext: Vec<Complex<TwoFloat>> = match exact {
            Some(q) if dropped == 0 => q.coeffs().iter().map(|c| Complex::new(rational_to_twofloat(c), TwoFloat::from(0.0))).collect(),
            _ => trimmed.coeffs().iter().map(|c| Complex::new(TwoFloat::from(c.re), TwoFloat::from(c.im))).collect(),
        };
        for r in &mut roots {
            r.value = polish_extended(&ext, r.value, r.multiplicity);
        }
    }
    for r in &roots {
        if !certify(trimmed.coeffs(), r.value, r.multiplicity, opts.cluster_tol.max(1e-10)) {
            return Err(Error::Numeric(format!(
                "root {} (multiplicity {}) failed residual certification",
                r.value, r.multiplicity
            )));
        }
    }
    roots.sort_by(|a, b| {
        a.value
            .re
            .total_cmp(&b.value.re)
            .then(a.value.im.total_cmp(&b.value.im))
    });
    Ok(roots)
}

fn horner_with_derivative(c: &[C64], z: C64) -> (C64, C64) {
    let mut p = C64::zero();
    let mut dp = C64::zero();
    for a in c.iter().rev() {
        dp = dp * z + p;
        p = p * z + a;
    }
    (p, dp)
}

/// Simultaneous Aberth–Ehrlich iteration on `c` (constant term first,
/// nonzero constant term).
fn aberth(c: &[C64]) -> Vec<C64> {
    let n = c.len() - 1;
    if n == 0 {
        return Vec::new();
    }
    if n == 1 {
        return vec![-c[0] / c[1]];
    }
    let lead = c[n];
    let c: Vec<C64> = c.iter().map(|v| v / lead).collect();
    // initial radius: geometric mean of root moduli
    let r0 = c[0].norm().powf(1.0 / n as f64).max(1e-12);
    let mut z: Vec<C64> = (0..n)
        .map(|k| {
            let th = 2.0 * std::f64::consts::PI * (k as f64) / (n as f64) + 0.4;
            C64::from_polar(r0, th)
        })
        .collect();
    let mut converged = vec![false; n];
    for _ in 0..MAX_ITER {
        let mut all = true;
        for i in 0..n {
            if converged[i] {
                continue;
            }
            let (p, dp) = horner_with_derivative(&c, z[i]);
            if p.is_zero() {
                converged[i] = true;
                continue;
            }
            let ratio = p / dp;
            let mut s = C64::zero();
            for j in 0..n {
                if j != i {
                    let d = z[i] - z[j];
                    if !d.is_zero() {
                        s += d.inv();
                    }
                }
            }
            let denom = C64::new(1.0, 0.0) - ratio * s;
            let w = if denom.is_zero() || !denom.is_finite() { ratio } else { ratio / denom };
            if !w.is_finite() {
                // perturb away from a stationary point
                let bump = C64::new(1e-8, 1e-8) * z[i].norm().max(1.0);
                z[i] += bump;
                all = false;
                continue;
            }
            z[i] -= w;
            if w.norm() <= 4.0 * f64::EPSILON * z[i].norm().max(f64::MIN_POSITIVE) {
                converged[i] = true;
            } else {
                all = false;
            }
        }
        if all {
            break;
        }
    }
    z
}

/// Taylor coefficients of `c` at `z`: `p(x) = sum t_k (x - z)^k`.
fn taylor_at<T: Clone + std::ops::Add<Output = T> + std::ops::Mul<Output = T>>(c: &[T], z: T) -> Vec<T> {
    let mut t = c.to_vec();
    let n = t.len();
    for k in 0..n {
        for j in (k + 1..n).rev() {
            let v = t[j - 1].clone() + t[j].clone() * z.clone();
            t[j - 1] = v;
        }
    }
    t
}

/// Whether `z` is an `m`-fold root of `c` up to a relative perturbation of
/// size `tol` in the coefficients: the first `m` Taylor coefficients at `z`
/// are small against `|c|_1 max(1, |z|)^n`.
fn certify(c: &[C64], z: C64, m: usize, tol: f64) -> bool {
    let t = taylor_at(c, z);
    let norm: f64 = c.iter().map(|v| v.norm()).sum();
    let scale = norm * z.norm().max(1.0).powi(c.len() as i32 - 1);
    (0..m.min(t.len())).all(|k| t[k].norm() <= tol * scale)
}

struct Dsu {
    parent: Vec<usize>,
}

impl Dsu {
    fn find(&mut self, i: usize) -> usize {
        let mut r = i;
        while self.parent[r] != r {
            r = self.parent[r];
        }
        let mut k = i;
        while self.parent[k] != r {
            let next = self.parent[k];
            self.parent[k] = r;
            k = next;
        }
        r
    }
}

fn cluster(p: &UniPoly<C64>, approx: &[C64], cluster_tol: f64) -> Vec<Root> {
    let n = approx.len();
    let c = p.coeffs();
    let mut dsu = Dsu { parent: (0..n).collect() };
    let mut members: Vec<Vec<usize>> = (0..n).map(|i| vec![i]).collect();
    let mut pairs: Vec<(f64, usize, usize)> = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            pairs.push(((approx[i] - approx[j]).norm(), i, j));
        }
    }
    pairs.sort_by(|a, b| a.0.total_cmp(&b.0));
    for (d, i, j) in pairs {
        let (ri, rj) = (dsu.find(i), dsu.find(j));
        if ri == rj {
            continue;
        }
        let scale = approx[i].norm().max(approx[j].norm()).max(1.0);
        let mut union = members[ri].clone();
        union.extend(members[rj].iter().copied());
        let merge = if d <= cluster_tol * scale {
            true
        } else if d <= 1e-2 * scale {
            let centroid = union.iter().map(|&k| approx[k]).sum::<C64>() / union.len() as f64;
            let center = polish(c, centroid, union.len());
            certify(c, center, union.len(), cluster_tol)
        } else {
            false
        };
        if merge {
            dsu.parent[rj] = ri;
            members[ri] = union;
            members[rj].clear();
        }
    }
    let mut out = Vec::new();
    for i in 0..n {
        if dsu.find(i) != i {
            continue;
        }
        let group = &members[i];
        let m = group.len();
        let centroid = group.iter().map(|&k| approx[k]).sum::<C64>() / m as f64;
        out.push(Root { value: polish(c, centroid, m), multiplicity: m });
    }
    out
}

/// Newton on the (m-1)-th derivative, which has a simple root at an m-fold
/// root. Keeps the starting value unless the step improves the residual.
fn polish(c: &[C64], z0: C64, m: usize) -> C64 {
    let mut d = UniPoly::new(c.to_vec());
    for _ in 1..m {
        d = d.derivative();
    }
    let dc = d.coeffs().to_vec();
    if dc.len() < 2 {
        return z0;
    }
    let mut z = z0;
    let mut best = horner_with_derivative(&dc, z).0.norm();
    for _ in 0..4 {
        let (v, dv) = horner_with_derivative(&dc, z);
        if dv.is_zero() {
            break;
        }
        let next = z - v / dv;
        let r = horner_with_derivative(&dc, next).0.norm();
        if r < best {
            best = r;
            z = next;
        } else {
            break;
        }
    }
    z
}

fn polish_extended(c: &[Complex<TwoFloat>], z0: C64, m: usize) -> C64 {
    let mut d: Vec<Complex<TwoFloat>> = c.to_vec();
    for _ in 1..m {
        d = d
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, v)| *v * TwoFloat::from(k as f64))
            .collect();
    }
    if d.len() < 2 {
        return z0;
    }
    let eval = |z: Complex<TwoFloat>| {
        let mut p = Complex::new(TwoFloat::from(0.0), TwoFloat::from(0.0));
        let mut dp = p;
        for a in d.iter().rev() {
            dp = dp * z + p;
            p = p * z + *a;
        }
        (p, dp)
    };
    let mut z = Complex::new(TwoFloat::from(z0.re), TwoFloat::from(z0.im));
    for _ in 0..3 {
        let (v, dv) = eval(z);
        let den = dv.re * dv.re + dv.im * dv.im;
        if den == TwoFloat::from(0.0) || !den.is_finite() {
            break;
        }
        let step = Complex::new(
            (v.re * dv.re + v.im * dv.im) / den,
            (v.im * dv.re - v.re * dv.im) / den,
        );
        z = z - step;
    }
    let out = C64::new(f64::from(z.re), f64::from(z.im));
    if out.is_finite() {
        out
    } else {
        z0
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::int;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn cp(c: &[f64]) -> UniPoly<C64> {
        UniPoly::new(c.iter().map(|&v| C64::new(v, 0.0)).collect())
    }

    #[test]
    fn quadratic_unit_roots() {
        let roots = find_roots(&cp(&[-1.0, 0.0, 1.0]), &RootOptions::default()).unwrap();
        assert_eq!(roots.len(), 2);
        assert!((roots[0].value - C64::new(-1.0, 0.0)).norm() < 1e-14);
        assert!((roots[1].value - C64::new(1.0, 0.0)).norm() < 1e-14);
        assert!(roots.iter().all(|r| r.multiplicity == 1));
    }

    #[test]
    fn triple_root_clusters() {
        // (z-2)^3 = z^3 - 6z^2 + 12z - 8
        let roots = find_roots(&cp(&[-8.0, 12.0, -6.0, 1.0]), &RootOptions::default()).unwrap();
        assert_eq!(roots.len(), 1);
        assert_eq!(roots[0].multiplicity, 3);
        assert!((roots[0].value - C64::new(2.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn perturbed_triple_root_still_clusters() {
        // coefficients of (z - 0.3 - 0.7i)^3 (z + 1.1) rounded to f64
        let a = C64::new(0.3, 0.7);
        let mut p = UniPoly::new(vec![C64::new(1.1, 0.0), C64::new(1.0, 0.0)]);
        for _ in 0..3 {
            p = p.mul(&UniPoly::new(vec![-a, C64::new(1.0, 0.0)]));
        }
        let roots = find_roots(&p, &RootOptions::default()).unwrap();
        let mults: Vec<usize> = roots.iter().map(|r| r.multiplicity).collect();
        assert_eq!(mults.iter().sum::<usize>(), 4);
        let triple = roots.iter().find(|r| r.multiplicity == 3).unwrap();
        assert!((triple.value - a).norm() < 1e-10);
    }

    #[test]
    fn close_simple_roots_stay_apart() {
        let e = 1e-3;
        let p = cp(&[1.0 + e, -(2.0 + e), 1.0]); // (z-1)(z-1-e)
        let roots = find_roots(&p, &RootOptions::default()).unwrap();
        assert_eq!(roots.len(), 2);
    }

    #[test]
    fn random_degree_24_has_24_roots() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let c: Vec<C64> = (0..25).map(|_| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
        let p = UniPoly::new(c);
        let roots = find_roots(&p, &RootOptions::default()).unwrap();
        assert_eq!(roots.iter().map(|r| r.multiplicity).sum::<usize>(), 24);
        for r in &roots {
            let v = p.eval(&r.value).norm();
            let s: f64 = p.coeffs().iter().enumerate().map(|(k, a)| a.norm() * r.value.norm().powi(k as i32)).sum();
            assert!(v <= 1e-10 * s);
        }
    }

    #[test]
    fn zero_roots_are_counted() {
        let roots = find_roots(&cp(&[0.0, 0.0, -4.0, 1.0]), &RootOptions::default()).unwrap();
        let total: usize = roots.iter().map(|r| r.multiplicity).sum();
        assert_eq!(total, 3);
        assert!(roots.iter().any(|r| r.value.norm() == 0.0 && r.multiplicity == 2));
    }

    #[test]
    fn negligible_polynomial_is_degenerate() {
        let p = cp(&[3.0]);
        assert!(matches!(find_roots(&p, &RootOptions::default()), Err(Error::Degenerate(_))));
        assert!(matches!(find_roots(&UniPoly::zero(), &RootOptions::default()), Err(Error::Degenerate(_))));
    }

    #[test]
    fn extended_precision_polish() {
        // x^2 - 2 with exact coefficients
        let p = UniPoly::new(vec![int(-2), int(0), int(1)]);
        let opts = RootOptions { precision: 106, ..Default::default() };
        let roots = find_roots_exact(&p, &opts).unwrap();
        let r = roots.iter().find(|r| r.value.re > 0.0).unwrap();
        assert_eq!(r.value.re, std::f64::consts::SQRT_2);
    }
}
