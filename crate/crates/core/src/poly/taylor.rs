//! Taylor parts of a form at a point of the affine chart `T != 0`.

use crate::error::{Error, Result};
use crate::poly::affine::AffinePolynomial;
use crate::poly::form::HomogeneousForm;
use crate::scalar::Field;

fn factorial<S: Field>(n: u32) -> S {
    (1..=n as i64).fold(S::one(), |acc, k| acc * S::from_i64(k))
}

/// Affine coordinates `(X/T, Y/T, Z/T)` of `p`.
pub fn affine_coords<S: Field>(p: &[S]) -> Result<Vec<S>> {
    if p.len() != 4 {
        return Err(Error::InvalidInput(format!("expected 4 coordinates, got {}", p.len())));
    }
    if p[3].is_zero() {
        return Err(Error::Chart(format!("{p:?}")));
    }
    Ok(p[..3].iter().map(|v| v.clone() / p[3].clone()).collect())
}

/// The degree-`i` Taylor part of `f` at `p`, as a form in the direction
/// variables `(a, b, c)`:
///
/// `sum_{l+m+n=i} d^i f / dx^l dy^m dz^n |_p * a^l b^m c^n / (l! m! n!)`
///
/// with `f` dehomogenized at `T = 1`.
pub fn taylor_part<S: Field>(f: &HomogeneousForm<S>, p: &[S], i: u32) -> Result<HomogeneousForm<S>> {
    if f.nvars() != 4 {
        return Err(Error::InvalidInput("taylor_part expects a form on P^3".into()));
    }
    let at = affine_coords(p)?;
    let fa = f.dehomogenize(3);
    taylor_part_affine(&fa, &at, i)
}

fn taylor_part_affine<S: Field>(fa: &AffinePolynomial<S>, at: &[S], i: u32) -> Result<HomogeneousForm<S>> {
    let mut terms = Vec::new();
    for e in HomogeneousForm::<S>::monomials(3, i) {
        let mut d = fa.clone();
        for (var, &k) in e.iter().enumerate() {
            for _ in 0..k {
                d = d.partial(var);
            }
        }
        if d.is_zero() {
            continue;
        }
        let denom: S = e.iter().fold(S::one(), |acc, &k| acc * factorial::<S>(k));
        terms.push((e, d.eval(at) / denom));
    }
    HomogeneousForm::from_terms(3, i, terms)
}

/// All Taylor parts `(f_0)_p, ..., (f_d)_p`.
pub fn taylor_expansion<S: Field>(f: &HomogeneousForm<S>, p: &[S]) -> Result<Vec<HomogeneousForm<S>>> {
    if f.nvars() != 4 {
        return Err(Error::InvalidInput("taylor_expansion expects a form on P^3".into()));
    }
    let at = affine_coords(p)?;
    let fa = f.dehomogenize(3);
    (0..=f.degree()).map(|i| taylor_part_affine(&fa, &at, i)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat, Rational};

    fn pt(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&x| int(x)).collect()
    }

    #[test]
    fn sphere_parts_at_pole() {
        let f: HomogeneousForm = "X^2+Y^2+Z^2-T^2".parse().unwrap();
        let p = pt(&[1, 0, 0, 1]);
        assert!(taylor_part(&f, &p, 0).unwrap().is_zero());
        assert_eq!(taylor_part(&f, &p, 1).unwrap().to_string(), "2*u0");
        assert_eq!(taylor_part(&f, &p, 2).unwrap().to_string(), "u0^2 + u1^2 + u2^2");
        assert!(taylor_part(&f, &p, 3).unwrap().is_zero());
    }

    #[test]
    fn chart_violation_is_reported() {
        let f: HomogeneousForm = "X*T-Y*Z".parse().unwrap();
        assert!(matches!(taylor_part(&f, &pt(&[1, 0, 0, 0]), 1), Err(Error::Chart(_))));
    }

    #[test]
    fn parts_agree_with_shifted_polynomial() {
        // independent route: expand f(p + v) and read off homogeneous parts
        let f: HomogeneousForm = "3*X^3 - X*Y*T + 2/3*Z^2*T - Y^3 + 5*T^3 + X*Z^2".parse().unwrap();
        let p = vec![rat(1, 2), int(-2), rat(3, 5), int(2)];
        let at = affine_coords(&p).unwrap();
        let shifted = f.dehomogenize(3).shift(&at);
        for i in 0..=3 {
            let part = taylor_part(&f, &p, i).unwrap();
            let expect = shifted.homogeneous_part(i);
            for (e, c) in expect.terms() {
                assert_eq!(&part.coeff(e), c, "degree {i} coefficient {e:?}");
            }
            assert_eq!(part.len(), expect.terms().count());
        }
    }
}
