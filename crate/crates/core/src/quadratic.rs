//! Exact arithmetic in a quadratic extension `Q(sqrt(D))`.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::poly::form::HomogeneousForm;
use crate::scalar::{fmt_rational, rational_to_f64, Rational, C64};

/// `re + im * sqrt(radicand)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Surd {
    pub rational: Rational,
    pub irrational: Rational,
    pub radicand: Rational,
}

impl Surd {
    pub fn new(rational: Rational, irrational: Rational, radicand: Rational) -> Self {
        Self { rational, irrational, radicand }
    }

    pub fn from_rational(q: Rational, radicand: &Rational) -> Self {
        Self::new(q, Rational::zero(), radicand.clone())
    }

    pub fn is_zero(&self) -> bool {
        self.rational.is_zero() && self.irrational.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        debug_assert_eq!(self.radicand, o.radicand);
        Self::new(&self.rational + &o.rational, &self.irrational + &o.irrational, self.radicand.clone())
    }

    pub fn mul(&self, o: &Self) -> Self {
        debug_assert_eq!(self.radicand, o.radicand);
        Self::new(
            &self.rational * &o.rational + &self.irrational * &o.irrational * &self.radicand,
            &self.rational * &o.irrational + &self.irrational * &o.rational,
            self.radicand.clone(),
        )
    }

    pub fn scale(&self, q: &Rational) -> Self {
        Self::new(&self.rational * q, &self.irrational * q, self.radicand.clone())
    }

    pub fn to_c64(&self) -> C64 {
        let d = rational_to_f64(&self.radicand);
        let root = if d >= 0.0 { C64::new(d.sqrt(), 0.0) } else { C64::new(0.0, (-d).sqrt()) };
        C64::new(rational_to_f64(&self.rational), 0.0) + root * rational_to_f64(&self.irrational)
    }

    /// Evaluates a rational form at a point with coordinates in the field.
    pub fn eval_form(f: &HomogeneousForm<Rational>, x: &[Surd]) -> Surd {
        let radicand = &x[0].radicand;
        let mut acc = Surd::from_rational(Rational::zero(), radicand);
        for (e, c) in f.terms() {
            let mut m = Surd::from_rational(c.clone(), radicand);
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m = m.mul(xi);
                }
            }
            acc = acc.add(&m);
        }
        acc
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.irrational.is_zero() {
            return write!(f, "{}", fmt_rational(&self.rational));
        }
        let sign = if self.irrational.is_negative() { "-" } else { "+" };
        write!(
            f,
            "{} {sign} {}*sqrt({})",
            fmt_rational(&self.rational),
            fmt_rational(&self.irrational.abs()),
            fmt_rational(&self.radicand)
        )
    }
}

/// The rational square root of `q`, if it has one.
pub fn rational_sqrt(q: &Rational) -> Option<Rational> {
    if q.is_negative() {
        return None;
    }
    let root = |n: &BigInt| {
        let r = n.sqrt();
        (&r * &r == *n).then_some(r)
    };
    Some(Rational::new(root(q.numer())?, root(q.denom())?))
}

/// Roots of `a x^2 + b x + c` (with `a != 0`) as elements of `Q(sqrt(disc))`.
/// Both roots are rational exactly when the discriminant is a square.
pub fn quadratic_roots(a: &Rational, b: &Rational, c: &Rational) -> [Surd; 2] {
    let disc = b * b - Rational::from_integer(4.into()) * a * c;
    let two_a = a * Rational::from_integer(2.into());
    match rational_sqrt(&disc) {
        Some(s) => [
            Surd::from_rational((-b + &s) / &two_a, &Rational::one()),
            Surd::from_rational((-b - &s) / &two_a, &Rational::one()),
        ],
        None => {
            let re = -b / &two_a;
            let im = Rational::one() / &two_a;
            [Surd::new(re.clone(), im.clone(), disc.clone()), Surd::new(re, -im, disc)]
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, rat};

    #[test]
    fn golden_ratio_satisfies_its_equation() {
        let [x, y] = quadratic_roots(&int(1), &int(-1), &int(-1));
        for r in [&x, &y] {
            let v = r.mul(r).add(&r.scale(&int(-1))).add(&Surd::from_rational(int(-1), &r.radicand));
            assert!(v.is_zero());
        }
        assert!((x.to_c64().re - 1.618033988749895).abs() < 1e-15);
        assert_eq!(x.to_string(), "1/2 + 1/2*sqrt(5)");
    }

    #[test]
    fn square_discriminant_gives_rationals() {
        let [x, y] = quadratic_roots(&int(4), &int(0), &int(-1));
        assert!(x.irrational.is_zero() && y.irrational.is_zero());
        assert_eq!(x.rational, rat(1, 2));
        assert_eq!(rational_sqrt(&rat(9, 49)), Some(rat(3, 7)));
        assert_eq!(rational_sqrt(&rat(2, 9)), None);
    }

    #[test]
    fn negative_discriminant() {
        let [x, _] = quadratic_roots(&int(1), &int(0), &int(1));
        let z = x.to_c64();
        assert!((z - C64::new(0.0, 1.0)).norm() < 1e-15);
    }
}
