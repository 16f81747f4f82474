//! Coefficient fields: exact rationals and complex doubles.

use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Rational = BigRational;
pub type C64 = Complex64;

/// A field the polynomial machinery can compute over.
///
/// `Rational` is exact; `C64` carries rounding error and every zero test on it
/// is the caller's responsibility (see the tolerance fields of `RunConfig`).
pub trait Field:
    Clone
    + Debug
    + PartialEq
    + Zero
    + One
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    const EXACT: bool;

    fn from_rational(q: &Rational) -> Self;

    fn from_i64(n: i64) -> Self {
        Self::from_rational(&Rational::from_integer(BigInt::from(n)))
    }

    fn to_c64(&self) -> C64;

    /// Embeds a complex number, if the field contains it as such.
    fn from_c64(z: C64) -> Option<Self>;

    /// The exact rational value, for exact fields.
    fn to_rational(&self) -> Option<Rational>;

    /// Magnitude used for pivoting and scale estimates.
    fn magnitude(&self) -> f64;

    /// Complex conjugate; identity on the rationals.
    fn conj(&self) -> Self;

    /// Coefficient text for polynomial printing.
    fn fmt_coeff(&self) -> String;
}

impl Field for Rational {
    const EXACT: bool = true;

    fn from_rational(q: &Rational) -> Self {
        q.clone()
    }

    fn to_c64(&self) -> C64 {
        C64::new(rational_to_f64(self), 0.0)
    }

    fn from_c64(_: C64) -> Option<Self> {
        None
    }

    fn to_rational(&self) -> Option<Rational> {
        Some(self.clone())
    }

    fn magnitude(&self) -> f64 {
        rational_to_f64(&self.abs())
    }

    fn conj(&self) -> Self {
        self.clone()
    }

    fn fmt_coeff(&self) -> String {
        fmt_rational(self)
    }
}

impl Field for C64 {
    const EXACT: bool = false;

    fn from_rational(q: &Rational) -> Self {
        C64::new(rational_to_f64(q), 0.0)
    }

    fn from_i64(n: i64) -> Self {
        C64::new(n as f64, 0.0)
    }

    fn to_c64(&self) -> C64 {
        *self
    }

    fn from_c64(z: C64) -> Option<Self> {
        Some(z)
    }

    fn to_rational(&self) -> Option<Rational> {
        None
    }

    fn magnitude(&self) -> f64 {
        self.norm()
    }

    fn conj(&self) -> Self {
        Complex64::conj(self)
    }

    fn fmt_coeff(&self) -> String {
        format!("({})", fmt_complex(*self))
    }
}

pub fn rational_to_f64(q: &Rational) -> f64 {
    if let (Some(n), Some(d)) = (q.numer().to_f64(), q.denom().to_f64()) {
        if n.is_finite() && d.is_finite() && d != 0.0 {
            return n / d;
        }
    }
    // very large numerator/denominator: shift both down before dividing
    let nb = q.numer().bits() as i64;
    let db = q.denom().bits() as i64;
    let shift = (nb.max(db) - 1000).max(0) as usize;
    let n = (q.numer() >> shift).to_f64().unwrap_or(0.0);
    let d = (q.denom() >> shift).to_f64().unwrap_or(1.0);
    if d == 0.0 {
        if q.is_negative() {
            f64::NEG_INFINITY
        } else {
            f64::INFINITY
        }
    } else {
        n / d
    }
}

pub fn rational_from_f64(x: f64) -> Option<Rational> {
    Rational::from_float(x)
}

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn fmt_rational(q: &Rational) -> String {
    if q.is_integer() {
        q.numer().to_string()
    } else {
        format!("{}/{}", q.numer(), q.denom())
    }
}

/// Parses `"3"`, `"-7/4"` into a rational.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        Some(Rational::new(n, d))
    } else {
        let n: BigInt = s.parse().ok()?;
        Some(Rational::from_integer(n))
    }
}

/// Decimal text for a complex number with 15 significant digits.
///
/// Purely real values print without an imaginary part.
pub fn fmt_complex(z: C64) -> String {
    let re = clean_zero(z.re);
    let im = clean_zero(z.im);
    if im == 0.0 {
        format!("{:.14e}", re)
    } else {
        let sign = if im < 0.0 { '-' } else { '+' };
        format!("{:.14e}{}{:.14e}i", re, sign, im.abs())
    }
}

fn clean_zero(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x
    }
}

/// Inverse of [`fmt_complex`]; also accepts plain rationals.
pub fn parse_complex(s: &str) -> Option<C64> {
    let s = s.trim();
    if let Some(q) = parse_rational(s) {
        return Some(q.to_c64());
    }
    if let Ok(x) = s.parse::<f64>() {
        return Some(C64::new(x, 0.0));
    }
    let body = s.strip_suffix('i')?;
    // split at the sign that is not part of an exponent
    let bytes = body.as_bytes();
    let mut split = None;
    for k in (1..bytes.len()).rev() {
        if (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E') {
            split = Some(k);
            break;
        }
    }
    let k = split?;
    let re: f64 = body[..k].parse().ok()?;
    let im: f64 = body[k..].parse().ok()?;
    Some(C64::new(re, im))
}

/// Splits a rational into a double-double `(hi, lo)` pair.
pub fn rational_to_twofloat(q: &Rational) -> twofloat::TwoFloat {
    let hi = rational_to_f64(q);
    let lo = match rational_from_f64(hi) {
        Some(h) if hi.is_finite() => rational_to_f64(&(q - h)),
        _ => 0.0,
    };
    twofloat::TwoFloat::new_add(hi, lo)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "7/4", "-22/7"] {
            let q = parse_rational(s).unwrap();
            assert_eq!(fmt_rational(&q), s);
        }
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }

    #[test]
    fn complex_text_round_trip() {
        let z = C64::new(0.125, -3.5e-7);
        let back = parse_complex(&fmt_complex(z)).unwrap();
        assert!((back - z).norm() < 1e-20);
        let w = C64::new(-2.0e10, 0.0);
        assert_eq!(parse_complex(&fmt_complex(w)).unwrap(), w);
        assert_eq!(parse_complex("3/4").unwrap(), C64::new(0.75, 0.0));
    }

    #[test]
    fn huge_rationals_convert() {
        let big = Rational::new(BigInt::from(10).pow(400) * 3, BigInt::from(10).pow(400));
        assert!((rational_to_f64(&big) - 3.0).abs() < 1e-12);
    }

    #[test]
    fn twofloat_split_is_tighter_than_f64() {
        let third = rat(1, 3);
        let tf = rational_to_twofloat(&third);
        let back = rational_from_f64(tf.hi()).unwrap() + rational_from_f64(tf.lo()).unwrap();
        assert!(rational_to_f64(&(back - third).abs()) < 1e-32);
    }
}
