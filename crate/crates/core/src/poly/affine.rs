use std::collections::BTreeMap;
use std::fmt;


use crate::scalar::Field;

/// A polynomial in affine variables, graded by total degree.
#[derive(Clone, PartialEq)]
pub struct AffinePolynomial<S> {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Field> AffinePolynomial<S> {
    pub fn zero(nvars: usize) -> Self {
        Self { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut p = Self::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = Self::zero(nvars);
        p.add_term(e, S::one());
        p
    }

    pub(crate) fn add_term(&mut self, e: Vec<u32>, c: S) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&e) {
            Some(old) => {
                let s = old.clone() + c;
                if s.is_zero() {
                    self.terms.remove(&e);
                } else {
                    *old = s;
                }
            }
            None => {
                self.terms.insert(e, c);
            }
        }
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    /// Total degree, or -1 for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .map(|e| e.iter().sum::<u32>() as i64)
            .max()
            .unwrap_or(-1)
    }

    /// The homogeneous component of total degree `i`.
    pub fn homogeneous_part(&self, i: u32) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e.iter().sum::<u32>() == i {
                p.add_term(e.clone(), c.clone());
            }
        }
        p
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = self.clone();
        for (e, c) in &other.terms {
            p.add_term(e.clone(), c.clone());
        }
        p
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&(-S::one())))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, v) in &self.terms {
            p.add_term(e.clone(), v.clone() * c.clone());
        }
        p
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars);
        let mut p = Self::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                p.add_term(e, c1.clone() * c2.clone());
            }
        }
        p
    }

    pub fn eval(&self, x: &[S]) -> S {
        assert_eq!(x.len(), self.nvars);
        let mut acc = S::zero();
        for (e, c) in &self.terms {
            let mut m = c.clone();
            for (xi, &k) in x.iter().zip(e) {
                for _ in 0..k {
                    m = m * xi.clone();
                }
            }
            acc = acc + m;
        }
        acc
    }

    pub fn partial(&self, i: usize) -> Self {
        let mut p = Self::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            p.add_term(e2, c.clone() * S::from_i64(e[i] as i64));
        }
        p
    }

    /// The polynomial `v -> self(v + shift)`.
    pub fn shift(&self, shift: &[S]) -> Self {
        assert_eq!(shift.len(), self.nvars);
        let n = self.nvars;
        let lin: Vec<Self> = (0..n)
            .map(|i| Self::variable(n, i).add(&Self::constant(n, shift[i].clone())))
            .collect();
        let mut out = Self::zero(n);
        for (e, c) in &self.terms {
            let mut m = Self::constant(n, c.clone());
            for (i, &k) in e.iter().enumerate() {
                for _ in 0..k {
                    m = m.mul(&lin[i]);
                }
            }
            out = out.add(&m);
        }
        out
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T) -> AffinePolynomial<T> {
        let mut p = AffinePolynomial::<T>::zero(self.nvars);
        for (e, c) in &self.terms {
            p.add_term(e.clone(), f(c));
        }
        p
    }

    /// Text with the given variable names.
    pub fn display_with(&self, names: &[&str]) -> String {
        if self.terms.is_empty() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (e, c) in self.terms.iter().rev() {
            let mon: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &k)| k > 0)
                .map(|(i, &k)| {
                    if k == 1 {
                        names[i].to_string()
                    } else {
                        format!("{}^{}", names[i], k)
                    }
                })
                .collect();
            let mut coeff = c.fmt_coeff();
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if out.is_empty() {
                if negative {
                    out.push('-');
                }
            } else {
                out.push_str(if negative { " - " } else { " + " });
            }
            if mon.is_empty() {
                out.push_str(&coeff);
            } else if coeff == "1" {
                out.push_str(&mon.join("*"));
            } else {
                out.push_str(&format!("{coeff}*{}", mon.join("*")));
            }
        }
        out
    }
}

impl<S: Field> fmt::Debug for AffinePolynomial<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = (0..self.nvars).map(|i| format!("x{i}")).collect();
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        write!(f, "AffinePolynomial({})", self.display_with(&refs))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, Rational};

    #[test]
    fn shift_matches_pointwise_evaluation() {
        let x = AffinePolynomial::<Rational>::variable(2, 0);
        let y = AffinePolynomial::<Rational>::variable(2, 1);
        let p = x.mul(&x).mul(&y).add(&y.scale(&int(3)));
        let s = p.shift(&[int(2), int(-1)]);
        for (a, b) in [(0, 0), (1, 2), (-3, 5)] {
            let v = [int(a), int(b)];
            let w = [int(a + 2), int(b - 1)];
            assert_eq!(s.eval(&v), p.eval(&w));
        }
    }

    #[test]
    fn degree_of_zero_is_negative() {
        assert_eq!(AffinePolynomial::<Rational>::zero(3).total_degree(), -1);
    }
}
