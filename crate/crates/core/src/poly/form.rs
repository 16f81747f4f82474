use std::collections::BTreeMap;
use std::fmt;

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::poly::affine::AffinePolynomial;
use crate::scalar::{Field, Rational, C64};

/// Variable names of P^3, in coordinate order.
pub const VAR_NAMES: [&str; 4] = ["X", "Y", "Z", "T"];

/// A homogeneous polynomial in `nvars` variables.
///
/// Every stored exponent vector sums to `degree` and no stored coefficient is
/// zero. Forms on P^3 have `nvars == 4`; restrictions to planes and lines use
/// 3 and 2 variables.
#[derive(Clone, PartialEq)]
pub struct HomogeneousForm<S = Rational> {
    nvars: usize,
    degree: u32,
    terms: BTreeMap<Vec<u32>, S>,
}

impl<S: Field> HomogeneousForm<S> {
    pub fn zero(nvars: usize, degree: u32) -> Self {
        Self { nvars, degree, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: S) -> Self {
        let mut f = Self::zero(nvars, 0);
        f.add_term(vec![0; nvars], c);
        f
    }

    pub fn variable(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut f = Self::zero(nvars, 1);
        f.add_term(e, S::one());
        f
    }

    /// The linear form `sum c_i x_i`.
    pub fn linear(coeffs: &[S]) -> Self {
        let n = coeffs.len();
        let mut f = Self::zero(n, 1);
        for (i, c) in coeffs.iter().enumerate() {
            let mut e = vec![0; n];
            e[i] = 1;
            f.add_term(e, c.clone());
        }
        f
    }

    pub fn monomial(exponent: Vec<u32>, c: S) -> Self {
        let nvars = exponent.len();
        let degree = exponent.iter().sum();
        let mut f = Self::zero(nvars, degree);
        f.add_term(exponent, c);
        f
    }

    /// Builds a form from terms, rejecting exponents of the wrong degree.
    pub fn from_terms(
        nvars: usize,
        degree: u32,
        terms: impl IntoIterator<Item = (Vec<u32>, S)>,
    ) -> Result<Self> {
        let mut f = Self::zero(nvars, degree);
        for (e, c) in terms {
            if e.len() != nvars {
                return Err(Error::InvalidInput(format!(
                    "exponent {:?} has {} entries, expected {}",
                    e,
                    e.len(),
                    nvars
                )));
            }
            let d: u32 = e.iter().sum();
            if d != degree {
                return Err(Error::NonHomogeneous {
                    monomial: monomial_text(&e),
                    expected: degree,
                    found: d,
                });
            }
            f.add_term(e, c);
        }
        Ok(f)
    }

    fn add_term(&mut self, e: Vec<u32>, c: S) {
        debug_assert_eq!(e.iter().sum::<u32>(), self.degree);
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

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<u32>, &S)> {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[u32]) -> S {
        self.terms.get(e).cloned().unwrap_or_else(S::zero)
    }

    /// Coefficients of a linear form in variable order.
    pub fn linear_coeffs(&self) -> Option<Vec<S>> {
        if self.degree != 1 {
            return None;
        }
        Some(
            (0..self.nvars)
                .map(|i| {
                    let mut e = vec![0; self.nvars];
                    e[i] = 1;
                    self.coeff(&e)
                })
                .collect(),
        )
    }

    /// Sum of coefficient magnitudes; bounds |f(v)| for max|v_i| <= 1.
    pub fn coeff_norm(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).sum()
    }

    pub fn max_coeff(&self) -> f64 {
        self.terms.values().map(|c| c.magnitude()).fold(0.0, f64::max)
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut f = Self::zero(self.nvars, self.degree);
        for (e, v) in &self.terms {
            f.add_term(e.clone(), v.clone() * c.clone());
        }
        f
    }

    pub fn neg(&self) -> Self {
        self.scale(&(-S::one()))
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        if self.is_zero() && self.degree != other.degree {
            return Ok(other.clone());
        }
        if other.is_zero() && self.degree != other.degree {
            return Ok(self.clone());
        }
        if self.degree != other.degree {
            return Err(Error::InvalidInput(format!(
                "cannot add forms of degree {} and {}",
                self.degree, other.degree
            )));
        }
        let mut f = self.clone();
        for (e, c) in &other.terms {
            f.add_term(e.clone(), c.clone());
        }
        Ok(f)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.nvars, other.nvars, "variable count mismatch");
        let mut f = Self::zero(self.nvars, self.degree + other.degree);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                f.add_term(e, c1.clone() * c2.clone());
            }
        }
        f
    }

    pub fn pow(&self, k: u32) -> Self {
        let mut acc = Self::constant(self.nvars, S::one());
        for _ in 0..k {
            acc = acc.mul(self);
        }
        acc
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.nvars != other.nvars {
            return Err(Error::InvalidInput(format!(
                "forms in {} and {} variables",
                self.nvars, other.nvars
            )));
        }
        Ok(())
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

    pub fn eval_c64(&self, x: &[C64]) -> C64 {
        assert_eq!(x.len(), self.nvars);
        let mut acc = C64::zero();
        for (e, c) in &self.terms {
            let mut m = c.to_c64();
            for (xi, &k) in x.iter().zip(e) {
                if k > 0 {
                    m *= xi.powu(k);
                }
            }
            acc += m;
        }
        acc
    }

    /// Partial derivative with respect to variable `i`.
    pub fn partial(&self, i: usize) -> Self {
        let mut f = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (e, c) in &self.terms {
            if e[i] == 0 {
                continue;
            }
            let mut e2 = e.clone();
            e2[i] -= 1;
            f.add_term(e2, c.clone() * S::from_i64(e[i] as i64));
        }
        f
    }

    pub fn gradient(&self) -> Vec<Self> {
        (0..self.nvars).map(|i| self.partial(i)).collect()
    }

    /// The polar `sum_i q_i df/dx_i`.
    pub fn polar(&self, q: &[S]) -> Self {
        let mut acc = Self::zero(self.nvars, self.degree.saturating_sub(1));
        for (i, qi) in q.iter().enumerate() {
            if qi.is_zero() {
                continue;
            }
            acc = acc
                .add(&self.partial(i).scale(qi))
                .expect("partials share a degree");
        }
        acc
    }

    pub fn map<T: Field>(&self, f: impl Fn(&S) -> T) -> HomogeneousForm<T> {
        let mut g = HomogeneousForm::<T>::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            g.add_term(e.clone(), f(c));
        }
        g
    }

    pub fn to_c64(&self) -> HomogeneousForm<C64> {
        self.map(|c| c.to_c64())
    }

    /// Substitutes `x = M u` where `columns[j]` is the j-th column of `M`.
    ///
    /// The result is a form in `columns.len()` variables: the pull-back of
    /// `self` along the linear map, e.g. its restriction to a plane or line
    /// spanned by the columns.
    pub fn substitute_linear(&self, columns: &[Vec<S>]) -> HomogeneousForm<S> {
        let k = columns.len();
        for col in columns {
            assert_eq!(col.len(), self.nvars);
        }
        // image of each variable: x_i = sum_j M_ij u_j
        let images: Vec<HomogeneousForm<S>> = (0..self.nvars)
            .map(|i| {
                let row: Vec<S> = columns.iter().map(|c| c[i].clone()).collect();
                HomogeneousForm::linear(&row)
            })
            .collect();
        let mut powers: Vec<Vec<HomogeneousForm<S>>> = images
            .iter()
            .map(|_| vec![HomogeneousForm::constant(k, S::one())])
            .collect();
        let mut out = HomogeneousForm::zero(k, self.degree);
        for (e, c) in &self.terms {
            let mut m = HomogeneousForm::constant(k, c.clone());
            for (i, &p) in e.iter().enumerate() {
                while powers[i].len() <= p as usize {
                    let next = powers[i].last().unwrap().mul(&images[i]);
                    powers[i].push(next);
                }
                if p > 0 {
                    m = m.mul(&powers[i][p as usize]);
                }
            }
            for (e2, c2) in m.terms {
                out.add_term(e2, c2);
            }
        }
        out
    }

    /// Sets variable `var` to 1, producing an affine polynomial in the others.
    pub fn dehomogenize(&self, var: usize) -> AffinePolynomial<S> {
        let mut p = AffinePolynomial::zero(self.nvars - 1);
        for (e, c) in &self.terms {
            let mut e2 = e.clone();
            e2.remove(var);
            p.add_term(e2, c.clone());
        }
        p
    }

    /// Homogenizes an affine polynomial of total degree <= `degree`,
    /// inserting the new variable at position `var`.
    pub fn homogenize(p: &AffinePolynomial<S>, degree: u32, var: usize) -> Result<Self> {
        if p.total_degree() > degree as i64 {
            return Err(Error::InvalidInput(format!(
                "cannot homogenize degree {} polynomial to degree {}",
                p.total_degree(),
                degree
            )));
        }
        let mut f = Self::zero(p.nvars() + 1, degree);
        for (e, c) in p.terms() {
            let d: u32 = e.iter().sum();
            let mut e2 = e.clone();
            e2.insert(var, degree - d);
            f.add_term(e2, c.clone());
        }
        Ok(f)
    }

    /// Applies a permutation of variables: variable `i` of the result is
    /// variable `perm[i]` of `self`.
    pub fn permute(&self, perm: &[usize]) -> Self {
        let mut f = Self::zero(self.nvars, self.degree);
        for (e, c) in &self.terms {
            let e2: Vec<u32> = perm.iter().map(|&j| e[j]).collect();
            f.add_term(e2, c.clone());
        }
        f
    }

    /// All monomials of the given degree in `nvars` variables, in a fixed order.
    pub fn monomials(nvars: usize, degree: u32) -> Vec<Vec<u32>> {
        let mut out = Vec::new();
        let mut cur = vec![0u32; nvars];
        fn rec(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
            let n = cur.len();
            if i == n - 1 {
                cur[i] = left;
                out.push(cur.clone());
                return;
            }
            for k in (0..=left).rev() {
                cur[i] = k;
                rec(i + 1, left - k, cur, out);
            }
        }
        if nvars == 0 {
            return out;
        }
        rec(0, degree, &mut cur, &mut out);
        out
    }
}

impl<S: Field> fmt::Display for HomogeneousForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let mut first = true;
        // highest powers of the first variable first
        for (e, c) in self.terms.iter().rev() {
            let mon = monomial_text_n(e);
            let mut coeff = c.fmt_coeff();
            let negative = coeff.starts_with('-');
            if negative {
                coeff.remove(0);
            }
            if first {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            first = false;
            if mon.is_empty() {
                write!(f, "{coeff}")?;
            } else if coeff == "1" {
                write!(f, "{mon}")?;
            } else {
                write!(f, "{coeff}*{mon}")?;
            }
        }
        Ok(())
    }
}

impl<S: Field> fmt::Debug for HomogeneousForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "HomogeneousForm[{}; deg {}]({})", self.nvars, self.degree, self)
    }
}

fn var_name(nvars: usize, i: usize) -> String {
    if nvars == 4 {
        VAR_NAMES[i].to_string()
    } else {
        format!("u{i}")
    }
}

fn monomial_text_n(e: &[u32]) -> String {
    let n = e.len();
    let parts: Vec<String> = e
        .iter()
        .enumerate()
        .filter(|(_, &k)| k > 0)
        .map(|(i, &k)| {
            if k == 1 {
                var_name(n, i)
            } else {
                format!("{}^{}", var_name(n, i), k)
            }
        })
        .collect();
    parts.join("*")
}

/// Monomial text used in error messages, e.g. `X^2*T`.
pub fn monomial_text(e: &[u32]) -> String {
    let s = monomial_text_n(e);
    if s.is_empty() {
        "1".to_string()
    } else {
        s
    }
}
