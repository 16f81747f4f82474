use std::fmt;

use crate::error::{Error, Result};
use crate::poly::form::HomogeneousForm;
use crate::scalar::Field;

/// A form kept as a product of factors with exponents.
///
/// Intersection cycles are additive over factors, so keeping products
/// unexpanded lets complete intersections be computed factor by factor.
#[derive(Clone, PartialEq)]
pub struct FactoredForm<S> {
    nvars: usize,
    factors: Vec<(HomogeneousForm<S>, u32)>,
}

impl<S: Field> FactoredForm<S> {
    pub fn new(f: HomogeneousForm<S>) -> Self {
        Self { nvars: f.nvars(), factors: vec![(f, 1)] }
    }

    pub fn factors(&self) -> &[(HomogeneousForm<S>, u32)] {
        &self.factors
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degree(&self) -> u32 {
        self.factors.iter().map(|(f, k)| f.degree() * k).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.factors.iter().any(|(f, _)| f.is_zero())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.nvars != other.nvars {
            return Err(Error::InvalidInput("factors in different numbers of variables".into()));
        }
        let mut factors = self.factors.clone();
        for (f, k) in &other.factors {
            match factors.iter_mut().find(|(g, _)| g == f) {
                Some(entry) => entry.1 += k,
                None => factors.push((f.clone(), *k)),
            }
        }
        Ok(Self { nvars: self.nvars, factors })
    }

    pub fn pow(&self, k: u32) -> Self {
        Self {
            nvars: self.nvars,
            factors: self.factors.iter().map(|(f, e)| (f.clone(), e * k)).collect(),
        }
    }

    pub fn expand(&self) -> HomogeneousForm<S> {
        self.factors
            .iter()
            .fold(HomogeneousForm::constant(self.nvars, S::one()), |acc, (f, k)| acc.mul(&f.pow(*k)))
    }

    pub fn scale(&self, c: &S) -> Self {
        let mut out = self.clone();
        out.factors[0].0 = out.factors[0].0.scale(c);
        out
    }

    pub fn map<T: Field>(&self, g: impl Fn(&S) -> T + Copy) -> FactoredForm<T> {
        FactoredForm {
            nvars: self.nvars,
            factors: self.factors.iter().map(|(f, k)| (f.map(g), *k)).collect(),
        }
    }
}

impl<S: Field> From<HomogeneousForm<S>> for FactoredForm<S> {
    fn from(f: HomogeneousForm<S>) -> Self {
        Self::new(f)
    }
}

impl<S: Field> fmt::Display for FactoredForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.len() == 1 && self.factors[0].1 == 1 {
            return write!(f, "{}", self.factors[0].0);
        }
        let parts: Vec<String> = self
            .factors
            .iter()
            .map(|(g, k)| if *k == 1 { format!("({g})") } else { format!("({g})^{k}") })
            .collect();
        write!(f, "{}", parts.join("*"))
    }
}

impl<S: Field> fmt::Debug for FactoredForm<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FactoredForm({self})")
    }
}
