//! Points, lines and surfaces in P^3.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::homotopy::{chordal, cmp_points, normalize_c64};
use crate::linalg::rank;
use crate::poly::form::HomogeneousForm;
use crate::scalar::{fmt_complex, fmt_rational, parse_complex, parse_rational, Field, Rational, C64};

/// A point of P^3, exact or numeric.
///
/// Exact points are scaled so the first nonzero coordinate is 1; numeric
/// points so the coordinate of largest modulus is 1.
#[derive(Clone, PartialEq)]
pub enum ProjectivePoint {
    Exact(Vec<Rational>),
    Numeric(Vec<C64>),
}

impl ProjectivePoint {
    pub fn exact(coords: Vec<Rational>) -> Result<Self> {
        if coords.len() != 4 {
            return Err(Error::InvalidInput(format!("a point of P^3 needs 4 coordinates, got {}", coords.len())));
        }
        let lead = coords
            .iter()
            .find(|c| !c.is_zero())
            .cloned()
            .ok_or_else(|| Error::InvalidInput("all coordinates are zero".into()))?;
        Ok(Self::Exact(coords.iter().map(|c| c / &lead).collect()))
    }

    pub fn numeric(coords: Vec<C64>) -> Result<Self> {
        if coords.len() != 4 {
            return Err(Error::InvalidInput(format!("a point of P^3 needs 4 coordinates, got {}", coords.len())));
        }
        if coords.iter().all(|c| c.norm() == 0.0) || coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("point has no finite nonzero coordinate".into()));
        }
        Ok(Self::Numeric(normalize_c64(&coords)))
    }

    pub fn from_ints(c: [i64; 4]) -> Result<Self> {
        Self::exact(c.iter().map(|&v| Rational::from_integer(v.into())).collect())
    }

    /// Parses `"1, 0, -2/3, 1"` (optionally in parentheses, `:` also
    /// separating). Entries in decimal or complex notation give a numeric point.
    pub fn parse(s: &str) -> Result<Self> {
        let body = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        let parts: Vec<&str> = body.split([',', ':']).map(|p| p.trim()).collect();
        if parts.len() != 4 {
            return Err(Error::InvalidInput(format!("expected 4 coordinates in `{s}`")));
        }
        let exact: Option<Vec<Rational>> = parts.iter().map(|p| parse_rational(p)).collect();
        if let Some(q) = exact {
            return Self::exact(q);
        }
        let num: Option<Vec<C64>> = parts.iter().map(|p| parse_complex(p)).collect();
        match num {
            Some(v) => Self::numeric(v),
            None => Err(Error::InvalidInput(format!("cannot parse point `{s}`"))),
        }
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Self::Exact(_))
    }

    pub fn exact_coords(&self) -> Option<&[Rational]> {
        match self {
            Self::Exact(c) => Some(c),
            Self::Numeric(_) => None,
        }
    }

    /// Coordinates as complex numbers, scaled so the largest has modulus 1.
    pub fn to_c64(&self) -> Vec<C64> {
        match self {
            Self::Exact(c) => normalize_c64(&c.iter().map(|v| v.to_c64()).collect::<Vec<_>>()),
            Self::Numeric(c) => c.clone(),
        }
    }

    /// Coordinates converted into the field `S`; `None` for a numeric point
    /// requested over the rationals.
    pub fn coords_in<S: Field>(&self) -> Option<Vec<S>> {
        match self {
            Self::Exact(c) => Some(c.iter().map(S::from_rational).collect()),
            Self::Numeric(c) => c.iter().map(|v| S::from_c64(*v)).collect(),
        }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        if let (Self::Exact(a), Self::Exact(b)) = (self, other) {
            if a == b {
                return 0.0;
            }
        }
        chordal(&self.to_c64(), &other.to_c64())
    }

    /// Text form of each coordinate.
    pub fn coord_strings(&self) -> Vec<String> {
        match self {
            Self::Exact(c) => c.iter().map(fmt_rational).collect(),
            Self::Numeric(c) => c.iter().map(|v| fmt_complex(*v)).collect(),
        }
    }

    pub fn from_strings(s: &[String]) -> Result<Self> {
        Self::parse(&s.join(","))
    }

    /// Canonical order: lexicographic on the normalized complex coordinates.
    pub fn canonical_cmp(&self, other: &Self) -> std::cmp::Ordering {
        cmp_points(&self.to_c64(), &other.to_c64())
    }
}

impl fmt::Display for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.coord_strings().join(", "))
    }
}

impl fmt::Debug for ProjectivePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl Serialize for ProjectivePoint {
    fn serialize<Ser: serde::Serializer>(&self, s: Ser) -> std::result::Result<Ser::Ok, Ser::Error> {
        self.coord_strings().serialize(s)
    }
}

impl<'de> Deserialize<'de> for ProjectivePoint {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        Self::from_strings(&v).map_err(serde::de::Error::custom)
    }
}

/// A line of P^3 spanned by two distinct points.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Line {
    pub p: ProjectivePoint,
    pub q: ProjectivePoint,
}

impl Line {
    pub fn new(p: ProjectivePoint, q: ProjectivePoint) -> Result<Self> {
        let distinct = match (&p, &q) {
            (ProjectivePoint::Exact(a), ProjectivePoint::Exact(b)) => rank(&[a.clone(), b.clone()], 0.0) == 2,
            _ => p.distance(&q) > 1e-10,
        };
        if !distinct {
            return Err(Error::Degenerate("line spanned by coincident points".into()));
        }
        Ok(Self { p, q })
    }

    pub fn is_exact(&self) -> bool {
        self.p.is_exact() && self.q.is_exact()
    }

    /// Plücker coordinates `p_ij = p_i q_j - p_j q_i` for
    /// `ij = 01, 02, 03, 12, 13, 23`, scaled to unit norm with the largest
    /// entry real and positive.
    pub fn plucker(&self) -> [C64; 6] {
        let a = self.p.to_c64();
        let b = self.q.to_c64();
        let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        let mut out = [C64::zero(); 6];
        for (k, &(i, j)) in idx.iter().enumerate() {
            out[k] = a[i] * b[j] - a[j] * b[i];
        }
        let norm: f64 = out.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        let big = out.iter().copied().fold(C64::zero(), |m, v| if v.norm() > m.norm() { v } else { m });
        let phase = big.conj() / big.norm();
        for v in &mut out {
            *v = *v * phase / norm;
        }
        out
    }

    /// Exact Plücker coordinates of a rational line.
    pub fn plucker_exact(&self) -> Option<[Rational; 6]> {
        let a = self.p.exact_coords()?;
        let b = self.q.exact_coords()?;
        let idx = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)];
        Some(idx.map(|(i, j)| &a[i] * &b[j] - &a[j] * &b[i]))
    }

    /// Sine of the angle between `x` and the plane of the line in C^4.
    pub fn distance_to(&self, x: &ProjectivePoint) -> f64 {
        if let (Some(a), Some(b), Some(c)) = (self.p.exact_coords(), self.q.exact_coords(), x.exact_coords()) {
            if rank(&[a.to_vec(), b.to_vec(), c.to_vec()], 0.0) == 2 {
                return 0.0;
            }
        }
        let a = self.p.to_c64();
        let b = self.q.to_c64();
        let v = x.to_c64();
        // Gram-Schmidt on (a, b), then measure the orthogonal remainder of v
        let dot = |u: &[C64], w: &[C64]| u.iter().zip(w).map(|(p, q)| p.conj() * q).sum::<C64>();
        let na = dot(&a, &a).re.sqrt();
        let e1: Vec<C64> = a.iter().map(|z| z / na).collect();
        let pb = dot(&e1, &b);
        let r: Vec<C64> = b.iter().zip(&e1).map(|(z, e)| z - e * pb).collect();
        let nr = dot(&r, &r).re.sqrt();
        let e2: Vec<C64> = r.iter().map(|z| z / nr).collect();
        let c1 = dot(&e1, &v);
        let c2 = dot(&e2, &v);
        let rest: Vec<C64> = v.iter().zip(e1.iter().zip(&e2)).map(|(z, (x1, x2))| z - x1 * c1 - x2 * c2).collect();
        (dot(&rest, &rest).re / dot(&v, &v).re).sqrt()
    }

    pub fn contains(&self, x: &ProjectivePoint, tol: f64) -> bool {
        self.distance_to(x) <= tol
    }

    /// Whether two lines coincide.
    pub fn same_as(&self, other: &Line, tol: f64) -> bool {
        self.contains(&other.p, tol) && self.contains(&other.q, tol)
    }
}

impl fmt::Display for Line {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<{}, {}>", self.p, self.q)
    }
}

/// A surface `{f = 0}` in P^3 with its gradient.
#[derive(Clone, Debug)]
pub struct SurfaceP3 {
    f: HomogeneousForm<Rational>,
    gradient: Vec<HomogeneousForm<Rational>>,
}

impl SurfaceP3 {
    pub fn new(f: HomogeneousForm<Rational>) -> Result<Self> {
        if f.nvars() != 4 {
            return Err(Error::InvalidInput("surface equation must be a form in X, Y, Z, T".into()));
        }
        if f.is_zero() || f.degree() == 0 {
            return Err(Error::InvalidInput("surface equation must be a nonzero form of degree >= 1".into()));
        }
        let gradient = f.gradient();
        Ok(Self { f, gradient })
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::new(s.parse()?)
    }

    pub fn form(&self) -> &HomogeneousForm<Rational> {
        &self.f
    }

    pub fn degree(&self) -> u32 {
        self.f.degree()
    }

    pub fn gradient(&self) -> &[HomogeneousForm<Rational>] {
        &self.gradient
    }

    /// `|f(x)| / |f|_1` at the normalized point, zero exactly for exact
    /// points on the surface.
    pub fn residual(&self, x: &ProjectivePoint) -> f64 {
        match x {
            ProjectivePoint::Exact(c) => {
                let v = self.f.eval(c);
                if v.is_zero() {
                    0.0
                } else {
                    self.f.to_c64().eval(&x.to_c64()).norm().max(f64::MIN_POSITIVE) / self.f.coeff_norm()
                }
            }
            ProjectivePoint::Numeric(c) => self.f.eval_c64(c).norm() / self.f.coeff_norm(),
        }
    }

    pub fn contains(&self, x: &ProjectivePoint, tol: f64) -> bool {
        self.residual(x) <= tol
    }

    /// Whether the gradient vanishes at `x` (to `tol`, relative).
    pub fn is_singular_at(&self, x: &ProjectivePoint, tol: f64) -> bool {
        match x {
            ProjectivePoint::Exact(c) => self.gradient.iter().all(|g| g.eval(c).is_zero()),
            ProjectivePoint::Numeric(c) => {
                let scale = self.f.coeff_norm() * self.degree() as f64;
                self.gradient.iter().all(|g| g.eval_c64(c).norm() <= tol * scale)
            }
        }
    }
}

impl fmt::Display for SurfaceP3 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.f)
    }
}
