//! 0-cycles on surfaces in P^3: construction from lines and complete
//! intersections, and group operations with tolerance-aware point
//! identification.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::geometry::{Line, ProjectivePoint, SurfaceP3};
use crate::homotopy::solve;
use crate::linalg::{nullspace, rank};
use crate::poly::factored::FactoredForm;
use crate::poly::form::HomogeneousForm;
use crate::poly::roots::{find_roots, find_roots_exact, trim_leading, TRIM_REL};
use crate::poly::univariate::UniPoly;
use crate::scalar::{Field, Rational, C64};

/// A finite formal sum of points with nonzero integer multiplicities.
///
/// No two entries lie within the identification tolerance used to build the
/// cycle; entries are kept in canonical coordinate order.
#[derive(Clone, Default, PartialEq)]
pub struct ZeroCycle {
    entries: Vec<(ProjectivePoint, i64)>,
}

impl ZeroCycle {
    pub fn empty() -> Self {
        Self::default()
    }

    pub fn point(p: ProjectivePoint) -> Self {
        Self { entries: vec![(p, 1)] }
    }

    /// Builds a cycle, merging entries closer than `tol`.
    pub fn new(entries: impl IntoIterator<Item = (ProjectivePoint, i64)>, tol: f64) -> Self {
        let mut c = Self::empty();
        for (p, m) in entries {
            c.insert(p, m, tol);
        }
        c.canonicalize();
        c
    }

    fn insert(&mut self, p: ProjectivePoint, m: i64, tol: f64) {
        if m == 0 {
            return;
        }
        match self.entries.iter().position(|(q, _)| q.distance(&p) <= tol) {
            Some(i) => {
                self.entries[i].1 += m;
                if !self.entries[i].0.is_exact() && p.is_exact() {
                    self.entries[i].0 = p;
                }
                if self.entries[i].1 == 0 {
                    self.entries.remove(i);
                }
            }
            None => self.entries.push((p, m)),
        }
    }

    fn canonicalize(&mut self) {
        self.entries.sort_by(|a, b| a.0.canonical_cmp(&b.0));
    }

    pub fn entries(&self) -> &[(ProjectivePoint, i64)] {
        &self.entries
    }

    pub fn degree(&self) -> i64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn is_effective(&self) -> bool {
        self.entries.iter().all(|(_, m)| *m > 0)
    }

    /// Multiplicity of the entry identified with `p`, or 0.
    pub fn multiplicity_at(&self, p: &ProjectivePoint, tol: f64) -> i64 {
        self.entries
            .iter()
            .filter(|(q, _)| q.distance(p) <= tol)
            .map(|(_, m)| m)
            .sum()
    }

    pub fn add(&self, other: &Self, tol: f64) -> Self {
        let mut c = self.clone();
        for (p, m) in &other.entries {
            c.insert(p.clone(), *m, tol);
        }
        c.canonicalize();
        c
    }

    pub fn neg(&self) -> Self {
        Self { entries: self.entries.iter().map(|(p, m)| (p.clone(), -m)).collect() }
    }

    pub fn sub(&self, other: &Self, tol: f64) -> Self {
        self.add(&other.neg(), tol)
    }

    pub fn scale(&self, k: i64) -> Self {
        if k == 0 {
            return Self::empty();
        }
        Self { entries: self.entries.iter().map(|(p, m)| (p.clone(), m * k)).collect() }
    }

    /// Equality up to point identification at `tol`.
    pub fn eq_tol(&self, other: &Self, tol: f64) -> bool {
        self.sub(other, tol).is_empty()
    }

    pub fn to_json(&self) -> CycleJson {
        CycleJson {
            entries: self
                .entries
                .iter()
                .map(|(p, m)| EntryJson { point: p.clone(), mult: *m })
                .collect(),
            degree: self.degree(),
            effective: self.is_effective(),
        }
    }

    pub fn from_json(j: &CycleJson, tol: f64) -> Self {
        Self::new(j.entries.iter().map(|e| (e.point.clone(), e.mult)), tol)
    }
}

impl fmt::Display for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "0");
        }
        let parts: Vec<String> = self.entries.iter().map(|(p, m)| format!("{m}*{p}")).collect();
        write!(f, "{}", parts.join(" + "))
    }
}

impl fmt::Debug for ZeroCycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "ZeroCycle[{self}]")
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntryJson {
    pub point: ProjectivePoint,
    pub mult: i64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CycleJson {
    pub entries: Vec<EntryJson>,
    pub degree: i64,
    pub effective: bool,
}

/// A form restricted to a line `p + lambda q`.
#[derive(Clone, Debug, PartialEq)]
pub enum LineRestriction {
    Exact { poly: UniPoly<Rational>, infinity: usize },
    Numeric { poly: UniPoly<C64>, infinity: usize },
}

impl LineRestriction {
    /// Multiplicity of the parameter value `lambda = infinity`, i.e. of `q`.
    pub fn infinity_multiplicity(&self) -> usize {
        match self {
            Self::Exact { infinity, .. } | Self::Numeric { infinity, .. } => *infinity,
        }
    }
}

/// Restricts `f` to the line, parametrized as `p + lambda q`.
///
/// Fails with [`Error::LineOnSurface`] when `f` vanishes on the line.
pub fn restrict_to_line(f: &HomogeneousForm<Rational>, line: &Line) -> Result<LineRestriction> {
    let d = f.degree() as usize;
    if let (Some(p), Some(q)) = (line.p.exact_coords(), line.q.exact_coords()) {
        let g = f.substitute_linear(&[p.to_vec(), q.to_vec()]);
        let coeffs: Vec<Rational> = (0..=d).map(|k| g.coeff(&[(d - k) as u32, k as u32])).collect();
        let poly = UniPoly::new(coeffs);
        let deg = match poly.degree() {
            None => return Err(Error::LineOnSurface),
            Some(k) => k,
        };
        return Ok(LineRestriction::Exact { poly, infinity: d - deg });
    }
    let p = line.p.coords_in::<C64>().expect("complex coordinates");
    let q = line.q.coords_in::<C64>().expect("complex coordinates");
    let fc = f.to_c64();
    let g = fc.substitute_linear(&[p.clone(), q.clone()]);
    let coeffs: Vec<C64> = (0..=d).map(|k| g.coeff(&[(d - k) as u32, k as u32])).collect();
    let size = |v: &[C64]| v.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let bound = fc.coeff_norm() * (2.0 * size(&p).max(size(&q))).powi(d as i32);
    if coeffs.iter().all(|c| c.norm() <= 1e-11 * bound) {
        return Err(Error::LineOnSurface);
    }
    let (poly, dropped) = trim_leading(&UniPoly::new(coeffs.clone()), TRIM_REL);
    let infinity = d - poly.degree().unwrap_or(0);
    debug_assert!(dropped + coeffs.len() >= d + 1);
    Ok(LineRestriction::Numeric { poly, infinity })
}

fn point_on_line(line: &Line, lambda: C64) -> Result<ProjectivePoint> {
    // the same scaling of p and q that produced the restriction
    let p = line.p.coords_in::<C64>().expect("complex coordinates");
    let q = line.q.coords_in::<C64>().expect("complex coordinates");
    ProjectivePoint::numeric(p.iter().zip(&q).map(|(a, b)| a + lambda * b).collect())
}

/// The intersection cycle `(L . F)`, of degree `deg F`.
pub fn line_surface_cycle(line: &Line, surface: &SurfaceP3, cfg: &RunConfig) -> Result<ZeroCycle> {
    let restriction = restrict_to_line(surface.form(), line)?;
    let mut entries: Vec<(ProjectivePoint, i64)> = Vec::new();
    match &restriction {
        LineRestriction::Exact { poly, infinity } => {
            let p = line.p.exact_coords().expect("exact line");
            let q = line.q.exact_coords().expect("exact line");
            for (factor, k) in poly.squarefree_decomposition() {
                if factor.degree() == Some(1) {
                    let c = factor.coeffs();
                    let lambda = -c[0].clone() / c[1].clone();
                    let x: Vec<Rational> = p.iter().zip(q).map(|(a, b)| a + &lambda * b).collect();
                    entries.push((ProjectivePoint::exact(x)?, k as i64));
                } else {
                    for r in find_roots_exact(&factor, &cfg.roots())? {
                        entries.push((point_on_line(line, r.value)?, (r.multiplicity * k) as i64));
                    }
                }
            }
            if *infinity > 0 {
                entries.push((line.q.clone(), *infinity as i64));
            }
        }
        LineRestriction::Numeric { poly, infinity } => {
            if poly.degree().unwrap_or(0) > 0 {
                for r in find_roots(poly, &cfg.roots())? {
                    entries.push((point_on_line(line, r.value)?, r.multiplicity as i64));
                }
            }
            if *infinity > 0 {
                entries.push((line.q.clone(), *infinity as i64));
            }
        }
    }
    let cycle = ZeroCycle::new(entries, cfg.point_tol);
    if cycle.degree() != surface.degree() as i64 {
        return Err(Error::Numeric(format!(
            "line cycle has degree {} instead of {}",
            cycle.degree(),
            surface.degree()
        )));
    }
    Ok(cycle)
}

/// The cycle `[{a = h = f = 0}]`, of degree `deg a * deg h * deg f`.
///
/// Fails with [`Error::Improper`] when the intersection is not finite.
pub fn complete_intersection_cycle<S: Field>(
    a: &HomogeneousForm<S>,
    h: &HomogeneousForm<S>,
    surface: &SurfaceP3,
    cfg: &RunConfig,
) -> Result<ZeroCycle> {
    if a.nvars() != 4 || h.nvars() != 4 {
        return Err(Error::InvalidInput("forms must be in X, Y, Z, T".into()));
    }
    if a.is_zero() || h.is_zero() {
        return Err(Error::Improper("a form vanishes identically".into()));
    }
    if a.degree() == 0 || h.degree() == 0 {
        return Ok(ZeroCycle::empty());
    }
    let expected = (a.degree() * h.degree() * surface.degree()) as i64;
    let tol = 1e-12;
    let cycle = if a.degree() == 1 && h.degree() == 1 {
        let line = line_from_planes(a, h, tol)?;
        match line_surface_cycle(&line, surface, cfg) {
            Err(Error::LineOnSurface) => return Err(Error::Improper("the line lies on the surface".into())),
            other => other?,
        }
    } else if a.degree() == 1 || h.degree() == 1 {
        let (plane, other) = if a.degree() == 1 { (a, h) } else { (h, a) };
        let coeffs = plane.linear_coeffs().expect("linear");
        let basis = nullspace(&[coeffs], 4, tol);
        let g = other.substitute_linear(&basis).to_c64();
        let f = surface.form().map(S::from_rational).substitute_linear(&basis).to_c64();
        let sols = solve(&[g, f], &cfg.homotopy(0x91a7e))?;
        let bc: Vec<Vec<C64>> = basis.iter().map(|v| v.iter().map(|c| c.to_c64()).collect()).collect();
        let mut entries = Vec::new();
        for s in sols {
            let x: Vec<C64> = (0..4).map(|i| (0..3).map(|j| bc[j][i] * s.point[j]).sum()).collect();
            entries.push((ProjectivePoint::numeric(x)?, s.multiplicity as i64));
        }
        ZeroCycle::new(entries, cfg.point_tol)
    } else {
        let f = surface.form().to_c64();
        let sols = solve(&[a.to_c64(), h.to_c64(), f], &cfg.homotopy(0xc1c1e))?;
        let entries: Vec<(ProjectivePoint, i64)> = sols
            .into_iter()
            .map(|s| Ok((ProjectivePoint::numeric(s.point)?, s.multiplicity as i64)))
            .collect::<Result<_>>()?;
        ZeroCycle::new(entries, cfg.point_tol)
    };
    if cycle.degree() != expected {
        return Err(Error::Numeric(format!(
            "complete intersection has degree {} instead of {expected}",
            cycle.degree()
        )));
    }
    Ok(cycle)
}

/// The line `{l1 = l2 = 0}` cut out by two linear forms.
pub fn line_from_planes<S: Field>(l1: &HomogeneousForm<S>, l2: &HomogeneousForm<S>, tol: f64) -> Result<Line> {
    let linear = |f: &HomogeneousForm<S>| {
        f.linear_coeffs().ok_or_else(|| Error::InvalidInput("expected a linear form".into()))
    };
    let rows = vec![linear(l1)?, linear(l2)?];
    if rank(&rows, tol) < 2 {
        return Err(Error::Improper("the two planes coincide".into()));
    }
    let basis = nullspace(&rows, 4, tol);
    let pts: Vec<ProjectivePoint> = basis
        .iter()
        .map(|v| match v.iter().map(|c| c.to_rational()).collect::<Option<Vec<Rational>>>() {
            Some(q) => ProjectivePoint::exact(q),
            None => ProjectivePoint::numeric(v.iter().map(|c| c.to_c64()).collect()),
        })
        .collect::<Result<_>>()?;
    Line::new(pts[0].clone(), pts[1].clone())
}

/// [`complete_intersection_cycle`] extended additively over factors.
pub fn factored_ci_cycle<S: Field>(
    a: &FactoredForm<S>,
    h: &FactoredForm<S>,
    surface: &SurfaceP3,
    cfg: &RunConfig,
) -> Result<ZeroCycle> {
    let mut total = ZeroCycle::empty();
    for (fa, ka) in a.factors() {
        for (fh, kh) in h.factors() {
            let part = complete_intersection_cycle(fa, fh, surface, cfg)?;
            total = total.add(&part.scale((ka * kh) as i64), cfg.point_tol);
        }
    }
    Ok(total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;

    fn pt(c: [i64; 4]) -> ProjectivePoint {
        ProjectivePoint::from_ints(c).unwrap()
    }

    fn cfg() -> RunConfig {
        RunConfig::default()
    }

    #[test]
    fn quadric_line_through_two_points() {
        let s = SurfaceP3::parse("X*T - Y*Z").unwrap();
        let l = Line::new(pt([1, 0, 0, 0]), pt([0, 0, 0, 1])).unwrap();
        let r = restrict_to_line(s.form(), &l).unwrap();
        match &r {
            LineRestriction::Exact { poly, infinity } => {
                assert_eq!(*infinity, 1);
                assert_eq!(poly.degree(), Some(1));
                assert!(poly.coeffs()[0].is_zero());
            }
            _ => panic!("expected exact restriction"),
        }
        let c = line_surface_cycle(&l, &s, &cfg()).unwrap();
        let expect = ZeroCycle::new([(pt([1, 0, 0, 0]), 1), (pt([0, 0, 0, 1]), 1)], 1e-7);
        assert_eq!(c, expect);
    }

    #[test]
    fn tangent_line_gives_double_point() {
        let s = SurfaceP3::parse("X^2+Y^2+Z^2-T^2").unwrap();
        let l = Line::new(pt([1, 0, 0, 1]), pt([0, 0, 1, 0])).unwrap();
        let c = line_surface_cycle(&l, &s, &cfg()).unwrap();
        assert_eq!(c.entries(), &[(pt([1, 0, 0, 1]), 2)]);
    }

    #[test]
    fn line_on_surface_is_signalled() {
        let s = SurfaceP3::parse("X").unwrap();
        let l = Line::new(pt([0, 1, 0, 0]), pt([0, 0, 1, 0])).unwrap();
        assert_eq!(restrict_to_line(s.form(), &l), Err(Error::LineOnSurface));
        assert!(matches!(line_surface_cycle(&l, &s, &cfg()), Err(Error::LineOnSurface)));
    }

    #[test]
    fn group_laws() {
        let tol = 1e-7;
        let a = ZeroCycle::new([(pt([1, 2, 3, 4]), 2), (pt([0, 1, 0, 1]), -1)], tol);
        assert!(a.add(&a.neg(), tol).is_empty());
        let p = ZeroCycle::point(pt([1, 0, 0, 0]));
        let q = ZeroCycle::point(pt([0, 1, 0, 0]));
        assert_eq!(p.add(&q, tol).sub(&q, tol), p);
        let near = ProjectivePoint::numeric(vec![C64::new(1.0, 0.0), C64::new(1e-9, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)]).unwrap();
        let merged = p.add(&ZeroCycle::new([(near, 2)], tol), tol);
        assert_eq!(merged.len(), 1);
        assert_eq!(merged.degree(), 3);
        assert!(merged.entries()[0].0.is_exact());
    }

    #[test]
    fn json_round_trip() {
        let tol = 1e-7;
        let a = ZeroCycle::new([(pt([1, 2, 3, 4]), 2), (pt([0, 1, 0, 1]), -1)], tol);
        let text = serde_json::to_string(&a.to_json()).unwrap();
        let back: CycleJson = serde_json::from_str(&text).unwrap();
        assert_eq!(ZeroCycle::from_json(&back, tol), a);
        assert!(!a.is_effective());
    }

    #[test]
    fn coordinate_planes_meet_plane() {
        let s = SurfaceP3::parse("Z").unwrap();
        let a: HomogeneousForm = "X".parse().unwrap();
        let h: HomogeneousForm = "Y".parse().unwrap();
        let c = complete_intersection_cycle(&a, &h, &s, &cfg()).unwrap();
        assert_eq!(c.entries(), &[(pt([0, 0, 0, 1]), 1)]);
    }

    #[test]
    fn planes_containing_a_ruling_are_improper() {
        let s = SurfaceP3::parse("X*T - Y*Z").unwrap();
        let a: HomogeneousForm = "X".parse().unwrap();
        let h: HomogeneousForm = "Y".parse().unwrap();
        assert!(matches!(complete_intersection_cycle(&a, &h, &s, &cfg()), Err(Error::Improper(_))));
    }

    #[test]
    fn plane_and_quadric_on_quartic() {
        let s = SurfaceP3::parse("X^4 + 2*Y^4 - Z^4 + 3*T^4 - X*Y*Z*T + Y^2*T^2").unwrap();
        let a: HomogeneousForm = "X + 2*Y - Z + T".parse().unwrap();
        let h: HomogeneousForm = "X*Y - Z^2 + 3*T^2 + Y*T".parse().unwrap();
        let c = complete_intersection_cycle(&a, &h, &s, &cfg()).unwrap();
        assert_eq!(c.degree(), 8);
        for (p, m) in c.entries() {
            assert_eq!(*m, 1);
            assert!(s.residual(p) < 1e-9);
        }
        let c2 = complete_intersection_cycle(&h, &a, &s, &cfg()).unwrap();
        assert!(c.eq_tol(&c2, 1e-7));
    }
}
