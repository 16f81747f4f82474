//! Lines with high contact order on a surface, polar loci, and the point
//! equivalences they produce.

use std::collections::VecDeque;

use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::chow::{star_check, StarReport};
use crate::config::RunConfig;
use crate::cycles::{line_surface_cycle, ZeroCycle};
use crate::error::{Error, Result};
use crate::expression::{lines_to_expression, verify_expression, CIExpression};
use crate::geometry::{Line, ProjectivePoint, SurfaceP3};
use crate::homotopy::{normalize_c64, solve};
use crate::linalg::nullspace;
use crate::poly::form::HomogeneousForm;
use crate::poly::roots::{find_roots, find_roots_exact, trim_leading, TRIM_REL};
use crate::poly::taylor::taylor_part;
use crate::poly::univariate::UniPoly;
use crate::quadratic::{quadratic_roots, Surd};
use crate::sample::{plane_point, random_affine_point, random_form, random_nonzero_int, HEIGHT};
use crate::scalar::{fmt_complex, fmt_rational, Field, Rational, C64};

/// Relative residual below which a numeric point counts as lying on a
/// surface.
pub const ON_SURFACE_TOL: f64 = 1e-8;
/// Distance below which a point counts as lying on a line.
const MEMBERSHIP_TOL: f64 = 1e-6;
/// Relative size below which a numeric polynomial counts as zero.
const NUMERIC_ZERO: f64 = 1e-10;

fn require_on_surface(surface: &SurfaceP3, p: &ProjectivePoint) -> Result<()> {
    let ok = match p {
        ProjectivePoint::Exact(_) => surface.residual(p) == 0.0,
        ProjectivePoint::Numeric(_) => surface.residual(p) <= ON_SURFACE_TOL,
    };
    if ok {
        Ok(())
    } else {
        Err(Error::NotOnSurface(format!("{p} (residual {:.3e})", surface.residual(p))))
    }
}

/// The coordinate used as `T` for Taylor expansion at `p`.
fn chart_index(p: &ProjectivePoint) -> usize {
    match p {
        ProjectivePoint::Exact(c) => {
            if !c[3].is_zero() {
                3
            } else {
                c.iter().position(|v| !v.is_zero()).expect("nonzero point")
            }
        }
        ProjectivePoint::Numeric(c) => {
            let mut best = 3;
            for i in 0..4 {
                if c[i].norm() > c[best].norm() {
                    best = i;
                }
            }
            best
        }
    }
}

fn swap_perm(k: usize) -> [usize; 4] {
    let mut perm = [0, 1, 2, 3];
    perm.swap(k, 3);
    perm
}

/// A tangent direction `(a, b, c)` in the affine chart at the base point.
#[derive(Clone, Debug, PartialEq)]
pub enum Direction {
    Rational([Rational; 3]),
    Quadratic([Surd; 3]),
    Numeric([C64; 3]),
}

impl Direction {
    pub fn to_c64(&self) -> [C64; 3] {
        match self {
            Self::Rational(v) => v.clone().map(|c| c.to_c64()),
            Self::Quadratic(v) => v.clone().map(|c| c.to_c64()),
            Self::Numeric(v) => *v,
        }
    }

    pub fn is_exact(&self) -> bool {
        !matches!(self, Self::Numeric(_))
    }

    pub fn coord_strings(&self) -> Vec<String> {
        match self {
            Self::Rational(v) => v.iter().map(fmt_rational).collect(),
            Self::Quadratic(v) => v.iter().map(|c| c.to_string()).collect(),
            Self::Numeric(v) => normalize_c64(v).into_iter().map(fmt_complex).collect(),
        }
    }

    /// The point `(a, b, c, 0)` of the chart, in original coordinates.
    fn point_at_infinity(&self, chart: usize) -> Result<ProjectivePoint> {
        let perm = swap_perm(chart);
        match self {
            Self::Rational(v) => {
                let local: Vec<Rational> = v.iter().cloned().chain([Rational::zero()]).collect();
                ProjectivePoint::exact(perm.iter().map(|&j| local[j].clone()).collect())
            }
            _ => {
                let v = self.to_c64();
                let local: Vec<C64> = v.iter().copied().chain([C64::zero()]).collect();
                ProjectivePoint::numeric(perm.iter().map(|&j| local[j]).collect())
            }
        }
    }

    /// Whether the Taylor parts vanish exactly at this direction; `None`
    /// for numeric directions.
    fn vanishes_exactly(&self, parts: &[HomogeneousForm<Rational>]) -> Option<bool> {
        match self {
            Self::Rational(v) => Some(parts.iter().all(|f| f.eval(v).is_zero())),
            Self::Quadratic(v) => Some(parts.iter().all(|f| Surd::eval_form(f, v).is_zero())),
            Self::Numeric(_) => None,
        }
    }
}

#[derive(Clone, Debug)]
pub struct ContactDirection {
    pub direction: Direction,
    /// Number of coincident solutions at this direction.
    pub multiplicity: usize,
    pub line: Line,
    /// Multiplicity of the base point in `(L . F)`; `None` when `L` lies on
    /// the surface.
    pub contact_order: Option<i64>,
    /// Exact re-verification of the contact equations, where available.
    pub exact_check: Option<bool>,
    /// Largest relative value of the contact equations at the direction.
    pub residual: f64,
}

#[derive(Clone, Debug)]
pub struct ContactLines {
    pub base: ProjectivePoint,
    pub order: u32,
    /// Coordinate playing the role of `T` in the chart.
    pub chart: usize,
    pub directions: Vec<ContactDirection>,
}

impl ContactLines {
    /// Number of directions counted with multiplicity.
    pub fn count(&self) -> usize {
        self.directions.iter().map(|d| d.multiplicity).sum()
    }
}

/// Binary form `g(s, t)` as a polynomial in `lambda = t / s`, with the
/// multiplicity of the root `s = 0`.
fn binary_to_uni<S: Field>(g: &HomogeneousForm<S>) -> (UniPoly<S>, usize) {
    let d = g.degree() as usize;
    let p = UniPoly::new((0..=d).map(|j| g.coeff(&[(d - j) as u32, j as u32])).collect());
    let deg = p.degree().unwrap_or(0);
    (p, d - deg)
}

/// Directions `(a, b, c)` through `p` along which lines meet `F` with
/// multiplicity at least `r` at `p`: the common zeros of the Taylor parts
/// `(f_1)_p, ..., (f_{r-1})_p`.
pub fn contact_directions(surface: &SurfaceP3, p: &ProjectivePoint, r: u32, cfg: &RunConfig) -> Result<ContactLines> {
    if r < 2 {
        return Err(Error::InvalidInput("contact order must be at least 2".into()));
    }
    require_on_surface(surface, p)?;
    if surface.is_singular_at(p, NUMERIC_ZERO) {
        return Err(Error::SingularPoint(p.to_string()));
    }
    if r == 2 {
        return Err(Error::PositiveDimensional("every tangent direction has contact order 2".into()));
    }
    let chart = chart_index(p);
    let perm = swap_perm(chart);
    let (directions, exact_parts) = match p {
        ProjectivePoint::Exact(c) => {
            let g = surface.form().permute(&perm);
            let local: Vec<Rational> = perm.iter().map(|&j| c[j].clone()).collect();
            let parts: Vec<HomogeneousForm<Rational>> =
                (1..r).map(|i| taylor_part(&g, &local, i)).collect::<Result<_>>()?;
            (exact_directions(&parts, cfg)?, Some(parts))
        }
        ProjectivePoint::Numeric(c) => {
            let g = surface.form().to_c64().permute(&perm);
            let local: Vec<C64> = perm.iter().map(|&j| c[j]).collect();
            let parts: Vec<HomogeneousForm<C64>> =
                (1..r).map(|i| taylor_part(&g, &local, i)).collect::<Result<_>>()?;
            (numeric_directions(&parts, cfg)?, None)
        }
    };
    let numeric_parts: Vec<HomogeneousForm<C64>> = match p {
        ProjectivePoint::Exact(c) => {
            let g = surface.form().permute(&perm);
            let local: Vec<Rational> = perm.iter().map(|&j| c[j].clone()).collect();
            (1..r).map(|i| taylor_part(&g, &local, i).map(|f| f.to_c64())).collect::<Result<_>>()?
        }
        ProjectivePoint::Numeric(c) => {
            let g = surface.form().to_c64().permute(&perm);
            let local: Vec<C64> = perm.iter().map(|&j| c[j]).collect();
            (1..r).map(|i| taylor_part(&g, &local, i)).collect::<Result<_>>()?
        }
    };
    let mut out = Vec::new();
    for (direction, multiplicity) in directions {
        let v = normalize_c64(&direction.to_c64());
        let residual = numeric_parts
            .iter()
            .map(|f| f.eval_c64(&v).norm() / f.coeff_norm().max(f64::MIN_POSITIVE))
            .fold(0.0, f64::max);
        let exact_check = exact_parts.as_ref().and_then(|parts| direction.vanishes_exactly(parts));
        let line = Line::new(p.clone(), direction.point_at_infinity(chart)?)?;
        let contact_order = match line_surface_cycle(&line, surface, cfg) {
            Ok(c) => Some(c.multiplicity_at(p, cfg.point_tol)),
            Err(Error::LineOnSurface) => None,
            Err(e) => return Err(e),
        };
        out.push(ContactDirection { direction, multiplicity, line, contact_order, exact_check, residual });
    }
    out.sort_by(|a, b| crate::homotopy::cmp_points(&normalize_c64(&a.direction.to_c64()), &normalize_c64(&b.direction.to_c64())));
    Ok(ContactLines { base: p.clone(), order: r, chart, directions: out })
}

fn combine<S: Field>(v1: &[S], v2: &[S], lambda: &S) -> [S; 3] {
    std::array::from_fn(|i| v1[i].clone() + lambda.clone() * v2[i].clone())
}

fn exact_directions(parts: &[HomogeneousForm<Rational>], cfg: &RunConfig) -> Result<Vec<(Direction, usize)>> {
    let tangent = parts[0].linear_coeffs().expect("first Taylor part is linear");
    let basis = nullspace(&[tangent], 3, 0.0);
    let (v1, v2) = (&basis[0], &basis[1]);
    let mut gcd: Option<UniPoly<Rational>> = None;
    let mut at_infinity = usize::MAX;
    for part in &parts[1..] {
        let restricted = part.substitute_linear(&[v1.clone(), v2.clone()]);
        if restricted.is_zero() {
            continue;
        }
        let (poly, inf) = binary_to_uni(&restricted);
        at_infinity = at_infinity.min(inf);
        gcd = Some(match gcd {
            None => poly,
            Some(g) => g.gcd(&poly),
        });
    }
    let Some(gcd) = gcd else {
        return Err(Error::PositiveDimensional(format!(
            "the contact conditions of order {} cut out the whole tangent line",
            parts.len() + 1
        )));
    };
    let mut out = Vec::new();
    if at_infinity > 0 {
        out.push((Direction::Rational([v2[0].clone(), v2[1].clone(), v2[2].clone()]), at_infinity));
    }
    if gcd.degree().unwrap_or(0) == 0 {
        return Ok(out);
    }
    for (factor, k) in gcd.squarefree_decomposition() {
        let c = factor.coeffs();
        match factor.degree() {
            Some(1) => {
                let lambda = -c[0].clone() / c[1].clone();
                out.push((Direction::Rational(combine(v1, v2, &lambda)), k));
            }
            Some(2) => {
                for root in quadratic_roots(&c[2], &c[1], &c[0]) {
                    if root.irrational.is_zero() {
                        out.push((Direction::Rational(combine(v1, v2, &root.rational)), k));
                    } else {
                        let coords = std::array::from_fn(|i| {
                            Surd::from_rational(v1[i].clone(), &root.radicand).add(&root.scale(&v2[i]))
                        });
                        out.push((Direction::Quadratic(coords), k));
                    }
                }
            }
            _ => {
                let v1c: Vec<C64> = v1.iter().map(|c| c.to_c64()).collect();
                let v2c: Vec<C64> = v2.iter().map(|c| c.to_c64()).collect();
                for root in find_roots_exact(&factor, &cfg.roots())? {
                    out.push((Direction::Numeric(combine(&v1c, &v2c, &root.value)), root.multiplicity * k));
                }
            }
        }
    }
    Ok(out)
}

fn numeric_directions(parts: &[HomogeneousForm<C64>], cfg: &RunConfig) -> Result<Vec<(Direction, usize)>> {
    let tangent = parts[0].linear_coeffs().expect("first Taylor part is linear");
    let basis = nullspace(&[tangent], 3, 1e-13);
    let (v1, v2) = (&basis[0], &basis[1]);
    let mut conditions: Vec<UniPoly<C64>> = Vec::new();
    let mut infinities = Vec::new();
    let scale = parts[0].coeff_norm();
    for part in &parts[1..] {
        let restricted = part.substitute_linear(&[v1.clone(), v2.clone()]);
        let size = restricted.coeff_norm();
        if size <= NUMERIC_ZERO * scale.max(part.coeff_norm()) {
            continue;
        }
        let (raw, _) = binary_to_uni(&restricted);
        let (poly, dropped) = trim_leading(&raw, TRIM_REL);
        let inf = restricted.degree() as usize - (raw.coeffs().len() - 1) + dropped;
        conditions.push(poly.scale(&C64::new(1.0 / size, 0.0)));
        infinities.push(inf);
    }
    if conditions.is_empty() {
        return Err(Error::PositiveDimensional(format!(
            "the contact conditions of order {} cut out the whole tangent line",
            parts.len() + 1
        )));
    }
    let satisfied = |lambda: C64| {
        conditions.iter().all(|p| {
            let d = p.degree().unwrap_or(0) as i32;
            p.eval(&lambda).norm() <= 1e-8 * (1.0 + lambda.norm()).powi(d)
        })
    };
    let mut out = Vec::new();
    let at_infinity = *infinities.iter().min().expect("nonempty");
    if infinities[0] > 0 && at_infinity > 0 {
        out.push((Direction::Numeric([v2[0], v2[1], v2[2]]), at_infinity));
    }
    if conditions[0].degree().unwrap_or(0) > 0 {
        for root in find_roots(&conditions[0], &cfg.roots())? {
            if satisfied(root.value) {
                out.push((Direction::Numeric(combine(v1, v2, &root.value)), root.multiplicity));
            }
        }
    }
    Ok(out)
}

/// The polar conditions `f, D_q f, ..., D_q^{k} f` where `D_q` is the
/// derivative in the direction `q`.
fn polar_forms(surface: &SurfaceP3, q: &ProjectivePoint, k: u32) -> Vec<HomogeneousForm<C64>> {
    let mut out = Vec::new();
    match q.exact_coords() {
        Some(c) => {
            let mut g = surface.form().clone();
            for _ in 0..=k {
                out.push(g.to_c64());
                g = g.polar(c);
            }
        }
        None => {
            let c = q.to_c64();
            let mut g = surface.form().to_c64();
            for _ in 0..=k {
                out.push(g.clone());
                g = g.polar(&c);
            }
        }
    }
    out
}

fn relative_value(f: &HomogeneousForm<C64>, x: &[C64]) -> f64 {
    let n = f.coeff_norm();
    if n == 0.0 {
        return 0.0;
    }
    f.eval_c64(&normalize_c64(x)).norm() / n
}

#[derive(Clone, Debug)]
pub struct PolarPoints {
    pub order: u32,
    pub cycle: ZeroCycle,
    /// Bezout number `d (d - 1) (d - 2)` of the defining system.
    pub expected_degree: i64,
    /// Multiplicity of the solution at `q` itself.
    pub at_seed: i64,
    pub max_residual: f64,
}

impl PolarPoints {
    pub fn distinct(&self) -> usize {
        self.cycle.len()
    }
}

#[derive(Clone, Debug)]
pub struct PolarCurve {
    /// Degree `d (d - 1)` of the curve `{f = D_q f = 0}`.
    pub degree: i64,
    /// The curve's intersection with a random plane.
    pub section: ZeroCycle,
}

#[derive(Clone, Debug)]
pub enum PolarLocus {
    Curve(PolarCurve),
    Points(PolarPoints),
}

/// Points `p` of `F` with a line through `p` and `q` meeting `F` with
/// multiplicity at least `r` at `p`.
pub fn polar_locus(surface: &SurfaceP3, q: &ProjectivePoint, r: u32, cfg: &RunConfig) -> Result<PolarLocus> {
    if r < 2 {
        return Err(Error::InvalidInput("polar order must be at least 2".into()));
    }
    let d = surface.degree() as i64;
    if r == 2 {
        let forms = polar_forms(surface, q, 1);
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.derive(0x5ec7).seed);
        let plane = random_form(&mut rng, 4, 1, HEIGHT).to_c64();
        let sols = solve(&[forms[0].clone(), forms[1].clone(), plane], &cfg.homotopy(0x90a2))?;
        let section = ZeroCycle::new(
            sols.into_iter()
                .map(|s| Ok((ProjectivePoint::numeric(s.point)?, s.multiplicity as i64)))
                .collect::<Result<Vec<_>>>()?,
            cfg.point_tol,
        );
        return Ok(PolarLocus::Curve(PolarCurve { degree: d * (d - 1), section }));
    }
    let forms = polar_forms(surface, q, r - 1);
    let sols = solve(&forms[..3], &cfg.homotopy(0x90a3))?;
    let mut entries = Vec::new();
    let mut max_residual: f64 = 0.0;
    for s in sols {
        let extra = forms[3..].iter().map(|f| relative_value(f, &s.point)).fold(0.0, f64::max);
        if extra > 1e-8 {
            continue;
        }
        let res = forms.iter().map(|f| relative_value(f, &s.point)).fold(0.0, f64::max);
        max_residual = max_residual.max(res);
        entries.push((ProjectivePoint::numeric(s.point)?, s.multiplicity as i64));
    }
    let cycle = ZeroCycle::new(entries, cfg.point_tol);
    let at_seed = cycle.multiplicity_at(q, cfg.point_tol.max(1e-6));
    Ok(PolarLocus::Points(PolarPoints {
        order: r,
        cycle,
        expected_degree: d * (d - 1) * (d - 2),
        at_seed,
        max_residual,
    }))
}

/// One equivalence `q ~ q_i` from a base point `p` with `(L1 . F) = 3p + q`
/// and `(L2 . F) = 3p + q_i`.
#[derive(Clone, Debug)]
pub struct EquivPair {
    pub base: ProjectivePoint,
    pub point: ProjectivePoint,
    pub through_seed: Line,
    pub other: Line,
    /// Whether `q + (L2 . F) = q_i + (L1 . F)` holds as cycles.
    pub verified: bool,
}

impl EquivPair {
    /// The expression `q - q_i = [a = h = f = 0] - [b = h = f = 0]`.
    pub fn expression(&self) -> Result<CIExpression<C64>> {
        lines_to_expression(&self.through_seed, &self.other)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct DegenerateBase {
    pub point: ProjectivePoint,
    pub multiplicity: i64,
    pub reason: String,
}

#[derive(Clone, Debug)]
pub struct EquivStep {
    pub seed: ProjectivePoint,
    pub polar_degree: i64,
    pub pairs: Vec<EquivPair>,
    pub degenerate: Vec<DegenerateBase>,
    pub warnings: Vec<String>,
}

/// For each point `p` of the polar locus of `q`, the second contact-3 line at
/// `p` gives a point `q_i` rationally equivalent to `q`.
pub fn equiv_step(surface: &SurfaceP3, q: &ProjectivePoint, cfg: &RunConfig) -> Result<EquivStep> {
    if surface.degree() != 4 {
        return Err(Error::InvalidInput("the equivalence step needs a quartic".into()));
    }
    require_on_surface(surface, q)?;
    let PolarLocus::Points(polar) = polar_locus(surface, q, 3, cfg)? else {
        unreachable!("order 3 gives points")
    };
    let tol = cfg.point_tol;
    let mut pairs = Vec::new();
    let mut degenerate = Vec::new();
    let mut warnings = Vec::new();
    for (p, m) in polar.cycle.entries() {
        if p.distance(q) <= tol.max(1e-6) {
            degenerate.push(DegenerateBase { point: p.clone(), multiplicity: *m, reason: "coincides with the seed".into() });
            continue;
        }
        if *m > 1 {
            degenerate.push(DegenerateBase { point: p.clone(), multiplicity: *m, reason: "non-reduced polar point".into() });
            continue;
        }
        let lines = match contact_directions(surface, p, 3, cfg) {
            Ok(l) => l,
            Err(e) => {
                warnings.push(format!("{p}: {e}"));
                continue;
            }
        };
        let through: Vec<&ContactDirection> =
            lines.directions.iter().filter(|d| d.line.distance_to(q) <= MEMBERSHIP_TOL).collect();
        let others: Vec<&ContactDirection> =
            lines.directions.iter().filter(|d| d.line.distance_to(q) > MEMBERSHIP_TOL).collect();
        if through.is_empty() {
            let miss = lines.directions.iter().map(|d| d.line.distance_to(q)).fold(f64::INFINITY, f64::min);
            warnings.push(format!("{p}: no contact line passes through the seed (closest at {miss:.3e})"));
            continue;
        }
        if others.is_empty() || through.len() > 1 || through[0].multiplicity > 1 {
            degenerate.push(DegenerateBase {
                point: p.clone(),
                multiplicity: *m,
                reason: "both contact lines pass through the seed".into(),
            });
            continue;
        }
        let (l1, l2) = (&through[0].line, &others[0].line);
        let (c1, c2) = match (line_surface_cycle(l1, surface, cfg), line_surface_cycle(l2, surface, cfg)) {
            (Ok(a), Ok(b)) => (a, b),
            (Err(e), _) | (_, Err(e)) => {
                warnings.push(format!("{p}: {e}"));
                continue;
            }
        };
        let triple = ZeroCycle::new([(p.clone(), 3)], tol);
        let rest = c2.sub(&triple, tol);
        if rest.len() != 1 || rest.degree() != 1 || !rest.is_effective() {
            warnings.push(format!("{p}: second line does not meet the surface as 3p + q_i ({c2})"));
            continue;
        }
        let qi = rest.entries()[0].0.clone();
        let lhs = c2.add(&ZeroCycle::point(q.clone()), tol);
        let rhs = c1.add(&ZeroCycle::point(qi.clone()), tol);
        pairs.push(EquivPair {
            base: p.clone(),
            point: qi,
            through_seed: l1.clone(),
            other: l2.clone(),
            verified: lhs.eq_tol(&rhs, tol),
        });
    }
    pairs.sort_by(|a, b| a.point.canonical_cmp(&b.point).then(a.base.canonical_cmp(&b.base)));
    Ok(EquivStep { seed: q.clone(), polar_degree: polar.cycle.degree(), pairs, degenerate, warnings })
}

#[derive(Clone, Debug)]
pub struct OrbitMember {
    pub point: ProjectivePoint,
    pub round: usize,
    /// Index of the member this one was reached from.
    pub parent: Option<usize>,
    pub witness: Option<EquivPair>,
}

#[derive(Clone, Debug)]
pub struct OrbitState {
    pub members: Vec<OrbitMember>,
    pub rounds: usize,
    pub truncated: bool,
    pub warnings: Vec<String>,
}

impl OrbitState {
    /// Indices from the seed to member `i`.
    pub fn chain(&self, mut i: usize) -> Vec<usize> {
        let mut out = vec![i];
        while let Some(p) = self.members[i].parent {
            out.push(p);
            i = p;
        }
        out.reverse();
        out
    }
}

/// Breadth-first closure of [`equiv_step`] from `seed`, for at most `rounds`
/// rounds and `cap` points.
pub fn orbit(surface: &SurfaceP3, seed: &ProjectivePoint, rounds: usize, cap: usize, cfg: &RunConfig) -> Result<OrbitState> {
    let mut state = OrbitState {
        members: vec![OrbitMember { point: seed.clone(), round: 0, parent: None, witness: None }],
        rounds: 0,
        truncated: false,
        warnings: Vec::new(),
    };
    let mut frontier: VecDeque<usize> = VecDeque::from([0]);
    'rounds: for round in 1..=rounds {
        let mut next = VecDeque::new();
        while let Some(i) = frontier.pop_front() {
            let step = match equiv_step(surface, &state.members[i].point, &cfg.derive(i as u64)) {
                Ok(s) => s,
                Err(e) => {
                    state.warnings.push(format!("{}: {e}", state.members[i].point));
                    continue;
                }
            };
            state.warnings.extend(step.warnings);
            for pair in step.pairs {
                if state.members.iter().any(|m| m.point.distance(&pair.point) <= cfg.point_tol) {
                    continue;
                }
                if state.members.len() >= cap {
                    state.truncated = true;
                    state.rounds = round;
                    break 'rounds;
                }
                state.members.push(OrbitMember { point: pair.point.clone(), round, parent: Some(i), witness: Some(pair) });
                next.push_back(state.members.len() - 1);
            }
        }
        state.rounds = round;
        frontier = next;
        if frontier.is_empty() {
            break;
        }
    }
    Ok(state)
}

#[derive(Clone, Debug)]
pub struct ResidualSearch {
    pub success: bool,
    pub lines: Option<(Line, Line)>,
    /// The common residual `(L1 . F) - q1 = (L2 . F) - q2`.
    pub residual: Option<ZeroCycle>,
    pub attempts: usize,
    /// Smallest mismatch between the two residual cycles over all attempts.
    pub best_mismatch: f64,
}

fn mismatch(a: &ZeroCycle, b: &ZeroCycle) -> f64 {
    a.entries()
        .iter()
        .map(|(p, _)| b.entries().iter().map(|(q, _)| p.distance(q)).fold(1.0, f64::min))
        .fold(0.0, f64::max)
}

/// Lines `L1` through `q1` and `L2` through `q2` with equal residual
/// intersections, on a surface of degree at most 3.
pub fn residual_search(
    surface: &SurfaceP3,
    q1: &ProjectivePoint,
    q2: &ProjectivePoint,
    cfg: &RunConfig,
) -> Result<ResidualSearch> {
    let d = surface.degree();
    if d > 3 {
        return Err(Error::InvalidInput("residual search needs a surface of degree at most 3".into()));
    }
    require_on_surface(surface, q1)?;
    require_on_surface(surface, q2)?;
    if q1.distance(q2) <= cfg.point_tol {
        return Err(Error::InvalidInput("the two points coincide".into()));
    }
    let tol = cfg.point_tol;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.derive(0x7e5).seed);
    let mut best = f64::INFINITY;
    for attempt in 1..=cfg.max_attempts {
        let candidates: Vec<ProjectivePoint> = match d {
            1 => {
                let r = random_affine_point(&mut rng, HEIGHT);
                if surface.residual(&r) == 0.0 {
                    continue;
                }
                vec![r]
            }
            2 => {
                let w = random_affine_point(&mut rng, HEIGHT);
                let Ok(line) = Line::new(q1.clone(), w) else { continue };
                let Ok(cyc) = line_surface_cycle(&line, surface, cfg) else { continue };
                let rest = cyc.sub(&ZeroCycle::point(q1.clone()), tol);
                if rest.len() != 1 || !rest.is_effective() {
                    continue;
                }
                vec![rest.entries()[0].0.clone()]
            }
            _ => {
                // r on F with both lines <q_i, r> tangent at r
                let f = polar_forms(surface, q1, 1);
                let g = polar_forms(surface, q2, 1);
                match solve(&[f[0].clone(), f[1].clone(), g[1].clone()], &cfg.homotopy(0x3c00 + attempt as u64)) {
                    Ok(sols) => sols
                        .into_iter()
                        .filter_map(|s| ProjectivePoint::numeric(s.point).ok())
                        .collect(),
                    Err(Error::Numeric(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
        };
        for r in candidates {
            if r.distance(q1) <= 1e-6 || r.distance(q2) <= 1e-6 {
                continue;
            }
            let (Ok(l1), Ok(l2)) = (Line::new(q1.clone(), r.clone()), Line::new(q2.clone(), r.clone())) else {
                continue;
            };
            if l1.same_as(&l2, 1e-9) {
                continue;
            }
            let (Ok(c1), Ok(c2)) = (line_surface_cycle(&l1, surface, cfg), line_surface_cycle(&l2, surface, cfg)) else {
                continue;
            };
            let r1 = c1.sub(&ZeroCycle::point(q1.clone()), tol);
            let r2 = c2.sub(&ZeroCycle::point(q2.clone()), tol);
            if r1.is_effective() && r1.eq_tol(&r2, tol) {
                return Ok(ResidualSearch {
                    success: true,
                    lines: Some((l1, l2)),
                    residual: Some(r1),
                    attempts: attempt,
                    best_mismatch: 0.0,
                });
            }
            best = best.min(mismatch(&r1, &r2).max(mismatch(&r2, &r1)));
        }
    }
    Ok(ResidualSearch { success: false, lines: None, residual: None, attempts: cfg.max_attempts, best_mismatch: best })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum DimensionVerdict {
    /// Negative fibre dimension: no such lines for a generic surface.
    EmptyExpected,
    /// Fibre dimension zero.
    FiniteExpected,
    PositiveDimensional,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct XrDimension {
    pub d: u32,
    pub r: u32,
    pub dim_surfaces: i64,
    pub dim_xr: i64,
    pub fibre: i64,
    pub verdict: DimensionVerdict,
}

/// Dimension of the space of `(p, L1, L2, F)` with `F` of degree `d` and
/// `(L_i . F) >= r p`, and of its fibre over the space of surfaces.
pub fn xr_dimension(d: u32, r: u32) -> Result<XrDimension> {
    if d == 0 || r < 2 {
        return Err(Error::InvalidInput("need d >= 1 and r >= 2".into()));
    }
    let n = d as i64 + 3;
    let dim_surfaces = n * (n - 1) * (n - 2) / 6 - 1;
    let fibre = 8 - 2 * r as i64;
    let verdict = match fibre.signum() {
        -1 => DimensionVerdict::EmptyExpected,
        0 => DimensionVerdict::FiniteExpected,
        _ => DimensionVerdict::PositiveDimensional,
    };
    Ok(XrDimension { d, r, dim_surfaces, dim_xr: dim_surfaces + fibre, fibre, verdict })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum QuinticVariant {
    Generic,
    /// The member with no `xy` term.
    NoConic,
}

#[derive(Clone, Debug)]
pub struct QuinticLine {
    pub direction: Direction,
    pub line: Line,
    pub contact_order: i64,
    /// The fifth intersection point.
    pub residual: ProjectivePoint,
}

#[derive(Clone, Debug)]
pub struct QuinticDemo {
    pub surface: SurfaceP3,
    pub base: ProjectivePoint,
    pub lines: Vec<QuinticLine>,
    /// Set when the contact conditions are not finite at the tested order.
    pub positive_dimensional: Option<String>,
    pub distinct_residuals: bool,
    pub expression: Option<CIExpression<Rational>>,
    pub expression_holds: Option<bool>,
    pub resamples: usize,
}

fn embed_xyz(f: &HomogeneousForm<Rational>, t_power: u32) -> HomogeneousForm<Rational> {
    let terms: Vec<(Vec<u32>, Rational)> =
        f.terms().map(|(e, c)| (vec![e[0], e[1], e[2], t_power], c.clone())).collect();
    HomogeneousForm::from_terms(4, f.degree() + t_power, terms).expect("degrees match")
}

fn quintic_member(rng: &mut ChaCha8Rng, variant: QuinticVariant) -> Result<SurfaceP3> {
    let c1 = random_nonzero_int(rng, HEIGHT);
    let c2 = match variant {
        QuinticVariant::Generic => random_nonzero_int(rng, HEIGHT),
        QuinticVariant::NoConic => Rational::zero(),
    };
    let c3 = random_nonzero_int(rng, HEIGHT);
    let f4 = random_form(rng, 3, 4, HEIGHT);
    let f5 = random_form(rng, 3, 5, HEIGHT);
    let mono = |e: [u32; 4], c: &Rational| HomogeneousForm::monomial(e.to_vec(), c.clone());
    let mut f = mono([1, 0, 0, 4], &c1);
    for part in [
        mono([0, 1, 0, 4], &c1),
        mono([0, 0, 1, 4], &c1),
        mono([1, 1, 0, 3], &c2),
        mono([1, 1, 1, 2], &c3),
        embed_xyz(&f4, 1),
        embed_xyz(&f5, 0),
    ] {
        f = f.add(&part)?;
    }
    SurfaceP3::new(f)
}

/// Samples `f = c1 (x + y + z) + c2 xy + c3 xyz + f_4 + f_5` and exhibits two
/// lines through `p = (0, 0, 0, 1)` with contact order 4 whose residual
/// points differ.
pub fn quintic_family_demo(cfg: &RunConfig, variant: QuinticVariant) -> Result<QuinticDemo> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.derive(0x5).seed);
    let base = ProjectivePoint::from_ints([0, 0, 0, 1])?;
    let mut resamples = 0;
    loop {
        let surface = quintic_member(&mut rng, variant)?;
        let order = match variant {
            QuinticVariant::Generic => 4,
            QuinticVariant::NoConic => 3,
        };
        let contact = match contact_directions(&surface, &base, order, cfg) {
            Err(Error::PositiveDimensional(m)) => {
                return Ok(QuinticDemo {
                    surface,
                    base,
                    lines: Vec::new(),
                    positive_dimensional: Some(m),
                    distinct_residuals: false,
                    expression: None,
                    expression_holds: None,
                    resamples,
                })
            }
            other => other?,
        };
        let mut lines = Vec::new();
        let mut generic = true;
        for cd in &contact.directions {
            let cyc = line_surface_cycle(&cd.line, &surface, cfg)?;
            let order = cyc.multiplicity_at(&base, 0.0);
            let rest = cyc.sub(&ZeroCycle::new([(base.clone(), order)], 0.0), 0.0);
            if order != 4 || rest.len() != 1 {
                generic = false;
                break;
            }
            lines.push(QuinticLine {
                direction: cd.direction.clone(),
                line: cd.line.clone(),
                contact_order: order,
                residual: rest.entries()[0].0.clone(),
            });
        }
        if !generic || lines.len() != 2 {
            resamples += 1;
            if resamples > 3 {
                return Err(Error::Degenerate("no generic family member after 3 resamples".into()));
            }
            continue;
        }
        let distinct = lines[0].residual.distance(&lines[1].residual) > cfg.point_tol;
        let (expression, holds) = if distinct {
            let e = lines_to_expression::<Rational>(&lines[0].line, &lines[1].line)?;
            let x = ZeroCycle::point(lines[0].residual.clone());
            let y = ZeroCycle::point(lines[1].residual.clone());
            let v = verify_expression(&x, &y, &e, &surface, cfg)?;
            (Some(e), Some(v.holds))
        } else {
            (None, None)
        };
        return Ok(QuinticDemo {
            surface,
            base,
            lines,
            positive_dimensional: None,
            distinct_residuals: distinct,
            expression,
            expression_holds: holds,
            resamples,
        });
    }
}

#[derive(Clone, Debug)]
pub struct PlaneDemo {
    pub surface: SurfaceP3,
    pub x: ProjectivePoint,
    pub y: ProjectivePoint,
    /// The line joining `x` and `y`, inside the plane.
    pub joining: Line,
    pub through_x: Line,
    pub through_y: Line,
    pub expression: CIExpression<Rational>,
    pub holds: bool,
    pub star: StarReport,
}

/// A plane through `line` other than `avoid`.
fn other_plane_through(line: &Line, avoid: &HomogeneousForm<Rational>) -> Result<HomogeneousForm<Rational>> {
    let rows = vec![
        line.p.exact_coords().expect("rational line").to_vec(),
        line.q.exact_coords().expect("rational line").to_vec(),
    ];
    let basis = nullspace(&rows, 4, 0.0);
    let avoid_c = avoid.linear_coeffs().expect("plane");
    for v in basis.iter().chain([&basis[0].iter().zip(&basis[1]).map(|(a, b)| a + b).collect()]) {
        if crate::linalg::rank(&[v.clone(), avoid_c.clone()], 0.0) == 2 {
            return Ok(HomogeneousForm::linear(v));
        }
    }
    Err(Error::Degenerate("no second plane through the line".into()))
}

/// `X - Y = ((L1 - L2) . L)` on a plane: `L` joins the two points and `L1`,
/// `L2` are further lines of the plane through them.
pub fn plane_demo(cfg: &RunConfig) -> Result<PlaneDemo> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.derive(0x4).seed);
    let plane = loop {
        let f = random_form(&mut rng, 4, 1, HEIGHT);
        if !f.is_zero() {
            break f;
        }
    };
    let surface = SurfaceP3::new(plane.clone())?;
    let distinct_point = |rng: &mut ChaCha8Rng, avoid: &[&ProjectivePoint]| -> Result<ProjectivePoint> {
        loop {
            let p = plane_point(rng, &plane, HEIGHT)?;
            if avoid.iter().all(|a| p.distance(a) > 0.0) {
                return Ok(p);
            }
        }
    };
    let x = distinct_point(&mut rng, &[])?;
    let y = distinct_point(&mut rng, &[&x])?;
    let joining = Line::new(x.clone(), y.clone())?;
    let off_line = |rng: &mut ChaCha8Rng| -> Result<ProjectivePoint> {
        loop {
            let p = plane_point(rng, &plane, HEIGHT)?;
            if !joining.contains(&p, 0.0) {
                return Ok(p);
            }
        }
    };
    let through_x = Line::new(x.clone(), off_line(&mut rng)?)?;
    let through_y = Line::new(y.clone(), off_line(&mut rng)?)?;
    let h = other_plane_through(&joining, &plane)?;
    let a = other_plane_through(&through_x, &plane)?;
    let b = other_plane_through(&through_y, &plane)?;
    let expression = CIExpression::from_forms(a, b, h)?;
    let xc = ZeroCycle::point(x.clone());
    let yc = ZeroCycle::point(y.clone());
    let holds = verify_expression(&xc, &yc, &expression, &surface, cfg)?.holds;
    let star = star_check(&xc, &yc, &expression, &surface, cfg)?;
    Ok(PlaneDemo { surface, x, y, joining, through_x, through_y, expression, holds, star })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sample::surface_through;

    fn pt(c: [i64; 4]) -> ProjectivePoint {
        ProjectivePoint::from_ints(c).unwrap()
    }

    #[test]
    fn tangent_directions_are_positive_dimensional() {
        let s = SurfaceP3::parse("X^2 + Y^2 + Z^2 - T^2").unwrap();
        let r = contact_directions(&s, &pt([1, 0, 0, 1]), 2, &RunConfig::default());
        assert!(matches!(r, Err(Error::PositiveDimensional(_))));
    }

    #[test]
    fn quadric_rulings_are_contact_lines() {
        // on XT - YZ every tangent line meeting F three times lies on F
        let s = SurfaceP3::parse("X*T - Y*Z").unwrap();
        let c = contact_directions(&s, &pt([0, 0, 0, 1]), 3, &RunConfig::default()).unwrap();
        assert_eq!(c.count(), 2);
        for d in &c.directions {
            assert_eq!(d.contact_order, None);
            assert_eq!(d.exact_check, Some(true));
        }
    }

    #[test]
    fn singular_point_is_rejected() {
        let s = SurfaceP3::parse("X*Y*T - Z^3").unwrap();
        let r = contact_directions(&s, &pt([0, 0, 0, 1]), 3, &RunConfig::default());
        assert!(matches!(r, Err(Error::SingularPoint(_))));
    }

    #[test]
    fn quartic_has_two_contact_lines_off_the_chart() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let p = pt([1, 2, -1, 0]);
        let s = surface_through(&mut rng, 4, &[p.clone()], HEIGHT).unwrap();
        let c = contact_directions(&s, &p, 3, &RunConfig::default()).unwrap();
        assert_ne!(c.chart, 3);
        assert_eq!(c.count(), 2);
        for d in &c.directions {
            assert_eq!(d.exact_check, Some(true));
            assert!(d.contact_order.unwrap() >= 3);
        }
    }

    #[test]
    fn numeric_base_point_matches_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let p = pt([2, -1, 3, 1]);
        let s = surface_through(&mut rng, 4, &[p.clone()], HEIGHT).unwrap();
        let cfg = RunConfig::default();
        let exact = contact_directions(&s, &p, 3, &cfg).unwrap();
        let pn = ProjectivePoint::numeric(p.to_c64()).unwrap();
        let num = contact_directions(&s, &pn, 3, &cfg).unwrap();
        assert_eq!(num.count(), 2);
        for d in &num.directions {
            assert!(exact.directions.iter().any(|e| e.line.same_as(&d.line, 1e-9)));
            assert_eq!(d.contact_order, Some(3));
        }
    }

    #[test]
    fn cubic_polar_locus_has_six_points() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let s = SurfaceP3::new(random_form(&mut rng, 4, 3, HEIGHT)).unwrap();
        let q = random_affine_point(&mut rng, HEIGHT);
        let PolarLocus::Points(p) = polar_locus(&s, &q, 3, &RunConfig::default()).unwrap() else { panic!() };
        assert_eq!(p.cycle.degree(), 6);
        assert_eq!(p.expected_degree, 6);
    }

    #[test]
    fn dimension_table() {
        assert_eq!(xr_dimension(4, 3).unwrap().fibre, 2);
        assert_eq!(xr_dimension(5, 4).unwrap().verdict, DimensionVerdict::FiniteExpected);
        let six = xr_dimension(6, 5).unwrap();
        assert_eq!((six.fibre, six.verdict), (-2, DimensionVerdict::EmptyExpected));
        assert_eq!(six.dim_surfaces, 83);
    }

    #[test]
    fn quintic_demo_finds_the_two_lines() {
        let demo = quintic_family_demo(&RunConfig::with_seed(1), QuinticVariant::Generic).unwrap();
        let dirs: Vec<Vec<String>> = demo.lines.iter().map(|l| l.direction.coord_strings()).collect();
        assert_eq!(dirs.len(), 2);
        assert!(demo.lines.iter().all(|l| l.contact_order == 4));
        assert!(demo.distinct_residuals);
        assert_eq!(demo.expression_holds, Some(true));
        let degenerate = quintic_family_demo(&RunConfig::with_seed(1), QuinticVariant::NoConic).unwrap();
        assert!(degenerate.positive_dimensional.is_some());
    }

    #[test]
    fn plane_demo_holds() {
        let demo = plane_demo(&RunConfig::with_seed(3)).unwrap();
        assert!(demo.holds);
        assert_eq!(demo.star.verdict, crate::chow::Verdict::Holds);
    }

    #[test]
    fn residual_search_on_low_degree_surfaces() {
        let cfg = RunConfig::default();
        let quadric = SurfaceP3::parse("X*T - Y*Z").unwrap();
        let r = residual_search(&quadric, &pt([1, 1, 1, 1]), &pt([2, 1, 6, 3]), &cfg).unwrap();
        assert!(r.success);
        let plane = SurfaceP3::parse("X + Y - Z").unwrap();
        let r = residual_search(&plane, &pt([1, 1, 2, 0]), &pt([0, 1, 1, 5]), &cfg).unwrap();
        assert!(r.success);
        assert!(r.residual.unwrap().is_empty());
    }
}
