//! Complete-intersection expressions `X - Y = [a = h = f = 0] - [b = h = f = 0]`
//! on a surface, the degree-raising rules that preserve the represented
//! difference, and matching of multidegrees.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::cycles::{complete_intersection_cycle, factored_ci_cycle, ZeroCycle};
use crate::error::{Error, Result};
use crate::geometry::{Line, ProjectivePoint, SurfaceP3};
use crate::homotopy::chordal;
use crate::linalg::{nullspace, rank};
use crate::poly::factored::FactoredForm;
use crate::poly::form::HomogeneousForm;
use crate::poly::parse::parse_form;
use crate::scalar::{int, Field, Rational};

/// Degrees `(s, e)` of `a`, `b` and of `h`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct MultiDegree {
    pub s: u64,
    pub e: u64,
}

impl MultiDegree {
    pub fn new(s: u64, e: u64) -> Result<Self> {
        if s == 0 || e == 0 {
            return Err(Error::InvalidInput("multidegrees are positive".into()));
        }
        Ok(Self { s, e })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CIExpression<S: Field = Rational> {
    a: FactoredForm<S>,
    b: FactoredForm<S>,
    h: FactoredForm<S>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpressionJson {
    pub a: String,
    pub b: String,
    pub h: String,
    pub s: u32,
    pub e: u32,
}

impl<S: Field> CIExpression<S> {
    pub fn new(a: FactoredForm<S>, b: FactoredForm<S>, h: FactoredForm<S>) -> Result<Self> {
        if [&a, &b, &h].iter().any(|f| f.nvars() != 4) {
            return Err(Error::InvalidInput("forms must be in X, Y, Z, T".into()));
        }
        if [&a, &b, &h].iter().any(|f| f.is_zero()) {
            return Err(Error::InvalidInput("forms must be nonzero".into()));
        }
        if a.degree() != b.degree() {
            return Err(Error::DegreeMismatch(format!("deg a = {}, deg b = {}", a.degree(), b.degree())));
        }
        Ok(Self { a, b, h })
    }

    pub fn from_forms(a: HomogeneousForm<S>, b: HomogeneousForm<S>, h: HomogeneousForm<S>) -> Result<Self> {
        Self::new(a.into(), b.into(), h.into())
    }

    pub fn a(&self) -> &FactoredForm<S> {
        &self.a
    }

    pub fn b(&self) -> &FactoredForm<S> {
        &self.b
    }

    pub fn h(&self) -> &FactoredForm<S> {
        &self.h
    }

    pub fn s(&self) -> u32 {
        self.a.degree()
    }

    pub fn e(&self) -> u32 {
        self.h.degree()
    }

    pub fn multidegree(&self) -> MultiDegree {
        MultiDegree { s: self.s() as u64, e: self.e() as u64 }
    }

    /// The expression for `Y - X`.
    pub fn swapped(&self) -> Self {
        Self { a: self.b.clone(), b: self.a.clone(), h: self.h.clone() }
    }

    pub fn scaled(&self, ca: &S, cb: &S, ch: &S) -> Self {
        Self { a: self.a.scale(ca), b: self.b.scale(cb), h: self.h.scale(ch) }
    }

    pub fn to_json(&self) -> ExpressionJson {
        ExpressionJson {
            a: self.a.to_string(),
            b: self.b.to_string(),
            h: self.h.to_string(),
            s: self.s(),
            e: self.e(),
        }
    }
}

impl CIExpression<Rational> {
    pub fn parse(a: &str, b: &str, h: &str) -> Result<Self> {
        Self::from_forms(parse_form(a)?, parse_form(b)?, parse_form(h)?)
    }

    pub fn from_json(j: &ExpressionJson) -> Result<Self> {
        let e = Self::parse(&j.a, &j.b, &j.h)?;
        if e.s() != j.s || e.e() != j.e {
            return Err(Error::DegreeMismatch(format!(
                "declared (s, e) = ({}, {}) but the forms have ({}, {})",
                j.s,
                j.e,
                e.s(),
                e.e()
            )));
        }
        Ok(e)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Verification {
    pub holds: bool,
    pub vx: ZeroCycle,
    pub vy: ZeroCycle,
    /// `(X - Y) - (V_X - V_Y)`.
    pub residual: ZeroCycle,
}

/// Checks `X - Y = [a = h = f = 0] - [b = h = f = 0]` as cycles.
pub fn verify_expression<S: Field>(
    x: &ZeroCycle,
    y: &ZeroCycle,
    expr: &CIExpression<S>,
    surface: &SurfaceP3,
    cfg: &RunConfig,
) -> Result<Verification> {
    if x.degree() != y.degree() {
        return Err(Error::DegreeMismatch(format!("deg X = {}, deg Y = {}", x.degree(), y.degree())));
    }
    let vx = factored_ci_cycle(expr.a(), expr.h(), surface, cfg)?;
    let vy = factored_ci_cycle(expr.b(), expr.h(), surface, cfg)?;
    let tol = cfg.point_tol;
    let residual = x.sub(y, tol).sub(&vx.sub(&vy, tol), tol);
    Ok(Verification { holds: residual.is_empty(), vx, vy, residual })
}

fn coords<S: Field>(p: &ProjectivePoint) -> Result<Vec<S>> {
    p.coords_in::<S>()
        .ok_or_else(|| Error::InvalidInput("numeric line given where rational coordinates are required".into()))
}

/// A plane through the span of `rows` other than `avoid`.
fn plane_through<S: Field>(rows: &[Vec<S>], avoid: Option<&[S]>, tol: f64) -> Vec<S> {
    let basis = nullspace(rows, 4, tol);
    match avoid {
        None => basis[0].clone(),
        Some(h) => {
            let hc: Vec<_> = h.iter().map(|c| c.to_c64()).collect();
            basis
                .into_iter()
                .max_by(|u, v| {
                    let du = chordal(&u.iter().map(|c| c.to_c64()).collect::<Vec<_>>(), &hc);
                    let dv = chordal(&v.iter().map(|c| c.to_c64()).collect::<Vec<_>>(), &hc);
                    du.total_cmp(&dv)
                })
                .expect("two-dimensional pencil")
        }
    }
}

/// An expression with `s = e = 1` whose complete intersections are `L1` and
/// `L2`: `h` is the plane of the two lines, `a` and `b` cut them out of it.
pub fn lines_to_expression<S: Field>(l1: &Line, l2: &Line) -> Result<CIExpression<S>> {
    let tol = 1e-9;
    let (p1, q1, p2, q2) = (coords::<S>(&l1.p)?, coords::<S>(&l1.q)?, coords::<S>(&l2.p)?, coords::<S>(&l2.q)?);
    match rank(&[p1.clone(), q1.clone(), p2.clone(), q2.clone()], tol) {
        4 => return Err(Error::SkewLines),
        2 => return Err(Error::Degenerate("the two lines coincide".into())),
        _ => {}
    }
    let third = if l1.distance_to(&l2.p) >= l1.distance_to(&l2.q) { p2.clone() } else { q2.clone() };
    let h = plane_through(&[p1.clone(), q1.clone(), third], None, tol);
    let a = plane_through(&[p1, q1], Some(&h), tol);
    let b = plane_through(&[p2, q2], Some(&h), tol);
    CIExpression::from_forms(HomogeneousForm::linear(&a), HomogeneousForm::linear(&b), HomogeneousForm::linear(&h))
}

/// Replaces `(a, b, h)` by `(a g, b g, h)`.
///
/// Fails with [`Error::Improper`] when `g` vanishes on a component of
/// `{h = f = 0}`.
pub fn nesting_rule_2<S: Field>(
    expr: &CIExpression<S>,
    g: &HomogeneousForm<S>,
    surface: &SurfaceP3,
    cfg: &RunConfig,
) -> Result<CIExpression<S>> {
    if g.is_zero() {
        return Err(Error::Improper("g vanishes identically".into()));
    }
    if g.degree() == 0 {
        return Ok(expr.clone());
    }
    for (hf, _) in expr.h().factors() {
        complete_intersection_cycle(g, hf, surface, cfg)?;
    }
    let gf = FactoredForm::new(g.clone());
    CIExpression::new(expr.a().mul(&gf)?, expr.b().mul(&gf)?, expr.h().clone())
}

/// Replaces `h` by `h c^k` with `c = alpha a + beta b`.
///
/// Requires `[a = b = f = 0]` proper; a pencil member sharing its zero set with
/// `a` or `b` (`alpha beta = 0`) is rejected as improper.
pub fn nesting_rule_3<S: Field>(
    expr: &CIExpression<S>,
    k: u32,
    pencil: (S, S),
    surface: &SurfaceP3,
    cfg: &RunConfig,
) -> Result<CIExpression<S>> {
    if k == 0 {
        return Err(Error::InvalidInput("the exponent must be positive".into()));
    }
    let (alpha, beta) = pencil;
    if alpha.is_zero() || beta.is_zero() {
        return Err(Error::Improper("the pencil member shares its zero set with a or b".into()));
    }
    factored_ci_cycle(expr.a(), expr.b(), surface, cfg)?;
    let c = expr.a().expand().scale(&alpha).add(&expr.b().expand().scale(&beta))?;
    if c.is_zero() {
        return Err(Error::Improper("the pencil member vanishes identically".into()));
    }
    let h = expr.h().mul(&FactoredForm::new(c).pow(k))?;
    CIExpression::new(expr.a().clone(), expr.b().clone(), h)
}

/// Pencil parameters with `alpha beta != 0`, drawn from the run seed.
pub fn pencil_params(cfg: &RunConfig) -> (Rational, Rational) {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    loop {
        let (a, b): (i64, i64) = (rng.gen_range(-9..=9), rng.gen_range(-9..=9));
        if a * b != 0 {
            return (int(a), int(b));
        }
    }
}

/// Witnesses for bringing two multidegrees to a common one: rule 2 with
/// `t_i`, then rule 3 with `r_i` so that
/// `e_1 + r_1 (s_1 + t_1) = e_2 + r_2 (s_2 + t_2)`, then rule 2 once more
/// with `pad_i` to equalize `s`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MultiDegreeMatch {
    pub common: MultiDegree,
    pub t: [u64; 2],
    pub r: [u64; 2],
    pub pad: [u64; 2],
}

impl MultiDegreeMatch {
    /// Rechecks the defining equation and the final degrees.
    pub fn verify(&self, m1: MultiDegree, m2: MultiDegree) -> bool {
        let e1 = m1.e as u128 + self.r[0] as u128 * (m1.s + self.t[0]) as u128;
        let e2 = m2.e as u128 + self.r[1] as u128 * (m2.s + self.t[1]) as u128;
        e1 == e2
            && e1 == self.common.e as u128
            && m1.s + self.t[0] + self.pad[0] == self.common.s
            && m2.s + self.t[1] + self.pad[1] == self.common.s
    }
}

fn primes_above(n: u64, count: usize) -> Vec<u64> {
    let is_prime = |k: u64| k >= 2 && (2..).take_while(|d| d * d <= k).all(|d| k % d != 0);
    (n + 1..).filter(|&k| is_prime(k)).take(count).collect()
}

const PRIME_WINDOW: usize = 8;

/// Finds the witnesses with the smallest common `e`, searching prime pencil
/// degrees `s_i + t_i` among the first few primes above `s_i`.
pub fn match_multidegrees(m1: MultiDegree, m2: MultiDegree) -> MultiDegreeMatch {
    if m1 == m2 {
        return MultiDegreeMatch { common: m1, t: [0, 0], r: [0, 0], pad: [0, 0] };
    }
    let delta = m2.e as i128 - m1.e as i128;
    let mut best: Option<(u128, MultiDegreeMatch)> = None;
    for p1 in primes_above(m1.s, PRIME_WINDOW) {
        for p2 in primes_above(m2.s, PRIME_WINDOW) {
            if p1 == p2 {
                continue;
            }
            let (a, b) = (p1 as i128, p2 as i128);
            // lambda a + mu b = 1
            let g = a.extended_gcd(&b);
            let (lambda, mu) = (g.x, g.y);
            // r1 = lambda delta + k b, r2 = -mu delta + k a, both >= 1
            let base1 = lambda * delta;
            let base2 = -mu * delta;
            let k = Integer::div_ceil(&(1 - base1), &b).max(Integer::div_ceil(&(1 - base2), &a));
            let r1 = base1 + k * b;
            let r2 = base2 + k * a;
            debug_assert!(r1 * a - r2 * b == delta);
            let e = m1.e as i128 + r1 * a;
            let s = p1.max(p2);
            let cand = MultiDegreeMatch {
                common: MultiDegree { s, e: e as u64 },
                t: [p1 - m1.s, p2 - m2.s],
                r: [r1 as u64, r2 as u64],
                pad: [s - p1, s - p2],
            };
            let key = (e as u128) << 64 | s as u128;
            if best.as_ref().map_or(true, |(k0, _)| key < *k0) {
                best = Some((key, cand));
            }
        }
    }
    best.expect("the prime windows always contain two distinct primes").1
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::C64;

    fn pt(c: [i64; 4]) -> ProjectivePoint {
        ProjectivePoint::from_ints(c).unwrap()
    }

    fn line(a: [i64; 4], b: [i64; 4]) -> Line {
        Line::new(pt(a), pt(b)).unwrap()
    }

    #[test]
    fn coordinate_lines() {
        let l1 = line([1, 0, 0, 0], [0, 1, 0, 0]);
        let l2 = line([1, 0, 0, 0], [0, 0, 1, 0]);
        let e = lines_to_expression::<Rational>(&l1, &l2).unwrap();
        let support = |f: &FactoredForm<Rational>| {
            let c = f.expand().linear_coeffs().unwrap();
            c.iter().map(|v| !num_traits::Zero::is_zero(v)).collect::<Vec<_>>()
        };
        assert_eq!(support(e.h()), vec![false, false, false, true]);
        assert_eq!(support(e.a()), vec![false, false, true, false]);
        assert_eq!(support(e.b()), vec![false, true, false, false]);
    }

    #[test]
    fn skew_and_equal_lines() {
        let l1 = line([1, 0, 0, 0], [0, 1, 0, 0]);
        let l2 = line([0, 0, 1, 0], [0, 0, 0, 1]);
        assert_eq!(lines_to_expression::<Rational>(&l1, &l2), Err(Error::SkewLines));
        let l3 = line([1, 1, 0, 0], [1, -1, 0, 0]);
        assert!(matches!(lines_to_expression::<Rational>(&l1, &l3), Err(Error::Degenerate(_))));
    }

    #[test]
    fn numeric_lines_convert() {
        let p = ProjectivePoint::numeric(vec![C64::new(0.3, 0.1), C64::new(1.0, 0.0), C64::new(-0.2, 0.5), C64::new(0.7, 0.0)]).unwrap();
        let l1 = Line::new(p.clone(), pt([1, 2, 3, 4])).unwrap();
        let l2 = Line::new(p, pt([0, 1, -1, 2])).unwrap();
        assert!(lines_to_expression::<Rational>(&l1, &l2).is_err());
        let e = lines_to_expression::<C64>(&l1, &l2).unwrap();
        for (l, f) in [(&l1, e.a()), (&l2, e.b()), (&l1, e.h()), (&l2, e.h())] {
            for x in [&l.p, &l.q] {
                assert!(f.expand().eval_c64(&x.to_c64()).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn plane_expression_verifies() {
        let s = SurfaceP3::parse("Z").unwrap();
        let (x, y) = (pt([1, 0, 0, 1]), pt([0, 1, 0, 1]));
        // L joins X and Y inside F; L1, L2 are lines of F through X, Y
        let l1 = line([1, 0, 0, 1], [0, 0, 0, 1]);
        let l2 = line([0, 1, 0, 1], [1, 1, 0, 2]);
        let h = HomogeneousForm::linear(&[int(1), int(1), int(1), int(-1)]);
        let a = HomogeneousForm::linear(&[int(1), int(0), int(3), int(-1)]);
        let b = HomogeneousForm::linear(&[int(0), int(1), int(-2), int(-1)]);
        let cfg = RunConfig::default();
        let expr = CIExpression::from_forms(a, b, h).unwrap();
        let v = verify_expression(&ZeroCycle::point(x.clone()), &ZeroCycle::point(y.clone()), &expr, &s, &cfg).unwrap();
        assert!(v.holds, "{:?}", v.residual);
        let _ = (l1, l2);
        let back = verify_expression(&ZeroCycle::point(y), &ZeroCycle::point(x), &expr.swapped(), &s, &cfg).unwrap();
        assert!(back.holds);
    }

    #[test]
    fn json_round_trip() {
        let e = CIExpression::parse("X + Y", "Z - T", "X*Y - Z*T").unwrap();
        let j = e.to_json();
        assert_eq!((j.s, j.e), (1, 2));
        assert_eq!(CIExpression::from_json(&j).unwrap(), e);
        let mut bad = j.clone();
        bad.e = 3;
        assert!(matches!(CIExpression::from_json(&bad), Err(Error::DegreeMismatch(_))));
        assert!(matches!(CIExpression::parse("X", "Y^2", "Z"), Err(Error::DegreeMismatch(_))));
    }

    #[test]
    fn match_small_inputs_against_brute_force() {
        let m1 = MultiDegree::new(1, 5).unwrap();
        let m2 = MultiDegree::new(2, 3).unwrap();
        let w = match_multidegrees(m1, m2);
        assert!(w.verify(m1, m2));
        assert!(w.t.iter().chain(&w.r).all(|&v| v > 0));
        // brute force over small t, r: some solution exists at or below this e
        let mut found = false;
        for t1 in 1..20u64 {
            for t2 in 1..20u64 {
                for r1 in 1..40u64 {
                    for r2 in 1..40u64 {
                        if 5 + r1 * (1 + t1) == 3 + r2 * (2 + t2) && 5 + r1 * (1 + t1) <= w.common.e {
                            found = true;
                        }
                    }
                }
            }
        }
        assert!(found);
    }

    #[test]
    fn match_large_inputs() {
        let m1 = MultiDegree::new(7, 100).unwrap();
        let m2 = MultiDegree::new(11, 64).unwrap();
        assert!(match_multidegrees(m1, m2).verify(m1, m2));
        assert!(match_multidegrees(m2, m1).verify(m2, m1));
        let same = match_multidegrees(m1, m1);
        assert_eq!(same.common, m1);
    }
}
