//! Total-degree homotopy continuation for square homogeneous systems:
//! `n` forms in `n + 1` variables, solutions in P^n counted with
//! multiplicity.
//!
//! Paths are tracked on a random affine patch `u . x = 1` with the
//! gamma trick, finished with a Cauchy endgame, and clustered. When singular
//! endpoints appear, a random hyperplane section decides whether the solution
//! set has a positive-dimensional component.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{nullspace, solve_c64};
use crate::poly::form::HomogeneousForm;
use crate::scalar::C64;

#[derive(Clone, Debug)]
pub struct HomotopyOptions {
    pub seed: u64,
    /// Endpoints closer than this (chordal distance) are the same solution.
    pub merge_tol: f64,
    /// Largest predictor step in `t`.
    pub max_step: f64,
    /// Relative residual below which a form counts as vanishing at a point.
    pub residual_tol: f64,
    /// Whether to run the positive-dimensionality test on singular endpoints.
    pub check_proper: bool,
}

impl Default for HomotopyOptions {
    fn default() -> Self {
        Self { seed: 0, merge_tol: 1e-7, max_step: 0.05, residual_tol: 1e-8, check_proper: true }
    }
}

/// One isolated solution with the number of paths that reached it.
#[derive(Clone, Debug)]
pub struct Solution {
    /// Homogeneous coordinates scaled so the largest has modulus 1.
    pub point: Vec<C64>,
    pub multiplicity: usize,
    /// Largest winding number seen in the endgame.
    pub cycle_number: usize,
    /// Reciprocal condition estimate of the Jacobian at the endpoint.
    pub rcond: f64,
    pub residual: f64,
}

impl Solution {
    pub fn is_singular(&self) -> bool {
        self.multiplicity > 1 || self.cycle_number > 1 || self.rcond < SINGULAR_RCOND
    }
}

const SINGULAR_RCOND: f64 = 1e-7;
const STATIONS: usize = 16;
const MAX_LOOPS: usize = 12;
const ENDGAME_HALVINGS: usize = 28;
const ENDGAME_RESIDUAL: f64 = 1e-9;
/// A winding-number-1 loop around a pair of nearby branch points returns to
/// its start without enclosing an analytic endpoint.
const REGULAR_ESTIMATE_RESIDUAL: f64 = 1e-6;
/// Endpoints with a larger relative residual are tracked again.
const STRAY_RESIDUAL: f64 = 1e-8;
/// Endpoints better conditioned than this are treated as regular roots.
const REGULAR_RCOND: f64 = 1e-4;
const FLAT_RADIUS: f64 = 0.05;
const FLAT_TOL: f64 = 1e-6;

#[derive(Clone, Debug)]
struct CompiledForm {
    terms: Vec<(Vec<u32>, C64)>,
    degree: u32,
    norm: f64,
}

impl CompiledForm {
    fn new(f: &HomogeneousForm<C64>) -> Self {
        Self {
            terms: f.terms().map(|(e, c)| (e.clone(), *c)).collect(),
            degree: f.degree(),
            norm: f.coeff_norm(),
        }
    }

    fn eval(&self, pw: &[Vec<C64>]) -> C64 {
        let mut acc = C64::zero();
        for (e, c) in &self.terms {
            let mut m = *c;
            for (i, &k) in e.iter().enumerate() {
                if k > 0 {
                    m *= pw[i][k as usize];
                }
            }
            acc += m;
        }
        acc
    }
}

/// A compiled square system with its Jacobian.
#[derive(Clone, Debug)]
pub struct PolySystem {
    nvars: usize,
    eqs: Vec<CompiledForm>,
    partials: Vec<Vec<CompiledForm>>,
    max_degree: u32,
}

impl PolySystem {
    pub fn new(forms: &[HomogeneousForm<C64>]) -> Result<Self> {
        let nvars = forms.first().map(|f| f.nvars()).unwrap_or(0);
        if forms.iter().any(|f| f.nvars() != nvars) {
            return Err(Error::InvalidInput("forms in different numbers of variables".into()));
        }
        let eqs: Vec<CompiledForm> = forms.iter().map(CompiledForm::new).collect();
        let partials = forms
            .iter()
            .map(|f| f.gradient().iter().map(CompiledForm::new).collect())
            .collect();
        let max_degree = forms.iter().map(|f| f.degree()).max().unwrap_or(0);
        Ok(Self { nvars, eqs, partials, max_degree })
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.eqs.iter().map(|e| e.degree).collect()
    }

    fn powers(&self, x: &[C64]) -> Vec<Vec<C64>> {
        x.iter()
            .map(|&xi| {
                let mut v = Vec::with_capacity(self.max_degree as usize + 1);
                let mut acc = C64::new(1.0, 0.0);
                for _ in 0..=self.max_degree {
                    v.push(acc);
                    acc *= xi;
                }
                v
            })
            .collect()
    }

    pub fn eval(&self, x: &[C64]) -> Vec<C64> {
        let pw = self.powers(x);
        self.eqs.iter().map(|e| e.eval(&pw)).collect()
    }

    pub fn eval_jac(&self, x: &[C64]) -> (Vec<C64>, Vec<Vec<C64>>) {
        let pw = self.powers(x);
        let vals = self.eqs.iter().map(|e| e.eval(&pw)).collect();
        let jac = self
            .partials
            .iter()
            .map(|row| row.iter().map(|p| p.eval(&pw)).collect())
            .collect();
        (vals, jac)
    }

    /// `max_i |F_i(x)| / (|F_i|_1 |x|_inf^{d_i})`.
    pub fn relative_residual(&self, x: &[C64]) -> f64 {
        let m = x.iter().map(|v| v.norm()).fold(0.0, f64::max);
        let vals = self.eval(x);
        self.eqs
            .iter()
            .zip(vals)
            .map(|(e, v)| {
                let scale = e.norm * m.powi(e.degree as i32);
                if scale == 0.0 {
                    0.0
                } else {
                    v.norm() / scale
                }
            })
            .fold(0.0, f64::max)
    }
}

/// Scales homogeneous coordinates so the largest has modulus 1 and is real.
pub fn normalize_c64(x: &[C64]) -> Vec<C64> {
    let (k, _) = x
        .iter()
        .enumerate()
        .fold((0, -1.0), |acc, (i, v)| if v.norm() > acc.1 { (i, v.norm()) } else { acc });
    let d = x[k];
    x.iter().map(|v| v / d).collect()
}

/// Chordal (Fubini-Study sine) distance between two points of P^n.
pub fn chordal(x: &[C64], y: &[C64]) -> f64 {
    let nx: f64 = x.iter().map(|v| v.norm_sqr()).sum();
    let ny: f64 = y.iter().map(|v| v.norm_sqr()).sum();
    if nx == 0.0 || ny == 0.0 {
        return 1.0;
    }
    // |x ^ y|^2 = |x|^2|y|^2 - |<x,y>|^2, computed from 2x2 minors for accuracy
    let mut wedge = 0.0;
    for i in 0..x.len() {
        for j in i + 1..x.len() {
            wedge += (x[i] * y[j] - x[j] * y[i]).norm_sqr();
        }
    }
    (wedge / (nx * ny)).sqrt()
}

fn inf_norm(x: &[C64]) -> f64 {
    x.iter().map(|v| v.norm()).fold(0.0, f64::max)
}

fn random_c64(rng: &mut ChaCha8Rng) -> C64 {
    let th: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r: f64 = rng.gen_range(0.5..1.5);
    C64::from_polar(r, th)
}

struct Homotopy<'a> {
    target: &'a PolySystem,
    degrees: Vec<u32>,
    gamma: C64,
    patch: Vec<C64>,
}

struct Eval {
    h: Vec<C64>,
    hx: Vec<Vec<C64>>,
    ht: Vec<C64>,
}

impl Homotopy<'_> {
    fn n(&self) -> usize {
        self.degrees.len()
    }

    fn start_eval(&self, x: &[C64]) -> (Vec<C64>, Vec<Vec<C64>>) {
        let n = self.n();
        let mut g = Vec::with_capacity(n);
        let mut gx = vec![vec![C64::zero(); n + 1]; n];
        for (i, &d) in self.degrees.iter().enumerate() {
            let a = x[i + 1];
            let b = x[0];
            g.push(a.powu(d) - b.powu(d));
            gx[i][i + 1] = a.powu(d - 1) * d as f64;
            gx[i][0] = -(b.powu(d - 1) * d as f64);
        }
        (g, gx)
    }

    fn eval(&self, x: &[C64], t: C64) -> Eval {
        let (f, fx) = self.target.eval_jac(x);
        let (g, gx) = self.start_eval(x);
        let one = C64::new(1.0, 0.0);
        let a = (one - t) * self.gamma;
        let h = f.iter().zip(&g).map(|(fi, gi)| a * gi + t * fi).collect();
        let ht = f.iter().zip(&g).map(|(fi, gi)| fi - self.gamma * gi).collect();
        let hx = fx
            .iter()
            .zip(&gx)
            .map(|(fr, gr)| fr.iter().zip(gr).map(|(fv, gv)| a * gv + t * fv).collect())
            .collect();
        Eval { h, hx, ht }
    }

    fn augmented(&self, hx: &[Vec<C64>]) -> Vec<Vec<C64>> {
        let mut m = hx.to_vec();
        m.push(self.patch.clone());
        m
    }

    fn velocity(&self, x: &[C64], t: C64, dt: C64) -> Option<Vec<C64>> {
        let e = self.eval(x, t);
        let mut rhs: Vec<C64> = e.ht.iter().map(|v| -v * dt).collect();
        rhs.push(C64::zero());
        solve_c64(&self.augmented(&e.hx), &rhs).map(|(v, _)| v)
    }

    fn patch_value(&self, x: &[C64]) -> C64 {
        self.patch.iter().zip(x).map(|(u, v)| u * v).sum()
    }

    /// Newton at fixed `t`; returns the corrected point if it converged.
    fn correct(&self, x: &[C64], t: C64, max_iter: usize, tol: f64) -> Option<Vec<C64>> {
        let mut y = x.to_vec();
        let scale = inf_norm(x).max(1.0);
        let mut prev = f64::INFINITY;
        for it in 0..max_iter {
            let e = self.eval(&y, t);
            let mut rhs: Vec<C64> = e.h.iter().map(|v| -v).collect();
            rhs.push(C64::new(1.0, 0.0) - self.patch_value(&y));
            let (d, _) = solve_c64(&self.augmented(&e.hx), &rhs)?;
            let dn = inf_norm(&d);
            if (it == 0 && dn > 0.1 * scale) || (dn > 0.5 * prev && dn > tol * scale) {
                return None;
            }
            prev = dn;
            for (yi, di) in y.iter_mut().zip(&d) {
                *yi += di;
            }
            if dn <= tol * scale {
                return Some(y);
            }
        }
        None
    }

    /// Tracks `x` along the straight segment from `t0` to `t1`.
    fn track(&self, x: &mut Vec<C64>, t0: C64, t1: C64, max_step: f64) -> bool {
        let len = (t1 - t0).norm();
        if len == 0.0 {
            return true;
        }
        let dir = (t1 - t0) / len;
        let mut s = 0.0;
        let mut h = (max_step * 0.2).min(len);
        let mut successes = 0;
        while s < len {
            if h < 1e-13 * len.max(1e-3) {
                return false;
            }
            let step = h.min(len - s);
            let t = t0 + dir * s;
            let dt = dir * step;
            let pred = (|| {
                let k1 = self.velocity(x, t, dt)?;
                let x2: Vec<C64> = x.iter().zip(&k1).map(|(a, b)| a + b * 0.5).collect();
                let k2 = self.velocity(&x2, t + dt * 0.5, dt)?;
                let x3: Vec<C64> = x.iter().zip(&k2).map(|(a, b)| a + b * 0.5).collect();
                let k3 = self.velocity(&x3, t + dt * 0.5, dt)?;
                let x4: Vec<C64> = x.iter().zip(&k3).map(|(a, b)| a + b).collect();
                let k4 = self.velocity(&x4, t + dt, dt)?;
                Some(
                    (0..x.len())
                        .map(|i| x[i] + (k1[i] + k2[i] * 2.0 + k3[i] * 2.0 + k4[i]) / 6.0)
                        .collect::<Vec<C64>>(),
                )
            })();
            let corrected = pred.and_then(|p| self.correct(&p, t + dt, 3, 1e-10));
            match corrected {
                Some(y) if y.iter().all(|v| v.is_finite()) => {
                    *x = y;
                    s += step;
                    successes += 1;
                    if successes >= 2 {
                        h = (h * 1.6).min(max_step);
                        successes = 0;
                    }
                }
                _ => {
                    h *= 0.5;
                    successes = 0;
                }
            }
        }
        true
    }

    /// Cauchy endgame from `t = 1 - s0`. Returns the estimate of the endpoint
    /// and the winding number.
    fn cauchy(&self, x: &[C64], s0: f64, max_step: f64) -> Option<(Vec<C64>, usize)> {
        let one = C64::new(1.0, 0.0);
        let station = |k: usize| one - C64::from_polar(s0, std::f64::consts::TAU * k as f64 / STATIONS as f64);
        let start = x.to_vec();
        let mut cur = start.clone();
        let mut sum = vec![C64::zero(); x.len()];
        let step = max_step.min(s0 * 0.4);
        for loops in 1..=MAX_LOOPS {
            for k in 0..STATIONS {
                for (a, b) in sum.iter_mut().zip(&cur) {
                    *a += b;
                }
                if !self.track(&mut cur, station(k), station(k + 1), step) {
                    return None;
                }
            }
            if chordal(&cur, &start) < 1e-8 {
                let m = (loops * STATIONS) as f64;
                return Some((sum.iter().map(|v| v / m).collect(), loops));
            }
        }
        None
    }
}

struct Endpoint {
    point: Vec<C64>,
    cycle_number: usize,
    rcond: f64,
}

/// Newton at `t = 1` from `x`, accepted only for a well-conditioned root no
/// farther away than a few times the path's last movement.
fn direct_endpoint(hom: &Homotopy, x: &[C64], last_move: f64) -> Option<(Vec<C64>, f64)> {
    let y = hom.correct(x, C64::new(1.0, 0.0), 8, 1e-14)?;
    let moved = inf_norm(&y.iter().zip(x).map(|(a, b)| a - b).collect::<Vec<_>>());
    if moved > 4.0 * last_move {
        return None;
    }
    let (_, fx) = hom.target.eval_jac(&y);
    let (_, rcond) = solve_c64(&hom.augmented(&fx), &vec![C64::zero(); y.len()])?;
    (rcond > REGULAR_RCOND).then_some((y, rcond))
}

/// Tracks one path to `t = 1`. With `direct` set, well-conditioned endpoints
/// are finished by Newton instead of the Cauchy endgame.
fn track_path(hom: &Homotopy, start: &[C64], max_step: f64, direct: bool) -> Option<Endpoint> {
    let one = C64::new(1.0, 0.0);
    let mut x = start.to_vec();
    let mut s0 = 0.1;
    if !hom.track(&mut x, C64::zero(), one - s0, max_step) {
        return None;
    }
    let mut last = x.clone();
    if direct {
        for _ in 0..ENDGAME_HALVINGS {
            let s1 = s0 * 0.5;
            if !hom.track(&mut x, one - s0, one - s1, max_step.min(s0)) {
                break;
            }
            s0 = s1;
            let moved = inf_norm(&x.iter().zip(&last).map(|(a, b)| a - b).collect::<Vec<_>>());
            if let Some((y, rcond)) = direct_endpoint(hom, &x, moved) {
                return Some(Endpoint { point: normalize_c64(&y), cycle_number: 1, rcond });
            }
            last = x.clone();
            if s0 < 1e-4 {
                break;
            }
        }
    }
    // A loop around a branch point close to t = 1 averages distinct roots
    // into a stable but wrong estimate, so winding estimates must also have a
    // small residual before they are accepted.
    let mut prev: Option<Vec<C64>> = None;
    let mut best: Option<(Vec<C64>, usize, f64)> = None;
    for _ in 0..ENDGAME_HALVINGS {
        if let Some((est, c)) = hom.cauchy(&x, s0, max_step) {
            let res = hom.target.relative_residual(&est);
            let agrees = prev.as_ref().is_some_and(|p| chordal(p, &est) < 1e-10);
            if best.as_ref().map_or(true, |b| res <= b.2) {
                best = Some((est.clone(), c, res));
            }
            let limit = if c == 1 { REGULAR_ESTIMATE_RESIDUAL } else { ENDGAME_RESIDUAL };
            if agrees && res <= limit {
                best = Some((est, c, res));
                break;
            }
            prev = Some(est);
        }
        let s1 = s0 * 0.5;
        if !hom.track(&mut x, one - s0, one - s1, max_step.min(s0)) {
            break;
        }
        s0 = s1;
    }
    let (mut point, cycle_number, _) = best?;
    // refine regular endpoints at t = 1
    let (_, fx) = hom.target.eval_jac(&point);
    let rcond = solve_c64(&hom.augmented(&fx), &vec![C64::zero(); point.len()])
        .map(|(_, r)| r)
        .unwrap_or(0.0);
    if cycle_number == 1 && rcond > SINGULAR_RCOND {
        if let Some(y) = hom.correct(&point, one, 5, 1e-15) {
            point = y;
        } else if let Some(y) = newton_polish(hom, &point) {
            point = y;
        }
    }
    if !point.iter().all(|v| v.is_finite()) {
        return None;
    }

    Some(Endpoint { point: normalize_c64(&point), cycle_number, rcond })
}

fn newton_polish(hom: &Homotopy, x: &[C64]) -> Option<Vec<C64>> {
    let mut y = x.to_vec();
    for _ in 0..3 {
        let (f, fx) = hom.target.eval_jac(&y);
        let mut rhs: Vec<C64> = f.iter().map(|v| -v).collect();
        rhs.push(C64::new(1.0, 0.0) - hom.patch_value(&y));
        let (d, _) = solve_c64(&hom.augmented(&fx), &rhs)?;
        for (a, b) in y.iter_mut().zip(&d) {
            *a += b;
        }
    }
    Some(y)
}

fn start_points(degrees: &[u32]) -> Vec<Vec<C64>> {
    let mut out = vec![vec![C64::new(1.0, 0.0)]];
    for &d in degrees {
        let mut next = Vec::new();
        for p in &out {
            for k in 0..d {
                let mut q = p.clone();
                q.push(C64::from_polar(1.0, std::f64::consts::TAU * k as f64 / d as f64));
                next.push(q);
            }
        }
        out = next;
    }
    out
}

/// All isolated solutions of `n` forms in `n + 1` variables, counted with
/// multiplicity; their multiplicities sum to the product of the degrees.
///
/// Returns [`Error::Improper`] when the solution set has a
/// positive-dimensional component.
pub fn solve(forms: &[HomogeneousForm<C64>], opts: &HomotopyOptions) -> Result<Vec<Solution>> {
    let n = forms.len();
    if n == 0 {
        return Err(Error::InvalidInput("empty system".into()));
    }
    if forms.iter().any(|f| f.nvars() != n + 1) {
        return Err(Error::InvalidInput(format!("expected {n} forms in {} variables", n + 1)));
    }
    if forms.iter().any(|f| f.is_zero()) {
        return Err(Error::Improper("a form vanishes identically".into()));
    }
    if forms.iter().any(|f| f.degree() == 0) {
        // a nonzero constant has no zeros
        return Ok(Vec::new());
    }
    let scaled: Vec<HomogeneousForm<C64>> = forms
        .iter()
        .map(|f| f.scale(&C64::new(1.0 / f.max_coeff(), 0.0)))
        .collect();
    let target = PolySystem::new(&scaled)?;
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let gamma = random_c64(&mut rng);
    let patch: Vec<C64> = (0..=n).map(|_| random_c64(&mut rng)).collect();
    let hom = Homotopy { target: &target, degrees: target.degrees(), gamma, patch };
    let starts: Vec<Vec<C64>> = start_points(&hom.degrees)
        .into_iter()
        .map(|p| {
            let s = hom.patch_value(&p);
            p.iter().map(|v| v / s).collect()
        })
        .collect();

    let mut ends: Vec<Option<Endpoint>> = starts.iter().map(|s| track_path(&hom, s, opts.max_step, true)).collect();
    // retrack failures and suspected path jumps with smaller steps
    for attempt in 0..3 {
        let mut redo: Vec<usize> = (0..ends.len())
            .filter(|&i| ends[i].as_ref().map_or(true, |e| target.relative_residual(&e.point) > STRAY_RESIDUAL))
            .collect();
        for i in 0..ends.len() {
            for j in i + 1..ends.len() {
                if let (Some(a), Some(b)) = (&ends[i], &ends[j]) {
                    let regular = a.cycle_number == 1
                        && b.cycle_number == 1
                        && a.rcond > REGULAR_RCOND
                        && b.rcond > REGULAR_RCOND;
                    if regular && chordal(&a.point, &b.point) < opts.merge_tol {
                        redo.push(i);
                        redo.push(j);
                    }
                }
            }
        }
        redo.sort_unstable();
        redo.dedup();
        if redo.is_empty() {
            break;
        }
        let step = opts.max_step * 0.2f64.powi(attempt + 1);
        for i in redo {
            ends[i] = track_path(&hom, &starts[i], step, false);
        }
    }
    let failed = ends.iter().filter(|e| e.is_none()).count();
    let ends: Vec<Endpoint> = ends.into_iter().flatten().collect();

    let mut sols: Vec<Solution> = Vec::new();
    for e in ends {
        match sols.iter_mut().find(|s| chordal(&s.point, &e.point) < opts.merge_tol.max(1e-9)) {
            Some(s) => {
                s.multiplicity += 1;
                s.cycle_number = s.cycle_number.max(e.cycle_number);
                s.rcond = s.rcond.min(e.rcond);
            }
            None => sols.push(Solution {
                residual: target.relative_residual(&e.point),
                point: e.point,
                multiplicity: 1,
                cycle_number: e.cycle_number,
                rcond: e.rcond,
            }),
        }
    }
    merge_flat(&target, &mut sols);
    let suspicious = failed > 0
        || sols.iter().any(|s| s.is_singular() || s.residual > opts.residual_tol);
    if opts.check_proper && suspicious && n >= 2 {
        // a component meets every hyperplane; a single near miss can come from
        // a slice passing close to a flat singular point, so confirm on a
        // second slice
        let slice = |salt| HomotopyOptions { seed: mix_seed(opts.seed, salt), check_proper: false, ..opts.clone() };
        let confirmed = |salt| match has_component_on_slice(&scaled, &slice(salt)) {
            Err(Error::Numeric(_)) => Ok(false),
            other => other,
        };
        if confirmed(2)? && confirmed(3)? {
            return Err(Error::Improper("solution set meets a random hyperplane".into()));
        }
    }
    if failed > 0 {
        return Err(Error::Numeric(format!("{failed} homotopy path(s) failed to converge")));
    }
    for s in &sols {
        if s.residual > opts.residual_tol.max(1e-6) {
            return Err(Error::Numeric(format!("endpoint residual {:.3e} too large", s.residual)));
        }
    }
    sols.sort_by(|a, b| cmp_points(&a.point, &b.point));
    Ok(sols)
}

/// Derives an independent seed for a sub-computation.
/// Near a root of high multiplicity the system can be so flat that paths stop
/// short of it at ill-conditioned points with small but nonzero residual. Such
/// an endpoint joins a nearby singular solution when the residual stays below
/// `FLAT_TOL` along the whole segment between them.
fn merge_flat(target: &PolySystem, sols: &mut Vec<Solution>) {
    loop {
        let mut merge: Option<(usize, usize)> = None;
        let mut closest = FLAT_RADIUS;
        for (j, s) in sols.iter().enumerate() {
            if s.cycle_number != 1 || s.multiplicity != 1 || s.rcond >= REGULAR_RCOND {
                continue;
            }
            for (i, anchor) in sols.iter().enumerate() {
                let d = chordal(&anchor.point, &s.point);
                if i == j || !anchor.is_singular() || anchor.residual >= s.residual || d >= closest {
                    continue;
                }
                if segment_is_flat(target, &anchor.point, &s.point) {
                    merge = Some((i, j));
                    closest = d;
                }
            }
        }
        let Some((i, j)) = merge else { return };
        let absorbed = sols.remove(j);
        let i = if j < i { i - 1 } else { i };
        sols[i].multiplicity += absorbed.multiplicity;
        sols[i].rcond = sols[i].rcond.min(absorbed.rcond);
    }
}

fn segment_is_flat(target: &PolySystem, a: &[C64], b: &[C64]) -> bool {
    // align the scaling of b with a before interpolating
    let num: C64 = a.iter().zip(b).map(|(x, y)| y.conj() * x).sum();
    let den: f64 = b.iter().map(|y| y.norm_sqr()).sum();
    let lambda = num / den;
    (0..=16).all(|k| {
        let tau = k as f64 / 16.0;
        let x: Vec<C64> = a.iter().zip(b).map(|(x, y)| x * (1.0 - tau) + y * lambda * tau).collect();
        target.relative_residual(&x) <= FLAT_TOL
    })
}

pub fn mix_seed(seed: u64, salt: u64) -> u64 {
    let mut z = seed ^ salt.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Lexicographic order on coordinates (real part, then imaginary part).
pub fn cmp_points(a: &[C64], b: &[C64]) -> std::cmp::Ordering {
    for (x, y) in a.iter().zip(b) {
        let o = x.re.total_cmp(&y.re).then(x.im.total_cmp(&y.im));
        if o != std::cmp::Ordering::Equal {
            return o;
        }
    }
    std::cmp::Ordering::Equal
}

/// Whether the common zero set of `forms` meets a random hyperplane.
///
/// The forms are restricted to the hyperplane and replaced by `n - 1` random
/// combinations `sum_i c_ji m^(D - d_i) F_i` (with `m` a random linear form and
/// `D` the top degree); every common zero of the restricted forms is a
/// solution of the combinations, which are then checked against all forms.
fn has_component_on_slice(forms: &[HomogeneousForm<C64>], opts: &HomotopyOptions) -> Result<bool> {
    let n = forms.len();
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let w: Vec<C64> = (0..=n).map(|_| random_c64(&mut rng)).collect();
    let basis = nullspace(&[w], n + 1, 1e-12);
    let restricted: Vec<HomogeneousForm<C64>> = forms.iter().map(|f| f.substitute_linear(&basis)).collect();
    if restricted.iter().all(|f| f.max_coeff() <= 1e-12 * 1.0) {
        return Ok(true);
    }
    let top = restricted.iter().map(|f| f.degree()).max().unwrap_or(0);
    let m_coeffs: Vec<C64> = (0..n).map(|_| random_c64(&mut rng)).collect();
    let m = HomogeneousForm::linear(&m_coeffs);
    let mut combos = Vec::new();
    for _ in 0..n - 1 {
        let mut acc = HomogeneousForm::zero(n, top);
        for f in &restricted {
            let c = random_c64(&mut rng);
            let term = f.mul(&m.pow(top - f.degree())).scale(&c);
            acc = acc.add(&term)?;
        }
        combos.push(acc);
    }
    let sys = PolySystem::new(&restricted)?;
    // the inner solve must not reuse the slice's random draws
    let inner = HomotopyOptions { seed: mix_seed(opts.seed, 1), ..opts.clone() };
    let sols = match solve(&combos, &inner) {
        Ok(s) => s,
        Err(Error::Improper(_)) => return Ok(true),
        Err(e) => return Err(e),
    };
    Ok(sols.iter().any(|s| sys.relative_residual(&s.point) < 1e-7))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;

    fn c(s: &str) -> HomogeneousForm<C64> {
        s.parse::<HomogeneousForm<Rational>>().unwrap().to_c64()
    }

    fn total(sols: &[Solution]) -> usize {
        sols.iter().map(|s| s.multiplicity).sum()
    }

    #[test]
    fn three_planes_meet_in_a_point() {
        let sols = solve(&[c("X"), c("Y"), c("Z")], &HomotopyOptions::default()).unwrap();
        assert_eq!(sols.len(), 1);
        let p = &sols[0].point;
        assert!(p[0].norm() < 1e-12 && p[1].norm() < 1e-12 && p[2].norm() < 1e-12);
    }

    #[test]
    fn bezout_count_for_generic_system() {
        let forms = [
            c("X^2 + 2*Y^2 - 3*Z*T + X*T"),
            c("X*Y - Z^2 + 5*T^2 - Y*T"),
            c("X^3 - Y^2*Z + T^3 + 2*X*Z*T - 7*Y^3"),
        ];
        let sols = solve(&forms, &HomotopyOptions::default()).unwrap();
        assert_eq!(total(&sols), 12);
        for s in &sols {
            assert_eq!(s.multiplicity, 1);
            for f in &forms {
                assert!(f.eval(&s.point).norm() < 1e-9 * f.coeff_norm());
            }
        }
    }

    #[test]
    fn tangency_gives_multiplicity_two() {
        // plane Y = 0 and X = T meets the sphere in a double point
        let sols = solve(&[c("Y"), c("X - T"), c("X^2 + Y^2 + Z^2 - T^2")], &HomotopyOptions::default()).unwrap();
        assert_eq!(sols.len(), 1);
        assert_eq!(sols[0].multiplicity, 2);
    }

    #[test]
    fn detects_positive_dimensional_component() {
        // X = Y = 0 is a line inside X*T - Y*Z
        let err = solve(&[c("X"), c("2*X + Y"), c("X*T - Y*Z")], &HomotopyOptions::default());
        assert!(matches!(err, Err(Error::Improper(_))), "{err:?}");
    }

    #[test]
    fn plane_system_in_p2() {
        let f1 = c("X^2 + Y^2 - T^2").substitute_linear(&[
            vec![C64::new(1.0, 0.0), C64::zero(), C64::zero(), C64::zero()],
            vec![C64::zero(), C64::new(1.0, 0.0), C64::zero(), C64::zero()],
            vec![C64::zero(), C64::zero(), C64::zero(), C64::new(1.0, 0.0)],
        ]);
        let f2 = HomogeneousForm::linear(&[C64::new(1.0, 0.0), C64::new(-1.0, 0.0), C64::zero()]);
        let sols = solve(&[f1, f2], &HomotopyOptions::default()).unwrap();
        assert_eq!(total(&sols), 2);
        assert_eq!(sols.len(), 2);
    }

    #[test]
    fn chordal_distance_is_projective() {
        let x = vec![C64::new(1.0, 0.0), C64::new(2.0, 1.0)];
        let y: Vec<C64> = x.iter().map(|v| v * C64::new(0.0, -3.0)).collect();
        assert!(chordal(&x, &y) < 1e-15);
        let z = vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)];
        let w = vec![C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
        assert!((chordal(&z, &w) - 1.0).abs() < 1e-15);
    }
}
