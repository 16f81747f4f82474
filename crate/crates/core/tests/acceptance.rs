//! Acceptance checks, one PASS/FAIL line per criterion.
//!
//! Criteria 1 (distinct count) and 3 (pair count) do not hold as stated: for
//! `q` on a generic quartic the polar system has `q` itself as a point of
//! multiplicity 6, leaving 18 further points. Those lines print FAIL; the run
//! still exits successfully when the computed values match that analysis.

use std::process::ExitCode;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use cyclequiv::chow::{star_check, Verdict};
use cyclequiv::cli;
use cyclequiv::config::RunConfig;
use cyclequiv::contact::{
    contact_directions, equiv_step, polar_locus, quintic_family_demo, residual_search, xr_dimension, Direction,
    PolarLocus, QuinticVariant,
};
use cyclequiv::cycles::{complete_intersection_cycle, line_surface_cycle, ZeroCycle};
use cyclequiv::expression::{
    lines_to_expression, match_multidegrees, nesting_rule_2, nesting_rule_3, pencil_params, verify_expression,
    CIExpression, MultiDegree,
};
use cyclequiv::geometry::{Line, ProjectivePoint, SurfaceP3};
use cyclequiv::poly::form::HomogeneousForm;
use cyclequiv::sample::{plane_point, quadric_point, random_affine_point, random_form, surface_through, HEIGHT};
use cyclequiv::scalar::{Field, Rational, C64};
use cyclequiv::Error;

/// Point identification tolerance for cycle equality.
const POINT_TOL: f64 = 1e-7;
/// Cluster tolerance for polar points.
const CLUSTER_TOL: f64 = 1e-8;
const RATIO_TOL: f64 = 1e-6;
const STAR_SAMPLES: usize = 50;
const POLAR_SECONDS: f64 = 10.0;

struct Outcome {
    pass: bool,
    /// Set when a FAIL reproduces the recorded analysis exactly.
    expected_failure: bool,
    detail: String,
}

impl Outcome {
    fn pass(pass: bool, detail: String) -> Self {
        Self { pass, expected_failure: false, detail }
    }
}

fn cfg(seed: u64) -> RunConfig {
    let mut c = RunConfig::with_seed(seed);
    c.point_tol = POINT_TOL;
    c.cluster_tol = CLUSTER_TOL;
    c
}

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A random quartic through a random rational point.
fn quartic_with_point(seed: u64) -> (SurfaceP3, ProjectivePoint) {
    let mut r = rng(seed);
    loop {
        let q = random_affine_point(&mut r, 5);
        if let Ok(s) = surface_through(&mut r, 4, std::slice::from_ref(&q), HEIGHT) {
            if !s.is_singular_at(&q, 1e-10) {
                return (s, q);
            }
        }
    }
}

fn polar_points(s: &SurfaceP3, q: &ProjectivePoint, c: &RunConfig) -> cyclequiv::Result<(i64, usize, i64)> {
    match polar_locus(s, q, 3, c)? {
        PolarLocus::Points(p) => Ok((p.cycle.degree(), p.distinct(), p.at_seed)),
        PolarLocus::Curve(_) => Err(Error::PositiveDimensional("curve".into())),
    }
}

fn criterion_1() -> Outcome {
    let mut totals = Vec::new();
    let mut slowest: f64 = 0.0;
    let mut off_distinct = Vec::new();
    for seed in 0..5 {
        let (s, q) = quartic_with_point(1000 + seed);
        let start = Instant::now();
        let Ok(on) = polar_points(&s, &q, &cfg(seed)) else {
            return Outcome::pass(false, format!("seed {seed}: polar locus failed"));
        };
        slowest = slowest.max(start.elapsed().as_secs_f64());
        totals.push(on);
        let off = random_affine_point(&mut rng(2000 + seed), 5);
        if let Ok((_, d, _)) = polar_points(&s, &off, &cfg(seed)) {
            off_distinct.push(d);
        }
    }
    let degree_ok = totals.iter().all(|t| t.0 == 24);
    let distinct_ok = totals.iter().all(|t| t.1 == 24);
    let timely = slowest < POLAR_SECONDS;
    let faithful = totals.iter().all(|&(t, d, at)| t == 24 && d == 19 && at == 6);
    Outcome {
        pass: degree_ok && distinct_ok && timely,
        expected_failure: faithful && timely && !distinct_ok,
        detail: format!(
            "total degrees {:?}, distinct {:?}, multiplicity at q {:?}, slowest {slowest:.2}s; \
             q off F gives distinct {:?}",
            totals.iter().map(|t| t.0).collect::<Vec<_>>(),
            totals.iter().map(|t| t.1).collect::<Vec<_>>(),
            totals.iter().map(|t| t.2).collect::<Vec<_>>(),
            off_distinct,
        ),
    }
}

fn criterion_2() -> Outcome {
    let mut good = 0;
    let mut seen = 0;
    for seed in 0..20 {
        let (s, p) = quartic_with_point(3000 + seed);
        seen += 1;
        match contact_directions(&s, &p, 3, &cfg(seed)) {
            Ok(c) if c.count() == 2 && c.directions.iter().all(|d| d.exact_check == Some(true)) => good += 1,
            Ok(c) => eprintln!("  criterion 2, seed {seed}: {} directions", c.count()),
            Err(e) => eprintln!("  criterion 2, seed {seed}: {e}"),
        }
    }
    Outcome::pass(good == seen, format!("{good}/{seen} points with two directions, both exactly rechecked"))
}

fn criterion_3() -> Outcome {
    let (s, q) = quartic_with_point(4007);
    let step = match equiv_step(&s, &q, &cfg(7)) {
        Ok(step) => step,
        Err(e) => return Outcome::pass(false, format!("equiv_step failed: {e}")),
    };
    let verified = step.pairs.iter().filter(|p| p.verified).count();
    let n = step.pairs.len();
    let at_seed: i64 = step.degenerate.iter().map(|d| d.multiplicity).sum();
    Outcome {
        pass: n == 24 && verified == n,
        expected_failure: n == 18 && verified == 18 && at_seed == 6,
        detail: format!(
            "{n} pairs, {verified} satisfy q - q_i = (L1.F) - (L2.F); polar degree {}, multiplicity {at_seed} at q",
            step.polar_degree
        ),
    }
}

fn criterion_4() -> Outcome {
    let mut plane_ok = 0;
    let mut quadric_ok = 0;
    for seed in 0..20u64 {
        let mut r = rng(5000 + seed);
        let plane = random_form(&mut r, 4, 1, HEIGHT);
        let s = SurfaceP3::new(plane.clone()).unwrap();
        let (x, y) = (plane_point(&mut r, &plane, HEIGHT).unwrap(), plane_point(&mut r, &plane, HEIGHT).unwrap());
        if search_and_verify(&s, &x, &y, seed) == Some(true) {
            plane_ok += 1;
        }
        let s = SurfaceP3::parse("X*T - Y*Z").unwrap();
        let (x, y) = (quadric_point(&mut r, HEIGHT), quadric_point(&mut r, HEIGHT));
        if search_and_verify(&s, &x, &y, seed) == Some(true) {
            quadric_ok += 1;
        }
    }
    let mut cubic_ok = 0;
    let mut inconclusive = 0;
    let cubic_total = 20;
    for seed in 0..cubic_total {
        let mut r = rng(6000 + seed);
        let pts = [random_affine_point(&mut r, 5), random_affine_point(&mut r, 5)];
        let Ok(s) = surface_through(&mut r, 3, &pts, HEIGHT) else { continue };
        match search_and_verify(&s, &pts[0], &pts[1], seed) {
            Some(true) => cubic_ok += 1,
            None => inconclusive += 1,
            Some(false) => {}
        }
    }
    let rate = cubic_ok as f64 / cubic_total as f64;
    Outcome::pass(
        plane_ok == 20 && quadric_ok == 20 && rate >= 0.8,
        format!(
            "plane {plane_ok}/20, quadric {quadric_ok}/20, cubic {cubic_ok}/{cubic_total} \
             ({inconclusive} inconclusive)"
        ),
    )
}

/// `Some(holds)` when the search found lines, `None` when inconclusive.
fn search_and_verify(s: &SurfaceP3, x: &ProjectivePoint, y: &ProjectivePoint, seed: u64) -> Option<bool> {
    let c = cfg(seed);
    let res = residual_search(s, x, y, &c).ok()?;
    let (l1, l2) = res.lines.filter(|_| res.success)?;
    let expr = lines_to_expression::<C64>(&l1, &l2).ok()?;
    let holds = expr.s() == 1
        && expr.e() == 1
        && verify_expression(&ZeroCycle::point(x.clone()), &ZeroCycle::point(y.clone()), &expr, s, &c)
            .map(|v| v.holds)
            .unwrap_or(false);
    Some(holds)
}

fn same_direction(d: &Direction, target: [f64; 3]) -> bool {
    let v: Vec<C64> = d.to_c64().to_vec();
    let t: Vec<C64> = target.iter().map(|&x| C64::new(x, 0.0)).collect();
    // proportional: all 2x2 minors vanish
    (0..3).all(|i| (0..3).all(|j| (v[i] * t[j] - v[j] * t[i]).norm() < 1e-9))
}

fn criterion_5() -> Outcome {
    let mut good = 0;
    for seed in 0..5 {
        let demo = match quintic_family_demo(&cfg(seed), QuinticVariant::Generic) {
            Ok(d) => d,
            Err(e) => {
                eprintln!("  criterion 5, seed {seed}: {e}");
                continue;
            }
        };
        let targets = [[0.0, -1.0, 1.0], [1.0, 0.0, -1.0]];
        let found = demo.lines.len() == 2
            && targets.iter().all(|t| demo.lines.iter().any(|l| same_direction(&l.direction, *t)));
        let orders = demo.lines.iter().all(|l| l.contact_order == 4);
        if found && orders && demo.distinct_residuals && demo.base == ProjectivePoint::from_ints([0, 0, 0, 1]).unwrap()
        {
            good += 1;
        }
    }
    Outcome::pass(good == 5, format!("{good}/5 seeds: directions (0,-1,1), (1,0,-1), contact order 4, distinct residuals"))
}

fn criterion_6() -> Outcome {
    let got: Vec<i64> = [(4, 3), (5, 4), (6, 5)].iter().map(|&(d, r)| xr_dimension(d, r).unwrap().fibre).collect();
    Outcome::pass(got == [2, 0, -2], format!("fibres {got:?} for (4,3), (5,4), (6,5)"))
}

/// Verified quartic witnesses `(F, q, q_i, expression)`.
fn quartic_witnesses(count: usize) -> Vec<(SurfaceP3, ProjectivePoint, ProjectivePoint, CIExpression<C64>)> {
    let mut out = Vec::new();
    for seed in 0..4 {
        let (s, q) = quartic_with_point(7000 + seed);
        let Ok(step) = equiv_step(&s, &q, &cfg(seed)) else { continue };
        for p in step.pairs.iter().filter(|p| p.verified) {
            if let Ok(e) = p.expression() {
                out.push((s.clone(), q.clone(), p.point.clone(), e));
            }
        }
        if out.len() >= count {
            break;
        }
    }
    out.truncate(count);
    out
}

fn criterion_7() -> Outcome {
    let mut c = cfg(11);
    c.trials = STAR_SAMPLES;
    c.ratio_tol = RATIO_TOL;
    let witnesses = quartic_witnesses(20);
    let holds = witnesses
        .iter()
        .filter(|(s, q, qi, e)| {
            star_check(&ZeroCycle::point(q.clone()), &ZeroCycle::point(qi.clone()), e, s, &c)
                .map(|r| r.verdict == Verdict::Holds && r.samples_used == STAR_SAMPLES)
                .unwrap_or(false)
        })
        .count();
    let mut fails = 0;
    let controls = 20;
    for seed in 0..controls {
        let mut r = rng(8000 + seed);
        let pts = [random_affine_point(&mut r, 5), random_affine_point(&mut r, 5)];
        let Ok(s) = surface_through(&mut r, 4, &pts, HEIGHT) else { continue };
        let lin = |r: &mut ChaCha8Rng| random_form(r, 4, 1, HEIGHT);
        let Ok(expr) = CIExpression::from_forms(lin(&mut r), lin(&mut r), lin(&mut r)) else { continue };
        let report = star_check(&ZeroCycle::point(pts[0].clone()), &ZeroCycle::point(pts[1].clone()), &expr, &s, &c);
        if matches!(report, Ok(ref rep) if rep.verdict == Verdict::Fails) {
            fails += 1;
        }
    }
    Outcome::pass(
        witnesses.len() >= 20 && holds == witnesses.len() && fails == controls,
        format!(
            "holds on {holds}/{} witnesses over {STAR_SAMPLES} samples at relative {RATIO_TOL:e}; fails on {fails}/{controls} controls",
            witnesses.len()
        ),
    )
}

fn nest_and_verify<S: Field>(
    expr: &CIExpression<S>,
    x: &ProjectivePoint,
    y: &ProjectivePoint,
    s: &SurfaceP3,
    seed: u64,
) -> cyclequiv::Result<bool> {
    let c = cfg(seed);
    let mut r = rng(9500 + seed);
    let gd = r.gen_range(1..=2);
    let g: HomogeneousForm<S> = random_form(&mut r, 4, gd, 5).map(S::from_rational);
    let (alpha, beta) = pencil_params(&c);
    let (x, y) = (ZeroCycle::point(x.clone()), ZeroCycle::point(y.clone()));
    let holds = |e: &CIExpression<S>| verify_expression(&x, &y, e, s, &c).map(|v| v.holds);
    let e2 = nesting_rule_2(expr, &g, s, &c)?;
    let ok2 = holds(&e2)? && e2.s() == expr.s() + gd;
    // rule 3 needs {a = b = f = 0} finite, which rule 2 destroys, so the
    // composition runs rule 3 first
    let k = r.gen_range(1..=2);
    let e3 = nesting_rule_3(expr, k, (S::from_rational(&alpha), S::from_rational(&beta)), s, &c)?;
    let ok3 = holds(&e3)? && e3.e() == expr.e() + k * expr.s();
    let both = nesting_rule_2(&e3, &g, s, &c)?;
    Ok(ok2 && ok3 && holds(&both)?)
}

fn criterion_8() -> Outcome {
    let mut tried = 0;
    let mut preserved = 0;
    for seed in 0..10u64 {
        let mut r = rng(9000 + seed);
        let plane = random_form(&mut r, 4, 1, HEIGHT);
        let s = SurfaceP3::new(plane.clone()).unwrap();
        let (x, y) = (plane_point(&mut r, &plane, HEIGHT).unwrap(), plane_point(&mut r, &plane, HEIGHT).unwrap());
        let apex = random_affine_point(&mut r, 7);
        let (Ok(l1), Ok(l2)) = (Line::new(x.clone(), apex.clone()), Line::new(y.clone(), apex)) else { continue };
        let Ok(expr) = lines_to_expression::<Rational>(&l1, &l2) else { continue };
        tried += 1;
        preserved += nest_and_verify(&expr, &x, &y, &s, seed).unwrap_or(false) as usize;

        let quadric = SurfaceP3::parse("X*T - Y*Z").unwrap();
        let (x, y) = (quadric_point(&mut r, HEIGHT), quadric_point(&mut r, HEIGHT));
        let Ok(res) = residual_search(&quadric, &x, &y, &cfg(seed)) else { continue };
        let Some((l1, l2)) = res.lines else { continue };
        let Ok(expr) = lines_to_expression::<C64>(&l1, &l2) else { continue };
        tried += 1;
        preserved += nest_and_verify(&expr, &x, &y, &quadric, seed).unwrap_or(false) as usize;
    }
    for (i, (s, q, qi, expr)) in quartic_witnesses(4).iter().enumerate() {
        tried += 1;
        preserved += nest_and_verify(expr, q, qi, s, 100 + i as u64).unwrap_or(false) as usize;
    }
    let mut r = rng(9900);
    let mut balanced = 0;
    for _ in 0..100 {
        let m1 = MultiDegree::new(r.gen_range(1..50), r.gen_range(1..500)).unwrap();
        let m2 = MultiDegree::new(r.gen_range(1..50), r.gen_range(1..500)).unwrap();
        let m = match_multidegrees(m1, m2);
        let lhs = m1.e as u128 + m.r[0] as u128 * (m1.s + m.t[0]) as u128;
        let rhs = m2.e as u128 + m.r[1] as u128 * (m2.s + m.t[1]) as u128;
        let positive = m1 == m2 || (m.r.iter().all(|&v| v > 0) && m.t.iter().all(|&v| v > 0));
        balanced += (lhs == rhs && lhs == m.common.e as u128 && positive && m.verify(m1, m2)) as usize;
    }
    Outcome::pass(
        tried >= 20 && preserved == tried && balanced == 100,
        format!("rules 2 and 3 preserve {preserved}/{tried} differences; matching balances on {balanced}/100"),
    )
}

fn criterion_9() -> Outcome {
    let mut r = rng(10_000);
    let (mut line_ok, mut line_n) = (0, 0);
    while line_n < 100 {
        let d = r.gen_range(1..=5);
        let s = SurfaceP3::new(random_form(&mut r, 4, d, HEIGHT)).unwrap();
        let (p, q) = (random_affine_point(&mut r, 6), random_affine_point(&mut r, 6));
        let Ok(l) = Line::new(p, q) else { continue };
        match line_surface_cycle(&l, &s, &cfg(line_n)) {
            Ok(c) => line_ok += (c.degree() == d as i64) as usize,
            Err(Error::LineOnSurface) => continue,
            Err(_) => {}
        }
        line_n += 1;
    }
    let (mut ci_ok, mut ci_n) = (0, 0);
    while ci_n < 100 {
        let d = r.gen_range(1..=4);
        let (sd, e) = (r.gen_range(1..=2), r.gen_range(1..=2));
        let s = SurfaceP3::new(random_form(&mut r, 4, d, HEIGHT)).unwrap();
        let (a, h) = (random_form(&mut r, 4, sd, 5), random_form(&mut r, 4, e, 5));
        match complete_intersection_cycle(&a, &h, &s, &cfg(ci_n)) {
            Ok(c) => ci_ok += (c.degree() == (sd * e * d) as i64) as usize,
            Err(Error::Improper(_)) => continue,
            Err(_) => {}
        }
        ci_n += 1;
    }
    let (mut polar_ok, mut polar_n) = (0, 0);
    let mut seed = 0;
    while polar_n < 100 {
        seed += 1;
        let d: u32 = [3, 4, 4, 5][seed as usize % 4];
        let mut rr = rng(11_000 + seed);
        let q = random_affine_point(&mut rr, 5);
        let Ok(s) = surface_through(&mut rr, d, std::slice::from_ref(&q), HEIGHT) else { continue };
        let expected = (d * (d - 1) * (d - 2)) as i64;
        match polar_points(&s, &q, &cfg(seed)) {
            Ok((total, _, _)) => polar_ok += (total == expected) as usize,
            Err(Error::Improper(_)) | Err(Error::PositiveDimensional(_)) => continue,
            Err(_) => {}
        }
        polar_n += 1;
    }
    Outcome::pass(
        line_ok == 100 && ci_ok == 100 && polar_ok == 100,
        format!("line {line_ok}/{line_n} = d, complete intersection {ci_ok}/{ci_n} = sed, polar {polar_ok}/{polar_n} = d(d-1)(d-2)"),
    )
}

fn criterion_10() -> Outcome {
    let plane = "2*X - Y + 3*Z - T";
    let expr = ["--a", "X + Y + Z", "--b", "X - 2*Y + T", "--h", "Y + 3*T"];
    let pts = ["--point", "1, 2, 0, 0", "--point2", "0, 1, 0, -1"];
    let mut commands: Vec<Vec<&str>> = vec![
        vec!["taylor", "--sample", "quartic"],
        vec!["restrict-line", "--sample", "cubic"],
        vec!["line-cycle", "--sample", "quartic"],
        vec!["ci-cycle", "--sample", "cubic", "--a", "X + Y - Z", "--h", "X - 2*T + Y"],
        vec!["polar-locus", "--sample", "quartic"],
        vec!["contact-lines", "--sample", "quartic"],
        vec!["equiv-step", "--sample", "quartic", "--seed", "7"],
        vec!["orbit", "--sample", "quartic", "--rounds", "1", "--cap", "30"],
        vec!["residual-search", "--sample", "cubic"],
        vec!["match-degrees", "--s", "1,2", "--e", "5,3"],
        vec!["xr-dim", "--d", "6", "--r", "5"],
        vec!["demo-quintic", "--seed", "3"],
        vec!["demo-plane", "--seed", "3"],
    ];
    for cmd in ["verify-expr", "star-check"] {
        let mut v = vec![cmd, "--surface", plane];
        v.extend(pts);
        v.extend(expr);
        commands.push(v);
    }
    let mut same = 0;
    let mut differing = Vec::new();
    for c in &commands {
        let args = || std::iter::once("cyclequiv").chain(c.iter().copied());
        if cli::run(args()) == cli::run(args()) {
            same += 1;
        } else {
            differing.push(c[0]);
        }
    }
    Outcome::pass(
        same == commands.len() && commands.len() == 15,
        format!("{same}/{} subcommands byte-identical across runs {differing:?}", commands.len()),
    )
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 10] = [
        ("quartic polar count", criterion_1),
        ("two contact-3 lines", criterion_2),
        ("equivalence step degree 24", criterion_3),
        ("plane and quadric completeness", criterion_4),
        ("quintic family demo", criterion_5),
        ("dimension formula table", criterion_6),
        ("Chow identity soundness", criterion_7),
        ("nesting invariance", criterion_8),
        ("Bezout property suite", criterion_9),
        ("determinism", criterion_10),
    ];
    let mut unexpected = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let o = check();
        let verdict = if o.pass { "PASS" } else { "FAIL" };
        let note = if o.expected_failure { " [known: q is a 6-fold polar point]" } else { "" };
        println!("{verdict} {:>2} {name}: {} ({:.1}s){note}", i + 1, o.detail, start.elapsed().as_secs_f64());
        if !o.pass && !o.expected_failure {
            unexpected += 1;
        }
    }
    if unexpected > 0 {
        println!("{unexpected} criteria failed unexpectedly");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
