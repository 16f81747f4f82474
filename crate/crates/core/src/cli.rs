//! Command-line front end: every operation as a subcommand with a JSON report.

use std::ffi::OsString;

use clap::{Parser, Subcommand, ValueEnum};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::chow::{star_check, Verdict};
use crate::config::RunConfig;
use crate::contact::{
    contact_directions, equiv_step, orbit, polar_locus, quintic_family_demo, residual_search, xr_dimension,
    ContactLines, EquivPair, PolarLocus, QuinticVariant,
};
use crate::cycles::{complete_intersection_cycle, line_surface_cycle, restrict_to_line, LineRestriction, ZeroCycle};
use crate::error::{Error, Result};
use crate::expression::{
    lines_to_expression, match_multidegrees, verify_expression, CIExpression, ExpressionJson, MultiDegree,
};
use crate::geometry::{Line, ProjectivePoint, SurfaceP3};
use crate::poly::parse::parse_form;
use crate::poly::taylor::taylor_expansion;
use crate::sample::{plane_point, quadric_point, random_affine_point, random_form, surface_through, HEIGHT};
use crate::scalar::{fmt_complex, fmt_rational, Rational};

pub const EXIT_HOLDS: i32 = 0;
pub const EXIT_FAILS: i32 = 1;
pub const EXIT_DEGENERATE: i32 = 2;
pub const EXIT_USAGE: i32 = 64;

#[derive(Parser, Debug)]
#[command(name = "cyclequiv", version, about = "Rational equivalence of 0-cycles on surfaces in P^3")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    #[command(flatten)]
    opts: Options,
}

#[derive(Subcommand, Debug, Clone, Copy)]
enum Command {
    /// Taylor parts of the surface at a point
    Taylor,
    /// Restriction of the surface equation to a line
    RestrictLine,
    /// The intersection cycle of a line with the surface
    LineCycle,
    /// The cycle [a = h = f = 0]
    CiCycle,
    /// Polar locus of a point
    PolarLocus,
    /// Lines of high contact order at a point
    ContactLines,
    /// Points equivalent to a point of a quartic via contact-3 lines
    EquivStep,
    /// Iterated equivalence steps
    Orbit,
    /// Two lines with equal residual intersections (degree <= 3)
    ResidualSearch,
    /// Check X - Y = [a = h = f = 0] - [b = h = f = 0]
    VerifyExpr,
    /// Chow-form identity check of an expression
    StarCheck,
    /// Common multidegree for two expressions
    MatchDegrees,
    /// Dimension count for lines of contact order r
    XrDim,
    /// Contact-4 lines on a member of the quintic family
    DemoQuintic,
    /// Expression for two points of a plane
    DemoPlane,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum SampleKind {
    Plane,
    Quadric,
    Cubic,
    Quartic,
    Quintic,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
enum Variant {
    Generic,
    NoConic,
}

#[derive(clap::Args, Debug, Clone)]
struct Options {
    /// Surface equation in X, Y, Z, T (or @file)
    #[arg(long, global = true)]
    surface: Option<String>,
    /// A point, or a cycle `k*(x, y, z, t); ...` (or @file)
    #[arg(long, global = true)]
    point: Option<String>,
    #[arg(long, global = true)]
    point2: Option<String>,
    #[arg(long, global = true)]
    a: Option<String>,
    #[arg(long, global = true)]
    b: Option<String>,
    #[arg(long, global = true)]
    h: Option<String>,
    #[arg(long, global = true)]
    d: Option<u32>,
    #[arg(long, global = true)]
    r: Option<u32>,
    /// Degree s, or `s1,s2` for match-degrees
    #[arg(long, global = true)]
    s: Option<String>,
    /// Degree e, or `e1,e2` for match-degrees
    #[arg(long, global = true)]
    e: Option<String>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Point identification tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[arg(long, global = true)]
    precision: Option<u32>,
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Attempt limit for randomized searches
    #[arg(long = "max-iter", global = true)]
    max_iter: Option<usize>,
    /// Orbit size limit
    #[arg(long, global = true)]
    cap: Option<usize>,
    /// Orbit rounds
    #[arg(long, global = true)]
    rounds: Option<usize>,
    #[arg(long = "json-indent", global = true, default_value_t = 2)]
    json_indent: usize,
    /// Sample the surface (and missing points) instead of reading them
    #[arg(long, global = true, value_enum)]
    sample: Option<SampleKind>,
    #[arg(long, global = true, value_enum)]
    variant: Option<Variant>,
}

/// Runs the command line `args` (including the program name) and returns the
/// exit code and the text for standard output.
pub fn run<I, T>(args: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_HOLDS,
                _ => EXIT_USAGE,
            };
            return (code, e.to_string());
        }
    };
    let indent = cli.opts.json_indent;
    let (code, report) = match execute(cli.command, &cli.opts) {
        Ok(r) => r,
        Err(e) => (exit_code(&e), error_report(&e)),
    };
    (code, render(&report, indent))
}

/// Exit code for an error: malformed or inconsistent input is a usage error,
/// anything else is inconclusive.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::NonHomogeneous { .. }
        | Error::InvalidInput(_)
        | Error::Chart(_)
        | Error::NotOnSurface(_)
        | Error::DegreeMismatch(_) => EXIT_USAGE,
        _ => EXIT_DEGENERATE,
    }
}

pub fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Parse { .. } => "parse",
        Error::NonHomogeneous { .. } => "non-homogeneous",
        Error::InvalidInput(_) => "invalid-input",
        Error::Chart(_) => "chart",
        Error::LineOnSurface => "line-on-surface",
        Error::NotOnSurface(_) => "not-on-surface",
        Error::SingularPoint(_) => "singular-point",
        Error::PositiveDimensional(_) => "positive-dimensional",
        Error::Improper(_) => "improper",
        Error::Degenerate(_) => "degenerate",
        Error::SkewLines => "skew-lines",
        Error::DegreeMismatch(_) => "degree-mismatch",
        Error::Capacity(_) => "capacity",
        Error::Numeric(_) => "numeric",
    }
}

fn error_report(e: &Error) -> Value {
    let mut v = json!({ "error": error_kind(e), "message": e.to_string() });
    if let Error::Parse { token, position, .. } = e {
        v["token"] = json!(token);
        v["position"] = json!(position);
    }
    v
}

fn render(v: &Value, indent: usize) -> String {
    if indent == 0 {
        return v.to_string();
    }
    let pad = vec![b' '; indent];
    let fmt = serde_json::ser::PrettyFormatter::with_indent(&pad);
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut out, fmt);
    serde::Serialize::serialize(v, &mut ser).expect("values serialize");
    String::from_utf8(out).expect("utf-8 output")
}

fn config(o: &Options) -> Result<RunConfig> {
    let mut cfg = RunConfig::with_seed(o.seed);
    if let Some(t) = o.tol {
        cfg.point_tol = t;
    }
    if let Some(p) = o.precision {
        cfg.precision = p;
    }
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(m) = o.max_iter {
        cfg.max_attempts = m;
    }
    cfg.validate()?;
    Ok(cfg)
}

fn read_arg(s: &str) -> Result<String> {
    match s.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path)
            .map(|t| t.trim().to_string())
            .map_err(|e| Error::InvalidInput(format!("cannot read {path}: {e}"))),
        None => Ok(s.to_string()),
    }
}

fn required<'a>(v: &'a Option<String>, flag: &str) -> Result<&'a str> {
    v.as_deref().ok_or_else(|| Error::InvalidInput(format!("missing --{flag}")))
}

fn parse_point(s: &str) -> Result<ProjectivePoint> {
    ProjectivePoint::parse(&read_arg(s)?)
}

/// Parses `"(1, 0, 0, 1); 2*(0, 1, 0, 1)"`.
pub fn parse_cycle(s: &str, tol: f64) -> Result<ZeroCycle> {
    let text = read_arg(s)?;
    let mut entries = Vec::new();
    for part in text.split(';').map(str::trim).filter(|p| !p.is_empty()) {
        let (mult, point) = match part.split_once('*') {
            Some((k, p)) => {
                let k: i64 =
                    k.trim().parse().map_err(|_| Error::InvalidInput(format!("bad multiplicity in `{part}`")))?;
                (k, p)
            }
            None => (1, part),
        };
        entries.push((ProjectivePoint::parse(point)?, mult));
    }
    Ok(ZeroCycle::new(entries, tol))
}

fn sample_degree(kind: SampleKind) -> u32 {
    match kind {
        SampleKind::Plane => 1,
        SampleKind::Quadric => 2,
        SampleKind::Cubic => 3,
        SampleKind::Quartic => 4,
        SampleKind::Quintic => 5,
    }
}

/// The surface and up to `npoints` points on it, read or sampled.
fn surface_and_points(o: &Options, npoints: usize, cfg: &RunConfig) -> Result<(SurfaceP3, Vec<ProjectivePoint>)> {
    let mut given = Vec::new();
    for p in [&o.point, &o.point2].into_iter().take(npoints).flatten() {
        given.push(parse_point(p)?);
    }
    let Some(kind) = o.sample else {
        let surface = SurfaceP3::parse(&read_arg(required(&o.surface, "surface")?)?)?;
        if given.len() < npoints {
            return Err(Error::InvalidInput(format!("expected {npoints} point(s)")));
        }
        return Ok((surface, given));
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.derive(0x5a3e).seed);
    match kind {
        SampleKind::Quadric => {
            let surface = SurfaceP3::parse("X*T - Y*Z")?;
            while given.len() < npoints {
                given.push(quadric_point(&mut rng, HEIGHT));
            }
            Ok((surface, given))
        }
        SampleKind::Plane if given.is_empty() => {
            let plane = random_form(&mut rng, 4, 1, HEIGHT);
            let surface = SurfaceP3::new(plane.clone())?;
            while given.len() < npoints {
                given.push(plane_point(&mut rng, &plane, HEIGHT)?);
            }
            Ok((surface, given))
        }
        _ => {
            while given.len() < npoints {
                given.push(random_affine_point(&mut rng, 5));
            }
            let surface = surface_through(&mut rng, sample_degree(kind), &given, HEIGHT)?;
            Ok((surface, given))
        }
    }
}

fn expression_from(o: &Options) -> Result<CIExpression<Rational>> {
    let (a, b, h) = (read_arg(required(&o.a, "a")?)?, read_arg(required(&o.b, "b")?)?, read_arg(required(&o.h, "h")?)?);
    let expr = CIExpression::parse(&a, &b, &h)?;
    let declared = |v: &Option<String>| -> Result<Option<u32>> {
        v.as_deref()
            .map(|t| t.trim().parse::<u32>().map_err(|_| Error::InvalidInput(format!("bad degree `{t}`"))))
            .transpose()
    };
    if let (Some(s), Some(e)) = (declared(&o.s)?, declared(&o.e)?) {
        return CIExpression::from_json(&ExpressionJson { a, b, h, s, e });
    }
    Ok(expr)
}

fn degree_pair(v: &Option<String>, flag: &str) -> Result<[u64; 2]> {
    let text = required(v, flag)?;
    let parts: Vec<u64> = text
        .split(',')
        .map(|t| t.trim().parse::<u64>().map_err(|_| Error::InvalidInput(format!("bad --{flag} value `{text}`"))))
        .collect::<Result<_>>()?;
    match parts[..] {
        [x, y] => Ok([x, y]),
        _ => Err(Error::InvalidInput(format!("--{flag} expects two values `x,y`"))),
    }
}

fn cycle_value(c: &ZeroCycle) -> Value {
    serde_json::to_value(c.to_json()).expect("cycle serializes")
}

fn line_value(l: &Line) -> Value {
    json!([l.p, l.q])
}

fn contact_value(c: &ContactLines) -> Value {
    let dirs: Vec<Value> = c
        .directions
        .iter()
        .map(|d| {
            json!({
                "direction": d.direction.coord_strings(),
                "exact": d.direction.is_exact(),
                "multiplicity": d.multiplicity,
                "line": line_value(&d.line),
                "contact_order": d.contact_order,
                "exact_check": d.exact_check,
                "residual": d.residual,
            })
        })
        .collect();
    let chart = ["X", "Y", "Z", "T"][c.chart];
    json!({
        "base": c.base,
        "order": c.order,
        "chart": chart,
        "count": c.count(),
        "directions": dirs,
    })
}

fn pair_value(p: &EquivPair) -> Value {
    json!({
        "base": p.base,
        "point": p.point,
        "line_through_seed": line_value(&p.through_seed),
        "other_line": line_value(&p.other),
        "verified": p.verified,
        "expression": p.expression().ok().map(|e| e.to_json()),
    })
}

fn verdict_code(v: Verdict) -> i32 {
    match v {
        Verdict::Holds => EXIT_HOLDS,
        Verdict::Fails => EXIT_FAILS,
        Verdict::Degenerate => EXIT_DEGENERATE,
    }
}

fn holds_code(holds: bool) -> i32 {
    if holds {
        EXIT_HOLDS
    } else {
        EXIT_FAILS
    }
}

fn execute(cmd: Command, o: &Options) -> Result<(i32, Value)> {
    let cfg = config(o)?;
    match cmd {
        Command::Taylor => {
            let (surface, pts) = surface_and_points(o, 1, &cfg)?;
            let p = pts[0].exact_coords().ok_or_else(|| Error::InvalidInput("taylor needs a rational point".into()))?;
            let parts = taylor_expansion(surface.form(), p)?;
            let parts: Vec<Value> =
                parts.iter().enumerate().map(|(i, f)| json!({ "order": i, "form": f.to_string() })).collect();
            Ok((EXIT_HOLDS, json!({ "surface": surface.to_string(), "point": pts[0], "parts": parts })))
        }
        Command::RestrictLine => {
            let (surface, pts) = surface_and_points(o, 2, &cfg)?;
            let line = Line::new(pts[0].clone(), pts[1].clone())?;
            let r = restrict_to_line(surface.form(), &line)?;
            let coeffs: Vec<String> = match &r {
                LineRestriction::Exact { poly, .. } => poly.coeffs().iter().map(fmt_rational).collect(),
                LineRestriction::Numeric { poly, .. } => poly.coeffs().iter().map(|c| fmt_complex(*c)).collect(),
            };
            Ok((
                EXIT_HOLDS,
                json!({
                    "surface": surface.to_string(),
                    "line": line_value(&line),
                    "coefficients": coeffs,
                    "infinity_multiplicity": r.infinity_multiplicity(),
                }),
            ))
        }
        Command::LineCycle => {
            let (surface, pts) = surface_and_points(o, 2, &cfg)?;
            let line = Line::new(pts[0].clone(), pts[1].clone())?;
            let cycle = line_surface_cycle(&line, &surface, &cfg)?;
            Ok((EXIT_HOLDS, json!({ "surface": surface.to_string(), "line": line_value(&line), "cycle": cycle_value(&cycle) })))
        }
        Command::CiCycle => {
            let (surface, _) = surface_and_points(o, 0, &cfg)?;
            let a = parse_form(&read_arg(required(&o.a, "a")?)?)?;
            let h = parse_form(&read_arg(required(&o.h, "h")?)?)?;
            let cycle = complete_intersection_cycle(&a, &h, &surface, &cfg)?;
            Ok((EXIT_HOLDS, json!({ "surface": surface.to_string(), "cycle": cycle_value(&cycle) })))
        }
        Command::PolarLocus => {
            let (surface, pts) = surface_and_points(o, 1, &cfg)?;
            let r = o.r.unwrap_or(3);
            let report = match polar_locus(&surface, &pts[0], r, &cfg)? {
                PolarLocus::Curve(c) => json!({
                    "kind": "curve",
                    "degree": c.degree,
                    "section": cycle_value(&c.section),
                }),
                PolarLocus::Points(p) => json!({
                    "kind": "points",
                    "order": p.order,
                    "expected_degree": p.expected_degree,
                    "degree": p.cycle.degree(),
                    "distinct": p.distinct(),
                    "at_seed": p.at_seed,
                    "max_residual": p.max_residual,
                    "cycle": cycle_value(&p.cycle),
                }),
            };
            Ok((EXIT_HOLDS, json!({ "surface": surface.to_string(), "seed_point": pts[0], "locus": report })))
        }
        Command::ContactLines => {
            let (surface, pts) = surface_and_points(o, 1, &cfg)?;
            let c = contact_directions(&surface, &pts[0], o.r.unwrap_or(3), &cfg)?;
            Ok((EXIT_HOLDS, json!({ "surface": surface.to_string(), "contact": contact_value(&c) })))
        }
        Command::EquivStep => {
            let (surface, pts) = surface_and_points(o, 1, &cfg)?;
            let step = equiv_step(&surface, &pts[0], &cfg)?;
            let all = step.pairs.iter().all(|p| p.verified);
            let code = if step.pairs.is_empty() {
                EXIT_DEGENERATE
            } else {
                holds_code(all)
            };
            let degenerate = serde_json::to_value(&step.degenerate).expect("serializes");
            Ok((
                code,
                json!({
                    "surface": surface.to_string(),
                    "seed_point": step.seed,
                    "polar_degree": step.polar_degree,
                    "count": step.pairs.len(),
                    "verified": step.pairs.iter().filter(|p| p.verified).count(),
                    "pairs": step.pairs.iter().map(pair_value).collect::<Vec<_>>(),
                    "degenerate": degenerate,
                    "warnings": step.warnings,
                }),
            ))
        }
        Command::Orbit => {
            let (surface, pts) = surface_and_points(o, 1, &cfg)?;
            let state = orbit(&surface, &pts[0], o.rounds.unwrap_or(1), o.cap.unwrap_or(100), &cfg)?;
            let members: Vec<Value> = state
                .members
                .iter()
                .map(|m| {
                    json!({
                        "point": m.point,
                        "round": m.round,
                        "parent": m.parent,
                        "base": m.witness.as_ref().map(|w| w.base.clone()),
                        "verified": m.witness.as_ref().map(|w| w.verified),
                    })
                })
                .collect();
            Ok((
                EXIT_HOLDS,
                json!({
                    "surface": surface.to_string(),
                    "size": state.members.len(),
                    "rounds": state.rounds,
                    "truncated": state.truncated,
                    "members": members,
                    "warnings": state.warnings,
                }),
            ))
        }
        Command::ResidualSearch => {
            let (surface, pts) = surface_and_points(o, 2, &cfg)?;
            let res = residual_search(&surface, &pts[0], &pts[1], &cfg)?;
            let mut report = json!({
                "surface": surface.to_string(),
                "points": [&pts[0], &pts[1]],
                "success": res.success,
                "attempts": res.attempts,
            });
            let mut code = EXIT_DEGENERATE;
            if let (Some((l1, l2)), Some(residual)) = (&res.lines, &res.residual) {
                let expr = lines_to_expression::<crate::scalar::C64>(l1, l2)?;
                let x = ZeroCycle::point(pts[0].clone());
                let y = ZeroCycle::point(pts[1].clone());
                let holds = verify_expression(&x, &y, &expr, &surface, &cfg)?.holds;
                code = holds_code(holds);
                report["lines"] = json!([line_value(l1), line_value(l2)]);
                report["residual"] = cycle_value(residual);
                report["expression"] = serde_json::to_value(expr.to_json()).expect("serializes");
                report["holds"] = json!(holds);
            } else {
                report["verdict"] = json!("inconclusive");
                report["best_mismatch"] = json!(res.best_mismatch);
            }
            Ok((code, report))
        }
        Command::VerifyExpr | Command::StarCheck => {
            let surface = SurfaceP3::parse(&read_arg(required(&o.surface, "surface")?)?)?;
            let x = parse_cycle(required(&o.point, "point")?, cfg.point_tol)?;
            let y = parse_cycle(required(&o.point2, "point2")?, cfg.point_tol)?;
            let expr = expression_from(o)?;
            if matches!(cmd, Command::VerifyExpr) {
                let v = verify_expression(&x, &y, &expr, &surface, &cfg)?;
                Ok((
                    holds_code(v.holds),
                    json!({
                        "holds": v.holds,
                        "vx": cycle_value(&v.vx),
                        "vy": cycle_value(&v.vy),
                        "residual": cycle_value(&v.residual),
                        "expression": expr.to_json(),
                    }),
                ))
            } else {
                let report = star_check(&x, &y, &expr, &surface, &cfg)?;
                Ok((verdict_code(report.verdict), serde_json::to_value(&report).expect("serializes")))
            }
        }
        Command::MatchDegrees => {
            let s = degree_pair(&o.s, "s")?;
            let e = degree_pair(&o.e, "e")?;
            let m1 = MultiDegree::new(s[0], e[0])?;
            let m2 = MultiDegree::new(s[1], e[1])?;
            let m = match_multidegrees(m1, m2);
            let ok = m.verify(m1, m2);
            let mut v = serde_json::to_value(m).expect("serializes");
            v["verified"] = json!(ok);
            Ok((holds_code(ok), v))
        }
        Command::XrDim => {
            let d = o.d.ok_or_else(|| Error::InvalidInput("missing --d".into()))?;
            let r = o.r.ok_or_else(|| Error::InvalidInput("missing --r".into()))?;
            Ok((EXIT_HOLDS, serde_json::to_value(xr_dimension(d, r)?).expect("serializes")))
        }
        Command::DemoQuintic => {
            let variant = match o.variant.unwrap_or(Variant::Generic) {
                Variant::Generic => QuinticVariant::Generic,
                Variant::NoConic => QuinticVariant::NoConic,
            };
            let demo = quintic_family_demo(&cfg, variant)?;
            let lines: Vec<Value> = demo
                .lines
                .iter()
                .map(|l| {
                    json!({
                        "direction": l.direction.coord_strings(),
                        "line": line_value(&l.line),
                        "contact_order": l.contact_order,
                        "residual_point": l.residual,
                    })
                })
                .collect();
            let code = match (&demo.positive_dimensional, demo.expression_holds) {
                (Some(_), _) => EXIT_DEGENERATE,
                (None, Some(true)) if demo.distinct_residuals => EXIT_HOLDS,
                _ => EXIT_FAILS,
            };
            Ok((
                code,
                json!({
                    "surface": demo.surface.to_string(),
                    "base": demo.base,
                    "lines": lines,
                    "positive_dimensional": demo.positive_dimensional,
                    "distinct_residuals": demo.distinct_residuals,
                    "expression": demo.expression.as_ref().map(|e| e.to_json()),
                    "expression_holds": demo.expression_holds,
                    "resamples": demo.resamples,
                }),
            ))
        }
        Command::DemoPlane => {
            let demo = crate::contact::plane_demo(&cfg)?;
            Ok((
                holds_code(demo.holds && demo.star.verdict == Verdict::Holds),
                json!({
                    "surface": demo.surface.to_string(),
                    "x": demo.x,
                    "y": demo.y,
                    "joining_line": line_value(&demo.joining),
                    "line_through_x": line_value(&demo.through_x),
                    "line_through_y": line_value(&demo.through_y),
                    "expression": demo.expression.to_json(),
                    "holds": demo.holds,
                    "star": demo.star,
                }),
            ))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cli(args: &[&str]) -> (i32, Value) {
        let mut full = vec!["cyclequiv"];
        full.extend_from_slice(args);
        let (code, out) = run(full);
        (code, serde_json::from_str(&out).unwrap_or(Value::Null))
    }

    #[test]
    fn xr_dim_reports_empty() {
        let (code, v) = cli(&["xr-dim", "--d", "6", "--r", "5"]);
        assert_eq!(code, 0);
        assert_eq!(v["fibre"], json!(-2));
        assert_eq!(v["verdict"], json!("empty-expected"));
    }

    #[test]
    fn mismatched_cycle_degrees_are_usage_errors() {
        let (code, v) = cli(&[
            "verify-expr",
            "--surface",
            "X + Y + Z + T",
            "--point",
            "2*(1, -1, 0, 0)",
            "--point2",
            "(0, 1, -1, 0)",
            "--a",
            "X",
            "--b",
            "Y",
            "--h",
            "Z",
        ]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(v["error"], json!("degree-mismatch"));
    }

    #[test]
    fn parse_errors_name_the_token() {
        let (code, v) = cli(&["line-cycle", "--surface", "X^2 + Y^", "--point", "1,0,0,1", "--point2", "0,1,0,1"]);
        assert_eq!(code, EXIT_USAGE);
        assert_eq!(v["error"], json!("parse"));
        assert!(v["position"].is_number());
    }

    #[test]
    fn unknown_subcommand_is_usage() {
        assert_eq!(run(["cyclequiv", "frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run(["cyclequiv", "xr-dim", "--d", "x"]).0, EXIT_USAGE);
    }

    #[test]
    fn match_degrees_verifies() {
        let (code, v) = cli(&["match-degrees", "--s", "1,2", "--e", "3,5"]);
        assert_eq!(code, 0);
        assert_eq!(v["verified"], json!(true));
    }
}
