//! Chow forms of 0-cycles, the Macaulay resultant of four forms on P^3, and a
//! randomized check of the identity
//! `Chow_X(g) R(b, h, f, g) = Chow_Y(g) R(a, h, f, g)`.

use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::cycles::{factored_ci_cycle, ZeroCycle};
use crate::error::{Error, Result};
use crate::expression::CIExpression;
use crate::geometry::SurfaceP3;
use crate::homotopy::normalize_c64;
use crate::linalg::det_rational;
use crate::poly::form::HomogeneousForm;
use crate::scalar::{fmt_complex, int, Field, Rational, C64};

/// A linear form `g` on P^3, i.e. a point of the dual space.
#[derive(Clone, Debug, PartialEq)]
pub struct DualLinearForm {
    coeffs: [Rational; 4],
}

impl DualLinearForm {
    pub fn new(coeffs: [Rational; 4]) -> Result<Self> {
        if coeffs.iter().all(|c| c.is_zero()) {
            return Err(Error::InvalidInput("the zero linear form".into()));
        }
        Ok(Self { coeffs })
    }

    pub fn from_ints(c: [i64; 4]) -> Result<Self> {
        Self::new(c.map(int))
    }

    /// Draws integer coefficients in `[-bound, bound]`, not all zero.
    pub fn random(rng: &mut impl Rng, bound: i64) -> Self {
        loop {
            let c: [i64; 4] = std::array::from_fn(|_| rng.gen_range(-bound..=bound));
            if let Ok(g) = Self::from_ints(c) {
                return g;
            }
        }
    }

    pub fn coeffs(&self) -> &[Rational; 4] {
        &self.coeffs
    }

    pub fn form(&self) -> HomogeneousForm<Rational> {
        HomogeneousForm::linear(&self.coeffs)
    }

    pub fn scale(&self, k: &Rational) -> Result<Self> {
        Self::new(self.coeffs.clone().map(|c| c * k))
    }

    fn eval_c64(&self, x: &[C64]) -> C64 {
        self.coeffs.iter().zip(x).map(|(c, v)| c.to_c64() * v).sum()
    }

    fn norm(&self) -> f64 {
        self.coeffs.iter().map(|c| c.to_c64().norm_sqr()).sum::<f64>().sqrt()
    }
}

/// `prod_i g(p_i)^{m_i}` over the entries of `z`, each point scaled so its
/// largest coordinate is 1.
pub fn chow_eval(z: &ZeroCycle, g: &DualLinearForm) -> C64 {
    z.entries()
        .iter()
        .map(|(p, m)| g.eval_c64(&normalize_c64(&p.to_c64())).powi(*m as i32))
        .product()
}

/// Smallest `|g(p)| / |g|` over the points of `z`.
fn chow_margin(z: &ZeroCycle, g: &DualLinearForm) -> f64 {
    let gn = g.norm();
    z.entries()
        .iter()
        .map(|(p, _)| {
            let x = normalize_c64(&p.to_c64());
            let xn: f64 = x.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
            g.eval_c64(&x).norm() / (gn * xn)
        })
        .fold(f64::INFINITY, f64::min)
}

pub const MAX_DEGREE_PRODUCT: u64 = 64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ResultantPath {
    /// `det M / det M'` with the extraneous minor nonsingular.
    Direct,
    /// Interpolated from the perturbation `f_i + eps x_i^{d_i}`.
    Perturbed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Resultant {
    pub value: Rational,
    pub path: ResultantPath,
}

struct MacaulaySystem {
    monomials: Vec<Vec<u32>>,
    /// For each row monomial, the form whose shifted copy fills the row.
    owner: Vec<usize>,
    /// Indices of monomials divisible by more than one `x_i^{d_i}`.
    extraneous: Vec<usize>,
}

impl MacaulaySystem {
    fn new(degrees: &[u32]) -> Self {
        let top: u32 = degrees.iter().map(|d| d - 1).sum::<u32>() + 1;
        let monomials = HomogeneousForm::<Rational>::monomials(4, top);
        let mut owner = Vec::with_capacity(monomials.len());
        let mut extraneous = Vec::new();
        for (k, m) in monomials.iter().enumerate() {
            let hits: Vec<usize> = (0..4).filter(|&i| m[i] >= degrees[i]).collect();
            owner.push(hits[0]);
            if hits.len() > 1 {
                extraneous.push(k);
            }
        }
        Self { monomials, owner, extraneous }
    }

    fn matrix(&self, forms: &[HomogeneousForm<Rational>]) -> Vec<Vec<Rational>> {
        let index: std::collections::HashMap<&Vec<u32>, usize> =
            self.monomials.iter().enumerate().map(|(k, m)| (m, k)).collect();
        let n = self.monomials.len();
        let mut rows = Vec::with_capacity(n);
        for (m, &i) in self.monomials.iter().zip(&self.owner) {
            let mut row = vec![Rational::zero(); n];
            let mut shift = m.clone();
            shift[i] -= forms[i].degree();
            for (e, c) in forms[i].terms() {
                let target: Vec<u32> = e.iter().zip(&shift).map(|(a, b)| a + b).collect();
                row[index[&target]] = c.clone();
            }
            rows.push(row);
        }
        rows
    }

    fn minor(&self, full: &[Vec<Rational>]) -> Vec<Vec<Rational>> {
        self.extraneous
            .iter()
            .map(|&i| self.extraneous.iter().map(|&j| full[i][j].clone()).collect())
            .collect()
    }
}

/// The resultant of four forms in `X, Y, Z, T`, normalized so that
/// `Res(X^{d_0}, Y^{d_1}, Z^{d_2}, T^{d_3}) = 1`.
pub fn macaulay_resultant(forms: &[HomogeneousForm<Rational>]) -> Result<Resultant> {
    if forms.len() != 4 || forms.iter().any(|f| f.nvars() != 4) {
        return Err(Error::InvalidInput("the resultant takes four forms in X, Y, Z, T".into()));
    }
    let degrees: Vec<u32> = forms.iter().map(|f| f.degree()).collect();
    if degrees.contains(&0) {
        return Err(Error::InvalidInput("resultant arguments must have positive degree".into()));
    }
    let product: u64 = degrees.iter().map(|&d| d as u64).product();
    if product > MAX_DEGREE_PRODUCT {
        return Err(Error::Capacity(format!(
            "degree product {product} exceeds {MAX_DEGREE_PRODUCT}"
        )));
    }
    let sys = MacaulaySystem::new(&degrees);
    let full = sys.matrix(forms);
    let denom = det_rational(&sys.minor(&full));
    if !denom.is_zero() {
        return Ok(Resultant { value: det_rational(&full) / denom, path: ResultantPath::Direct });
    }
    // the resultant is a polynomial in eps of degree at most sum_i prod_{j != i} d_j
    let deg: u64 = (0..4).map(|i| product / degrees[i] as u64).sum();
    let mut samples: Vec<(Rational, Rational)> = Vec::new();
    let mut k = 1i64;
    while samples.len() as u64 <= deg {
        let eps = int(k);
        let perturbed: Vec<HomogeneousForm<Rational>> = forms
            .iter()
            .enumerate()
            .map(|(i, f)| {
                let mut e = vec![0; 4];
                e[i] = degrees[i];
                f.add(&HomogeneousForm::monomial(e, eps.clone())).expect("same degree")
            })
            .collect();
        let full = sys.matrix(&perturbed);
        let denom = det_rational(&sys.minor(&full));
        if !denom.is_zero() {
            samples.push((eps, det_rational(&full) / denom));
        }
        k += 1;
        if k > 4 * (deg as i64 + 8) {
            return Err(Error::Numeric("no nonsingular perturbation found".into()));
        }
    }
    Ok(Resultant { value: lagrange_at_zero(&samples), path: ResultantPath::Perturbed })
}

fn lagrange_at_zero(samples: &[(Rational, Rational)]) -> Rational {
    let mut acc = Rational::zero();
    for (i, (xi, yi)) in samples.iter().enumerate() {
        let mut w = Rational::one();
        for (j, (xj, _)) in samples.iter().enumerate() {
            if i != j {
                w *= -xj.clone() / (xi - xj);
            }
        }
        acc += w * yi;
    }
    acc
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Holds,
    Fails,
    Degenerate,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct StarReport {
    pub verdict: Verdict,
    /// The common ratio of the two sides, when one was observed.
    pub ratio: Option<String>,
    pub samples_used: usize,
    pub discarded: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
}

/// Below this relative size a Chow factor counts as vanishing and the sample
/// is discarded.
const MARGIN: f64 = 1e-8;
const COEFF_BOUND: i64 = 10;

/// Tests `Chow_X(g) * Chow_{V_Y}(g) / (Chow_Y(g) * Chow_{V_X}(g))` for
/// constancy over `cfg.trials` random `g`, where `V_X = [a = h = f = 0]` and
/// `V_Y = [b = h = f = 0]`.
pub fn star_check<S: Field>(
    x: &ZeroCycle,
    y: &ZeroCycle,
    expr: &CIExpression<S>,
    surface: &SurfaceP3,
    cfg: &RunConfig,
) -> Result<StarReport> {
    if x.degree() != y.degree() {
        return Err(Error::DegreeMismatch(format!("deg X = {}, deg Y = {}", x.degree(), y.degree())));
    }
    let degenerate = |reason: String| StarReport {
        verdict: Verdict::Degenerate,
        ratio: None,
        samples_used: 0,
        discarded: 0,
        reason: Some(reason),
    };
    let vx = match factored_ci_cycle(expr.a(), expr.h(), surface, cfg) {
        Err(Error::Improper(m)) => return Ok(degenerate(format!("[a = h = f = 0]: {m}"))),
        other => other?,
    };
    let vy = match factored_ci_cycle(expr.b(), expr.h(), surface, cfg) {
        Err(Error::Improper(m)) => return Ok(degenerate(format!("[b = h = f = 0]: {m}"))),
        other => other?,
    };
    let left = x.add(&vy, cfg.point_tol);
    let right = y.add(&vx, cfg.point_tol);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut reference: Option<C64> = None;
    let mut used = 0;
    let mut discarded = 0;
    let mut consistent = true;
    let mut draws = 0;
    while used < cfg.trials && draws < 2 * cfg.trials {
        draws += 1;
        let g = DualLinearForm::random(&mut rng, COEFF_BOUND);
        if chow_margin(&left, &g) < MARGIN || chow_margin(&right, &g) < MARGIN {
            discarded += 1;
            continue;
        }
        used += 1;
        let ratio = chow_eval(&left, &g) / chow_eval(&right, &g);
        match reference {
            None => reference = Some(ratio),
            Some(r0) => {
                if (ratio - r0).norm() > cfg.ratio_tol * r0.norm() {
                    consistent = false;
                }
            }
        }
    }
    let needed = 2.max(cfg.trials / 2);
    let verdict = if used < needed {
        Verdict::Degenerate
    } else if consistent {
        Verdict::Holds
    } else {
        Verdict::Fails
    };
    Ok(StarReport {
        verdict,
        ratio: if verdict == Verdict::Holds { reference.map(fmt_complex) } else { None },
        samples_used: used,
        discarded,
        reason: (verdict == Verdict::Degenerate).then(|| format!("only {used} usable samples")),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cycles::complete_intersection_cycle;
    use crate::geometry::ProjectivePoint;
    use crate::scalar::rat;

    fn f(s: &str) -> HomogeneousForm {
        s.parse().unwrap()
    }

    #[test]
    fn chow_of_points() {
        let p = ProjectivePoint::from_ints([1, 2, 0, 1]).unwrap();
        let z = ZeroCycle::point(p.clone());
        let g = DualLinearForm::from_ints([2, -1, 5, 0]).unwrap();
        assert_eq!(chow_eval(&z, &g), C64::new(0.0, 0.0));
        let z2 = ZeroCycle::new([(p, 2)], 1e-7);
        let g = DualLinearForm::from_ints([1, 1, 1, 1]).unwrap();
        // normalized point (1/2, 1, 0, 1/2)
        assert!((chow_eval(&z2, &g) - C64::new(4.0, 0.0)).norm() < 1e-12);
        let g3 = g.scale(&int(3)).unwrap();
        assert!((chow_eval(&z2, &g3) - C64::new(36.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn linear_resultant_is_determinant() {
        let forms = [f("X + 2*Y - T"), f("3*Y + Z"), f("X - Z + 4*T"), f("2*X + Y + Z + T")];
        let r = macaulay_resultant(&forms).unwrap();
        assert_eq!(r.path, ResultantPath::Direct);
        let rows: Vec<Vec<Rational>> = forms.iter().map(|g| g.linear_coeffs().unwrap()).collect();
        assert_eq!(r.value, det_rational(&rows));
    }

    #[test]
    fn common_zero_kills_resultant() {
        // common zero (1, 1, 1, 1)
        let forms = [f("X - Y"), f("Y^2 - Z*T"), f("X*Z - T^2"), f("X + Y - 2*Z")];
        assert!(macaulay_resultant(&forms).unwrap().value.is_zero());
    }

    #[test]
    fn resultant_homogeneity() {
        let forms = vec![f("X^2 + Y*T - Z^2"), f("X + Y + 3*Z"), f("Y^2 - 2*X*T + T^2"), f("X - T + 2*Y")];
        let r = macaulay_resultant(&forms).unwrap().value;
        assert!(!r.is_zero());
        let lam = rat(3, 2);
        let mut scaled = forms.clone();
        scaled[0] = scaled[0].scale(&lam);
        // degree in the first form's coefficients is 1 * 2 * 1
        let r2 = macaulay_resultant(&scaled).unwrap().value;
        assert_eq!(r2, r * lam.clone() * lam);
    }

    #[test]
    fn perturbed_path_matches_change_of_coordinates() {
        // the row of Y*Z is X*Z, which misses every extraneous column
        let forms = vec![f("X^2 + Y^2 - Z*T"), f("X"), f("Y + Z - T"), f("Y - 2*Z + X + 3*T")];
        let r = macaulay_resultant(&forms).unwrap();
        assert_eq!(r.path, ResultantPath::Perturbed);
        // Res(f o A) = det(A)^(prod d_i) Res(f)
        let cols = vec![
            vec![int(1), int(2), int(3), int(1)],
            vec![int(2), int(1), int(-1), int(3)],
            vec![int(2), int(-1), int(1), int(1)],
            vec![int(1), int(1), int(4), int(-2)],
        ];
        let moved: Vec<HomogeneousForm> = forms.iter().map(|g| g.substitute_linear(&cols)).collect();
        let rm = macaulay_resultant(&moved).unwrap();
        assert_eq!(rm.path, ResultantPath::Direct);
        let a: Vec<Vec<Rational>> = (0..4).map(|i| cols.iter().map(|c| c[i].clone()).collect()).collect();
        let det = det_rational(&a);
        assert_eq!(rm.value, r.value * det.clone() * det);
    }

    #[test]
    fn capacity_is_enforced() {
        let forms = [f("X^5 + T^5"), f("Y^5 - T^5"), f("Z^3"), f("X + Y")];
        assert!(matches!(macaulay_resultant(&forms), Err(Error::Capacity(_))));
    }

    #[test]
    fn resultant_is_proportional_to_chow_product() {
        let s = SurfaceP3::parse("X^3 - 2*Y^3 + Z^3 + X*Y*T - T^3 + Z^2*T").unwrap();
        let b = f("X + 3*Y - Z + 2*T");
        let h = f("2*X - Y + Z - 5*T");
        let cyc = complete_intersection_cycle(&b, &h, &s, &RunConfig::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let mut reference = None;
        for _ in 0..10 {
            let g = DualLinearForm::random(&mut rng, 10);
            let res = macaulay_resultant(&[b.clone(), h.clone(), s.form().clone(), g.form()]).unwrap();
            let ratio = res.value.to_c64() / chow_eval(&cyc, &g);
            let r0 = *reference.get_or_insert(ratio);
            assert!((ratio - r0).norm() < 1e-8 * r0.norm(), "{ratio} vs {r0}");
        }
    }
}
