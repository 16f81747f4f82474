//! Seeded random surfaces and points with small integer data.

use num_traits::Zero;
use rand::Rng;

use crate::error::{Error, Result};
use crate::geometry::{ProjectivePoint, SurfaceP3};
use crate::linalg::{nullspace, rank};
use crate::poly::form::HomogeneousForm;
use crate::scalar::{int, Rational};

/// Coefficient bound for sampled forms.
pub const HEIGHT: i64 = 9;

pub fn random_int(rng: &mut impl Rng, height: i64) -> Rational {
    int(rng.gen_range(-height..=height))
}

pub fn random_nonzero_int(rng: &mut impl Rng, height: i64) -> Rational {
    loop {
        let v = rng.gen_range(-height..=height);
        if v != 0 {
            return int(v);
        }
    }
}

/// A form with every coefficient drawn from `[-height, height]`.
pub fn random_form(rng: &mut impl Rng, nvars: usize, degree: u32, height: i64) -> HomogeneousForm<Rational> {
    let terms: Vec<(Vec<u32>, Rational)> = HomogeneousForm::<Rational>::monomials(nvars, degree)
        .into_iter()
        .map(|e| (e, random_int(rng, height)))
        .collect();
    HomogeneousForm::from_terms(nvars, degree, terms).expect("monomials have the right degree")
}

/// A rational point `(x, y, z, 1)` with small integer coordinates.
pub fn random_affine_point(rng: &mut impl Rng, height: i64) -> ProjectivePoint {
    let c: Vec<Rational> = (0..3).map(|_| random_int(rng, height)).chain([int(1)]).collect();
    ProjectivePoint::exact(c).expect("T = 1")
}

/// A random surface of the given degree through every point in `points`,
/// obtained by correcting a random form along a few monomials.
pub fn surface_through(
    rng: &mut impl Rng,
    degree: u32,
    points: &[ProjectivePoint],
    height: i64,
) -> Result<SurfaceP3> {
    let coords: Vec<&[Rational]> = points
        .iter()
        .map(|p| p.exact_coords().ok_or_else(|| Error::InvalidInput("sampling needs rational points".into())))
        .collect::<Result<_>>()?;
    let g = random_form(rng, 4, degree, height);
    // greedily choose monomials whose evaluations at the points are independent
    let mut chosen: Vec<Vec<u32>> = Vec::new();
    let mut columns: Vec<Vec<Rational>> = Vec::new();
    for e in HomogeneousForm::<Rational>::monomials(4, degree).into_iter().rev() {
        if chosen.len() == coords.len() {
            break;
        }
        let m = HomogeneousForm::monomial(e.clone(), int(1));
        let col: Vec<Rational> = coords.iter().map(|p| m.eval(p)).collect();
        let mut trial = columns.clone();
        trial.push(col.clone());
        if rank(&trial, 0.0) == trial.len() {
            chosen.push(e);
            columns.push(col);
        }
    }
    if chosen.len() < coords.len() {
        return Err(Error::Degenerate("points impose dependent conditions".into()));
    }
    // solve sum_j alpha_j m_j(p_i) = -g(p_i) through the kernel of [M | g(p)]
    let rows: Vec<Vec<Rational>> = coords
        .iter()
        .enumerate()
        .map(|(i, p)| columns.iter().map(|c| c[i].clone()).chain([g.eval(p)]).collect())
        .collect();
    let k = chosen.len();
    let kernel = nullspace(&rows, k + 1, 0.0);
    let v = kernel
        .into_iter()
        .find(|v| !v[k].is_zero())
        .ok_or_else(|| Error::Degenerate("no correction found".into()))?;
    let mut f = g.scale(&v[k]);
    for (e, a) in chosen.into_iter().zip(v) {
        f = f.add(&HomogeneousForm::monomial(e, a)).expect("same degree");
    }
    SurfaceP3::new(f)
}

/// A random point `(ac, ad, bc, bd)` on the quadric `XT - YZ`.
pub fn quadric_point(rng: &mut impl Rng, height: i64) -> ProjectivePoint {
    loop {
        let [a, b, c, d] = std::array::from_fn(|_| random_int(rng, height));
        if let Ok(p) = ProjectivePoint::exact(vec![&a * &c, &a * &d, &b * &c, &b * &d]) {
            return p;
        }
    }
}

/// A random rational point on the plane `{l = 0}`.
pub fn plane_point(rng: &mut impl Rng, plane: &HomogeneousForm<Rational>, height: i64) -> Result<ProjectivePoint> {
    let coeffs = plane.linear_coeffs().ok_or_else(|| Error::InvalidInput("expected a plane".into()))?;
    let basis = nullspace(&[coeffs], 4, 0.0);
    loop {
        let w: Vec<Rational> = (0..basis.len()).map(|_| random_int(rng, height)).collect();
        let x: Vec<Rational> = (0..4)
            .map(|i| basis.iter().zip(&w).fold(Rational::zero(), |acc, (b, c)| acc + &b[i] * c))
            .collect();
        if let Ok(p) = ProjectivePoint::exact(x) {
            return Ok(p);
        }
    }
}
