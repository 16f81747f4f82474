//! Polynomial arithmetic: homogeneous forms, affine polynomials, parsing,
//! Taylor parts and univariate root finding.

pub mod affine;
pub mod factored;
pub mod form;
pub mod parse;
pub mod roots;
pub mod taylor;
pub mod univariate;

pub use affine::AffinePolynomial;
pub use factored::FactoredForm;
pub use form::HomogeneousForm;
pub use parse::parse_form;
pub use roots::{find_roots, find_roots_exact, Root, RootOptions};
pub use taylor::{taylor_expansion, taylor_part};
pub use univariate::UniPoly;
