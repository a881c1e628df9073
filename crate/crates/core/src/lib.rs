//! Exact Hessian metrics of homogeneous polynomials.
//!
//! The crate computes the pseudo-Riemannian metric
//! `g_ij = -1/(d(d-1)) * d^2 f / dx_i dx_j` of a form `f` of degree `d`, its
//! curvature tensor and sectional curvatures, the classical covariants of
//! ternary forms (Hessian determinant, Aronhold invariant, Clebsch covariant),
//! index cones, and the first-order deformation operator along
//! `alpha(x, y) + z^d`. All identities are checked in exact rational
//! arithmetic; floats appear only in the finite-difference and log-metric
//! oracles.
//!
//! The polynomial and matrix layers are generic over the scalar type
//! ([`Poly<T>`], [`Matrix<T>`]); the aliases below fix the exact instances
//! used everywhere else.

pub mod cones;
pub mod covariants;
pub mod curvature;
pub mod poly;
pub mod report;
pub mod sampling;
pub mod scalar;
pub mod tangent;
pub mod verify;
pub mod xlinalg;

pub use poly::{parse_form, parse_form_infer, EpsForm, Monomial, Poly, PolyError};
pub use scalar::{rat, Rational, Scalar};
pub use xlinalg::{LinalgError, Matrix, Signature};

/// Exact polynomial with rational coefficients.
pub type Form = Poly<Rational>;
/// Exact dense matrix.
pub type RationalMatrix = Matrix<Rational>;
/// Floating-point polynomial, for evaluation boundaries.
pub type FloatForm = Poly<f64>;
/// Floating-point dense matrix.
pub type FloatMatrix = Matrix<f64>;
/// Form adjoined a nilpotent `eps`.
pub type RationalEpsForm = EpsForm<Rational>;
