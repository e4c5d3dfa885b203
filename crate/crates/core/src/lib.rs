//! Counting the tangent lines (and normal / theta lines) of a function graph
//! that pass through a point off the graph.
//!
//! Three paths compute the tangent count, the *illumination index*:
//! exact root isolation for rational polynomials ([`exactpoly`]),
//! region classification for certified-convex functions with known
//! asymptotic behaviour ([`convexity`]), and a numeric bracketing scan for
//! everything else ([`engine`]).

pub mod cli;
pub mod convexity;
pub mod engine;
pub mod exactpoly;
pub mod expr;
pub mod function;
pub mod scalar;
pub mod thetalines;

pub use exactpoly::{IsolatingInterval, Line, Polynomial};
pub use engine::{illumination_index, IlluminationResult, Illuminator, Options, QueryPoint};
pub use expr::Expr;
pub use function::{Form, Function};
pub use scalar::{ExactScalar, Scalar};

/// Exact rational scalar used on the certified paths.
pub type Rational = num_rational::BigRational;
/// Polynomial with exact rational coefficients.
pub type QPoly = Polynomial<Rational>;
/// Polynomial with `f64` coefficients.
pub type FPoly = Polynomial<f64>;
/// Polynomial with `f32` coefficients.
pub type F32Poly = Polynomial<f32>;
