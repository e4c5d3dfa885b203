//! Exact rational polynomial engine.
//!
//! Arithmetic and evaluation are generic over [`Scalar`](crate::Scalar);
//! everything that needs certified zero tests (gcd, Sturm counting, root
//! isolation, convexity, bitangents) works over [`Rational`](crate::Rational).

mod bitangent;
mod convex;
mod line;
mod polynomial;
mod roots;
mod tangent;

use thiserror::Error;

pub use bitangent::{multiple_tangent_lines, BitangentRecord, BitangentSet};
pub use convex::{certify_nonnegative, is_convex_poly, ConvexityVerdict, Negativity, NonnegCertificate};
pub use line::{ExactLine, Line};
pub use polynomial::Polynomial;
pub use roots::{
    default_eps, eps_digits, exclude_point, isolate_real_roots, refine_interval, refine_root, refine_with,
    simplest_rational_in, sturm_count, Bound, IsolatingInterval, SturmSequence,
};
pub use tangent::{build_gs_poly, gs_critical_points, gs_limit_signs, Infinity};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("division by the zero polynomial")]
    DivisionByZero,
    #[error("polynomial division left a non-zero remainder")]
    NotDivisible,
    #[error("degree {degree} is below the supported minimum {minimum}")]
    UnsupportedDegree { degree: usize, minimum: usize },
    #[error("bitangent elimination degenerated: the resultant vanishes identically")]
    DegenerateResultant,
}
