//! Affine classification of quadratic maps of the plane.
//!
//! A quadratic map `Q(x, y) = (a20 x² + a11 xy + a02 y² + a10 x + a01 y + a00,
//! b20 x² + … + b00)` is reduced to one of eighteen normal forms by affine
//! changes of coordinates `h` (domain) and `k` (range), `k ∘ Q ∘ h⁻¹ = N`.
//! Coefficients are always ordered `a20, a11, a02, a10, a01, a00, b20, b11,
//! b02, b10, b01, b00`.

pub mod algebra;
pub mod analyze;
pub mod cli;
pub mod critical;
pub mod error;
pub mod normalize;
pub mod poly;
pub mod sampling;
pub mod scalar;
pub mod selfcheck;

pub use algebra::{affine_invert, compose, evaluate, homogeneous_part, jacobian};
pub use algebra::{AffineMap2, HomogeneousPart, QuadraticMap};
pub use error::{Error, Result};
pub use normalize::{classify, ClassLabel, ClassificationResult, WitnessPair};
pub use scalar::{Rational, Scalar, Tolerance};
