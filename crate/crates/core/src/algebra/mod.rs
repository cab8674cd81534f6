//! Hypercomplex scalars, matrices over ℝ/ℂ/ℍ and the linear algebra the
//! rest of the crate is built on.

pub mod affine;
pub mod hypercomplex;
pub mod linalg;
pub mod matrix;
pub mod random;
pub mod scalar;

pub use affine::Affine;
pub use hypercomplex::{hc_mul, octonion_table, FieldTag, HyperComplex};
pub use linalg::{expm, sym_eigvals};
pub use matrix::MatF;
pub use random::{pythagorean_tangent, rational_unit_vector};
pub use scalar::{q, qi, Rational, Scalar, NUMERIC_TOL};
pub use num_traits::{One, Zero};
