//! Exact scalars, 2x2 linear algebra and exponential polynomials.

pub mod expoly;
pub mod jordan;
pub mod linsolve;
pub mod mat2;
pub mod matexp;
pub mod scalar;

pub use expoly::{ExpPoly, NumExpPoly};
pub use jordan::{real_jordan, real_jordan_in, EigenData, JordanKind, JordanResult};
pub use mat2::{commutator, Mat2, Vec2};
pub use matexp::mat_exp_numeric;
pub use scalar::Scalar;
