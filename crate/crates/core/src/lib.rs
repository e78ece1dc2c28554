//! Lie point symmetry classification of `y'' = A y' + B y + f`, a system of
//! two linear second-order ODEs with constant coefficients.
//!
//! The pipeline is: remove `f` with a polynomial particular solution, test
//! whether `A` and `B` commute, bring `A` to a real Jordan form with
//! equivalence transformations, evaluate the determining equations of the
//! canonical class, and verify every emitted generator symbolically and by
//! flowing numerical solutions.

pub mod algebra;
pub mod error;

pub use error::{Error, Result};
pub mod canonical;
pub mod reduction;
pub mod vector_field;
pub mod classify;
pub mod prolong;
pub mod analysis;
pub mod report;
