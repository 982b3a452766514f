//! Exact coefficient fields and the dense exact linear-algebra kernel.
//!
//! Two fields are supported: a prime field `F_p` with `p` an odd prime, and
//! the rationals with arbitrary-precision arithmetic. Every other module
//! works over [`Scalar`] values drawn from a single [`FieldSpec`].

mod matrix;
mod scalar;

pub use matrix::{ExactMatrix, RowSpace, SolveCache};
pub use scalar::{pn_value, FieldError, FieldKind, FieldSpec, Scalar};
