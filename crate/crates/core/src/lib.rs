//! Exact-arithmetic toolkit for Ariki-Koike algebras and their cyclotomic
//! q-Schur algebras.
//!
//! The crate builds, over a prime field or the rationals:
//!
//! * the Ariki-Koike algebra in the normal-form basis `L1^a1 ... Ln^an T_w`,
//!   with the Murphy cellular basis and Specht modules ([`heckealg`]);
//! * the cyclotomic q-Schur algebra `S(Lambda)` with its semistandard basis,
//!   Weyl modules and Gram forms ([`schuralg`]);
//! * the standardly based subalgebra `S0(Lambda)`, its cellular quotient, and
//!   the verification engines for their multiplication laws ([`subquot`]);
//! * the modified Ariki-Koike algebra and its q-Schur algebra ([`modflat`]);
//! * a small exact meataxe for composition series and decomposition matrices
//!   ([`repkit`]).
//!
//! Everything is exact: no floating point is used anywhere.

pub mod exactla;
pub mod heckealg;
pub mod modflat;
pub mod multicomb;
pub mod repkit;
pub mod schuralg;
pub mod subquot;

pub use exactla::{FieldKind, FieldSpec, Scalar};
pub use multicomb::{Multicomposition, Multipartition, Poset};
