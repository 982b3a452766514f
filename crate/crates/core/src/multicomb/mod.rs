//! Multicompositions, multipartitions, dominance, tableaux, and the posets
//! and index sets built from them.

mod perm;
mod poset;
mod tableau;
mod types;

pub use perm::{all_perms, Perm};
pub use poset::{Omega, OmegaCell, Poset, PosetKind};
pub use tableau::{
    lambda_dagger, mu_of, semistandard_tableaux, std_tableaux, SsTableau, StdTableau,
};
pub use types::{all_r_partitions, Multicomposition, MulticombError, Multipartition};
