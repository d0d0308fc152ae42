//! Jordan-algebraic structure data: types, partitions, Gindikin Gamma functions,
//! Peirce dimensions and the universal eigenvalue.

mod dims;
mod gamma;
mod partition;
mod types;

pub use dims::{
    bracket_eigenvalue, dim_full, dim_full_exact, dim_tube, dim_tube_exact, log_dim_full,
    log_dim_tube, universal_eigenvalue, universal_eigenvalue_factored,
    universal_operator_parameters,
};
pub use gamma::{
    is_gamma_pole, ln_gamma, log_gindikin_gamma, log_gindikin_gamma_scalar, log_rising,
    pochhammer_partition, LogValue,
};
pub use partition::{partitions_of, partitions_up_to, Partition};
pub use types::{classified_table, derive_invariants, ClassifiedEntry, JordanType, KeplerRank};
