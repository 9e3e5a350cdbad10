//! Partitions, decomposition identities for GL-modules, and the integer
//! coefficients deciding whether the modules of coercive equations are
//! nonzero.

mod coefficients;
mod decomp;
mod partition;
mod theta_oracle;

pub use coefficients::{
    lemma_table, t_value_lemma, t_value_raw, t_value_unsigned, theta_coefficient, theta_even_sweep, theta_summands,
    theta_unsigned, CoefficientReport, Formula,
};
pub use decomp::{decomp_identity, lhs_dimension, verify_decomp_dims, DecompKind};
pub use partition::{dim_gl, Partition};
pub use theta_oracle::{compare_theta_oracle, theta_expand_oracle, ThetaComparison, ThetaRow, THETA_ORACLE_GUARD};
