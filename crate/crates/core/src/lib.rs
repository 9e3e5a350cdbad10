//! Exact evaluation of Strassen's equations and their coercive
//! generalizations on order-3 tensors.

pub mod coercive;
pub mod error;
pub mod io;
pub mod matrix;
pub mod membership;
pub mod rep;
pub mod rng;
pub mod scalar;
pub mod strassen;
pub mod subset;
pub mod tensor;
pub mod witness;

pub use error::{Error, Result};
pub use matrix::Matrix;
pub use scalar::{Field, Scalar};
pub use tensor::{Covector, Mode, Tensor3};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/exact-arithmetic.md")]
    mod exact_arithmetic {}
    #[doc = include_str!("../../../book/src/tensors.md")]
    mod tensors {}
    #[doc = include_str!("../../../book/src/commutator-bounds.md")]
    mod commutator_bounds {}
    #[doc = include_str!("../../../book/src/coercive.md")]
    mod coercive {}
    #[doc = include_str!("../../../book/src/membership.md")]
    mod membership {}
    #[doc = include_str!("../../../book/src/combinatorics.md")]
    mod combinatorics {}
    #[doc = include_str!("../../../book/src/command-line.md")]
    mod command_line {}
}
