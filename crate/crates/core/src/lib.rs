//! Modular forms, completed L-functions and double Eisenstein series for SL(2,Z).
//!
//! Exact q-expansion algebra lives in [`modforms`], arbitrary-precision numerics in
//! [`mpcore`]; the remaining modules combine them into kernels and checks.

// `!(x > 0.0)` is used on purpose so NaN is rejected along with the out-of-range values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod dbleis;
pub mod error;
pub mod lfunc;
pub mod modforms;
pub mod mpcore;
pub mod nonhol;
pub mod periods;
pub mod verify;

pub use error::{Error, Result};
