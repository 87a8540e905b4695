//! Generalized Mathieu series: evaluation with two-sided error brackets,
//! Euler-Maclaurin and Boole summation engines, asymptotic expansions,
//! sharp constants of the associated double inequalities, and numerical
//! verifiers for the inequalities and integral identities around them.

pub mod analysis;
pub mod emsum;
pub mod error;
pub mod jet;
pub mod mathieu;
pub mod polyfun;
pub mod quad;
pub mod sharp;

pub use error::{Error, Result};
