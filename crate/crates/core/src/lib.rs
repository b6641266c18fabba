//! Regular prime extension (RPE) filtrations and generalized prime ideal
//! factorizations of submodules, over monomial submodules of free modules
//! and over finitely generated abelian groups, with a brute-force oracle
//! for small finite modules.

pub mod algebra;
pub mod cli;
pub mod error;
pub mod monomial;
pub mod oracle;
pub mod rpe;
pub mod zmodule;

pub use error::{Error, Result};
