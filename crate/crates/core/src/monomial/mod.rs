//! Monomial ideals and direct sums of monomial ideals inside free modules
//! over a polynomial ring. Coefficients never appear: every operation here
//! is determined by exponent vectors alone.

mod decompose;
mod ideal;
mod submodule;
mod term;

pub use decompose::{ass_ideal, associated_witness, irreducible_decomposition};
pub use ideal::MonomialIdeal;
pub use submodule::{MonomialModule, MonomialSubmodule};
pub use term::Monomial;
