//! Finitely generated abelian groups `M = ℤ^n / L_rel` and their submodules
//! as integer lattices in Hermite normal form.

mod lattice;
mod matrix;
mod module;

pub use lattice::{is_member, lattice_intersection, row_hnf, smith_form, SmithForm};
pub use matrix::{hnf, snf_divisors, IntMatrix, SnfDivisors};
pub use module::{factor_u64, ZModule, ZSubmodule};
