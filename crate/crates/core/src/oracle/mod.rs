//! Definition-level ground truth on small finite abelian groups
//! `ℤ/d_1 ⊕ … ⊕ ℤ/d_k`: submodules are explicit element sets and every
//! notion (prime submodule, maximal prime extension, Ass, RPE filtration)
//! is checked straight from its definition.

mod finite;
mod rpe;

pub use finite::{Embedding, FiniteModule, FiniteSubmodule, DEFAULT_BOUND};
pub use rpe::{FiniteFiltration, RpeEnumerator};
