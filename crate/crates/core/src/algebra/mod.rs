//! Backend-independent vocabulary: prime ideals, factorization multisets
//! and the contract every algebra backend implements.

mod backend;
mod multiset;
mod prime;

pub use backend::AlgebraBackend;
pub use multiset::FactorizationMultiset;
pub(crate) use prime::var_name;
pub use prime::{is_prime_u64, pairwise_incomparable, prime_contains, MonomialPrime, PrimeIdeal};
