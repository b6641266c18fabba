use std::collections::BTreeSet;
use std::fmt;

use super::prime::PrimeIdeal;
use crate::error::Result;

/// Operations an ambient module `M` must provide for the filtration
/// algorithms. Submodules are values of [`AlgebraBackend::Sub`]; ideals of
/// the base ring are submodules of [`AlgebraBackend::ring`].
pub trait AlgebraBackend: Sized {
    type Sub: Clone + PartialEq + fmt::Debug;

    /// The ambient module `M` as a submodule of itself.
    fn whole(&self) -> Self::Sub;

    /// The base ring `R` viewed as a module over itself.
    fn ring(&self) -> Self;

    /// Whether this ambient module is the base ring itself.
    fn is_ring(&self) -> bool;

    /// `Ass(M/N)`.
    fn ass(&self, n: &Self::Sub) -> Result<BTreeSet<PrimeIdeal>>;

    /// `(N : p) = {x ∈ M : p·x ⊆ N}`.
    fn colon_prime(&self, n: &Self::Sub, p: &PrimeIdeal) -> Result<Self::Sub>;

    /// `(N : K) = {a ∈ R : a·K ⊆ N}`, as a submodule of [`Self::ring`].
    fn colon_submodule(&self, n: &Self::Sub, k: &Self::Sub) -> Result<Self::Sub>;

    /// `ann(M/N) = (N : M)`, as a submodule of [`Self::ring`].
    fn annihilator(&self, n: &Self::Sub) -> Result<Self::Sub>;

    fn intersect(&self, n: &Self::Sub, k: &Self::Sub) -> Result<Self::Sub>;

    /// `N ⊆ K`.
    fn leq(&self, n: &Self::Sub, k: &Self::Sub) -> Result<bool>;

    fn eq(&self, n: &Self::Sub, k: &Self::Sub) -> Result<bool> {
        Ok(self.leq(n, k)? && self.leq(k, n)?)
    }

    fn is_whole(&self, n: &Self::Sub) -> Result<bool>;

    /// `p·N`.
    fn scale(&self, p: &PrimeIdeal, n: &Self::Sub) -> Result<Self::Sub>;

    /// A coarse size of `M/N`, used to cap filtration length.
    fn size_measure(&self, n: &Self::Sub) -> usize;

    /// Renders a submodule; `names` are the ring's variable names.
    fn render(&self, n: &Self::Sub, names: &[String]) -> String;
}
