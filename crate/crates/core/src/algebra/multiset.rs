use std::collections::BTreeMap;
use std::fmt;

use super::prime::PrimeIdeal;

/// A product of prime ideals, kept as prime → multiplicity.
///
/// Iteration follows the canonical prime order, so rendering is
/// deterministic; equality ignores the order in which primes were added.
#[derive(Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct FactorizationMultiset {
    counts: BTreeMap<PrimeIdeal, usize>,
}

impl FactorizationMultiset {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, prime: PrimeIdeal) {
        self.add(prime, 1);
    }

    pub fn add(&mut self, prime: PrimeIdeal, multiplicity: usize) {
        if multiplicity > 0 {
            *self.counts.entry(prime).or_insert(0) += multiplicity;
        }
    }

    pub fn multiplicity(&self, prime: &PrimeIdeal) -> usize {
        self.counts.get(prime).copied().unwrap_or(0)
    }

    /// Total degree: the sum of all multiplicities.
    pub fn degree(&self) -> usize {
        self.counts.values().sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn distinct_primes(&self) -> impl Iterator<Item = &PrimeIdeal> {
        self.counts.keys()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&PrimeIdeal, usize)> {
        self.counts.iter().map(|(p, &n)| (p, n))
    }

    /// Primes with repetition, in canonical order.
    pub fn expanded(&self) -> Vec<PrimeIdeal> {
        self.counts
            .iter()
            .flat_map(|(p, &n)| std::iter::repeat_n(p.clone(), n))
            .collect()
    }

    /// `self` is a multiple of `other`: every multiplicity of `other` is at
    /// most the corresponding multiplicity of `self`.
    pub fn is_multiple_of(&self, other: &FactorizationMultiset) -> bool {
        other.counts.iter().all(|(p, &n)| n <= self.multiplicity(p))
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.counts.is_empty() {
            return "1".to_string();
        }
        self.counts
            .iter()
            .map(|(p, &n)| {
                if n == 1 {
                    p.render(names)
                } else {
                    format!("{}^{}", p.render(names), n)
                }
            })
            .collect::<Vec<_>>()
            .join("*")
    }
}

impl FromIterator<PrimeIdeal> for FactorizationMultiset {
    fn from_iter<T: IntoIterator<Item = PrimeIdeal>>(iter: T) -> Self {
        let mut m = FactorizationMultiset::new();
        for p in iter {
            m.insert(p);
        }
        m
    }
}

impl fmt::Display for FactorizationMultiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}
