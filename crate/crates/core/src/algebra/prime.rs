use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};

/// Trial-division primality test.
pub fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n.is_multiple_of(2) {
        return n == 2;
    }
    let mut d = 3u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 2;
    }
    true
}

/// A prime of a polynomial ring generated by a subset of the variables.
///
/// The empty subset is the zero ideal, which is prime because the ring is a
/// domain. It only shows up for submodules with a zero component.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialPrime(Vec<usize>);

impl MonomialPrime {
    /// Builds the prime generated by the given variable indices. Indices
    /// must be strictly increasing.
    pub fn new(vars: Vec<usize>) -> Result<Self> {
        if vars.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidPrime(format!(
                "variable indices must be strictly increasing, got {vars:?}"
            )));
        }
        Ok(MonomialPrime(vars))
    }

    pub fn zero() -> Self {
        MonomialPrime(Vec::new())
    }

    pub fn vars(&self) -> &[usize] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// `other ⊆ self`.
    pub fn contains(&self, other: &MonomialPrime) -> bool {
        other.0.iter().all(|v| self.0.binary_search(v).is_ok())
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "(0)".to_string();
        }
        let parts: Vec<String> = self.0.iter().map(|&i| var_name(names, i)).collect();
        format!("({})", parts.join(","))
    }
}

/// Decreasing cardinality, then lexicographic index set.
impl Ord for MonomialPrime {
    fn cmp(&self, other: &Self) -> Ordering {
        other
            .0
            .len()
            .cmp(&self.0.len())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for MonomialPrime {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn var_name(names: &[String], i: usize) -> String {
    names.get(i).cloned().unwrap_or_else(|| format!("x{i}"))
}

/// A prime ideal of one of the two supported rings, tagged by backend.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum PrimeIdeal {
    /// A variable-subset prime of a polynomial ring.
    Monomial(MonomialPrime),
    /// `(p)` for a rational prime `p`, or the zero ideal when the value is 0.
    Integer(u64),
}

impl PrimeIdeal {
    pub fn monomial(vars: Vec<usize>) -> Result<Self> {
        MonomialPrime::new(vars).map(PrimeIdeal::Monomial)
    }

    pub fn integer(p: u64) -> Result<Self> {
        if p == 0 || is_prime_u64(p) {
            Ok(PrimeIdeal::Integer(p))
        } else {
            Err(Error::InvalidPrime(format!(
                "{p} is neither 0 nor a prime number"
            )))
        }
    }

    pub fn backend(&self) -> &'static str {
        match self {
            PrimeIdeal::Monomial(_) => "monomial",
            PrimeIdeal::Integer(_) => "integer",
        }
    }

    pub fn as_monomial(&self) -> Option<&MonomialPrime> {
        match self {
            PrimeIdeal::Monomial(m) => Some(m),
            PrimeIdeal::Integer(_) => None,
        }
    }

    pub fn as_integer(&self) -> Option<u64> {
        match self {
            PrimeIdeal::Integer(p) => Some(*p),
            PrimeIdeal::Monomial(_) => None,
        }
    }

    /// Renders the prime using the given variable names (integer primes
    /// ignore them).
    pub fn render(&self, names: &[String]) -> String {
        match self {
            PrimeIdeal::Monomial(m) => m.render(names),
            PrimeIdeal::Integer(p) => format!("({p})"),
        }
    }
}

impl fmt::Display for PrimeIdeal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render(&[]))
    }
}

/// Canonical display order: monomial primes by decreasing cardinality then
/// lexicographic index set; integer primes ascending with `(0)` last.
impl Ord for PrimeIdeal {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (PrimeIdeal::Monomial(a), PrimeIdeal::Monomial(b)) => a.cmp(b),
            (PrimeIdeal::Integer(a), PrimeIdeal::Integer(b)) => {
                (*a == 0).cmp(&(*b == 0)).then_with(|| a.cmp(b))
            }
            (PrimeIdeal::Monomial(_), PrimeIdeal::Integer(_)) => Ordering::Less,
            (PrimeIdeal::Integer(_), PrimeIdeal::Monomial(_)) => Ordering::Greater,
        }
    }
}

impl PartialOrd for PrimeIdeal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Returns whether `q ⊆ p` as ideals.
pub fn prime_contains(p: &PrimeIdeal, q: &PrimeIdeal) -> Result<bool> {
    match (p, q) {
        (PrimeIdeal::Monomial(p), PrimeIdeal::Monomial(q)) => Ok(p.contains(q)),
        (PrimeIdeal::Integer(p), PrimeIdeal::Integer(q)) => Ok(*q == 0 || p == q),
        _ => Err(Error::BackendMismatch(p.backend(), q.backend())),
    }
}

/// True iff no two distinct primes of the collection are comparable.
pub fn pairwise_incomparable<'a, I>(primes: I) -> Result<bool>
where
    I: IntoIterator<Item = &'a PrimeIdeal>,
{
    let primes: Vec<&PrimeIdeal> = primes.into_iter().collect();
    for (i, p) in primes.iter().enumerate() {
        for q in &primes[i + 1..] {
            if p == q {
                continue;
            }
            if prime_contains(p, q)? || prime_contains(q, p)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
