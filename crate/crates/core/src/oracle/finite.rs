use std::collections::{BTreeSet, HashSet, VecDeque};

use fixedbitset::FixedBitSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;

use crate::algebra::{is_prime_u64, PrimeIdeal};
use crate::error::{Error, Result};
use crate::zmodule::{ZModule, ZSubmodule};

pub const DEFAULT_BOUND: usize = 512;

/// An explicit subset of a [`FiniteModule`], closed under addition.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct FiniteSubmodule(FixedBitSet);

impl FiniteSubmodule {
    pub fn contains(&self, x: usize) -> bool {
        self.0.contains(x)
    }

    pub fn len(&self) -> usize {
        self.0.count_ones(..)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn is_subset(&self, other: &FiniteSubmodule) -> bool {
        self.0.is_subset(&other.0)
    }

    pub fn intersect(&self, other: &FiniteSubmodule) -> FiniteSubmodule {
        FiniteSubmodule(&self.0 & &other.0)
    }
}

/// `ℤ/d_1 ⊕ … ⊕ ℤ/d_k` with precomputed addition.
#[derive(Clone, Debug)]
pub struct FiniteModule {
    moduli: Vec<u64>,
    size: usize,
    exponent: u64,
    add: Vec<u32>,
}

impl FiniteModule {
    pub fn new(moduli: &[u64], bound: usize) -> Result<Self> {
        if moduli.contains(&0) {
            return Err(Error::InvalidInput(
                "finite modules need positive moduli".into(),
            ));
        }
        let size = moduli
            .iter()
            .try_fold(1usize, |acc, &d| acc.checked_mul(usize::try_from(d).ok()?))
            .filter(|&s| s <= bound)
            .ok_or(Error::OracleBound {
                size: moduli
                    .iter()
                    .map(|&d| d as usize)
                    .fold(1usize, usize::saturating_mul),
                bound,
            })?;
        let exponent = moduli.iter().fold(1u64, |acc, &d| acc.lcm(&d));
        let mut m = FiniteModule {
            moduli: moduli.to_vec(),
            size,
            exponent,
            add: Vec::new(),
        };
        let mut add = vec![0u32; size * size];
        for a in 0..size {
            let ea = m.element(a);
            for b in 0..size {
                let eb = m.element(b);
                let sum: Vec<u64> = ea
                    .iter()
                    .zip(&eb)
                    .zip(&m.moduli)
                    .map(|((x, y), d)| (x + y) % d)
                    .collect();
                add[a * size + b] = m.index(&sum) as u32;
            }
        }
        m.add = add;
        Ok(m)
    }

    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Least common multiple of the moduli.
    pub fn exponent(&self) -> u64 {
        self.exponent
    }

    /// Coordinates of the element with the given mixed-radix index.
    pub fn element(&self, mut idx: usize) -> Vec<u64> {
        let mut out = vec![0; self.moduli.len()];
        for (o, &d) in out.iter_mut().zip(&self.moduli).rev() {
            *o = (idx % d as usize) as u64;
            idx /= d as usize;
        }
        out
    }

    pub fn index(&self, coords: &[u64]) -> usize {
        coords
            .iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + (c % d) as usize)
    }

    pub fn add(&self, a: usize, b: usize) -> usize {
        self.add[a * self.size + b] as usize
    }

    pub fn scalar(&self, k: u64, a: usize) -> usize {
        let coords: Vec<u64> = self
            .element(a)
            .iter()
            .zip(&self.moduli)
            .map(|(&x, &d)| ((k % d) * x) % d)
            .collect();
        self.index(&coords)
    }

    fn empty_set(&self) -> FixedBitSet {
        FixedBitSet::with_capacity(self.size)
    }

    pub fn zero(&self) -> FiniteSubmodule {
        let mut s = self.empty_set();
        s.insert(0);
        FiniteSubmodule(s)
    }

    pub fn whole(&self) -> FiniteSubmodule {
        let mut s = self.empty_set();
        s.insert_range(..);
        FiniteSubmodule(s)
    }

    /// `S + ⟨x⟩` for a submodule `S`.
    pub fn extend(&self, s: &FiniteSubmodule, x: usize) -> FiniteSubmodule {
        let mut cyclic = vec![0usize];
        let mut y = x;
        while y != 0 {
            cyclic.push(y);
            y = self.add(y, x);
        }
        let mut out = self.empty_set();
        for a in s.elements() {
            for &c in &cyclic {
                out.insert(self.add(a, c));
            }
        }
        FiniteSubmodule(out)
    }

    pub fn span(&self, gens: impl IntoIterator<Item = usize>) -> FiniteSubmodule {
        gens.into_iter().fold(self.zero(), |s, x| {
            if s.contains(x) {
                s
            } else {
                self.extend(&s, x)
            }
        })
    }

    /// Checks closure and wraps an explicit element set.
    pub fn submodule_from(&self, elements: &[usize]) -> Result<FiniteSubmodule> {
        let mut s = self.empty_set();
        for &e in elements {
            if e >= self.size {
                return Err(Error::InvalidInput(format!(
                    "element index {e} out of range"
                )));
            }
            s.insert(e);
        }
        if !s.contains(0) {
            return Err(Error::InvalidInput("a submodule must contain 0".into()));
        }
        for a in s.ones() {
            for b in s.ones() {
                if !s.contains(self.add(a, b)) {
                    return Err(Error::InvalidInput(
                        "element set is not closed under addition".into(),
                    ));
                }
            }
        }
        Ok(FiniteSubmodule(s))
    }

    /// All submodules containing `base`, by closure to a fixpoint.
    pub fn submodules_above(&self, base: &FiniteSubmodule) -> Vec<FiniteSubmodule> {
        let mut seen: HashSet<FiniteSubmodule> = HashSet::new();
        let mut queue = VecDeque::from([base.clone()]);
        seen.insert(base.clone());
        let mut out = Vec::new();
        while let Some(s) = queue.pop_front() {
            for x in 0..self.size {
                if s.contains(x) {
                    continue;
                }
                let t = self.extend(&s, x);
                if seen.insert(t.clone()) {
                    queue.push_back(t);
                }
            }
            out.push(s);
        }
        out.sort_by_key(FiniteSubmodule::len);
        out
    }

    pub fn enumerate_submodules(&self) -> Vec<FiniteSubmodule> {
        self.submodules_above(&self.zero())
    }

    /// Least `a ≥ 1` with `a·x ∈ N`.
    pub fn order_mod(&self, x: usize, n: &FiniteSubmodule) -> u64 {
        let mut y = x;
        let mut a = 1;
        while !n.contains(y) {
            y = self.add(y, x);
            a += 1;
        }
        a
    }

    /// Generator of `(N : K) = {a ∈ ℤ : a·K ⊆ N}`, i.e. the exponent of `K/N`.
    pub fn colon_generator(&self, n: &FiniteSubmodule, k: &FiniteSubmodule) -> u64 {
        (1..=self.exponent)
            .find(|&a| k.elements().all(|x| n.contains(self.scalar(a, x))))
            .expect("the exponent of M annihilates everything")
    }

    /// `{x ∈ M : q·x ∈ N}`.
    pub fn colon_integer(&self, n: &FiniteSubmodule, q: u64) -> FiniteSubmodule {
        let mut s = self.empty_set();
        for x in 0..self.size {
            if n.contains(self.scalar(q, x)) {
                s.insert(x);
            }
        }
        FiniteSubmodule(s)
    }

    /// If `N` is a prime submodule of `K`, the prime `(N : K)`.
    ///
    /// Checks the definition directly: `(N : K) = (e)` with `e` prime, and
    /// `a·x ∈ N` with `x ∈ K \ N` forces `a ∈ (e)`.
    pub fn is_prime_submodule(
        &self,
        n: &FiniteSubmodule,
        k: &FiniteSubmodule,
    ) -> Result<Option<PrimeIdeal>> {
        if !n.is_subset(k) {
            return Err(Error::InvalidInput("N must be contained in K".into()));
        }
        if n == k {
            return Err(Error::InvalidInput(
                "N must be a proper submodule of K".into(),
            ));
        }
        let e = self.colon_generator(n, k);
        if !is_prime_u64(e) {
            return Ok(None);
        }
        for x in k.elements().filter(|&x| !n.contains(x)) {
            let mut y = x;
            for _a in 1..e {
                if n.contains(y) {
                    return Ok(None);
                }
                y = self.add(y, x);
            }
        }
        Ok(Some(PrimeIdeal::Integer(e)))
    }

    /// `{ann(x + N) : x ∈ M \ N, ann prime}`.
    pub fn brute_ass(&self, n: &FiniteSubmodule) -> BTreeSet<PrimeIdeal> {
        (0..self.size)
            .filter(|&x| !n.contains(x))
            .map(|x| self.order_mod(x, n))
            .filter(|&a| is_prime_u64(a))
            .map(PrimeIdeal::Integer)
            .collect()
    }

    /// The ⊆-largest `K ⊇ N` with `N` a `p`-prime submodule of `K`, found by
    /// searching every submodule above `N`.
    pub fn maximal_prime_extension(
        &self,
        n: &FiniteSubmodule,
        p: &PrimeIdeal,
    ) -> Result<FiniteSubmodule> {
        let ass = self.brute_ass(n);
        if !ass.contains(p) {
            return Err(Error::NotRegular {
                prime: p.to_string(),
                reason: "not an associated prime".into(),
            });
        }
        let q = p
            .as_integer()
            .ok_or(Error::BackendMismatch("integer", p.backend()))?;
        let candidates: Vec<FiniteSubmodule> = self
            .submodules_above(n)
            .into_iter()
            .filter(|k| k != n && k.elements().all(|x| n.contains(self.scalar(q, x))))
            .filter(|k| matches!(self.is_prime_submodule(n, k), Ok(Some(ref r)) if r == p))
            .collect();
        let top = candidates
            .iter()
            .find(|k| candidates.iter().all(|c| c.is_subset(k)))
            .ok_or_else(|| Error::Verification("no unique maximal prime extension".into()))?;
        Ok(top.clone())
    }
}

/// Identification of a finite [`ZModule`] with a [`FiniteModule`] through
/// its Smith coordinates.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub module: FiniteModule,
    kept: Vec<usize>,
    transform: Vec<Vec<BigInt>>,
}

impl Embedding {
    pub fn new(zm: &ZModule, bound: usize) -> Result<Self> {
        let (diagonal, free, transform) = zm.cyclic_coordinates();
        if free > 0 {
            return Err(Error::InvalidInput("module is infinite".into()));
        }
        let mut kept = Vec::new();
        let mut moduli = Vec::new();
        for (i, d) in diagonal.iter().enumerate() {
            if *d > BigInt::from(1) {
                kept.push(i);
                let d = d.to_u64().ok_or(Error::OracleBound {
                    size: usize::MAX,
                    bound,
                })?;
                moduli.push(d);
            }
        }
        Ok(Embedding {
            module: FiniteModule::new(&moduli, bound)?,
            kept,
            transform,
        })
    }

    /// Image of a vector of `ℤ^n` in the finite module.
    pub fn image_of_vector(&self, v: &[BigInt]) -> usize {
        let coords: Vec<u64> = self
            .kept
            .iter()
            .zip(self.module.moduli())
            .map(|(&i, &d)| {
                let y: BigInt = v
                    .iter()
                    .zip(&self.transform)
                    .map(|(x, row)| x * &row[i])
                    .sum();
                y.mod_floor(&BigInt::from(d))
                    .to_u64()
                    .expect("reduced mod d")
            })
            .collect();
        self.module.index(&coords)
    }

    pub fn image(&self, s: &ZSubmodule) -> FiniteSubmodule {
        self.module
            .span(s.basis().iter().map(|v| self.image_of_vector(v)))
    }
}

/// Generators in `ℤ^k` of a finite submodule of `ℤ/d_1 ⊕ … ⊕ ℤ/d_k`,
/// for the presentation [`ZModule::cyclic_sum`].
pub fn lift_generators(m: &FiniteModule, s: &FiniteSubmodule) -> Vec<Vec<BigInt>> {
    s.elements()
        .filter(|&x| x != 0)
        .map(|x| m.element(x).into_iter().map(BigInt::from).collect())
        .collect()
}

impl FiniteModule {
    /// The same submodule inside [`ZModule::cyclic_sum`] of the moduli.
    pub fn to_zsubmodule(&self, zm: &ZModule, s: &FiniteSubmodule) -> Result<ZSubmodule> {
        zm.submodule(lift_generators(self, s))
    }

    /// Membership-based inverse of [`Self::to_zsubmodule`].
    pub fn from_zsubmodule(&self, s: &ZSubmodule) -> FiniteSubmodule {
        let mut set = self.empty_set();
        for x in 0..self.size {
            let v: Vec<BigInt> = self.element(x).into_iter().map(BigInt::from).collect();
            if s.contains(&v) {
                set.insert(x);
            }
        }
        FiniteSubmodule(set)
    }
}
