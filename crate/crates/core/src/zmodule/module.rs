use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::algebra::{AlgebraBackend, PrimeIdeal};
use crate::error::{Error, Result};

use super::lattice::{is_member, lattice_intersection, row_hnf, smith_form, Vector};
use super::matrix::SnfDivisors;

/// Prime factorization by trial division.
pub fn factor_u64(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            let mut e = 0;
            while n.is_multiple_of(d) {
                n /= d;
                e += 1;
            }
            out.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

fn to_u64(x: &BigInt) -> Result<u64> {
    u64::try_from(x).map_err(|_| Error::InvalidInput(format!("{x} is too large to factor")))
}

fn unit_vectors(n: usize) -> Vec<Vector> {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigInt::one()
                    } else {
                        BigInt::zero()
                    }
                })
                .collect()
        })
        .collect()
}

/// `M = ℤ^n / L_rel`, with the relation lattice in row HNF.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZModule {
    n: usize,
    relations: Vec<Vector>,
}

/// A submodule `N ⊆ M`, stored as its preimage lattice `L_N ⊇ L_rel` in
/// row HNF, so equality is entrywise comparison.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct ZSubmodule {
    n: usize,
    basis: Vec<Vector>,
}

impl ZSubmodule {
    pub fn basis(&self) -> &[Vector] {
        &self.basis
    }

    pub fn ambient_rank(&self) -> usize {
        self.n
    }

    pub fn contains(&self, v: &[BigInt]) -> bool {
        v.len() == self.n && is_member(&self.basis, v)
    }
}

impl ZModule {
    pub fn free(n: usize) -> Self {
        ZModule {
            n,
            relations: Vec::new(),
        }
    }

    /// `ℤ^n` modulo the span of the given relation vectors.
    pub fn new(n: usize, relations: Vec<Vector>) -> Result<Self> {
        if let Some(r) = relations.iter().find(|r| r.len() != n) {
            return Err(Error::InvalidInput(format!(
                "relation of length {} in a module of rank {n}",
                r.len()
            )));
        }
        Ok(ZModule {
            n,
            relations: row_hnf(relations, n),
        })
    }

    /// `ℤ/d_1 ⊕ … ⊕ ℤ/d_k` presented on `ℤ^k`.
    pub fn cyclic_sum(moduli: &[u64]) -> Self {
        let k = moduli.len();
        let rels = (0..k)
            .map(|i| {
                (0..k)
                    .map(|j| {
                        if i == j {
                            BigInt::from(moduli[i])
                        } else {
                            BigInt::zero()
                        }
                    })
                    .collect()
            })
            .collect();
        ZModule::new(k, rels).expect("square relations")
    }

    pub fn rank(&self) -> usize {
        self.n
    }

    pub fn relations(&self) -> &[Vector] {
        &self.relations
    }

    /// The submodule generated by the images of `gens`.
    pub fn submodule(&self, gens: Vec<Vector>) -> Result<ZSubmodule> {
        if let Some(g) = gens.iter().find(|g| g.len() != self.n) {
            return Err(Error::InvalidInput(format!(
                "generator of length {} in a module of rank {}",
                g.len(),
                self.n
            )));
        }
        Ok(self.span(gens))
    }

    fn span(&self, mut gens: Vec<Vector>) -> ZSubmodule {
        gens.extend(self.relations.iter().cloned());
        ZSubmodule {
            n: self.n,
            basis: row_hnf(gens, self.n),
        }
    }

    pub fn zero_submodule(&self) -> ZSubmodule {
        self.span(Vec::new())
    }

    /// Ideal `(e) ⊆ ℤ` in the free rank-one module.
    pub fn ideal(e: BigInt) -> ZSubmodule {
        ZModule::free(1).span(vec![vec![e]])
    }

    fn check(&self, s: &ZSubmodule) -> Result<()> {
        if s.n != self.n {
            return Err(Error::AmbientMismatch(format!(
                "submodule of ℤ^{} used in a quotient of ℤ^{}",
                s.n, self.n
            )));
        }
        if !self.relations.iter().all(|r| is_member(&s.basis, r)) {
            return Err(Error::AmbientMismatch(
                "submodule lattice does not contain the relation lattice".into(),
            ));
        }
        Ok(())
    }

    fn int_prime(p: &PrimeIdeal) -> Result<u64> {
        p.as_integer()
            .ok_or(Error::BackendMismatch("integer", p.backend()))
    }

    /// Elementary divisors and free rank of `M/N`.
    pub fn quotient_divisors(&self, s: &ZSubmodule) -> SnfDivisors {
        let smith = smith_form(&s.basis, self.n);
        SnfDivisors {
            free_rank: self.n - smith.diagonal.len(),
            divisors: smith.diagonal,
        }
    }

    /// Cyclic decomposition of `M` itself: moduli `d_i > 1` and the free
    /// rank, plus the coordinate change `x ↦ x·Q` realizing it. Coordinates
    /// of `Q` with `d_i = 1` are dropped by the caller.
    pub fn cyclic_coordinates(&self) -> (Vec<BigInt>, usize, Vec<Vector>) {
        let smith = smith_form(&self.relations, self.n);
        let free = self.n - smith.diagonal.len();
        (smith.diagonal, free, smith.transform)
    }

    /// Order of `|M|` when finite.
    pub fn order(&self) -> Option<BigInt> {
        let d = self.quotient_divisors(&self.zero_submodule());
        (d.free_rank == 0).then(|| d.divisors.iter().product())
    }

    /// Additive order of `v + N` in `M/N`; zero when infinite.
    pub fn order_mod(&self, s: &ZSubmodule, v: &[BigInt]) -> BigInt {
        if v.iter().all(Zero::is_zero) {
            return BigInt::one();
        }
        let line = row_hnf(vec![v.to_vec()], self.n);
        let meet = lattice_intersection(&s.basis, &line, self.n);
        match meet.first() {
            None => BigInt::zero(),
            Some(w) => {
                let c = v.iter().position(|x| !x.is_zero()).expect("nonzero vector");
                (&w[c] / &v[c]).abs()
            }
        }
    }

    /// Exponent of `M/N` (zero when `M/N` is infinite).
    pub fn exponent(&self, s: &ZSubmodule) -> BigInt {
        let d = self.quotient_divisors(s);
        if d.free_rank > 0 {
            return BigInt::zero();
        }
        d.divisors.iter().fold(BigInt::one(), |acc, x| acc.lcm(x))
    }

    pub fn render_submodule(&self, s: &ZSubmodule) -> String {
        let is_ring = self.n == 1 && self.relations.is_empty();
        if s.basis == unit_vectors(self.n) {
            return if is_ring {
                "Z".into()
            } else {
                format!("Z^{}", self.n)
            };
        }
        if is_ring {
            return match s.basis.first() {
                Some(v) => format!("({})", v[0]),
                None => "(0)".into(),
            };
        }
        if s.basis.is_empty() {
            return "0".into();
        }
        let vecs: Vec<String> = s
            .basis
            .iter()
            .map(|v| {
                let xs: Vec<String> = v.iter().map(ToString::to_string).collect();
                format!("({})", xs.join(","))
            })
            .collect();
        format!("<{}>", vecs.join(","))
    }
}

impl AlgebraBackend for ZModule {
    type Sub = ZSubmodule;

    fn whole(&self) -> ZSubmodule {
        ZSubmodule {
            n: self.n,
            basis: unit_vectors(self.n),
        }
    }

    fn ring(&self) -> Self {
        ZModule::free(1)
    }

    fn is_ring(&self) -> bool {
        self.n == 1 && self.relations.is_empty()
    }

    fn ass(&self, s: &ZSubmodule) -> Result<BTreeSet<PrimeIdeal>> {
        self.check(s)?;
        if self.is_whole(s)? {
            return Err(Error::NotProper);
        }
        let d = self.quotient_divisors(s);
        let mut out = BTreeSet::new();
        for x in d.torsion() {
            for (p, _) in factor_u64(to_u64(x)?) {
                out.insert(PrimeIdeal::Integer(p));
            }
        }
        if d.free_rank > 0 {
            out.insert(PrimeIdeal::Integer(0));
        }
        Ok(out)
    }

    fn colon_prime(&self, s: &ZSubmodule, p: &PrimeIdeal) -> Result<ZSubmodule> {
        self.check(s)?;
        let q = Self::int_prime(p)?;
        if q == 0 {
            return Ok(self.whole());
        }
        let q = BigInt::from(q);
        let scaled: Vec<Vector> = unit_vectors(self.n)
            .into_iter()
            .map(|v| v.into_iter().map(|x| x * &q).collect())
            .collect();
        // {x : q·x ∈ L} = (L ∩ qℤ^n) / q
        let meet = lattice_intersection(&s.basis, &scaled, self.n);
        let basis = meet
            .into_iter()
            .map(|v| v.into_iter().map(|x| x / &q).collect())
            .collect();
        Ok(ZSubmodule {
            n: self.n,
            basis: row_hnf(basis, self.n),
        })
    }

    fn colon_submodule(&self, s: &ZSubmodule, k: &ZSubmodule) -> Result<ZSubmodule> {
        self.check(s)?;
        self.check(k)?;
        let mut m = BigInt::one();
        for v in &k.basis {
            let o = self.order_mod(s, v);
            if o.is_zero() {
                m = BigInt::zero();
                break;
            }
            m = m.lcm(&o);
        }
        Ok(ZModule::ideal(m))
    }

    fn annihilator(&self, s: &ZSubmodule) -> Result<ZSubmodule> {
        self.check(s)?;
        Ok(ZModule::ideal(self.exponent(s)))
    }

    fn intersect(&self, s: &ZSubmodule, k: &ZSubmodule) -> Result<ZSubmodule> {
        self.check(s)?;
        self.check(k)?;
        Ok(ZSubmodule {
            n: self.n,
            basis: lattice_intersection(&s.basis, &k.basis, self.n),
        })
    }

    fn leq(&self, s: &ZSubmodule, k: &ZSubmodule) -> Result<bool> {
        self.check(s)?;
        self.check(k)?;
        Ok(s.basis.iter().all(|v| is_member(&k.basis, v)))
    }

    fn eq(&self, s: &ZSubmodule, k: &ZSubmodule) -> Result<bool> {
        self.check(s)?;
        self.check(k)?;
        Ok(s.basis == k.basis)
    }

    fn is_whole(&self, s: &ZSubmodule) -> Result<bool> {
        self.check(s)?;
        Ok(s.basis == unit_vectors(self.n))
    }

    fn scale(&self, p: &PrimeIdeal, s: &ZSubmodule) -> Result<ZSubmodule> {
        self.check(s)?;
        let q = BigInt::from(Self::int_prime(p)?);
        let gens = s
            .basis
            .iter()
            .map(|v| v.iter().map(|x| x * &q).collect())
            .collect();
        Ok(self.span(gens))
    }

    fn size_measure(&self, s: &ZSubmodule) -> usize {
        let d = self.quotient_divisors(s);
        let bits: u64 = d.torsion().map(|x| x.bits()).sum();
        bits as usize + d.free_rank + 1
    }

    fn render(&self, s: &ZSubmodule, _names: &[String]) -> String {
        self.render_submodule(s)
    }
}
