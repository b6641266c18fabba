use std::collections::BTreeSet;

use super::filtration::factorization;
use crate::algebra::{
    pairwise_incomparable, prime_contains, AlgebraBackend, FactorizationMultiset, PrimeIdeal,
};
use crate::error::{Error, Result};

/// Outcome of the product-escape check over the positions of `P_M(N)`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct EscapeReport {
    pub factorization: FactorizationMultiset,
    /// Distinct primes that contain no other factor strictly.
    pub checked: Vec<PrimeIdeal>,
    /// Checked primes whose complementary product lands inside `N`.
    pub failures: Vec<PrimeIdeal>,
}

impl EscapeReport {
    pub fn holds(&self) -> bool {
        self.failures.is_empty()
    }
}

/// For each factor `p_i` not strictly containing another factor, checks
/// that the product of the remaining factors applied to `M` escapes `N`.
pub fn product_escape_check<B: AlgebraBackend>(backend: &B, n: &B::Sub) -> Result<EscapeReport> {
    let fact = factorization(backend, n)?;
    let distinct: Vec<PrimeIdeal> = fact.distinct_primes().cloned().collect();
    let mut checked = Vec::new();
    let mut failures = Vec::new();
    for p in &distinct {
        let mut minimal = true;
        for q in &distinct {
            if q != p && prime_contains(p, q)? {
                minimal = false;
                break;
            }
        }
        if !minimal {
            continue;
        }
        let mut product = backend.whole();
        let mut skipped = false;
        for q in fact.expanded() {
            if !skipped && &q == p {
                skipped = true;
                continue;
            }
            product = backend.scale(&q, &product)?;
        }
        if backend.leq(&product, n)? {
            failures.push(p.clone());
        }
        checked.push(p.clone());
    }
    Ok(EscapeReport {
        factorization: fact,
        checked,
        failures,
    })
}

/// Comparison of `P_M(N ∩ K)` with the common factorization of `N` and `K`.
#[derive(Clone, PartialEq, Debug)]
pub struct IntersectionVerdict<S> {
    pub factorization: FactorizationMultiset,
    pub intersection: S,
    pub intersection_factorization: FactorizationMultiset,
    pub equal: bool,
    /// Whether a sufficient condition for equality applies: the ambient is
    /// the ring and there are at most two factors, or the factor primes are
    /// pairwise incomparable.
    pub guaranteed: bool,
}

impl<S> IntersectionVerdict<S> {
    pub fn holds(&self) -> bool {
        !self.guaranteed || self.equal
    }
}

pub fn factor_intersection<B: AlgebraBackend>(
    backend: &B,
    n: &B::Sub,
    k: &B::Sub,
) -> Result<IntersectionVerdict<B::Sub>> {
    let pn = factorization(backend, n)?;
    let pk = factorization(backend, k)?;
    if pn != pk {
        return Err(Error::NotComparable(format!("{pn} differs from {pk}")));
    }
    let meet = backend.intersect(n, k)?;
    let pm = factorization(backend, &meet)?;
    let guaranteed =
        (backend.is_ring() && pn.degree() <= 2) || pairwise_incomparable(pn.distinct_primes())?;
    Ok(IntersectionVerdict {
        equal: pm == pn,
        factorization: pn,
        intersection: meet,
        intersection_factorization: pm,
        guaranteed,
    })
}

/// Comparison of `P_M(N)` with the factorization of `ann(M/N)` in `R`.
#[derive(Clone, PartialEq, Debug)]
pub struct AnnihilatorVerdict<S> {
    pub annihilator: S,
    pub module_factorization: FactorizationMultiset,
    pub ring_factorization: FactorizationMultiset,
    pub module_ass: BTreeSet<PrimeIdeal>,
    pub ring_ass: BTreeSet<PrimeIdeal>,
    /// `P_M(N)` is a multiple of `P_R(ann(M/N))`.
    pub multiple: bool,
    /// `Ass(R/ann(M/N)) ⊆ Ass(M/N)`.
    pub ass_included: bool,
    /// Every associated prime of `M/N` is isolated.
    pub isolated: bool,
    pub equal: bool,
}

impl<S> AnnihilatorVerdict<S> {
    pub fn holds(&self) -> bool {
        self.multiple
            && self.ass_included
            && (!self.isolated || (self.equal && self.ring_ass == self.module_ass))
    }
}

pub fn annihilator_compare<B: AlgebraBackend>(
    backend: &B,
    n: &B::Sub,
) -> Result<AnnihilatorVerdict<B::Sub>> {
    let module_factorization = factorization(backend, n)?;
    let module_ass = backend.ass(n)?;
    let ring = backend.ring();
    let annihilator = backend.annihilator(n)?;
    let ring_factorization = factorization(&ring, &annihilator)?;
    let ring_ass = ring.ass(&annihilator)?;
    Ok(AnnihilatorVerdict {
        multiple: module_factorization.is_multiple_of(&ring_factorization),
        ass_included: ring_ass.is_subset(&module_ass),
        isolated: pairwise_incomparable(module_ass.iter())?,
        equal: module_factorization == ring_factorization,
        annihilator,
        module_factorization,
        ring_factorization,
        module_ass,
        ring_ass,
    })
}

/// Checks on `c = (N : K)` for `N ⊆ K ⊆ M`: its associated primes lie in
/// `Ass(M/N)`, and when `P_M(N) = p^n` the factorization of `c` is `p^r`
/// with `r ≤ n`.
#[derive(Clone, PartialEq, Debug)]
pub struct ColonPowerVerdict<S> {
    pub colon: S,
    pub colon_ass: BTreeSet<PrimeIdeal>,
    pub ass_included: bool,
    /// `(p, n)` when `P_M(N)` is a single prime power.
    pub prime_power: Option<(PrimeIdeal, usize)>,
    pub colon_factorization: FactorizationMultiset,
    pub power_ok: bool,
}

impl<S> ColonPowerVerdict<S> {
    pub fn holds(&self) -> bool {
        self.ass_included && self.power_ok
    }
}

pub fn colon_power_check<B: AlgebraBackend>(
    backend: &B,
    n: &B::Sub,
    k: &B::Sub,
) -> Result<ColonPowerVerdict<B::Sub>> {
    if !backend.leq(n, k)? {
        return Err(Error::InvalidInput("N is not contained in K".into()));
    }
    let ring = backend.ring();
    let colon = backend.colon_submodule(n, k)?;
    let module_ass = backend.ass(n)?;
    let (colon_ass, colon_factorization) = if ring.is_whole(&colon)? {
        (BTreeSet::new(), FactorizationMultiset::new())
    } else {
        (ring.ass(&colon)?, factorization(&ring, &colon)?)
    };
    let fact = factorization(backend, n)?;
    let prime_power = match fact.iter().collect::<Vec<_>>().as_slice() {
        [(p, m)] => Some(((*p).clone(), *m)),
        _ => None,
    };
    let power_ok = match &prime_power {
        None => true,
        Some((p, m)) => {
            colon_factorization.distinct_primes().all(|q| q == p)
                && colon_factorization.degree() <= *m
        }
    };
    Ok(ColonPowerVerdict {
        ass_included: colon_ass.is_subset(&module_ass),
        colon,
        colon_ass,
        prime_power,
        colon_factorization,
        power_ok,
    })
}
