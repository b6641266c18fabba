//! Lemma and theorem checks over any backend. Each returns `Ok(true)` when
//! the instance met the hypotheses and passed, `Ok(false)` when it was
//! vacuous, and `Err` with a description on a violation.

use std::collections::BTreeSet;
use std::fmt::Debug;

use num_bigint::BigInt;

use rpe_core::algebra::{
    pairwise_incomparable, prime_contains, AlgebraBackend, FactorizationMultiset, PrimeIdeal,
};
use rpe_core::monomial::{MonomialIdeal, MonomialModule, MonomialSubmodule};
use rpe_core::rpe::{
    annihilator_compare, colon_power_check, factor_intersection, factorization, interchange,
    maximal_primes, product_escape_check, reorder, rpe_filtration, rpe_filtration_with,
    verify_filtration, TieBreak,
};
use rpe_core::zmodule::{ZModule, ZSubmodule};

use super::{
    brute_ass_ideal, brute_ass_within, int_product, mono_prime, prime_product, z_colon_integer,
};

pub type Check = Result<bool, String>;

/// Backend operations the checks compute independently of the engine.
pub trait Ops: AlgebraBackend {
    /// `(N : p_1 ⋯ p_k)`.
    fn colon_by_product(&self, n: &Self::Sub, primes: &[PrimeIdeal]) -> Self::Sub;
    /// `p_1 ⋯ p_k · M`.
    fn product_module(&self, primes: &[PrimeIdeal]) -> Self::Sub;
    fn sum(&self, a: &Self::Sub, b: &Self::Sub) -> Self::Sub;
    /// `Ass(R/I)` by an independent method, when one is available.
    fn ring_ass_oracle(&self, ideal: &Self::Sub) -> Option<BTreeSet<PrimeIdeal>>;
}

impl Ops for MonomialModule {
    fn colon_by_product(&self, n: &MonomialSubmodule, primes: &[PrimeIdeal]) -> MonomialSubmodule {
        let prod = prime_product(n.nvars(), primes);
        MonomialSubmodule::new(
            n.components()
                .iter()
                .map(|c| c.colon_ideal(&prod))
                .collect(),
        )
        .expect("uniform nvars")
    }

    fn product_module(&self, primes: &[PrimeIdeal]) -> MonomialSubmodule {
        let w = self.whole();
        let prod = prime_product(w.nvars(), primes);
        MonomialSubmodule::new(vec![prod; w.rank()]).expect("uniform nvars")
    }

    fn sum(&self, a: &MonomialSubmodule, b: &MonomialSubmodule) -> MonomialSubmodule {
        MonomialSubmodule::new(
            a.components()
                .iter()
                .zip(b.components())
                .map(|(x, y)| x.sum(y))
                .collect(),
        )
        .expect("uniform nvars")
    }

    fn ring_ass_oracle(&self, ideal: &MonomialSubmodule) -> Option<BTreeSet<PrimeIdeal>> {
        Some(
            brute_ass_ideal(&ideal.components()[0])
                .into_iter()
                .map(PrimeIdeal::Monomial)
                .collect(),
        )
    }
}

impl Ops for ZModule {
    fn colon_by_product(&self, n: &ZSubmodule, primes: &[PrimeIdeal]) -> ZSubmodule {
        z_colon_integer(self, n, &int_product(primes))
    }

    fn product_module(&self, primes: &[PrimeIdeal]) -> ZSubmodule {
        let e = int_product(primes);
        let gens = (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| if i == j { e.clone() } else { BigInt::from(0) })
                    .collect()
            })
            .collect();
        self.submodule(gens).expect("matching rank")
    }

    fn sum(&self, a: &ZSubmodule, b: &ZSubmodule) -> ZSubmodule {
        self.submodule(a.basis().iter().chain(b.basis()).cloned().collect())
            .expect("matching rank")
    }

    fn ring_ass_oracle(&self, ideal: &ZSubmodule) -> Option<BTreeSet<PrimeIdeal>> {
        let e: u64 = ideal.basis().first().map_or(0, |v| {
            u64::try_from(v[0].magnitude()).expect("small generator")
        });
        Some(if e == 0 {
            BTreeSet::from([PrimeIdeal::Integer(0)])
        } else {
            rpe_core::zmodule::factor_u64(e)
                .into_iter()
                .map(|(p, _)| PrimeIdeal::Integer(p))
                .collect()
        })
    }
}

fn fail<T: Debug>(what: &str, n: &T, detail: String) -> String {
    format!("{what} on {n:?}: {detail}")
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

/// ASS-FILT and COLON-STEP on the canonical filtration, plus the step-by-step
/// validation of the filtration itself.
pub fn filtration_lemmas<B: Ops>(b: &B, n: &B::Sub) -> Check {
    let f = rpe_filtration(b, n).map_err(err)?;
    let primes = f.primes();
    for i in 0..f.len() {
        let ass = b.ass(f.module(i)).map_err(err)?;
        let rest: BTreeSet<PrimeIdeal> = primes[i..].iter().cloned().collect();
        if ass != rest {
            return Err(fail(
                "ASS-FILT",
                n,
                format!("step {i}: Ass {ass:?} vs {rest:?}"),
            ));
        }
    }
    for i in 1..=f.len() {
        let colon = b.colon_by_product(n, &primes[..i]);
        if !b.eq(&colon, f.module(i)).map_err(err)? {
            return Err(fail(
                "COLON-STEP",
                n,
                format!("step {i}: {colon:?} vs {:?}", f.module(i)),
            ));
        }
    }
    if !b.is_whole(f.module(f.len())).map_err(err)? {
        return Err(fail("filtration", n, "does not end at M".into()));
    }
    if !verify_filtration(b, &f).map_err(err)?.is_valid() {
        return Err(fail("filtration", n, "verify rejected it".into()));
    }
    Ok(true)
}

/// FACTOR-UNIQUE: random tie-breaking never changes the multiset.
pub fn factor_unique<B: Ops>(b: &B, n: &B::Sub, seeds: std::ops::Range<u64>) -> Check {
    let canonical = factorization(b, n).map_err(err)?;
    for s in seeds {
        let f = rpe_filtration_with(b, n, TieBreak::Random(s)).map_err(err)?;
        if f.multiset() != canonical {
            return Err(fail(
                "FACTOR-UNIQUE",
                n,
                format!("seed {s}: {} vs {canonical}", f.multiset()),
            ));
        }
    }
    Ok(true)
}

/// Product escape, computed from the product module directly; also checks
/// that the library's report agrees.
pub fn product_escape<B: Ops>(b: &B, n: &B::Sub) -> Check {
    let fact = factorization(b, n).map_err(err)?;
    let expanded = fact.expanded();
    let mut checked = Vec::new();
    for p in fact.distinct_primes() {
        let mut minimal = true;
        for q in fact.distinct_primes() {
            if q != p && prime_contains(p, q).map_err(err)? {
                minimal = false;
            }
        }
        if !minimal {
            continue;
        }
        let mut others = expanded.clone();
        let at = others.iter().position(|q| q == p).expect("present");
        others.remove(at);
        let prod = b.product_module(&others);
        if b.leq(&prod, n).map_err(err)? {
            return Err(fail(
                "product-escape",
                n,
                format!("product without {p} lands in N"),
            ));
        }
        checked.push(p.clone());
    }
    let report = product_escape_check(b, n).map_err(err)?;
    if !report.holds() || report.checked != checked {
        return Err(fail(
            "product-escape",
            n,
            format!("library report {report:?}"),
        ));
    }
    Ok(!checked.is_empty())
}

fn maximal_set<B: AlgebraBackend>(b: &B, n: &B::Sub) -> Result<Vec<PrimeIdeal>, String> {
    maximal_primes(&b.ass(n).map_err(err)?).map_err(err)
}

fn is_maximal_in(p: &PrimeIdeal, set: &BTreeSet<PrimeIdeal>) -> Result<bool, String> {
    if !set.contains(p) {
        return Ok(false);
    }
    for q in set {
        if q != p && prime_contains(q, p).map_err(err)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// INT-RPE: for regular `p`-extensions `N1 ⊂ N2` and `K1 ⊂ K2`, the
/// intersections form a regular `p`-extension whenever they differ.
pub fn int_rpe<B: Ops>(b: &B, n1: &B::Sub, k1: &B::Sub) -> Check {
    let mn = maximal_set(b, n1)?;
    let mk = maximal_set(b, k1)?;
    let mut hit = false;
    for p in mn.iter().filter(|p| mk.contains(p)) {
        let n2 = b.colon_prime(n1, p).map_err(err)?;
        let k2 = b.colon_prime(k1, p).map_err(err)?;
        let i1 = b.intersect(n1, k1).map_err(err)?;
        let i2 = b.intersect(&n2, &k2).map_err(err)?;
        if b.eq(&i1, &i2).map_err(err)? {
            continue;
        }
        hit = true;
        let ass = b.ass(&i1).map_err(err)?;
        if !is_maximal_in(p, &ass)? {
            return Err(fail(
                "INT-RPE",
                &(n1, k1),
                format!("{p} not maximal in {ass:?}"),
            ));
        }
        let colon = b.colon_by_product(&i1, std::slice::from_ref(p));
        if !b.eq(&colon, &i2).map_err(err)? {
            return Err(fail(
                "INT-RPE",
                &(n1, k1),
                format!("({p}) colon {colon:?} vs {i2:?}"),
            ));
        }
    }
    Ok(hit)
}

/// INT-RESTRICT for monomial submodules: with `K` the regular `p`-extension
/// of `N`, `N ∩ L ⊂ K ∩ L` is a regular `p`-extension inside `L` when the
/// two differ. `Ass(L/(N ∩ L))` is computed from witnesses in `L`.
pub fn int_restrict_mono(
    b: &MonomialModule,
    n: &MonomialSubmodule,
    l: &MonomialSubmodule,
) -> Check {
    let mut hit = false;
    for p in maximal_set(b, n)? {
        let k = b.colon_prime(n, &p).map_err(err)?;
        let nl = b.intersect(n, l).map_err(err)?;
        let kl = b.intersect(&k, l).map_err(err)?;
        if AlgebraBackend::eq(b, &nl, &kl).map_err(err)? {
            continue;
        }
        hit = true;
        let ass: BTreeSet<PrimeIdeal> = nl
            .components()
            .iter()
            .zip(l.components())
            .flat_map(|(a, c)| brute_ass_within(a, c))
            .map(PrimeIdeal::Monomial)
            .collect();
        if !is_maximal_in(&p, &ass)? {
            return Err(fail(
                "INT-RESTRICT",
                &(n, l),
                format!("{p} not maximal in Ass(L/N∩L) = {ass:?}"),
            ));
        }
        let within = b
            .intersect(&b.colon_prime(&nl, &p).map_err(err)?, l)
            .map_err(err)?;
        if within != kl {
            return Err(fail(
                "INT-RESTRICT",
                &(n, l),
                format!("(N∩L :_L {p}) = {within:?} vs {kl:?}"),
            ));
        }
        // N ∩ L is p-prime in K ∩ L: (N∩L : K∩L) = p.
        let ann = b.colon_submodule(&nl, &kl).map_err(err)?;
        let expected = MonomialIdeal::from_prime(n.nvars(), mono_prime(&p));
        if ann.components()[0] != expected {
            return Err(fail(
                "INT-RESTRICT",
                &(n, l),
                format!("(N∩L : K∩L) = {ann:?}"),
            ));
        }
    }
    Ok(hit)
}

/// Colon inclusion: `Ass(R/(N : K)) ⊆ Ass(M/N)` for `K = N + extra`, with the
/// colon's associated primes cross-checked against an independent method.
pub fn colon_inclusion<B: Ops>(b: &B, n: &B::Sub, extra: &B::Sub) -> Check {
    let k = b.sum(n, extra);
    let v = colon_power_check(b, n, &k).map_err(err)?;
    let ring = b.ring();
    let module_ass = b.ass(n).map_err(err)?;
    if !ring.is_whole(&v.colon).map_err(err)? {
        if let Some(oracle) = ring.ring_ass_oracle(&v.colon) {
            if oracle != v.colon_ass {
                return Err(fail(
                    "Ass(R/(N:K))",
                    &(n, &k),
                    format!("{:?} vs oracle {oracle:?}", v.colon_ass),
                ));
            }
        }
    }
    if !v.colon_ass.is_subset(&module_ass) || !v.ass_included {
        return Err(fail(
            "colon-ass",
            &(n, &k),
            format!("{:?} ⊄ {module_ass:?}", v.colon_ass),
        ));
    }
    Ok(true)
}

/// Colon power bound: `P_M(N) = p^m` forces `P_R((N : K)) = p^r` with `r ≤ m`.
pub fn colon_power<B: Ops>(b: &B, n: &B::Sub, extra: &B::Sub) -> Check {
    let fact = factorization(b, n).map_err(err)?;
    let single: Vec<(&PrimeIdeal, usize)> = fact.iter().collect();
    let [(p, m)] = single.as_slice() else {
        return Ok(false);
    };
    let k = b.sum(n, extra);
    let v = colon_power_check(b, n, &k).map_err(err)?;
    let ok = v.colon_factorization.distinct_primes().all(|q| q == *p)
        && v.colon_factorization.degree() <= *m;
    if !ok || !v.power_ok {
        return Err(fail(
            "colon-power",
            &(n, &k),
            format!("{fact} but (N:K) factors as {}", v.colon_factorization),
        ));
    }
    Ok(true)
}

/// Multiplicity comparison written out: every prime of `small` occurs at
/// least as often in `big`.
pub fn is_multiple(big: &FactorizationMultiset, small: &FactorizationMultiset) -> bool {
    small.iter().all(|(p, k)| big.multiplicity(p) >= k)
}

/// `P_M(N)` is a multiple of `P_R(ann(M/N))`.
pub fn thm_multiple<B: Ops>(b: &B, n: &B::Sub) -> Check {
    let pm = factorization(b, n).map_err(err)?;
    let ring = b.ring();
    let ann = b.annihilator(n).map_err(err)?;
    let pr = factorization(&ring, &ann).map_err(err)?;
    let v = annihilator_compare(b, n).map_err(err)?;
    if !is_multiple(&pm, &pr) || !v.multiple {
        return Err(fail(
            "multiple",
            n,
            format!("P_M(N) = {pm}, P_R(ann) = {pr}"),
        ));
    }
    Ok(true)
}

/// Every associated prime isolated ⇒ the two factorizations agree.
pub fn thm_isolated<B: Ops>(b: &B, n: &B::Sub) -> Check {
    let ass = b.ass(n).map_err(err)?;
    if !pairwise_incomparable(ass.iter()).map_err(err)? {
        return Ok(false);
    }
    let pm = factorization(b, n).map_err(err)?;
    let ring = b.ring();
    let ann = b.annihilator(n).map_err(err)?;
    let pr = factorization(&ring, &ann).map_err(err)?;
    let v = annihilator_compare(b, n).map_err(err)?;
    if pm != pr || !v.isolated || !v.holds() {
        return Err(fail(
            "isolated",
            n,
            format!("P_M(N) = {pm}, P_R(ann) = {pr}"),
        ));
    }
    Ok(true)
}

/// Equal factorizations with a sufficient hypothesis ⇒ the intersection
/// has the same factorization.
pub fn intersection_equal<B: Ops>(b: &B, n: &B::Sub, k: &B::Sub) -> Check {
    let pn = factorization(b, n).map_err(err)?;
    let pk = factorization(b, k).map_err(err)?;
    if pn != pk {
        return Ok(false);
    }
    let few = b.is_ring() && pn.degree() <= 2;
    let incomparable = pairwise_incomparable(pn.distinct_primes()).map_err(err)?;
    if !few && !incomparable {
        return Ok(false);
    }
    let meet = b.intersect(n, k).map_err(err)?;
    let pi = factorization(b, &meet).map_err(err)?;
    let v = factor_intersection(b, n, k).map_err(err)?;
    if pi != pn || !v.guaranteed || !v.holds() {
        return Err(fail(
            "intersection",
            &(n, k),
            format!("{pn} but the intersection gives {pi}"),
        ));
    }
    Ok(true)
}

/// Interchange of every adjacent pair whose hypothesis holds, and the reorder
/// of the whole filtration to reversed order when admissible.
pub fn interchange_and_reorder<B: Ops>(b: &B, n: &B::Sub) -> Check {
    let f = rpe_filtration(b, n).map_err(err)?;
    let primes = f.primes();
    let mut hit = false;
    for i in 0..f.len().saturating_sub(1) {
        let (p, q) = (&primes[i], &primes[i + 1]);
        if p == q || prime_contains(p, q).map_err(err)? {
            continue;
        }
        hit = true;
        let g =
            interchange(b, &f, i).map_err(|e| fail("interchange", n, format!("step {i}: {e}")))?;
        let mut swapped = primes.clone();
        swapped.swap(i, i + 1);
        if g.primes() != swapped || !verify_filtration(b, &g).map_err(err)?.is_valid() {
            return Err(fail(
                "interchange",
                n,
                format!("step {i}: got {:?}", g.primes()),
            ));
        }
    }
    let mut reversed = primes.clone();
    reversed.reverse();
    let admissible = (0..reversed.len()).all(|i| {
        (i + 1..reversed.len()).all(|j| {
            reversed[i] == reversed[j]
                || !prime_contains(&reversed[j], &reversed[i]).expect("same backend")
        })
    });
    if admissible {
        let g = reorder(b, n, &reversed).map_err(|e| fail("reorder", n, e.to_string()))?;
        if g.primes() != reversed {
            return Err(fail("reorder", n, format!("got {:?}", g.primes())));
        }
        hit = true;
    }
    Ok(hit)
}
