//! Generators and independent oracles shared by the integration suites.
#![allow(dead_code)]

pub mod checks;
pub mod sweep;

use std::collections::BTreeSet;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

use rpe_core::algebra::{AlgebraBackend, MonomialPrime, PrimeIdeal};
use rpe_core::monomial::{Monomial, MonomialIdeal, MonomialModule, MonomialSubmodule};
use rpe_core::zmodule::{ZModule, ZSubmodule};

pub type MonoCase = (MonomialModule, MonomialSubmodule);
pub type ZCase = (ZModule, ZSubmodule);

pub fn names(nvars: usize) -> Vec<String> {
    ["x", "y", "z", "w"][..nvars]
        .iter()
        .map(|s| s.to_string())
        .collect()
}

/// Deterministic draws from a strategy, for suites that count instances
/// themselves instead of going through `proptest!`.
pub fn sample<S: Strategy>(strategy: &S, count: usize, seed: u64) -> Vec<S::Value> {
    let mut bytes = [0u8; 32];
    bytes[..8].copy_from_slice(&seed.to_le_bytes());
    let rng = TestRng::from_seed(RngAlgorithm::ChaCha, &bytes);
    let mut runner = TestRunner::new_with_rng(Config::default(), rng);
    (0..count)
        .map(|_| {
            strategy
                .new_tree(&mut runner)
                .expect("strategy with no rejections")
                .current()
        })
        .collect()
}

pub fn monomial(nvars: usize, max_deg: u32) -> impl Strategy<Value = Monomial> {
    proptest::collection::vec(0..=max_deg, nvars).prop_map(move |mut e| {
        while e.iter().sum::<u32>() > max_deg {
            let i = (0..e.len()).max_by_key(|&i| e[i]).expect("nvars > 0");
            e[i] -= 1;
        }
        Monomial::new(e)
    })
}

/// Nonzero monomial ideals with at most `max_gens` generators of degree at
/// most `max_deg`; the whole ring shows up when a generator is `1`.
pub fn ideal(nvars: usize, max_gens: usize, max_deg: u32) -> impl Strategy<Value = MonomialIdeal> {
    proptest::collection::vec(monomial(nvars, max_deg), 1..=max_gens)
        .prop_map(move |g| MonomialIdeal::new(nvars, g).expect("matching nvars"))
}

fn component(nvars: usize) -> impl Strategy<Value = MonomialIdeal> {
    prop_oneof![
        8 => ideal(nvars, 4, 4),
        1 => Just(MonomialIdeal::whole(nvars)),
        1 => Just(MonomialIdeal::zero(nvars)),
    ]
}

/// Proper monomial submodules of `R^r`, `r ≤ 3`, over at most three variables.
pub fn mono_case() -> impl Strategy<Value = MonoCase> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(v, r)| (Just(v), proptest::collection::vec(component(v), r)))
        .prop_map(|(v, comps)| {
            let m = MonomialModule::new(v, comps.len()).expect("rank ≥ 1");
            let n = MonomialSubmodule::new(comps).expect("uniform nvars");
            (m, n)
        })
        .prop_filter("proper", |(m, n)| !m.is_whole(n).expect("same ambient"))
}

/// Two submodules of one ambient.
pub fn mono_pair() -> impl Strategy<Value = (MonomialModule, MonomialSubmodule, MonomialSubmodule)>
{
    (1usize..=3, 1usize..=2)
        .prop_flat_map(|(v, r)| {
            (
                Just(v),
                proptest::collection::vec(component(v), r),
                proptest::collection::vec(component(v), r),
            )
        })
        .prop_map(|(v, a, b)| {
            let m = MonomialModule::new(v, a.len()).expect("rank ≥ 1");
            (
                m,
                MonomialSubmodule::new(a).expect("uniform nvars"),
                MonomialSubmodule::new(b).expect("uniform nvars"),
            )
        })
        .prop_filter("proper", |(m, a, b)| {
            !m.is_whole(a).expect("same ambient") && !m.is_whole(b).expect("same ambient")
        })
}

/// Proper monomial ideals of `k[x_1..x_v]`, `v ≤ 3`.
pub fn mono_ideal_case() -> impl Strategy<Value = MonoCase> {
    (1usize..=3)
        .prop_flat_map(|v| (Just(v), ideal(v, 4, 4)))
        .prop_map(|(v, i)| {
            (
                MonomialModule::new(v, 1).expect("rank 1"),
                MonomialSubmodule::from_ideal(i),
            )
        })
        .prop_filter("proper", |(_, n)| !n.components()[0].is_whole())
}

fn int_vector(n: usize, bound: i64) -> impl Strategy<Value = Vec<BigInt>> {
    proptest::collection::vec(-bound..=bound, n)
        .prop_map(|v| v.into_iter().map(BigInt::from).collect())
}

/// Proper submodules of `ℤ^n`, `n ≤ 3`, generated by at most three vectors
/// with entries bounded by 20.
pub fn z_case() -> impl Strategy<Value = ZCase> {
    (1usize..=3)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(int_vector(n, 20), 0..=3)))
        .prop_map(|(n, gens)| {
            let m = ZModule::free(n);
            let s = m.submodule(gens).expect("matching rank");
            (m, s)
        })
        .prop_filter("proper", |(m, s)| !m.is_whole(s).expect("same ambient"))
}

/// Invariant factor shapes `d_1 | d_2 | …` (all `d_i ≥ 2`, at most three of
/// them) with product at most `bound`.
pub fn shapes(bound: u64) -> Vec<Vec<u64>> {
    fn go(prefix: &mut Vec<u64>, product: u64, bound: u64, out: &mut Vec<Vec<u64>>) {
        if !prefix.is_empty() {
            out.push(prefix.clone());
        }
        if prefix.len() == 3 {
            return;
        }
        let start = prefix.last().copied().unwrap_or(2);
        let mut d = start;
        while product * d <= bound {
            if d % start == 0 {
                prefix.push(d);
                go(prefix, product * d, bound, out);
                prefix.pop();
            }
            d += 1;
        }
    }
    let mut out = Vec::new();
    go(&mut Vec::new(), 1, bound, &mut out);
    out
}

/// Proper submodules of a finite `ℤ/d_1 ⊕ … ⊕ ℤ/d_k` of order at most 200.
pub fn z_finite_case() -> impl Strategy<Value = ZCase> {
    proptest::sample::select(shapes(200))
        .prop_flat_map(|d| {
            let k = d.len();
            (Just(d), proptest::collection::vec(int_vector(k, 12), 0..=3))
        })
        .prop_map(|(d, gens)| {
            let m = ZModule::cyclic_sum(&d);
            let s = m.submodule(gens).expect("matching rank");
            (m, s)
        })
        .prop_filter("proper", |(m, s)| !m.is_whole(s).expect("same ambient"))
}

pub fn mono_prime(p: &PrimeIdeal) -> &MonomialPrime {
    p.as_monomial().expect("monomial prime")
}

/// `Ass(R/I)` from the definition: primes of the form `(I : m)` for
/// monomials `m ∉ I`. Exponents past the generator maxima change nothing,
/// so a bounded box of witnesses suffices.
pub fn brute_ass_ideal(i: &MonomialIdeal) -> BTreeSet<MonomialPrime> {
    brute_ass_within(i, &MonomialIdeal::whole(i.nvars()))
}

/// `Ass(L/I)` for monomial ideals `I ⊆ L`, witnesses ranging over `L`.
pub fn brute_ass_within(i: &MonomialIdeal, l: &MonomialIdeal) -> BTreeSet<MonomialPrime> {
    let mut out = BTreeSet::new();
    if l.is_zero() {
        return out;
    }
    if i.is_zero() {
        out.insert(MonomialPrime::zero());
        return out;
    }
    let bound: Vec<u32> = i
        .max_exponents()
        .iter()
        .zip(l.max_exponents())
        .map(|(&a, b)| a.max(b))
        .collect();
    let mut e = vec![0u32; i.nvars()];
    loop {
        let m = Monomial::new(e.clone());
        if l.contains(&m) && !i.contains(&m) {
            if let Some(p) = i.colon_mono(&m).as_prime() {
                out.insert(p);
            }
        }
        let mut k = 0;
        loop {
            if k == e.len() {
                return out;
            }
            if e[k] < bound[k] {
                e[k] += 1;
                break;
            }
            e[k] = 0;
            k += 1;
        }
    }
}

pub fn brute_ass_sub(n: &MonomialSubmodule) -> BTreeSet<PrimeIdeal> {
    n.components()
        .iter()
        .flat_map(brute_ass_ideal)
        .map(PrimeIdeal::Monomial)
        .collect()
}

/// The monomial ideal `p_1 ⋯ p_k`; the empty product is the whole ring.
pub fn prime_product(nvars: usize, primes: &[PrimeIdeal]) -> MonomialIdeal {
    primes.iter().fold(MonomialIdeal::whole(nvars), |acc, p| {
        acc.product(&MonomialIdeal::from_prime(nvars, mono_prime(p)))
    })
}

pub fn int_prime(p: &PrimeIdeal) -> u64 {
    p.as_integer().expect("integer prime")
}

/// `{x : e·x ∈ N}` in a `ℤ`-module as `(1/e)(L_N ∩ eℤ^n)`; `e = 0` gives
/// the whole module.
pub fn z_colon_integer(m: &ZModule, s: &ZSubmodule, e: &BigInt) -> ZSubmodule {
    if *e == BigInt::from(0) {
        return m.whole();
    }
    let n = m.rank();
    let scaled: Vec<Vec<BigInt>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { e.clone() } else { BigInt::from(0) })
                .collect()
        })
        .collect();
    let meet = rpe_core::zmodule::lattice_intersection(s.basis(), &scaled, n);
    let gens = meet
        .into_iter()
        .map(|v| v.into_iter().map(|x| x / e).collect())
        .collect();
    m.submodule(gens).expect("matching rank")
}

pub fn int_product(primes: &[PrimeIdeal]) -> BigInt {
    primes.iter().map(|p| BigInt::from(int_prime(p))).product()
}

/// A `p`-primary monomial ideal for the prime on the variables in `mask`
/// (the zero ideal when `mask` is empty).
fn primary_ideal(nvars: usize, mask: u32) -> impl Strategy<Value = MonomialIdeal> {
    let vars: Vec<usize> = (0..nvars).filter(|i| mask & (1 << i) != 0).collect();
    let k = vars.len();
    (
        proptest::collection::vec(1u32..=3, k),
        proptest::collection::vec(proptest::collection::vec(0u32..=3, k), 0..=2),
    )
        .prop_map(move |(powers, extra)| {
            if vars.is_empty() {
                return MonomialIdeal::zero(nvars);
            }
            let embed = |e: &[u32]| {
                let mut full = vec![0; nvars];
                for (&v, &x) in vars.iter().zip(e) {
                    full[v] = x;
                }
                Monomial::new(full)
            };
            let mut gens: Vec<Monomial> = vars
                .iter()
                .zip(&powers)
                .map(|(&v, &a)| Monomial::var_power(nvars, v, a))
                .collect();
            gens.extend(extra.iter().map(|e| embed(e)).filter(|m| !m.is_one()));
            MonomialIdeal::new(nvars, gens).expect("matching nvars")
        })
}

/// Monomial submodules whose quotient has a single associated prime.
pub fn mono_primary_case() -> impl Strategy<Value = MonoCase> {
    (1usize..=3, 1usize..=3)
        .prop_flat_map(|(v, r)| {
            (
                Just(v),
                0u32..(1 << v),
                proptest::collection::vec(any::<bool>(), r),
            )
        })
        .prop_flat_map(|(v, mask, whole)| {
            let comps: Vec<BoxedStrategy<MonomialIdeal>> = whole
                .iter()
                .enumerate()
                .map(|(i, &w)| {
                    if w && i > 0 {
                        Just(MonomialIdeal::whole(v)).boxed()
                    } else {
                        primary_ideal(v, mask).boxed()
                    }
                })
                .collect();
            (Just(v), comps)
        })
        .prop_map(|(v, comps)| {
            (
                MonomialModule::new(v, comps.len()).expect("rank ≥ 1"),
                MonomialSubmodule::new(comps).expect("uniform nvars"),
            )
        })
}

/// Submodules of `ℤ^n` whose quotient is a nontrivial `p`-group, or free.
pub fn z_primary_case() -> impl Strategy<Value = ZCase> {
    let torsion = (prop::sample::select(vec![2u64, 3, 5]), 1usize..=3)
        .prop_flat_map(|(p, n)| {
            (
                Just(p),
                Just(n),
                proptest::collection::vec(0u32..=3, n),
                proptest::collection::vec(int_vector(n, 6), 0..=2),
            )
        })
        .prop_map(|(p, n, mut a, extra)| {
            if a.iter().all(|&x| x == 0) {
                a[0] = 1;
            }
            let p = BigInt::from(p);
            let mut gens: Vec<Vec<BigInt>> = (0..n)
                .map(|i| {
                    (0..n)
                        .map(|j| if i == j { p.pow(a[i]) } else { BigInt::from(0) })
                        .collect()
                })
                .collect();
            gens.extend(
                extra
                    .into_iter()
                    .map(|v| v.into_iter().map(|x| x * &p).collect()),
            );
            let m = ZModule::free(n);
            let s = m.submodule(gens).expect("matching rank");
            (m, s)
        });
    let free = (1usize..=3)
        .prop_flat_map(|n| (Just(n), proptest::collection::vec(any::<bool>(), n)))
        .prop_map(|(n, keep)| {
            let gens = (0..n)
                .filter(|&i| keep[i] && i > 0)
                .map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect())
                .collect();
            let m = ZModule::free(n);
            let s = m.submodule(gens).expect("matching rank");
            (m, s)
        });
    prop_oneof![3 => torsion, 1 => free]
}

/// Two submodules of one finite `ℤ/d_1 ⊕ … ⊕ ℤ/d_k`, with the shape.
pub fn z_finite_pair() -> impl Strategy<Value = (Vec<u64>, ZModule, ZSubmodule, ZSubmodule)> {
    proptest::sample::select(shapes(200))
        .prop_flat_map(|d| {
            let k = d.len();
            (
                Just(d),
                proptest::collection::vec(int_vector(k, 12), 0..=2),
                proptest::collection::vec(int_vector(k, 12), 0..=2),
            )
        })
        .prop_map(|(d, a, b)| {
            let m = ZModule::cyclic_sum(&d);
            let a = m.submodule(a).expect("matching rank");
            let b = m.submodule(b).expect("matching rank");
            (d, m, a, b)
        })
        .prop_filter("proper", |(_, m, a, b)| {
            !m.is_whole(a).expect("same ambient") && !m.is_whole(b).expect("same ambient")
        })
}

/// Two submodules of `ℤ^n`, `n ≤ 3`.
pub fn z_free_pair() -> impl Strategy<Value = (ZModule, ZSubmodule, ZSubmodule)> {
    (1usize..=3)
        .prop_flat_map(|n| {
            (
                Just(n),
                proptest::collection::vec(int_vector(n, 20), 0..=3),
                proptest::collection::vec(int_vector(n, 20), 0..=3),
            )
        })
        .prop_map(|(n, a, b)| {
            let m = ZModule::free(n);
            let a = m.submodule(a).expect("matching rank");
            let b = m.submodule(b).expect("matching rank");
            (m, a, b)
        })
        .prop_filter("proper", |(m, a, b)| {
            !m.is_whole(a).expect("same ambient") && !m.is_whole(b).expect("same ambient")
        })
}
