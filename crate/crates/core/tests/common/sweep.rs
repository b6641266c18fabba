//! Exhaustive checks over finite `ℤ`-modules against the brute-force oracle.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;

use rpe_core::algebra::{is_prime_u64, AlgebraBackend, FactorizationMultiset, PrimeIdeal};
use rpe_core::oracle::{FiniteModule, FiniteSubmodule, RpeEnumerator};
use rpe_core::rpe::factorization;
use rpe_core::zmodule::{factor_u64, ZModule};

/// Instance counts per property and every violation met.
#[derive(Default, Debug)]
pub struct Tally {
    pub counts: BTreeMap<&'static str, usize>,
    pub violations: Vec<String>,
}

impl Tally {
    pub fn record(&mut self, name: &'static str, outcome: Result<bool, String>) {
        match outcome {
            Ok(true) => *self.counts.entry(name).or_default() += 1,
            Ok(false) => {
                self.counts.entry(name).or_default();
            }
            Err(e) => self.violations.push(format!("{name}: {e}")),
        }
    }

    pub fn count(&self, name: &str) -> usize {
        self.counts.get(name).copied().unwrap_or(0)
    }

    pub fn merge(&mut self, other: Tally) {
        for (k, v) in other.counts {
            *self.counts.entry(k).or_default() += v;
        }
        self.violations.extend(other.violations);
    }

    pub fn summary(&self) -> String {
        self.counts
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

fn int(p: &PrimeIdeal) -> u64 {
    p.as_integer().expect("integer prime")
}

fn single_multiset(
    en: &mut RpeEnumerator<'_>,
    n: &FiniteSubmodule,
) -> Result<FactorizationMultiset, String> {
    let sets = en.multisets(n).map_err(|e| e.to_string())?;
    if sets.len() != 1 {
        return Err(format!("{} distinct multisets: {sets:?}", sets.len()));
    }
    let only = sets.into_iter().next().expect("one multiset");
    let mut out = FactorizationMultiset::new();
    for (p, k) in only {
        out.add(p, k);
    }
    Ok(out)
}

fn fm_from(fm: &FiniteModule, n: &FiniteSubmodule) -> String {
    format!(
        "{:?} ⊆ ℤ-module {:?}",
        n.elements().collect::<Vec<_>>(),
        fm.moduli()
    )
}

/// Uniqueness of the multiset over all filtrations, agreement with the
/// engine on the `cyclic_sum` presentation, ASS-FILT and COLON-STEP on every
/// filtration, and product escape.
pub fn filtration_sweep(shape: &[u64], tally: &mut Tally) {
    let fm = FiniteModule::new(shape, usize::MAX).expect("small module");
    let zm = ZModule::cyclic_sum(shape);
    let subs = fm.enumerate_submodules();
    let whole = fm.whole();
    let mut en = RpeEnumerator::new(&fm);
    for n in subs.iter().filter(|s| **s != whole) {
        let at = fm_from(&fm, n);
        let unique = single_multiset(&mut en, n);
        let engine = fm
            .to_zsubmodule(&zm, n)
            .and_then(|zs| factorization(&zm, &zs))
            .map_err(|e| e.to_string());
        tally.record(
            "unique",
            match (&unique, &engine) {
                (Ok(u), Ok(e)) if u == e => Ok(true),
                (Ok(u), Ok(e)) => Err(format!("{at}: oracle {u} vs engine {e}")),
                (Err(x), _) | (_, Err(x)) => Err(format!("{at}: {x}")),
            },
        );
        let filtrations = match en.all_rpe_filtrations(n) {
            Ok(f) => f,
            Err(e) => {
                tally.violations.push(format!("{at}: {e}"));
                continue;
            }
        };
        for f in &filtrations {
            let primes = f.primes();
            let mut stage = n.clone();
            let mut ass_ok = Ok(true);
            let mut colon_ok = Ok(true);
            for (i, (_, next)) in f.steps.iter().enumerate() {
                let ass = fm.brute_ass(&stage);
                let rest: BTreeSet<PrimeIdeal> = primes[i..].iter().cloned().collect();
                if ass != rest {
                    ass_ok = Err(format!("{at}: step {i}: Ass {ass:?} vs {rest:?}"));
                }
                let e: u64 = primes[..=i].iter().map(int).product();
                if fm.colon_integer(n, e) != *next {
                    colon_ok = Err(format!("{at}: step {}: (N : {e}) differs from M_i", i + 1));
                }
                stage = next.clone();
            }
            if stage != whole {
                ass_ok = Err(format!("{at}: filtration stops below M"));
            }
            tally.record("ASS-FILT", ass_ok);
            tally.record("COLON-STEP", colon_ok);
        }
        if let Ok(fact) = unique {
            let expanded = fact.expanded();
            let mut escaped = Ok(true);
            for p in fact.distinct_primes() {
                let e: u64 = expanded.iter().map(int).product::<u64>() / int(p);
                if (0..fm.size()).all(|x| n.contains(fm.scalar(e, x))) {
                    escaped = Err(format!("{at}: product without {p} lands in N"));
                }
            }
            tally.record("product-escape", escaped);
        }
    }
}

/// Colon inclusion and colon power bound on every pair `N ⊊ K`.
pub fn colon_sweep(shape: &[u64], tally: &mut Tally) {
    let fm = FiniteModule::new(shape, usize::MAX).expect("small module");
    let subs = fm.enumerate_submodules();
    let whole = fm.whole();
    let mut en = RpeEnumerator::new(&fm);
    for n in subs.iter().filter(|s| **s != whole) {
        let ass = fm.brute_ass(n);
        let fact = match single_multiset(&mut en, n) {
            Ok(f) => f,
            Err(e) => {
                tally.violations.push(e);
                continue;
            }
        };
        let power: Vec<(&PrimeIdeal, usize)> = fact.iter().collect();
        for k in subs.iter().filter(|k| *k != n && n.is_subset(k)) {
            let e = fm.colon_generator(n, k);
            let colon_ass: BTreeSet<PrimeIdeal> = factor_u64(e)
                .into_iter()
                .map(|(p, _)| PrimeIdeal::Integer(p))
                .collect();
            tally.record(
                "colon-ass",
                if colon_ass.is_subset(&ass) {
                    Ok(true)
                } else {
                    Err(format!("{}: Ass(R/({e})) ⊄ {ass:?}", fm_from(&fm, n)))
                },
            );
            if let [(p, m)] = power.as_slice() {
                let q = int(p);
                let f = factor_u64(e);
                let ok = f.len() == 1 && f[0].0 == q && f[0].1 as usize <= *m;
                tally.record(
                    "colon-power",
                    if ok {
                        Ok(true)
                    } else {
                        Err(format!("{}: {fact} but (N : K) = ({e})", fm_from(&fm, n)))
                    },
                );
            }
        }
    }
}

/// INT-RESTRICT over every `N`, maximal `p` and `L`; INT-RPE over every pair.
pub fn intersection_sweep(shape: &[u64], tally: &mut Tally) {
    let fm = FiniteModule::new(shape, usize::MAX).expect("small module");
    let subs = fm.enumerate_submodules();
    let whole = fm.whole();
    let en = RpeEnumerator::new(&fm);
    let proper: Vec<&FiniteSubmodule> = subs.iter().filter(|s| **s != whole).collect();
    let mut ext: Vec<Vec<(PrimeIdeal, FiniteSubmodule)>> = Vec::with_capacity(proper.len());
    for n in &proper {
        let mut row = Vec::new();
        for p in en.maximal_associated(n) {
            let k = fm.colon_integer(n, int(&p));
            match fm.maximal_prime_extension(n, &p) {
                Ok(top) if top == k => {}
                Ok(_) => tally.violations.push(format!(
                    "{}: (N : {p}) is not the maximal {p}-prime extension",
                    fm_from(&fm, n)
                )),
                Err(e) => tally.violations.push(format!("{}: {e}", fm_from(&fm, n))),
            }
            row.push((p, k));
        }
        ext.push(row);
    }
    for (n, row) in proper.iter().zip(&ext) {
        for (p, k) in row {
            for l in &subs {
                let nl = n.intersect(l);
                let kl = k.intersect(l);
                if nl == kl {
                    continue;
                }
                tally.record(
                    "INT-RESTRICT",
                    match en.is_regular_extension_within(&nl, &kl, p, l) {
                        Ok(true) => Ok(true),
                        Ok(false) => Err(format!(
                            "{}, p = {p}, L = {:?}",
                            fm_from(&fm, n),
                            l.elements().collect::<Vec<_>>()
                        )),
                        Err(e) => Err(e.to_string()),
                    },
                );
            }
        }
    }
    for (i, (n1, r1)) in proper.iter().zip(&ext).enumerate() {
        for (k1, r2) in proper.iter().zip(&ext).skip(i) {
            for (p, n2) in r1 {
                let Some((_, k2)) = r2.iter().find(|(q, _)| q == p) else {
                    continue;
                };
                let i1 = n1.intersect(k1);
                let i2 = n2.intersect(k2);
                if i1 == i2 {
                    continue;
                }
                tally.record(
                    "INT-RPE",
                    match en.is_regular_extension_within(&i1, &i2, p, &whole) {
                        Ok(true) => Ok(true),
                        Ok(false) => Err(format!(
                            "{} and {:?}, p = {p}",
                            fm_from(&fm, n1),
                            k1.elements().collect::<Vec<_>>()
                        )),
                        Err(e) => Err(e.to_string()),
                    },
                );
            }
        }
    }
}

/// In `ℤ/n` every proper submodule with factorization `{(p)}` is `pℤ/nℤ`,
/// and conversely.
pub fn prime_self_sweep(max_n: u64, tally: &mut Tally) {
    for n in 2..=max_n {
        let fm = FiniteModule::new(&[n], usize::MAX).expect("small module");
        let whole = fm.whole();
        let mut en = RpeEnumerator::new(&fm);
        for s in fm.enumerate_submodules().iter().filter(|s| **s != whole) {
            let fact = match single_multiset(&mut en, s) {
                Ok(f) => f,
                Err(e) => {
                    tally.violations.push(e);
                    continue;
                }
            };
            let single = match fact.iter().collect::<Vec<_>>().as_slice() {
                [(p, 1)] => Some(int(p)),
                _ => None,
            };
            // the index of a cyclic submodule is its generator
            let index = (n as usize / s.len()) as u64;
            let is_prime_ideal = is_prime_u64(index);
            let outcome = match single {
                Some(p) if p == index => Ok(true),
                None if !is_prime_ideal => Ok(true),
                _ => Err(format!(
                    "ℤ/{n}: submodule ({index}) has factorization {fact}"
                )),
            };
            tally.record("PRIME-SELF", outcome);
        }
    }
}

/// Engine versus oracle on `Ass`, colons by primes and factorization, for
/// every submodule of the `cyclic_sum` presentation.
pub fn oracle_agreement(shape: &[u64], tally: &mut Tally) {
    let fm = FiniteModule::new(shape, usize::MAX).expect("small module");
    let zm = ZModule::cyclic_sum(shape);
    let whole = fm.whole();
    let mut en = RpeEnumerator::new(&fm);
    let order: u64 = shape.iter().product();
    let mut primes: Vec<u64> = factor_u64(order).into_iter().map(|(p, _)| p).collect();
    primes.push(
        (2..)
            .find(|q| is_prime_u64(*q) && !order.is_multiple_of(*q))
            .expect("primes are infinite"),
    );
    for n in fm.enumerate_submodules().iter() {
        let at = fm_from(&fm, n);
        let zs = match fm.to_zsubmodule(&zm, n) {
            Ok(z) => z,
            Err(e) => {
                tally.violations.push(format!("{at}: {e}"));
                continue;
            }
        };
        if fm.from_zsubmodule(&zs) != *n {
            tally
                .violations
                .push(format!("{at}: lift does not round-trip"));
            continue;
        }
        for &q in &primes {
            let engine = zm
                .colon_prime(&zs, &PrimeIdeal::Integer(q))
                .map(|c| fm.from_zsubmodule(&c));
            tally.record(
                "colon",
                match engine {
                    Ok(c) if c == fm.colon_integer(n, q) => Ok(true),
                    Ok(_) => Err(format!("{at}: (N : {q}) differs")),
                    Err(e) => Err(format!("{at}: {e}")),
                },
            );
        }
        if *n == whole {
            continue;
        }
        let ass = zm.ass(&zs).map_err(|e| e.to_string());
        tally.record(
            "Ass",
            match ass {
                Ok(a) if a == fm.brute_ass(n) => Ok(true),
                Ok(a) => Err(format!(
                    "{at}: engine {a:?} vs oracle {:?}",
                    fm.brute_ass(n)
                )),
                Err(e) => Err(format!("{at}: {e}")),
            },
        );
        let engine = factorization(&zm, &zs).map_err(|e| e.to_string());
        tally.record(
            "factorization",
            match (single_multiset(&mut en, n), engine) {
                (Ok(o), Ok(e)) if o == e => Ok(true),
                (Ok(o), Ok(e)) => Err(format!("{at}: oracle {o} vs engine {e}")),
                (Err(x), _) | (_, Err(x)) => Err(format!("{at}: {x}")),
            },
        );
    }
}

/// The same shape presented through a unimodular change of basis, so the
/// relation lattice is not diagonal; compared through the Smith embedding.
pub fn scrambled_agreement(shape: &[u64], seed: u64, tally: &mut Tally) {
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};
    use rpe_core::oracle::Embedding;

    let k = shape.len();
    let mut rng = StdRng::seed_from_u64(seed);
    // unimodular: product of random elementary row operations
    let mut u: Vec<Vec<BigInt>> = (0..k)
        .map(|i| (0..k).map(|j| BigInt::from(u8::from(i == j))).collect())
        .collect();
    for _ in 0..6 {
        if k < 2 {
            break;
        }
        let i = rng.gen_range(0..k);
        let j = (i + rng.gen_range(1..k)) % k;
        let c = BigInt::from(rng.gen_range(-3i64..=3));
        let row = u[j].clone();
        for (a, b) in u[i].iter_mut().zip(row) {
            *a += &c * b;
        }
    }
    let rels: Vec<Vec<BigInt>> = (0..k)
        .map(|i| u[i].iter().map(|x| x * BigInt::from(shape[i])).collect())
        .collect();
    let zm = ZModule::new(k, rels).expect("square relations");
    let emb = match Embedding::new(&zm, usize::MAX) {
        Ok(e) => e,
        Err(e) => {
            tally.violations.push(format!("{shape:?}: {e}"));
            return;
        }
    };
    let fm = &emb.module;
    let mut en = RpeEnumerator::new(fm);
    for _ in 0..8 {
        let gens: Vec<Vec<BigInt>> = (0..rng.gen_range(0..=2))
            .map(|_| {
                (0..k)
                    .map(|_| BigInt::from(rng.gen_range(-9i64..=9)))
                    .collect()
            })
            .collect();
        let zs = zm.submodule(gens).expect("matching rank");
        if zm.is_whole(&zs).expect("same ambient") {
            continue;
        }
        let image = emb.image(&zs);
        let at = format!("{shape:?} scrambled, N = {:?}", zs.basis());
        let ok = zm
            .ass(&zs)
            .map(|a| a == fm.brute_ass(&image))
            .unwrap_or(false)
            && matches!(
                (single_multiset(&mut en, &image), factorization(&zm, &zs)),
                (Ok(o), Ok(e)) if o == e
            );
        tally.record("scrambled", if ok { Ok(true) } else { Err(at) });
    }
}
