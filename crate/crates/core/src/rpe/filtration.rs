use std::collections::BTreeSet;

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

use crate::algebra::{prime_contains, AlgebraBackend, FactorizationMultiset, PrimeIdeal};
use crate::error::{Error, Result};

#[derive(Clone, PartialEq, Debug)]
pub struct RpeStep<S> {
    pub prime: PrimeIdeal,
    /// `M_i`, the regular `p_i`-prime extension of the previous module.
    pub module: S,
}

/// `N = M_0 ⊂[p_1] M_1 ⊂ … ⊂[p_n] M_n = M`.
#[derive(Clone, PartialEq, Debug)]
pub struct RpeFiltration<S> {
    pub base: S,
    pub steps: Vec<RpeStep<S>>,
}

impl<S> RpeFiltration<S> {
    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn primes(&self) -> Vec<PrimeIdeal> {
        self.steps.iter().map(|s| s.prime.clone()).collect()
    }

    pub fn multiset(&self) -> FactorizationMultiset {
        self.steps.iter().map(|s| s.prime.clone()).collect()
    }

    /// `M_i` for `0 ≤ i ≤ n`, with `M_0 = N`.
    pub fn module(&self, i: usize) -> &S {
        if i == 0 {
            &self.base
        } else {
            &self.steps[i - 1].module
        }
    }

    pub fn render<B: AlgebraBackend<Sub = S>>(&self, backend: &B, names: &[String]) -> String {
        let mut out = backend.render(&self.base, names);
        for step in &self.steps {
            out.push_str(&format!(
                " ⊂[{}] {}",
                step.prime.render(names),
                backend.render(&step.module, names)
            ));
        }
        out
    }
}

/// How to choose among several maximal associated primes.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TieBreak {
    /// The first maximal prime in canonical display order.
    Canonical,
    /// A uniformly random maximal prime, from a seeded generator.
    Random(u64),
}

/// Maximal elements of a set of primes, in canonical order.
pub fn maximal_primes(primes: &BTreeSet<PrimeIdeal>) -> Result<Vec<PrimeIdeal>> {
    let mut out = Vec::new();
    for p in primes {
        let mut maximal = true;
        for q in primes {
            if q != p && prime_contains(q, p)? {
                maximal = false;
                break;
            }
        }
        if maximal {
            out.push(p.clone());
        }
    }
    Ok(out)
}

/// `(N : p)`, the regular `p`-prime extension of `N`; `p` must be maximal
/// in `Ass(M/N)`.
pub fn regular_extension<B: AlgebraBackend>(
    backend: &B,
    n: &B::Sub,
    p: &PrimeIdeal,
) -> Result<B::Sub> {
    let ass = backend.ass(n)?;
    if !ass.contains(p) {
        return Err(Error::NotRegular {
            prime: p.to_string(),
            reason: "not an associated prime of M/N".into(),
        });
    }
    if !maximal_primes(&ass)?.contains(p) {
        return Err(Error::NotRegular {
            prime: p.to_string(),
            reason: "strictly contained in another associated prime".into(),
        });
    }
    let k = backend.colon_prime(n, p)?;
    if backend.eq(&k, n)? {
        return Err(Error::Verification(format!("(N : {p}) did not grow N")));
    }
    Ok(k)
}

pub fn rpe_filtration<B: AlgebraBackend>(backend: &B, n: &B::Sub) -> Result<RpeFiltration<B::Sub>> {
    rpe_filtration_with(backend, n, TieBreak::Canonical)
}

/// Builds an RPE filtration by repeatedly taking the regular extension by a
/// maximal associated prime until the ambient module is reached.
pub fn rpe_filtration_with<B: AlgebraBackend>(
    backend: &B,
    n: &B::Sub,
    tie_break: TieBreak,
) -> Result<RpeFiltration<B::Sub>> {
    if backend.is_whole(n)? {
        return Err(Error::NotProper);
    }
    let cap = 10 * backend.size_measure(n).max(1);
    let mut rng = match tie_break {
        TieBreak::Canonical => None,
        TieBreak::Random(seed) => Some(StdRng::seed_from_u64(seed)),
    };
    let mut current = n.clone();
    let mut steps = Vec::new();
    while !backend.is_whole(&current)? {
        if steps.len() >= cap {
            return Err(Error::StepCapExceeded(cap));
        }
        let candidates = maximal_primes(&backend.ass(&current)?)?;
        let prime = match rng.as_mut() {
            None => candidates[0].clone(),
            Some(rng) => candidates[rng.gen_range(0..candidates.len())].clone(),
        };
        let next = regular_extension(backend, &current, &prime)?;
        if !backend.leq(&current, &next)? {
            return Err(Error::Verification(
                "regular extension does not contain its base".into(),
            ));
        }
        steps.push(RpeStep {
            prime,
            module: next.clone(),
        });
        current = next;
    }
    Ok(RpeFiltration {
        base: n.clone(),
        steps,
    })
}

/// `P_M(N)`, the primes of any RPE filtration of `M` over `N`.
pub fn factorization<B: AlgebraBackend>(backend: &B, n: &B::Sub) -> Result<FactorizationMultiset> {
    Ok(rpe_filtration(backend, n)?.multiset())
}

#[derive(Clone, PartialEq, Eq, Debug)]
pub enum FiltrationCheck {
    Valid,
    /// First failing step, 1-based, with a diagnostic.
    Invalid {
        step: usize,
        reason: String,
    },
}

impl FiltrationCheck {
    pub fn is_valid(&self) -> bool {
        matches!(self, FiltrationCheck::Valid)
    }
}

/// Checks every regularity condition of a claimed RPE filtration: each
/// `p_i` lies in and is maximal in `Ass(M/M_{i-1})`, which equals
/// `{p_i, …, p_n}`, each `M_i = (M_{i-1} : p_i)`, and the chain ends at `M`.
pub fn verify_filtration<B: AlgebraBackend>(
    backend: &B,
    f: &RpeFiltration<B::Sub>,
) -> Result<FiltrationCheck> {
    let invalid = |step: usize, reason: String| Ok(FiltrationCheck::Invalid { step, reason });
    if f.steps.is_empty() {
        return if backend.is_whole(&f.base)? {
            Ok(FiltrationCheck::Valid)
        } else {
            invalid(0, "empty filtration over a proper submodule".into())
        };
    }
    for (i, step) in f.steps.iter().enumerate() {
        let prev = f.module(i);
        if backend.is_whole(prev)? {
            return invalid(i + 1, "extends the whole module".into());
        }
        let ass = backend.ass(prev)?;
        let remaining: BTreeSet<PrimeIdeal> =
            f.steps[i..].iter().map(|s| s.prime.clone()).collect();
        if !ass.contains(&step.prime) {
            return invalid(
                i + 1,
                format!("{} is not associated to M/M_{}", step.prime, i),
            );
        }
        if !maximal_primes(&ass)?.contains(&step.prime) {
            return invalid(
                i + 1,
                format!("{} is not maximal in Ass(M/M_{})", step.prime, i),
            );
        }
        if ass != remaining {
            return invalid(
                i + 1,
                format!("Ass(M/M_{i}) differs from the remaining primes"),
            );
        }
        let colon = backend.colon_prime(prev, &step.prime)?;
        if !backend.eq(&colon, &step.module)? {
            return invalid(
                i + 1,
                format!("M_{} is not (M_{} : {})", i + 1, i, step.prime),
            );
        }
    }
    if !backend.is_whole(&f.steps.last().expect("nonempty").module)? {
        return invalid(f.steps.len(), "chain does not end at M".into());
    }
    Ok(FiltrationCheck::Valid)
}

/// Swaps steps `i` and `i + 1` (0-based): the new intermediate module is
/// `(M_{i} : p_{i+2})` in 1-based numbering of the original primes.
///
/// Requires the later prime not to be contained in the earlier one; equal
/// primes give back the same filtration.
pub fn interchange<B: AlgebraBackend>(
    backend: &B,
    f: &RpeFiltration<B::Sub>,
    i: usize,
) -> Result<RpeFiltration<B::Sub>> {
    if i + 1 >= f.steps.len() {
        return Err(Error::InterchangePrecondition(format!(
            "step {i} has no successor in a filtration of length {}",
            f.steps.len()
        )));
    }
    let first = &f.steps[i].prime;
    let second = &f.steps[i + 1].prime;
    if first == second {
        return Ok(f.clone());
    }
    if prime_contains(first, second)? {
        return Err(Error::InterchangePrecondition(format!(
            "{second} ⊆ {first}"
        )));
    }
    let k = backend.colon_prime(f.module(i), second)?;
    let mut out = f.clone();
    out.steps[i] = RpeStep {
        prime: second.clone(),
        module: k,
    };
    out.steps[i + 1].prime = first.clone();
    match verify_filtration(backend, &out)? {
        FiltrationCheck::Valid => Ok(out),
        FiltrationCheck::Invalid { step, reason } => Err(Error::Verification(format!(
            "interchanged filtration fails at step {step}: {reason}"
        ))),
    }
}

/// Builds the filtration of `N` whose primes appear in `order`, by iterated
/// colons `M_i' = (M_{i-1}' : p_i')`.
///
/// `order` must be a permutation of `P_M(N)` in which no prime is strictly
/// contained in a later one.
pub fn reorder<B: AlgebraBackend>(
    backend: &B,
    n: &B::Sub,
    order: &[PrimeIdeal],
) -> Result<RpeFiltration<B::Sub>> {
    let target: FactorizationMultiset = order.iter().cloned().collect();
    let actual = factorization(backend, n)?;
    if target != actual {
        return Err(Error::InadmissibleOrder(format!(
            "{target} is not a permutation of the factorization {actual}"
        )));
    }
    for (i, p) in order.iter().enumerate() {
        for q in &order[i + 1..] {
            if p != q && prime_contains(q, p)? {
                return Err(Error::InadmissibleOrder(format!(
                    "{p} ⊂ {q} but {p} comes first"
                )));
            }
        }
    }
    let mut current = n.clone();
    let mut steps = Vec::with_capacity(order.len());
    for (i, p) in order.iter().enumerate() {
        let next = backend.colon_prime(&current, p)?;
        if backend.eq(&next, &current)? {
            return Err(Error::NotRealizable(format!(
                "step {} by {p} does not grow",
                i + 1
            )));
        }
        steps.push(RpeStep {
            prime: p.clone(),
            module: next.clone(),
        });
        current = next;
    }
    let f = RpeFiltration {
        base: n.clone(),
        steps,
    };
    match verify_filtration(backend, &f)? {
        FiltrationCheck::Valid => Ok(f),
        FiltrationCheck::Invalid { step, reason } => {
            Err(Error::NotRealizable(format!("step {step}: {reason}")))
        }
    }
}
