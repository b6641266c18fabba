use std::collections::{BTreeSet, HashMap};

use crate::algebra::{prime_contains, FactorizationMultiset, PrimeIdeal};
use crate::error::{Error, Result};

use super::finite::{FiniteModule, FiniteSubmodule};

/// One RPE filtration `N ⊂[p_1] M_1 ⊂ … ⊂[p_n] M` of a finite module.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct FiniteFiltration {
    pub steps: Vec<(PrimeIdeal, FiniteSubmodule)>,
}

impl FiniteFiltration {
    pub fn primes(&self) -> Vec<PrimeIdeal> {
        self.steps.iter().map(|(p, _)| p.clone()).collect()
    }

    pub fn multiset(&self) -> FactorizationMultiset {
        self.steps.iter().map(|(p, _)| p.clone()).collect()
    }
}

/// Exhaustive RPE filtration search with memoized extensions, so that many
/// base submodules of one module can share work.
pub struct RpeEnumerator<'a> {
    module: &'a FiniteModule,
    extensions: HashMap<(FiniteSubmodule, PrimeIdeal), FiniteSubmodule>,
    filtrations: HashMap<FiniteSubmodule, Vec<FiniteFiltration>>,
}

impl<'a> RpeEnumerator<'a> {
    pub fn new(module: &'a FiniteModule) -> Self {
        RpeEnumerator {
            module,
            extensions: HashMap::new(),
            filtrations: HashMap::new(),
        }
    }

    pub fn module(&self) -> &FiniteModule {
        self.module
    }

    /// Maximal elements of `Ass(M/N)`.
    pub fn maximal_associated(&self, n: &FiniteSubmodule) -> Vec<PrimeIdeal> {
        let ass = self.module.brute_ass(n);
        ass.iter()
            .filter(|p| {
                !ass.iter()
                    .any(|q| q != *p && prime_contains(q, p).expect("integer primes"))
            })
            .cloned()
            .collect()
    }

    pub fn maximal_prime_extension(
        &mut self,
        n: &FiniteSubmodule,
        p: &PrimeIdeal,
    ) -> Result<FiniteSubmodule> {
        let key = (n.clone(), p.clone());
        if let Some(k) = self.extensions.get(&key) {
            return Ok(k.clone());
        }
        if !self.maximal_associated(n).contains(p) {
            return Err(Error::NotRegular {
                prime: p.to_string(),
                reason: "not maximal in Ass(M/N)".into(),
            });
        }
        let k = self.module.maximal_prime_extension(n, p)?;
        self.extensions.insert(key, k.clone());
        Ok(k)
    }

    /// Every RPE filtration of `M` over `N`, branching over all maximal
    /// associated primes at every step.
    pub fn all_rpe_filtrations(&mut self, n: &FiniteSubmodule) -> Result<Vec<FiniteFiltration>> {
        if let Some(f) = self.filtrations.get(n) {
            return Ok(f.clone());
        }
        let whole = self.module.whole();
        if *n == whole {
            return Ok(vec![FiniteFiltration { steps: Vec::new() }]);
        }
        let mut out = Vec::new();
        for p in self.maximal_associated(n) {
            let k = self.maximal_prime_extension(n, &p)?;
            for tail in self.all_rpe_filtrations(&k)? {
                let mut steps = vec![(p.clone(), k.clone())];
                steps.extend(tail.steps);
                out.push(FiniteFiltration { steps });
            }
        }
        if out.is_empty() {
            return Err(Error::Verification(
                "proper submodule with no associated prime".into(),
            ));
        }
        self.filtrations.insert(n.clone(), out.clone());
        Ok(out)
    }

    /// The distinct prime multisets over all RPE filtrations of `M` over `N`.
    pub fn multisets(&mut self, n: &FiniteSubmodule) -> Result<BTreeSet<Vec<(PrimeIdeal, usize)>>> {
        Ok(self
            .all_rpe_filtrations(n)?
            .iter()
            .map(|f| f.multiset().iter().map(|(p, k)| (p.clone(), k)).collect())
            .collect())
    }

    /// Whether `K` is a regular `p`-prime extension of `N` inside the
    /// ambient submodule `L` (with `N ⊂ K ⊆ L`): `N` is `p`-prime in `K`,
    /// `p` is maximal in `Ass(L/N)` and `K = {x ∈ L : p·x ⊆ N}`.
    pub fn is_regular_extension_within(
        &self,
        n: &FiniteSubmodule,
        k: &FiniteSubmodule,
        p: &PrimeIdeal,
        ambient: &FiniteSubmodule,
    ) -> Result<bool> {
        if !k.is_subset(ambient) || !n.is_subset(k) || n == k {
            return Ok(false);
        }
        if self.module.is_prime_submodule(n, k)?.as_ref() != Some(p) {
            return Ok(false);
        }
        // Ass(L/N) computed inside L
        let ass: BTreeSet<PrimeIdeal> = ambient
            .elements()
            .filter(|&x| !n.contains(x))
            .map(|x| self.module.order_mod(x, n))
            .filter(|&a| crate::algebra::is_prime_u64(a))
            .map(PrimeIdeal::Integer)
            .collect();
        if !ass.contains(p) {
            return Ok(false);
        }
        for q in &ass {
            if q != p && prime_contains(q, p)? {
                return Ok(false);
            }
        }
        let q = p
            .as_integer()
            .ok_or(Error::BackendMismatch("integer", p.backend()))?;
        let colon = self.module.colon_integer(n, q).intersect(ambient);
        Ok(colon == *k)
    }
}

impl FiniteModule {
    pub fn all_rpe_filtrations(&self, n: &FiniteSubmodule) -> Result<Vec<FiniteFiltration>> {
        RpeEnumerator::new(self).all_rpe_filtrations(n)
    }
}
