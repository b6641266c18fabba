use std::collections::BTreeSet;

use crate::algebra::{AlgebraBackend, MonomialPrime, PrimeIdeal};
use crate::error::{Error, Result};

use super::decompose::ass_ideal;
use super::ideal::MonomialIdeal;

/// `N = I_1·e_1 ⊕ … ⊕ I_k·e_k ⊆ R^k`. Rank one recovers ideals.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialSubmodule {
    components: Vec<MonomialIdeal>,
}

impl MonomialSubmodule {
    pub fn new(components: Vec<MonomialIdeal>) -> Result<Self> {
        let Some(first) = components.first() else {
            return Err(Error::InvalidInput(
                "a submodule needs at least one component".into(),
            ));
        };
        let nvars = first.nvars();
        if components.iter().any(|c| c.nvars() != nvars) {
            return Err(Error::InvalidInput(
                "components live in different rings".into(),
            ));
        }
        Ok(MonomialSubmodule { components })
    }

    pub fn from_ideal(ideal: MonomialIdeal) -> Self {
        MonomialSubmodule {
            components: vec![ideal],
        }
    }

    pub fn components(&self) -> &[MonomialIdeal] {
        &self.components
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn nvars(&self) -> usize {
        self.components[0].nvars()
    }

    /// The single component of a rank-one submodule.
    pub fn as_ideal(&self) -> Option<&MonomialIdeal> {
        match self.components.as_slice() {
            [i] => Some(i),
            _ => None,
        }
    }

    fn map(&self, f: impl Fn(&MonomialIdeal) -> MonomialIdeal) -> Self {
        MonomialSubmodule {
            components: self.components.iter().map(f).collect(),
        }
    }

    fn zip(
        &self,
        other: &Self,
        f: impl Fn(&MonomialIdeal, &MonomialIdeal) -> MonomialIdeal,
    ) -> Self {
        MonomialSubmodule {
            components: self
                .components
                .iter()
                .zip(&other.components)
                .map(|(a, b)| f(a, b))
                .collect(),
        }
    }
}

/// The free module `R^rank` over `k[x_0, …, x_{nvars-1}]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct MonomialModule {
    pub nvars: usize,
    pub rank: usize,
}

impl MonomialModule {
    pub fn new(nvars: usize, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidInput(
                "free module rank must be positive".into(),
            ));
        }
        Ok(MonomialModule { nvars, rank })
    }

    fn check(&self, n: &MonomialSubmodule) -> Result<()> {
        if n.rank() != self.rank || n.nvars() != self.nvars {
            return Err(Error::AmbientMismatch(format!(
                "submodule of rank {} over {} variables used in R^{} over {} variables",
                n.rank(),
                n.nvars(),
                self.rank,
                self.nvars
            )));
        }
        Ok(())
    }

    fn monomial_prime<'a>(&self, p: &'a PrimeIdeal) -> Result<&'a MonomialPrime> {
        let m = p
            .as_monomial()
            .ok_or(Error::BackendMismatch("monomial", p.backend()))?;
        if m.vars().iter().any(|&v| v >= self.nvars) {
            return Err(Error::InvalidPrime(format!(
                "variable index out of range for a ring with {} variables",
                self.nvars
            )));
        }
        Ok(m)
    }
}

impl AlgebraBackend for MonomialModule {
    type Sub = MonomialSubmodule;

    fn whole(&self) -> MonomialSubmodule {
        MonomialSubmodule {
            components: vec![MonomialIdeal::whole(self.nvars); self.rank],
        }
    }

    fn ring(&self) -> Self {
        MonomialModule {
            nvars: self.nvars,
            rank: 1,
        }
    }

    fn is_ring(&self) -> bool {
        self.rank == 1
    }

    fn ass(&self, n: &MonomialSubmodule) -> Result<BTreeSet<PrimeIdeal>> {
        self.check(n)?;
        let mut out = BTreeSet::new();
        let mut proper = false;
        for c in n.components.iter().filter(|c| !c.is_whole()) {
            proper = true;
            out.extend(ass_ideal(c)?.into_iter().map(PrimeIdeal::Monomial));
        }
        if !proper {
            return Err(Error::NotProper);
        }
        Ok(out)
    }

    fn colon_prime(&self, n: &MonomialSubmodule, p: &PrimeIdeal) -> Result<MonomialSubmodule> {
        self.check(n)?;
        let p = self.monomial_prime(p)?;
        Ok(n.map(|c| c.colon_prime(p)))
    }

    fn colon_submodule(
        &self,
        n: &MonomialSubmodule,
        k: &MonomialSubmodule,
    ) -> Result<MonomialSubmodule> {
        self.check(n)?;
        self.check(k)?;
        let ideal = n
            .components
            .iter()
            .zip(&k.components)
            .fold(MonomialIdeal::whole(self.nvars), |acc, (i, j)| {
                acc.intersect(&i.colon_ideal(j))
            });
        Ok(MonomialSubmodule::from_ideal(ideal))
    }

    fn annihilator(&self, n: &MonomialSubmodule) -> Result<MonomialSubmodule> {
        self.check(n)?;
        let ideal = n
            .components
            .iter()
            .fold(MonomialIdeal::whole(self.nvars), |acc, c| acc.intersect(c));
        Ok(MonomialSubmodule::from_ideal(ideal))
    }

    fn intersect(&self, n: &MonomialSubmodule, k: &MonomialSubmodule) -> Result<MonomialSubmodule> {
        self.check(n)?;
        self.check(k)?;
        Ok(n.zip(k, |a, b| a.intersect(b)))
    }

    fn leq(&self, n: &MonomialSubmodule, k: &MonomialSubmodule) -> Result<bool> {
        self.check(n)?;
        self.check(k)?;
        Ok(n.components
            .iter()
            .zip(&k.components)
            .all(|(a, b)| a.is_subset(b)))
    }

    fn eq(&self, n: &MonomialSubmodule, k: &MonomialSubmodule) -> Result<bool> {
        self.check(n)?;
        self.check(k)?;
        Ok(n == k)
    }

    fn is_whole(&self, n: &MonomialSubmodule) -> Result<bool> {
        self.check(n)?;
        Ok(n.components.iter().all(MonomialIdeal::is_whole))
    }

    fn scale(&self, p: &PrimeIdeal, n: &MonomialSubmodule) -> Result<MonomialSubmodule> {
        self.check(n)?;
        let p = MonomialIdeal::from_prime(self.nvars, self.monomial_prime(p)?);
        Ok(n.map(|c| c.product(&p)))
    }

    fn size_measure(&self, n: &MonomialSubmodule) -> usize {
        let per_component: usize = n
            .components
            .iter()
            .map(|c| c.max_exponents().iter().sum::<u32>() as usize * self.nvars.max(1) + 1)
            .sum();
        per_component + self.nvars
    }

    fn render(&self, n: &MonomialSubmodule, names: &[String]) -> String {
        if self.rank == 1 {
            return n.components[0].render(names);
        }
        if n.components.iter().all(MonomialIdeal::is_whole) {
            return format!("R^{}", self.rank);
        }
        let parts: Vec<String> = n.components.iter().map(|c| c.render(names)).collect();
        format!("[{}]", parts.join(", "))
    }
}
