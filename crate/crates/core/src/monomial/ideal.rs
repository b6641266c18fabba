use crate::algebra::MonomialPrime;
use crate::error::{Error, Result};

use super::term::Monomial;

/// A monomial ideal stored by its unique minimal generating set.
///
/// The zero ideal has no generators; the whole ring is generated by `1`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MonomialIdeal {
    nvars: usize,
    gens: Vec<Monomial>,
}

/// Reduces a generator list to the antichain of divisibility-minimal
/// elements, in canonical order.
fn minimalize(mut gens: Vec<Monomial>) -> Vec<Monomial> {
    // by degree first, so a divisor always comes before its multiples
    gens.sort_by(|a, b| a.degree().cmp(&b.degree()).then_with(|| a.cmp(b)));
    gens.dedup();
    let mut kept: Vec<Monomial> = Vec::with_capacity(gens.len());
    for g in gens {
        if !kept.iter().any(|k| k.divides(&g)) {
            kept.push(g);
        }
    }
    kept.sort();
    kept
}

impl MonomialIdeal {
    pub fn new(nvars: usize, gens: Vec<Monomial>) -> Result<Self> {
        if let Some(bad) = gens.iter().find(|g| g.nvars() != nvars) {
            return Err(Error::InvalidInput(format!(
                "monomial {:?} has {} exponents, ring has {} variables",
                bad.exponents(),
                bad.nvars(),
                nvars
            )));
        }
        Ok(Self::from_gens(nvars, gens))
    }

    pub(crate) fn from_gens(nvars: usize, gens: Vec<Monomial>) -> Self {
        MonomialIdeal {
            nvars,
            gens: minimalize(gens),
        }
    }

    pub fn zero(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: Vec::new(),
        }
    }

    pub fn whole(nvars: usize) -> Self {
        MonomialIdeal {
            nvars,
            gens: vec![Monomial::one(nvars)],
        }
    }

    /// The ideal generated by the variables of `p`.
    pub fn from_prime(nvars: usize, p: &MonomialPrime) -> Self {
        Self::from_gens(
            nvars,
            p.vars().iter().map(|&i| Monomial::var(nvars, i)).collect(),
        )
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn gens(&self) -> &[Monomial] {
        &self.gens
    }

    pub fn is_zero(&self) -> bool {
        self.gens.is_empty()
    }

    pub fn is_whole(&self) -> bool {
        self.gens.len() == 1 && self.gens[0].is_one()
    }

    /// If the ideal is generated by variables, the corresponding prime.
    pub fn as_prime(&self) -> Option<MonomialPrime> {
        if self.is_whole() {
            return None;
        }
        let mut vars = Vec::with_capacity(self.gens.len());
        for g in &self.gens {
            if g.degree() != 1 {
                return None;
            }
            vars.push(g.support()[0]);
        }
        vars.sort_unstable();
        MonomialPrime::new(vars).ok()
    }

    pub fn contains(&self, m: &Monomial) -> bool {
        self.gens.iter().any(|g| g.divides(m))
    }

    /// `self ⊆ other`.
    pub fn is_subset(&self, other: &MonomialIdeal) -> bool {
        self.gens.iter().all(|g| other.contains(g))
    }

    pub fn intersect(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.lcm(b));
            }
        }
        Self::from_gens(self.nvars, gens)
    }

    pub fn sum(&self, other: &MonomialIdeal) -> MonomialIdeal {
        Self::from_gens(
            self.nvars,
            self.gens.iter().chain(&other.gens).cloned().collect(),
        )
    }

    pub fn product(&self, other: &MonomialIdeal) -> MonomialIdeal {
        let mut gens = Vec::with_capacity(self.gens.len() * other.gens.len());
        for a in &self.gens {
            for b in &other.gens {
                gens.push(a.mul(b));
            }
        }
        Self::from_gens(self.nvars, gens)
    }

    /// `(I : u)` for a monomial `u`.
    pub fn colon_mono(&self, u: &Monomial) -> MonomialIdeal {
        Self::from_gens(
            self.nvars,
            self.gens.iter().map(|g| g.quotient_by(u)).collect(),
        )
    }

    /// `(I : J)`; the colon by the zero ideal is the whole ring.
    pub fn colon_ideal(&self, other: &MonomialIdeal) -> MonomialIdeal {
        other
            .gens
            .iter()
            .fold(MonomialIdeal::whole(self.nvars), |acc, g| {
                acc.intersect(&self.colon_mono(g))
            })
    }

    /// `(I : p)`, the intersection of `(I : x_i)` over the variables of `p`.
    pub fn colon_prime(&self, p: &MonomialPrime) -> MonomialIdeal {
        p.vars()
            .iter()
            .fold(MonomialIdeal::whole(self.nvars), |acc, &i| {
                acc.intersect(&self.colon_mono(&Monomial::var(self.nvars, i)))
            })
    }

    /// Exponentwise maximum over the generators.
    pub fn max_exponents(&self) -> Vec<u32> {
        let mut out = vec![0; self.nvars];
        for g in &self.gens {
            for (o, &e) in out.iter_mut().zip(g.exponents()) {
                *o = (*o).max(e);
            }
        }
        out
    }

    pub fn render(&self, names: &[String]) -> String {
        if self.is_zero() {
            return "(0)".to_string();
        }
        if self.is_whole() {
            return "R".to_string();
        }
        let parts: Vec<String> = self.gens.iter().map(|g| g.render(names)).collect();
        format!("({})", parts.join(","))
    }
}
