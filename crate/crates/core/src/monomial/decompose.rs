use std::collections::BTreeSet;

use crate::algebra::MonomialPrime;
use crate::error::{Error, Result};

use super::ideal::MonomialIdeal;
use super::term::Monomial;

/// Irredundant decomposition of a proper nonzero monomial ideal into
/// irreducible ideals (ideals generated by pure powers of variables).
///
/// Splits the first mixed generator `m = u·v`, with `u` the pure power of
/// its first variable, via `I = (I + (u)) ∩ (I + (v))`.
pub fn irreducible_decomposition(ideal: &MonomialIdeal) -> Result<Vec<MonomialIdeal>> {
    if ideal.is_zero() {
        return Err(Error::InvalidInput(
            "cannot decompose the zero ideal".into(),
        ));
    }
    if ideal.is_whole() {
        return Err(Error::NotProper);
    }
    let mut parts = Vec::new();
    split(ideal, &mut parts);
    parts.sort_by(|a, b| a.gens().cmp(b.gens()));
    parts.dedup();

    // drop components that contain the intersection of the others
    let mut i = 0;
    while i < parts.len() {
        let rest = parts
            .iter()
            .enumerate()
            .filter(|&(j, _)| j != i)
            .fold(MonomialIdeal::whole(ideal.nvars()), |acc, (_, q)| {
                acc.intersect(q)
            });
        if parts.len() > 1 && rest.is_subset(&parts[i]) {
            parts.remove(i);
        } else {
            i += 1;
        }
    }
    parts.sort_by(|a, b| {
        support_prime(a)
            .cmp(&support_prime(b))
            .then_with(|| a.gens().cmp(b.gens()))
    });
    Ok(parts)
}

fn split(ideal: &MonomialIdeal, out: &mut Vec<MonomialIdeal>) {
    let Some(mixed) = ideal.gens().iter().find(|g| g.support_size() >= 2) else {
        out.push(ideal.clone());
        return;
    };
    let nvars = ideal.nvars();
    let first = mixed.support()[0];
    let u = Monomial::var_power(nvars, first, mixed.exponents()[first]);
    let v = mixed.div(&u);
    split(&ideal.sum(&MonomialIdeal::from_gens(nvars, vec![u])), out);
    split(&ideal.sum(&MonomialIdeal::from_gens(nvars, vec![v])), out);
}

/// The prime generated by the variables appearing in an irreducible ideal.
fn support_prime(irreducible: &MonomialIdeal) -> MonomialPrime {
    let vars: BTreeSet<usize> = irreducible
        .gens()
        .iter()
        .flat_map(|g| g.support())
        .collect();
    MonomialPrime::new(vars.into_iter().collect()).expect("sorted set")
}

/// Searches for a monomial `m` with `(I : m) = p`.
///
/// Exponents of variables outside `p` are fixed at the generator maximum
/// (raising them cannot change a prime colon), the others range over
/// `0..=max`.
pub fn associated_witness(ideal: &MonomialIdeal, p: &MonomialPrime) -> Option<Monomial> {
    let nvars = ideal.nvars();
    let max = ideal.max_exponents();
    let target = MonomialIdeal::from_prime(nvars, p);
    let vars = p.vars();
    let mut exps = max.clone();
    for &i in vars {
        exps[i] = 0;
    }
    loop {
        let m = Monomial::new(exps.clone());
        if ideal.colon_mono(&m) == target {
            return Some(m);
        }
        // odometer over the coordinates in p
        let mut k = 0;
        loop {
            if k == vars.len() {
                return None;
            }
            let i = vars[k];
            if exps[i] < max[i] {
                exps[i] += 1;
                break;
            }
            exps[i] = 0;
            k += 1;
        }
    }
}

/// `Ass(R/I)` for a proper monomial ideal, from the supports of the
/// irredundant irreducible components, each confirmed by a witness.
pub fn ass_ideal(ideal: &MonomialIdeal) -> Result<BTreeSet<MonomialPrime>> {
    if ideal.is_whole() {
        return Err(Error::NotProper);
    }
    if ideal.is_zero() {
        return Ok(BTreeSet::from([MonomialPrime::zero()]));
    }
    let mut out = BTreeSet::new();
    for q in irreducible_decomposition(ideal)? {
        let p = support_prime(&q);
        if associated_witness(ideal, &p).is_none() {
            return Err(Error::Verification(format!(
                "component support {:?} of {:?} has no witness monomial",
                p.vars(),
                ideal.gens()
            )));
        }
        out.insert(p);
    }
    Ok(out)
}
