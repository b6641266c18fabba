//! Backend-generic RPE filtrations, factorizations and the executable
//! intersection/annihilator verdicts.

mod filtration;
mod theorems;

pub use filtration::{
    factorization, interchange, maximal_primes, regular_extension, reorder, rpe_filtration,
    rpe_filtration_with, verify_filtration, FiltrationCheck, RpeFiltration, RpeStep, TieBreak,
};
pub use theorems::{
    annihilator_compare, colon_power_check, factor_intersection, product_escape_check,
    AnnihilatorVerdict, ColonPowerVerdict, EscapeReport, IntersectionVerdict,
};
