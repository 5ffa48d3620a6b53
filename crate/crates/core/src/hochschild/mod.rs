//! Complexes computing the Hochschild (co)homology of `A = Λ[x1..xn]` with
//! coefficients in `A`: the normalized bar construction (the oracle), the
//! multiset complexes obtained from it by Morse reduction, their matchings,
//! closed forms, and the comparison maps.
//!
//! Everything is built over `Z`; other coefficient rings enter through
//! `BasedComplex::homology`.

mod bar;
mod closed_form;
mod functor;
mod matching;
mod reduced;
mod transfer;

pub use bar::{
    bar_boundary, bar_tensor_count, bar_tensors, build_bar_hochschild_chain, build_bar_hochschild_cochain,
    build_bar_resolution, tensor_index,
};
pub use closed_form::{closed_form_cohomology, closed_form_homology, ClosedForm};
pub use functor::{hom_functor, tensor_functor};
pub use matching::{
    bar_matching, classify_bar_tensor, koszul_chain_move, koszul_cochain_partner, koszul_matching_chain,
    koszul_matching_cochain, BarCell, KoszulMove, LazyBarGraph,
};
pub use reduced::{
    build_reduced_chain, build_reduced_cochain, build_reduced_resolution, halve, reduced_cochain_coboundary,
    split_parity, ParitySplit,
};
pub use transfer::{htpy_h, pushforward_cochain};

use crate::error::{Error, Result};

/// Default bound on the number of basis elements per degree of an oracle
/// complex.
pub const DEFAULT_SIZE_LIMIT: usize = 2_000_000;

/// Environment variable overriding [`DEFAULT_SIZE_LIMIT`].
pub const SIZE_LIMIT_ENV: &str = "HOCHSCHILD_SIZE_LIMIT";

/// The size limit from the environment, or the default.
pub fn size_limit() -> usize {
    std::env::var(SIZE_LIMIT_ENV).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_SIZE_LIMIT)
}

pub(crate) fn check_size(degree: usize, count: u128, limit: usize) -> Result<()> {
    if count > limit as u128 {
        return Err(Error::SizeLimit { degree, count, limit });
    }
    Ok(())
}

pub(crate) fn check_generators(n: usize) -> Result<()> {
    if n == 0 || n > crate::combinat::MAX_GENERATORS {
        return Err(Error::InvalidInput(format!("number of generators must be in 1..={}, got {n}", crate::combinat::MAX_GENERATORS)));
    }
    Ok(())
}
