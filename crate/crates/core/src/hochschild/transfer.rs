use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Zero;

use crate::combinat::{multiset_permutations, Multiset, Subset};
use crate::complex::{variable_indices, BasisLabel};

/// `h(x_(τ)) = Σ_{π∈S_τ} x_(πτ)`: every distinct rearrangement of `τ` as a
/// variable tensor, coefficient 1.
pub fn htpy_h(tau: &Multiset) -> Vec<(BasisLabel, BigInt)> {
    multiset_permutations(tau).into_iter().map(|p| (BasisLabel::variable_tensor(&p), BigInt::from(1))).collect()
}

/// Precomposition with `h` on bar cochains: `φ_{πτ,σ} ↦ φ_{τ,σ}` for
/// variable tensors, `φ_{v,σ} ↦ 0` otherwise. Labels other than bar
/// cochains are ignored.
pub fn pushforward_cochain(cochain: &[(BasisLabel, BigInt)]) -> Vec<(BasisLabel, BigInt)> {
    let mut out: BTreeMap<(Multiset, Subset), BigInt> = BTreeMap::new();
    for (label, c) in cochain {
        let BasisLabel::BarCochain { tensor, sigma } = label else { continue };
        let Some(indices) = variable_indices(tensor) else { continue };
        *out.entry((Multiset::new(indices), *sigma)).or_insert_with(BigInt::zero) += c;
    }
    out.into_iter()
        .filter(|(_, c)| !c.is_zero())
        .map(|((tau, sigma), c)| (BasisLabel::CochainPair { tau, sigma }, c))
        .collect()
}
