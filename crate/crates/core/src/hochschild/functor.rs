use num_bigint::BigInt;

use crate::algebra::EnvAlgebra;
use crate::combinat::Subset;
use crate::complex::{BasedComplex, BasisLabel, Orientation};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::ring::Integers;

fn chain_label(generator: &BasisLabel, sigma: Subset) -> Result<BasisLabel> {
    match generator {
        BasisLabel::Bar(t) => Ok(BasisLabel::BarChain { sigma, tensor: t.clone() }),
        BasisLabel::Generator(tau) => Ok(BasisLabel::ChainPair { sigma, tau: tau.clone() }),
        other => Err(Error::MixedLabels(other.to_string())),
    }
}

fn cochain_label(generator: &BasisLabel, sigma: Subset) -> Result<BasisLabel> {
    match generator {
        BasisLabel::Bar(t) => Ok(BasisLabel::BarCochain { tensor: t.clone(), sigma }),
        BasisLabel::Generator(tau) => Ok(BasisLabel::CochainPair { tau: tau.clone(), sigma }),
        other => Err(Error::MixedLabels(other.to_string())),
    }
}

fn expanded_bases(
    res: &BasedComplex<EnvAlgebra<Integers>>,
    label: impl Fn(&BasisLabel, Subset) -> Result<BasisLabel>,
) -> Result<Vec<Vec<BasisLabel>>> {
    let n = res.ring().generators();
    (0..res.degrees())
        .map(|k| res.basis(k).iter().flat_map(|g| Subset::all(n).map(|s| label(g, s))).collect())
        .collect()
}

/// `A ⊗_{A^e} P` for a free resolution `P`: basis `x_σ ⊗ g`, ordered by
/// generator then `σ`; `x_σ ⊗ u·g = (x_σ · u) ⊗ g` with `a·(α⊗β) = β a α`.
pub fn tensor_functor(res: &BasedComplex<EnvAlgebra<Integers>>) -> Result<BasedComplex<Integers>> {
    if res.orientation() != Orientation::Chain {
        return Err(Error::InvalidInput("tensor functor expects a resolution (chain complex)".into()));
    }
    let env = res.ring();
    let ext = env.exterior();
    let width = 1usize << env.generators();
    let bases = expanded_bases(res, chain_label)?;
    let mut lowering = Vec::new();
    for k in 1..res.degrees() {
        let d = res.differential(k).expect("chain degrees are complete");
        let mut triplets = Vec::new();
        for (target, source, u) in d.entries() {
            for sigma in Subset::all(env.generators()) {
                let value = env.act_tensor(&ext.basis(sigma), u);
                for (rho, c) in value.terms() {
                    triplets.push((target * width + rho.mask() as usize, source * width + sigma.mask() as usize, c.clone()));
                }
            }
        }
        lowering.push(SparseMatrix::<BigInt>::from_triplets(&Integers, bases[k - 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::chain(Integers, bases, lowering)
}

/// `Hom_{A^e}(P, A)`: basis `φ_{g,σ}` (sending `g` to `x_σ`), coboundary
/// `φ ↦ φ ∘ d`, evaluated with `(α⊗β)·a = α a β`.
pub fn hom_functor(res: &BasedComplex<EnvAlgebra<Integers>>) -> Result<BasedComplex<Integers>> {
    if res.orientation() != Orientation::Chain {
        return Err(Error::InvalidInput("Hom functor expects a resolution (chain complex)".into()));
    }
    let env = res.ring();
    let ext = env.exterior();
    let width = 1usize << env.generators();
    let bases = expanded_bases(res, cochain_label)?;
    let mut raising = Vec::new();
    for k in 0..res.degrees().saturating_sub(1) {
        let d = res.differential(k + 1).expect("chain degrees are complete");
        let mut triplets = Vec::new();
        // entry u at (g in degree k, g' in degree k+1): φ_{g,σ}(d g') gets u·x_σ
        for (g, g_up, u) in d.entries() {
            for sigma in Subset::all(env.generators()) {
                let value = env.act(u, &ext.basis(sigma));
                for (rho, c) in value.terms() {
                    triplets.push((g_up * width + rho.mask() as usize, g * width + sigma.mask() as usize, c.clone()));
                }
            }
        }
        raising.push(SparseMatrix::<BigInt>::from_triplets(&Integers, bases[k + 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::cochain(Integers, bases, raising)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{build_bar_hochschild_chain, build_bar_hochschild_cochain, build_bar_resolution, DEFAULT_SIZE_LIMIT};

    #[test]
    fn functors_reproduce_the_direct_formulas() {
        for n in 1..=2 {
            let res = build_bar_resolution(n, 3, DEFAULT_SIZE_LIMIT).unwrap();
            let chain = build_bar_hochschild_chain(n, 3, DEFAULT_SIZE_LIMIT).unwrap();
            let cochain = build_bar_hochschild_cochain(n, 3, DEFAULT_SIZE_LIMIT).unwrap();
            let via_tensor = tensor_functor(&res).unwrap();
            let via_hom = hom_functor(&res).unwrap();
            for k in 0..=3 {
                assert_eq!(via_tensor.basis(k), chain.basis(k));
                assert_eq!(via_tensor.differential(k), chain.differential(k), "chain n={n} k={k}");
                assert_eq!(via_hom.basis(k), cochain.basis(k));
                assert_eq!(via_hom.differential(k), cochain.differential(k), "cochain n={n} k={k}");
            }
        }
    }
}
