use num_bigint::BigInt;
use num_integer::Integer;

use super::check_generators;
use crate::algebra::EnvAlgebra;
use crate::combinat::{enumerate_multisets, left_mul_sign, right_mul_sign, Multiset, Subset};
use crate::complex::{BasedComplex, BasisLabel, Orientation};
use crate::error::{Error, Result};
use crate::linalg::SparseMatrix;
use crate::ring::{Integers, Ring};

fn multiset_positions(n: usize, k: usize) -> (Vec<Multiset>, std::collections::HashMap<Multiset, usize>) {
    let list = enumerate_multisets(n, k);
    let index = list.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    (list, index)
}

/// The minimal resolution: free on `x_(τ)`, `|τ| = k`, with
/// `b̊_k(x_(τ)) = Σ_{i∈supp τ} (x_i⊗1 + (-1)^k 1⊗x_i) x_(τ∖i)`.
pub fn build_reduced_resolution(n: usize, max_degree: usize) -> Result<BasedComplex<EnvAlgebra<Integers>>> {
    check_generators(n)?;
    let env = EnvAlgebra::new(n, Integers);
    let bases: Vec<Vec<BasisLabel>> = (0..=max_degree)
        .map(|k| enumerate_multisets(n, k).into_iter().map(BasisLabel::Generator).collect())
        .collect();
    let mut lowering = Vec::new();
    for k in 1..=max_degree {
        let (list, _) = multiset_positions(n, k);
        let (_, below) = multiset_positions(n, k - 1);
        let mut triplets = Vec::new();
        for (col, tau) in list.iter().enumerate() {
            for i in tau.support().elements() {
                let right = env.right(Subset::singleton(i));
                let right = if k % 2 == 0 { right } else { env.neg(&right) };
                let weight = env.add(&env.left(Subset::singleton(i)), &right);
                let rest = tau.without_one(i).expect("i is in the support");
                triplets.push((below[&rest], col, weight));
            }
        }
        lowering.push(SparseMatrix::from_triplets(&env, bases[k - 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::chain(env, bases, lowering)
}

fn pair_index(n: usize, tau_pos: usize, sigma: Subset) -> usize {
    (tau_pos << n) + sigma.mask() as usize
}

/// `A ⊗_{A^e} B̊`: cells `x_σ ⊗ x_(τ)` ordered by `τ`, then `σ`, with
/// `∂̊(x_σ⊗x_(τ)) = Σ_{i∈supp τ} ((-1)^|σ| + (-1)^|τ|) x_i x_σ ⊗ x_(τ∖i)`.
pub fn build_reduced_chain(n: usize, max_degree: usize) -> Result<BasedComplex<Integers>> {
    check_generators(n)?;
    let bases: Vec<Vec<BasisLabel>> = (0..=max_degree)
        .map(|k| {
            enumerate_multisets(n, k)
                .into_iter()
                .flat_map(|tau| Subset::all(n).map(move |sigma| BasisLabel::ChainPair { sigma, tau: tau.clone() }))
                .collect()
        })
        .collect();
    let mut lowering = Vec::new();
    for k in 1..=max_degree {
        let (list, _) = multiset_positions(n, k);
        let (_, below) = multiset_positions(n, k - 1);
        let parity_tau = if k % 2 == 0 { 1 } else { -1 };
        let mut triplets = Vec::new();
        for (tp, tau) in list.iter().enumerate() {
            for sigma in Subset::all(n) {
                let coefficient = sigma.parity_sign() + parity_tau;
                if coefficient == 0 {
                    continue;
                }
                for i in tau.support().elements() {
                    let Some((sign, grown)) = left_mul_sign(i, sigma) else { continue };
                    let rest = tau.without_one(i).unwrap();
                    triplets.push((
                        pair_index(n, below[&rest], grown),
                        pair_index(n, tp, sigma),
                        BigInt::from(coefficient * sign),
                    ));
                }
            }
        }
        lowering.push(SparseMatrix::from_triplets(&Integers, bases[k - 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::chain(Integers, bases, lowering)
}

/// The coboundary of one reduced cochain cell `φ_{τ,σ}`:
/// `Σ_{i∉σ} ((-1)^|σ| - (-1)^|τ|) (sign of x_σ x_i) φ_{τ∪i, σ∪i}`.
pub fn reduced_cochain_coboundary(n: usize, tau: &Multiset, sigma: Subset) -> Vec<((Multiset, Subset), i64)> {
    let coefficient = sigma.parity_sign() - tau.parity_sign();
    if coefficient == 0 {
        return Vec::new();
    }
    (1..=n)
        .filter_map(|i| {
            let (sign, grown) = right_mul_sign(sigma, i)?;
            Some(((tau.with_one(i), grown), coefficient * sign))
        })
        .collect()
}

/// `Hom_{A^e}(B̊, A)`: cells `φ_{τ,σ}` ordered by `τ`, then `σ`.
pub fn build_reduced_cochain(n: usize, max_degree: usize) -> Result<BasedComplex<Integers>> {
    check_generators(n)?;
    let bases: Vec<Vec<BasisLabel>> = (0..=max_degree)
        .map(|k| {
            enumerate_multisets(n, k)
                .into_iter()
                .flat_map(|tau| Subset::all(n).map(move |sigma| BasisLabel::CochainPair { tau: tau.clone(), sigma }))
                .collect()
        })
        .collect();
    let mut raising = Vec::new();
    for k in 0..max_degree {
        let (list, _) = multiset_positions(n, k);
        let (_, above) = multiset_positions(n, k + 1);
        let mut triplets = Vec::new();
        for (tp, tau) in list.iter().enumerate() {
            for sigma in Subset::all(n) {
                for ((t2, s2), w) in reduced_cochain_coboundary(n, tau, sigma) {
                    triplets.push((pair_index(n, above[&t2], s2), pair_index(n, tp, sigma), BigInt::from(w)));
                }
            }
        }
        raising.push(SparseMatrix::from_triplets(&Integers, bases[k + 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::cochain(Integers, bases, raising)
}

/// The two summands of a reduced (co)chain complex.
#[derive(Clone, Debug)]
pub struct ParitySplit<R: Ring> {
    /// Cells whose differential can be nonzero.
    pub active: BasedComplex<R>,
    /// Cells with zero differential.
    pub inert: BasedComplex<R>,
}

/// Splits by comparing `(-1)^|σ|` with `(-1)^|τ|`: equal parity is active
/// for chains, unequal parity for cochains. Checks that no differential
/// entry crosses between the two parts.
pub fn split_parity<R: Ring>(c: &BasedComplex<R>) -> Result<ParitySplit<R>> {
    let mut active_flags = Vec::new();
    for k in 0..c.degrees() {
        let mut flags = Vec::with_capacity(c.rank(k));
        for label in c.basis(k) {
            let (sigma, tau) = label.sigma_tau().ok_or_else(|| Error::MixedLabels(label.to_string()))?;
            let equal = sigma.parity_sign() == tau.parity_sign();
            flags.push(match c.orientation() {
                Orientation::Chain => equal,
                Orientation::Cochain => !equal,
            });
        }
        active_flags.push(flags);
    }
    for (s, d) in c.differentials().iter().enumerate() {
        let Some(t) = c.target_degree(s).filter(|_| d.rows() > 0) else { continue };
        for (r, col, _) in d.entries() {
            if !(active_flags[s][col] && active_flags[t][r]) {
                return Err(Error::NotADirectSum(c.basis(s)[col].to_string(), c.basis(t)[r].to_string()));
            }
        }
    }
    let is_active = |label: &BasisLabel| {
        let (k, i) = c.locate(label).expect("label from this complex");
        active_flags[k][i]
    };
    Ok(ParitySplit { active: c.restrict(is_active)?, inert: c.restrict(|l| !is_active(l))? })
}

/// Divides every differential entry by 2; fails if some entry is odd.
pub fn halve(c: &BasedComplex<Integers>) -> Result<BasedComplex<Integers>> {
    let two = BigInt::from(2);
    for (k, d) in c.differentials().iter().enumerate() {
        if let Some((r, col, w)) = d.entries().find(|(_, _, w)| !w.is_multiple_of(&two)) {
            let t = c.target_degree(k).unwrap_or(0);
            return Err(Error::InvalidInput(format!(
                "entry {w} from {} to {} is not even",
                c.basis(k)[col],
                c.basis(t)[r]
            )));
        }
    }
    Ok(c.map_ring(Integers, |w| w / 2))
}
