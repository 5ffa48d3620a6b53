use num_bigint::BigInt;

use super::{check_generators, check_size};
use crate::algebra::{EnvAlgebra, EnvElement};
use crate::combinat::{subset_mul_sign, Subset};
use crate::complex::{BasedComplex, BasisLabel};
use crate::error::Result;
use crate::linalg::SparseMatrix;
use crate::ring::{Integers, Ring};

/// Number of normalized degree-`k` tensors, `(2^n - 1)^k`.
pub fn bar_tensor_count(n: usize, k: usize) -> u128 {
    ((1u128 << n) - 1).saturating_pow(k as u32)
}

/// All sequences of `k` nonempty subsets of `[n]`, lexicographic in the
/// masks with the first factor most significant.
pub fn bar_tensors(n: usize, k: usize) -> Vec<Vec<Subset>> {
    let base = (1u32 << n) - 1;
    let count = bar_tensor_count(n, k) as usize;
    let mut out = Vec::with_capacity(count);
    let mut digits = vec![0u32; k];
    for _ in 0..count {
        out.push(digits.iter().map(|d| Subset::from_mask(d + 1)).collect());
        for slot in digits.iter_mut().rev() {
            *slot += 1;
            if *slot < base {
                break;
            }
            *slot = 0;
        }
    }
    out
}

/// Position of a normalized tensor in [`bar_tensors`].
pub fn tensor_index(n: usize, tensor: &[Subset]) -> usize {
    let base = (1usize << n) - 1;
    tensor.iter().fold(0, |acc, s| acc * base + s.mask() as usize - 1)
}

/// `b_k(1⊗x_{σ1}⊗…⊗x_{σk}⊗1)` as `(tensor, A^e coefficient)` terms: the
/// left weight `x_{σ1}⊗1`, the middle merges `(-1)^i·sign`, and the right
/// weight `(-1)^k 1⊗x_{σk}`.
pub fn bar_boundary(env: &EnvAlgebra<Integers>, tensor: &[Subset]) -> Vec<(Vec<Subset>, EnvElement<BigInt>)> {
    let k = tensor.len();
    if k == 0 {
        return Vec::new();
    }
    let mut terms = Vec::with_capacity(k + 1);
    terms.push((tensor[1..].to_vec(), env.left(tensor[0])));
    for i in 1..k {
        if let Some((sign, merged)) = subset_mul_sign(tensor[i - 1], tensor[i]) {
            let mut t = Vec::with_capacity(k - 1);
            t.extend_from_slice(&tensor[..i - 1]);
            t.push(merged);
            t.extend_from_slice(&tensor[i + 1..]);
            let s = if i % 2 == 0 { sign } else { -sign };
            terms.push((t, env.from_int(s)));
        }
    }
    let last = env.right(tensor[k - 1]);
    let last = if k.is_multiple_of(2) { last } else { env.neg(&last) };
    terms.push((tensor[..k - 1].to_vec(), last));
    terms
}

/// The normalized bar resolution of `A` as a complex of free `A^e`-modules,
/// degrees `0..=max_degree`.
pub fn build_bar_resolution(n: usize, max_degree: usize, limit: usize) -> Result<BasedComplex<EnvAlgebra<Integers>>> {
    check_generators(n)?;
    for k in 0..=max_degree {
        check_size(k, bar_tensor_count(n, k), limit)?;
    }
    let env = EnvAlgebra::new(n, Integers);
    let bases: Vec<Vec<BasisLabel>> =
        (0..=max_degree).map(|k| bar_tensors(n, k).into_iter().map(BasisLabel::Bar).collect()).collect();
    let mut lowering = Vec::with_capacity(max_degree);
    for k in 1..=max_degree {
        let mut triplets = Vec::new();
        for (col, t) in bar_tensors(n, k).iter().enumerate() {
            for (target, u) in bar_boundary(&env, t) {
                triplets.push((tensor_index(n, &target), col, u));
            }
        }
        lowering.push(SparseMatrix::from_triplets(&env, bases[k - 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::chain(env, bases, lowering)
}

fn oracle_size(n: usize, max_degree: usize, limit: usize) -> Result<()> {
    check_generators(n)?;
    for k in 0..=max_degree {
        check_size(k, bar_tensor_count(n, k).saturating_mul(1u128 << n), limit)?;
    }
    Ok(())
}

fn signed(sign: i64) -> BigInt {
    BigInt::from(sign)
}

/// Hochschild chains `A ⊗ Ā^{⊗k}` with the standard boundary
/// `m a1⊗… + Σ (-1)^i m⊗…a_i a_{i+1}… + (-1)^k a_k m⊗a1…a_{k-1}`.
/// Basis `x_σ ⊗ (tensor)`, ordered by tensor, then by `σ`.
pub fn build_bar_hochschild_chain(n: usize, max_degree: usize, limit: usize) -> Result<BasedComplex<Integers>> {
    oracle_size(n, max_degree, limit)?;
    let width = 1usize << n;
    let label_basis = |k: usize| -> Vec<BasisLabel> {
        bar_tensors(n, k)
            .into_iter()
            .flat_map(|t| Subset::all(n).map(move |sigma| BasisLabel::BarChain { sigma, tensor: t.clone() }))
            .collect()
    };
    let bases: Vec<Vec<BasisLabel>> = (0..=max_degree).map(label_basis).collect();
    let row = |t: &[Subset], sigma: Subset| tensor_index(n, t) * width + sigma.mask() as usize;
    let mut lowering = Vec::with_capacity(max_degree);
    for k in 1..=max_degree {
        let mut triplets = Vec::new();
        for (ti, t) in bar_tensors(n, k).iter().enumerate() {
            for sigma in Subset::all(n) {
                let col = ti * width + sigma.mask() as usize;
                if let Some((s, prod)) = subset_mul_sign(sigma, t[0]) {
                    triplets.push((row(&t[1..], prod), col, signed(s)));
                }
                for i in 1..k {
                    if let Some((s, merged)) = subset_mul_sign(t[i - 1], t[i]) {
                        let mut target = t[..i - 1].to_vec();
                        target.push(merged);
                        target.extend_from_slice(&t[i + 1..]);
                        let s = if i % 2 == 0 { s } else { -s };
                        triplets.push((row(&target, sigma), col, signed(s)));
                    }
                }
                if let Some((s, prod)) = subset_mul_sign(t[k - 1], sigma) {
                    let s = if k % 2 == 0 { s } else { -s };
                    triplets.push((row(&t[..k - 1], prod), col, signed(s)));
                }
            }
        }
        lowering.push(SparseMatrix::from_triplets(&Integers, bases[k - 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::chain(Integers, bases, lowering)
}

/// Hochschild cochains `Hom(Ā^{⊗k}, A)` with the standard coboundary
/// `a1 f(a2…) + Σ (-1)^i f(…a_i a_{i+1}…) + (-1)^{k+1} f(a1…a_k) a_{k+1}`.
/// Basis `φ_{t,σ}` (value `x_σ` on the tensor `t`, zero elsewhere).
pub fn build_bar_hochschild_cochain(n: usize, max_degree: usize, limit: usize) -> Result<BasedComplex<Integers>> {
    oracle_size(n, max_degree, limit)?;
    let width = 1usize << n;
    let label_basis = |k: usize| -> Vec<BasisLabel> {
        bar_tensors(n, k)
            .into_iter()
            .flat_map(|t| Subset::all(n).map(move |sigma| BasisLabel::BarCochain { tensor: t.clone(), sigma }))
            .collect()
    };
    let bases: Vec<Vec<BasisLabel>> = (0..=max_degree).map(label_basis).collect();
    let row = |t: &[Subset], sigma: Subset| tensor_index(n, t) * width + sigma.mask() as usize;
    let mut raising = Vec::with_capacity(max_degree);
    for k in 0..max_degree {
        let mut triplets = Vec::new();
        for (ti, t) in bar_tensors(n, k).iter().enumerate() {
            for sigma in Subset::all(n) {
                let col = ti * width + sigma.mask() as usize;
                for rho in Subset::all_nonempty(n) {
                    // a1 f(a2 … a_{k+1}) with a1 = x_ρ
                    if let Some((s, prod)) = subset_mul_sign(rho, sigma) {
                        let mut target = vec![rho];
                        target.extend_from_slice(t);
                        triplets.push((row(&target, prod), col, signed(s)));
                    }
                    // (-1)^{k+1} f(a1 … a_k) a_{k+1} with a_{k+1} = x_ρ
                    if let Some((s, prod)) = subset_mul_sign(sigma, rho) {
                        let mut target = t.clone();
                        target.push(rho);
                        let s = if (k + 1) % 2 == 0 { s } else { -s };
                        triplets.push((row(&target, prod), col, signed(s)));
                    }
                }
                // (-1)^i f(… a_i a_{i+1} …): split the i-th factor into a product
                for (pos, factor) in t.iter().enumerate() {
                    let i = pos + 1;
                    let mut part = factor.mask();
                    // nonempty proper submasks ρ1 of the factor
                    while part != 0 {
                        part = (part - 1) & factor.mask();
                        if part == 0 {
                            break;
                        }
                        let rho1 = Subset::from_mask(part);
                        let rho2 = Subset::from_mask(factor.mask() & !part);
                        let (s, _) = subset_mul_sign(rho1, rho2).expect("disjoint halves");
                        let mut target = t[..pos].to_vec();
                        target.push(rho1);
                        target.push(rho2);
                        target.extend_from_slice(&t[pos + 1..]);
                        let s = if i % 2 == 0 { s } else { -s };
                        triplets.push((row(&target, sigma), col, signed(s)));
                    }
                }
            }
        }
        raising.push(SparseMatrix::from_triplets(&Integers, bases[k + 1].len(), bases[k].len(), triplets));
    }
    BasedComplex::cochain(Integers, bases, raising)
}
