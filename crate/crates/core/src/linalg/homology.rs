use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive};

use super::{smith_normal_form, SparseMatrix};
use crate::error::{Error, Result};
use crate::ring::Integers;

/// `Z^free ⊕ Z/d_1 ⊕ ... ⊕ Z/d_t` with `d_1 | ... | d_t`, all `d_i > 1`.
/// Over a field only `free_rank` (the dimension) is used.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct HomologyGroup {
    pub free_rank: usize,
    pub torsion: Vec<BigInt>,
}

impl HomologyGroup {
    pub fn free(rank: usize) -> Self {
        HomologyGroup { free_rank: rank, torsion: Vec::new() }
    }

    /// `Z^free ⊕ (Z/2)^twos`.
    pub fn with_two_torsion(free_rank: usize, twos: usize) -> Self {
        HomologyGroup { free_rank, torsion: vec![BigInt::from(2); twos] }
    }

    /// Normalizes an arbitrary list of cyclic orders into invariant factors.
    pub fn from_parts(free_rank: usize, cyclic_orders: Vec<BigInt>) -> Self {
        let torsion = normalize_divisors(cyclic_orders).into_iter().filter(|d| !d.is_one()).collect();
        HomologyGroup { free_rank, torsion }
    }

    /// Number of torsion summands equal to `Z/2`.
    pub fn two_torsion_rank(&self) -> usize {
        self.torsion.iter().filter(|d| **d == BigInt::from(2)).count()
    }

    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }

    /// Torsion divisors as machine integers, when they fit.
    pub fn torsion_u64(&self) -> Option<Vec<u64>> {
        self.torsion.iter().map(ToPrimitive::to_u64).collect()
    }
}

impl fmt::Display for HomologyGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts = Vec::new();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        let mut i = 0;
        while i < self.torsion.len() {
            let d = &self.torsion[i];
            let run = self.torsion[i..].iter().take_while(|x| *x == d).count();
            parts.push(if run == 1 { format!("Z_{d}") } else { format!("Z_{d}^{run}") });
            i += run;
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// Turns a diagonal into a divisibility chain with the same cokernel, by
/// replacing pairs `(a, b)` with `(gcd, lcm)`. Zeros are dropped; units are
/// kept so the length equals the rank.
pub fn normalize_divisors(diagonal: Vec<BigInt>) -> Vec<BigInt> {
    let mut units = 0usize;
    let mut rest: Vec<BigInt> = Vec::new();
    for d in diagonal {
        let d = d.abs();
        if d.is_one() {
            units += 1;
        } else if d.sign() != num_bigint::Sign::NoSign {
            rest.push(d);
        }
    }
    for i in 0..rest.len() {
        for j in i + 1..rest.len() {
            let g = rest[i].gcd(&rest[j]);
            if g != rest[i] {
                let l = rest[i].lcm(&rest[j]);
                rest[i] = g;
                rest[j] = l;
            }
        }
    }
    let mut out = vec![BigInt::one(); units];
    out.extend(rest);
    out.sort();
    out
}

/// Homology `Ker α / Im β` of `Z^l <-α- Z^m <-β- Z^n`.
pub fn homology_pair(alpha: &SparseMatrix<BigInt>, beta: &SparseMatrix<BigInt>) -> Result<HomologyGroup> {
    if alpha.cols() != beta.rows() {
        return Err(Error::DimensionMismatch(format!(
            "alpha is {}x{}, beta is {}x{}",
            alpha.rows(),
            alpha.cols(),
            beta.rows(),
            beta.cols()
        )));
    }
    let composite = SparseMatrix::compose(&Integers, alpha, beta)?;
    if let Some((row, col, _)) = composite.entries().next() {
        return Err(Error::CompositionNonzero { row, col });
    }
    let a = smith_normal_form(alpha);
    let b = smith_normal_form(beta);
    let free_rank = alpha.cols() - a.rank - b.rank;
    let torsion = b.divisors.into_iter().filter(|d| !d.is_one()).collect();
    Ok(HomologyGroup { free_rank, torsion })
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> SparseMatrix<BigInt> {
        SparseMatrix::from_dense(rows)
    }

    #[test]
    fn small_quotients() {
        let h = homology_pair(&m(&[vec![0]]), &m(&[vec![2]])).unwrap();
        assert_eq!(h, HomologyGroup::with_two_torsion(0, 1));
        // Z^2 / <2 e1>
        let h = homology_pair(&m(&[vec![0, 0]]), &m(&[vec![2], vec![0]])).unwrap();
        assert_eq!(h, HomologyGroup::with_two_torsion(1, 1));
        // Ker = <e2>, Im = <3 e2>
        let h = homology_pair(&m(&[vec![1, 0]]), &m(&[vec![0], vec![3]])).unwrap();
        assert_eq!(h, HomologyGroup { free_rank: 0, torsion: vec![BigInt::from(3)] });
    }

    #[test]
    fn nonzero_composite_rejected() {
        let err = homology_pair(&m(&[vec![1]]), &m(&[vec![1]])).unwrap_err();
        assert_eq!(err, Error::CompositionNonzero { row: 0, col: 0 });
        assert!(matches!(homology_pair(&m(&[vec![1, 0]]), &m(&[vec![1]])), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn divisor_normalization() {
        let v = |xs: &[i64]| xs.iter().map(|x| BigInt::from(*x)).collect::<Vec<_>>();
        assert_eq!(normalize_divisors(v(&[4, 6, 1, 0])), v(&[1, 2, 12]));
        assert_eq!(normalize_divisors(v(&[2, 2, 2])), v(&[2, 2, 2]));
        assert_eq!(HomologyGroup::from_parts(1, v(&[3, 2])).to_string(), "Z + Z_6");
        assert_eq!(HomologyGroup::with_two_torsion(3, 2).to_string(), "Z^3 + Z_2^2");
        assert_eq!(HomologyGroup::default().to_string(), "0");
    }

    // --- scaled-pair property against an independent coset count ---

    /// Subgroup of `(Z/N)^m` generated by `gens`.
    fn span_mod(gens: &[Vec<i64>], m_dim: usize, modulus: i64) -> std::collections::HashSet<Vec<i64>> {
        let mut span = std::collections::HashSet::new();
        span.insert(vec![0i64; m_dim]);
        let mut frontier = vec![vec![0i64; m_dim]];
        while let Some(v) = frontier.pop() {
            for g in gens {
                let w: Vec<i64> = v.iter().zip(g).map(|(a, b)| (a + b).rem_euclid(modulus)).collect();
                if span.insert(w.clone()) {
                    frontier.push(w);
                }
            }
        }
        span
    }

    /// `|H / N H|` for `H = Ker α / Im β`, by brute force. Integer kernel
    /// vectors are found in a box large enough to generate `Ker α`; since
    /// the kernel is saturated its image mod N is `Ker α / N Ker α`.
    fn coset_count(alpha: &[Vec<i64>], beta: &[Vec<i64>], m_dim: usize, modulus: i64) -> usize {
        const BOX: i64 = 10;
        let side = (2 * BOX + 1) as usize;
        let mut kernel = std::collections::BTreeSet::new();
        for code in 0..side.pow(m_dim as u32) {
            let mut c = code;
            let v: Vec<i64> = (0..m_dim)
                .map(|_| {
                    let x = (c % side) as i64 - BOX;
                    c /= side;
                    x
                })
                .collect();
            if alpha.iter().all(|row| row.iter().zip(&v).map(|(a, b)| a * b).sum::<i64>() == 0) {
                kernel.insert(v.iter().map(|x| x.rem_euclid(modulus)).collect::<Vec<i64>>());
            }
        }
        let kernel: Vec<Vec<i64>> = kernel.into_iter().collect();
        let n_dim = beta.first().map_or(0, Vec::len);
        let columns: Vec<Vec<i64>> = (0..n_dim).map(|c| beta.iter().map(|r| r[c]).collect()).collect();
        span_mod(&kernel, m_dim, modulus).len() / span_mod(&columns, m_dim, modulus).len()
    }

    fn order_mod(h: &HomologyGroup, modulus: i64) -> usize {
        let n = BigInt::from(modulus);
        let mut size = (modulus as usize).pow(h.free_rank as u32);
        for d in &h.torsion {
            size *= d.gcd(&n).to_usize().unwrap();
        }
        size
    }

    fn random_pair(m_dim: usize, seed: &[i64]) -> (Vec<Vec<i64>>, Vec<Vec<i64>>) {
        // β arbitrary, α chosen in the left kernel of β by rows orthogonal to im β
        let beta: Vec<Vec<i64>> = (0..m_dim).map(|r| vec![seed[r], seed[r + 3] * seed[(r + 1) % 3]]).collect();
        // α rows: integer vectors a with a·β = 0, built from 2x2 cross products when possible
        let mut alpha = Vec::new();
        if m_dim >= 3 {
            let b0 = &beta;
            // generalized cross product of the two columns of β gives a row annihilating both
            let c0: Vec<i64> = b0.iter().map(|r| r[0]).collect();
            let c1: Vec<i64> = b0.iter().map(|r| r[1]).collect();
            let row = vec![c0[1] * c1[2] - c0[2] * c1[1], c0[2] * c1[0] - c0[0] * c1[2], c0[0] * c1[1] - c0[1] * c1[0]];
            let mut full = row.clone();
            full.resize(m_dim, 0);
            alpha.push(full.clone());
            alpha.push(full.iter().map(|x| x * seed[6]).collect());
        } else {
            alpha.push(vec![0; m_dim]);
        }
        (alpha, beta)
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn scaled_pair_doubles_torsion(m_dim in 1usize..=3, seed in proptest::collection::vec(-2i64..3, 7)) {
            let (alpha, beta) = random_pair(m_dim, &seed);
            let (a, b) = (m(&alpha), m(&beta));
            let h = homology_pair(&a, &b).unwrap();
            let h2 = homology_pair(&a.scaled(2), &b.scaled(2)).unwrap();
            prop_assert_eq!(h2.free_rank, h.free_rank);
            // Z_{2b_i} for every elementary divisor b_i of β, units included
            let sb = smith_normal_form(&b);
            let expected: Vec<BigInt> = normalize_divisors(sb.divisors.iter().map(|d| d * 2).collect());
            prop_assert_eq!(&h2.torsion, &expected);
            // independent check by counting cosets modulo N
            let n = 8;
            prop_assert_eq!(coset_count(&alpha, &beta, m_dim, n), order_mod(&h, n));
            let alpha2: Vec<Vec<i64>> = alpha.iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
            let beta2: Vec<Vec<i64>> = beta.iter().map(|r| r.iter().map(|x| 2 * x).collect()).collect();
            prop_assert_eq!(coset_count(&alpha2, &beta2, m_dim, n), order_mod(&h2, n));
        }
    }

    #[test]
    fn zero_pair_is_free() {
        let h = homology_pair(&SparseMatrix::zero(0, 3), &SparseMatrix::zero(3, 0)).unwrap();
        assert_eq!(h, HomologyGroup::free(3));
        assert!(BigInt::zero().is_zero());
    }
}
