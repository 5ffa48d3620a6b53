//! Index combinatorics: subsets and multisets of `[n] = {1, ..., n}`, Koszul
//! signs of exterior products, and enumeration.
//!
//! Signs are `+1` or `-1` as `i64`. A zero product (repeated variable) is
//! reported as `None` rather than a zero sign.

use std::fmt;

use serde::{Deserialize, Serialize};

/// Largest supported number of generators.
pub const MAX_GENERATORS: usize = 31;

/// A subset of `[n]`, stored as a membership mask (bit `i - 1` for element `i`).
///
/// Elements come out of [`Subset::elements`] in increasing order, so the mask
/// doubles as the strictly increasing sequence.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Subset(u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn from_mask(mask: u32) -> Self {
        Subset(mask)
    }

    /// Panics on elements outside `1..=31`; duplicates collapse.
    pub fn from_elements(elements: &[usize]) -> Self {
        let mut mask = 0u32;
        for &i in elements {
            assert!((1..=MAX_GENERATORS).contains(&i), "subset element {i} out of range");
            mask |= 1 << (i - 1);
        }
        Subset(mask)
    }

    pub fn singleton(i: usize) -> Self {
        Subset::from_elements(&[i])
    }

    /// `[n]` itself.
    pub fn full(n: usize) -> Self {
        assert!(n <= MAX_GENERATORS);
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn mask(self) -> u32 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, i: usize) -> bool {
        (1..=MAX_GENERATORS).contains(&i) && self.0 & (1 << (i - 1)) != 0
    }

    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let bit = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(bit + 1)
            }
        })
    }

    pub fn min(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize + 1)
    }

    pub fn max(self) -> Option<usize> {
        (self.0 != 0).then(|| 32 - self.0.leading_zeros() as usize)
    }

    pub fn with(self, i: usize) -> Self {
        Subset(self.0 | Subset::singleton(i).0)
    }

    pub fn without(self, i: usize) -> Self {
        Subset(self.0 & !Subset::singleton(i).0)
    }

    pub fn union(self, other: Subset) -> Self {
        Subset(self.0 | other.0)
    }

    pub fn is_disjoint(self, other: Subset) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    /// Parity `(-1)^|self|`.
    pub fn parity_sign(self) -> i64 {
        if self.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// Number of elements strictly smaller than `i`.
    fn count_below(self, i: usize) -> u32 {
        (self.0 & ((1u32 << (i - 1)) - 1)).count_ones()
    }

    /// Number of elements strictly greater than `i`.
    fn count_above(self, i: usize) -> u32 {
        if i >= 32 {
            0
        } else {
            (self.0 >> i).count_ones()
        }
    }

    /// All `2^n` subsets of `[n]`, ordered by mask.
    pub fn all(n: usize) -> impl Iterator<Item = Subset> {
        assert!(n <= MAX_GENERATORS);
        (0..(1u64 << n)).map(|m| Subset(m as u32))
    }

    /// The nonempty subsets of `[n]`, ordered by mask.
    pub fn all_nonempty(n: usize) -> impl Iterator<Item = Subset> {
        Subset::all(n).skip(1)
    }
}

impl fmt::Debug for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Subset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (pos, i) in self.elements().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

/// `x_i * x_sigma`: the variable enters from the left and crosses every
/// element of `sigma` smaller than `i`.
pub fn left_mul_sign(i: usize, sigma: Subset) -> Option<(i64, Subset)> {
    if sigma.contains(i) {
        return None;
    }
    let sign = if sigma.count_below(i).is_multiple_of(2) { 1 } else { -1 };
    Some((sign, sigma.with(i)))
}

/// `x_sigma * x_i`: the variable enters from the right and crosses every
/// element of `sigma` greater than `i`.
pub fn right_mul_sign(sigma: Subset, i: usize) -> Option<(i64, Subset)> {
    if sigma.contains(i) {
        return None;
    }
    let sign = if sigma.count_above(i).is_multiple_of(2) { 1 } else { -1 };
    Some((sign, sigma.with(i)))
}

/// `x_sigma * x_rho`, with the sign of the permutation sorting the
/// concatenated sequences.
pub fn subset_mul_sign(sigma: Subset, rho: Subset) -> Option<(i64, Subset)> {
    if !sigma.is_disjoint(rho) {
        return None;
    }
    let inversions: u32 = rho.elements().map(|b| sigma.count_above(b)).sum();
    let sign = if inversions.is_multiple_of(2) { 1 } else { -1 };
    Some((sign, sigma.union(rho)))
}

/// A multiset over `[n]`, stored as a weakly increasing sequence.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
pub struct Multiset(Vec<usize>);

impl Multiset {
    /// Sorts the input; panics on a zero element.
    pub fn new(mut elements: Vec<usize>) -> Self {
        assert!(elements.iter().all(|&i| i >= 1), "multiset elements start at 1");
        elements.sort_unstable();
        Multiset(elements)
    }

    pub fn empty() -> Self {
        Multiset(Vec::new())
    }

    pub fn elements(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn parity_sign(&self) -> i64 {
        if self.0.len().is_multiple_of(2) {
            1
        } else {
            -1
        }
    }

    /// The underlying set (`tau-bar`).
    pub fn support(&self) -> Subset {
        Subset::from_elements(&self.0)
    }

    pub fn multiplicity(&self, i: usize) -> usize {
        self.0.iter().filter(|&&j| j == i).count()
    }

    pub fn min(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Removes one copy of `i`.
    pub fn without_one(&self, i: usize) -> Option<Multiset> {
        let pos = self.0.iter().position(|&j| j == i)?;
        let mut out = self.0.clone();
        out.remove(pos);
        Some(Multiset(out))
    }

    /// Adds one copy of `i`.
    pub fn with_one(&self, i: usize) -> Multiset {
        let mut out = self.0.clone();
        let pos = out.partition_point(|&j| j <= i);
        out.insert(pos, i);
        Multiset(out)
    }

    /// Multiset sum.
    pub fn sum(&self, other: &Multiset) -> Multiset {
        let mut out = self.0.clone();
        out.extend_from_slice(&other.0);
        out.sort_unstable();
        Multiset(out)
    }
}

impl fmt::Debug for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for Multiset {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (pos, i) in self.0.iter().enumerate() {
            if pos > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, ")")
    }
}

/// All `k`-element multisets of `[n]`, in lexicographic order.
pub fn enumerate_multisets(n: usize, k: usize) -> Vec<Multiset> {
    let mut out = Vec::new();
    if n == 0 {
        if k == 0 {
            out.push(Multiset::empty());
        }
        return out;
    }
    let mut current = vec![1usize; k];
    loop {
        out.push(Multiset(current.clone()));
        // rightmost position that can still grow
        let Some(pos) = current.iter().rposition(|&v| v < n) else {
            break;
        };
        let next = current[pos] + 1;
        for v in &mut current[pos..] {
            *v = next;
        }
    }
    out
}

/// All distinct rearrangements of `tau`, in lexicographic order.
pub fn multiset_permutations(tau: &Multiset) -> Vec<Vec<usize>> {
    let mut current = tau.0.clone();
    let mut out = vec![current.clone()];
    while next_permutation(&mut current) {
        out.push(current.clone());
    }
    out
}

fn next_permutation(a: &mut [usize]) -> bool {
    if a.len() < 2 {
        return false;
    }
    let mut i = a.len() - 1;
    while i > 0 && a[i - 1] >= a[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = a.len() - 1;
    while a[j] <= a[i - 1] {
        j -= 1;
    }
    a.swap(i - 1, j);
    a[i..].reverse();
    true
}

pub fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc
}

/// Number of `k`-element multisets of `[n]`: `C(n + k - 1, k)`.
pub fn multiset_coefficient(n: u64, k: u64) -> u128 {
    if n == 0 {
        return u128::from(k == 0);
    }
    binomial(n + k - 1, k)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn s(e: &[usize]) -> Subset {
        Subset::from_elements(e)
    }

    #[test]
    fn left_multiplication_signs() {
        assert_eq!(left_mul_sign(2, s(&[1, 3])), Some((-1, s(&[1, 2, 3]))));
        assert_eq!(left_mul_sign(1, s(&[1])), None);
        assert_eq!(left_mul_sign(5, Subset::EMPTY), Some((1, s(&[5]))));
    }

    #[test]
    fn right_multiplication_signs() {
        // x1 x3 * x2 = -x1 x2 x3
        assert_eq!(right_mul_sign(s(&[1, 3]), 2), Some((-1, s(&[1, 2, 3]))));
        assert_eq!(right_mul_sign(s(&[1, 2]), 3), Some((1, s(&[1, 2, 3]))));
        assert_eq!(right_mul_sign(s(&[2]), 2), None);
    }

    #[test]
    fn subset_products() {
        assert_eq!(subset_mul_sign(s(&[2]), s(&[1])), Some((-1, s(&[1, 2]))));
        assert_eq!(subset_mul_sign(s(&[2, 3]), s(&[1])), Some((1, s(&[1, 2, 3]))));
        assert_eq!(subset_mul_sign(s(&[1]), s(&[1])), None);
        assert_eq!(subset_mul_sign(Subset::EMPTY, s(&[4])), Some((1, s(&[4]))));
    }

    #[test]
    fn subset_accessors() {
        let a = s(&[2, 5, 7]);
        assert_eq!(a.elements().collect::<Vec<_>>(), vec![2, 5, 7]);
        assert_eq!(a.min(), Some(2));
        assert_eq!(a.max(), Some(7));
        assert_eq!(a.to_string(), "{2,5,7}");
        assert_eq!(Subset::full(3), s(&[1, 2, 3]));
        assert_eq!(Subset::EMPTY.max(), None);
        assert_eq!(Subset::all_nonempty(3).count(), 7);
    }

    #[test]
    fn multisets_enumerate_lexicographically() {
        let got: Vec<String> = enumerate_multisets(2, 3).iter().map(|m| m.to_string()).collect();
        assert_eq!(got, vec!["(1,1,1)", "(1,1,2)", "(1,2,2)", "(2,2,2)"]);
        assert_eq!(enumerate_multisets(4, 0), vec![Multiset::empty()]);
        assert_eq!(enumerate_multisets(1, 5), vec![Multiset::new(vec![1; 5])]);
    }

    #[test]
    fn permutations_of_multisets() {
        let p = multiset_permutations(&Multiset::new(vec![1, 1, 2]));
        assert_eq!(p, vec![vec![1, 1, 2], vec![1, 2, 1], vec![2, 1, 1]]);
        assert_eq!(multiset_permutations(&Multiset::new(vec![1, 1])).len(), 1);
        assert_eq!(multiset_permutations(&Multiset::new(vec![1, 2])).len(), 2);
        assert_eq!(multiset_permutations(&Multiset::empty()), vec![Vec::<usize>::new()]);
    }

    #[test]
    fn multiset_editing() {
        let t = Multiset::new(vec![3, 1, 1]);
        assert_eq!(t.elements(), &[1, 1, 3]);
        assert_eq!(t.support(), s(&[1, 3]));
        assert_eq!(t.without_one(1), Some(Multiset::new(vec![1, 3])));
        assert_eq!(t.without_one(2), None);
        assert_eq!(t.with_one(2), Multiset::new(vec![1, 1, 2, 3]));
        assert_eq!(t.multiplicity(1), 2);
    }

    fn count_multisets_recursive(n: u64, k: u64) -> u128 {
        // choose how many copies of the largest element, recurse on the rest
        if k == 0 {
            return 1;
        }
        if n == 0 {
            return 0;
        }
        (0..=k).map(|c| count_multisets_recursive(n - 1, k - c)).sum()
    }

    #[test]
    fn multiset_counts_match_recursive_count() {
        for n in 1..=6u64 {
            for k in 0..=6u64 {
                let listed = enumerate_multisets(n as usize, k as usize);
                assert_eq!(listed.len() as u128, count_multisets_recursive(n, k));
                assert_eq!(listed.len() as u128, multiset_coefficient(n, k));
                assert!(listed.windows(2).all(|w| w[0] < w[1]));
            }
        }
    }

    fn factorial(n: usize) -> u128 {
        (1..=n as u128).product()
    }

    proptest! {
        #[test]
        fn sign_commutation_rule(a in 0u32..256, b in 0u32..256) {
            let (x, y) = (Subset::from_mask(a), Subset::from_mask(b));
            let xy = subset_mul_sign(x, y);
            let yx = subset_mul_sign(y, x);
            prop_assert_eq!(xy.is_some(), yx.is_some());
            if let (Some((s1, u1)), Some((s2, u2))) = (xy, yx) {
                prop_assert_eq!(u1, u2);
                let expected = if (x.len() * y.len()) % 2 == 0 { 1 } else { -1 };
                prop_assert_eq!(s1 * s2, expected);
            }
        }

        #[test]
        fn single_variable_signs_agree_with_subset_product(i in 1usize..9, m in 0u32..256) {
            let sigma = Subset::from_mask(m);
            prop_assert_eq!(left_mul_sign(i, sigma), subset_mul_sign(Subset::singleton(i), sigma));
            prop_assert_eq!(right_mul_sign(sigma, i), subset_mul_sign(sigma, Subset::singleton(i)));
        }

        #[test]
        fn permutation_count_is_multinomial(raw in proptest::collection::vec(1usize..4, 0..=7)) {
            let tau = Multiset::new(raw);
            let perms = multiset_permutations(&tau);
            let mut denom: u128 = 1;
            for i in tau.support().elements() {
                denom *= factorial(tau.multiplicity(i));
            }
            prop_assert_eq!(perms.len() as u128, factorial(tau.len()) / denom);
            let mut sorted = perms.clone();
            sorted.dedup();
            prop_assert_eq!(sorted.len(), perms.len());
        }
    }
}
