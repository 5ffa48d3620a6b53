use num_bigint::BigInt;

use crate::algebra::{EnvAlgebra, EnvElement};
use crate::combinat::{Multiset, Subset};
use crate::complex::BasisLabel;
use crate::morse::{LazyMorseGraph, Matching};
use crate::ring::Integers;

use super::bar::{bar_boundary, bar_tensors};
use super::check_generators;
use crate::error::Result;

/// Role of a normalized tensor in the bar matching.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BarCell {
    /// A weakly increasing tensor of single variables.
    Critical,
    /// Matched with the lower tensor obtained by merging a factor into its
    /// successor.
    Upper { lower: Vec<Subset> },
    /// Matched with the upper tensor obtained by splitting off the largest
    /// variable of a factor.
    Lower { upper: Vec<Subset> },
}

/// Classifies `1⊗x_{σ1}⊗…⊗x_{σk}⊗1`. Let `x_{i1}⊗…⊗x_{ir}` be the longest
/// weakly increasing prefix of single variables. The tensor is critical if
/// `r = k`; otherwise it is a lower cell when `r = 0` or `i_r ≤ max σ_{r+1}`,
/// and an upper cell when `i_r > max σ_{r+1}`.
pub fn classify_bar_tensor(tensor: &[Subset]) -> BarCell {
    let mut r = 0;
    let mut last = 0;
    while r < tensor.len() && tensor[r].len() == 1 && tensor[r].min().unwrap() >= last {
        last = tensor[r].min().unwrap();
        r += 1;
    }
    if r == tensor.len() {
        return BarCell::Critical;
    }
    let next = tensor[r];
    let top = next.max().expect("factors are nonempty");
    if r == 0 || last <= top {
        let mut upper = tensor[..r].to_vec();
        upper.push(Subset::singleton(top));
        upper.push(next.without(top));
        upper.extend_from_slice(&tensor[r + 1..]);
        BarCell::Lower { upper }
    } else {
        let mut lower = tensor[..r - 1].to_vec();
        lower.push(next.with(last));
        lower.extend_from_slice(&tensor[r + 1..]);
        BarCell::Upper { lower }
    }
}

/// The bar matching on degrees `0..=max_degree`, as `(upper, lower)` edges.
pub fn bar_matching(n: usize, max_degree: usize) -> Result<Matching> {
    check_generators(n)?;
    let mut m = Matching::new();
    for k in 1..=max_degree {
        for t in bar_tensors(n, k) {
            if let BarCell::Upper { lower } = classify_bar_tensor(&t) {
                m.push(BasisLabel::Bar(t), BasisLabel::Bar(lower));
            }
        }
    }
    Ok(m)
}

/// The bar resolution with the bar matching, explored from single tensors
/// without materializing any degree.
#[derive(Clone, Debug)]
pub struct LazyBarGraph {
    env: EnvAlgebra<Integers>,
}

impl LazyBarGraph {
    pub fn new(n: usize) -> Result<Self> {
        check_generators(n)?;
        Ok(LazyBarGraph { env: EnvAlgebra::new(n, Integers) })
    }
}

impl LazyMorseGraph for LazyBarGraph {
    type Ring = EnvAlgebra<Integers>;

    fn ring(&self) -> &EnvAlgebra<Integers> {
        &self.env
    }

    fn boundary(&self, label: &BasisLabel) -> Vec<(BasisLabel, EnvElement<BigInt>)> {
        match label {
            BasisLabel::Bar(t) => bar_boundary(&self.env, t).into_iter().map(|(t, u)| (BasisLabel::Bar(t), u)).collect(),
            _ => Vec::new(),
        }
    }

    fn matched_source(&self, target: &BasisLabel) -> Option<BasisLabel> {
        match target {
            BasisLabel::Bar(t) => match classify_bar_tensor(t) {
                BarCell::Lower { upper } => Some(BasisLabel::Bar(upper)),
                _ => None,
            },
            _ => None,
        }
    }

    fn matched_target(&self, source: &BasisLabel) -> Option<BasisLabel> {
        match source {
            BasisLabel::Bar(t) => match classify_bar_tensor(t) {
                BarCell::Upper { lower } => Some(BasisLabel::Bar(lower)),
                _ => None,
            },
            _ => None,
        }
    }
}

/// Where the chain min-rule sends `x_σ ⊗ x_(τ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KoszulMove {
    Critical,
    /// Source of an edge to the given lower cell.
    Down(Subset, Multiset),
    /// Target of an edge from the given upper cell.
    Up(Subset, Multiset),
}

/// `i* = min(σ ∪ supp τ)`: move `i*` from `τ` into `σ` when `i* ∉ σ`,
/// otherwise from `σ` back into `τ`.
pub fn koszul_chain_move(sigma: Subset, tau: &Multiset) -> KoszulMove {
    let Some(i) = sigma.union(tau.support()).min() else { return KoszulMove::Critical };
    if sigma.contains(i) {
        KoszulMove::Up(sigma.without(i), tau.with_one(i))
    } else {
        KoszulMove::Down(sigma.with(i), tau.without_one(i).expect("i in the support"))
    }
}

/// The chain matching on the equal-parity summand, degrees `0..=max_degree`.
pub fn koszul_matching_chain(n: usize, max_degree: usize) -> Result<Matching> {
    check_generators(n)?;
    let mut m = Matching::new();
    for k in 1..=max_degree {
        for tau in crate::combinat::enumerate_multisets(n, k) {
            for sigma in Subset::all(n) {
                if sigma.parity_sign() != tau.parity_sign() {
                    continue;
                }
                if let KoszulMove::Down(s2, t2) = koszul_chain_move(sigma, &tau) {
                    m.push(BasisLabel::ChainPair { sigma, tau: tau.clone() }, BasisLabel::ChainPair { sigma: s2, tau: t2 });
                }
            }
        }
    }
    Ok(m)
}

/// For the cochain cell `φ_{τ,σ}`: with `i = min([n]∖σ)`, the partner
/// `φ_{τ∪i, σ∪i}` when no element of `supp τ` is below `i`.
pub fn koszul_cochain_partner(n: usize, tau: &Multiset, sigma: Subset) -> Option<(Multiset, Subset)> {
    let i = (1..=n).find(|&i| !sigma.contains(i))?;
    if tau.min().is_some_and(|m| m < i) {
        return None;
    }
    Some((tau.with_one(i), sigma.with(i)))
}

/// The cochain matching on the unequal-parity summand, degrees
/// `0..=max_degree`, as `(lower, upper)` edges of the coboundary.
pub fn koszul_matching_cochain(n: usize, max_degree: usize) -> Result<Matching> {
    check_generators(n)?;
    let mut m = Matching::new();
    for k in 0..max_degree {
        for tau in crate::combinat::enumerate_multisets(n, k) {
            for sigma in Subset::all(n) {
                if sigma.parity_sign() == tau.parity_sign() {
                    continue;
                }
                if let Some((t2, s2)) = koszul_cochain_partner(n, &tau, sigma) {
                    m.push(BasisLabel::CochainPair { tau: tau.clone(), sigma }, BasisLabel::CochainPair { tau: t2, sigma: s2 });
                }
            }
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hochschild::{build_bar_resolution, build_reduced_chain, build_reduced_cochain, halve, split_parity, DEFAULT_SIZE_LIMIT};
    use crate::morse::{check_matching, certify_lazy, reduce};

    fn s(xs: &[usize]) -> Subset {
        Subset::from_elements(xs)
    }

    fn ms(xs: &[usize]) -> Multiset {
        Multiset::new(xs.to_vec())
    }

    #[test]
    fn bar_cells_classify() {
        assert_eq!(classify_bar_tensor(&[s(&[1, 2])]), BarCell::Lower { upper: vec![s(&[2]), s(&[1])] });
        assert_eq!(classify_bar_tensor(&[s(&[1]), s(&[2])]), BarCell::Critical);
        assert_eq!(classify_bar_tensor(&[s(&[2]), s(&[1])]), BarCell::Upper { lower: vec![s(&[1, 2])] });
        assert_eq!(classify_bar_tensor(&[]), BarCell::Critical);
        // x1 ⊗ x12: prefix i1 = 1 ≤ max{1,2}, split off 2
        assert_eq!(classify_bar_tensor(&[s(&[1]), s(&[1, 2])]), BarCell::Lower { upper: vec![s(&[1]), s(&[2]), s(&[1])] });
    }

    #[test]
    fn matching_partners_are_mutual() {
        for t in bar_tensors(3, 3) {
            match classify_bar_tensor(&t) {
                BarCell::Upper { lower } => assert_eq!(classify_bar_tensor(&lower), BarCell::Lower { upper: t.clone() }),
                BarCell::Lower { upper } => assert_eq!(classify_bar_tensor(&upper), BarCell::Upper { lower: t.clone() }),
                BarCell::Critical => {}
            }
        }
    }

    #[test]
    fn bar_matching_is_morse() {
        let res = build_bar_resolution(2, 3, DEFAULT_SIZE_LIMIT).unwrap();
        let m = bar_matching(2, 3).unwrap();
        let cert = check_matching(&res, &m).unwrap();
        let lazy = certify_lazy(&LazyBarGraph::new(2).unwrap(), &(0..=3).map(|k| res.basis(k).to_vec()).collect::<Vec<_>>()).unwrap();
        for k in 0..3 {
            assert_eq!(cert.critical[k], lazy.critical[k]);
            assert!(cert.critical[k].iter().all(|l| l.as_variable_tensor().is_some()));
        }
    }

    #[test]
    fn chain_rule_examples() {
        assert_eq!(koszul_chain_move(Subset::EMPTY, &ms(&[1, 1])), KoszulMove::Down(s(&[1]), ms(&[1])));
        assert_eq!(koszul_chain_move(Subset::EMPTY, &ms(&[])), KoszulMove::Critical);
        assert_eq!(koszul_chain_move(s(&[1]), &ms(&[2, 2])), KoszulMove::Up(Subset::EMPTY, ms(&[1, 2, 2])));
    }

    #[test]
    fn koszul_matchings_are_morse_on_the_halved_summand() {
        for n in 1..=3 {
            let active = split_parity(&build_reduced_chain(n, 3).unwrap()).unwrap().active;
            let half = halve(&active).unwrap();
            let m = koszul_matching_chain(n, 3).unwrap();
            let cert = check_matching(&half, &m).unwrap();
            assert_eq!(cert.critical[0], vec![BasisLabel::ChainPair { sigma: Subset::EMPTY, tau: ms(&[]) }]);
            assert!(cert.critical[1..3].iter().all(Vec::is_empty), "n={n}: {:?}", cert.critical);
            let r = reduce(&half, &m).unwrap();
            assert!(r.validate().is_ok());

            let active = split_parity(&build_reduced_cochain(n, 3).unwrap()).unwrap().active;
            let m = koszul_matching_cochain(n, 3).unwrap();
            let cert = check_matching(&halve(&active).unwrap(), &m).unwrap();
            let expected: Vec<BasisLabel> =
                if n % 2 == 1 { vec![BasisLabel::CochainPair { tau: ms(&[]), sigma: Subset::full(n) }] } else { vec![] };
            assert_eq!(cert.critical[0], expected);
            assert!(cert.critical[1..3].iter().all(Vec::is_empty));
        }
        // n = 1: the rule sends φ_{∅,∅} to φ_{(1),{1}}; the cell has equal
        // parity, so it sits in the inert summand and carries no edge
        assert_eq!(koszul_cochain_partner(1, &ms(&[]), Subset::EMPTY), Some((ms(&[1]), s(&[1]))));
        let m = koszul_matching_cochain(1, 1).unwrap();
        assert!(!m.is_matched(&BasisLabel::CochainPair { tau: ms(&[]), sigma: Subset::EMPTY }));
        assert_eq!(koszul_cochain_partner(1, &ms(&[]), s(&[1])), None);
    }
}
