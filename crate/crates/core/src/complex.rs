//! Based (co)chain complexes: labeled bases, sparse differentials, and the
//! homology driver.

use std::collections::HashMap;
use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use crate::algebra::render_monomial;
use crate::combinat::{Multiset, Subset};
use crate::error::{Error, Result};
use crate::linalg::{homology_pair, rank_over_field, HomologyGroup, SparseMatrix};
use crate::ring::{Coefficients, Integers, Ring};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    /// Differentials lower the degree.
    Chain,
    /// Differentials raise the degree.
    Cochain,
}

/// Name of a basis element.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    /// Bar tensor `1⊗x_{σ1}⊗…⊗x_{σk}⊗1`.
    Bar(Vec<Subset>),
    /// Resolution generator `x_(τ)`.
    Generator(Multiset),
    /// Reduced chain cell `x_σ ⊗ x_(τ)`.
    ChainPair { sigma: Subset, tau: Multiset },
    /// Reduced cochain cell `φ_{τ,σ}`.
    CochainPair { tau: Multiset, sigma: Subset },
    /// Hochschild chain `x_σ ⊗ (x_{σ1}⊗…⊗x_{σk})`.
    BarChain { sigma: Subset, tensor: Vec<Subset> },
    /// Cochain sending the tensor to `x_σ` and every other tensor to 0.
    BarCochain { tensor: Vec<Subset>, sigma: Subset },
    /// Anonymous cell, used by toy complexes.
    Cell(usize),
}

impl BasisLabel {
    /// The variable tensor `1⊗x_{i1}⊗…⊗x_{ik}⊗1`.
    pub fn variable_tensor(indices: &[usize]) -> Self {
        BasisLabel::Bar(indices.iter().map(|&i| Subset::singleton(i)).collect())
    }

    /// Variable indices when this is a bar tensor of single variables.
    pub fn as_variable_tensor(&self) -> Option<Vec<usize>> {
        match self {
            BasisLabel::Bar(t) => variable_indices(t),
            _ => None,
        }
    }

    /// `(σ, τ)` for reduced chain and cochain cells.
    pub fn sigma_tau(&self) -> Option<(Subset, &Multiset)> {
        match self {
            BasisLabel::ChainPair { sigma, tau } | BasisLabel::CochainPair { tau, sigma } => Some((*sigma, tau)),
            _ => None,
        }
    }

    /// Checks that every index lies in `[n]` and bar factors are nonempty.
    pub fn is_well_formed(&self, n: usize) -> bool {
        let full = Subset::full(n);
        let tensor_ok = |t: &[Subset]| t.iter().all(|s| !s.is_empty() && s.is_subset_of(full));
        let multiset_ok = |m: &Multiset| m.elements().iter().all(|&i| (1..=n).contains(&i));
        match self {
            BasisLabel::Bar(t) => tensor_ok(t),
            BasisLabel::Generator(tau) => multiset_ok(tau),
            BasisLabel::ChainPair { sigma, tau } | BasisLabel::CochainPair { tau, sigma } => {
                sigma.is_subset_of(full) && multiset_ok(tau)
            }
            BasisLabel::BarChain { sigma, tensor } | BasisLabel::BarCochain { tensor, sigma } => {
                sigma.is_subset_of(full) && tensor_ok(tensor)
            }
            BasisLabel::Cell(_) => true,
        }
    }
}

pub(crate) fn variable_indices(tensor: &[Subset]) -> Option<Vec<usize>> {
    tensor.iter().map(|s| if s.len() == 1 { Subset::min(*s) } else { None }).collect()
}

fn render_tensor(tensor: &[Subset], sep: &str) -> String {
    tensor.iter().map(|s| render_monomial(*s)).collect::<Vec<_>>().join(sep)
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisLabel::Bar(t) if t.is_empty() => write!(f, "1⊗1"),
            BasisLabel::Bar(t) => write!(f, "1⊗{}⊗1", render_tensor(t, "⊗")),
            BasisLabel::Generator(tau) => write!(f, "x_{tau}"),
            BasisLabel::ChainPair { sigma, tau } => write!(f, "{}⊗x_{tau}", render_monomial(*sigma)),
            BasisLabel::CochainPair { tau, sigma } => write!(f, "phi[{tau};{}]", render_monomial(*sigma)),
            BasisLabel::BarChain { sigma, tensor } => {
                write!(f, "{}⊗[{}]", render_monomial(*sigma), render_tensor(tensor, "|"))
            }
            BasisLabel::BarCochain { tensor, sigma } => {
                write!(f, "f[{};{}]", render_tensor(tensor, "|"), render_monomial(*sigma))
            }
            BasisLabel::Cell(i) => write!(f, "c{i}"),
        }
    }
}

/// A (co)chain complex truncated at `max_degree`, with labeled bases and
/// differentials over `R`.
///
/// `differentials[k]` has source degree `k`. Chain complexes store degrees
/// `0..=max` (the degree-0 map goes to the zero module); cochain complexes
/// store `0..max`, the map out of the top degree being unknown.
#[derive(Clone, Debug)]
pub struct BasedComplex<R: Ring> {
    ring: R,
    orientation: Orientation,
    bases: Vec<Vec<BasisLabel>>,
    differentials: Vec<SparseMatrix<R::Elem>>,
    index: Vec<HashMap<BasisLabel, usize>>,
}

impl<R: Ring> BasedComplex<R> {
    /// Chain complex from bases in degrees `0..=max` and differentials
    /// `d_1..d_max` (`d_k: C_k → C_{k-1}`).
    pub fn chain(ring: R, bases: Vec<Vec<BasisLabel>>, lowering: Vec<SparseMatrix<R::Elem>>) -> Result<Self> {
        let Some(first) = bases.first() else {
            return Self::assemble(ring, Orientation::Chain, bases, Vec::new());
        };
        let mut differentials = vec![SparseMatrix::zero(0, first.len())];
        differentials.extend(lowering);
        Self::assemble(ring, Orientation::Chain, bases, differentials)
    }

    /// Cochain complex from bases in degrees `0..=max` and differentials
    /// `δ^0..δ^{max-1}` (`δ^k: C^k → C^{k+1}`).
    pub fn cochain(ring: R, bases: Vec<Vec<BasisLabel>>, raising: Vec<SparseMatrix<R::Elem>>) -> Result<Self> {
        Self::assemble(ring, Orientation::Cochain, bases, raising)
    }

    fn assemble(
        ring: R,
        orientation: Orientation,
        bases: Vec<Vec<BasisLabel>>,
        differentials: Vec<SparseMatrix<R::Elem>>,
    ) -> Result<Self> {
        let expected = match orientation {
            Orientation::Chain => bases.len(),
            Orientation::Cochain => bases.len().saturating_sub(1),
        };
        if differentials.len() != expected {
            return Err(Error::DimensionMismatch(format!(
                "{} degrees need {expected} differentials, got {}",
                bases.len(),
                differentials.len()
            )));
        }
        for (k, d) in differentials.iter().enumerate() {
            let target = match orientation {
                Orientation::Chain if k == 0 => 0,
                Orientation::Chain => bases[k - 1].len(),
                Orientation::Cochain => bases[k + 1].len(),
            };
            if d.cols() != bases[k].len() || d.rows() != target {
                return Err(Error::DimensionMismatch(format!(
                    "differential out of degree {k} is {}x{}, expected {target}x{}",
                    d.rows(),
                    d.cols(),
                    bases[k].len()
                )));
            }
        }
        let mut index = Vec::with_capacity(bases.len());
        for basis in &bases {
            let mut map = HashMap::with_capacity(basis.len());
            for (i, label) in basis.iter().enumerate() {
                if map.insert(label.clone(), i).is_some() {
                    return Err(Error::InvalidInput(format!("label {label} repeated in one degree")));
                }
            }
            index.push(map);
        }
        Ok(BasedComplex { ring, orientation, bases, differentials, index })
    }

    pub fn ring(&self) -> &R {
        &self.ring
    }

    pub fn orientation(&self) -> Orientation {
        self.orientation
    }

    /// Highest degree with a basis (`None` for the empty complex).
    pub fn max_degree(&self) -> Option<usize> {
        self.bases.len().checked_sub(1)
    }

    pub fn degrees(&self) -> usize {
        self.bases.len()
    }

    pub fn basis(&self, k: usize) -> &[BasisLabel] {
        self.bases.get(k).map_or(&[], Vec::as_slice)
    }

    pub fn rank(&self, k: usize) -> usize {
        self.basis(k).len()
    }

    pub fn position(&self, k: usize, label: &BasisLabel) -> Option<usize> {
        self.index.get(k)?.get(label).copied()
    }

    /// Degree and position of a label anywhere in the complex.
    pub fn locate(&self, label: &BasisLabel) -> Option<(usize, usize)> {
        self.index.iter().enumerate().find_map(|(k, m)| m.get(label).map(|&i| (k, i)))
    }

    /// Differential out of degree `k`, when constructed.
    pub fn differential(&self, k: usize) -> Option<&SparseMatrix<R::Elem>> {
        self.differentials.get(k)
    }

    pub fn differentials(&self) -> &[SparseMatrix<R::Elem>] {
        &self.differentials
    }

    /// Target degree of the differential out of degree `k`.
    pub fn target_degree(&self, k: usize) -> Option<usize> {
        match self.orientation {
            Orientation::Chain => k.checked_sub(1),
            Orientation::Cochain => Some(k + 1),
        }
    }

    /// Image of a basis element as `(target label, weight)` pairs.
    pub fn boundary_of(&self, k: usize, label: &BasisLabel) -> Result<Vec<(BasisLabel, R::Elem)>> {
        let i = self.position(k, label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
        let d = self.differential(k).ok_or(Error::OutOfRange { degree: k, max_degree: self.max_degree().unwrap_or(0) })?;
        let t = self.target_degree(k);
        Ok(d.column(i).iter().map(|(r, w)| (self.bases[t.unwrap()][*r].clone(), w.clone())).collect())
    }

    /// Checks that consecutive differentials compose to zero.
    pub fn validate(&self) -> ValidationReport {
        let mut failures = Vec::new();
        for k in 0..self.differentials.len() {
            let Some(t) = self.target_degree(k) else { continue };
            let Some(next) = self.differentials.get(t) else { continue };
            if self.orientation == Orientation::Chain && t == 0 {
                continue;
            }
            match SparseMatrix::compose(&self.ring, next, &self.differentials[k]) {
                Ok(c) => {
                    if let Some((row, col, _)) = c.entries().next() {
                        let target = self.target_degree(t).unwrap();
                        failures.push(CompositeFailure {
                            degree: k,
                            source: self.bases[k][col].to_string(),
                            target: self.bases[target][row].to_string(),
                            nonzero_entries: c.nnz(),
                        });
                    }
                }
                Err(e) => failures.push(CompositeFailure {
                    degree: k,
                    source: e.to_string(),
                    target: String::new(),
                    nonzero_entries: 0,
                }),
            }
        }
        ValidationReport { failures }
    }

    /// Same complex with every degree reordered: `perms[k][new] = old`.
    pub fn permuted(&self, perms: &[Vec<usize>]) -> Result<Self> {
        if perms.len() != self.bases.len() || perms.iter().zip(&self.bases).any(|(p, b)| p.len() != b.len()) {
            return Err(Error::DimensionMismatch("permutation shape differs from the bases".into()));
        }
        let inverse: Vec<Vec<usize>> = perms
            .iter()
            .map(|p| {
                let mut inv = vec![0; p.len()];
                for (new, &old) in p.iter().enumerate() {
                    inv[old] = new;
                }
                inv
            })
            .collect();
        let bases = perms.iter().zip(&self.bases).map(|(p, b)| p.iter().map(|&o| b[o].clone()).collect()).collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| {
                let t = self.target_degree(k).filter(|_| d.rows() > 0);
                let triplets = d.entries().map(|(r, c, w)| (t.map_or(r, |t| inverse[t][r]), inverse[k][c], w.clone()));
                SparseMatrix::from_triplets(&self.ring, d.rows(), d.cols(), triplets)
            })
            .collect();
        Self::assemble(self.ring.clone(), self.orientation, bases, differentials)
    }

    /// Base change along `f`.
    pub fn map_ring<S: Ring>(&self, target: S, f: impl Fn(&R::Elem) -> S::Elem) -> BasedComplex<S> {
        let differentials = self.differentials.iter().map(|d| d.map(&target, &f)).collect();
        BasedComplex {
            ring: target,
            orientation: self.orientation,
            bases: self.bases.clone(),
            differentials,
            index: self.index.clone(),
        }
    }

    /// Subcomplex spanned by the labels satisfying `keep`. The caller is
    /// responsible for the span being closed under the differential.
    pub fn restrict(&self, keep: impl Fn(&BasisLabel) -> bool) -> Result<Self> {
        let kept: Vec<Vec<usize>> =
            self.bases.iter().map(|b| (0..b.len()).filter(|&i| keep(&b[i])).collect()).collect();
        let bases = kept.iter().zip(&self.bases).map(|(ids, b)| ids.iter().map(|&i| b[i].clone()).collect()).collect();
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .map(|(k, d)| match self.target_degree(k) {
                Some(t) if d.rows() > 0 => d.submatrix(&kept[t], &kept[k]),
                _ => SparseMatrix::zero(0, kept[k].len()),
            })
            .collect();
        Self::assemble(self.ring.clone(), self.orientation, bases, differentials)
    }

    /// Line-oriented text dump: a header, then each basis and each
    /// differential as `row col weight` lines.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let orientation = match self.orientation {
            Orientation::Chain => "chain",
            Orientation::Cochain => "cochain",
        };
        out.push_str(&format!("complex {orientation} degrees {}\n", self.bases.len()));
        for (k, basis) in self.bases.iter().enumerate() {
            out.push_str(&format!("basis {k} size {}\n", basis.len()));
            for (i, label) in basis.iter().enumerate() {
                out.push_str(&format!("  {i} {label}\n"));
            }
        }
        for (k, d) in self.differentials.iter().enumerate() {
            let Some(t) = self.target_degree(k).filter(|_| d.rows() > 0) else { continue };
            out.push_str(&format!("differential {k} -> {t} entries {}\n", d.nnz()));
            let mut entries: Vec<_> = d.entries().collect();
            entries.sort_by_key(|(r, c, _)| (*c, *r));
            for (r, c, w) in entries {
                out.push_str(&format!("  {c} {r} {}\n", self.ring.render(w)));
            }
        }
        out
    }

    /// Serializable snapshot with labels and weights rendered as strings.
    pub fn dump(&self) -> ComplexDump {
        let differentials = self
            .differentials
            .iter()
            .enumerate()
            .filter_map(|(k, d)| {
                let t = self.target_degree(k).filter(|_| d.rows() > 0)?;
                let mut entries: Vec<_> =
                    d.entries().map(|(r, c, w)| EntryDump { source: c, target: r, weight: self.ring.render(w) }).collect();
                entries.sort_by_key(|e| (e.source, e.target));
                Some(DifferentialDump { source_degree: k, target_degree: t, entries })
            })
            .collect();
        ComplexDump {
            orientation: self.orientation,
            bases: self.bases.iter().map(|b| b.iter().map(ToString::to_string).collect()).collect(),
            differentials,
        }
    }
}

impl BasedComplex<Integers> {
    /// Homology in degree `k` with coefficients in `coeffs`, computed from
    /// the integer differentials.
    pub fn homology(&self, k: usize, coeffs: Coefficients) -> Result<HomologyGroup> {
        coeffs.validate()?;
        let max = self.max_degree().unwrap_or(0);
        let out_of_range = Error::OutOfRange { degree: k, max_degree: max };
        if k >= self.bases.len() {
            return Err(out_of_range);
        }
        let outgoing = self.differentials.get(k).ok_or(out_of_range.clone())?;
        let incoming = match self.orientation {
            Orientation::Chain => self.differentials.get(k + 1).cloned().ok_or(out_of_range)?,
            Orientation::Cochain if k == 0 => SparseMatrix::zero(self.bases[0].len(), 0),
            Orientation::Cochain => self.differentials[k - 1].clone(),
        };
        match coeffs {
            Coefficients::Integers => homology_pair(outgoing, &incoming),
            _ => {
                let p = coeffs.characteristic();
                let dim = self.bases[k].len() - rank_over_field(outgoing, p)? - rank_over_field(&incoming, p)?;
                Ok(HomologyGroup::free(dim))
            }
        }
    }

    /// Highest degree whose homology is computable (one below the top).
    pub fn homology_degrees(&self) -> usize {
        self.bases.len().saturating_sub(1)
    }

    /// Sum of basis coefficients of `v`, as an integer vector in degree `k`.
    pub fn vector(&self, k: usize, terms: &[(BasisLabel, BigInt)]) -> Result<Vec<BigInt>> {
        let mut v = vec![BigInt::from(0); self.rank(k)];
        for (label, c) in terms {
            let i = self.position(k, label).ok_or_else(|| Error::UnknownLabel(label.to_string()))?;
            v[i] += c;
        }
        Ok(v)
    }
}

/// A degree where the composite of consecutive differentials is nonzero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CompositeFailure {
    /// Source degree of the first map.
    pub degree: usize,
    pub source: String,
    pub target: String,
    pub nonzero_entries: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Default, Serialize)]
pub struct ValidationReport {
    pub failures: Vec<CompositeFailure>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.failures.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "ok");
        }
        for fail in &self.failures {
            writeln!(
                f,
                "composite out of degree {} nonzero ({} entries, first at {} -> {})",
                fail.degree, fail.nonzero_entries, fail.source, fail.target
            )?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryDump {
    pub source: usize,
    pub target: usize,
    pub weight: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct DifferentialDump {
    pub source_degree: usize,
    pub target_degree: usize,
    pub entries: Vec<EntryDump>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ComplexDump {
    pub orientation: Orientation,
    pub bases: Vec<Vec<String>>,
    pub differentials: Vec<DifferentialDump>,
}

/// Cells `c0, c1, …` numbered consecutively across degrees.
pub fn cells(sizes: &[usize]) -> Vec<Vec<BasisLabel>> {
    let mut next = 0;
    sizes
        .iter()
        .map(|&s| {
            let b = (next..next + s).map(BasisLabel::Cell).collect();
            next += s;
            b
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn m(rows: &[Vec<i64>]) -> SparseMatrix<BigInt> {
        SparseMatrix::from_dense(rows)
    }

    #[test]
    fn composite_failure_is_reported() {
        let c = BasedComplex::chain(Integers, cells(&[1, 1, 1]), vec![m(&[vec![1]]), m(&[vec![1]])]).unwrap();
        let report = c.validate();
        assert_eq!(report.failures.len(), 1);
        assert_eq!(report.failures[0].degree, 2);
        let empty = BasedComplex::chain(Integers, Vec::new(), Vec::new()).unwrap();
        assert!(empty.validate().is_ok());
    }

    #[test]
    fn shapes_are_checked() {
        let err = BasedComplex::chain(Integers, cells(&[1, 2]), vec![m(&[vec![1]])]).unwrap_err();
        assert!(matches!(err, Error::DimensionMismatch(_)));
        let dup = BasedComplex::chain(Integers, vec![vec![BasisLabel::Cell(0), BasisLabel::Cell(0)]], Vec::new());
        assert!(matches!(dup, Err(Error::InvalidInput(_))));
    }

    #[test]
    fn homology_of_a_small_chain_complex() {
        // Z <-0- Z^2 <-[2,0]^T- Z : H_1 = Z ⊕ Z_2
        let c = BasedComplex::chain(
            Integers,
            cells(&[1, 2, 1]),
            vec![m(&[vec![0, 0]]), m(&[vec![2], vec![0]])],
        )
        .unwrap();
        assert_eq!(c.homology(1, Coefficients::Integers).unwrap(), HomologyGroup::with_two_torsion(1, 1));
        assert_eq!(c.homology(0, Coefficients::Integers).unwrap(), HomologyGroup::free(1));
        assert_eq!(c.homology(1, Coefficients::F2).unwrap(), HomologyGroup::free(2));
        assert_eq!(c.homology(1, Coefficients::Rationals).unwrap(), HomologyGroup::free(1));
        assert_eq!(c.homology(2, Coefficients::Integers), Err(Error::OutOfRange { degree: 2, max_degree: 2 }));
    }

    #[test]
    fn cochain_homology_uses_incoming_map() {
        // Z -[2]-> Z : H^0 = 0, H^1 at the top is out of range
        let c = BasedComplex::cochain(Integers, cells(&[1, 1]), vec![m(&[vec![2]])]).unwrap();
        assert_eq!(c.homology(0, Coefficients::Integers).unwrap(), HomologyGroup::default());
        assert!(matches!(c.homology(1, Coefficients::Integers), Err(Error::OutOfRange { .. })));
        assert_eq!(c.homology(0, Coefficients::F2).unwrap(), HomologyGroup::free(1));
    }

    #[test]
    fn permutation_preserves_homology() {
        let c = BasedComplex::chain(
            Integers,
            cells(&[2, 2, 1]),
            vec![m(&[vec![1, 1], vec![-1, -1]]), m(&[vec![3], vec![-3]])],
        )
        .unwrap();
        assert!(c.validate().is_ok());
        let p = c.permuted(&[vec![1, 0], vec![1, 0], vec![0]]).unwrap();
        assert!(p.validate().is_ok());
        for k in 0..2 {
            assert_eq!(c.homology(k, Coefficients::Integers).unwrap(), p.homology(k, Coefficients::Integers).unwrap());
        }
        assert_eq!(p.basis(1)[0], BasisLabel::Cell(3));
        assert_eq!(p.boundary_of(2, &BasisLabel::Cell(4)).unwrap().len(), 2);
    }

    #[test]
    fn labels_render() {
        let s12 = Subset::from_elements(&[1, 2]);
        assert_eq!(BasisLabel::variable_tensor(&[2, 1]).to_string(), "1⊗x2⊗x1⊗1");
        assert_eq!(BasisLabel::Bar(vec![]).to_string(), "1⊗1");
        assert_eq!(BasisLabel::Generator(Multiset::new(vec![2, 1])).to_string(), "x_(1,2)");
        assert_eq!(BasisLabel::ChainPair { sigma: s12, tau: Multiset::empty() }.to_string(), "x1^x2⊗x_()");
        assert_eq!(
            BasisLabel::CochainPair { tau: Multiset::new(vec![1]), sigma: Subset::EMPTY }.to_string(),
            "phi[(1);1]"
        );
        assert_eq!(BasisLabel::variable_tensor(&[1, 1]).as_variable_tensor(), Some(vec![1, 1]));
        assert_eq!(BasisLabel::Bar(vec![s12]).as_variable_tensor(), None);
        assert!(!BasisLabel::Bar(vec![Subset::EMPTY]).is_well_formed(2));
    }

    #[test]
    fn dumps_are_sorted() {
        let c = BasedComplex::chain(Integers, cells(&[1, 2]), vec![m(&[vec![1, -1]])]).unwrap();
        let text = c.to_text();
        assert!(text.contains("differential 1 -> 0 entries 2\n  0 0 1\n  1 0 -1\n"), "{text}");
        let d = c.dump();
        assert_eq!(d.differentials.len(), 1);
        assert_eq!(d.bases[1], vec!["c1", "c2"]);
    }
}
