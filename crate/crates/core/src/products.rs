//! Cup products on Hochschild cochains, the ring `HH^*(A; A)`, and the
//! shuffle product on Hochschild chains.
//!
//! The reduced ring uses the monomials `x_σ ⊗ x_τ` of `Λ ⊗ K[x]`, with
//! `x_σ ⊗ x_τ` standing for the reduced cochain `φ_{τ,σ}`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use serde::Serialize;

use crate::algebra::{render_monomial, ExtAlgebra, ExtElement};
use crate::combinat::{subset_mul_sign, Multiset, Subset};
use crate::complex::{BasedComplex, BasisLabel};
use crate::error::{Error, Result};
use crate::hochschild::{build_bar_hochschild_cochain, build_reduced_cochain, check_generators, pushforward_cochain};
use crate::linalg::{FieldEchelon, SparseMatrix};
use crate::ring::{Coefficients, Integers, PrimeField, Rationals, Ring};

/// A Hochschild cochain `A^{⊗k} → A` on the normalized bar basis: a value in
/// `A` for each tensor of nonempty monomials, zero where absent.
#[derive(Clone, Debug, PartialEq)]
pub struct BarCochain<E> {
    n: usize,
    degree: usize,
    values: BTreeMap<Vec<Subset>, ExtElement<E>>,
}

impl<E: Clone + PartialEq + fmt::Debug> BarCochain<E> {
    pub fn zero(n: usize, degree: usize) -> Self {
        BarCochain { n, degree, values: BTreeMap::new() }
    }

    /// The 0-cochain with the given value.
    pub fn constant<R: Ring<Elem = E>>(ext: &ExtAlgebra<R>, value: ExtElement<E>) -> Self {
        let mut f = Self::zero(ext.generators(), 0);
        f.set(ext, Vec::new(), value);
        f
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    /// Sets the value on one tensor; panics if the tensor has the wrong length.
    pub fn set<R: Ring<Elem = E>>(&mut self, ext: &ExtAlgebra<R>, tensor: Vec<Subset>, value: ExtElement<E>) {
        assert_eq!(tensor.len(), self.degree, "tensor length must match the cochain degree");
        if ext.is_zero(&value) {
            self.values.remove(&tensor);
        } else {
            self.values.insert(tensor, value);
        }
    }

    pub fn value(&self, tensor: &[Subset]) -> Option<&ExtElement<E>> {
        self.values.get(tensor)
    }

    pub fn is_zero(&self) -> bool {
        self.values.is_empty()
    }

    /// Builds a cochain from `φ_{v,σ}` coordinates.
    pub fn from_terms<R: Ring<Elem = E>>(
        ext: &ExtAlgebra<R>,
        degree: usize,
        terms: impl IntoIterator<Item = (BasisLabel, E)>,
    ) -> Result<Self> {
        let mut grouped: BTreeMap<Vec<Subset>, Vec<(Subset, E)>> = BTreeMap::new();
        for (label, c) in terms {
            match label {
                BasisLabel::BarCochain { tensor, sigma } if tensor.len() == degree => {
                    grouped.entry(tensor).or_default().push((sigma, c));
                }
                other => return Err(Error::MixedLabels(other.to_string())),
            }
        }
        let mut f = Self::zero(ext.generators(), degree);
        for (tensor, terms) in grouped {
            f.set(ext, tensor, ext.from_terms(terms));
        }
        Ok(f)
    }

    /// `φ_{v,σ}` coordinates in label order.
    pub fn terms(&self) -> Vec<(BasisLabel, E)> {
        self.values
            .iter()
            .flat_map(|(t, value)| {
                value.terms().map(|(s, c)| (BasisLabel::BarCochain { tensor: t.clone(), sigma: *s }, c.clone()))
            })
            .collect()
    }
}

/// `(f⌣g)(a1⊗…⊗a_{k+l}) = f(a1⊗…⊗ak) · g(a_{k+1}⊗…⊗a_{k+l})`.
pub fn cup_bar<R: Ring>(
    ext: &ExtAlgebra<R>,
    f: &BarCochain<R::Elem>,
    g: &BarCochain<R::Elem>,
) -> Result<BarCochain<R::Elem>> {
    if f.n != g.n || f.n != ext.generators() {
        return Err(Error::DimensionMismatch(format!(
            "cochains on {} and {} generators over an algebra on {}",
            f.n,
            g.n,
            ext.generators()
        )));
    }
    let mut out = BarCochain::zero(f.n, f.degree + g.degree);
    for (s, a) in &f.values {
        for (t, b) in &g.values {
            let mut tensor = s.clone();
            tensor.extend_from_slice(t);
            out.set(ext, tensor, ext.mul(a, b));
        }
    }
    Ok(out)
}

/// `φ_{τ,σ} ⌣ φ_{τ',σ'} = ±φ_{τ⊎τ', σ∪σ'}` with the sign of `x_σ x_σ'`;
/// `None` when `σ` and `σ'` meet.
pub fn cup_reduced(a: &BasisLabel, b: &BasisLabel) -> Result<Option<(i64, BasisLabel)>> {
    let (BasisLabel::CochainPair { tau, sigma }, BasisLabel::CochainPair { tau: tau2, sigma: sigma2 }) = (a, b) else {
        let bad = if matches!(a, BasisLabel::CochainPair { .. }) { b } else { a };
        return Err(Error::MixedLabels(bad.to_string()));
    };
    Ok(subset_mul_sign(*sigma, *sigma2).map(|(sign, union)| (sign, BasisLabel::CochainPair { tau: tau.sum(tau2), sigma: union })))
}

/// Bilinear extension of [`cup_reduced`].
pub fn cup_reduced_cochains<R: Ring>(
    ring: &R,
    a: &[(BasisLabel, R::Elem)],
    b: &[(BasisLabel, R::Elem)],
) -> Result<Vec<(BasisLabel, R::Elem)>> {
    let mut out: BTreeMap<BasisLabel, R::Elem> = BTreeMap::new();
    for (x, c) in a {
        for (y, d) in b {
            if let Some((sign, z)) = cup_reduced(x, y)? {
                let v = ring.mul(&ring.mul(c, d), &ring.from_int(sign));
                let slot = out.entry(z).or_insert_with(|| ring.zero());
                *slot = ring.add(slot, &v);
            }
        }
    }
    Ok(out.into_iter().filter(|(_, c)| !ring.is_zero(c)).collect())
}

/// `x_σ ⊗ x_τ` notation for `φ_{τ,σ}`, with the polynomial variables
/// written `y`: e.g. `x1^x2⊗y1^2y3`.
pub fn monomial_name(tau: &Multiset, sigma: Subset) -> String {
    let mut poly = String::new();
    let mut i = 0;
    let e = tau.elements();
    while i < e.len() {
        let mut j = i;
        while j < e.len() && e[j] == e[i] {
            j += 1;
        }
        poly.push_str(&format!("y{}", e[i]));
        if j - i > 1 {
            poly.push_str(&format!("^{}", j - i));
        }
        i = j;
    }
    if poly.is_empty() {
        poly.push('1');
    }
    format!("{}⊗{}", render_monomial(sigma), poly)
}

fn require_field(ring: Coefficients) -> Result<()> {
    ring.validate()?;
    if !ring.is_field() {
        return Err(Error::UnsupportedRing(format!("{ring} is not a field")));
    }
    Ok(())
}

fn to_field<F: Ring>(field: &F, m: &SparseMatrix<BigInt>) -> SparseMatrix<F::Elem> {
    m.map(field, |v| field.from_bigint(v))
}

fn unit<F: Ring>(field: &F, i: usize) -> Vec<(usize, F::Elem)> {
    vec![(i, field.one())]
}

/// Reduced cochain complex over a field, one degree past `max_degree` so
/// every degree up to `max_degree` has its outgoing coboundary.
struct ReducedOverField<F: Ring> {
    complex: BasedComplex<Integers>,
    coboundaries: Vec<SparseMatrix<F::Elem>>,
}

impl<F: Ring> ReducedOverField<F> {
    fn new(field: &F, n: usize, max_degree: usize) -> Result<Self> {
        let complex = build_reduced_cochain(n, max_degree + 1)?;
        let coboundaries = complex.differentials().iter().map(|d| to_field(field, d)).collect();
        Ok(ReducedOverField { complex, coboundaries })
    }

    /// Echelon form of `im δ_{k-1}` inside degree `k`.
    fn image(&self, field: &F, k: usize) -> FieldEchelon<F> {
        let mut ech = FieldEchelon::new(field.clone());
        if k > 0 {
            let d = &self.coboundaries[k - 1];
            for c in 0..d.cols() {
                ech.insert(d.column(c));
            }
        }
        ech
    }

    /// Basis cells of degree `k` that are cocycles and independent modulo
    /// coboundaries, checked against the dimension of `H^k`.
    fn class_cells(&self, field: &F, k: usize) -> Result<Vec<usize>> {
        let d = &self.coboundaries[k];
        let mut ech = self.image(field, k);
        let boundary_rank = ech.rank();
        let mut picked = Vec::new();
        for c in 0..d.cols() {
            if d.column(c).is_empty() && ech.insert(&unit(field, c)) {
                picked.push(c);
            }
        }
        let dimension = d.cols() - crate::linalg::rank(field, d) - boundary_rank;
        if picked.len() != dimension {
            return Err(Error::InvalidInput(format!(
                "degree {k} cohomology (dimension {dimension}) is not spanned by basis cells ({} found)",
                picked.len()
            )));
        }
        Ok(picked)
    }
}

/// Cells of the reduced cochain complex representing a basis of `H^k` for
/// each `k ≤ max_degree`, over a field.
pub fn cohomology_basis(n: usize, ring: Coefficients, max_degree: usize) -> Result<Vec<Vec<BasisLabel>>> {
    check_generators(n)?;
    require_field(ring)?;
    match ring {
        Coefficients::Rationals => cohomology_basis_over(&Rationals, n, max_degree),
        Coefficients::Prime(p) => cohomology_basis_over(&PrimeField::new(p)?, n, max_degree),
        Coefficients::Integers => unreachable!("checked above"),
    }
}

fn cohomology_basis_over<F: Ring>(field: &F, n: usize, max_degree: usize) -> Result<Vec<Vec<BasisLabel>>> {
    let reduced = ReducedOverField::new(field, n, max_degree)?;
    (0..=max_degree)
        .map(|k| Ok(reduced.class_cells(field, k)?.into_iter().map(|c| reduced.complex.basis(k)[c].clone()).collect()))
        .collect()
}

/// A basis class of the ring, represented by a reduced cochain cell.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RingClass {
    pub degree: usize,
    /// `x_σ ⊗ x_τ` notation.
    pub monomial: String,
    /// The representing cochain `φ_{τ,σ}`.
    pub cochain: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClassTerm {
    pub class: String,
    pub coefficient: String,
}

/// One product of basis classes, computed both ways.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ProductEntry {
    pub left: String,
    pub right: String,
    pub degree: usize,
    /// Via the reduced cup product.
    pub reduced: Vec<ClassTerm>,
    /// Via the bar cup product of lifted cocycles, pulled back along `h`.
    /// `None` if the pulled-back product is not a class combination.
    pub oracle: Option<Vec<ClassTerm>>,
    pub agree: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct StructureTable {
    pub n: usize,
    pub ring: String,
    pub max_total_degree: usize,
    pub classes: Vec<RingClass>,
    pub products: Vec<ProductEntry>,
    pub agrees: bool,
}

impl StructureTable {
    /// Dimension of the ring in each degree.
    pub fn dimensions(&self) -> Vec<usize> {
        let mut dims = vec![0; self.max_total_degree + 1];
        for c in &self.classes {
            dims[c.degree] += 1;
        }
        dims
    }

    /// The product of two classes named in `x_σ ⊗ x_τ` notation.
    pub fn product(&self, left: &str, right: &str) -> Option<&ProductEntry> {
        self.products.iter().find(|p| p.left == left && p.right == right)
    }

    pub fn disagreements(&self) -> impl Iterator<Item = &ProductEntry> {
        self.products.iter().filter(|p| !p.agree)
    }
}

fn render_combination(terms: &[ClassTerm]) -> String {
    if terms.is_empty() {
        return "0".into();
    }
    terms
        .iter()
        .map(|t| if t.coefficient == "1" { t.class.clone() } else { format!("{}·{}", t.coefficient, t.class) })
        .collect::<Vec<_>>()
        .join(" + ")
}

impl fmt::Display for StructureTable {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "HH^*(A;A) for n = {} over {}, total degree <= {}", self.n, self.ring, self.max_total_degree)?;
        for (k, d) in self.dimensions().iter().enumerate() {
            let names: Vec<&str> = self.classes.iter().filter(|c| c.degree == k).map(|c| c.monomial.as_str()).collect();
            writeln!(f, "  degree {k} (dim {d}): {}", names.join(", "))?;
        }
        let width = self.products.iter().map(|p| p.left.chars().count() + p.right.chars().count() + 3).max().unwrap_or(0);
        for p in &self.products {
            let lhs = format!("{} * {}", p.left, p.right);
            let pad = width.saturating_sub(lhs.chars().count());
            write!(f, "  {lhs}{} = {}", " ".repeat(pad), render_combination(&p.reduced))?;
            if !p.agree {
                match &p.oracle {
                    Some(o) => write!(f, "   MISMATCH, oracle gives {}", render_combination(o))?,
                    None => write!(f, "   MISMATCH, oracle product is not a class combination")?,
                }
            }
            writeln!(f)?;
        }
        write!(f, "verdict: {}", if self.agrees { "reduced and oracle products agree" } else { "products disagree" })
    }
}

/// Multiplication table of `HH^*(A; A)` over a field through the given total
/// degree. The reduced cup product is checked class by class against the
/// bar-level cup product of lifted cocycles, pulled back along `h` and
/// compared modulo coboundaries.
pub fn ring_structure_constants(n: usize, ring: Coefficients, max_total_degree: usize, limit: usize) -> Result<StructureTable> {
    check_generators(n)?;
    require_field(ring)?;
    match ring {
        Coefficients::Rationals => structure_over(&Rationals, ring, n, max_total_degree, limit),
        Coefficients::Prime(p) => structure_over(&PrimeField::new(p)?, ring, n, max_total_degree, limit),
        Coefficients::Integers => unreachable!("checked above"),
    }
}

/// Lifts reduced cocycle classes to bar cocycles: solves
/// `h̄(f) + δ̊c = a`, `δf = 0` for `(f, c)`.
struct Lifter<F: Ring> {
    bar_cells: usize,
    system: FieldEchelon<F>,
}

impl<F: Ring> Lifter<F> {
    fn new(
        field: &F,
        pull: &SparseMatrix<F::Elem>,
        bar_delta: &SparseMatrix<F::Elem>,
        reduced_delta_below: Option<&SparseMatrix<F::Elem>>,
    ) -> Self {
        let rows = pull.rows();
        let mut system = FieldEchelon::new(field.clone());
        for c in 0..pull.cols() {
            let mut col: Vec<(usize, F::Elem)> = pull.column(c).to_vec();
            col.extend(bar_delta.column(c).iter().map(|(r, v)| (rows + r, v.clone())));
            system.insert(&col);
        }
        if let Some(d) = reduced_delta_below {
            for c in 0..d.cols() {
                system.insert(d.column(c));
            }
        }
        Lifter { bar_cells: pull.cols(), system }
    }

    fn lift(&self, target: &[(usize, F::Elem)]) -> Option<Vec<(usize, F::Elem)>> {
        let (rest, combo) = self.system.reduce(target);
        rest.is_empty().then(|| combo.into_iter().filter(|(i, _)| *i < self.bar_cells).collect())
    }
}

/// `h̄` in degree `k` as a matrix from bar cochains to reduced cochains.
fn pullback_matrix<F: Ring>(field: &F, bar: &BasedComplex<Integers>, reduced: &BasedComplex<Integers>, k: usize) -> Result<SparseMatrix<F::Elem>> {
    let mut triplets = Vec::new();
    for (c, label) in bar.basis(k).iter().enumerate() {
        for (target, v) in pushforward_cochain(&[(label.clone(), BigInt::from(1))]) {
            let r = reduced.position(k, &target).ok_or_else(|| Error::UnknownLabel(target.to_string()))?;
            triplets.push((r, c, field.from_bigint(&v)));
        }
    }
    Ok(SparseMatrix::from_triplets(field, reduced.rank(k), bar.rank(k), triplets))
}

fn structure_over<F: Ring>(field: &F, ring: Coefficients, n: usize, max: usize, limit: usize) -> Result<StructureTable> {
    let reduced = ReducedOverField::new(field, n, max)?;
    let bar = build_bar_hochschild_cochain(n, max + 1, limit)?;
    let bar_delta: Vec<SparseMatrix<F::Elem>> = bar.differentials().iter().map(|d| to_field(field, d)).collect();
    let ext = ExtAlgebra::new(n, field.clone());
    let rc = &reduced.complex;

    let cells: Vec<Vec<usize>> = (0..=max).map(|k| reduced.class_cells(field, k)).collect::<Result<_>>()?;
    let pulls: Vec<SparseMatrix<F::Elem>> = (0..=max).map(|k| pullback_matrix(field, &bar, rc, k)).collect::<Result<_>>()?;

    // coordinates: class cells first, then coboundaries
    let coordinates: Vec<FieldEchelon<F>> = (0..=max)
        .map(|k| {
            let mut ech = FieldEchelon::new(field.clone());
            for &c in &cells[k] {
                ech.insert(&unit(field, c));
            }
            if k > 0 {
                let d = &reduced.coboundaries[k - 1];
                for c in 0..d.cols() {
                    ech.insert(d.column(c));
                }
            }
            ech
        })
        .collect();
    let names: Vec<Vec<String>> = (0..=max)
        .map(|k| {
            cells[k]
                .iter()
                .map(|&c| match &rc.basis(k)[c] {
                    BasisLabel::CochainPair { tau, sigma } => monomial_name(tau, *sigma),
                    other => other.to_string(),
                })
                .collect()
        })
        .collect();
    let express = |k: usize, v: &[(usize, F::Elem)]| -> Option<Vec<ClassTerm>> {
        let (rest, combo) = coordinates[k].reduce(v);
        if !rest.is_empty() {
            return None;
        }
        Some(
            combo
                .into_iter()
                .filter(|(i, c)| *i < cells[k].len() && !field.is_zero(c))
                .map(|(i, c)| ClassTerm { class: names[k][i].clone(), coefficient: field.render(&c) })
                .collect(),
        )
    };

    let mut lifts: Vec<Vec<BarCochain<F::Elem>>> = Vec::new();
    for k in 0..=max {
        let lifter = Lifter::new(field, &pulls[k], &bar_delta[k], k.checked_sub(1).map(|j| &reduced.coboundaries[j]));
        let mut row = Vec::new();
        for &c in &cells[k] {
            let f = lifter.lift(&unit(field, c)).ok_or_else(|| {
                Error::InvalidInput(format!("class {} has no bar cocycle lift", rc.basis(k)[c]))
            })?;
            let terms = f.into_iter().map(|(i, v)| (bar.basis(k)[i].clone(), v));
            row.push(BarCochain::from_terms(&ext, k, terms)?);
        }
        lifts.push(row);
    }

    let mut classes = Vec::new();
    for k in 0..=max {
        for (i, &c) in cells[k].iter().enumerate() {
            classes.push(RingClass { degree: k, monomial: names[k][i].clone(), cochain: rc.basis(k)[c].to_string() });
        }
    }

    let mut products = Vec::new();
    for k in 0..=max {
        for l in 0..=(max - k) {
            let d = k + l;
            for (i, &a) in cells[k].iter().enumerate() {
                for (j, &b) in cells[l].iter().enumerate() {
                    let x = (rc.basis(k)[a].clone(), field.one());
                    let y = (rc.basis(l)[b].clone(), field.one());
                    let reduced_product = cup_reduced_cochains(field, &[x], &[y])?;
                    let v: Vec<(usize, F::Elem)> = sorted_vector(
                        reduced_product.into_iter().map(|(lab, c)| (rc.position(d, &lab).expect("product cell lies in the complex"), c)),
                    );
                    let reduced_terms = express(d, &v).ok_or_else(|| {
                        Error::InvalidInput(format!("reduced product {} * {} is not a cocycle", names[k][i], names[l][j]))
                    })?;

                    let bar_product = cup_bar(&ext, &lifts[k][i], &lifts[l][j])?;
                    let mut pulled: Vec<(usize, F::Elem)> = Vec::new();
                    for (label, c) in bar_product.terms() {
                        let col = bar.position(d, &label).expect("normalized tensors lie in the complex");
                        for (r, w) in pulls[d].column(col) {
                            pulled.push((*r, field.mul(w, &c)));
                        }
                    }
                    let oracle = express(d, &sorted_vector_merge(field, pulled));
                    let agree = oracle.as_ref() == Some(&reduced_terms);
                    products.push(ProductEntry {
                        left: names[k][i].clone(),
                        right: names[l][j].clone(),
                        degree: d,
                        reduced: reduced_terms,
                        oracle,
                        agree,
                    });
                }
            }
        }
    }
    let agrees = products.iter().all(|p| p.agree);
    Ok(StructureTable { n, ring: ring.to_string(), max_total_degree: max, classes, products, agrees })
}

fn sorted_vector<E>(entries: impl IntoIterator<Item = (usize, E)>) -> Vec<(usize, E)> {
    let mut v: Vec<_> = entries.into_iter().collect();
    v.sort_by_key(|(i, _)| *i);
    v
}

fn sorted_vector_merge<F: Ring>(field: &F, entries: Vec<(usize, F::Elem)>) -> Vec<(usize, F::Elem)> {
    let mut acc: BTreeMap<usize, F::Elem> = BTreeMap::new();
    for (i, c) in entries {
        let slot = acc.entry(i).or_insert_with(|| field.zero());
        *slot = field.add(slot, &c);
    }
    acc.into_iter().filter(|(_, c)| !field.is_zero(c)).collect()
}

/// Outcome of [`generator_span_check`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SpanReport {
    pub n: usize,
    pub ring: String,
    pub max_degree: usize,
    pub include_top: bool,
    pub generators: Vec<String>,
    /// Target monomials outside the span of generator products.
    pub missing: Vec<String>,
    pub spans: bool,
}

impl fmt::Display for SpanReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "generators ({}): {}", self.generators.len(), self.generators.join(", "))?;
        if self.spans {
            write!(f, "span: products of the generators span degrees <= {}", self.max_degree)
        } else {
            write!(f, "span: FAILS, missing {}", self.missing.join(", "))
        }
    }
}

/// The algebra generators `1⊗x_{ij}` (`i ≤ j`), `x_{ij}⊗1` (`i < j`),
/// `x_i⊗x_j` and, optionally, `x_{[n]}⊗1`, as `(τ, σ)` pairs.
pub fn ring_generators(n: usize, include_top: bool) -> Vec<(Multiset, Subset)> {
    let mut gens = Vec::new();
    for i in 1..=n {
        for j in i..=n {
            gens.push((Multiset::new(vec![i, j]), Subset::EMPTY));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            gens.push((Multiset::empty(), Subset::from_elements(&[i, j])));
        }
    }
    for i in 1..=n {
        for j in 1..=n {
            gens.push((Multiset::new(vec![j]), Subset::singleton(i)));
        }
    }
    if include_top {
        gens.push((Multiset::empty(), Subset::full(n)));
    }
    gens.sort();
    gens.dedup();
    gens
}

/// Checks, over a field of characteristic other than 2, that products of
/// the ring generators span every class `x_σ ⊗ x_τ` with `|σ| ≡ |τ|` and
/// `|τ| ≤ max_degree`, together with `x_{[n]}⊗1`, modulo coboundaries.
pub fn generator_span_check(n: usize, ring: Coefficients, max_degree: usize, include_top: bool) -> Result<SpanReport> {
    check_generators(n)?;
    require_field(ring)?;
    if ring.characteristic() == 2 {
        return Err(Error::UnsupportedRing("generator span check needs characteristic other than 2".into()));
    }
    match ring {
        Coefficients::Rationals => span_over(&Rationals, ring, n, max_degree, include_top),
        Coefficients::Prime(p) => span_over(&PrimeField::new(p)?, ring, n, max_degree, include_top),
        Coefficients::Integers => unreachable!("checked above"),
    }
}

fn span_over<F: Ring>(field: &F, ring: Coefficients, n: usize, max: usize, include_top: bool) -> Result<SpanReport> {
    let gens = ring_generators(n, include_top);
    // products of monomials are signed monomials, so the span of all
    // products is spanned by the reachable monomials
    let start = (Multiset::empty(), Subset::EMPTY);
    let mut reached: BTreeSet<(Multiset, Subset)> = BTreeSet::from([start.clone()]);
    let mut frontier = vec![start];
    while let Some((tau, sigma)) = frontier.pop() {
        for (t, s) in &gens {
            if tau.len() + t.len() > max {
                continue;
            }
            let Some((_, union)) = subset_mul_sign(sigma, *s) else { continue };
            let next = (tau.sum(t), union);
            if reached.insert(next.clone()) {
                frontier.push(next);
            }
        }
    }

    let reduced = ReducedOverField::new(field, n, max)?;
    let rc = &reduced.complex;
    let mut missing = Vec::new();
    for k in 0..=max {
        let mut span = reduced.image(field, k);
        for (tau, sigma) in reached.iter().filter(|(t, _)| t.len() == k) {
            let label = BasisLabel::CochainPair { tau: tau.clone(), sigma: *sigma };
            span.insert(&unit(field, rc.position(k, &label).expect("monomial lies in the complex")));
        }
        for (c, label) in rc.basis(k).iter().enumerate() {
            let BasisLabel::CochainPair { tau, sigma } = label else { continue };
            let target = sigma.parity_sign() == tau.parity_sign() || (k == 0 && *sigma == Subset::full(n));
            if target && !span.contains(&unit(field, c)) {
                missing.push(monomial_name(tau, *sigma));
            }
        }
    }
    Ok(SpanReport {
        n,
        ring: ring.to_string(),
        max_degree: max,
        include_top,
        generators: gens.iter().map(|(t, s)| monomial_name(t, *s)).collect(),
        spans: missing.is_empty(),
        missing,
    })
}

/// Shuffle product of Hochschild chains `x_σ ⊗ (x_{σ1}⊗…⊗x_{σk})`:
/// `(a⊗a1…ai)·(a'⊗a_{i+1}…a_{i+j}) = Σ sgn π · aa' ⊗ (shuffle)`.
/// Coefficients are reduced into `ring` (least nonnegative residues for
/// `F_p`). Only defined when `A` is commutative: characteristic 2 or `n = 1`.
pub fn shuffle_product(
    n: usize,
    u: &[(BasisLabel, BigInt)],
    v: &[(BasisLabel, BigInt)],
    ring: Coefficients,
) -> Result<Vec<(BasisLabel, BigInt)>> {
    check_generators(n)?;
    ring.validate()?;
    let p = ring.characteristic();
    if p != 2 && n >= 2 {
        return Err(Error::NonCommutativeBase);
    }
    let mut out: BTreeMap<BasisLabel, BigInt> = BTreeMap::new();
    for (x, c) in u {
        let BasisLabel::BarChain { sigma: a, tensor: left } = x else { return Err(Error::MixedLabels(x.to_string())) };
        for (y, d) in v {
            let BasisLabel::BarChain { sigma: b, tensor: right } = y else {
                return Err(Error::MixedLabels(y.to_string()));
            };
            let Some((sign, ab)) = subset_mul_sign(*a, *b) else { continue };
            for (perm_sign, tensor) in shuffles(left, right) {
                let coeff = c * d * BigInt::from(sign * perm_sign);
                *out.entry(BasisLabel::BarChain { sigma: ab, tensor }).or_insert_with(BigInt::zero) += coeff;
            }
        }
    }
    let reduce = |c: BigInt| if p == 0 { c } else { c.mod_floor(&BigInt::from(p)) };
    Ok(out.into_iter().map(|(l, c)| (l, reduce(c))).filter(|(_, c)| !c.is_zero()).collect())
}

/// All interleavings of `left` and `right` keeping each in order, with the
/// sign of the interleaving permutation.
fn shuffles(left: &[Subset], right: &[Subset]) -> Vec<(i64, Vec<Subset>)> {
    let mut out = Vec::new();
    let mut current = Vec::with_capacity(left.len() + right.len());
    fn go(left: &[Subset], right: &[Subset], inversions: usize, current: &mut Vec<Subset>, out: &mut Vec<(i64, Vec<Subset>)>) {
        if left.is_empty() && right.is_empty() {
            out.push((if inversions.is_multiple_of(2) { 1 } else { -1 }, current.clone()));
            return;
        }
        if let Some((first, rest)) = left.split_first() {
            current.push(*first);
            go(rest, right, inversions, current, out);
            current.pop();
        }
        if let Some((first, rest)) = right.split_first() {
            // a right factor placed before the remaining left factors
            current.push(*first);
            go(left, rest, inversions + left.len(), current, out);
            current.pop();
        }
    }
    go(left, right, 0, &mut current, &mut out);
    out
}
