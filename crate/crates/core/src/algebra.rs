//! Arithmetic in the exterior algebra `A = Λ[x_1, ..., x_n]` and its
//! enveloping algebra `A^e = A ⊗ A^op`.
//!
//! Elements are finitely supported coefficient maps kept in canonical sorted
//! order with no stored zeros, so derived equality is mathematical equality.

use std::collections::BTreeMap;

use crate::combinat::{subset_mul_sign, Subset};
use crate::ring::Ring;

/// An element of `A`: `Σ c_σ x_σ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ExtElement<E> {
    terms: BTreeMap<Subset, E>,
}

impl<E> ExtElement<E> {
    pub fn terms(&self) -> impl Iterator<Item = (&Subset, &E)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, sigma: Subset) -> Option<&E> {
        self.terms.get(&sigma)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Degree when all terms share one subset size.
    pub fn homogeneous_degree(&self) -> Option<usize> {
        let mut sizes = self.terms.keys().map(|s| s.len());
        let first = sizes.next()?;
        sizes.all(|d| d == first).then_some(first)
    }
}

/// An element of `A^e`: `Σ c_{σ,ρ} x_σ ⊗ x_ρ`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct EnvElement<E> {
    terms: BTreeMap<(Subset, Subset), E>,
}

impl<E> EnvElement<E> {
    pub fn terms(&self) -> impl Iterator<Item = (&(Subset, Subset), &E)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, left: Subset, right: Subset) -> Option<&E> {
        self.terms.get(&(left, right))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }
}

fn accumulate<K: Ord, R: Ring>(ring: &R, map: &mut BTreeMap<K, R::Elem>, key: K, value: R::Elem) {
    if ring.is_zero(&value) {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(v) => {
            v.insert(value);
        }
        std::collections::btree_map::Entry::Occupied(mut o) => {
            let sum = ring.add(o.get(), &value);
            if ring.is_zero(&sum) {
                o.remove();
            } else {
                *o.get_mut() = sum;
            }
        }
    }
}

fn signed<R: Ring>(ring: &R, sign: i64, c: &R::Elem) -> R::Elem {
    if sign > 0 {
        c.clone()
    } else {
        ring.neg(c)
    }
}

/// `A = Λ[x_1, ..., x_n]` over a base ring.
#[derive(Clone, Debug)]
pub struct ExtAlgebra<R> {
    n: usize,
    base: R,
}

impl<R: Ring> ExtAlgebra<R> {
    pub fn new(n: usize, base: R) -> Self {
        assert!(n <= crate::combinat::MAX_GENERATORS);
        ExtAlgebra { n, base }
    }

    pub fn generators(&self) -> usize {
        self.n
    }

    pub fn base(&self) -> &R {
        &self.base
    }

    pub fn basis(&self, sigma: Subset) -> ExtElement<R::Elem> {
        self.term(sigma, self.base.one())
    }

    pub fn variable(&self, i: usize) -> ExtElement<R::Elem> {
        assert!(i >= 1 && i <= self.n, "variable x{i} out of range");
        self.basis(Subset::singleton(i))
    }

    pub fn term(&self, sigma: Subset, c: R::Elem) -> ExtElement<R::Elem> {
        debug_assert!(sigma.is_subset_of(Subset::full(self.n)));
        let mut terms = BTreeMap::new();
        accumulate(&self.base, &mut terms, sigma, c);
        ExtElement { terms }
    }

    pub fn from_terms(&self, terms: impl IntoIterator<Item = (Subset, R::Elem)>) -> ExtElement<R::Elem> {
        let mut out = BTreeMap::new();
        for (s, c) in terms {
            accumulate(&self.base, &mut out, s, c);
        }
        ExtElement { terms: out }
    }

    pub fn scale(&self, c: &R::Elem, a: &ExtElement<R::Elem>) -> ExtElement<R::Elem> {
        self.from_terms(a.terms.iter().map(|(s, v)| (*s, self.base.mul(c, v))))
    }

    pub fn render(&self, a: &ExtElement<R::Elem>) -> String {
        render_terms(&self.base, a.terms.iter().map(|(s, c)| (render_monomial(*s), c)))
    }
}

impl<R: Ring> Ring for ExtAlgebra<R> {
    type Elem = ExtElement<R::Elem>;

    fn zero(&self) -> Self::Elem {
        ExtElement { terms: BTreeMap::new() }
    }

    fn one(&self) -> Self::Elem {
        self.basis(Subset::EMPTY)
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.terms.clone();
        for (s, c) in &b.terms {
            accumulate(&self.base, &mut out, *s, c.clone());
        }
        ExtElement { terms: out }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.from_terms(a.terms.iter().map(|(s, c)| (*s, self.base.neg(c))))
    }

    /// Bilinear extension of `x_σ x_ρ = ±x_{σ∪ρ}` (zero when they meet).
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = BTreeMap::new();
        for (s, c) in &a.terms {
            for (t, d) in &b.terms {
                if let Some((sign, u)) = subset_mul_sign(*s, *t) {
                    let v = self.base.mul(c, d);
                    accumulate(&self.base, &mut out, u, signed(&self.base, sign, &v));
                }
            }
        }
        ExtElement { terms: out }
    }

    /// Units are exactly the elements whose scalar term is a unit; the rest is nilpotent.
    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let c = a.terms.get(&Subset::EMPTY)?;
        let c_inv = self.base.inverse(c)?;
        nilpotent_inverse(self, a, &self.term(Subset::EMPTY, c_inv))
    }

    fn from_int(&self, v: i64) -> Self::Elem {
        self.term(Subset::EMPTY, self.base.from_int(v))
    }

    fn characteristic(&self) -> u64 {
        self.base.characteristic()
    }

    fn render(&self, a: &Self::Elem) -> String {
        ExtAlgebra::render(self, a)
    }
}

/// `A^e = A ⊗ A^op` over a base ring.
#[derive(Clone, Debug)]
pub struct EnvAlgebra<R> {
    ext: ExtAlgebra<R>,
}

impl<R: Ring> EnvAlgebra<R> {
    pub fn new(n: usize, base: R) -> Self {
        EnvAlgebra { ext: ExtAlgebra::new(n, base) }
    }

    pub fn generators(&self) -> usize {
        self.ext.n
    }

    pub fn exterior(&self) -> &ExtAlgebra<R> {
        &self.ext
    }

    pub fn base(&self) -> &R {
        &self.ext.base
    }

    pub fn term(&self, left: Subset, right: Subset, c: R::Elem) -> EnvElement<R::Elem> {
        let mut terms = BTreeMap::new();
        accumulate(&self.ext.base, &mut terms, (left, right), c);
        EnvElement { terms }
    }

    /// `x_σ ⊗ 1`.
    pub fn left(&self, sigma: Subset) -> EnvElement<R::Elem> {
        self.term(sigma, Subset::EMPTY, self.ext.base.one())
    }

    /// `1 ⊗ x_σ`.
    pub fn right(&self, sigma: Subset) -> EnvElement<R::Elem> {
        self.term(Subset::EMPTY, sigma, self.ext.base.one())
    }

    pub fn from_terms(
        &self,
        terms: impl IntoIterator<Item = ((Subset, Subset), R::Elem)>,
    ) -> EnvElement<R::Elem> {
        let mut out = BTreeMap::new();
        for (k, c) in terms {
            accumulate(&self.ext.base, &mut out, k, c);
        }
        EnvElement { terms: out }
    }

    /// The bimodule action `(α ⊗ β) · a = α a β`.
    pub fn act(&self, u: &EnvElement<R::Elem>, a: &ExtElement<R::Elem>) -> ExtElement<R::Elem> {
        let base = &self.ext.base;
        let mut out = BTreeMap::new();
        for ((alpha, beta), c) in &u.terms {
            for (s, d) in &a.terms {
                let Some((s1, left)) = subset_mul_sign(*alpha, *s) else { continue };
                let Some((s2, whole)) = subset_mul_sign(left, *beta) else { continue };
                let v = base.mul(c, d);
                accumulate(base, &mut out, whole, signed(base, s1 * s2, &v));
            }
        }
        ExtElement { terms: out }
    }

    /// The right action used by `A ⊗_{A^e} -`: `a · (α ⊗ β) = β a α`.
    pub fn act_tensor(&self, a: &ExtElement<R::Elem>, u: &EnvElement<R::Elem>) -> ExtElement<R::Elem> {
        let base = &self.ext.base;
        let mut out = BTreeMap::new();
        for ((alpha, beta), c) in &u.terms {
            for (s, d) in &a.terms {
                let Some((s1, left)) = subset_mul_sign(*beta, *s) else { continue };
                let Some((s2, whole)) = subset_mul_sign(left, *alpha) else { continue };
                let v = base.mul(d, c);
                accumulate(base, &mut out, whole, signed(base, s1 * s2, &v));
            }
        }
        ExtElement { terms: out }
    }

    /// Coefficient on `1 ⊗ 1`; zero exactly for elements of the augmentation ideal.
    pub fn augmentation(&self, u: &EnvElement<R::Elem>) -> R::Elem {
        u.terms
            .get(&(Subset::EMPTY, Subset::EMPTY))
            .cloned()
            .unwrap_or_else(|| self.ext.base.zero())
    }

    pub fn render(&self, u: &EnvElement<R::Elem>) -> String {
        render_terms(
            &self.ext.base,
            u.terms
                .iter()
                .map(|((l, r), c)| (format!("{}⊗{}", render_monomial(*l), render_monomial(*r)), c)),
        )
    }
}

impl<R: Ring> Ring for EnvAlgebra<R> {
    type Elem = EnvElement<R::Elem>;

    fn zero(&self) -> Self::Elem {
        EnvElement { terms: BTreeMap::new() }
    }

    fn one(&self) -> Self::Elem {
        self.term(Subset::EMPTY, Subset::EMPTY, self.ext.base.one())
    }

    fn is_zero(&self, a: &Self::Elem) -> bool {
        a.terms.is_empty()
    }

    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        let mut out = a.terms.clone();
        for (k, c) in &b.terms {
            accumulate(&self.ext.base, &mut out, *k, c.clone());
        }
        EnvElement { terms: out }
    }

    fn neg(&self, a: &Self::Elem) -> Self::Elem {
        self.from_terms(a.terms.iter().map(|(k, c)| (*k, self.ext.base.neg(c))))
    }

    /// `(a ⊗ b)(a' ⊗ b') = a a' ⊗ b' b`.
    fn mul(&self, u: &Self::Elem, v: &Self::Elem) -> Self::Elem {
        let base = &self.ext.base;
        let mut out = BTreeMap::new();
        for ((a, b), c) in &u.terms {
            for ((a2, b2), d) in &v.terms {
                let Some((s1, left)) = subset_mul_sign(*a, *a2) else { continue };
                let Some((s2, right)) = subset_mul_sign(*b2, *b) else { continue };
                let w = base.mul(c, d);
                accumulate(base, &mut out, (left, right), signed(base, s1 * s2, &w));
            }
        }
        EnvElement { terms: out }
    }

    fn inverse(&self, a: &Self::Elem) -> Option<Self::Elem> {
        let c = a.terms.get(&(Subset::EMPTY, Subset::EMPTY))?;
        let c_inv = self.ext.base.inverse(c)?;
        nilpotent_inverse(self, a, &self.term(Subset::EMPTY, Subset::EMPTY, c_inv))
    }

    fn from_int(&self, v: i64) -> Self::Elem {
        self.term(Subset::EMPTY, Subset::EMPTY, self.ext.base.from_int(v))
    }

    fn characteristic(&self) -> u64 {
        self.ext.base.characteristic()
    }

    fn render(&self, a: &Self::Elem) -> String {
        EnvAlgebra::render(self, a)
    }
}

/// Inverts `a = c + m` with `c` a central unit scalar and `m` nilpotent:
/// `a^{-1} = c^{-1} Σ_j (-m c^{-1})^j`.
fn nilpotent_inverse<R: Ring>(ring: &R, a: &R::Elem, c_inv: &R::Elem) -> Option<R::Elem> {
    let normalized = ring.mul(a, c_inv);
    let nil = ring.sub(&ring.one(), &normalized);
    let mut acc = ring.one();
    let mut power = ring.one();
    // nilpotency index is bounded by the number of generators on both sides
    for _ in 0..64 {
        power = ring.mul(&power, &nil);
        if ring.is_zero(&power) {
            return Some(ring.mul(c_inv, &acc));
        }
        acc = ring.add(&acc, &power);
    }
    None
}

pub fn render_monomial(sigma: Subset) -> String {
    if sigma.is_empty() {
        return "1".to_string();
    }
    sigma.elements().map(|i| format!("x{i}")).collect::<Vec<_>>().join("^")
}

/// Renders `Σ c·m` as e.g. `x1^x3 - 2·x2`.
pub(crate) fn render_terms<'a, R: Ring + 'a>(
    ring: &R,
    terms: impl Iterator<Item = (String, &'a R::Elem)>,
) -> String {
    let mut out = String::new();
    for (monomial, c) in terms {
        let rendered = ring.render(c);
        let (negative, magnitude) = match rendered.strip_prefix('-') {
            Some(rest) => (true, rest.to_string()),
            None => (false, rendered),
        };
        if out.is_empty() {
            if negative {
                out.push('-');
            }
        } else {
            out.push_str(if negative { " - " } else { " + " });
        }
        if magnitude == "1" {
            out.push_str(&monomial);
        } else if monomial == "1" || monomial == "1⊗1" {
            out.push_str(&magnitude);
            if monomial == "1⊗1" {
                out.push_str("·1⊗1");
            }
        } else {
            out.push_str(&format!("{magnitude}·{monomial}"));
        }
    }
    if out.is_empty() {
        "0".to_string()
    } else {
        out
    }
}
