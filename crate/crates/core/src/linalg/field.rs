use std::collections::BTreeMap;

use super::SparseMatrix;
use crate::ring::Ring;

/// Sparse vector as sorted `(index, value)` pairs without zeros.
pub(crate) type SparseVec<E> = Vec<(usize, E)>;

/// `y + a·x`, both sorted by index.
pub(crate) fn axpy<F: Ring>(field: &F, y: &[(usize, F::Elem)], a: &F::Elem, x: &[(usize, F::Elem)]) -> SparseVec<F::Elem> {
    let mut out = Vec::with_capacity(y.len() + x.len());
    let (mut i, mut j) = (0, 0);
    while i < y.len() || j < x.len() {
        let take_y = j >= x.len() || (i < y.len() && y[i].0 < x[j].0);
        let take_x = i >= y.len() || (j < x.len() && x[j].0 < y[i].0);
        if take_y {
            out.push(y[i].clone());
            i += 1;
        } else if take_x {
            let v = field.mul(a, &x[j].1);
            if !field.is_zero(&v) {
                out.push((x[j].0, v));
            }
            j += 1;
        } else {
            let v = field.add(&y[i].1, &field.mul(a, &x[j].1));
            if !field.is_zero(&v) {
                out.push((y[i].0, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

/// Incremental column echelon form over a field.
///
/// Each inserted vector is reduced against the stored pivots (keyed by their
/// largest index); independent vectors become new pivots. The combination of
/// inserted vectors producing each pivot is tracked so membership tests can
/// return explicit coordinates.
#[derive(Clone, Debug)]
pub struct FieldEchelon<F: Ring> {
    field: F,
    pivots: BTreeMap<usize, (SparseVec<F::Elem>, SparseVec<F::Elem>)>,
    inserted: usize,
}

impl<F: Ring> FieldEchelon<F> {
    pub fn new(field: F) -> Self {
        FieldEchelon { field, pivots: BTreeMap::new(), inserted: 0 }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Number of vectors inserted so far (the column index of the next one).
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Reduces `v` against the pivots. Returns the remainder and the
    /// combination `c` of inserted vectors with `v = remainder + Σ c_i v_i`.
    pub fn reduce(&self, v: &[(usize, F::Elem)]) -> (SparseVec<F::Elem>, SparseVec<F::Elem>) {
        let f = &self.field;
        let mut rest: SparseVec<F::Elem> = v.to_vec();
        let mut combo: SparseVec<F::Elem> = Vec::new();
        // entries at or above `cursor` have no pivot and stay in the remainder
        let mut cursor: Option<usize> = None;
        loop {
            let Some((top, value)) = rest.iter().rev().find(|(i, _)| cursor.is_none_or(|c| *i < c)) else {
                break;
            };
            let top = *top;
            match self.pivots.get(&top) {
                Some((col, c)) => {
                    let lead = &col.last().expect("pivot column is nonzero").1;
                    let q = f.mul(value, &f.inverse(lead).expect("pivot of a field column is invertible"));
                    rest = axpy(f, &rest, &f.neg(&q), col);
                    combo = axpy(f, &combo, &q, c);
                }
                None => cursor = Some(top),
            }
        }
        (rest, combo)
    }

    /// Inserts `v`; returns whether it was independent of the previous ones.
    pub fn insert(&mut self, v: &[(usize, F::Elem)]) -> bool {
        let index = self.inserted;
        self.inserted += 1;
        let (rest, combo) = self.reduce(v);
        if rest.is_empty() {
            return false;
        }
        // rest = v - Σ combo_i v_i
        let neg_combo: SparseVec<F::Elem> = combo.iter().map(|(i, x)| (*i, self.field.neg(x))).collect();
        let with_self = axpy(&self.field, &neg_combo, &self.field.one(), &[(index, self.field.one())]);
        let top = rest.last().unwrap().0;
        self.pivots.insert(top, (rest, with_self));
        true
    }

    pub fn contains(&self, v: &[(usize, F::Elem)]) -> bool {
        self.reduce(v).0.is_empty()
    }
}

/// Rank over a field, computed block by block.
pub fn rank<F: Ring>(field: &F, m: &SparseMatrix<F::Elem>) -> usize {
    m.blocks()
        .into_iter()
        .map(|(rows, cols)| {
            let block = m.submatrix(&rows, &cols);
            let mut ech = FieldEchelon::new(field.clone());
            (0..block.cols()).filter(|&c| ech.insert(block.column(c))).count()
        })
        .sum()
}

/// Some `w` with `M w = v`, or `None` when `v` is outside the column space.
pub fn solve<F: Ring>(field: &F, m: &SparseMatrix<F::Elem>, v: &[F::Elem]) -> Option<Vec<F::Elem>> {
    let mut ech = FieldEchelon::new(field.clone());
    for c in 0..m.cols() {
        ech.insert(m.column(c));
    }
    let target: SparseVec<F::Elem> =
        v.iter().enumerate().filter(|(_, x)| !field.is_zero(x)).map(|(i, x)| (i, x.clone())).collect();
    let (rest, combo) = ech.reduce(&target);
    if !rest.is_empty() {
        return None;
    }
    let mut w = vec![field.zero(); m.cols()];
    for (i, x) in combo {
        w[i] = x;
    }
    Some(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{PrimeField, Rationals};
    use num_bigint::BigInt;
    use num_rational::BigRational;
    use proptest::prelude::*;

    fn q(v: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(v))
    }

    #[test]
    fn echelon_tracks_combinations() {
        let f = Rationals;
        let mut e = FieldEchelon::new(f);
        assert!(e.insert(&[(0, q(1)), (1, q(1))]));
        assert!(e.insert(&[(1, q(2))]));
        assert!(!e.insert(&[(0, q(3)), (1, q(5))]));
        let (rest, combo) = e.reduce(&[(0, q(2)), (1, q(4))]);
        assert!(rest.is_empty());
        // 2·(1,1) + 1·(0,2) = (2,4)
        assert_eq!(combo, vec![(0, q(2)), (1, q(1))]);
        assert_eq!(e.rank(), 2);
    }

    proptest! {
        #[test]
        fn solutions_satisfy_the_system(raw in proptest::collection::vec(proptest::collection::vec(-2i64..3, 4), 1..5),
                                        pick in proptest::collection::vec(-2i64..3, 4)) {
            let f = PrimeField::new(5).unwrap();
            let dense: Vec<Vec<i64>> = raw;
            let m = SparseMatrix::from_dense(&dense).map(&f, |v| f.from_bigint(v));
            // a vector in the image by construction
            let x: Vec<u64> = pick.iter().map(|v| f.from_int(*v)).collect();
            let img: Vec<u64> = (0..m.rows()).map(|r| {
                (0..m.cols()).fold(0, |acc, c| f.add(&acc, &f.mul(m.get(r, c).unwrap_or(&0), &x[c])))
            }).collect();
            let w = solve(&f, &m, &img).expect("image vector must be solvable");
            for r in 0..m.rows() {
                let lhs = (0..m.cols()).fold(0, |acc, c| f.add(&acc, &f.mul(m.get(r, c).unwrap_or(&0), &w[c])));
                prop_assert_eq!(lhs, img[r]);
            }
        }
    }
}
