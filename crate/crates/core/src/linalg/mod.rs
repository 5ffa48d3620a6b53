//! Exact sparse linear algebra over `Z` and fields.
//!
//! Matrices act on column vectors: column `j` holds the image of the `j`-th
//! source basis vector.

mod field;
mod homology;
mod snf;

pub use field::{rank, solve, FieldEchelon};
pub use homology::{homology_pair, normalize_divisors, HomologyGroup};
pub use snf::{smith_normal_form, solve_integer, SmithForm};

use num_bigint::BigInt;
use num_rational::BigRational;

use crate::error::{Error, Result};
use crate::ring::{Coefficients, Integers, PrimeField, Rationals, Ring};

/// Column-major sparse matrix with no stored zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix<E> {
    rows: usize,
    cols: usize,
    columns: Vec<Vec<(usize, E)>>,
}

impl<E: Clone> SparseMatrix<E> {
    pub fn zero(rows: usize, cols: usize) -> Self {
        SparseMatrix { rows, cols, columns: vec![Vec::new(); cols] }
    }

    /// Sums duplicate positions and drops zeros. Panics on out-of-range indices.
    pub fn from_triplets<R: Ring<Elem = E>>(
        ring: &R,
        rows: usize,
        cols: usize,
        triplets: impl IntoIterator<Item = (usize, usize, E)>,
    ) -> Self {
        let mut columns: Vec<Vec<(usize, E)>> = vec![Vec::new(); cols];
        for (r, c, v) in triplets {
            assert!(r < rows && c < cols, "entry ({r}, {c}) outside a {rows}x{cols} matrix");
            columns[c].push((r, v));
        }
        for col in &mut columns {
            col.sort_by_key(|(r, _)| *r);
            let mut merged: Vec<(usize, E)> = Vec::with_capacity(col.len());
            for (r, v) in col.drain(..) {
                match merged.last_mut() {
                    Some((last, acc)) if *last == r => *acc = ring.add(acc, &v),
                    _ => merged.push((r, v)),
                }
            }
            merged.retain(|(_, v)| !ring.is_zero(v));
            *col = merged;
        }
        SparseMatrix { rows, cols, columns }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.columns.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.columns.iter().all(Vec::is_empty)
    }

    pub fn column(&self, c: usize) -> &[(usize, E)] {
        &self.columns[c]
    }

    pub fn get(&self, r: usize, c: usize) -> Option<&E> {
        let col = &self.columns[c];
        col.binary_search_by_key(&r, |(row, _)| *row).ok().map(|i| &col[i].1)
    }

    /// `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (usize, usize, &E)> {
        self.columns
            .iter()
            .enumerate()
            .flat_map(|(c, col)| col.iter().map(move |(r, v)| (*r, c, v)))
    }

    pub fn transpose(&self) -> Self {
        let mut columns: Vec<Vec<(usize, E)>> = vec![Vec::new(); self.rows];
        for (r, c, v) in self.entries() {
            columns[r].push((c, v.clone()));
        }
        SparseMatrix { rows: self.cols, cols: self.rows, columns }
    }

    pub fn map<F: Clone, R: Ring<Elem = F>>(&self, ring: &R, f: impl Fn(&E) -> F) -> SparseMatrix<F> {
        let columns = self
            .columns
            .iter()
            .map(|col| {
                col.iter()
                    .filter_map(|(r, v)| {
                        let w = f(v);
                        (!ring.is_zero(&w)).then_some((*r, w))
                    })
                    .collect()
            })
            .collect();
        SparseMatrix { rows: self.rows, cols: self.cols, columns }
    }

    /// Restricts to the given rows and columns, renumbered in the given order.
    pub fn submatrix(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut row_pos = vec![usize::MAX; self.rows];
        for (i, &r) in rows.iter().enumerate() {
            row_pos[r] = i;
        }
        let columns = cols
            .iter()
            .map(|&c| {
                let mut col: Vec<(usize, E)> = self.columns[c]
                    .iter()
                    .filter(|(r, _)| row_pos[*r] != usize::MAX)
                    .map(|(r, v)| (row_pos[*r], v.clone()))
                    .collect();
                col.sort_by_key(|(r, _)| *r);
                col
            })
            .collect();
        SparseMatrix { rows: rows.len(), cols: cols.len(), columns }
    }

    /// Applies the matrix to a sparse vector given as `(index, value)` pairs.
    pub fn apply<R: Ring<Elem = E>>(&self, ring: &R, v: &[(usize, E)]) -> Vec<(usize, E)> {
        let mut acc: std::collections::BTreeMap<usize, E> = Default::default();
        for (c, x) in v {
            for (r, m) in &self.columns[*c] {
                let term = ring.mul(m, x);
                let slot = acc.entry(*r).or_insert_with(|| ring.zero());
                *slot = ring.add(slot, &term);
            }
        }
        acc.into_iter().filter(|(_, x)| !ring.is_zero(x)).collect()
    }

    /// Matrix of `second ∘ first`, multiplying entries in path order
    /// (`first` weight, then `second` weight), which is the composite of
    /// left-module maps over a noncommutative ring.
    pub fn compose<R: Ring<Elem = E>>(ring: &R, second: &Self, first: &Self) -> Result<Self> {
        if first.rows != second.cols {
            return Err(Error::DimensionMismatch(format!(
                "cannot compose {}x{} after {}x{}",
                second.rows, second.cols, first.rows, first.cols
            )));
        }
        let mut columns = Vec::with_capacity(first.cols);
        for col in &first.columns {
            let mut acc: std::collections::BTreeMap<usize, E> = Default::default();
            for (mid, w1) in col {
                for (r, w2) in &second.columns[*mid] {
                    let term = ring.mul(w1, w2);
                    let slot = acc.entry(*r).or_insert_with(|| ring.zero());
                    *slot = ring.add(slot, &term);
                }
            }
            columns.push(acc.into_iter().filter(|(_, v)| !ring.is_zero(v)).collect());
        }
        Ok(SparseMatrix { rows: second.rows, cols: first.cols, columns })
    }

    /// Connected blocks of the bipartite row/column incidence graph.
    /// Zero rows and zero columns belong to no block.
    pub fn blocks(&self) -> Vec<(Vec<usize>, Vec<usize>)> {
        let mut parent: Vec<usize> = (0..self.rows + self.cols).collect();
        fn find(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (c, col) in self.columns.iter().enumerate() {
            for (r, _) in col {
                let a = find(&mut parent, *r);
                let b = find(&mut parent, self.rows + c);
                if a != b {
                    parent[a] = b;
                }
            }
        }
        let mut index: std::collections::HashMap<usize, usize> = Default::default();
        let mut out: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
        let mut nonzero_row = vec![false; self.rows];
        for col in &self.columns {
            for (r, _) in col {
                nonzero_row[*r] = true;
            }
        }
        for r in 0..self.rows {
            if nonzero_row[r] {
                let root = find(&mut parent, r);
                let slot = *index.entry(root).or_insert_with(|| {
                    out.push((Vec::new(), Vec::new()));
                    out.len() - 1
                });
                out[slot].0.push(r);
            }
        }
        for c in 0..self.cols {
            if !self.columns[c].is_empty() {
                let root = find(&mut parent, self.rows + c);
                out[index[&root]].1.push(c);
            }
        }
        out
    }
}

impl SparseMatrix<BigInt> {
    /// Integer matrix from dense rows; convenient for tests and fixtures.
    pub fn from_dense(rows: &[Vec<i64>]) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, Vec::len);
        SparseMatrix::from_triplets(
            &Integers,
            nrows,
            ncols,
            rows.iter().enumerate().flat_map(|(r, row)| {
                assert_eq!(row.len(), ncols, "ragged dense matrix");
                row.iter().enumerate().map(move |(c, v)| (r, c, BigInt::from(*v)))
            }),
        )
    }

    pub fn to_dense(&self) -> Vec<Vec<BigInt>> {
        let mut out = vec![vec![BigInt::from(0); self.cols]; self.rows];
        for (r, c, v) in self.entries() {
            out[r][c] = v.clone();
        }
        out
    }

    pub fn scaled(&self, k: i64) -> Self {
        let k = BigInt::from(k);
        self.map(&Integers, |v| v * &k)
    }
}

/// Rank after reducing the entries into the field of the given
/// characteristic (0 means `Q`).
pub fn rank_over_field(m: &SparseMatrix<BigInt>, characteristic: u64) -> Result<usize> {
    if characteristic == 0 {
        let q = Rationals;
        Ok(rank(&q, &m.map(&q, |v| q.from_bigint(v))))
    } else {
        let f = PrimeField::new(characteristic)?;
        Ok(rank(&f, &m.map(&f, |v| f.from_bigint(v))))
    }
}

/// A preimage vector, typed by the domain it was found over.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Witness {
    Integer(Vec<BigInt>),
    Rational(Vec<BigRational>),
    Modular(Vec<u64>),
}

/// Finds `w` with `M w = v` over the given coefficient domain, if one exists.
pub fn solve_in_image(m: &SparseMatrix<BigInt>, v: &[BigInt], ring: Coefficients) -> Result<Option<Witness>> {
    if v.len() != m.rows() {
        return Err(Error::DimensionMismatch(format!(
            "right-hand side has length {}, matrix has {} rows",
            v.len(),
            m.rows()
        )));
    }
    Ok(match ring {
        Coefficients::Integers => solve_integer(m, v).map(Witness::Integer),
        Coefficients::Rationals => {
            let q = Rationals;
            let mq = m.map(&q, |x| q.from_bigint(x));
            let vq: Vec<_> = v.iter().map(|x| q.from_bigint(x)).collect();
            solve(&q, &mq, &vq).map(Witness::Rational)
        }
        Coefficients::Prime(p) => {
            let f = PrimeField::new(p)?;
            let mf = m.map(&f, |x| f.from_bigint(x));
            let vf: Vec<_> = v.iter().map(|x| f.from_bigint(x)).collect();
            solve(&f, &mf, &vf).map(Witness::Modular)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_merge_and_drop_zeros() {
        let m = SparseMatrix::from_triplets(
            &Integers,
            2,
            2,
            [(0, 0, BigInt::from(1)), (0, 0, BigInt::from(-1)), (1, 1, BigInt::from(3)), (1, 1, BigInt::from(2))],
        );
        assert_eq!(m.nnz(), 1);
        assert_eq!(m.get(1, 1), Some(&BigInt::from(5)));
        assert_eq!(m.get(0, 0), None);
    }

    #[test]
    fn blocks_split_direct_sums() {
        let m = SparseMatrix::from_dense(&[vec![1, 0, 0], vec![0, 0, 2], vec![0, 0, 3], vec![0, 0, 0]]);
        let mut blocks = m.blocks();
        blocks.sort();
        assert_eq!(blocks, vec![(vec![0], vec![0]), (vec![1, 2], vec![2])]);
    }

    #[test]
    fn composition_and_transpose() {
        let a = SparseMatrix::from_dense(&[vec![1, 2], vec![0, 1]]);
        let b = SparseMatrix::from_dense(&[vec![3, 0], vec![1, 1]]);
        // b ∘ a = b·a for commutative entries
        let ba = SparseMatrix::compose(&Integers, &b, &a).unwrap();
        assert_eq!(ba, SparseMatrix::from_dense(&[vec![3, 6], vec![1, 3]]));
        assert_eq!(a.transpose(), SparseMatrix::from_dense(&[vec![1, 0], vec![2, 1]]));
        assert!(SparseMatrix::compose(&Integers, &SparseMatrix::<BigInt>::zero(1, 3), &a).is_err());
    }

    #[test]
    fn field_ranks() {
        assert_eq!(rank_over_field(&SparseMatrix::from_dense(&[vec![2]]), 0).unwrap(), 1);
        assert_eq!(rank_over_field(&SparseMatrix::from_dense(&[vec![2]]), 2).unwrap(), 0);
        let id = SparseMatrix::from_dense(&[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert_eq!(rank_over_field(&id, 3).unwrap(), 3);
        assert!(rank_over_field(&id, 9).is_err());
    }

    #[test]
    fn solving_in_the_image() {
        let m = SparseMatrix::from_dense(&[vec![2], vec![0]]);
        let two = vec![BigInt::from(2), BigInt::from(0)];
        let one = vec![BigInt::from(1), BigInt::from(0)];
        assert_eq!(
            solve_in_image(&m, &two, Coefficients::Integers).unwrap(),
            Some(Witness::Integer(vec![BigInt::from(1)]))
        );
        assert_eq!(solve_in_image(&m, &one, Coefficients::Integers).unwrap(), None);
        assert_eq!(
            solve_in_image(&m, &one, Coefficients::Rationals).unwrap(),
            Some(Witness::Rational(vec![BigRational::new(BigInt::from(1), BigInt::from(2))]))
        );
        assert_eq!(solve_in_image(&m, &one, Coefficients::F2).unwrap(), None);
        assert_eq!(solve_in_image(&m, &one, Coefficients::F3).unwrap(), Some(Witness::Modular(vec![2])));
        assert!(solve_in_image(&m, &[BigInt::from(1)], Coefficients::Integers).is_err());
    }
}
