//! Smith normal form over `Z`.
//!
//! The sparse path eliminates unit pivots first (cheapest Markowitz choice
//! among the shortest columns), then falls back to minimal-absolute-value
//! pivoting with division with remainder. The resulting diagonal is turned
//! into an invariant-factor chain with gcd/lcm steps.

use std::collections::{BTreeMap, BTreeSet};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::homology::normalize_divisors;
use super::SparseMatrix;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SmithForm {
    /// `d_1 | d_2 | ... | d_r`, all positive.
    pub divisors: Vec<BigInt>,
    pub rank: usize,
}

pub fn smith_normal_form(m: &SparseMatrix<BigInt>) -> SmithForm {
    let mut diagonal = Vec::new();
    for (rows, cols) in m.blocks() {
        let block = m.submatrix(&rows, &cols);
        diagonal.extend(Eliminator::new(&block).run());
    }
    let divisors = normalize_divisors(diagonal);
    SmithForm { rank: divisors.len(), divisors }
}

struct Eliminator {
    rows: Vec<BTreeMap<usize, BigInt>>,
    cols: Vec<BTreeSet<usize>>,
}

impl Eliminator {
    fn new(m: &SparseMatrix<BigInt>) -> Self {
        let mut rows = vec![BTreeMap::new(); m.rows()];
        let mut cols = vec![BTreeSet::new(); m.cols()];
        for (r, c, v) in m.entries() {
            rows[r].insert(c, v.clone());
            cols[c].insert(r);
        }
        Eliminator { rows, cols }
    }

    fn run(mut self) -> Vec<BigInt> {
        let mut diagonal = Vec::new();
        while self.unit_pass(&mut diagonal) {}
        while let Some((r, c)) = self.smallest_entry() {
            if self.settle_pivot(r, c) {
                diagonal.push(self.rows[r][&c].abs());
                self.remove_pivot(r, c);
            }
        }
        diagonal
    }

    /// One sweep over columns by increasing length, eliminating every unit
    /// pivot found. Returns whether anything was eliminated.
    fn unit_pass(&mut self, diagonal: &mut Vec<BigInt>) -> bool {
        let mut order: Vec<usize> = (0..self.cols.len()).filter(|&c| !self.cols[c].is_empty()).collect();
        order.sort_by_key(|&c| self.cols[c].len());
        let mut progress = false;
        for c in order {
            let pivot_row = self.cols[c]
                .iter()
                .filter(|&&r| self.rows[r][&c].abs().is_one())
                .min_by_key(|&&r| self.rows[r].len())
                .copied();
            if let Some(r) = pivot_row {
                self.clear_column(r, c);
                diagonal.push(BigInt::one());
                self.remove_pivot(r, c);
                progress = true;
            }
        }
        progress
    }

    /// Clears column `c` below/above a unit pivot at `(r, c)` by row operations.
    fn clear_column(&mut self, r: usize, c: usize) {
        let pivot = self.rows[r][&c].clone();
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            // pivot is ±1, so a_ic / pivot = a_ic * pivot
            let factor = &self.rows[i][&c] * &pivot;
            self.row_sub(i, r, &factor);
        }
    }

    /// `row_i -= factor * row_r`.
    fn row_sub(&mut self, i: usize, r: usize, factor: &BigInt) {
        let pivot_row: Vec<(usize, BigInt)> = self.rows[r].iter().map(|(c, v)| (*c, v.clone())).collect();
        for (c, v) in pivot_row {
            let slot = self.rows[i].entry(c).or_insert_with(BigInt::zero);
            *slot -= factor * v;
            if slot.is_zero() {
                self.rows[i].remove(&c);
                self.cols[c].remove(&i);
            } else {
                self.cols[c].insert(i);
            }
        }
    }

    /// `col_j -= factor * col_c`.
    fn col_sub(&mut self, j: usize, c: usize, factor: &BigInt) {
        let pivot_col: Vec<usize> = self.cols[c].iter().copied().collect();
        for i in pivot_col {
            let v = self.rows[i][&c].clone();
            let slot = self.rows[i].entry(j).or_insert_with(BigInt::zero);
            *slot -= factor * v;
            if slot.is_zero() {
                self.rows[i].remove(&j);
                self.cols[j].remove(&i);
            } else {
                self.cols[j].insert(i);
            }
        }
    }

    fn remove_pivot(&mut self, r: usize, c: usize) {
        let row = std::mem::take(&mut self.rows[r]);
        for j in row.keys() {
            self.cols[*j].remove(&r);
        }
        let col = std::mem::take(&mut self.cols[c]);
        for i in col {
            self.rows[i].remove(&c);
        }
    }

    fn smallest_entry(&self) -> Option<(usize, usize)> {
        let mut best: Option<(BigInt, usize, usize, usize)> = None;
        for (r, row) in self.rows.iter().enumerate() {
            for (c, v) in row {
                let a = v.abs();
                let cost = row.len() * self.cols[*c].len();
                let better = match &best {
                    None => true,
                    Some((b, _, _, bc)) => a < *b || (a == *b && cost < *bc),
                };
                if better {
                    best = Some((a, r, *c, cost));
                }
            }
        }
        best.map(|(_, r, c, _)| (r, c))
    }

    /// Reduces row `r` and column `c` modulo the pivot. Returns true when
    /// both are cleared; false when a smaller remainder appeared instead.
    fn settle_pivot(&mut self, r: usize, c: usize) -> bool {
        let pivot = self.rows[r][&c].clone();
        let mut clean = true;
        let others: Vec<usize> = self.cols[c].iter().copied().filter(|&i| i != r).collect();
        for i in others {
            let (q, rem) = self.rows[i][&c].div_rem(&pivot);
            if !q.is_zero() {
                self.row_sub(i, r, &q);
            }
            if !rem.is_zero() {
                clean = false;
            }
        }
        if !clean {
            return false;
        }
        let others: Vec<usize> = self.rows[r].keys().copied().filter(|&j| j != c).collect();
        for j in others {
            let (q, rem) = self.rows[r][&j].div_rem(&pivot);
            if !q.is_zero() {
                self.col_sub(j, c, &q);
            }
            if !rem.is_zero() {
                clean = false;
            }
        }
        clean
    }
}

/// Dense Smith form with transforms: `U · M · V = D`.
struct DenseSmith {
    d: Vec<Vec<BigInt>>,
    u: Vec<Vec<BigInt>>,
    v: Vec<Vec<BigInt>>,
    rank: usize,
}

fn identity(n: usize) -> Vec<Vec<BigInt>> {
    (0..n).map(|i| (0..n).map(|j| BigInt::from(u8::from(i == j))).collect()).collect()
}

fn dense_smith(m: &SparseMatrix<BigInt>) -> DenseSmith {
    let (rows, cols) = (m.rows(), m.cols());
    let mut d = m.to_dense();
    let mut u = identity(rows);
    let mut v = identity(cols);
    let mut t = 0;
    while t < rows.min(cols) {
        // smallest nonzero entry in the trailing block
        let mut best: Option<(usize, usize)> = None;
        for i in t..rows {
            for j in t..cols {
                if !d[i][j].is_zero() && best.is_none_or(|(bi, bj)| d[i][j].abs() < d[bi][bj].abs()) {
                    best = Some((i, j));
                }
            }
        }
        let Some((pi, pj)) = best else { break };
        d.swap(t, pi);
        u.swap(t, pi);
        for row in d.iter_mut() {
            row.swap(t, pj);
        }
        for row in v.iter_mut() {
            row.swap(t, pj);
        }
        let mut done = true;
        for i in t + 1..rows {
            let q = d[i][t].div_floor(&d[t][t]);
            if !q.is_zero() {
                for j in 0..cols {
                    let s = &q * &d[t][j];
                    d[i][j] -= s;
                }
                for j in 0..rows {
                    let s = &q * &u[t][j];
                    u[i][j] -= s;
                }
            }
            if !d[i][t].is_zero() {
                done = false;
            }
        }
        for j in t + 1..cols {
            let q = d[t][j].div_floor(&d[t][t]);
            if !q.is_zero() {
                for i in 0..rows {
                    let s = &q * &d[i][t];
                    d[i][j] -= s;
                }
                for i in 0..cols {
                    let s = &q * &v[i][t];
                    v[i][j] -= s;
                }
            }
            if !d[t][j].is_zero() {
                done = false;
            }
        }
        if done {
            t += 1;
        }
    }
    DenseSmith { d, u, v, rank: t }
}

/// An integer `w` with `M w = v`, if one exists.
pub fn solve_integer(m: &SparseMatrix<BigInt>, target: &[BigInt]) -> Option<Vec<BigInt>> {
    let s = dense_smith(m);
    // D z = U v, w = V z
    let y: Vec<BigInt> = s
        .u
        .iter()
        .map(|row| row.iter().zip(target).map(|(a, b)| a * b).sum())
        .collect();
    let mut z = vec![BigInt::zero(); m.cols()];
    for (i, yi) in y.iter().enumerate() {
        if i < s.rank {
            let (q, rem) = yi.div_rem(&s.d[i][i]);
            if !rem.is_zero() {
                return None;
            }
            z[i] = q;
        } else if !yi.is_zero() {
            return None;
        }
    }
    Some(s.v.iter().map(|row| row.iter().zip(&z).map(|(a, b)| a * b).sum()).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|x| BigInt::from(*x)).collect()
    }

    #[test]
    fn hand_reduced_two_by_two() {
        // gcd of entries 2, |det| = 8
        let s = smith_normal_form(&SparseMatrix::from_dense(&[vec![2, 4], vec![6, 8]]));
        assert_eq!(s.divisors, ints(&[2, 4]));
        assert_eq!(s.rank, 2);
    }

    #[test]
    fn degenerate_inputs() {
        let s = smith_normal_form(&SparseMatrix::from_dense(&[vec![1, 0], vec![0, 0]]));
        assert_eq!(s, SmithForm { divisors: ints(&[1]), rank: 1 });
        let z = smith_normal_form(&SparseMatrix::<BigInt>::zero(3, 2));
        assert_eq!(z, SmithForm { divisors: vec![], rank: 0 });
        let e = smith_normal_form(&SparseMatrix::<BigInt>::zero(0, 0));
        assert_eq!(e.rank, 0);
    }

    #[test]
    fn coprime_diagonal_combines() {
        let s = smith_normal_form(&SparseMatrix::from_dense(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.divisors, ints(&[1, 6]));
    }

    #[test]
    fn integer_solve_respects_divisibility() {
        let m = SparseMatrix::from_dense(&[vec![2, 4], vec![6, 8]]);
        let w = solve_integer(&m, &ints(&[6, 14])).unwrap();
        // 2a + 4b = 6, 6a + 8b = 14 -> a = 1, b = 1
        assert_eq!(w, ints(&[1, 1]));
        assert_eq!(solve_integer(&m, &ints(&[1, 0])), None);
        let z = SparseMatrix::<BigInt>::zero(2, 1);
        assert_eq!(solve_integer(&z, &ints(&[0, 0])), Some(ints(&[0])));
        assert_eq!(solve_integer(&z, &ints(&[0, 1])), None);
    }

    fn det(m: &[Vec<BigInt>]) -> BigInt {
        // cofactor expansion; only used on tiny minors
        if m.is_empty() {
            return BigInt::one();
        }
        let mut total = BigInt::zero();
        for j in 0..m.len() {
            let minor: Vec<Vec<BigInt>> =
                m[1..].iter().map(|row| row.iter().enumerate().filter(|(c, _)| *c != j).map(|(_, v)| v.clone()).collect()).collect();
            let term = &m[0][j] * det(&minor);
            if j % 2 == 0 {
                total += term;
            } else {
                total -= term;
            }
        }
        total
    }

    fn choose(n: usize, k: usize) -> Vec<Vec<usize>> {
        if k == 0 {
            return vec![vec![]];
        }
        if n < k {
            return vec![];
        }
        let mut out = choose(n - 1, k);
        for mut c in choose(n - 1, k - 1) {
            c.push(n - 1);
            out.push(c);
        }
        out
    }

    /// gcd of all j×j minors (determinantal divisor).
    fn minor_gcd(m: &[Vec<BigInt>], j: usize) -> BigInt {
        let rows = m.len();
        let cols = m.first().map_or(0, Vec::len);
        let mut g = BigInt::zero();
        for rs in choose(rows, j) {
            for cs in choose(cols, j) {
                let sub: Vec<Vec<BigInt>> = rs.iter().map(|&r| cs.iter().map(|&c| m[r][c].clone()).collect()).collect();
                g = g.gcd(&det(&sub));
            }
        }
        g
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(200))]

        #[test]
        fn divisibility_chain_and_minors(rows in 1usize..=5, cols in 1usize..=5,
                                         seed in proptest::collection::vec(-6i64..7, 25)) {
            let dense: Vec<Vec<i64>> = (0..rows).map(|r| (0..cols).map(|c| {
                // sparsify a little so ranks vary
                let v = seed[r * 5 + c];
                if v.abs() > 4 { 0 } else { v }
            }).collect()).collect();
            let m = SparseMatrix::from_dense(&dense);
            let s = smith_normal_form(&m);
            for w in s.divisors.windows(2) {
                prop_assert!((&w[1] % &w[0]).is_zero());
            }
            prop_assert!(s.divisors.iter().all(|d| d.is_positive()));
            let big = m.to_dense();
            let mut prod = BigInt::one();
            for j in 1..=3.min(rows).min(cols) {
                let g = minor_gcd(&big, j);
                if j <= s.rank {
                    prod *= &s.divisors[j - 1];
                    prop_assert_eq!(g, prod.clone());
                } else {
                    prop_assert!(g.is_zero());
                }
            }
        }

        #[test]
        fn dense_and_sparse_ranks_agree(dense in proptest::collection::vec(proptest::collection::vec(-3i64..4, 4), 1..5)) {
            let m = SparseMatrix::from_dense(&dense);
            prop_assert_eq!(dense_smith(&m).rank, smith_normal_form(&m).rank);
        }

        #[test]
        fn integer_solutions_check_out(dense in proptest::collection::vec(proptest::collection::vec(-3i64..4, 3), 1..5),
                                       x in proptest::collection::vec(-3i64..4, 3)) {
            let m = SparseMatrix::from_dense(&dense);
            let target: Vec<BigInt> = dense.iter().map(|row| BigInt::from(row.iter().zip(&x).map(|(a, b)| a * b).sum::<i64>())).collect();
            let w = solve_integer(&m, &target).expect("target lies in the image");
            let back: Vec<BigInt> = dense.iter().map(|row| row.iter().zip(&w).map(|(a, b)| BigInt::from(*a) * b).sum()).collect();
            prop_assert_eq!(back, target);
        }
    }
}
