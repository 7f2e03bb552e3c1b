//! Exact linear algebra over a [`Scalar`] field: incremental sparse row
//! reduction (rank, membership, dependency witnesses) and small dense
//! matrices.

use std::collections::BTreeMap;
use std::fmt;

use crate::scalar::Scalar;

pub type SparseVec<S> = BTreeMap<usize, S>;

fn axpy<S: Scalar>(y: &mut SparseVec<S>, a: &S, x: &SparseVec<S>) {
    for (k, v) in x {
        let add = a.clone() * v.clone();
        match y.get_mut(k) {
            Some(e) => {
                let s = e.clone() + add;
                if s.is_zero() {
                    y.remove(k);
                } else {
                    *e = s;
                }
            }
            None => {
                if !add.is_zero() {
                    y.insert(*k, add);
                }
            }
        }
    }
}

#[derive(Clone, Debug)]
struct Pivot<S> {
    row: SparseVec<S>,
    /// Expression of `row` in terms of the inserted vectors.
    combo: SparseVec<S>,
}

/// Row echelon basis built one vector at a time.
///
/// Every stored row has leading entry 1 at a distinct column. With tracking
/// enabled, each row remembers its expression in the inserted vectors so a
/// vector that reduces to zero yields an explicit linear dependency.
#[derive(Clone, Debug)]
pub struct Echelon<S> {
    pivots: BTreeMap<usize, Pivot<S>>,
    inserted: usize,
    track: bool,
}

impl<S: Scalar> Default for Echelon<S> {
    fn default() -> Self {
        Self::new()
    }
}

impl<S: Scalar> Echelon<S> {
    pub fn new() -> Self {
        Self { pivots: BTreeMap::new(), inserted: 0, track: false }
    }

    pub fn tracking() -> Self {
        Self { track: true, ..Self::new() }
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Reduces `v` against the stored rows; returns the remainder and the
    /// combination of stored rows that was subtracted.
    fn reduce_inner(&self, mut v: SparseVec<S>, mut combo: SparseVec<S>) -> (SparseVec<S>, SparseVec<S>) {
        let mut cursor = 0usize;
        loop {
            let next = v.range(cursor..).find(|(c, _)| self.pivots.contains_key(c)).map(|(c, x)| (*c, x.clone()));
            let Some((col, coeff)) = next else { break };
            let p = &self.pivots[&col];
            let a = -coeff;
            axpy(&mut v, &a, &p.row);
            if self.track {
                axpy(&mut combo, &a, &p.combo);
            }
            cursor = col + 1;
        }
        (v, combo)
    }

    /// Remainder of `v` modulo the span.
    pub fn reduce(&self, v: &SparseVec<S>) -> SparseVec<S> {
        self.reduce_inner(v.clone(), SparseVec::new()).0
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Inserts `v`; returns `Ok(())` if it was independent, otherwise
    /// `Err(dependency)` expressing `v` minus a combination of earlier vectors
    /// as zero (coefficients indexed by insertion order; empty if untracked).
    pub fn insert(&mut self, v: SparseVec<S>) -> Result<(), SparseVec<S>> {
        let idx = self.inserted;
        self.inserted += 1;
        let mut combo = SparseVec::new();
        if self.track {
            combo.insert(idx, S::one());
        }
        let (mut row, mut combo) = self.reduce_inner(v, combo);
        let Some((&lead, lc)) = row.iter().next() else {
            return Err(combo);
        };
        let inv = lc.inv();
        for x in row.values_mut() {
            *x = x.clone() * inv.clone();
        }
        if self.track {
            for x in combo.values_mut() {
                *x = x.clone() * inv.clone();
            }
        }
        self.pivots.insert(lead, Pivot { row, combo });
        Ok(())
    }
}

/// Rank of a set of sparse rows.
pub fn rank<S: Scalar>(rows: impl IntoIterator<Item = SparseVec<S>>) -> usize {
    let mut e = Echelon::new();
    for r in rows {
        let _ = e.insert(r);
    }
    e.rank()
}

/// First linear dependency among `vectors`, as coefficients by index.
pub fn find_dependency<S: Scalar>(vectors: impl IntoIterator<Item = SparseVec<S>>) -> Option<SparseVec<S>> {
    let mut e = Echelon::tracking();
    for v in vectors {
        if let Err(dep) = e.insert(v) {
            return Some(dep);
        }
    }
    None
}

/// Basis of the kernel `{x : M x = 0}` of a matrix given by sparse rows
/// over `ncols` columns.
pub fn kernel_basis<S: Scalar>(rows: &[SparseVec<S>], ncols: usize) -> Vec<Vec<S>> {
    // reduced row echelon form
    let mut e = Echelon::new();
    for r in rows {
        let _ = e.insert(r.clone());
    }
    let mut pivots: Vec<(usize, SparseVec<S>)> = e.pivots.into_iter().map(|(c, p)| (c, p.row)).collect();
    // back substitution to clear entries above pivots
    for k in (0..pivots.len()).rev() {
        let (col, row) = pivots[k].clone();
        for j in 0..k {
            if let Some(c) = pivots[j].1.get(&col).cloned() {
                axpy(&mut pivots[j].1, &-c, &row);
            }
        }
    }
    let pivot_cols: BTreeMap<usize, usize> = pivots.iter().enumerate().map(|(k, (c, _))| (*c, k)).collect();
    let mut out = Vec::new();
    for free in (0..ncols).filter(|c| !pivot_cols.contains_key(c)) {
        let mut x = vec![S::zero(); ncols];
        x[free] = S::one();
        for (col, row) in &pivots {
            if let Some(v) = row.get(&free) {
                x[*col] = -v.clone();
            }
        }
        out.push(x);
    }
    out
}

/// Dense matrix, row-major.
#[derive(Clone, PartialEq, Eq)]
pub struct Matrix<S> {
    rows: usize,
    cols: usize,
    data: Vec<S>,
}

impl<S: Scalar> Matrix<S> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![S::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, S::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<S>>, cols: usize) -> Option<Self> {
        let nrows = rows.len();
        if rows.iter().any(|r| r.len() != cols) {
            return None;
        }
        Some(Self { rows: nrows, cols, data: rows.into_iter().flatten().collect() })
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &S {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: S) {
        self.data[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[S] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<S>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn mul(&self, other: &Self) -> Option<Self> {
        if self.cols != other.rows {
            return None;
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let v = out.get(i, j).clone() + a.clone() * b.clone();
                        out.set(i, j, v);
                    }
                }
            }
        }
        Some(out)
    }

    pub fn sparse_rows(&self) -> Vec<SparseVec<S>> {
        (0..self.rows)
            .map(|i| {
                self.row(i)
                    .iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .map(|(j, v)| (j, v.clone()))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        rank(self.sparse_rows())
    }

    /// First entry where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.rows != other.rows || self.cols != other.cols {
            return Some((self.rows.min(other.rows), self.cols.min(other.cols)));
        }
        (0..self.rows)
            .flat_map(|i| (0..self.cols).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != other.get(i, j))
    }
}

impl<S: Scalar> fmt::Debug for Matrix<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| {
                let r: Vec<String> = self.row(i).iter().map(|v| v.to_string()).collect();
                format!("[{}]", r.join(", "))
            })
            .collect();
        write!(f, "[{}]", rows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Rational;
    use num_traits::Zero;
    use proptest::prelude::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    fn sv(v: &[i64]) -> SparseVec<Rational> {
        v.iter().enumerate().filter(|(_, x)| **x != 0).map(|(k, x)| (k, q(*x))).collect()
    }

    #[test]
    fn rank_and_dependency() {
        let rows = vec![sv(&[1, 2, 3]), sv(&[2, 4, 6]), sv(&[0, 1, 1])];
        assert_eq!(rank(rows.clone()), 2);
        let dep = find_dependency(rows).unwrap();
        // v1 - 2 v0 = 0
        assert_eq!(dep.get(&1), Some(&q(1)));
        assert_eq!(dep.get(&0), Some(&q(-2)));
    }

    #[test]
    fn kernel_of_small_matrix() {
        let rows = vec![sv(&[1, 1, 0]), sv(&[0, 1, 1])];
        let k = kernel_basis(&rows, 3);
        assert_eq!(k.len(), 1);
        let x = &k[0];
        assert!((x[0].clone() + x[1].clone()).is_zero());
        assert!((x[1].clone() + x[2].clone()).is_zero());
    }

    #[test]
    fn dense_product() {
        let a = Matrix::from_rows(vec![vec![q(1), q(2)], vec![q(0), q(1)]], 2).unwrap();
        let b = a.mul(&a).unwrap();
        assert_eq!(b.to_rows(), vec![vec![q(1), q(4)], vec![q(0), q(1)]]);
        assert_eq!(a.mul(&Matrix::identity(2)).unwrap(), a);
        assert!(a.mul(&Matrix::zeros(3, 1)).is_none());
    }

    proptest! {
        #[test]
        fn kernel_vectors_are_annihilated(entries in proptest::collection::vec(-3i64..=3, 12)) {
            let rows: Vec<_> = entries.chunks(4).map(sv).collect();
            let ker = kernel_basis(&rows, 4);
            prop_assert_eq!(ker.len() + rank(rows.clone()), 4);
            for x in &ker {
                for r in &rows {
                    let dot = r.iter().fold(Rational::zero(), |acc, (j, v)| acc + v.clone() * x[*j].clone());
                    prop_assert!(dot.is_zero());
                }
            }
        }
    }
}
