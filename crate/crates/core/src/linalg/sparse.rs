use std::collections::BTreeMap;

use super::Kernel;
use crate::scalar::{Field, Scalar};

/// A sparse vector: strictly increasing indices, no stored zeros.
pub type SparseVec<S> = Vec<(usize, S)>;

/// Row-major sparse matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseMatrix<S> {
    nrows: usize,
    ncols: usize,
    rows: Vec<SparseVec<S>>,
}

impl<S: Scalar> SparseMatrix<S> {
    pub fn new(nrows: usize, ncols: usize) -> Self {
        SparseMatrix {
            nrows,
            ncols,
            rows: vec![Vec::new(); nrows],
        }
    }

    /// Assembles from `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(nrows: usize, ncols: usize, triplets: impl IntoIterator<Item = (usize, usize, S)>) -> Self {
        let mut acc: Vec<BTreeMap<usize, S>> = vec![BTreeMap::new(); nrows];
        for (i, j, v) in triplets {
            assert!(i < nrows && j < ncols, "triplet ({i},{j}) out of bounds");
            if v.is_zero() {
                continue;
            }
            let e = acc[i].entry(j).or_insert_with(S::zero);
            *e = e.clone() + v;
        }
        let rows = acc
            .into_iter()
            .map(|r| r.into_iter().filter(|(_, v)| !v.is_zero()).collect())
            .collect();
        SparseMatrix { nrows, ncols, rows }
    }

    /// Matrix whose rows are the given sparse vectors.
    pub fn from_rows(ncols: usize, rows: Vec<SparseVec<S>>) -> Self {
        SparseMatrix {
            nrows: rows.len(),
            ncols,
            rows,
        }
    }

    pub fn nrows(&self) -> usize {
        self.nrows
    }

    pub fn ncols(&self) -> usize {
        self.ncols
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn row(&self, i: usize) -> &SparseVec<S> {
        &self.rows[i]
    }

    pub fn get(&self, i: usize, j: usize) -> S {
        match self.rows[i].binary_search_by_key(&j, |(c, _)| *c) {
            Ok(k) => self.rows[i][k].1.clone(),
            Err(_) => S::zero(),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(Vec::is_empty)
    }

    pub fn transpose(&self) -> Self {
        let mut rows: Vec<SparseVec<S>> = vec![Vec::new(); self.ncols];
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                rows[*j].push((i, v.clone()));
            }
        }
        SparseMatrix {
            nrows: self.ncols,
            ncols: self.nrows,
            rows,
        }
    }

    /// `self · other`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.ncols, other.nrows);
        let rows = self
            .rows
            .iter()
            .map(|row| {
                let mut acc: BTreeMap<usize, S> = BTreeMap::new();
                for (k, a) in row {
                    for (j, b) in &other.rows[*k] {
                        let e = acc.entry(*j).or_insert_with(S::zero);
                        *e = e.clone() + a.clone() * b.clone();
                    }
                }
                acc.into_iter().filter(|(_, v)| !v.is_zero()).collect()
            })
            .collect();
        SparseMatrix {
            nrows: self.nrows,
            ncols: other.ncols,
            rows,
        }
    }

    pub fn to_dense(&self) -> super::Matrix<S> {
        let mut m = super::Matrix::zeros(self.nrows, self.ncols);
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row {
                m[(i, *j)] = v.clone();
            }
        }
        m
    }
}

impl<S: Field> SparseMatrix<S> {
    /// Exact rank by sparse elimination.
    ///
    /// Pivot choice is Markowitz-style: the sparsest live row, and within it
    /// the column with the fewest live entries (ties to the lightest scalar).
    pub fn rank(&self) -> usize {
        // eliminate along the shorter dimension
        if self.ncols < self.nrows {
            return self.transpose().rank();
        }
        let mut rows: Vec<SparseVec<S>> = self.rows.clone();
        let mut alive: Vec<bool> = rows.iter().map(|r| !r.is_empty()).collect();
        let mut col_rows: Vec<Vec<usize>> = vec![Vec::new(); self.ncols];
        let mut col_count = vec![0usize; self.ncols];
        for (i, row) in rows.iter().enumerate() {
            for (j, _) in row {
                col_rows[*j].push(i);
                col_count[*j] += 1;
            }
        }
        let mut rank = 0;
        loop {
            let mut best: Option<(usize, usize)> = None;
            for (i, row) in rows.iter().enumerate() {
                if !alive[i] {
                    continue;
                }
                if row.is_empty() {
                    alive[i] = false;
                    continue;
                }
                if best.is_none_or(|(_, n)| row.len() < n) {
                    best = Some((i, row.len()));
                    if row.len() == 1 {
                        break;
                    }
                }
            }
            let Some((p, _)) = best else { break };
            let pivot_row = std::mem::take(&mut rows[p]);
            alive[p] = false;
            let (pc, pv) = pivot_row
                .iter()
                .min_by_key(|(j, v)| (col_count[*j], v.weight()))
                .map(|(j, v)| (*j, v.clone()))
                .expect("nonempty pivot row");
            let pinv = pv.inverse().expect("nonzero in a field");
            for (j, _) in &pivot_row {
                col_count[*j] = col_count[*j].saturating_sub(1);
            }
            rank += 1;
            let targets = std::mem::take(&mut col_rows[pc]);
            for r in targets {
                if !alive[r] {
                    continue;
                }
                let Ok(k) = rows[r].binary_search_by_key(&pc, |(c, _)| *c) else {
                    continue;
                };
                let factor = rows[r][k].1.clone() * pinv.clone();
                let old = std::mem::take(&mut rows[r]);
                let merged = axpy_merge(&old, &pivot_row, &factor, |j, appeared| {
                    if appeared {
                        col_rows[j].push(r);
                        col_count[j] += 1;
                    } else {
                        col_count[j] = col_count[j].saturating_sub(1);
                    }
                });
                rows[r] = merged;
            }
        }
        rank
    }
}

impl<S: Field> SparseMatrix<S> {
    /// Basis of the right kernel, normalized like [`Matrix::kernel`](super::Matrix::kernel).
    pub fn kernel(&self) -> Kernel<S> {
        let mut ech = SparseEchelon::new(self.ncols);
        for row in &self.rows {
            ech.insert(row);
        }
        let free: Vec<usize> = (0..self.ncols).filter(|&c| ech.pivot_of[c].is_none()).collect();
        let basis = free
            .iter()
            .map(|&f| {
                let mut out = vec![S::zero(); self.ncols];
                out[f] = S::one();
                for (pc, prow) in &ech.rows {
                    if let Ok(k) = prow.binary_search_by_key(&f, |(c, _)| *c) {
                        out[*pc] = -prow[k].1.clone();
                    }
                }
                out
            })
            .collect();
        Kernel { basis, free }
    }
}

/// Incrementally maintained reduced echelon basis of sparse vectors.
#[derive(Clone, Debug)]
pub struct SparseEchelon<S> {
    dim: usize,
    rows: Vec<(usize, SparseVec<S>)>,
    pivot_of: Vec<Option<usize>>,
}

impl<S: Scalar> SparseEchelon<S> {
    pub fn new(dim: usize) -> Self {
        SparseEchelon {
            dim,
            rows: Vec::new(),
            pivot_of: vec![None; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Residual of `v` after eliminating every pivot column.
    pub fn reduce(&self, v: &SparseVec<S>) -> SparseVec<S> {
        // reduced rows vanish on every other pivot column, so one pass suffices
        let hits: Vec<(usize, S)> = v.iter().filter(|(j, _)| self.pivot_of[*j].is_some()).cloned().collect();
        let mut v = v.clone();
        for (j, c) in hits {
            let p = self.pivot_of[j].expect("pivot column");
            v = axpy_merge(&v, &self.rows[p].1, &c, |_, _| {});
        }
        v
    }

    pub fn contains(&self, v: &SparseVec<S>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` if independent of the current span and returns whether it was added.
    /// A nonzero residual without any unit entry is returned as the error.
    pub fn try_insert(&mut self, v: &SparseVec<S>) -> std::result::Result<bool, SparseVec<S>> {
        let mut v = self.reduce(v);
        if v.is_empty() {
            return Ok(false);
        }
        let Some((pc, pv)) = v.iter().filter(|(_, x)| x.is_unit()).min_by_key(|(_, x)| x.weight()).cloned() else {
            return Err(v);
        };
        let inv = pv.inverse().expect("unit pivot");
        for (_, x) in v.iter_mut() {
            *x = x.clone() * inv.clone();
        }
        for (_, prow) in self.rows.iter_mut() {
            if let Ok(k) = prow.binary_search_by_key(&pc, |(c, _)| *c) {
                let e = prow[k].1.clone();
                *prow = axpy_merge(prow, &v, &e, |_, _| {});
            }
        }
        self.pivot_of[pc] = Some(self.rows.len());
        self.rows.push((pc, v));
        Ok(true)
    }
}

impl<S: Field> SparseEchelon<S> {
    /// Adds `v` if independent of the current span; returns whether it was added.
    pub fn insert(&mut self, v: &SparseVec<S>) -> bool {
        self.try_insert(v).unwrap_or_else(|_| unreachable!("nonzero entries are units in a field"))
    }
}

/// Computes `a − factor·b`, reporting columns that newly appear or cancel.
fn axpy_merge<S: Scalar>(a: &SparseVec<S>, b: &SparseVec<S>, factor: &S, mut note: impl FnMut(usize, bool)) -> SparseVec<S> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let (mut i, mut k) = (0, 0);
    while i < a.len() || k < b.len() {
        let ca = a.get(i).map(|e| e.0);
        let cb = b.get(k).map(|e| e.0);
        match (ca, cb) {
            (Some(x), Some(y)) if x == y => {
                let v = a[i].1.clone() - factor.clone() * b[k].1.clone();
                if v.is_zero() {
                    note(x, false);
                } else {
                    out.push((x, v));
                }
                i += 1;
                k += 1;
            }
            (Some(x), Some(y)) if x < y => {
                out.push(a[i].clone());
                i += 1;
            }
            (Some(_), None) => {
                out.push(a[i].clone());
                i += 1;
            }
            (_, Some(y)) => {
                out.push((y, -(factor.clone() * b[k].1.clone())));
                note(y, true);
                k += 1;
            }
            (None, None) => unreachable!(),
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, Rational};
    use proptest::prelude::*;

    fn dense_rank(rows: &[Vec<i64>], ncols: usize) -> usize {
        let m = super::super::Matrix::<Rational>::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect(),
        );
        if rows.is_empty() || ncols == 0 {
            0
        } else {
            m.rank()
        }
    }

    #[test]
    fn sparse_kernel_matches_dense() {
        let rows = [vec![1, 2, 0, -1], vec![2, 4, 1, 0], vec![3, 6, 1, -1]];
        let dense = super::super::Matrix::<Rational>::from_rows(
            rows.iter().map(|r| r.iter().map(|&v| rat(v)).collect()).collect(),
        );
        let sparse = SparseMatrix::from_triplets(
            3,
            4,
            rows.iter()
                .enumerate()
                .flat_map(|(i, r)| r.iter().enumerate().map(move |(j, &v)| (i, j, rat(v)))),
        );
        let k = sparse.kernel();
        assert_eq!(k.dim(), dense.kernel().dim());
        for v in &k.basis {
            assert!(dense.mul_vec(v).iter().all(|x| x == &rat(0)));
        }
    }

    #[test]
    fn rank_small() {
        let m = SparseMatrix::from_triplets(
            3,
            3,
            vec![(0, 0, rat(1)), (0, 1, rat(1)), (1, 1, rat(1)), (1, 2, rat(1)), (2, 0, rat(1)), (2, 2, rat(-1))],
        );
        // row0 - row1 = (1,0,-1) = row2
        assert_eq!(m.rank(), 2);
        assert_eq!(SparseMatrix::<Rational>::new(4, 5).rank(), 0);
    }

    #[test]
    fn duplicates_are_summed() {
        let m = SparseMatrix::from_triplets(1, 2, vec![(0, 0, rat(1)), (0, 0, rat(-1)), (0, 1, rat(2))]);
        assert_eq!(m.row(0), &vec![(1, rat(2))]);
    }

    proptest! {
        #[test]
        fn sparse_rank_matches_dense(
            rows in proptest::collection::vec(proptest::collection::vec(-2i64..=2, 6), 1..7)
        ) {
            let trip = rows.iter().enumerate().flat_map(|(i, r)| {
                r.iter().enumerate().map(move |(j, &v)| (i, j, rat(v)))
            });
            let s = SparseMatrix::from_triplets(rows.len(), 6, trip);
            prop_assert_eq!(s.rank(), dense_rank(&rows, 6));
            prop_assert_eq!(s.transpose().rank(), s.rank());
        }
    }
}
