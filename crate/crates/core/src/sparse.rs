// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Compressed sparse row storage, generic over the scalar type.

use std::collections::HashMap;
use std::ops::{Add, AddAssign};

use num_traits::{Float, Zero};

/// Immutable compressed-sorted-row matrix.
///
/// Column indices within each row are strictly increasing and explicit
/// zeros are never stored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CsrMatrix<T> {
    rows: usize,
    cols: usize,
    offsets: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<T>,
}

impl<T: Copy + Zero + PartialEq> CsrMatrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CsrMatrix {
            rows,
            cols,
            offsets: vec![0; rows + 1],
            indices: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Assembles a matrix from per-row entry lists. Each row must already be
    /// sorted by column without duplicates; zero values are dropped.
    pub fn from_sorted_rows<I>(rows: usize, cols: usize, row_entries: I) -> Self
    where
        I: IntoIterator<Item = Vec<(u32, T)>>,
    {
        let mut offsets = Vec::with_capacity(rows + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for entries in row_entries {
            debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
            for (c, v) in entries {
                debug_assert!((c as usize) < cols);
                if v != T::zero() {
                    indices.push(c);
                    values.push(v);
                }
            }
            offsets.push(indices.len());
        }
        assert_eq!(offsets.len(), rows + 1, "row count mismatch");
        CsrMatrix {
            rows,
            cols,
            offsets,
            indices,
            values,
        }
    }

    /// Builds from unsorted `(row, col, value)` triplets, summing duplicates.
    pub fn from_triplets(rows: usize, cols: usize, mut triplets: Vec<(u32, u32, T)>) -> Self
    where
        T: Add<Output = T>,
    {
        triplets.sort_unstable_by_key(|&(r, c, _)| (r, c));
        let mut per_row: Vec<Vec<(u32, T)>> = vec![Vec::new(); rows];
        for (r, c, v) in triplets {
            let row = &mut per_row[r as usize];
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 = last.1 + v,
                _ => row.push((c, v)),
            }
        }
        Self::from_sorted_rows(rows, cols, per_row)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.values.len()
    }

    /// Column indices and values of row `r`.
    #[inline]
    pub fn row(&self, r: usize) -> (&[u32], &[T]) {
        let span = self.offsets[r]..self.offsets[r + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> T {
        let (idx, vals) = self.row(r);
        match idx.binary_search(&(c as u32)) {
            Ok(k) => vals[k],
            Err(_) => T::zero(),
        }
    }

    /// Non-zero entries in row-major order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.rows).flat_map(move |r| {
            let (idx, vals) = self.row(r);
            idx.iter().zip(vals).map(move |(&c, &v)| (r, c as usize, v))
        })
    }

    pub fn transpose(&self) -> Self {
        let mut counts = vec![0usize; self.cols + 1];
        for &c in &self.indices {
            counts[c as usize + 1] += 1;
        }
        for i in 0..self.cols {
            counts[i + 1] += counts[i];
        }
        let offsets = counts.clone();
        let mut cursor = counts;
        let mut indices = vec![0u32; self.nnz()];
        let mut values = vec![T::zero(); self.nnz()];
        for r in 0..self.rows {
            let (idx, vals) = self.row(r);
            for (&c, &v) in idx.iter().zip(vals) {
                let slot = &mut cursor[c as usize];
                indices[*slot] = r as u32;
                values[*slot] = v;
                *slot += 1;
            }
        }
        CsrMatrix {
            rows: self.cols,
            cols: self.rows,
            offsets,
            indices,
            values,
        }
    }

    /// Applies `f` to every stored entry; results equal to zero are dropped.
    pub fn map<U, F>(&self, mut f: F) -> CsrMatrix<U>
    where
        U: Copy + Zero + PartialEq,
        F: FnMut(usize, usize, T) -> U,
    {
        CsrMatrix::from_sorted_rows(
            self.rows,
            self.cols,
            (0..self.rows).map(|r| {
                let (idx, vals) = self.row(r);
                idx.iter()
                    .zip(vals)
                    .map(|(&c, &v)| (c, f(r, c as usize, v)))
                    .collect()
            }),
        )
    }

    /// Entry-wise `f(self, other)` over the union of both supports.
    pub fn zip_with<F>(&self, other: &Self, mut f: F) -> Self
    where
        F: FnMut(T, T) -> T,
    {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        let zero = T::zero();
        CsrMatrix::from_sorted_rows(
            self.rows,
            self.cols,
            (0..self.rows).map(|r| {
                let (ai, av) = self.row(r);
                let (bi, bv) = other.row(r);
                let mut out = Vec::with_capacity(ai.len().max(bi.len()));
                let (mut i, mut j) = (0, 0);
                while i < ai.len() || j < bi.len() {
                    let take_a = j == bi.len() || (i < ai.len() && ai[i] <= bi[j]);
                    let take_b = i == ai.len() || (j < bi.len() && bi[j] <= ai[i]);
                    match (take_a, take_b) {
                        (true, true) => {
                            out.push((ai[i], f(av[i], bv[j])));
                            i += 1;
                            j += 1;
                        }
                        (true, false) => {
                            out.push((ai[i], f(av[i], zero)));
                            i += 1;
                        }
                        _ => {
                            out.push((bi[j], f(zero, bv[j])));
                            j += 1;
                        }
                    }
                }
                out
            }),
        )
    }

    pub fn row_sums(&self) -> Vec<T>
    where
        T: AddAssign,
    {
        (0..self.rows)
            .map(|r| {
                let mut acc = T::zero();
                for &v in self.row(r).1 {
                    acc += v;
                }
                acc
            })
            .collect()
    }

    pub fn col_sums(&self) -> Vec<T>
    where
        T: AddAssign,
    {
        let mut acc = vec![T::zero(); self.cols];
        for (_, c, v) in self.iter() {
            acc[c] += v;
        }
        acc
    }
}

impl<T: Float> CsrMatrix<T> {
    /// `y = self * x` for a dense vector `x`.
    pub fn mul_vec(&self, x: &[T]) -> Vec<T> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| {
                let (idx, vals) = self.row(r);
                idx.iter()
                    .zip(vals)
                    .fold(T::zero(), |acc, (&c, &v)| acc + v * x[c as usize])
            })
            .collect()
    }

    /// Sparse product with real arithmetic.
    pub fn mul_sparse(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows);
        let mut dense = vec![T::zero(); other.cols];
        let mut touched = vec![false; other.cols];
        let mut support: Vec<u32> = Vec::new();
        let rows = (0..self.rows).map(|r| {
            let (ai, av) = self.row(r);
            for (&k, &a) in ai.iter().zip(av) {
                let (bi, bv) = other.row(k as usize);
                for (&c, &b) in bi.iter().zip(bv) {
                    if !touched[c as usize] {
                        touched[c as usize] = true;
                        support.push(c);
                    }
                    dense[c as usize] = dense[c as usize] + a * b;
                }
            }
            support.sort_unstable();
            let out: Vec<(u32, T)> = support.iter().map(|&c| (c, dense[c as usize])).collect();
            for &c in &support {
                dense[c as usize] = T::zero();
                touched[c as usize] = false;
            }
            support.clear();
            out
        });
        let rows: Vec<Vec<(u32, T)>> = rows.collect();
        CsrMatrix::from_sorted_rows(self.rows, other.cols, rows)
    }

    pub fn frobenius_norm(&self) -> T {
        self.values
            .iter()
            .fold(T::zero(), |acc, &v| acc + v * v)
            .sqrt()
    }
}

/// Associative accumulator for sparse counts: per-row hash maps that are
/// merged by addition and frozen into a [`CsrMatrix`].
#[derive(Debug, Clone)]
pub struct RowAccumulator<T> {
    cols: usize,
    rows: Vec<HashMap<u32, T>>,
}

impl<T: Copy + Zero + PartialEq + AddAssign> RowAccumulator<T> {
    pub fn new(rows: usize, cols: usize) -> Self {
        RowAccumulator {
            cols,
            rows: vec![HashMap::new(); rows],
        }
    }

    #[inline]
    pub fn add(&mut self, r: usize, c: usize, v: T) {
        *self.rows[r].entry(c as u32).or_insert_with(T::zero) += v;
    }

    /// Adds every entry of `other` into `self`.
    pub fn merge(mut self, other: Self) -> Self {
        assert_eq!(self.rows.len(), other.rows.len());
        for (mine, theirs) in self.rows.iter_mut().zip(other.rows) {
            if mine.is_empty() {
                *mine = theirs;
                continue;
            }
            for (c, v) in theirs {
                *mine.entry(c).or_insert_with(T::zero) += v;
            }
        }
        self
    }

    pub fn freeze(self) -> CsrMatrix<T> {
        let cols = self.cols;
        let n = self.rows.len();
        CsrMatrix::from_sorted_rows(
            n,
            cols,
            self.rows.into_iter().map(|row| {
                let mut entries: Vec<(u32, T)> = row.into_iter().collect();
                entries.sort_unstable_by_key(|e| e.0);
                entries
            }),
        )
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn triplets_sum_duplicates_and_drop_zeros() {
        let m = CsrMatrix::from_triplets(3, 3, vec![(0, 1, 2i64), (0, 1, 3), (2, 0, 1), (1, 1, 0)]);
        assert_eq!(m.nnz(), 2);
        assert_eq!(m.get(0, 1), 5);
        assert_eq!(m.get(2, 0), 1);
        assert_eq!(m.get(1, 1), 0);
    }

    #[test]
    fn transpose_roundtrip() {
        let m = CsrMatrix::from_triplets(2, 3, vec![(0, 2, 1.5f64), (1, 0, -2.0), (1, 2, 4.0)]);
        let t = m.transpose();
        assert_eq!((t.rows(), t.cols()), (3, 2));
        assert_eq!(t.get(2, 1), 4.0);
        assert_eq!(t.transpose(), m);
    }

    #[test]
    fn zip_with_covers_union() {
        let a = CsrMatrix::from_triplets(2, 2, vec![(0, 0, 1i64), (1, 1, 2)]);
        let b = CsrMatrix::from_triplets(2, 2, vec![(0, 1, 5i64), (1, 1, -2)]);
        let s = a.zip_with(&b, |x, y| x + y);
        assert_eq!(s.nnz(), 2);
        assert_eq!(s.get(0, 1), 5);
        assert_eq!(s.get(1, 1), 0);
    }

    #[test]
    fn real_product_matches_dense() {
        let a = CsrMatrix::from_triplets(2, 3, vec![(0, 0, 1.0f64), (0, 2, 2.0), (1, 1, 3.0)]);
        let b = CsrMatrix::from_triplets(3, 2, vec![(0, 1, 4.0f64), (1, 0, 5.0), (2, 1, 6.0)]);
        let c = a.mul_sparse(&b);
        assert_eq!(c.get(0, 1), 16.0);
        assert_eq!(c.get(1, 0), 15.0);
        assert_eq!(c.get(0, 0), 0.0);
        assert_eq!(a.mul_vec(&[1.0, 1.0, 1.0]), vec![3.0, 3.0]);
    }

    #[test]
    fn accumulator_merge_is_order_free() {
        let mut a = RowAccumulator::<i64>::new(2, 2);
        let mut b = RowAccumulator::<i64>::new(2, 2);
        a.add(0, 1, 1);
        b.add(0, 1, 2);
        b.add(1, 0, 7);
        let ab = a.clone().merge(b.clone()).freeze();
        let ba = b.merge(a).freeze();
        assert_eq!(ab, ba);
        assert_eq!(ab.get(0, 1), 3);
    }
}
