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

//! Sparse pair-count matrices with zero diagonal.

use std::fmt;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orbit::OrbitKey;
use crate::sparse::{CsrMatrix, RowAccumulator};

/// `n x n` matrix of signed 64-bit pair counts. The diagonal is always zero.
#[derive(Clone, PartialEq, Eq)]
pub struct CountMatrix {
    inner: CsrMatrix<i64>,
}

impl fmt::Debug for CountMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CountMatrix(n={}, nnz={})", self.n(), self.nnz())
    }
}

impl CountMatrix {
    pub fn zeros(n: usize) -> Self {
        CountMatrix {
            inner: CsrMatrix::zeros(n, n),
        }
    }

    /// Wraps a square CSR matrix, discarding its diagonal.
    pub fn from_csr(m: CsrMatrix<i64>) -> Self {
        assert_eq!(m.rows(), m.cols(), "count matrices are square");
        let inner = if m.iter().any(|(r, c, _)| r == c) {
            m.map(|r, c, v| if r == c { 0 } else { v })
        } else {
            m
        };
        CountMatrix { inner }
    }

    pub fn from_accumulator(acc: RowAccumulator<i64>) -> Self {
        Self::from_csr(acc.freeze())
    }

    pub fn from_triplets(n: usize, triplets: Vec<(u32, u32, i64)>) -> Self {
        Self::from_csr(CsrMatrix::from_triplets(n, n, triplets))
    }

    /// Builds row by row from sorted `(col, count)` lists.
    pub fn from_sorted_rows<I>(n: usize, rows: I) -> Self
    where
        I: IntoIterator<Item = Vec<(u32, i64)>>,
    {
        Self::from_csr(CsrMatrix::from_sorted_rows(n, n, rows))
    }

    /// The adjacency matrix of `g`.
    pub fn adjacency(g: &Graph) -> Self {
        CountMatrix {
            inner: CsrMatrix::from_sorted_rows(
                g.n(),
                g.n(),
                (0..g.n()).map(|u| g.neighbors(u).iter().map(|&v| (v, 1)).collect()),
            ),
        }
    }

    pub fn n(&self) -> usize {
        self.inner.rows()
    }

    pub fn nnz(&self) -> usize {
        self.inner.nnz()
    }

    #[inline]
    pub fn get(&self, u: usize, v: usize) -> i64 {
        self.inner.get(u, v)
    }

    #[inline]
    pub fn row(&self, u: usize) -> (&[u32], &[i64]) {
        self.inner.row(u)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, i64)> + '_ {
        self.inner.iter()
    }

    pub fn as_csr(&self) -> &CsrMatrix<i64> {
        &self.inner
    }

    /// Element-wise `self + coeff * other`, with overflow checking.
    pub fn add(&self, other: &CountMatrix, coeff: i64) -> Result<CountMatrix> {
        if self.n() != other.n() {
            return Err(Error::DimensionMismatch {
                left: self.n(),
                right: other.n(),
            });
        }
        let mut overflow = false;
        let inner = self.inner.zip_with(&other.inner, |a, b| {
            match coeff.checked_mul(b).and_then(|s| a.checked_add(s)) {
                Some(v) => v,
                None => {
                    overflow = true;
                    0
                }
            }
        });
        if overflow {
            return Err(Error::Overflow { context: "add" });
        }
        Ok(CountMatrix { inner })
    }

    /// `self - other`.
    pub fn sub(&self, other: &CountMatrix) -> Result<CountMatrix> {
        self.add(other, -1)
    }

    /// `coeff * self`.
    pub fn scale(&self, coeff: i64) -> Result<CountMatrix> {
        CountMatrix::zeros(self.n()).add(self, coeff)
    }

    /// Divides every entry by `divisor`, failing on a non-zero remainder.
    pub fn div_exact(&self, divisor: i64, equation: &str) -> Result<CountMatrix> {
        if let Some((r, c, v)) = self.iter().find(|&(_, _, v)| v % divisor != 0) {
            return Err(Error::inconsistent(
                equation,
                r,
                c,
                format!("{v} is not divisible by {divisor}"),
            ));
        }
        Ok(CountMatrix {
            inner: self.inner.map(|_, _, v| v / divisor),
        })
    }

    pub fn transpose(&self) -> CountMatrix {
        CountMatrix {
            inner: self.inner.transpose(),
        }
    }

    pub fn row_sums(&self) -> Vec<i64> {
        self.inner.row_sums()
    }

    pub fn col_sums(&self) -> Vec<i64> {
        self.inner.col_sums()
    }

    /// Sum of all entries.
    pub fn vol(&self) -> i64 {
        self.iter().map(|(_, _, v)| v).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.nnz() == 0
    }

    pub fn is_symmetric(&self) -> bool {
        self.inner == self.inner.transpose()
    }

    /// First negative entry, if any.
    pub fn first_negative(&self) -> Option<(usize, usize, i64)> {
        self.iter().find(|&(_, _, v)| v < 0)
    }

    pub fn negative_count(&self) -> usize {
        self.iter().filter(|&(_, _, v)| v < 0).count()
    }

    /// First entry where `self` and `other` differ, in row-major order.
    pub fn first_difference(&self, other: &CountMatrix) -> Option<(usize, usize, i64, i64)> {
        if self == other {
            return None;
        }
        let diff = self.inner.zip_with(&other.inner, |a, b| a.wrapping_sub(b));
        let first = diff.iter().next();
        first.map(|(r, c, _)| (r, c, self.get(r, c), other.get(r, c)))
    }

    /// Writes the triplet text format: a header followed by one
    /// `row<TAB>col<TAB>count` line per non-zero, sorted by `(row, col)`.
    pub fn write_triplets<W: Write>(&self, key: Option<OrbitKey>, mut w: W) -> std::io::Result<()> {
        writeln!(w, "# n: {}", self.n())?;
        if let Some(key) = key {
            writeln!(w, "# key: {}", key.header())?;
        }
        for (r, c, v) in self.iter() {
            writeln!(w, "{r}\t{c}\t{v}")?;
        }
        Ok(())
    }

    /// Reads the triplet format written by [`CountMatrix::write_triplets`].
    pub fn read_triplets<R: BufRead>(reader: R) -> Result<(CountMatrix, Option<OrbitKey>)> {
        let mut n: Option<usize> = None;
        let mut key = None;
        let mut triplets = Vec::new();
        for (idx, line) in reader.lines().enumerate() {
            let line = line?;
            let bad = || Error::Parse {
                line: idx + 1,
                found: line.split_whitespace().count(),
            };
            if let Some(rest) = line.strip_prefix("# n:") {
                n = Some(rest.trim().parse().map_err(|_| bad())?);
                continue;
            }
            if let Some(rest) = line.strip_prefix("# key:") {
                key = Some(OrbitKey::parse_header(rest.trim())?);
                continue;
            }
            if line.starts_with('#') || line.trim().is_empty() {
                continue;
            }
            let parts: Vec<&str> = line.split('\t').collect();
            if parts.len() != 3 {
                return Err(bad());
            }
            let r: u32 = parts[0].parse().map_err(|_| bad())?;
            let c: u32 = parts[1].parse().map_err(|_| bad())?;
            let v: i64 = parts[2].parse().map_err(|_| bad())?;
            triplets.push((r, c, v));
        }
        let n = n.ok_or(Error::Parse { line: 1, found: 0 })?;
        if let Some(&(r, c, _)) = triplets
            .iter()
            .find(|&&(r, c, _)| r as usize >= n || c as usize >= n)
        {
            return Err(Error::InvalidArgument(format!("entry ({r}, {c}) outside n = {n}")));
        }
        Ok((CountMatrix::from_triplets(n, triplets), key))
    }
}

/// Square integer matrix split into a [`CountMatrix`] off-diagonal part and
/// an explicit diagonal, as produced by powers of the adjacency matrix.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WalkMatrix {
    pub offdiag: CountMatrix,
    pub diag: Vec<i64>,
}

impl WalkMatrix {
    pub fn identity(n: usize) -> Self {
        WalkMatrix {
            offdiag: CountMatrix::zeros(n),
            diag: vec![1; n],
        }
    }

    pub fn adjacency(g: &Graph) -> Self {
        WalkMatrix::from(CountMatrix::adjacency(g))
    }

    pub fn n(&self) -> usize {
        self.diag.len()
    }

    pub fn get(&self, u: usize, v: usize) -> i64 {
        if u == v {
            self.diag[u]
        } else {
            self.offdiag.get(u, v)
        }
    }

    /// Row sums including the diagonal.
    pub fn row_sums(&self) -> Vec<i64> {
        self.offdiag
            .row_sums()
            .into_iter()
            .zip(&self.diag)
            .map(|(s, d)| s + d)
            .collect()
    }
}

impl From<CountMatrix> for WalkMatrix {
    fn from(offdiag: CountMatrix) -> Self {
        let n = offdiag.n();
        WalkMatrix {
            offdiag,
            diag: vec![0; n],
        }
    }
}

/// Exact integer product `a * b`; any 64-bit overflow is an error.
pub fn matmul(a: &WalkMatrix, b: &WalkMatrix) -> Result<WalkMatrix> {
    let n = a.n();
    if b.n() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: b.n(),
        });
    }
    let overflow = || Error::Overflow { context: "matmul" };
    let mut dense = vec![0i64; n];
    let mut touched = vec![false; n];
    let mut support: Vec<u32> = Vec::new();
    let mut diag = vec![0i64; n];
    let mut rows = Vec::with_capacity(n);
    for r in 0..n {
        let mut scatter = |k: usize, coeff: i64, dense: &mut [i64]| -> Result<()> {
            if coeff == 0 {
                return Ok(());
            }
            let (idx, vals) = b.offdiag.row(k);
            let bd = b.diag[k];
            let mut put = |c: usize, v: i64| -> Result<()> {
                let t = coeff.checked_mul(v).ok_or_else(overflow)?;
                dense[c] = dense[c].checked_add(t).ok_or_else(overflow)?;
                if !touched[c] {
                    touched[c] = true;
                    support.push(c as u32);
                }
                Ok(())
            };
            for (&c, &v) in idx.iter().zip(vals) {
                put(c as usize, v)?;
            }
            if bd != 0 {
                put(k, bd)?;
            }
            Ok(())
        };
        let (idx, vals) = a.offdiag.row(r);
        for (&k, &coeff) in idx.iter().zip(vals) {
            scatter(k as usize, coeff, &mut dense)?;
        }
        scatter(r, a.diag[r], &mut dense)?;
        support.sort_unstable();
        let mut row = Vec::with_capacity(support.len());
        for &c in &support {
            let c = c as usize;
            if c == r {
                diag[r] = dense[c];
            } else if dense[c] != 0 {
                row.push((c as u32, dense[c]));
            }
            dense[c] = 0;
            touched[c] = false;
        }
        support.clear();
        rows.push(row);
    }
    Ok(WalkMatrix {
        offdiag: CountMatrix::from_sorted_rows(n, rows),
        diag,
    })
}
