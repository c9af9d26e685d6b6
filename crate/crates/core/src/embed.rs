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

//! Closed-form PMI matrices and truncated-SVD node embeddings.

use std::fmt::{self, LowerExp};
use std::io::{self, Write};

use num_traits::Float;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::count::{matmul, CountMatrix, WalkMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orbit::OrbitKey;
use crate::sparse::CsrMatrix;

/// What a PMI matrix was built from.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PmiSource {
    /// An orbit adjacency matrix (or any count matrix when `key` is `None`).
    Orbit { key: Option<OrbitKey>, b: f64 },
    /// The `power`-th power of the adjacency matrix.
    RandomWalk { power: usize, b: f64 },
    /// Averaged transition-matrix powers up to `window`.
    DeepWalk { window: usize, b: f64 },
}

impl fmt::Display for PmiSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PmiSource::Orbit { key: Some(k), b } => write!(f, "gopmi key={k} b={b}"),
            PmiSource::Orbit { key: None, b } => write!(f, "gopmi b={b}"),
            PmiSource::RandomWalk { power, b } => write!(f, "rwpmi p={power} b={b}"),
            PmiSource::DeepWalk { window, b } => write!(f, "deepwalk T={window} b={b}"),
        }
    }
}

/// Square real matrix defined only where its base matrix is non-zero;
/// elsewhere entries are absent (never `-inf`).
#[derive(Debug, Clone, PartialEq)]
pub struct PmiMatrix<T> {
    n: usize,
    offsets: Vec<usize>,
    indices: Vec<u32>,
    values: Vec<T>,
    pub source: PmiSource,
}

impl<T: Float> PmiMatrix<T> {
    fn from_rows(n: usize, rows: Vec<Vec<(u32, T)>>, source: PmiSource) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        let mut indices = Vec::new();
        let mut values = Vec::new();
        offsets.push(0);
        for row in rows {
            for (c, v) in row {
                indices.push(c);
                values.push(v);
            }
            offsets.push(indices.len());
        }
        PmiMatrix {
            n,
            offsets,
            indices,
            values,
            source,
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Number of defined entries.
    pub fn defined(&self) -> usize {
        self.values.len()
    }

    pub fn row(&self, r: usize) -> (&[u32], &[T]) {
        let span = self.offsets[r]..self.offsets[r + 1];
        (&self.indices[span.clone()], &self.values[span])
    }

    /// `None` where the entry is absent.
    pub fn get(&self, r: usize, c: usize) -> Option<T> {
        let (idx, vals) = self.row(r);
        idx.binary_search(&(c as u32)).ok().map(|p| vals[p])
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, usize, T)> + '_ {
        (0..self.n).flat_map(move |r| {
            let (idx, vals) = self.row(r);
            idx.iter().zip(vals).map(move |(&c, &v)| (r, c as usize, v))
        })
    }

    /// Positive part, with absent entries as zero.
    pub fn clipped(&self) -> CsrMatrix<T> {
        CsrMatrix::from_sorted_rows(
            self.n,
            self.n,
            (0..self.n).map(|r| {
                let (idx, vals) = self.row(r);
                idx.iter()
                    .zip(vals)
                    .filter(|&(_, &v)| v > T::zero())
                    .map(|(&c, &v)| (c, v))
                    .collect()
            }),
        )
    }

    pub fn is_symmetric(&self) -> bool {
        self.iter().all(|(r, c, v)| self.get(c, r) == Some(v))
    }
}

fn cast<T: Float>(v: f64) -> T {
    T::from(v).expect("value representable in the scalar type")
}

fn log_b<T: Float>(b: f64) -> Result<T> {
    if !(b > 0.0 && b.is_finite()) {
        return Err(Error::InvalidArgument(format!("b must be a positive real, got {b}")));
    }
    Ok(cast::<T>(b).ln())
}

/// `ln(vol * a / (rows_i * cols_j)) - ln b` on the support of an integer
/// matrix given row by row.
fn count_pmi<T: Float + Send + Sync>(
    n: usize,
    row: impl Fn(usize) -> Vec<(u32, i64)> + Sync,
    row_sums: &[i64],
    col_sums: &[i64],
    b: f64,
    source: PmiSource,
) -> Result<PmiMatrix<T>> {
    let vol: i64 = row_sums.iter().sum();
    if vol == 0 {
        return Err(Error::InvalidArgument("PMI of an all-zero matrix".into()));
    }
    let shift = log_b::<T>(b)?;
    let vol = cast::<T>(vol as f64);
    let rows = (0..n)
        .into_par_iter()
        .map(|i| {
            let ri = cast::<T>(row_sums[i] as f64);
            row(i)
                .into_iter()
                .map(|(j, a)| {
                    let cj = cast::<T>(col_sums[j as usize] as f64);
                    (j, (vol * cast::<T>(a as f64) / (ri * cj)).ln() - shift)
                })
                .collect()
        })
        .collect();
    Ok(PmiMatrix::from_rows(n, rows, source))
}

fn count_rows(m: &CountMatrix, r: usize) -> Vec<(u32, i64)> {
    let (idx, vals) = m.row(r);
    idx.iter().copied().zip(vals.iter().copied()).collect()
}

/// PMI of an orbit adjacency (or any count) matrix.
pub fn gopmi<T: Float + Send + Sync>(
    base: &CountMatrix,
    key: Option<OrbitKey>,
    b: f64,
) -> Result<PmiMatrix<T>> {
    count_pmi(
        base.n(),
        |r| count_rows(base, r),
        &base.row_sums(),
        &base.col_sums(),
        b,
        PmiSource::Orbit { key, b },
    )
}

/// `A^p` including its diagonal.
pub fn adjacency_power(g: &Graph, p: usize) -> Result<WalkMatrix> {
    if p == 0 {
        return Ok(WalkMatrix::identity(g.n()));
    }
    let a = WalkMatrix::adjacency(g);
    let mut out = a.clone();
    for _ in 1..p {
        out = matmul(&out, &a)?;
    }
    Ok(out)
}

/// PMI of `A^p`, `p` in 1..=3, diagonal included.
pub fn rwpmi<T: Float + Send + Sync>(g: &Graph, p: usize, b: f64) -> Result<PmiMatrix<T>> {
    if !(1..=3).contains(&p) {
        return Err(Error::InvalidArgument(format!("power {p} is not in 1..=3")));
    }
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let w = adjacency_power(g, p)?;
    let sums = w.row_sums();
    let row = |r: usize| {
        let mut v = count_rows(&w.offdiag, r);
        if w.diag[r] != 0 {
            let at = v.partition_point(|&(c, _)| (c as usize) < r);
            v.insert(at, (r as u32, w.diag[r]));
        }
        v
    };
    count_pmi(g.n(), row, &sums, &sums, b, PmiSource::RandomWalk { power: p, b })
}

/// `ln(vol(A) * (1/T sum_{r=1..T} (D^-1 A)^r) D^-1) - ln b` on its positive
/// support. Isolated nodes give empty rows and columns.
///
/// Evaluated as `vol * (S / T) / (d_i d_j)` with `S = sum (A D^-1)^(r-1) A`,
/// so that `T = 1` performs exactly the arithmetic of [`gopmi`] on `A`.
pub fn deepwalk_pmi<T: Float + Send + Sync>(g: &Graph, window: usize, b: f64) -> Result<PmiMatrix<T>> {
    if window == 0 {
        return Err(Error::InvalidArgument("window must be at least 1".into()));
    }
    if g.m() == 0 {
        return Err(Error::EmptyGraph);
    }
    let shift = log_b::<T>(b)?;
    let n = g.n();
    let deg: Vec<T> = (0..n).map(|u| cast(g.degree(u) as f64)).collect();
    let adjacency = |weight: &dyn Fn(u32) -> T| {
        CsrMatrix::from_sorted_rows(
            n,
            n,
            (0..n).map(|u| g.neighbors(u).iter().map(|&v| (v, weight(v))).collect()),
        )
    };
    let a = adjacency(&|_| T::one());
    let scaled = adjacency(&|v| T::one() / deg[v as usize]);
    let mut sum = a.clone();
    let mut power = a;
    for _ in 1..window {
        power = scaled.mul_sparse(&power);
        sum = sum.zip_with(&power, |x, y| x + y);
    }
    let vol = cast::<T>(2.0 * g.m() as f64);
    let inv_t = T::one() / cast(window as f64);
    let rows = (0..n)
        .map(|i| {
            let (idx, vals) = sum.row(i);
            idx.iter()
                .zip(vals)
                .filter(|&(_, &s)| s > T::zero())
                .map(|(&j, &s)| (j, (vol * (s * inv_t) / (deg[i] * deg[j as usize])).ln() - shift))
                .collect()
        })
        .collect();
    Ok(PmiMatrix::from_rows(n, rows, PmiSource::DeepWalk { window, b }))
}

/// Rank-`d` factorization of a clipped PMI matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding<T> {
    pub n: usize,
    pub d: usize,
    /// `U * sqrt(S)`, row-major `n x d`.
    pub values: Vec<T>,
    /// Non-increasing.
    pub singular_values: Vec<T>,
    /// Left singular vectors, row-major `n x d`.
    pub left: Vec<T>,
    /// Right singular vectors, row-major `n x d`.
    pub right: Vec<T>,
    /// Set when fewer than the requested columns were returned.
    pub warning: Option<String>,
}

impl<T: Float + Send + Sync> Embedding<T> {
    pub fn row(&self, i: usize) -> &[T] {
        &self.values[i * self.d..(i + 1) * self.d]
    }

    /// Frobenius norm of `X - U S V^T` where `X` is the clipped `pmi`.
    pub fn reconstruction_error(&self, pmi: &PmiMatrix<T>) -> T {
        let x = pmi.clipped();
        let n = self.n;
        let d = self.d;
        (0..n)
            .into_par_iter()
            .map(|i| {
                let mut row = vec![T::zero(); n];
                let (idx, vals) = x.row(i);
                for (&c, &v) in idx.iter().zip(vals) {
                    row[c as usize] = v;
                }
                let mut acc = T::zero();
                for (j, &xij) in row.iter().enumerate() {
                    let mut y = T::zero();
                    for c in 0..d {
                        y = y + self.left[i * d + c] * self.singular_values[c] * self.right[j * d + c];
                    }
                    let r = xij - y;
                    acc = acc + r * r;
                }
                acc
            })
            .reduce(T::zero, |a, b| a + b)
            .sqrt()
    }
}

/// Parameters of the iterative truncated SVD.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SvdOptions {
    pub seed: u64,
    /// Relative change of the leading singular values that stops iteration.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Extra basis columns beyond `d`.
    pub oversample: usize,
}

impl Default for SvdOptions {
    fn default() -> Self {
        SvdOptions {
            seed: 0x5eed,
            tolerance: 1e-10,
            max_iterations: 1000,
            oversample: 10,
        }
    }
}

/// Column-major dense block.
type Block<T> = Vec<Vec<T>>;

fn dot<T: Float>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).fold(T::zero(), |acc, (&x, &y)| acc + x * y)
}

/// Modified Gram-Schmidt, applied twice; columns that vanish are dropped.
fn orthonormalize<T: Float>(cols: Block<T>) -> Block<T> {
    let mut out: Block<T> = Vec::with_capacity(cols.len());
    for mut v in cols {
        let norm0 = dot(&v, &v).sqrt();
        if norm0 == T::zero() {
            continue;
        }
        for _ in 0..2 {
            for q in &out {
                let p = dot(q, &v);
                v.iter_mut().zip(q).for_each(|(x, &y)| *x = *x - p * y);
            }
        }
        let norm = dot(&v, &v).sqrt();
        if norm <= norm0 * cast(1e-10) {
            continue;
        }
        v.iter_mut().for_each(|x| *x = *x / norm);
        out.push(v);
    }
    out
}

/// `X * B` column by column.
fn mul_block<T: Float + Send + Sync>(x: &CsrMatrix<T>, b: &Block<T>) -> Block<T> {
    b.par_iter().map(|col| x.mul_vec(col)).collect()
}

/// `X^T * B` column by column.
fn mul_t_block<T: Float + Send + Sync>(x: &CsrMatrix<T>, b: &Block<T>) -> Block<T> {
    b.par_iter()
        .map(|col| {
            let mut out = vec![T::zero(); x.cols()];
            for r in 0..x.rows() {
                let (idx, vals) = x.row(r);
                for (&c, &v) in idx.iter().zip(vals) {
                    out[c as usize] = out[c as usize] + v * col[r];
                }
            }
            out
        })
        .collect()
}

/// One-sided Jacobi: rotates the columns of `w` until they are mutually
/// orthogonal and returns the accumulated `k x k` rotation (column-major).
fn jacobi<T: Float>(w: &mut Block<T>) -> Block<T> {
    let k = w.len();
    let mut j: Block<T> = (0..k)
        .map(|c| (0..k).map(|r| if r == c { T::one() } else { T::zero() }).collect())
        .collect();
    let eps = T::epsilon();
    for _ in 0..100 {
        let mut rotated = false;
        for p in 0..k {
            for q in p + 1..k {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma.abs() <= eps * (alpha * beta).sqrt() || gamma == T::zero() {
                    continue;
                }
                rotated = true;
                let two = T::one() + T::one();
                let zeta = (beta - alpha) / (two * gamma);
                let t = zeta.signum() / (zeta.abs() + (T::one() + zeta * zeta).sqrt());
                let c = T::one() / (T::one() + t * t).sqrt();
                let s = c * t;
                for m in [&mut *w, &mut j] {
                    let (lo, hi) = m.split_at_mut(q);
                    for (a, b) in lo[p].iter_mut().zip(hi[0].iter_mut()) {
                        let (x, y) = (*a, *b);
                        *a = c * x - s * y;
                        *b = s * x + c * y;
                    }
                }
            }
        }
        if !rotated {
            break;
        }
    }
    j
}

/// Truncated SVD embedding with default options.
pub fn embed<T: Float + Send + Sync>(pmi: &PmiMatrix<T>, d: usize) -> Result<Embedding<T>> {
    embed_with(pmi, d, SvdOptions::default())
}

/// Clips `pmi` to its positive part and factorizes it by subspace
/// iteration, keeping `U * sqrt(S)` for the leading `d` singular values.
pub fn embed_with<T: Float + Send + Sync>(
    pmi: &PmiMatrix<T>,
    d: usize,
    opts: SvdOptions,
) -> Result<Embedding<T>> {
    if d == 0 {
        return Err(Error::InvalidArgument("dimension must be at least 1".into()));
    }
    let n = pmi.n();
    let x = pmi.clipped();
    let k = n.min(d + opts.oversample);
    let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
    let start: Block<T> = (0..k)
        .map(|_| (0..n).map(|_| cast(rng.gen_range(-1.0..1.0))).collect())
        .collect();
    let mut q = orthonormalize(start);
    let tol = cast::<T>(opts.tolerance).max(T::epsilon() * cast(16.0));
    let mut prev: Option<Vec<T>> = None;
    let mut iteration = 0;
    let (u, sigma, v) = loop {
        iteration += 1;
        let mut w = mul_t_block(&x, &q);
        let rot = jacobi(&mut w);
        let sigma: Vec<T> = w.iter().map(|c| dot(c, c).sqrt()).collect();
        let mut order: Vec<usize> = (0..sigma.len()).collect();
        order.sort_by(|&a, &b| sigma[b].partial_cmp(&sigma[a]).unwrap());
        let lead: Vec<T> = order.iter().take(d).map(|&i| sigma[i]).collect();
        let converged = prev.as_ref().is_some_and(|p: &Vec<T>| {
            p.len() == lead.len()
                && p.iter().zip(&lead).all(|(&a, &b)| {
                    (a - b).abs() <= tol * a.abs().max(b.abs()).max(T::min_positive_value())
                })
        });
        let exhausted = q.len() == n;
        if converged || exhausted || iteration >= opts.max_iterations {
            // U = Q * J, V = W / sigma, both reordered by singular value.
            let u: Block<T> = order
                .iter()
                .map(|&c| {
                    let mut col = vec![T::zero(); n];
                    for (qi, &r) in q.iter().zip(&rot[c]) {
                        col.iter_mut().zip(qi).for_each(|(a, &b)| *a = *a + r * b);
                    }
                    col
                })
                .collect();
            let v: Block<T> = order
                .iter()
                .map(|&c| {
                    let s = sigma[c];
                    w[c].iter().map(|&e| if s > T::zero() { e / s } else { T::zero() }).collect()
                })
                .collect();
            let sigma: Vec<T> = order.iter().map(|&c| sigma[c]).collect();
            break (u, sigma, v);
        }
        prev = Some(lead);
        q = orthonormalize(mul_block(&x, &w));
        if q.is_empty() {
            break (Vec::new(), Vec::new(), Vec::new());
        }
    };
    finish(n, d, u, sigma, v)
}

fn finish<T: Float>(n: usize, d: usize, mut u: Block<T>, sigma: Vec<T>, mut v: Block<T>) -> Result<Embedding<T>> {
    let top = sigma.first().copied().unwrap_or(T::zero());
    let floor = top * T::epsilon() * cast(n.max(1) as f64);
    let rank = sigma.iter().take_while(|&&s| s > floor && s > T::zero()).count();
    let keep = d.min(rank);
    let warning = (keep < d).then(|| format!("requested {d} dimensions but the clipped matrix has rank {rank}"));
    // Fix signs: the largest-magnitude entry of each left vector is positive.
    for c in 0..keep {
        let big = u[c]
            .iter()
            .copied()
            .fold(T::zero(), |m, e| if e.abs() > m.abs() { e } else { m });
        if big < T::zero() {
            u[c].iter_mut().for_each(|e| *e = -*e);
            v[c].iter_mut().for_each(|e| *e = -*e);
        }
    }
    let row_major = |b: &Block<T>, scale: &dyn Fn(usize) -> T| -> Vec<T> {
        let mut out = Vec::with_capacity(n * keep);
        for i in 0..n {
            for c in 0..keep {
                out.push(b[c][i] * scale(c));
            }
        }
        out
    };
    Ok(Embedding {
        n,
        d: keep,
        values: row_major(&u, &|c| sigma[c].sqrt()),
        singular_values: sigma[..keep].to_vec(),
        left: row_major(&u, &|_| T::one()),
        right: row_major(&v, &|_| T::one()),
        warning,
    })
}

/// `label<TAB>v1<TAB>...<TAB>vd` per node, 17 significant digits.
pub fn write_embedding<T: Float + LowerExp, W: Write>(
    g: &Graph,
    emb: &Embedding<T>,
    mut w: W,
) -> io::Result<()> {
    for i in 0..emb.n {
        write!(w, "{}", g.label(i))?;
        for v in &emb.values[i * emb.d..(i + 1) * emb.d] {
            write!(w, "\t{v:.16e}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}
