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

//! Row-at-a-time computation of all 28 matrices.
//!
//! Materializing every matrix of a graph with tens of thousands of nodes
//! and millions of edges takes more memory than the counts are worth when
//! they are only written out or summarized. This engine instead keeps
//! per-edge triangle and path counts, then for each node `x` fills dense
//! scratch rows (`A^2`, `A^3`, and the common-neighbour sums behind every
//! redundancy equation) and solves both systems entry by entry. Rows are
//! handed to a [`RowSink`] in node order, so output does not depend on the
//! number of worker threads.

use std::collections::BTreeMap;
use std::io::Write;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use crate::count::CountMatrix;
use crate::dag::{degree_order, DegreeOrderedDag};
use crate::error::{Error, Result};
use crate::graph::{AdjacencyProbe, Graph};
use crate::orbit::{keys, walk_terms, OrbitAdjacencySet, OrbitKey, ALL_KEYS, NUM_KEYS};
use crate::solve::{PhaseTimings, SolveReport};

/// Row `x` of every matrix: sorted `(col, count)` lists indexed like
/// [`ALL_KEYS`].
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OrbitRow {
    pub entries: Vec<Vec<(u32, i64)>>,
}

impl OrbitRow {
    pub fn get(&self, key: OrbitKey) -> &[(u32, i64)] {
        &self.entries[key.index()]
    }
}

/// Receives rows in increasing node order.
pub trait RowSink {
    fn accept(&mut self, x: usize, row: &OrbitRow) -> Result<()>;
}

/// Per-edge counts shared by every row.
struct EdgeData {
    rev: Vec<usize>,
    /// `A_{3-3}(u, v)` per directed slot `u -> v`.
    tri: Vec<i64>,
    /// `A_{1-2}(u, v)` per directed slot: neighbours of `v` outside `N[u]`.
    path: Vec<i64>,
    /// Per node `v`: sum over neighbours `z` of `A_{1-2}(z, v) - 1`.
    in_path_excess: Vec<i64>,
    /// Per node `v`: sum over neighbours `z` of `A_{1-2}(v, z)`.
    out_path: Vec<i64>,
    /// Per node `v`: sum over neighbours `z` of `A_{3-3}(v, z)`.
    tri_sum: Vec<i64>,
}

/// Triangles per edge from the degree-ordered orientation: every triangle is
/// found once as `a -> b`, `a -> c`, `b -> c`.
fn triangles_per_slot(dag: &DegreeOrderedDag) -> Vec<i64> {
    let g = dag.graph();
    let slots = 2 * g.m();
    let counts = (0..g.n())
        .into_par_iter()
        .fold(
            || vec![0u32; slots],
            |mut t, a| {
                let out_a = dag.out_neighbors(a);
                for &b in out_a {
                    let b = b as usize;
                    let out_b = dag.out_neighbors(b);
                    let (mut i, mut j) = (0, 0);
                    while i < out_a.len() && j < out_b.len() {
                        match out_a[i].cmp(&out_b[j]) {
                            std::cmp::Ordering::Less => i += 1,
                            std::cmp::Ordering::Greater => j += 1,
                            std::cmp::Ordering::Equal => {
                                let c = out_a[i] as usize;
                                for (u, v) in [(a, b), (a, c), (b, c)] {
                                    t[g.edge_slot(u, v).unwrap()] += 1;
                                    t[g.edge_slot(v, u).unwrap()] += 1;
                                }
                                i += 1;
                                j += 1;
                            }
                        }
                    }
                }
                t
            },
        )
        .reduce(
            || vec![0u32; slots],
            |mut a, b| {
                a.iter_mut().zip(&b).for_each(|(x, y)| *x += y);
                a
            },
        );
    counts.into_iter().map(i64::from).collect()
}

impl EdgeData {
    fn new(g: &Graph) -> Self {
        let dag = degree_order(g);
        let tri = triangles_per_slot(&dag);
        let rev = g.reverse_slots();
        let mut path = vec![0i64; tri.len()];
        for u in 0..g.n() {
            for s in g.slot_range(u) {
                let v = g.slot_target(s);
                path[s] = g.degree(v) as i64 - 1 - tri[s];
            }
        }
        let per_node = |f: &dyn Fn(usize) -> i64| -> Vec<i64> {
            (0..g.n()).map(|v| g.slot_range(v).map(f).sum()).collect()
        };
        EdgeData {
            in_path_excess: per_node(&|s| path[rev[s]] - 1),
            out_path: per_node(&|s| path[s]),
            tri_sum: per_node(&|s| tri[s]),
            rev,
            tri,
            path,
        }
    }
}

struct Scratch {
    stamp: u32,
    seen: Vec<u32>,
    in_nx: Vec<u32>,
    touched: Vec<u32>,
    tri_edges: Vec<(u32, u32)>,
    a2: Vec<i64>,
    a3: Vec<i64>,
    cnt: Vec<i64>,
    rj: Vec<i64>,
    st_yz: Vec<i64>,
    st_xz: Vec<i64>,
    sp_yz: Vec<i64>,
    sp_zx: Vec<i64>,
    sp_xz: Vec<i64>,
    sp_zy: Vec<i64>,
}

impl Scratch {
    fn new(n: usize) -> Self {
        let z = || vec![0i64; n];
        Scratch {
            stamp: 0,
            seen: vec![0; n],
            in_nx: vec![0; n],
            touched: Vec::new(),
            tri_edges: Vec::new(),
            a2: z(),
            a3: z(),
            cnt: z(),
            rj: z(),
            st_yz: z(),
            st_xz: z(),
            sp_yz: z(),
            sp_zx: z(),
            sp_xz: z(),
            sp_zy: z(),
        }
    }

    #[inline]
    fn touch(&mut self, v: usize) {
        if self.seen[v] != self.stamp {
            self.seen[v] = self.stamp;
            self.touched.push(v as u32);
        }
    }

    fn clear(&mut self) {
        for &v in &self.touched {
            let v = v as usize;
            for a in [
                &mut self.a2,
                &mut self.a3,
                &mut self.cnt,
                &mut self.rj,
                &mut self.st_yz,
                &mut self.st_xz,
                &mut self.sp_yz,
                &mut self.sp_zx,
                &mut self.sp_xz,
                &mut self.sp_zy,
            ] {
                a[v] = 0;
            }
        }
        self.touched.clear();
        self.tri_edges.clear();
    }
}

#[derive(Default)]
struct RowTimes {
    rhs: Duration,
    solve: Duration,
    a3: Duration,
}

struct Engine<'g> {
    g: &'g Graph,
    probe: AdjacencyProbe<'g>,
    e: EdgeData,
}

/// Keys with a value at a neighbour / at a node two hops away.
const SINGLE_KEYS: usize = 19;
const DOUBLE_KEYS: usize = 8;
const I_A44: usize = keys::A4_4_3.index();

/// Walk-3 coefficient per key index, without the triple-hop key itself.
static WALK3: std::sync::LazyLock<[i64; NUM_KEYS]> = std::sync::LazyLock::new(|| {
    let mut c = [0; NUM_KEYS];
    for (k, v) in walk_terms(3) {
        if k != keys::A4_4_3 {
            c[k.index()] = v;
        }
    }
    c
});

fn half(v: i64, key: OrbitKey, x: usize, y: usize) -> Result<i64> {
    if v % 2 != 0 {
        return Err(Error::inconsistent(key.to_string(), x, y, format!("{v} is odd")));
    }
    Ok(v / 2)
}

impl<'g> Engine<'g> {
    fn new(g: &'g Graph) -> Result<Self> {
        // Every scratch quantity is bounded by max_degree^3.
        let d = g.max_degree() as i128;
        if 4 * d * d * d > i64::MAX as i128 {
            return Err(Error::Overflow { context: "row engine" });
        }
        Ok(Engine {
            g,
            probe: AdjacencyProbe::new(g),
            e: EdgeData::new(g),
        })
    }

    fn row(&self, x: usize, s: &mut Scratch, times: &mut RowTimes) -> Result<(OrbitRow, i64)> {
        let g = self.g;
        let e = &self.e;
        s.stamp += 1;
        let clock = Instant::now();

        for &z in g.neighbors(x) {
            s.in_nx[z as usize] = s.stamp;
            s.touch(z as usize);
        }
        for s1 in g.slot_range(x) {
            let z = g.slot_target(s1);
            let (t_xz, p_xz, p_zx) = (e.tri[s1], e.path[s1], e.path[e.rev[s1]]);
            for s2 in g.slot_range(z) {
                let y = g.slot_target(s2);
                if y == x {
                    continue;
                }
                s.touch(y);
                s.a2[y] += 1;
                s.st_yz[y] += e.tri[s2];
                s.st_xz[y] += t_xz;
                s.sp_yz[y] += e.path[e.rev[s2]];
                s.sp_zx[y] += p_zx;
                s.sp_xz[y] += p_xz;
                s.sp_zy[y] += e.path[s2];
                if y > z && s.in_nx[y] == s.stamp {
                    s.tri_edges.push((z as u32, y as u32));
                }
            }
        }
        // Common neighbours of (x, y) that are joined by an edge: diamonds
        // for non-adjacent y, 4-cliques for adjacent y.
        for i in 0..s.tri_edges.len() {
            let (z, w) = s.tri_edges[i];
            let (small, large) = if g.degree(z as usize) <= g.degree(w as usize) {
                (z as usize, w as usize)
            } else {
                (w as usize, z as usize)
            };
            for &y in g.neighbors(small) {
                let y = y as usize;
                if y != x && self.probe.contains(large, y) {
                    s.cnt[y] += 1;
                }
            }
        }
        for &y in g.neighbors(x) {
            let y = y as usize;
            let mut rj = 0;
            for &z in g.neighbors(y) {
                let z = z as usize;
                if z != x && s.in_nx[z] != s.stamp {
                    rj += s.a2[z] - 1;
                }
            }
            s.rj[y] = rj;
        }
        times.rhs += clock.elapsed();

        let clock = Instant::now();
        s.touch(x);
        let deg_x = g.degree(x) as i64;
        for &v in g.neighbors(x) {
            s.a3[v as usize] += deg_x;
        }
        let reach = s.touched.len();
        for i in 0..reach {
            let w = s.touched[i] as usize;
            let c = s.a2[w];
            if c == 0 {
                continue;
            }
            for &v in g.neighbors(w) {
                let v = v as usize;
                s.a3[v] += c;
                s.touch(v);
            }
        }
        times.a3 += clock.elapsed();

        let clock = Instant::now();
        if s.touched.len() > g.n() / 16 {
            // Dense rows: a stamp scan is cheaper than sorting.
            let stamp = s.stamp;
            s.touched.clear();
            s.touched
                .extend((0..g.n() as u32).filter(|&v| s.seen[v as usize] == stamp));
        } else {
            s.touched.sort_unstable();
        }
        let mut out = OrbitRow {
            entries: vec![Vec::new(); NUM_KEYS],
        };
        let mut residual = 0i64;
        let touched = std::mem::take(&mut s.touched);
        for &yy in &touched {
            let y = yy as usize;
            if y == x {
                continue;
            }
            let adjacent = s.in_nx[y] == s.stamp;
            let mut single = [(0usize, 0i64); SINGLE_KEYS];
            let mut double = [(0usize, 0i64); DOUBLE_KEYS];
            let terms: &[(usize, i64)] = if adjacent {
                let r = self.single_hop(x, y, s, &mut single)?;
                residual = residual.max(r.abs());
                &single
            } else if s.a2[y] > 0 {
                self.double_hop(x, y, s, &mut double)?;
                &double
            } else {
                &[]
            };
            let mut rest = s.a3[y];
            for &(k, v) in terms {
                rest -= WALK3[k] * v;
            }
            if rest < 0 || (rest != 0 && adjacent) {
                return Err(Error::inconsistent(
                    keys::A4_4_3.to_string(),
                    x,
                    y,
                    format!("walk remainder {rest}"),
                ));
            }
            for &(k, v) in terms.iter().chain([(I_A44, rest)].iter()) {
                if v < 0 {
                    return Err(Error::inconsistent(
                        ALL_KEYS[k].to_string(),
                        x,
                        y,
                        format!("negative count {v}"),
                    ));
                }
                if v != 0 {
                    out.entries[k].push((yy, v));
                }
            }
        }
        s.touched = touched;
        s.clear();
        times.solve += clock.elapsed();
        Ok((out, residual))
    }

    /// Entries of row `x` at a neighbour `y`; returns the residual of the
    /// redundant equation.
    fn single_hop(
        &self,
        x: usize,
        y: usize,
        s: &Scratch,
        vals: &mut [(usize, i64); SINGLE_KEYS],
    ) -> Result<i64> {
        let (g, e) = (self.g, &self.e);
        let sxy = g.edge_slot(x, y).unwrap();
        let syx = e.rev[sxy];
        let t = e.tri[sxy];
        let k = s.cnt[y];
        let (pxy, pyx) = (e.path[sxy], e.path[syx]);

        let ra_xy = s.st_yz[y] - t;
        let ra_yx = s.st_xz[y] - t;
        let rb = t * (t - 1);
        let rc = s.sp_yz[y];
        let (rd_xy, rd_yx) = (s.sp_zx[y], s.sp_zy[y]);
        let re_xy = e.in_path_excess[x] - (pyx - 1) - (s.sp_zx[y] - t);
        let re_yx = e.in_path_excess[y] - (pxy - 1) - (s.sp_zy[y] - t);
        let rf = pyx * pxy;
        let (rg_xy, rg_yx) = (pyx * (pyx - 1), pxy * (pxy - 1));
        let rh = e.tri_sum[x] - t - s.st_xz[y];
        let ri_xy = e.out_path[x] - pxy - s.sp_xz[y];
        let ri_yx = e.out_path[y] - pyx - s.sp_yz[y];
        let rj = s.rj[y];

        let a12_13 = ra_xy - 2 * k;
        let a13_12 = ra_yx - 2 * k;
        let a13_13 = half(rb - 2 * k, keys::A13_13, x, y)?;
        let a88 = rj - a12_13;
        let a10_10 = rc - a13_12;
        let a11_10 = rd_xy - 2 * a13_13;
        let a10_11 = rd_yx - 2 * a13_13;
        let a7_6 = half(re_xy - a11_10, keys::A7_6, x, y)?;
        let a6_7 = half(re_yx - a10_11, keys::A6_7, x, y)?;
        let a11_9 = half(rg_xy - 2 * a7_6, keys::A11_9, x, y)?;
        let a9_11 = half(rg_yx - 2 * a6_7, keys::A9_11, x, y)?;
        let a55 = rf - a88;
        let a5_4 = ri_xy - a88;
        let a4_5 = ri_yx - a88;
        let residual = 2 * a11_9 + a13_12 - rh;
        if residual != 0 {
            return Err(Error::inconsistent("single-hop (h)", x, y, format!("residual {residual}")));
        }

        *vals = [
            (keys::A00, 1),
            (keys::A1_2, pxy),
            (keys::A2_1, pyx),
            (keys::A33, t),
            (keys::A14_14, k),
            (keys::A12_13, a12_13),
            (keys::A13_12, a13_12),
            (keys::A13_13, a13_13),
            (keys::A8_8, a88),
            (keys::A10_10, a10_10),
            (keys::A11_10, a11_10),
            (keys::A10_11, a10_11),
            (keys::A7_6, a7_6),
            (keys::A6_7, a6_7),
            (keys::A11_9, a11_9),
            (keys::A9_11, a9_11),
            (keys::A5_5, a55),
            (keys::A5_4, a5_4),
            (keys::A4_5, a4_5),
        ]
        .map(|(key, v)| (key.index(), v));
        Ok(residual)
    }

    /// Entries of row `x` at a node `y` two hops away.
    fn double_hop(
        &self,
        x: usize,
        y: usize,
        s: &Scratch,
        vals: &mut [(usize, i64); DOUBLE_KEYS],
    ) -> Result<()> {
        let c = s.a2[y];
        let q = s.cnt[y];
        let a88 = half(c * (c - 1) - 2 * q, keys::A8_8_2, x, y)?;
        let a9_10 = s.st_yz[y] - 2 * q;
        let a10_9 = s.st_xz[y] - 2 * q;
        let a66 = (s.sp_xz[y] - c) - a9_10;
        let a66_mirror = (s.sp_yz[y] - c) - a10_9;
        if a66 != a66_mirror {
            return Err(Error::inconsistent(
                "double-hop (b)",
                x,
                y,
                format!("A6..6 is not symmetric ({a66} vs {a66_mirror})"),
            ));
        }
        *vals = [
            (keys::A1_1, c),
            (keys::A12_12_2, q),
            (keys::A8_8_2, a88),
            (keys::A9_10_2, a9_10),
            (keys::A10_9_2, a10_9),
            (keys::A6_6_2, a66),
            (keys::A4_5_2, s.sp_zy[y] - 2 * a88),
            (keys::A5_4_2, s.sp_zx[y] - 2 * a88),
        ]
        .map(|(key, v)| (key.index(), v));
        Ok(())
    }
}

/// Rows computed in parallel per block before being passed on in order.
const ROWS_PER_WORKER: usize = 16;

/// Computes every row of `g` and feeds it to `sink`.
///
/// Phase timings other than `enumeration` are summed over worker threads.
pub fn stream_rows(g: &Graph, sink: &mut dyn RowSink) -> Result<SolveReport> {
    let mut timings = PhaseTimings::default();
    let clock = Instant::now();
    let engine = Engine::new(g)?;
    timings.enumeration = clock.elapsed();

    let n = g.n();
    let block = ROWS_PER_WORKER * rayon::current_num_threads().max(1);
    let mut residual = 0i64;
    let mut start = 0;
    while start < n {
        let end = (start + block).min(n);
        let rows: Vec<Result<(OrbitRow, i64, RowTimes)>> = (start..end)
            .into_par_iter()
            .map_init(
                || Scratch::new(n),
                |s, x| {
                    let mut t = RowTimes::default();
                    engine.row(x, s, &mut t).map(|(r, res)| (r, res, t))
                },
            )
            .collect();
        for (x, r) in (start..end).zip(rows) {
            let (row, res, t) = r?;
            residual = residual.max(res);
            timings.rhs += t.rhs;
            timings.solve += t.solve;
            timings.a3 += t.a3;
            sink.accept(x, &row)?;
        }
        start = end;
    }
    Ok(SolveReport {
        consistency_residual: residual,
        negative_entry_count: 0,
        timings,
    })
}

/// Gathers rows into a full [`OrbitAdjacencySet`].
pub struct CollectSink {
    n: usize,
    rows: Vec<Vec<Vec<(u32, i64)>>>,
}

impl CollectSink {
    pub fn new(n: usize) -> Self {
        CollectSink {
            n,
            rows: (0..NUM_KEYS).map(|_| Vec::with_capacity(n)).collect(),
        }
    }

    pub fn into_set(self) -> Result<OrbitAdjacencySet> {
        let n = self.n;
        let map = ALL_KEYS
            .iter()
            .zip(self.rows)
            .map(|(&k, rows)| (k, CountMatrix::from_sorted_rows(n, rows)))
            .collect();
        OrbitAdjacencySet::from_map(n, map)
    }
}

impl RowSink for CollectSink {
    fn accept(&mut self, x: usize, row: &OrbitRow) -> Result<()> {
        debug_assert_eq!(self.rows[0].len(), x);
        for (dst, src) in self.rows.iter_mut().zip(&row.entries) {
            dst.push(src.clone());
        }
        Ok(())
    }
}

type Rows = Vec<Vec<(u32, i64)>>;

/// Keeps only the selected keys.
pub struct SelectSink {
    n: usize,
    keys: Vec<(OrbitKey, Rows)>,
}

impl SelectSink {
    pub fn new(n: usize, keys: &[OrbitKey]) -> Self {
        let mut keys = keys.to_vec();
        keys.sort();
        keys.dedup();
        SelectSink {
            n,
            keys: keys.into_iter().map(|k| (k, Vec::with_capacity(n))).collect(),
        }
    }

    pub fn into_matrices(self) -> BTreeMap<OrbitKey, CountMatrix> {
        let n = self.n;
        self.keys
            .into_iter()
            .map(|(k, rows)| (k, CountMatrix::from_sorted_rows(n, rows)))
            .collect()
    }
}

impl RowSink for SelectSink {
    fn accept(&mut self, _x: usize, row: &OrbitRow) -> Result<()> {
        for (k, rows) in &mut self.keys {
            rows.push(row.get(*k).to_vec());
        }
        Ok(())
    }
}

/// Streaming counterpart of [`crate::solve::compute_all`].
pub fn compute_all_streaming(g: &Graph) -> Result<(OrbitAdjacencySet, SolveReport)> {
    let mut sink = CollectSink::new(g.n());
    let report = stream_rows(g, &mut sink)?;
    Ok((sink.into_set()?, report))
}

/// Per-key totals: non-zeros, entry sum, an order-sensitive checksum and
/// row sums. Enough to compare runs and derive GDVs without keeping rows.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SummarySink {
    pub nnz: Vec<u64>,
    pub volume: Vec<i64>,
    pub checksum: Vec<u64>,
    pub row_sums: Vec<Vec<i64>>,
}

impl SummarySink {
    pub fn new(n: usize) -> Self {
        SummarySink {
            nnz: vec![0; NUM_KEYS],
            volume: vec![0; NUM_KEYS],
            checksum: vec![0xcbf2_9ce4_8422_2325; NUM_KEYS],
            row_sums: vec![vec![0; n]; NUM_KEYS],
        }
    }
}

#[inline]
fn mix(h: u64, word: u64) -> u64 {
    (h.rotate_left(5) ^ word).wrapping_mul(0x0100_0000_01b3)
}

impl RowSink for SummarySink {
    fn accept(&mut self, x: usize, row: &OrbitRow) -> Result<()> {
        for (k, entries) in row.entries.iter().enumerate() {
            for &(c, v) in entries {
                self.nnz[k] += 1;
                self.volume[k] += v;
                self.row_sums[k][x] += v;
                let h = mix(self.checksum[k], ((x as u64) << 32) | c as u64);
                self.checksum[k] = mix(h, v as u64);
            }
        }
        Ok(())
    }
}

/// Writes selected keys in the triplet format, one writer per key.
pub struct TripletSink<W: Write> {
    outputs: Vec<(usize, W)>,
}

impl<W: Write> TripletSink<W> {
    /// Writes each header immediately.
    pub fn new(n: usize, outputs: Vec<(OrbitKey, W)>) -> Result<Self> {
        let mut out = Vec::with_capacity(outputs.len());
        for (key, mut w) in outputs {
            writeln!(w, "# n: {n}")?;
            writeln!(w, "# key: {}", key.header())?;
            out.push((key.index(), w));
        }
        Ok(TripletSink { outputs: out })
    }

    pub fn finish(self) -> Result<Vec<W>> {
        let mut done = Vec::with_capacity(self.outputs.len());
        for (_, mut w) in self.outputs {
            w.flush()?;
            done.push(w);
        }
        Ok(done)
    }
}

impl<W: Write> RowSink for TripletSink<W> {
    fn accept(&mut self, x: usize, row: &OrbitRow) -> Result<()> {
        for (k, w) in &mut self.outputs {
            for &(c, v) in &row.entries[*k] {
                writeln!(w, "{x}\t{c}\t{v}")?;
            }
        }
        Ok(())
    }
}

/// Fan-out to several sinks.
impl RowSink for Vec<&mut (dyn RowSink + Send)> {
    fn accept(&mut self, x: usize, row: &OrbitRow) -> Result<()> {
        for s in self.iter_mut() {
            s.accept(x, row)?;
        }
        Ok(())
    }
}

/// Runs `f` on a dedicated pool of `threads` workers (all cores when 0).
pub fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> Result<T> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| Error::InvalidArgument(format!("thread pool: {e}")))?;
    Ok(pool.install(f))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::solve::compute_all;

    #[test]
    fn agrees_with_materialized_pipeline() {
        let (h, _) = parse_edge_list("a b\nb c\nb e\nc d\nd e\n".as_bytes()).unwrap();
        let k5 = Graph::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
        );
        let paw = Graph::from_edges(5, &[(0, 1), (1, 2), (0, 2), (2, 3), (3, 4)]);
        for g in [h, k5, paw, Graph::empty(3)] {
            let (a, _) = compute_all(&g).unwrap();
            let (b, report) = compute_all_streaming(&g).unwrap();
            assert_eq!(a.first_difference(&b), None);
            assert_eq!(report.consistency_residual, 0);
        }
    }

    #[test]
    fn triplet_sink_matches_matrix_writer() {
        let (g, _) = parse_edge_list("a b\nb c\nb e\nc d\nd e\n".as_bytes()).unwrap();
        let key = keys::A1_2;
        let mut sink = TripletSink::new(g.n(), vec![(key, Vec::new())]).unwrap();
        stream_rows(&g, &mut sink).unwrap();
        let streamed = sink.finish().unwrap().pop().unwrap();
        let (set, _) = compute_all(&g).unwrap();
        let mut direct = Vec::new();
        set.get(key).write_triplets(Some(key), &mut direct).unwrap();
        assert_eq!(streamed, direct);
    }

    #[test]
    fn summary_row_sums() {
        let (g, _) = parse_edge_list("a b\nb c\nb e\nc d\nd e\n".as_bytes()).unwrap();
        let mut sum = SummarySink::new(g.n());
        stream_rows(&g, &mut sum).unwrap();
        let (set, _) = compute_all(&g).unwrap();
        for (key, m) in set.iter() {
            assert_eq!(sum.row_sums[key.index()], m.row_sums());
            assert_eq!(sum.nnz[key.index()], m.nnz() as u64);
        }
    }
}
