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

//! Graphlet degree vectors, graphlet adjacency and walk decompositions
//! derived from a complete orbit adjacency set.

use std::io::{self, Write};

use crate::count::{matmul, CountMatrix, WalkMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orbit::{walk_terms, OrbitAdjacencySet, OrbitKey, ALL_KEYS, NUM_ORBITS};

/// Orbit counts `o_0..o_14` of one node.
pub type Gdv = [i64; NUM_ORBITS];

/// GDVs from per-key row sums (indexed like [`ALL_KEYS`]). Orbit `i` is
/// read from the first key whose row orbit is `i`; every other key with
/// row orbit `i` must agree.
pub fn gdv_from_row_sums(row_sums: &[Vec<i64>]) -> Result<Vec<Gdv>> {
    let n = row_sums.first().map_or(0, Vec::len);
    let mut out = vec![[0i64; NUM_ORBITS]; n];
    for orbit in 0..NUM_ORBITS as u8 {
        let routes: Vec<OrbitKey> = ALL_KEYS.iter().copied().filter(|k| k.i == orbit).collect();
        let (first, rest) = routes.split_first().expect("every orbit heads some key");
        let c = first.multiplicity();
        for (x, gdv) in out.iter_mut().enumerate() {
            let s = row_sums[first.index()][x];
            if s % c != 0 {
                return Err(Error::inconsistent(
                    format!("orbit {orbit} via {first}"),
                    x,
                    x,
                    format!("row sum {s} is not a multiple of {c}"),
                ));
            }
            gdv[orbit as usize] = s / c;
            for alt in rest {
                let got = row_sums[alt.index()][x];
                if got != alt.multiplicity() * (s / c) {
                    return Err(Error::inconsistent(
                        format!("orbit {orbit} via {alt}"),
                        x,
                        x,
                        format!("row sum {got} disagrees with {first}"),
                    ));
                }
            }
        }
    }
    Ok(out)
}

/// Per-node GDVs with every alternative route cross-checked.
pub fn gdv(set: &OrbitAdjacencySet) -> Result<Vec<Gdv>> {
    let sums: Vec<Vec<i64>> = ALL_KEYS.iter().map(|&k| set.get(k).row_sums()).collect();
    gdv_from_row_sums(&sums)
}

/// `label<TAB>o0<TAB>...<TAB>o14` per node.
pub fn write_gdv<W: Write>(g: &Graph, gdv: &[Gdv], mut w: W) -> io::Result<()> {
    for (x, row) in gdv.iter().enumerate() {
        write!(w, "{}", g.label(x))?;
        for v in row {
            write!(w, "\t{v}")?;
        }
        writeln!(w)?;
    }
    Ok(())
}

/// Co-occurrence matrix of graphlet `k`: the sum of all its ordered keys.
pub fn graphlet_adjacency(set: &OrbitAdjacencySet, k: usize) -> Result<CountMatrix> {
    let mut acc = CountMatrix::zeros(set.n());
    for (_, m) in set.iter().filter(|(key, _)| key.graphlet() == k) {
        acc = acc.add(m, 1)?;
    }
    Ok(acc)
}

/// How `offdiag(A^l)` splits over orbit adjacency matrices.
#[derive(Debug, Clone)]
pub struct RwDecompositionReport {
    pub length: usize,
    /// `offdiag(A^l)` minus the weighted sum of its terms; all zero when the
    /// decomposition holds.
    pub residual: CountMatrix,
    /// Per term: key, coefficient and total mass `coeff * vol(A_key)`.
    pub masses: Vec<(OrbitKey, i64, i64)>,
    /// For `l = 2`: whether `diag(A^2)` equals the degree vector.
    pub diagonal_is_degree: Option<bool>,
    /// Every key with whether walks of this length see it.
    pub seen: Vec<(OrbitKey, bool)>,
}

impl RwDecompositionReport {
    pub fn holds(&self) -> bool {
        self.residual.is_zero() && self.diagonal_is_degree != Some(false)
    }
}

/// Decomposes `A^l`, `l` in 2..=3, over the orbit adjacency matrices.
pub fn rw_decompose(g: &Graph, set: &OrbitAdjacencySet, l: usize) -> Result<RwDecompositionReport> {
    if !(2..=3).contains(&l) {
        return Err(Error::InvalidArgument(format!("walk length {l} is not 2 or 3")));
    }
    let a = WalkMatrix::adjacency(g);
    let mut power = matmul(&a, &a)?;
    if l == 3 {
        power = matmul(&power, &a)?;
    }
    let terms = walk_terms(l);
    let mut residual = power.offdiag.clone();
    let mut masses = Vec::with_capacity(terms.len());
    for &(key, coeff) in &terms {
        let m = set.get(key);
        residual = residual.add(m, -coeff)?;
        masses.push((key, coeff, coeff * m.vol()));
    }
    let diagonal_is_degree = (l == 2).then(|| {
        power
            .diag
            .iter()
            .enumerate()
            .all(|(u, &d)| d == g.degree(u) as i64)
    });
    let seen = ALL_KEYS
        .iter()
        .map(|&k| (k, terms.iter().any(|&(t, _)| t == k)))
        .collect();
    Ok(RwDecompositionReport {
        length: l,
        residual,
        masses,
        diagonal_is_degree,
        seen,
    })
}
