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

//! Graphlet templates, automorphism orbits and the 28 orbit adjacency keys.
//!
//! Every quantity that depends on graphlet geometry (key list, partner
//! multiplicities, walk coefficients) is derived here from the nine graphlet
//! templates rather than written down by hand.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;

use crate::count::CountMatrix;
use crate::error::{Error, Result};

/// A small connected graph with an orbit label on each node.
#[derive(Debug, Clone, Copy)]
pub struct GraphletTemplate {
    pub id: usize,
    pub orbits: &'static [u8],
    pub edges: &'static [(usize, usize)],
}

/// G0..G8 with the usual orbit numbering (path ends before centres, leaves
/// before star centres, the paw's pendant before its triangle nodes).
pub const GRAPHLETS: [GraphletTemplate; 9] = [
    GraphletTemplate { id: 0, orbits: &[0, 0], edges: &[(0, 1)] },
    GraphletTemplate { id: 1, orbits: &[1, 2, 1], edges: &[(0, 1), (1, 2)] },
    GraphletTemplate { id: 2, orbits: &[3, 3, 3], edges: &[(0, 1), (1, 2), (0, 2)] },
    GraphletTemplate { id: 3, orbits: &[4, 5, 5, 4], edges: &[(0, 1), (1, 2), (2, 3)] },
    GraphletTemplate { id: 4, orbits: &[7, 6, 6, 6], edges: &[(0, 1), (0, 2), (0, 3)] },
    GraphletTemplate { id: 5, orbits: &[8, 8, 8, 8], edges: &[(0, 1), (1, 2), (2, 3), (3, 0)] },
    GraphletTemplate {
        id: 6,
        orbits: &[10, 10, 11, 9],
        edges: &[(0, 1), (1, 2), (0, 2), (2, 3)],
    },
    GraphletTemplate {
        id: 7,
        orbits: &[12, 13, 13, 12],
        edges: &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)],
    },
    GraphletTemplate {
        id: 8,
        orbits: &[14, 14, 14, 14],
        edges: &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)],
    },
];

/// Number of automorphism orbits on graphlets with up to four nodes.
pub const NUM_ORBITS: usize = 15;

/// Graphlet containing orbit `o`.
pub fn graphlet_of_orbit(o: u8) -> usize {
    match o {
        0 => 0,
        1 | 2 => 1,
        3 => 2,
        4 | 5 => 3,
        6 | 7 => 4,
        8 => 5,
        9..=11 => 6,
        12 | 13 => 7,
        14 => 8,
        _ => panic!("orbit {o} out of range"),
    }
}

impl GraphletTemplate {
    pub fn size(&self) -> usize {
        self.orbits.len()
    }

    fn adjacent(&self, u: usize, v: usize) -> bool {
        self.edges.iter().any(|&(a, b)| (a, b) == (u, v) || (a, b) == (v, u))
    }

    /// All-pairs hop distances inside the template.
    pub fn distances(&self) -> Vec<Vec<u8>> {
        let k = self.size();
        let mut d = vec![vec![u8::MAX; k]; k];
        for (s, row) in d.iter_mut().enumerate() {
            row[s] = 0;
            let mut frontier = vec![s];
            let mut h = 0;
            while !frontier.is_empty() {
                h += 1;
                let mut next = Vec::new();
                for &u in &frontier {
                    for v in 0..k {
                        if row[v] == u8::MAX && self.adjacent(u, v) {
                            row[v] = h;
                            next.push(v);
                        }
                    }
                }
                frontier = next;
            }
        }
        d
    }

    /// Walks of length `len` from `u` to `v` that visit every template node.
    pub fn spanning_walks(&self, u: usize, v: usize, len: usize) -> i64 {
        fn go(t: &GraphletTemplate, at: usize, v: usize, left: usize, seen: u8) -> i64 {
            if left == 0 {
                let full = (1u8 << t.size()) - 1;
                return (at == v && seen == full) as i64;
            }
            (0..t.size())
                .filter(|&w| t.adjacent(at, w))
                .map(|w| go(t, w, v, left - 1, seen | (1 << w)))
                .sum()
        }
        go(self, u, v, len, 1 << u)
    }
}

/// Key `(orbit_i, orbit_j, hops)` of one orbit adjacency matrix: entry `(u, v)`
/// counts induced graphlets with `u` on orbit `i` and `v` on orbit `j` at
/// distance `hops` inside the graphlet.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct OrbitKey {
    pub i: u8,
    pub j: u8,
    pub hops: u8,
}

impl OrbitKey {
    pub const fn new(i: u8, j: u8, hops: u8) -> Self {
        OrbitKey { i, j, hops }
    }

    pub fn transpose(self) -> Self {
        OrbitKey::new(self.j, self.i, self.hops)
    }

    pub fn is_symmetric(self) -> bool {
        self.i == self.j
    }

    /// Position in [`ALL_KEYS`]. Panics for a triple that is not a key.
    pub const fn index(self) -> usize {
        let mut i = 0;
        while i < NUM_KEYS {
            let k = ALL_KEYS[i];
            if k.i == self.i && k.j == self.j && k.hops == self.hops {
                return i;
            }
            i += 1;
        }
        panic!("not an orbit adjacency key")
    }

    pub fn graphlet(self) -> usize {
        graphlet_of_orbit(self.i)
    }

    /// Partner multiplicity: orbit-`j` nodes at distance `hops` from one
    /// orbit-`i` node of the graphlet.
    pub fn multiplicity(self) -> i64 {
        derived().multiplicity[self.index()]
    }

    /// Coefficient of this key in the decomposition of `offdiag(A^len)`,
    /// `len` in 2..=3.
    pub fn walk_coefficient(self, len: usize) -> i64 {
        match len {
            2 => derived().walk2[self.index()],
            3 => derived().walk3[self.index()],
            _ => panic!("walk length {len} not supported"),
        }
    }

    /// True iff random walks of length three see this key.
    pub fn seen_by_rw3(self) -> bool {
        self.walk_coefficient(3) != 0
    }

    /// Text used in the matrix file header, e.g. `o1-o2 hops=1`.
    pub fn header(self) -> String {
        format!("o{}-o{} hops={}", self.i, self.j, self.hops)
    }

    pub fn parse_header(s: &str) -> Result<Self> {
        let bad = || Error::InvalidKey(s.to_string());
        let (pair, hops) = s.split_once(" hops=").ok_or_else(bad)?;
        let (i, j) = pair.split_once('-').ok_or_else(bad)?;
        let key = OrbitKey::new(
            parse_orbit(i).ok_or_else(bad)?,
            parse_orbit(j).ok_or_else(bad)?,
            hops.parse().map_err(|_| bad())?,
        );
        key.validated(s)
    }

    fn validated(self, text: &str) -> Result<Self> {
        if ALL_KEYS.contains(&self) {
            Ok(self)
        } else {
            Err(Error::InvalidKey(text.to_string()))
        }
    }
}

fn parse_orbit(s: &str) -> Option<u8> {
    let digits = s.strip_prefix('o').unwrap_or(s);
    if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) || digits.len() > 2 {
        return None;
    }
    digits.parse().ok()
}

impl fmt::Display for OrbitKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "o{}-o{}-h{}", self.i, self.j, self.hops)
    }
}

/// Accepts `o4-o4-h3` (canonical), `o1-o2` / `o1-2` (one hop) and
/// `o1..o1` / `o1..1` (two hops).
impl FromStr for OrbitKey {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidKey(s.to_string());
        let t = s.trim();
        let (i, j, hops) = if let Some((i, j)) = t.split_once("..") {
            (i, j, 2)
        } else {
            let parts: Vec<&str> = t.split('-').collect();
            match parts.as_slice() {
                [i, j] => (*i, *j, 1),
                [i, j, h] => {
                    let h = h.strip_prefix('h').ok_or_else(bad)?;
                    (*i, *j, h.parse::<u8>().map_err(|_| bad())?)
                }
                _ => return Err(bad()),
            }
        };
        if !i.starts_with('o') {
            return Err(bad());
        }
        let key = OrbitKey::new(
            parse_orbit(i).ok_or_else(bad)?,
            parse_orbit(j).ok_or_else(bad)?,
            hops,
        );
        key.validated(s)
    }
}

const fn k(i: u8, j: u8, h: u8) -> OrbitKey {
    OrbitKey::new(i, j, h)
}

/// The 20 canonical keys followed by the 8 transposes of asymmetric ones.
pub const ALL_KEYS: [OrbitKey; 28] = [
    k(0, 0, 1),
    k(1, 2, 1),
    k(1, 1, 2),
    k(3, 3, 1),
    k(4, 5, 1),
    k(5, 5, 1),
    k(4, 5, 2),
    k(4, 4, 3),
    k(6, 7, 1),
    k(6, 6, 2),
    k(8, 8, 1),
    k(8, 8, 2),
    k(9, 11, 1),
    k(10, 10, 1),
    k(10, 11, 1),
    k(9, 10, 2),
    k(12, 13, 1),
    k(13, 13, 1),
    k(12, 12, 2),
    k(14, 14, 1),
    k(2, 1, 1),
    k(5, 4, 1),
    k(5, 4, 2),
    k(7, 6, 1),
    k(11, 9, 1),
    k(11, 10, 1),
    k(10, 9, 2),
    k(13, 12, 1),
];

pub const NUM_KEYS: usize = ALL_KEYS.len();

/// Named handles for the keys used throughout the solver.
pub mod keys {
    use super::{k, OrbitKey};
    pub const A00: OrbitKey = k(0, 0, 1);
    pub const A1_2: OrbitKey = k(1, 2, 1);
    pub const A2_1: OrbitKey = k(2, 1, 1);
    pub const A1_1: OrbitKey = k(1, 1, 2);
    pub const A33: OrbitKey = k(3, 3, 1);
    pub const A4_5: OrbitKey = k(4, 5, 1);
    pub const A5_4: OrbitKey = k(5, 4, 1);
    pub const A5_5: OrbitKey = k(5, 5, 1);
    pub const A4_5_2: OrbitKey = k(4, 5, 2);
    pub const A5_4_2: OrbitKey = k(5, 4, 2);
    pub const A4_4_3: OrbitKey = k(4, 4, 3);
    pub const A6_7: OrbitKey = k(6, 7, 1);
    pub const A7_6: OrbitKey = k(7, 6, 1);
    pub const A6_6_2: OrbitKey = k(6, 6, 2);
    pub const A8_8: OrbitKey = k(8, 8, 1);
    pub const A8_8_2: OrbitKey = k(8, 8, 2);
    pub const A9_11: OrbitKey = k(9, 11, 1);
    pub const A11_9: OrbitKey = k(11, 9, 1);
    pub const A10_10: OrbitKey = k(10, 10, 1);
    pub const A10_11: OrbitKey = k(10, 11, 1);
    pub const A11_10: OrbitKey = k(11, 10, 1);
    pub const A9_10_2: OrbitKey = k(9, 10, 2);
    pub const A10_9_2: OrbitKey = k(10, 9, 2);
    pub const A12_13: OrbitKey = k(12, 13, 1);
    pub const A13_12: OrbitKey = k(13, 12, 1);
    pub const A13_13: OrbitKey = k(13, 13, 1);
    pub const A12_12_2: OrbitKey = k(12, 12, 2);
    pub const A14_14: OrbitKey = k(14, 14, 1);
}

struct Derived {
    multiplicity: [i64; NUM_KEYS],
    walk2: [i64; NUM_KEYS],
    walk3: [i64; NUM_KEYS],
}

/// Tabulates multiplicities and walk coefficients from the templates,
/// asserting that every pair realising a key gives the same value.
fn derived() -> &'static Derived {
    static CELL: OnceLock<Derived> = OnceLock::new();
    CELL.get_or_init(|| {
        let mut mult: BTreeMap<OrbitKey, i64> = BTreeMap::new();
        let mut w2: BTreeMap<OrbitKey, i64> = BTreeMap::new();
        let mut w3: BTreeMap<OrbitKey, i64> = BTreeMap::new();
        let record = |map: &mut BTreeMap<OrbitKey, i64>, key: OrbitKey, v: i64| {
            let old = *map.entry(key).or_insert(v);
            assert_eq!(old, v, "{key} is not determined by its orbit pair and distance");
        };
        for t in &GRAPHLETS {
            let d = t.distances();
            for u in 0..t.size() {
                let mut per_key: BTreeMap<OrbitKey, i64> = BTreeMap::new();
                for v in (0..t.size()).filter(|&v| v != u) {
                    let key = OrbitKey::new(t.orbits[u], t.orbits[v], d[u][v]);
                    *per_key.entry(key).or_default() += 1;
                    record(&mut w2, key, t.spanning_walks(u, v, 2));
                    record(&mut w3, key, t.spanning_walks(u, v, 3));
                }
                for (key, c) in per_key {
                    record(&mut mult, key, c);
                }
            }
        }
        let found: Vec<OrbitKey> = mult.keys().copied().collect();
        let mut expected = ALL_KEYS.to_vec();
        expected.sort();
        assert_eq!(found, expected, "template geometry disagrees with the key list");
        let table = |m: &BTreeMap<OrbitKey, i64>| {
            let mut out = [0i64; NUM_KEYS];
            for (idx, key) in ALL_KEYS.iter().enumerate() {
                out[idx] = m[key];
            }
            out
        };
        Derived {
            multiplicity: table(&mult),
            walk2: table(&w2),
            walk3: table(&w3),
        }
    })
}

/// Keys with a non-zero coefficient in the decomposition of `offdiag(A^len)`,
/// paired with that coefficient.
pub fn walk_terms(len: usize) -> Vec<(OrbitKey, i64)> {
    ALL_KEYS
        .iter()
        .map(|&k| (k, k.walk_coefficient(len)))
        .filter(|&(_, c)| c != 0)
        .collect()
}

/// All 28 orbit adjacency matrices of one graph.
#[derive(Clone, PartialEq, Eq)]
pub struct OrbitAdjacencySet {
    n: usize,
    matrices: Vec<CountMatrix>,
}

impl fmt::Debug for OrbitAdjacencySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_map()
            .entries(ALL_KEYS.iter().map(|k| (k.to_string(), self.get(*k).nnz())))
            .finish()
    }
}

impl OrbitAdjacencySet {
    /// Assembles a set from a matrix per key; every key must be present.
    pub fn from_map(n: usize, mut map: BTreeMap<OrbitKey, CountMatrix>) -> Result<Self> {
        let mut matrices = Vec::with_capacity(NUM_KEYS);
        for key in ALL_KEYS {
            let m = map.remove(&key).ok_or(Error::MissingKey(key))?;
            if m.n() != n {
                return Err(Error::DimensionMismatch { left: n, right: m.n() });
            }
            matrices.push(m);
        }
        Ok(OrbitAdjacencySet { n, matrices })
    }

    pub fn zeros(n: usize) -> Self {
        OrbitAdjacencySet {
            n,
            matrices: vec![CountMatrix::zeros(n); NUM_KEYS],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, key: OrbitKey) -> &CountMatrix {
        &self.matrices[key.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (OrbitKey, &CountMatrix)> {
        ALL_KEYS.iter().copied().zip(self.matrices.iter())
    }

    /// Mutable access for fault-injection tests.
    pub fn get_mut(&mut self, key: OrbitKey) -> &mut CountMatrix {
        &mut self.matrices[key.index()]
    }

    /// Checks transpose pairing, symmetry and non-negativity.
    pub fn check_invariants(&self) -> Result<()> {
        for (key, m) in self.iter() {
            if let Some((r, c, v)) = m.first_negative() {
                return Err(Error::inconsistent(key.to_string(), r, c, format!("negative count {v}")));
            }
            let t = self.get(key.transpose()).transpose();
            if let Some((r, c, a, b)) = m.first_difference(&t) {
                return Err(Error::inconsistent(
                    key.to_string(),
                    r,
                    c,
                    format!("{a} differs from transposed partner {b}"),
                ));
            }
        }
        Ok(())
    }

    /// First key and pair where two sets differ.
    pub fn first_difference(&self, other: &Self) -> Option<(OrbitKey, usize, usize, i64, i64)> {
        self.iter().find_map(|(key, m)| {
            m.first_difference(other.get(key))
                .map(|(r, c, a, b)| (key, r, c, a, b))
        })
    }
}
