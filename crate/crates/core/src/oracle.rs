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

//! Brute-force census over every 2-, 3- and 4-node subset.
//!
//! Deliberately independent of the enumerator and solver: it classifies each
//! induced subgraph by its degree signature and tallies pairs directly.

use rayon::prelude::*;

use crate::count::CountMatrix;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::orbit::{OrbitAdjacencySet, OrbitKey, ALL_KEYS, NUM_KEYS, NUM_ORBITS};

/// Default node cap for [`brute_force_all`].
pub const DEFAULT_ORACLE_CAP: usize = 500;

/// Graphlet type and per-node orbits of one induced subgraph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GraphletClass {
    pub graphlet: usize,
    /// Orbit of each node, in input order.
    pub orbits: Vec<u8>,
    /// Hop distances inside the subgraph, in input order.
    pub distances: Vec<Vec<u8>>,
}

/// Classifies the subgraph on `k` (2..=4) nodes given as an adjacency
/// predicate over local indices. Returns `None` when it is disconnected.
pub fn classify_local(k: usize, adj: impl Fn(usize, usize) -> bool) -> Option<GraphletClass> {
    assert!((2..=4).contains(&k), "subsets of size {k} are not classified");
    let deg: Vec<usize> = (0..k)
        .map(|u| (0..k).filter(|&v| v != u && adj(u, v)).count())
        .collect();
    let edges = deg.iter().sum::<usize>() / 2;
    let mut sig = deg.clone();
    sig.sort_unstable();
    let (graphlet, by_degree): (usize, [u8; 4]) = match (k, edges, sig.as_slice()) {
        (2, 1, _) => (0, [0, 0, 0, 0]),
        (3, 2, _) => (1, [0, 1, 2, 0]),
        (3, 3, _) => (2, [0, 0, 3, 0]),
        (4, 3, [1, 1, 2, 2]) => (3, [0, 4, 5, 0]),
        (4, 3, [1, 1, 1, 3]) => (4, [0, 6, 0, 7]),
        (4, 4, [2, 2, 2, 2]) => (5, [0, 0, 8, 0]),
        (4, 4, [1, 2, 2, 3]) => (6, [0, 9, 10, 11]),
        (4, 5, _) => (7, [0, 0, 12, 13]),
        (4, 6, _) => (8, [0, 0, 0, 14]),
        _ => return None,
    };
    let orbits = deg.iter().map(|&d| by_degree[d]).collect();
    let mut distances = vec![vec![0u8; k]; k];
    for u in 0..k {
        for v in 0..k {
            if u != v {
                distances[u][v] = if adj(u, v) {
                    1
                } else if (0..k).any(|w| w != u && w != v && adj(u, w) && adj(w, v)) {
                    2
                } else {
                    3
                };
            }
        }
    }
    Some(GraphletClass {
        graphlet,
        orbits,
        distances,
    })
}

/// Classifies the subgraph of `g` induced by `nodes`.
pub fn classify(g: &Graph, nodes: &[usize]) -> Option<GraphletClass> {
    classify_local(nodes.len(), |a, b| g.has_edge(nodes[a], nodes[b]))
}

/// Everything the census tallies.
#[derive(Debug, Clone)]
pub struct OracleResult {
    pub set: OrbitAdjacencySet,
    /// Orbit counts `o_0..o_14` per node.
    pub gdv: Vec<[i64; NUM_ORBITS]>,
    /// Per-graphlet co-occurrence matrices `A_G0..A_G8`.
    pub graphlet_adjacency: Vec<CountMatrix>,
    /// Induced instances of each graphlet.
    pub graphlet_census: [i64; 9],
}

struct Tally {
    n: usize,
    keys: Vec<Vec<i64>>,
    graphlets: Vec<Vec<i64>>,
    gdv: Vec<[i64; NUM_ORBITS]>,
    census: [i64; 9],
}

impl Tally {
    fn new(n: usize) -> Self {
        Tally {
            n,
            keys: vec![vec![0; n * n]; NUM_KEYS],
            graphlets: vec![vec![0; n * n]; 9],
            gdv: vec![[0; NUM_ORBITS]; n],
            census: [0; 9],
        }
    }

    fn record(&mut self, nodes: &[usize], class: &GraphletClass) {
        self.census[class.graphlet] += 1;
        for (a, &u) in nodes.iter().enumerate() {
            self.gdv[u][class.orbits[a] as usize] += 1;
            for (b, &v) in nodes.iter().enumerate() {
                if a == b {
                    continue;
                }
                let key = OrbitKey::new(class.orbits[a], class.orbits[b], class.distances[a][b]);
                self.keys[key.index()][u * self.n + v] += 1;
                self.graphlets[class.graphlet][u * self.n + v] += 1;
            }
        }
    }

    fn merge(mut self, other: Tally) -> Tally {
        let add = |a: &mut Vec<i64>, b: &Vec<i64>| a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        for (a, b) in self.keys.iter_mut().zip(&other.keys) {
            add(a, b);
        }
        for (a, b) in self.graphlets.iter_mut().zip(&other.graphlets) {
            add(a, b);
        }
        for (a, b) in self.gdv.iter_mut().zip(&other.gdv) {
            a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
        }
        for (a, b) in self.census.iter_mut().zip(other.census) {
            *a += b;
        }
        self
    }
}

fn dense_to_count(n: usize, dense: &[i64]) -> CountMatrix {
    CountMatrix::from_sorted_rows(
        n,
        (0..n).map(|r| {
            dense[r * n..(r + 1) * n]
                .iter()
                .enumerate()
                .filter(|&(_, &v)| v != 0)
                .map(|(c, &v)| (c as u32, v))
                .collect()
        }),
    )
}

/// Exhaustive census of all 28 orbit adjacency matrices, GDVs and graphlet
/// co-occurrence. Cost is `Theta(n^4)`; refuses graphs above `cap` nodes.
pub fn brute_force_all(g: &Graph, cap: usize) -> Result<OracleResult> {
    let n = g.n();
    if n > cap {
        return Err(Error::ResourceLimit(format!(
            "oracle node cap is {cap}, graph has {n} nodes"
        )));
    }
    let words = n.div_ceil(64);
    let mut bits = vec![0u64; n * words];
    for (u, v) in g.edges() {
        bits[u * words + v / 64] |= 1 << (v % 64);
        bits[v * words + u / 64] |= 1 << (u % 64);
    }
    let adj = |u: usize, v: usize| bits[u * words + v / 64] >> (v % 64) & 1 == 1;

    let tally = (0..n)
        .into_par_iter()
        .fold(
            || Tally::new(n),
            |mut t, a| {
                for b in a + 1..n {
                    let ab = adj(a, b);
                    if ab {
                        let nodes = [a, b];
                        let class = classify_local(2, |x, y| adj(nodes[x], nodes[y])).unwrap();
                        t.record(&nodes, &class);
                    }
                    for c in b + 1..n {
                        let ac = adj(a, c);
                        let bc = adj(b, c);
                        if (ab as u8 + ac as u8 + bc as u8) >= 2 {
                            let nodes = [a, b, c];
                            if let Some(class) = classify_local(3, |x, y| adj(nodes[x], nodes[y])) {
                                t.record(&nodes, &class);
                            }
                        }
                        for d in c + 1..n {
                            let nodes = [a, b, c, d];
                            let e3 = ab as u8 + ac as u8 + bc as u8;
                            let ed = adj(a, d) as u8 + adj(b, d) as u8 + adj(c, d) as u8;
                            if e3 + ed < 3 || ed == 0 {
                                continue;
                            }
                            if let Some(class) = classify_local(4, |x, y| adj(nodes[x], nodes[y])) {
                                t.record(&nodes, &class);
                            }
                        }
                    }
                }
                t
            },
        )
        .reduce(|| Tally::new(n), Tally::merge);

    let map = ALL_KEYS
        .iter()
        .map(|&key| (key, dense_to_count(n, &tally.keys[key.index()])))
        .collect();
    Ok(OracleResult {
        set: OrbitAdjacencySet::from_map(n, map)?,
        gdv: tally.gdv,
        graphlet_adjacency: tally.graphlets.iter().map(|d| dense_to_count(n, d)).collect(),
        graphlet_census: tally.census,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_edge_list;
    use crate::orbit::keys;

    fn h() -> Graph {
        parse_edge_list("a b\nb c\nb e\nc d\nd e\n".as_bytes()).unwrap().0
    }

    #[test]
    fn classify_examples() {
        let g = h();
        let id = |l: &str| g.id_of(l).unwrap();
        let c = classify(&g, &[id("a"), id("b"), id("c")]).unwrap();
        assert_eq!(c.graphlet, 1);
        assert_eq!(c.orbits, vec![1, 2, 1]);
        let c = classify(&g, &[id("b"), id("c"), id("d"), id("e")]).unwrap();
        assert_eq!(c.graphlet, 5);
        assert_eq!(c.orbits, vec![8; 4]);
        assert!(classify(&g, &[id("a"), id("c"), id("e")]).is_none());
        let k4 = classify_local(4, |_, _| true).unwrap();
        assert_eq!((k4.graphlet, k4.orbits), (8, vec![14; 4]));
    }

    #[test]
    fn paw_orbits_and_distances() {
        // Triangle 0-1-2 with pendant 3 on node 2.
        let e = [(0, 1), (1, 2), (0, 2), (2, 3)];
        let adj = |a: usize, b: usize| e.contains(&(a, b)) || e.contains(&(b, a));
        let c = classify_local(4, adj).unwrap();
        assert_eq!(c.graphlet, 6);
        assert_eq!(c.orbits, vec![10, 10, 11, 9]);
        assert_eq!(c.distances[3][0], 2);
    }

    #[test]
    fn example_network_matches_printed_matrices() {
        let g = h();
        let r = brute_force_all(&g, DEFAULT_ORACLE_CAP).unwrap();
        let id = |l: &str| g.id_of(l).unwrap();
        let a12 = r.set.get(keys::A1_2);
        let row = |m: &CountMatrix, l: &str| -> Vec<i64> {
            ["a", "b", "c", "d", "e"].iter().map(|c| m.get(id(l), id(c))).collect()
        };
        assert_eq!(row(a12, "a"), [0, 2, 0, 0, 0]);
        assert_eq!(row(a12, "c"), [0, 2, 0, 1, 0]);
        let a11 = r.set.get(keys::A1_1);
        assert_eq!(a11.get(id("b"), id("d")), 2);
        assert_eq!(a11.get(id("c"), id("e")), 2);
        assert_eq!(a11.get(id("a"), id("c")), 1);
        assert_eq!(r.set.get(keys::A4_4_3).get(id("a"), id("d")), 2);
        assert_eq!(r.set.get(keys::A8_8_2).get(id("b"), id("d")), 1);
        assert_eq!(r.set.get(keys::A6_6_2).get(id("c"), id("e")), 1);
        assert_eq!(r.gdv[id("a")][..9], [1, 2, 0, 0, 2, 0, 1, 0, 0]);
        r.set.check_invariants().unwrap();
    }

    #[test]
    fn single_edge_only_touches_a00() {
        let g = Graph::from_edges(2, &[(0, 1)]);
        let r = brute_force_all(&g, 10).unwrap();
        for (key, m) in r.set.iter() {
            assert_eq!(m.is_zero(), key != keys::A00, "{key}");
        }
    }

    #[test]
    fn global_identities() {
        let k5 = Graph::from_edges(
            5,
            &[(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)],
        );
        let r = brute_force_all(&k5, 10).unwrap();
        let total = |o: usize| r.gdv.iter().map(|x| x[o]).sum::<i64>();
        assert_eq!(total(0), 2 * 10);
        assert_eq!(total(3), 3 * 10);
        assert_eq!(total(14), 4 * 5);
        assert_eq!(r.set.get(keys::A14_14).get(0, 1), 3);
    }

    #[test]
    fn cap_is_enforced() {
        let g = Graph::from_edges(6, &[(0, 1)]);
        assert!(matches!(brute_force_all(&g, 5), Err(Error::ResourceLimit(_))));
    }
}
