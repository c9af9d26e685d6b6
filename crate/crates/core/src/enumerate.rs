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

//! Degree-ordered enumeration of induced 3-node paths, triangles, diamonds
//! and 4-cliques, and accumulation of the redundancy-equation right-hand
//! sides.

use rayon::prelude::*;

use crate::count::CountMatrix;
use crate::dag::DegreeOrderedDag;
use crate::graph::{AdjacencyProbe, Graph};
use crate::sparse::RowAccumulator;

/// One induced 3-node subgraph.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThreeNode {
    /// Induced path `ends.0 - center - ends.1`.
    Path { center: usize, ends: (usize, usize) },
    Triangle(usize, usize, usize),
}

/// Visits every induced path and triangle whose `<`-smallest node is `a`
/// exactly once.
///
/// Paths come in three orientations: a chain `a -> b -> c`, a sink
/// `a -> b <- c` and a source `b <- a -> c`. Triangles are `a -> b`,
/// `a -> c`, `c -> b`.
pub fn visit_three_node(
    dag: &DegreeOrderedDag,
    probe: &AdjacencyProbe,
    a: usize,
    mut f: impl FnMut(ThreeNode),
) {
    let out_a = dag.out_neighbors(a);
    for (bi, &b) in out_a.iter().enumerate() {
        let b = b as usize;
        for &c in dag.out_neighbors(b) {
            let c = c as usize;
            if !probe.contains(a, c) {
                f(ThreeNode::Path { center: b, ends: (a, c) });
            }
        }
        for &c in dag.in_neighbors(b) {
            let c = c as usize;
            if c == a || !dag.precedes(a, c) {
                continue;
            }
            if probe.contains(a, c) {
                f(ThreeNode::Triangle(a, b, c));
            } else {
                f(ThreeNode::Path { center: b, ends: (a, c) });
            }
        }
        for &c in &out_a[bi + 1..] {
            let c = c as usize;
            if !probe.contains(b, c) {
                f(ThreeNode::Path { center: a, ends: (b, c) });
            }
        }
    }
}

/// `A_{1-2}`, `A_{1..1}` and `A_{3-3}` of one graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ThreeNodeCounts {
    pub a12: CountMatrix,
    pub a11_2: CountMatrix,
    pub a33: CountMatrix,
}

/// Per-directed-edge counters indexed by the graph's CSR slot.
fn slots_to_matrix(g: &Graph, slots: &[i64]) -> CountMatrix {
    CountMatrix::from_sorted_rows(
        g.n(),
        (0..g.n()).map(|u| {
            g.slot_range(u)
                .filter(|&s| slots[s] != 0)
                .map(|s| (g.slot_target(s) as u32, slots[s]))
                .collect()
        }),
    )
}

fn matrix_to_slots(g: &Graph, m: &CountMatrix) -> Vec<i64> {
    let mut out = vec![0i64; 2 * g.m()];
    for (r, c, v) in m.iter() {
        let s = g.edge_slot(r, c).expect("edge-supported matrix has an entry off the edges");
        out[s] = v;
    }
    out
}

fn add_into(a: &mut [i64], b: &[i64]) {
    a.iter_mut().zip(b).for_each(|(x, y)| *x += y);
}

struct ThreeNodeTally {
    a12: Vec<i64>,
    a33: Vec<i64>,
    a11: RowAccumulator<i64>,
}

pub fn count_three_node(dag: &DegreeOrderedDag) -> ThreeNodeCounts {
    let g = dag.graph();
    let probe = AdjacencyProbe::new(g);
    let slot = |u: usize, v: usize| g.edge_slot(u, v).unwrap();
    let new = || ThreeNodeTally {
        a12: vec![0; 2 * g.m()],
        a33: vec![0; 2 * g.m()],
        a11: RowAccumulator::new(g.n(), g.n()),
    };
    let t = (0..g.n())
        .into_par_iter()
        .fold(new, |mut t, a| {
            visit_three_node(dag, &probe, a, |s| match s {
                ThreeNode::Path { center, ends: (p, q) } => {
                    t.a12[slot(p, center)] += 1;
                    t.a12[slot(q, center)] += 1;
                    t.a11.add(p, q, 1);
                    t.a11.add(q, p, 1);
                }
                ThreeNode::Triangle(x, y, z) => {
                    for (u, v) in [(x, y), (y, x), (x, z), (z, x), (y, z), (z, y)] {
                        t.a33[slot(u, v)] += 1;
                    }
                }
            });
            t
        })
        .reduce(new, |mut a, b| {
            add_into(&mut a.a12, &b.a12);
            add_into(&mut a.a33, &b.a33);
            a.a11 = a.a11.merge(b.a11);
            a
        });
    ThreeNodeCounts {
        a12: slots_to_matrix(g, &t.a12),
        a11_2: CountMatrix::from_accumulator(t.a11),
        a33: slots_to_matrix(g, &t.a33),
    }
}

/// Visits every induced diamond whose `<`-smallest node is `a`, passing its
/// two degree-2 nodes.
pub fn visit_chordal_cycle(
    dag: &DegreeOrderedDag,
    probe: &AdjacencyProbe,
    a: usize,
    mut f: impl FnMut(usize, usize),
) {
    let out_a = dag.out_neighbors(a);
    for (bi, &b) in out_a.iter().enumerate() {
        let b = b as usize;
        for (ci, &c) in out_a.iter().enumerate().skip(bi + 1) {
            let c = c as usize;
            let bc = probe.contains(b, c);
            // Out-lists are sorted by id; the chord cases need `b < c` in rank.
            let (b, c) = if dag.precedes(b, c) { (b, c) } else { (c, b) };
            if bc {
                // `a` is a degree-2 node and `b - c` the chord.
                for &d in dag.out_neighbors(b) {
                    let d = d as usize;
                    if d != c && !probe.contains(a, d) && probe.contains(c, d) {
                        f(a, d);
                    }
                }
                for &d in dag.in_neighbors(b) {
                    let d = d as usize;
                    if dag.precedes(a, d) && d != a && !probe.contains(a, d) && dag.has_arc(d, c) {
                        f(a, d);
                    }
                }
            }
            // `a` is on the chord and `b`, `c`, `d` are its out-neighbours.
            for &d in &out_a[ci + 1..] {
                let d = d as usize;
                let bd = probe.contains(b, d);
                let cd = probe.contains(c, d);
                match (bc, bd, cd) {
                    (true, true, false) => f(c, d),
                    (true, false, true) => f(b, d),
                    (false, true, true) => f(b, c),
                    _ => {}
                }
            }
        }
    }
}

fn symmetric_from_pairs(
    dag: &DegreeOrderedDag,
    visit: impl Fn(&AdjacencyProbe, usize, &mut dyn FnMut(usize, usize)) + Sync,
) -> CountMatrix {
    let g = dag.graph();
    let probe = AdjacencyProbe::new(g);
    let n = g.n();
    let acc = (0..n)
        .into_par_iter()
        .fold(
            || RowAccumulator::new(n, n),
            |mut acc, a| {
                visit(&probe, a, &mut |u, v| {
                    acc.add(u, v, 1);
                    acc.add(v, u, 1);
                });
                acc
            },
        )
        .reduce(|| RowAccumulator::new(n, n), RowAccumulator::merge);
    CountMatrix::from_accumulator(acc)
}

/// `A_{12..12}`: induced diamonds per pair of degree-2 (non-adjacent) nodes.
pub fn count_chordal_cycle(dag: &DegreeOrderedDag) -> CountMatrix {
    symmetric_from_pairs(dag, |probe, a, f| visit_chordal_cycle(dag, probe, a, f))
}

/// Visits every 4-clique `a -> b -> c -> d` whose smallest node is `a`.
pub fn visit_clique(
    dag: &DegreeOrderedDag,
    probe: &AdjacencyProbe,
    a: usize,
    mut f: impl FnMut([usize; 4]),
) {
    for &b in dag.out_neighbors(a) {
        let b = b as usize;
        for &c in dag.out_neighbors(b) {
            let c = c as usize;
            if !probe.contains(a, c) {
                continue;
            }
            for &d in dag.out_neighbors(c) {
                let d = d as usize;
                if probe.contains(a, d) && probe.contains(b, d) {
                    f([a, b, c, d]);
                }
            }
        }
    }
}

/// `A_{14-14}`: 4-cliques per pair.
pub fn count_clique(dag: &DegreeOrderedDag) -> CountMatrix {
    symmetric_from_pairs(dag, |probe, a, f| {
        visit_clique(dag, probe, a, |q| {
            for i in 0..4 {
                for j in i + 1..4 {
                    f(q[i], q[j]);
                }
            }
        })
    })
}

/// Right-hand sides of the single-hop system, one per equation `a`..`j`.
/// Entry `(x, y)` is defined for adjacent `x`, `y`.
pub const SINGLE_HOP_EQUATIONS: usize = 10;
/// Right-hand sides of the double-hop system, one per equation `a`..`d`.
/// Entry `(x, y)` is defined for `x`, `y` at distance two.
pub const DOUBLE_HOP_EQUATIONS: usize = 4;

/// Right-hand sides of both redundancy systems. With `C` the common
/// neighbours of `(x, y)`, `P_x = N(x) \ N[y]` and `P_y = N(y) \ N[x]`:
///
/// | eq | sum |
/// |----|-----|
/// | a | `sum_{z in C} A33(y,z) - 1` |
/// | b | `sum_{z in C} A33(x,y) - 1` |
/// | c | `sum_{z in C} A12(y,z)` |
/// | d | `sum_{z in C} A12(z,x)` |
/// | e | `sum_{z in P_x} A12(z,x) - 1` |
/// | f | `sum_{z in P_x} A12(x,y)` |
/// | g | `sum_{z in P_x} A12(y,x) - 1` |
/// | h | `sum_{z in P_x} A33(x,z)` |
/// | i | `sum_{z in P_x} A12(x,z)` |
/// | j | `sum_{z in P_y} A11(x,z) - 1` |
///
/// and for the double-hop system (`x`, `y` not adjacent):
///
/// | eq | sum |
/// |----|-----|
/// | a | `sum_{z in C} A11(x,y) - 1` |
/// | b | `sum_{z in C} A12(x,z) - 1` |
/// | c | `sum_{z in C} A33(y,z)` |
/// | d | `sum_{z in C} A12(z,y)` |
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RhsAccumulators {
    pub single: Vec<CountMatrix>,
    pub double: Vec<CountMatrix>,
}

impl RhsAccumulators {
    /// Single-hop right-hand side by equation letter.
    pub fn single(&self, eq: char) -> &CountMatrix {
        &self.single[(eq as u8 - b'a') as usize]
    }

    /// Double-hop right-hand side by equation letter.
    pub fn double(&self, eq: char) -> &CountMatrix {
        &self.double[(eq as u8 - b'a') as usize]
    }
}

struct RhsTally {
    single: Vec<Vec<i64>>,
    double: Vec<RowAccumulator<i64>>,
}

/// Fills every right-hand side in one more pass over paths and triangles,
/// reading the 3-node counts instead of extending to a fourth node.
pub fn accumulate_rhs(dag: &DegreeOrderedDag, three: &ThreeNodeCounts) -> RhsAccumulators {
    let g = dag.graph();
    let n = g.n();
    let probe = AdjacencyProbe::new(g);
    let a12 = matrix_to_slots(g, &three.a12);
    let a33 = matrix_to_slots(g, &three.a33);
    let a11 = &three.a11_2;
    let slot = |u: usize, v: usize| g.edge_slot(u, v).unwrap();
    let new = || RhsTally {
        single: vec![vec![0; 2 * g.m()]; SINGLE_HOP_EQUATIONS],
        double: (0..DOUBLE_HOP_EQUATIONS)
            .map(|_| RowAccumulator::new(n, n))
            .collect(),
    };
    let t = (0..n)
        .into_par_iter()
        .fold(new, |mut t, a| {
            visit_three_node(dag, &probe, a, |shape| match shape {
                ThreeNode::Triangle(p, q, r) => {
                    for (x, y, z) in [(p, q, r), (q, p, r), (p, r, q), (r, p, q), (q, r, p), (r, q, p)] {
                        let xy = slot(x, y);
                        let s = &mut t.single;
                        s[0][xy] += a33[slot(y, z)] - 1;
                        s[1][xy] += a33[xy] - 1;
                        s[2][xy] += a12[slot(y, z)];
                        s[3][xy] += a12[slot(z, x)];
                    }
                }
                ThreeNode::Path { center: x, ends: (p, q) } => {
                    for (z, y) in [(p, q), (q, p)] {
                        // z - x - y with z in P_x relative to the edge (x, y).
                        let xy = slot(x, y);
                        let yx = slot(y, x);
                        let s = &mut t.single;
                        s[4][xy] += a12[slot(z, x)] - 1;
                        s[5][xy] += a12[xy];
                        s[6][xy] += a12[yx] - 1;
                        s[7][xy] += a33[slot(x, z)];
                        s[8][xy] += a12[slot(x, z)];
                        // For the edge (y, x), z is x's private neighbour.
                        s[9][yx] += a11.get(y, z) - 1;

                        let d = &mut t.double;
                        let zy = slot(z, x);
                        d[0].add(z, y, a11.get(z, y) - 1);
                        d[1].add(z, y, a12[zy] - 1);
                        d[2].add(z, y, a33[slot(y, x)]);
                        d[3].add(z, y, a12[slot(x, y)]);
                    }
                }
            });
            t
        })
        .reduce(new, |mut a, b| {
            for (x, y) in a.single.iter_mut().zip(&b.single) {
                add_into(x, y);
            }
            a.double = a
                .double
                .into_iter()
                .zip(b.double)
                .map(|(x, y)| x.merge(y))
                .collect();
            a
        });
    RhsAccumulators {
        single: t.single.iter().map(|s| slots_to_matrix(g, s)).collect(),
        double: t.double.into_iter().map(CountMatrix::from_accumulator).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dag::degree_order;
    use crate::graph::parse_edge_list;
    use crate::oracle::brute_force_all;
    use crate::orbit::keys;

    fn complete(n: u32) -> Graph {
        let mut e = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                e.push((i, j));
            }
        }
        Graph::from_edges(n as usize, &e)
    }

    #[test]
    fn example_network_three_node() {
        let (g, _) = parse_edge_list("a b\nb c\nb e\nc d\nd e\n".as_bytes()).unwrap();
        let t = count_three_node(&degree_order(&g));
        let id = |l: &str| g.id_of(l).unwrap();
        let row = |m: &CountMatrix, l: &str| -> Vec<i64> {
            ["a", "b", "c", "d", "e"].iter().map(|c| m.get(id(l), id(c))).collect()
        };
        assert_eq!(row(&t.a12, "a"), [0, 2, 0, 0, 0]);
        assert_eq!(row(&t.a12, "c"), [0, 2, 0, 1, 0]);
        assert_eq!(t.a11_2.get(id("b"), id("d")), 2);
        assert_eq!(t.a11_2.get(id("c"), id("e")), 2);
        assert_eq!(t.a11_2.get(id("a"), id("c")), 1);
        assert!(t.a33.is_zero());
        let dag = degree_order(&g);
        assert!(count_chordal_cycle(&dag).is_zero());
        assert!(count_clique(&dag).is_zero());
    }

    #[test]
    fn triangle_has_no_paths() {
        let t = count_three_node(&degree_order(&complete(3)));
        assert!(t.a12.is_zero() && t.a11_2.is_zero());
        assert!(t.a33.iter().all(|(_, _, v)| v == 1));
        assert_eq!(t.a33.nnz(), 6);
    }

    #[test]
    fn diamond_and_cliques() {
        // K4 minus the edge 0-3.
        let d = Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)]);
        let m = count_chordal_cycle(&degree_order(&d));
        assert_eq!(m.nnz(), 2);
        assert_eq!((m.get(0, 3), m.get(3, 0)), (1, 1));

        let k4 = complete(4);
        let k4 = degree_order(&k4);
        assert!(count_chordal_cycle(&k4).is_zero());
        let c = count_clique(&k4);
        assert_eq!(c.nnz(), 12);
        assert!(c.iter().all(|(_, _, v)| v == 1));
        let k5 = complete(5);
        let c5 = count_clique(&degree_order(&k5));
        assert!(c5.iter().all(|(_, _, v)| v == 3));
        assert_eq!(c5.nnz(), 20);
    }

    #[test]
    fn k4_rhs_a_is_two() {
        let g = complete(4);
        let dag = degree_order(&g);
        let rhs = accumulate_rhs(&dag, &count_three_node(&dag));
        let a = rhs.single('a');
        assert_eq!(a.nnz(), 12);
        assert!(a.iter().all(|(_, _, v)| v == 2));
    }

    #[test]
    fn rhs_vanish_without_three_node_subgraphs() {
        for g in [Graph::empty(4), Graph::from_edges(2, &[(0, 1)])] {
            let dag = degree_order(&g);
            let rhs = accumulate_rhs(&dag, &count_three_node(&dag));
            assert!(rhs.single.iter().chain(&rhs.double).all(CountMatrix::is_zero));
        }
    }

    #[test]
    fn matches_oracle_on_small_graphs() {
        let petersen_like = Graph::from_edges(
            8,
            &[
                (0, 1), (0, 2), (1, 2), (1, 3), (2, 3), (3, 4), (4, 5), (5, 6), (6, 4),
                (6, 7), (0, 7), (2, 5), (1, 6), (0, 3),
            ],
        );
        for g in [petersen_like, complete(5)] {
            let dag = degree_order(&g);
            let o = brute_force_all(&g, 50).unwrap().set;
            let t = count_three_node(&dag);
            assert_eq!(&t.a12, o.get(keys::A1_2));
            assert_eq!(&t.a11_2, o.get(keys::A1_1));
            assert_eq!(&t.a33, o.get(keys::A33));
            assert_eq!(&count_chordal_cycle(&dag), o.get(keys::A12_12_2));
            assert_eq!(&count_clique(&dag), o.get(keys::A14_14));
        }
    }
}
