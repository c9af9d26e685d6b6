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

//! Acyclic orientation of a graph along a total degree order.

use crate::graph::Graph;

/// Orientation of every edge from the lower-ranked to the higher-ranked
/// endpoint, where nodes are ranked by `(degree, id)`.
#[derive(Debug, Clone)]
pub struct DegreeOrderedDag<'g> {
    graph: &'g Graph,
    order: Vec<u32>,
    rank: Vec<u32>,
    out_offsets: Vec<usize>,
    out_targets: Vec<u32>,
    in_offsets: Vec<usize>,
    in_targets: Vec<u32>,
    max_out_degree: usize,
}

/// Ranks nodes by ascending degree, ties by ascending id, and orients edges
/// low rank -> high rank.
pub fn degree_order(g: &Graph) -> DegreeOrderedDag<'_> {
    let mut order: Vec<u32> = (0..g.n() as u32).collect();
    order.sort_by_key(|&u| (g.degree(u as usize), u));
    DegreeOrderedDag::from_order(g, order)
}

impl<'g> DegreeOrderedDag<'g> {
    /// Orients `g` along an arbitrary total order (`order[0]` is the minimum).
    ///
    /// Panics if `order` is not a permutation of the node ids.
    pub fn from_order(graph: &'g Graph, order: Vec<u32>) -> Self {
        let n = graph.n();
        assert_eq!(order.len(), n, "order must cover every node");
        let mut rank = vec![u32::MAX; n];
        for (r, &u) in order.iter().enumerate() {
            assert_eq!(rank[u as usize], u32::MAX, "order repeats node {u}");
            rank[u as usize] = r as u32;
        }
        let mut out_offsets = Vec::with_capacity(n + 1);
        let mut in_offsets = Vec::with_capacity(n + 1);
        let mut out_targets = Vec::with_capacity(graph.m());
        let mut in_targets = Vec::with_capacity(graph.m());
        out_offsets.push(0);
        in_offsets.push(0);
        let mut max_out_degree = 0;
        for u in 0..n {
            let before = out_targets.len();
            for &v in graph.neighbors(u) {
                if rank[u] < rank[v as usize] {
                    out_targets.push(v);
                } else {
                    in_targets.push(v);
                }
            }
            max_out_degree = max_out_degree.max(out_targets.len() - before);
            out_offsets.push(out_targets.len());
            in_offsets.push(in_targets.len());
        }
        DegreeOrderedDag {
            graph,
            order,
            rank,
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
            max_out_degree,
        }
    }

    /// The same graph oriented along the reversed order.
    pub fn reversed(&self) -> DegreeOrderedDag<'g> {
        let mut order = self.order.clone();
        order.reverse();
        Self::from_order(self.graph, order)
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn order(&self) -> &[u32] {
        &self.order
    }

    #[inline]
    pub fn rank(&self, u: usize) -> u32 {
        self.rank[u]
    }

    /// `u ≺ v` in the total order.
    #[inline]
    pub fn precedes(&self, u: usize, v: usize) -> bool {
        self.rank[u] < self.rank[v]
    }

    /// Out-neighbors (higher rank), sorted by id.
    #[inline]
    pub fn out_neighbors(&self, u: usize) -> &[u32] {
        &self.out_targets[self.out_offsets[u]..self.out_offsets[u + 1]]
    }

    /// In-neighbors (lower rank), sorted by id.
    #[inline]
    pub fn in_neighbors(&self, u: usize) -> &[u32] {
        &self.in_targets[self.in_offsets[u]..self.in_offsets[u + 1]]
    }

    #[inline]
    pub fn has_arc(&self, u: usize, v: usize) -> bool {
        self.out_neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    pub fn max_out_degree(&self) -> usize {
        self.max_out_degree
    }

    pub fn arc_count(&self) -> usize {
        self.out_targets.len()
    }

    /// All arcs `(u, v)` with `u ≺ v`.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.graph.n())
            .flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v as usize)))
    }

    /// Kahn's algorithm over the arcs; `None` if a cycle exists.
    pub fn topological_order(&self) -> Option<Vec<usize>> {
        let n = self.graph.n();
        let mut indeg: Vec<usize> = (0..n).map(|u| self.in_neighbors(u).len()).collect();
        let mut stack: Vec<usize> = (0..n).filter(|&u| indeg[u] == 0).collect();
        let mut out = Vec::with_capacity(n);
        while let Some(u) = stack.pop() {
            out.push(u);
            for &v in self.out_neighbors(u) {
                indeg[v as usize] -= 1;
                if indeg[v as usize] == 0 {
                    stack.push(v as usize);
                }
            }
        }
        (out.len() == n).then_some(out)
    }
}
