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

//! Undirected simple graphs with dense node ids and an external label map.

use std::collections::{HashMap, HashSet};
use std::fmt::Write as _;
use std::io::{self, BufRead, Write};

use crate::error::{Error, Result};

/// Undirected simple graph stored as sorted adjacency lists (CSR layout).
///
/// Node ids are `0..n`. Every node carries an external string label; the
/// label map is kept so that matrix outputs can be joined back to inputs.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    offsets: Vec<usize>,
    targets: Vec<u32>,
    labels: Vec<String>,
}

/// Input-cleaning counters surfaced by [`parse_edge_list`].
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct ParseWarnings {
    pub duplicate_edges: usize,
    pub self_loops: usize,
}

impl ParseWarnings {
    pub fn is_clean(&self) -> bool {
        self.duplicate_edges == 0 && self.self_loops == 0
    }
}

impl Graph {
    /// Builds a graph on `n` nodes labelled `"0".."n-1"`.
    ///
    /// Self-loops and duplicate edges are dropped. Panics if an endpoint is
    /// out of range.
    pub fn from_edges(n: usize, edges: &[(u32, u32)]) -> Self {
        let labels = (0..n).map(|i| i.to_string()).collect();
        Self::with_labels(labels, edges)
    }

    /// Builds a graph whose node `i` carries `labels[i]`.
    pub fn with_labels(labels: Vec<String>, edges: &[(u32, u32)]) -> Self {
        let n = labels.len();
        let mut degree = vec![0usize; n];
        let mut cleaned: Vec<(u32, u32)> = edges
            .iter()
            .filter(|(u, v)| u != v)
            .map(|&(u, v)| {
                assert!((u as usize) < n && (v as usize) < n, "edge ({u}, {v}) out of range");
                (u.min(v), u.max(v))
            })
            .collect();
        cleaned.sort_unstable();
        cleaned.dedup();
        for &(u, v) in &cleaned {
            degree[u as usize] += 1;
            degree[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let mut fill = offsets[..n].to_vec();
        let mut targets = vec![0u32; 2 * cleaned.len()];
        for &(u, v) in &cleaned {
            targets[fill[u as usize]] = v;
            fill[u as usize] += 1;
            targets[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for u in 0..n {
            targets[offsets[u]..offsets[u + 1]].sort_unstable();
        }
        Graph {
            offsets,
            targets,
            labels,
        }
    }

    /// Graph with `n` nodes and no edges.
    pub fn empty(n: usize) -> Self {
        Self::from_edges(n, &[])
    }

    pub fn n(&self) -> usize {
        self.labels.len()
    }

    pub fn m(&self) -> usize {
        self.targets.len() / 2
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[u32] {
        &self.targets[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.n()).map(|u| self.degree(u)).collect()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n()).map(|u| self.degree(u)).max().unwrap_or(0)
    }

    #[inline]
    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&(v as u32)).is_ok()
    }

    /// Position of `v` in the CSR target array of `u`, if the edge exists.
    ///
    /// Slots index per-directed-edge arrays such as [`Graph::reverse_slots`].
    #[inline]
    pub fn edge_slot(&self, u: usize, v: usize) -> Option<usize> {
        self.neighbors(u)
            .binary_search(&(v as u32))
            .ok()
            .map(|k| self.offsets[u] + k)
    }

    #[inline]
    pub fn slot_range(&self, u: usize) -> std::ops::Range<usize> {
        self.offsets[u]..self.offsets[u + 1]
    }

    #[inline]
    pub fn slot_target(&self, slot: usize) -> usize {
        self.targets[slot] as usize
    }

    /// For every directed slot `u -> v`, the slot of `v -> u`.
    pub fn reverse_slots(&self) -> Vec<usize> {
        let mut rev = vec![0usize; self.targets.len()];
        let mut cursor = self.offsets[..self.n()].to_vec();
        // Walking sources in increasing order visits each target's list in
        // increasing order too, so a per-node cursor suffices.
        for u in 0..self.n() {
            for slot in self.slot_range(u) {
                let v = self.targets[slot] as usize;
                rev[slot] = cursor[v];
                cursor[v] += 1;
            }
        }
        rev
    }

    /// Undirected edges as `(u, v)` with `u < v`, sorted.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .map(|&v| v as usize)
                .filter(move |&v| u < v)
                .map(move |v| (u, v))
        })
    }

    pub fn label(&self, u: usize) -> &str {
        &self.labels[u]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn id_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Canonical edge-list text. Re-parsing it reproduces the same ids and
    /// labels for any graph obtained from [`parse_edge_list`].
    pub fn to_edge_list(&self) -> String {
        let n = self.n();
        let mut out = String::new();
        let mut seen = vec![false; n];
        let mut emitted: HashSet<(usize, usize)> = HashSet::new();
        let mut emit = |out: &mut String, u: usize, v: usize| {
            emitted.insert((u.min(v), u.max(v)));
            let _ = writeln!(out, "{}\t{}", self.labels[u], self.labels[v]);
        };
        for k in 0..n {
            if seen[k] {
                continue;
            }
            let earlier = self.neighbors(k).first().map(|&j| j as usize).filter(|&j| j < k);
            match earlier {
                Some(j) => emit(&mut out, j, k),
                None => {
                    if let Some(&j) = self.neighbors(k).first() {
                        let j = j as usize;
                        emit(&mut out, k, j);
                        seen[j] = true;
                    }
                }
            }
            seen[k] = true;
        }
        for (u, v) in self.edges() {
            if !emitted.contains(&(u, v)) {
                let _ = writeln!(out, "{}\t{}", self.labels[u], self.labels[v]);
            }
        }
        out
    }

    /// Writes the `id<TAB>label` map, one node per line.
    pub fn write_label_map<W: Write>(&self, mut w: W) -> io::Result<()> {
        for (id, label) in self.labels.iter().enumerate() {
            writeln!(w, "{id}\t{label}")?;
        }
        Ok(())
    }
}

/// Parses whitespace-separated edge-list text.
///
/// Labels are mapped to ids in order of first appearance. Lines starting with
/// `#` and blank lines are skipped. Self-loops and repeated edges are dropped
/// and counted in the returned warnings; a self-loop alone does not create a
/// node.
pub fn parse_edge_list<R: BufRead>(reader: R) -> Result<(Graph, ParseWarnings)> {
    let mut builder = EdgeListBuilder::default();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = trimmed.split_whitespace().collect();
        if tokens.len() != 2 {
            return Err(Error::Parse {
                line: idx + 1,
                found: tokens.len(),
            });
        }
        builder.push(tokens[0], tokens[1]);
    }
    builder.finish()
}

/// Builds a graph from label pairs with the same rules as
/// [`parse_edge_list`]. Labels must be non-empty and free of whitespace so
/// that the result round-trips through the text format.
pub fn graph_from_pairs<S: AsRef<str>>(pairs: &[(S, S)]) -> Result<(Graph, ParseWarnings)> {
    let mut builder = EdgeListBuilder::default();
    for (i, (u, v)) in pairs.iter().enumerate() {
        for label in [u.as_ref(), v.as_ref()] {
            if label.is_empty() || label.contains(char::is_whitespace) {
                return Err(Error::InvalidArgument(format!("pair {i}: bad label {label:?}")));
            }
        }
        builder.push(u.as_ref(), v.as_ref());
    }
    builder.finish()
}

#[derive(Default)]
struct EdgeListBuilder {
    ids: HashMap<String, u32>,
    labels: Vec<String>,
    edges: Vec<(u32, u32)>,
    seen: HashSet<(u32, u32)>,
    warnings: ParseWarnings,
}

impl EdgeListBuilder {
    fn intern(&mut self, label: &str) -> u32 {
        if let Some(&id) = self.ids.get(label) {
            return id;
        }
        let id = self.labels.len() as u32;
        self.labels.push(label.to_string());
        self.ids.insert(label.to_string(), id);
        id
    }

    fn push(&mut self, a: &str, b: &str) {
        if a == b {
            self.warnings.self_loops += 1;
            return;
        }
        let u = self.intern(a);
        let v = self.intern(b);
        if self.seen.insert((u.min(v), u.max(v))) {
            self.edges.push((u, v));
        } else {
            self.warnings.duplicate_edges += 1;
        }
    }

    fn finish(self) -> Result<(Graph, ParseWarnings)> {
        if self.edges.is_empty() {
            return Err(Error::EmptyGraph);
        }
        Ok((Graph::with_labels(self.labels, &self.edges), self.warnings))
    }
}

/// Degree above which [`AdjacencyProbe`] keeps a bitset row.
pub const DEFAULT_BITSET_DEGREE: usize = 256;

/// Edge-membership oracle: binary search on sorted neighbor lists for
/// low-degree nodes, bitset probes for hubs.
#[derive(Debug, Clone)]
pub struct AdjacencyProbe<'g> {
    graph: &'g Graph,
    rows: Vec<Option<usize>>,
    bits: Vec<u64>,
}

impl<'g> AdjacencyProbe<'g> {
    pub fn new(graph: &'g Graph) -> Self {
        Self::with_threshold(graph, DEFAULT_BITSET_DEGREE)
    }

    pub fn with_threshold(graph: &'g Graph, threshold: usize) -> Self {
        let n = graph.n();
        let words = n.div_ceil(64);
        let mut rows = vec![None; n];
        let mut bits = Vec::new();
        for (u, row) in rows.iter_mut().enumerate() {
            if graph.degree(u) >= threshold {
                let base = bits.len();
                bits.resize(base + words, 0u64);
                for &v in graph.neighbors(u) {
                    bits[base + v as usize / 64] |= 1 << (v % 64);
                }
                *row = Some(base);
            }
        }
        AdjacencyProbe {
            graph,
            rows,
            bits,
        }
    }

    #[inline]
    pub fn contains(&self, u: usize, v: usize) -> bool {
        // Probe from the cheaper side.
        let (a, b) = if self.graph.degree(u) >= self.graph.degree(v) {
            (u, v)
        } else {
            (v, u)
        };
        match self.rows[a] {
            Some(base) => self.bits[base + b / 64] >> (b % 64) & 1 == 1,
            None => self.graph.has_edge(b, a),
        }
    }

    pub fn graph(&self) -> &'g Graph {
        self.graph
    }

    pub fn bitset_rows(&self) -> usize {
        self.rows.iter().filter(|r| r.is_some()).count()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<(Graph, ParseWarnings)> {
        parse_edge_list(text.as_bytes())
    }

    #[test]
    fn parses_example_network() {
        let (g, w) = parse("a b\nb c\nb e\nc d\nd e\n").unwrap();
        assert_eq!((g.n(), g.m()), (5, 5));
        assert!(w.is_clean());
        assert_eq!(g.labels(), &["a", "b", "c", "e", "d"]);
        assert_eq!(g.degree(g.id_of("b").unwrap()), 3);
    }

    #[test]
    fn drops_duplicates_and_self_loops() {
        let (g, w) = parse("a b\nb a\na a\n").unwrap();
        assert_eq!((g.n(), g.m()), (2, 1));
        assert_eq!(w.duplicate_edges, 1);
        assert_eq!(w.self_loops, 1);
    }

    #[test]
    fn malformed_line_reports_line_number() {
        match parse("# header\na b c\n") {
            Err(Error::Parse { line, found }) => assert_eq!((line, found), (2, 3)),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse("x\n"), Err(Error::Parse { line: 1, .. })));
    }

    #[test]
    fn empty_input_is_an_error() {
        assert!(matches!(parse(""), Err(Error::EmptyGraph)));
        assert!(matches!(parse("# only\nq q\n"), Err(Error::EmptyGraph)));
    }

    #[test]
    fn reverse_slots_pair_up() {
        let g = Graph::from_edges(5, &[(0, 1), (1, 2), (1, 4), (2, 3), (3, 4), (0, 4)]);
        let rev = g.reverse_slots();
        for u in 0..g.n() {
            for s in g.slot_range(u) {
                let v = g.slot_target(s);
                assert_eq!(g.slot_target(rev[s]), u);
                assert_eq!(rev[rev[s]], s);
                assert_eq!(g.edge_slot(v, u), Some(rev[s]));
            }
        }
    }

    #[test]
    fn probe_agrees_with_binary_search() {
        let edges: Vec<(u32, u32)> = (0..40u32)
            .flat_map(|u| (u + 1..40).filter(move |v| (u * 7 + v * 3) % 5 == 0).map(move |v| (u, v)))
            .collect();
        let g = Graph::from_edges(40, &edges);
        for threshold in [0, 4, 1000] {
            let probe = AdjacencyProbe::with_threshold(&g, threshold);
            for u in 0..40 {
                for v in 0..40 {
                    assert_eq!(probe.contains(u, v), g.has_edge(u, v));
                }
            }
        }
    }
}
