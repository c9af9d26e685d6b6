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

//! Call-level entry points over label pairs, shared by the command line and
//! scripting bindings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use crate::count::CountMatrix;
use crate::embed::{deepwalk_pmi, embed, gopmi, rwpmi, Embedding, PmiMatrix};
use crate::error::{Error, Result};
use crate::graph::{graph_from_pairs, Graph, ParseWarnings};
use crate::manifest::Manifest;
use crate::netgen::{generate as generate_graph, GenSpec};
use crate::orbit::{OrbitKey, ALL_KEYS};
use crate::stream::{stream_rows, with_threads, SelectSink};
use crate::verify::{verify as verify_graph, VerifyOptions, VerifyReport};

/// Matrices by canonical key string (`o1-o2-h1`), node labels by id.
#[derive(Debug, Clone)]
pub struct CountResult {
    pub labels: Vec<String>,
    pub matrices: BTreeMap<String, CountMatrix>,
    pub manifest: Manifest,
}

fn push_graph(m: &mut Manifest, g: &Graph, w: &ParseWarnings) {
    m.push("nodes", g.n());
    m.push("edges", g.m());
    m.push("duplicate_edges", w.duplicate_edges);
    m.push("self_loops", w.self_loops);
}

/// Counts the selected keys (all when `keys` is empty) of `g` on `threads`
/// workers (0 = all cores).
pub fn count_graph(g: &Graph, keys: &[OrbitKey], threads: usize) -> Result<(BTreeMap<OrbitKey, CountMatrix>, Manifest)> {
    let keys = if keys.is_empty() { &ALL_KEYS[..] } else { keys };
    let start = Instant::now();
    let mut sink = SelectSink::new(g.n(), keys);
    let report = with_threads(threads, || stream_rows(g, &mut sink))??;
    let mut m = Manifest::new("count");
    m.push("threads", threads);
    m.push("consistency_residual", report.consistency_residual);
    m.push("negative_entries", report.negative_entry_count);
    m.push_timings(&report.timings);
    m.push_seconds("wall_time_s", start.elapsed());
    Ok((sink.into_matrices(), m))
}

/// All 28 matrices of the graph on `edges`.
pub fn count<S: AsRef<str>>(edges: &[(S, S)], threads: usize) -> Result<CountResult> {
    let (g, warnings) = graph_from_pairs(edges)?;
    let (matrices, mut manifest) = count_graph(&g, &[], threads)?;
    push_graph(&mut manifest, &g, &warnings);
    Ok(CountResult {
        labels: g.labels().to_vec(),
        matrices: matrices.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
        manifest,
    })
}

/// Which PMI matrix to factorize.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PmiKind {
    Orbit(OrbitKey),
    RandomWalk(usize),
    DeepWalk(usize),
}

impl PmiKind {
    /// `kind` is `gopmi`, `rwpmi` or `deepwalk`; `param` is the key, the
    /// power or the window.
    pub fn parse(kind: &str, param: &str) -> Result<Self> {
        let number = |what: &str| {
            param
                .parse::<usize>()
                .map_err(|_| Error::InvalidArgument(format!("{what} must be a positive integer, got {param:?}")))
        };
        match kind {
            "gopmi" => Ok(PmiKind::Orbit(OrbitKey::from_str(param)?)),
            "rwpmi" => Ok(PmiKind::RandomWalk(number("power")?)),
            "deepwalk" => Ok(PmiKind::DeepWalk(number("window")?)),
            other => Err(Error::InvalidArgument(format!("unknown PMI kind {other:?}"))),
        }
    }
}

impl fmt::Display for PmiKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PmiKind::Orbit(k) => write!(f, "gopmi {k}"),
            PmiKind::RandomWalk(p) => write!(f, "rwpmi {p}"),
            PmiKind::DeepWalk(t) => write!(f, "deepwalk {t}"),
        }
    }
}

pub fn pmi_matrix(g: &Graph, kind: PmiKind, b: f64, threads: usize) -> Result<PmiMatrix<f64>> {
    match kind {
        PmiKind::Orbit(key) => {
            let (mut m, _) = count_graph(g, &[key], threads)?;
            let base = m.remove(&key).expect("selected key is present");
            gopmi(&base, Some(key), b)
        }
        PmiKind::RandomWalk(p) => rwpmi(g, p, b),
        PmiKind::DeepWalk(t) => deepwalk_pmi(g, t, b),
    }
}

#[derive(Debug, Clone)]
pub struct EmbedResult {
    pub labels: Vec<String>,
    pub embedding: Embedding<f64>,
    pub manifest: Manifest,
}

pub fn embed_graph(g: &Graph, kind: PmiKind, dim: usize, b: f64, threads: usize) -> Result<(Embedding<f64>, Manifest)> {
    let start = Instant::now();
    let pmi = pmi_matrix(g, kind, b, threads)?;
    let emb = with_threads(threads, || embed(&pmi, dim))??;
    let mut m = Manifest::new("embed");
    m.push("pmi", kind);
    m.push("b", b);
    m.push("dim_requested", dim);
    m.push("dim", emb.d);
    m.push("pmi_defined_entries", pmi.defined());
    if let Some(w) = &emb.warning {
        m.push("warning", w);
    }
    m.push_seconds("wall_time_s", start.elapsed());
    Ok((emb, m))
}

pub fn embed_pairs<S: AsRef<str>>(edges: &[(S, S)], kind: PmiKind, dim: usize, b: f64) -> Result<EmbedResult> {
    let (g, warnings) = graph_from_pairs(edges)?;
    let (embedding, mut manifest) = embed_graph(&g, kind, dim, b, 1)?;
    push_graph(&mut manifest, &g, &warnings);
    Ok(EmbedResult {
        labels: g.labels().to_vec(),
        embedding,
        manifest,
    })
}

pub fn verify<S: AsRef<str>>(edges: &[(S, S)], cap: usize) -> Result<VerifyReport> {
    let (g, _) = graph_from_pairs(edges)?;
    verify_graph(&g, &VerifyOptions { cap, inject: None })
}

/// Edge list of a generated network as label pairs.
pub fn generate(spec: GenSpec) -> Result<Vec<(String, String)>> {
    let g = generate_graph(spec)?;
    Ok(g.edges()
        .map(|(u, v)| (g.label(u).to_string(), g.label(v).to_string()))
        .collect())
}
