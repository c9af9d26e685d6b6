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

//! Cross-checks the solver against the streaming engine, the brute-force
//! census and the walk decompositions.

use crate::count::CountMatrix;
use crate::derived::{gdv, graphlet_adjacency, rw_decompose};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::oracle::{brute_force_all, DEFAULT_ORACLE_CAP};
use crate::orbit::{OrbitAdjacencySet, OrbitKey};
use crate::solve::{compute_all, SolveReport};
use crate::stream::compute_all_streaming;

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyOptions {
    /// Oracle node cap.
    pub cap: usize,
    /// Adds `delta` to one solver entry before comparing. Test hook.
    pub inject: Option<(OrbitKey, usize, usize, i64)>,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cap: DEFAULT_ORACLE_CAP,
            inject: None,
        }
    }
}

/// One named comparison; `failure` describes the first divergence.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: &'static str,
    pub failure: Option<String>,
}

#[derive(Debug, Clone)]
pub struct VerifyReport {
    pub checks: Vec<Check>,
    pub solve: SolveReport,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.failure.is_none())
    }

    pub fn first_failure(&self) -> Option<&Check> {
        self.checks.iter().find(|c| c.failure.is_some())
    }
}

fn describe(g: &Graph, key: OrbitKey, r: usize, c: usize, got: i64, want: i64) -> String {
    format!(
        "{key} at ({}, {}): solver {got}, reference {want}",
        g.label(r),
        g.label(c)
    )
}

fn set_divergence(g: &Graph, a: &OrbitAdjacencySet, b: &OrbitAdjacencySet) -> Option<String> {
    a.first_difference(b)
        .map(|(key, r, c, x, y)| describe(g, key, r, c, x, y))
}

/// Runs every check. Fails with [`Error::ResourceLimit`] above the cap.
pub fn verify(g: &Graph, opts: &VerifyOptions) -> Result<VerifyReport> {
    let oracle = brute_force_all(g, opts.cap)?;
    let (mut set, solve) = compute_all(g)?;
    if let Some((key, r, c, delta)) = opts.inject {
        if r >= g.n() || c >= g.n() || r == c {
            return Err(Error::InvalidArgument(format!("cannot inject at ({r}, {c})")));
        }
        let bump = CountMatrix::from_triplets(g.n(), vec![(r as u32, c as u32, delta)]);
        let m = set.get_mut(key);
        *m = m.add(&bump, 1)?;
    }
    let mut checks = Vec::new();
    let mut push = |name, failure| checks.push(Check { name, failure });

    push("oracle", set_divergence(g, &set, &oracle.set));
    let (streamed, _) = compute_all_streaming(g)?;
    push("streaming", set_divergence(g, &set, &streamed));
    push(
        "solver_residual",
        (solve.consistency_residual != 0 || solve.negative_entry_count != 0).then(|| {
            format!(
                "residual {}, {} negative entries",
                solve.consistency_residual, solve.negative_entry_count
            )
        }),
    );
    push(
        "gdv",
        match gdv(&set) {
            Err(e) => Some(e.to_string()),
            Ok(v) => v.iter().zip(&oracle.gdv).position(|(a, b)| a != b).map(|x| {
                format!("node {}: {:?} vs census {:?}", g.label(x), v[x], oracle.gdv[x])
            }),
        },
    );
    let mut graphlet = None;
    for (k, want) in oracle.graphlet_adjacency.iter().enumerate() {
        let got = graphlet_adjacency(&set, k)?;
        if let Some((r, c, a, b)) = got.first_difference(want) {
            graphlet = Some(format!(
                "G{k} at ({}, {}): {a} vs census {b}",
                g.label(r),
                g.label(c)
            ));
            break;
        }
    }
    push("graphlet_adjacency", graphlet);
    for (name, l) in [("walk2", 2), ("walk3", 3)] {
        let report = rw_decompose(g, &set, l)?;
        let failure = (!report.holds()).then(|| match report.residual.iter().next() {
            Some((r, c, v)) => format!("residual {v} at ({}, {})", g.label(r), g.label(c)),
            None => "diagonal differs from degrees".to_string(),
        });
        push(name, failure);
    }
    Ok(VerifyReport { checks, solve })
}
