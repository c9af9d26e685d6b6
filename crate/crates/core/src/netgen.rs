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

//! Seeded Erdős–Rényi and Barabási–Albert generators.

use std::fmt;
use std::str::FromStr;

use rand::seq::index;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Model {
    ErdosRenyi,
    BarabasiAlbert,
}

impl FromStr for Model {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "er" => Ok(Model::ErdosRenyi),
            "ba" => Ok(Model::BarabasiAlbert),
            _ => Err(Error::InvalidArgument(format!("unknown model `{s}` (expected er or ba)"))),
        }
    }
}

impl fmt::Display for Model {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Model::ErdosRenyi => "er",
            Model::BarabasiAlbert => "ba",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct GenSpec {
    pub model: Model,
    pub n: usize,
    pub m: usize,
    pub seed: u64,
}

impl GenSpec {
    pub fn new(model: Model, n: usize, m: usize, seed: u64) -> Self {
        GenSpec { model, n, m, seed }
    }
}

/// Generates a simple graph with exactly `spec.m` edges and labels
/// `"0".."n-1"`. Identical specs give identical graphs.
pub fn generate(spec: GenSpec) -> Result<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let edges = match spec.model {
        Model::ErdosRenyi => erdos_renyi(spec.n, spec.m, &mut rng)?,
        Model::BarabasiAlbert => barabasi_albert(spec.n, spec.m, &mut rng)?,
    };
    Ok(Graph::from_edges(spec.n, &edges))
}

/// Index of pair `(i, j)`, `i < j`, in row-major upper-triangle order.
fn pair_offset(n: u64, i: u64) -> u64 {
    i * (2 * n - i - 1) / 2
}

fn pair_from_index(n: u64, k: u64) -> (u32, u32) {
    // Start from the closed-form estimate and correct rounding.
    let nf = n as f64;
    let est = nf - 0.5 - ((nf - 0.5).powi(2) - 2.0 * k as f64).max(0.0).sqrt();
    let mut i = (est.floor().max(0.0) as u64).min(n - 2);
    while i > 0 && pair_offset(n, i) > k {
        i -= 1;
    }
    while pair_offset(n, i + 1) <= k {
        i += 1;
    }
    let j = i + 1 + (k - pair_offset(n, i));
    (i as u32, j as u32)
}

fn erdos_renyi(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>> {
    let total = n.saturating_mul(n.saturating_sub(1)) / 2;
    if m > total {
        return Err(Error::InvalidArgument(format!(
            "{m} edges do not fit in a simple graph on {n} nodes"
        )));
    }
    if m == 0 {
        return Ok(Vec::new());
    }
    let picked: Vec<usize> = if m <= total / 2 {
        index::sample(rng, total, m).into_vec()
    } else {
        let mut skip = index::sample(rng, total, total - m).into_vec();
        skip.sort_unstable();
        let mut skip = skip.into_iter().peekable();
        (0..total)
            .filter(|&k| {
                if skip.peek() == Some(&k) {
                    skip.next();
                    false
                } else {
                    true
                }
            })
            .collect()
    };
    Ok(picked
        .into_iter()
        .map(|k| pair_from_index(n as u64, k as u64))
        .collect())
}

fn barabasi_albert(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Result<Vec<(u32, u32)>> {
    let bad = |why: String| Error::InvalidArgument(why);
    if n == 0 {
        return Err(bad("BA needs at least one node".into()));
    }
    let k = (m as f64 / n as f64).round() as usize;
    if k == 0 {
        return Err(bad(format!("BA attachment round({m}/{n}) must be at least 1")));
    }
    let seed_edges = k * (k + 1) / 2;
    if n < k + 1 || m < seed_edges {
        return Err(bad(format!("BA with attachment {k} needs more than {k} nodes")));
    }
    let mut edges = Vec::with_capacity(m);
    let mut targets: Vec<u32> = Vec::with_capacity(2 * m);
    for i in 0..=k as u32 {
        for j in i + 1..=k as u32 {
            edges.push((i, j));
            targets.extend([i, j]);
        }
    }
    let newcomers = n - k - 1;
    let rest = m - seed_edges;
    if newcomers == 0 {
        if rest > 0 {
            return Err(bad(format!("BA cannot place {m} edges on {n} nodes")));
        }
        return Ok(edges);
    }
    let (base, extra) = (rest / newcomers, rest % newcomers);
    let mut chosen: Vec<u32> = Vec::new();
    for (idx, v) in (k + 1..n).enumerate() {
        let want = base + usize::from(idx >= newcomers - extra);
        if want > v {
            return Err(bad(format!("BA cannot attach {want} edges to node {v}")));
        }
        chosen.clear();
        while chosen.len() < want {
            let t = targets[rng.gen_range(0..targets.len())];
            if !chosen.contains(&t) {
                chosen.push(t);
            }
        }
        for &t in &chosen {
            edges.push((t, v as u32));
            targets.extend([t, v as u32]);
        }
    }
    Ok(edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pair_index_roundtrip() {
        for n in 2..40u64 {
            let total = n * (n - 1) / 2;
            let mut expected = Vec::new();
            for i in 0..n as u32 {
                for j in i + 1..n as u32 {
                    expected.push((i, j));
                }
            }
            let got: Vec<_> = (0..total).map(|k| pair_from_index(n, k)).collect();
            assert_eq!(got, expected);
        }
    }

    #[test]
    fn er_full_density_is_complete() {
        let g = generate(GenSpec::new(Model::ErdosRenyi, 5, 10, 3)).unwrap();
        assert_eq!(g.m(), 10);
        assert!((0..5).all(|u| g.degree(u) == 4));
        assert!(generate(GenSpec::new(Model::ErdosRenyi, 5, 11, 3)).is_err());
    }

    #[test]
    fn er_is_deterministic_and_exact() {
        let spec = GenSpec::new(Model::ErdosRenyi, 1000, 5000, 42);
        let a = generate(spec).unwrap();
        let b = generate(spec).unwrap();
        assert_eq!(a.to_edge_list(), b.to_edge_list());
        assert_eq!(a.m(), 5000);
        let c = generate(GenSpec::new(Model::ErdosRenyi, 1000, 5000, 43)).unwrap();
        assert_ne!(a.to_edge_list(), c.to_edge_list());
        let dense = generate(GenSpec::new(Model::ErdosRenyi, 30, 400, 1)).unwrap();
        assert_eq!(dense.m(), 400);
    }

    #[test]
    fn ba_edge_count_and_errors() {
        for (n, m) in [(1000, 3000), (50, 120), (10, 20), (200, 1000)] {
            let g = generate(GenSpec::new(Model::BarabasiAlbert, n, m, 9)).unwrap();
            assert_eq!((g.n(), g.m()), (n, m));
        }
        assert!(generate(GenSpec::new(Model::BarabasiAlbert, 100, 10, 1)).is_err());
    }

    #[test]
    fn ba_is_heavier_tailed_than_er() {
        let wins = (0..100u64)
            .filter(|&s| {
                let ba = generate(GenSpec::new(Model::BarabasiAlbert, 1000, 3000, s)).unwrap();
                let er = generate(GenSpec::new(Model::ErdosRenyi, 1000, 3000, s)).unwrap();
                ba.max_degree() > er.max_degree()
            })
            .count();
        assert!(wins >= 95, "{wins}");
    }
}
