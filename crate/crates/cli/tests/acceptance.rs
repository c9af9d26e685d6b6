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

//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

use std::fs;
use std::path::Path;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use orbitadj::derived::{gdv, graphlet_adjacency, rw_decompose};
use orbitadj::embed::{deepwalk_pmi, embed, gopmi, rwpmi, PmiMatrix};
use orbitadj::netgen::{generate, GenSpec, Model};
use orbitadj::oracle::{brute_force_all, OracleResult};
use orbitadj::orbit::keys;
use orbitadj::solve::{compute_all, SolveReport};
use orbitadj::stream::{stream_rows, with_threads, SummarySink};
use orbitadj::{parse_edge_list, CountMatrix, Graph, OrbitAdjacencySet, ALL_KEYS};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const BIN: &str = env!("CARGO_BIN_EXE_orbitadj");
const H: &str = "a b\nb c\nb e\nc d\nd e\n";

type Outcome = Result<String, String>;

struct Case {
    name: String,
    g: Graph,
    set: OrbitAdjacencySet,
    report: SolveReport,
    oracle: OracleResult,
}

fn named_graphs() -> Vec<(String, Graph)> {
    let complete = |k: u32| {
        let e: Vec<(u32, u32)> = (0..k).flat_map(|i| (i + 1..k).map(move |j| (i, j))).collect();
        Graph::from_edges(k as usize, &e)
    };
    let star = |k: u32| Graph::from_edges(k as usize + 1, &(1..=k).map(|i| (0, i)).collect::<Vec<_>>());
    vec![
        ("H".into(), parse_edge_list(H.as_bytes()).unwrap().0),
        ("K3".into(), complete(3)),
        ("K4".into(), complete(4)),
        ("K5".into(), complete(5)),
        ("C4".into(), Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)])),
        ("P4".into(), Graph::from_edges(4, &[(0, 1), (1, 2), (2, 3)])),
        ("star3".into(), star(3)),
        ("star5".into(), star(5)),
        ("star8".into(), star(8)),
        ("diamond".into(), Graph::from_edges(4, &[(0, 1), (0, 2), (1, 2), (1, 3), (2, 3)])),
    ]
}

/// 10 named graphs, 95 ER and 95 BA graphs.
fn suite_graphs() -> Vec<(String, Graph)> {
    let mut out = named_graphs();
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for seed in 0..95u64 {
        let n: usize = rng.gen_range(10..=80);
        let density: f64 = rng.gen_range(0.05..=0.4);
        let m = ((density * (n * (n - 1) / 2) as f64).round() as usize).max(1);
        let g = generate(GenSpec::new(Model::ErdosRenyi, n, m, seed)).unwrap();
        out.push((format!("er n={n} m={m} seed={seed}"), g));
    }
    for seed in 0..95u64 {
        let n: usize = rng.gen_range(10..=80);
        let k: usize = rng.gen_range(1..=4);
        let m = k * n - k * (k + 1) / 2;
        let g = generate(GenSpec::new(Model::BarabasiAlbert, n, m, seed)).unwrap();
        out.push((format!("ba n={n} m={m} seed={seed}"), g));
    }
    out
}

/// `m` re-indexed so that rows and columns follow `order` (labels).
fn by_label(g: &Graph, m: &CountMatrix, order: &[&str]) -> Vec<Vec<i64>> {
    let ids: Vec<usize> = order.iter().map(|l| g.id_of(l).unwrap()).collect();
    ids.iter().map(|&r| ids.iter().map(|&c| m.get(r, c)).collect()).collect()
}

fn example_network_golden() -> Outcome {
    // Hand-counted on H, rows and columns in label order a..e.
    let a00 = [
        [0, 1, 0, 0, 0],
        [1, 0, 1, 0, 1],
        [0, 1, 0, 1, 0],
        [0, 0, 1, 0, 1],
        [0, 1, 0, 1, 0],
    ];
    let a12 = [
        [0, 2, 0, 0, 0],
        [0, 0, 1, 0, 1],
        [0, 2, 0, 1, 0],
        [0, 0, 1, 0, 1],
        [0, 2, 0, 1, 0],
    ];
    let a11 = [
        [0, 0, 1, 0, 1],
        [0, 0, 0, 2, 0],
        [1, 0, 0, 0, 2],
        [0, 2, 0, 0, 0],
        [1, 0, 2, 0, 0],
    ];
    let mut ag1 = [[0i64; 5]; 5];
    for r in 0..5 {
        for c in 0..5 {
            ag1[r][c] = a12[r][c] + a12[c][r] + a11[r][c];
        }
    }
    let want = |m: [[i64; 5]; 5]| m.iter().map(|r| r.to_vec()).collect::<Vec<_>>();
    let g = parse_edge_list(H.as_bytes()).unwrap().0;
    let (set, _) = compute_all(&g).map_err(|e| e.to_string())?;
    let order = ["a", "b", "c", "d", "e"];
    let checks = [
        ("A0-0", set.get(keys::A00).clone(), a00),
        ("A1-2", set.get(keys::A1_2).clone(), a12),
        ("A1..1", set.get(keys::A1_1).clone(), a11),
        ("AG1", graphlet_adjacency(&set, 1).map_err(|e| e.to_string())?, ag1),
    ];
    for (name, m, expected) in checks {
        if by_label(&g, &m, &order) != want(expected) {
            return Err(format!("{name} differs: {:?}", by_label(&g, &m, &order)));
        }
    }
    // The same matrix through the command line.
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("h.txt");
    fs::write(&input, H).unwrap();
    let out = dir.path().join("out");
    let status = Command::new(BIN)
        .args(["count", "--matrices", "o1-2", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .status()
        .unwrap();
    if !status.success() {
        return Err(format!("count exited with {status}"));
    }
    let file = fs::File::open(out.join("o1-o2-h1.tsv")).unwrap();
    let (m, _) = CountMatrix::read_triplets(std::io::BufReader::new(file)).map_err(|e| e.to_string())?;
    if by_label(&g, &m, &order) != want(a12) {
        return Err("command-line triplets differ from A1-2".into());
    }
    Ok("A0-0, A1-2, A1..1, AG1 and the o1-o2-h1 triplet file match".into())
}

fn oracle_equivalence(cases: &[Case], elapsed: Duration) -> Outcome {
    for c in cases {
        if let Some((key, r, col, a, b)) = c.set.first_difference(&c.oracle.set) {
            return Err(format!("{}: {key} at ({r}, {col}) solver {a} oracle {b}", c.name));
        }
    }
    if elapsed > Duration::from_secs(300) {
        return Err(format!("suite took {elapsed:?}"));
    }
    Ok(format!("{} graphs, 28 keys each, {:.1}s", cases.len(), elapsed.as_secs_f64()))
}

fn walk2(cases: &[Case]) -> Outcome {
    for c in cases {
        let r = rw_decompose(&c.g, &c.set, 2).map_err(|e| e.to_string())?;
        if !r.residual.is_zero() || r.diagonal_is_degree != Some(true) {
            return Err(format!("{}: residual nnz {}", c.name, r.residual.nnz()));
        }
    }
    Ok(format!("offdiag residual zero and diagonal = degree on {} graphs", cases.len()))
}

fn walk3(cases: &[Case]) -> Outcome {
    for c in cases {
        let r = rw_decompose(&c.g, &c.set, 3).map_err(|e| e.to_string())?;
        if !r.residual.is_zero() {
            return Err(format!("{}: residual nnz {}", c.name, r.residual.nnz()));
        }
    }
    let seen = ALL_KEYS.iter().filter(|k| k.seen_by_rw3()).count();
    if seen != 12 {
        return Err(format!("{seen} keys seen by length-3 walks"));
    }
    Ok(format!("residual zero on {} graphs; 12 seen, 16 unseen", cases.len()))
}

fn equation_identities(cases: &[Case]) -> Outcome {
    for c in cases {
        let v = gdv(&c.set).map_err(|e| format!("{}: {e}", c.name))?;
        if v != c.oracle.gdv {
            return Err(format!("{}: GDV differs from census", c.name));
        }
        for k in 0..9 {
            let got = graphlet_adjacency(&c.set, k).map_err(|e| e.to_string())?;
            if got != c.oracle.graphlet_adjacency[k] {
                return Err(format!("{}: graphlet adjacency G{k} differs", c.name));
            }
        }
    }
    Ok(format!("all GDV routes agree with the census; G0..G8 match on {} graphs", cases.len()))
}

fn large_run(g: &Graph) -> Result<(SolveReport, Duration), String> {
    let start = Instant::now();
    let mut sink = SummarySink::new(g.n());
    let r = with_threads(1, || stream_rows(g, &mut sink))
        .and_then(|r| r)
        .map_err(|e| e.to_string())?;
    Ok((r, start.elapsed()))
}

fn self_consistency(cases: &[Case], er: &Result<(SolveReport, Duration), String>) -> Outcome {
    for c in cases {
        if c.report.consistency_residual != 0 || c.report.negative_entry_count != 0 {
            return Err(format!("{}: {:?}", c.name, c.report));
        }
    }
    let (r, _) = er.as_ref().map_err(|e| format!("ER(5000, 250000): {e}"))?;
    if r.consistency_residual != 0 || r.negative_entry_count != 0 {
        return Err(format!("ER(5000, 250000): {r:?}"));
    }
    Ok(format!("residual 0, no negatives on {} graphs and ER(5000, 250000)", cases.len()))
}

fn performance(er: &Result<(SolveReport, Duration), String>) -> Outcome {
    let (_, er_time) = er.as_ref().map_err(|e| e.clone())?;
    if *er_time >= Duration::from_secs(60) {
        return Err(format!("ER(5000, 250000) took {er_time:?}"));
    }
    let ba = generate(GenSpec::new(Model::BarabasiAlbert, 20_000, 2_000_000, 1)).map_err(|e| e.to_string())?;
    let (r, ba_time) = large_run(&ba)?;
    if ba_time >= Duration::from_secs(1800) {
        return Err(format!("BA(20000, 2000000) took {ba_time:?}"));
    }
    Ok(format!(
        "ER(5000, 250000) {:.1}s; BA(20000, 2000000) {:.1}s [{}]",
        er_time.as_secs_f64(),
        ba_time.as_secs_f64(),
        r.timings
    ))
}

fn embedding_identities() -> Outcome {
    let g = parse_edge_list(H.as_bytes()).unwrap().0;
    let a = CountMatrix::adjacency(&g);
    let go = gopmi::<f64>(&a, Some(keys::A00), 1.0).map_err(|e| e.to_string())?;
    let rw = rwpmi::<f64>(&g, 1, 1.0).map_err(|e| e.to_string())?;
    let dw = deepwalk_pmi::<f64>(&g, 1, 1.0).map_err(|e| e.to_string())?;
    if go.defined() != rw.defined() || go.defined() != dw.defined() {
        return Err("supports differ".into());
    }
    for (r, c, v) in go.iter() {
        let (x, y) = (rw.get(r, c).unwrap(), dw.get(r, c).unwrap());
        if (x - v).abs() > 1e-12 || (y - v).abs() > 1e-12 {
            return Err(format!("({r}, {c}): {v} {x} {y}"));
        }
    }
    for b in [0.5, 2.0, 5.0] {
        let shifted = gopmi::<f64>(&a, Some(keys::A00), b).map_err(|e| e.to_string())?;
        if go.iter().any(|(r, c, v)| shifted.get(r, c) != Some(v - f64::ln(b))) {
            return Err(format!("shift by ln {b} is not exact"));
        }
    }
    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        let g = generate(GenSpec::new(Model::ErdosRenyi, 30, 90, seed)).unwrap();
        let pmi: PmiMatrix<f64> = match seed % 3 {
            0 => gopmi(&CountMatrix::adjacency(&g), Some(keys::A00), 1.0),
            1 => rwpmi(&g, 2, 1.0),
            _ => deepwalk_pmi(&g, 3, 1.0),
        }
        .map_err(|e| e.to_string())?;
        let mut prev = f64::INFINITY;
        for d in 1..=30 {
            let err = embed(&pmi, d).map_err(|e| e.to_string())?.reconstruction_error(&pmi);
            // Iterative SVD noise only; anything above it is a real increase.
            if err > prev + 1e-9 * prev.max(1.0) {
                return Err(format!("seed {seed}: error rose from {prev} to {err} at d = {d}"));
            }
            worst = worst.max(err - prev);
            prev = err;
        }
    }
    Ok(format!(
        "identity chain within 1e-12, shift exact, error non-increasing on 10 matrices (largest increase {worst:.1e})"
    ))
}

fn count_files(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<(String, Vec<u8>)> = fs::read_dir(dir)
        .unwrap()
        .map(|e| e.unwrap().path())
        .map(|p| {
            let name = p.file_name().unwrap().to_string_lossy().into_owned();
            let bytes = fs::read(&p).unwrap();
            let bytes = if name == "manifest.tsv" {
                // Timing and thread lines legitimately vary.
                String::from_utf8(bytes)
                    .unwrap()
                    .lines()
                    .filter(|l| !l.starts_with("time_") && !l.starts_with("wall_") && !l.starts_with("threads") && !l.starts_with("output"))
                    .collect::<Vec<_>>()
                    .join("\n")
                    .into_bytes()
            } else {
                bytes
            };
            (name, bytes)
        })
        .collect();
    files.sort();
    files
}

fn determinism(cases: &[Case]) -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let picked: Vec<&Case> = cases.iter().step_by(cases.len() / 20).take(20).collect();
    for (i, c) in picked.iter().enumerate() {
        let input = dir.path().join(format!("g{i}.txt"));
        fs::write(&input, c.g.to_edge_list()).unwrap();
        let mut reference: Option<Vec<(String, Vec<u8>)>> = None;
        for threads in [1, 2, 8] {
            let out = dir.path().join(format!("g{i}-t{threads}"));
            let status = Command::new(BIN)
                .args(["count", "--gdv", "--threads", &threads.to_string(), "--input"])
                .arg(&input)
                .arg("--out")
                .arg(&out)
                .status()
                .unwrap();
            if !status.success() {
                return Err(format!("{}: count exited with {status}", c.name));
            }
            let files = count_files(&out);
            match &reference {
                None => reference = Some(files),
                Some(r) if *r != files => {
                    return Err(format!("{}: --threads {threads} output differs", c.name));
                }
                Some(_) => {}
            }
        }
    }
    Ok(format!("{} graphs, threads 1/2/8, 31 files each identical", picked.len()))
}

fn main() -> ExitCode {
    let start = Instant::now();
    let cases: Vec<Case> = suite_graphs()
        .into_iter()
        .map(|(name, g)| {
            let (set, report) = compute_all(&g).unwrap_or_else(|e| panic!("{name}: {e}"));
            let oracle = brute_force_all(&g, 500).unwrap();
            Case {
                name,
                g,
                set,
                report,
                oracle,
            }
        })
        .collect();
    let suite_time = start.elapsed();
    let er = generate(GenSpec::new(Model::ErdosRenyi, 5000, 250_000, 1))
        .map_err(|e| e.to_string())
        .and_then(|g| large_run(&g));

    let results: Vec<(&str, Outcome)> = vec![
        ("example_network_golden", example_network_golden()),
        ("oracle_equivalence", oracle_equivalence(&cases, suite_time)),
        ("walk2_decomposition", walk2(&cases)),
        ("walk3_decomposition", walk3(&cases)),
        ("equation_set_identities", equation_identities(&cases)),
        ("solver_self_consistency", self_consistency(&cases, &er)),
        ("performance", performance(&er)),
        ("embedding_identities", embedding_identities()),
        ("determinism", determinism(&cases)),
    ];
    let mut failed = 0;
    for (name, outcome) in &results {
        match outcome {
            Ok(detail) => println!("PASS  {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name}: {why}");
            }
        }
    }
    println!("{} passed, {failed} failed", results.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
