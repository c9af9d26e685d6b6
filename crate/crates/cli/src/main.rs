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

//! `orbitadj` command-line tool.

use std::fs::{self, File};
use std::io::{self, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::str::FromStr;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use orbitadj::api::{embed_graph, PmiKind};
use orbitadj::derived::{gdv_from_row_sums, write_gdv};
use orbitadj::embed::write_embedding;
use orbitadj::manifest::Manifest;
use orbitadj::netgen::{generate, GenSpec, Model};
use orbitadj::stream::{stream_rows, with_threads, RowSink, SummarySink, TripletSink};
use orbitadj::verify::{verify, VerifyOptions};
use orbitadj::{parse_edge_list, Error, Graph, OrbitKey, ParseWarnings, ALL_KEYS};

#[derive(Parser)]
#[command(name = "orbitadj", version, about = "Graphlet-orbit adjacency counting and embeddings")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Count orbit adjacency matrices and write them as triplet files.
    Count(CountArgs),
    /// Compare the solver with the brute-force census and walk identities.
    Verify(VerifyArgs),
    /// Factorize a PMI matrix into node embeddings.
    Embed(EmbedArgs),
    /// Write a random network as an edge list.
    Generate(GenerateArgs),
    /// Time the counting pipeline on generated networks.
    Bench(BenchArgs),
}

#[derive(Args)]
struct CountArgs {
    #[arg(long)]
    input: PathBuf,
    /// Output directory; created if missing.
    #[arg(long)]
    out: PathBuf,
    /// `all` or a comma-separated key list such as `o1-o2,o9..o10`.
    #[arg(long, default_value = "all")]
    matrices: String,
    /// Worker threads; 0 uses every core.
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Also write per-node orbit counts to `gdv.tsv`.
    #[arg(long)]
    gdv: bool,
}

#[derive(Args)]
struct VerifyArgs {
    #[arg(long)]
    input: PathBuf,
    /// Largest graph the brute-force census accepts.
    #[arg(long, default_value_t = orbitadj::oracle::DEFAULT_ORACLE_CAP)]
    cap: usize,
    /// `KEY,ROW,COL`: perturbs one solver entry before comparing.
    #[arg(long, hide = true)]
    inject: Option<String>,
}

#[derive(Args)]
struct EmbedArgs {
    #[arg(long)]
    input: PathBuf,
    /// gopmi, rwpmi or deepwalk.
    #[arg(long)]
    pmi: String,
    /// Orbit adjacency key for gopmi.
    #[arg(long)]
    key: Option<String>,
    /// Walk length for rwpmi.
    #[arg(long)]
    power: Option<String>,
    /// Window size for deepwalk.
    #[arg(long = "T", alias = "window")]
    window: Option<String>,
    #[arg(long)]
    dim: usize,
    #[arg(long)]
    out: PathBuf,
    /// Negative-sampling shift.
    #[arg(long, default_value_t = 1.0)]
    b: f64,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Manifest path; defaults to `<out>.manifest`.
    #[arg(long)]
    manifest: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    model: Model,
    #[arg(long)]
    nodes: usize,
    #[arg(long)]
    edges: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    model: Model,
    #[arg(long)]
    nodes: usize,
    /// One or more edge counts, comma-separated.
    #[arg(long, value_delimiter = ',', required = true)]
    edges: Vec<usize>,
    #[arg(long, default_value_t = 1)]
    seeds: usize,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Timing table path; defaults to standard output.
    #[arg(long)]
    out: Option<PathBuf>,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Inconsistent { .. } | Error::MissingKey(_) | Error::DimensionMismatch { .. } => 2,
            Error::ResourceLimit(_) | Error::Overflow { .. } => 3,
            _ => 1,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Error::from(e).into()
    }
}

fn usage(message: impl Into<String>) -> Failure {
    Failure {
        code: 1,
        message: message.into(),
    }
}

type CliResult = Result<(), Failure>;

fn read_graph(path: &Path) -> Result<(Graph, ParseWarnings), Failure> {
    let file = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    let (g, w) = parse_edge_list(BufReader::new(file)).map_err(|e| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    })?;
    if w.duplicate_edges > 0 {
        eprintln!("warning: dropped {} duplicate edge(s)", w.duplicate_edges);
    }
    if w.self_loops > 0 {
        eprintln!("warning: dropped {} self-loop(s)", w.self_loops);
    }
    Ok((g, w))
}

fn graph_manifest(m: &mut Manifest, input: &Path, g: &Graph, w: &ParseWarnings) {
    m.push("input", input.display());
    m.push("nodes", g.n());
    m.push("edges", g.m());
    m.push("duplicate_edges", w.duplicate_edges);
    m.push("self_loops", w.self_loops);
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn parse_keys(spec: &str) -> Result<Vec<OrbitKey>, Failure> {
    if spec == "all" {
        return Ok(ALL_KEYS.to_vec());
    }
    let mut keys = Vec::new();
    for part in spec.split(',') {
        let key = OrbitKey::from_str(part.trim())?;
        if !keys.contains(&key) {
            keys.push(key);
        }
    }
    Ok(keys)
}

fn cmd_count(a: CountArgs) -> CliResult {
    let keys = parse_keys(&a.matrices)?;
    let (g, warnings) = read_graph(&a.input)?;
    fs::create_dir_all(&a.out).map_err(|e| usage(format!("{}: {e}", a.out.display())))?;
    let start = Instant::now();
    let writers = keys
        .iter()
        .map(|&k| Ok((k, create(&a.out.join(format!("{k}.tsv")))?)))
        .collect::<Result<Vec<_>, Failure>>()?;
    let mut triplets = TripletSink::new(g.n(), writers)?;
    let mut summary = SummarySink::new(g.n());
    let report = {
        let mut sinks: Vec<&mut (dyn RowSink + Send)> = vec![&mut triplets, &mut summary];
        with_threads(a.threads, || stream_rows(&g, &mut sinks))??
    };
    triplets.finish()?;
    g.write_label_map(create(&a.out.join("labels.tsv"))?)?;
    if a.gdv {
        let gdv = gdv_from_row_sums(&summary.row_sums)?;
        write_gdv(&g, &gdv, create(&a.out.join("gdv.tsv"))?)?;
    }

    let mut m = Manifest::new("count");
    graph_manifest(&mut m, &a.input, &g, &warnings);
    m.push("output", a.out.display());
    m.push("matrices", keys.iter().map(|k| k.to_string()).collect::<Vec<_>>().join(","));
    m.push("threads", a.threads);
    m.push("consistency_residual", report.consistency_residual);
    m.push("negative_entries", report.negative_entry_count);
    for &k in &keys {
        m.push(&format!("nnz {k}"), summary.nnz[k.index()]);
        m.push(&format!("volume {k}"), summary.volume[k.index()]);
    }
    m.push_timings(&report.timings);
    m.push_seconds("wall_time_s", start.elapsed());
    m.write_to(create(&a.out.join("manifest.tsv"))?)?;
    Ok(())
}

fn parse_injection(spec: &str, g: &Graph) -> Result<(OrbitKey, usize, usize, i64), Failure> {
    let parts: Vec<&str> = spec.split(',').collect();
    let [key, r, c] = parts[..] else {
        return Err(usage("--inject expects KEY,ROW,COL"));
    };
    let node = |label: &str| {
        g.id_of(label)
            .ok_or_else(|| usage(format!("--inject: unknown node {label:?}")))
    };
    Ok((OrbitKey::from_str(key)?, node(r)?, node(c)?, 1))
}

fn cmd_verify(a: VerifyArgs) -> CliResult {
    let (g, _) = read_graph(&a.input)?;
    let inject = a.inject.as_deref().map(|s| parse_injection(s, &g)).transpose()?;
    let report = verify(&g, &VerifyOptions { cap: a.cap, inject })?;
    let mut out = io::stdout().lock();
    for c in &report.checks {
        match &c.failure {
            None => writeln!(out, "ok\t{}", c.name)?,
            Some(f) => writeln!(out, "FAIL\t{}\t{f}", c.name)?,
        }
    }
    match report.first_failure() {
        None => Ok(()),
        Some(c) => Err(Failure {
            code: 2,
            message: format!("{} diverges: {}", c.name, c.failure.as_deref().unwrap_or("")),
        }),
    }
}

fn cmd_embed(a: EmbedArgs) -> CliResult {
    let param = match a.pmi.as_str() {
        "gopmi" => a.key.as_deref().ok_or_else(|| usage("gopmi needs --key"))?,
        "rwpmi" => a.power.as_deref().ok_or_else(|| usage("rwpmi needs --power"))?,
        "deepwalk" => a.window.as_deref().ok_or_else(|| usage("deepwalk needs --T"))?,
        other => return Err(usage(format!("unknown --pmi {other:?}"))),
    };
    let kind = PmiKind::parse(&a.pmi, param)?;
    let (g, warnings) = read_graph(&a.input)?;
    let (emb, mut m) = embed_graph(&g, kind, a.dim, a.b, a.threads)?;
    if let Some(w) = &emb.warning {
        eprintln!("warning: {w}");
    }
    write_embedding(&g, &emb, create(&a.out)?)?;
    graph_manifest(&mut m, &a.input, &g, &warnings);
    m.push("output", a.out.display());
    let path = a.manifest.unwrap_or_else(|| {
        let mut p = a.out.clone().into_os_string();
        p.push(".manifest");
        p.into()
    });
    m.write_to(create(&path)?)?;
    Ok(())
}

fn cmd_generate(a: GenerateArgs) -> CliResult {
    let g = generate(GenSpec::new(a.model, a.nodes, a.edges, a.seed))?;
    let text = g.to_edge_list();
    match a.out {
        Some(p) => create(&p)?.write_all(text.as_bytes())?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

fn median(v: &mut [f64]) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len();
    if k % 2 == 1 {
        v[k / 2]
    } else {
        (v[k / 2 - 1] + v[k / 2]) / 2.0
    }
}

fn cmd_bench(a: BenchArgs) -> CliResult {
    if a.seeds == 0 {
        return Err(usage("--seeds must be at least 1"));
    }
    let mut out: Box<dyn Write> = match &a.out {
        Some(p) => Box::new(create(p)?),
        None => Box::new(io::stdout().lock()),
    };
    writeln!(
        out,
        "model\tnodes\tedges\tseed\tenumeration_s\trhs_s\tsolve_s\ta3_s\twall_s\tresidual"
    )?;
    for &m in &a.edges {
        let mut walls = Vec::with_capacity(a.seeds);
        for seed in 0..a.seeds as u64 {
            let g = generate(GenSpec::new(a.model, a.nodes, m, seed))?;
            let start = Instant::now();
            let mut sink = SummarySink::new(g.n());
            let r = with_threads(a.threads, || stream_rows(&g, &mut sink))??;
            let wall = start.elapsed().as_secs_f64();
            walls.push(wall);
            let t = r.timings;
            writeln!(
                out,
                "{}\t{}\t{}\t{seed}\t{:.3}\t{:.3}\t{:.3}\t{:.3}\t{wall:.3}\t{}",
                a.model,
                a.nodes,
                m,
                t.enumeration.as_secs_f64(),
                t.rhs.as_secs_f64(),
                t.solve.as_secs_f64(),
                t.a3.as_secs_f64(),
                r.consistency_residual
            )?;
            out.flush()?;
        }
        writeln!(out, "# median\t{}\t{}\t{}\t{:.3}", a.model, a.nodes, m, median(&mut walls))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    let result = match cli.command {
        Command::Count(a) => cmd_count(a),
        Command::Verify(a) => cmd_verify(a),
        Command::Embed(a) => cmd_embed(a),
        Command::Generate(a) => cmd_generate(a),
        Command::Bench(a) => cmd_bench(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
