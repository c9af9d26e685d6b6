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

use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use orbitadj::embed::{deepwalk_pmi, gopmi};
use orbitadj::manifest::Manifest;
use orbitadj::{parse_edge_list, CountMatrix, OrbitKey};

const H: &str = "a b\nb c\nb e\nc d\nd e\n";

fn run(args: &[&str], paths: &[&Path]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_orbitadj"));
    cmd.args(args);
    for p in paths {
        cmd.arg(p);
    }
    cmd.output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn h_file(dir: &Path) -> PathBuf {
    let p = dir.join("h.txt");
    fs::write(&p, H).unwrap();
    p
}

fn read_matrix(p: &Path) -> (CountMatrix, Option<OrbitKey>) {
    CountMatrix::read_triplets(std::io::BufReader::new(fs::File::open(p).unwrap())).unwrap()
}

#[test]
fn count_writes_selected_keys_labels_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let input = h_file(dir.path());
    let out = dir.path().join("out");
    let o = run(&["count", "--matrices", "o1-2,o9..o10", "--input"], &[&input]);
    assert_eq!(code(&o), 1, "missing --out is a usage error");
    let o = Command::new(env!("CARGO_BIN_EXE_orbitadj"))
        .args(["count", "--matrices", "o1-2,o9..o10", "--gdv", "--input"])
        .arg(&input)
        .arg("--out")
        .arg(&out)
        .output()
        .unwrap();
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    assert_eq!(names, ["gdv.tsv", "labels.tsv", "manifest.tsv", "o1-o2-h1.tsv", "o9-o10-h2.tsv"]);
    let (m, key) = read_matrix(&out.join("o1-o2-h1.tsv"));
    assert_eq!(key, Some("o1-o2".parse().unwrap()));
    assert_eq!(m.get(0, 1), 2);
    let labels = fs::read_to_string(out.join("labels.tsv")).unwrap();
    assert_eq!(labels, "0\ta\n1\tb\n2\tc\n3\te\n4\td\n");
    let manifest = Manifest::read_from(fs::read(out.join("manifest.tsv")).unwrap().as_slice()).unwrap();
    assert_eq!(manifest.get("command"), Some("count"));
    assert_eq!(manifest.get("consistency_residual"), Some("0"));
    assert_eq!(manifest.get("nnz o1-o2-h1"), Some("9"));
    assert!(manifest.get("wall_time_s").is_some());
    let gdv = fs::read_to_string(out.join("gdv.tsv")).unwrap();
    assert!(gdv.starts_with("a\t1\t2\t0\t0\t2\t0\t1\t0"), "{gdv}");
}

#[test]
fn count_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    fs::write(&empty, "# nothing\n").unwrap();
    let out = dir.path().join("out");
    assert_eq!(code(&run(&["count", "--input"], &[&empty, Path::new("--out"), &out])), 1);
    let bad = dir.path().join("bad.txt");
    fs::write(&bad, "a b c\n").unwrap();
    let o = run(&["count", "--input"], &[&bad, Path::new("--out"), &out]);
    assert_eq!(code(&o), 1);
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
    let input = h_file(dir.path());
    let o = run(&["count", "--matrices", "o4--o4", "--input"], &[&input, Path::new("--out"), &out]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["count", "--input"], &[Path::new("/nonexistent"), Path::new("--out"), &out])), 1);
}

#[test]
fn verify_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let input = h_file(dir.path());
    let o = run(&["verify", "--input"], &[&input]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stdout));
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert_eq!(stdout.lines().count(), 7);
    assert!(stdout.lines().all(|l| l.starts_with("ok\t")));

    let o = run(&["verify", "--cap", "4", "--input"], &[&input]);
    assert_eq!(code(&o), 3);

    let o = run(&["verify", "--inject", "o9..o10,a,d", "--input"], &[&input]);
    assert_eq!(code(&o), 2);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("o9-o10-h2 at (a, d)"), "{err}");
}

#[test]
fn embed_identity_and_errors() {
    let dir = tempfile::tempdir().unwrap();
    let input = h_file(dir.path());
    let go = dir.path().join("go.tsv");
    let rw = dir.path().join("rw.tsv");
    let dw = dir.path().join("dw.tsv");
    let args = |pmi: &str, flag: &str, v: &str| -> Vec<String> {
        ["embed", "--pmi", pmi, flag, v, "--dim", "2"].iter().map(|s| s.to_string()).collect()
    };
    for (a, out) in [
        (args("gopmi", "--key", "o0-o0"), &go),
        (args("rwpmi", "--power", "1"), &rw),
        (args("deepwalk", "--T", "3"), &dw),
    ] {
        let o = Command::new(env!("CARGO_BIN_EXE_orbitadj"))
            .args(&a)
            .arg("--input")
            .arg(&input)
            .arg("--out")
            .arg(out)
            .output()
            .unwrap();
        assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    }
    assert_eq!(fs::read(&go).unwrap(), fs::read(&rw).unwrap());
    let text = fs::read_to_string(&go).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().all(|l| l.split('\t').count() == 3));
    let manifest = fs::read_to_string(dir.path().join("dw.tsv.manifest")).unwrap();
    assert!(manifest.contains("pmi\tdeepwalk 3"));

    let o = run(&["embed", "--pmi", "gopmi", "--key", "o99-0", "--dim", "2", "--input"], &[&input, Path::new("--out"), &go]);
    assert_eq!(code(&o), 1);
    let o = run(&["embed", "--pmi", "gopmi", "--dim", "2", "--input"], &[&input, Path::new("--out"), &go]);
    assert_eq!(code(&o), 1);
}

#[test]
fn embedding_file_values_match_library() {
    let dir = tempfile::tempdir().unwrap();
    let input = h_file(dir.path());
    let out = dir.path().join("e.tsv");
    let o = run(&["embed", "--pmi", "deepwalk", "--T", "1", "--dim", "2", "--input"], &[&input, Path::new("--out"), &out]);
    assert_eq!(code(&o), 0);
    let g = parse_edge_list(H.as_bytes()).unwrap().0;
    let pmi = gopmi::<f64>(&CountMatrix::adjacency(&g), None, 1.0).unwrap();
    let dw = deepwalk_pmi::<f64>(&g, 1, 1.0).unwrap();
    let lib = orbitadj::embed::embed(&pmi, 2).unwrap();
    let lib_dw = orbitadj::embed::embed(&dw, 2).unwrap();
    for (i, line) in fs::read_to_string(&out).unwrap().lines().enumerate() {
        let mut parts = line.split('\t');
        assert_eq!(parts.next(), Some(g.label(i)));
        for (c, v) in parts.enumerate() {
            let v: f64 = v.parse().unwrap();
            assert_eq!(v, lib_dw.row(i)[c]);
            assert!((v - lib.row(i)[c]).abs() < 1e-12);
        }
    }
}

#[test]
fn generate_and_bench() {
    let o = run(&["generate", "--model", "er", "--nodes", "5", "--edges", "10"], &[]);
    assert_eq!(code(&o), 0);
    let (g, w) = parse_edge_list(o.stdout.as_slice()).unwrap();
    assert!(w.is_clean());
    assert_eq!((g.n(), g.m()), (5, 10));
    let again = run(&["generate", "--model", "er", "--nodes", "5", "--edges", "10"], &[]);
    assert_eq!(o.stdout, again.stdout);

    let o = run(&["bench", "--model", "ba", "--nodes", "200", "--edges", "400,800", "--seeds", "2"], &[]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let table = String::from_utf8(o.stdout).unwrap();
    let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows.len(), 5);
    assert_eq!(rows[0].split('\t').count(), 10);
    assert!(rows[1..].iter().all(|r| r.ends_with("\t0")));
    assert_eq!(table.lines().filter(|l| l.starts_with("# median")).count(), 2);

    let o = run(&["bench", "--model", "er", "--nodes", "20", "--edges", "30", "--seeds", "0"], &[]);
    assert_eq!(code(&o), 1);
    assert_eq!(code(&run(&["frobnicate"], &[])), 1);
    assert_eq!(code(&run(&["--help"], &[])), 0);
}

#[test]
fn library_facade_matches_triplet_files() {
    let er = orbitadj::netgen::generate(orbitadj::netgen::GenSpec::new(orbitadj::netgen::Model::ErdosRenyi, 200, 1000, 7))
        .unwrap()
        .to_edge_list();
    for text in [H.to_string(), er] {
        let dir = tempfile::tempdir().unwrap();
        let input = dir.path().join("g.txt");
        fs::write(&input, &text).unwrap();
        let out = dir.path().join("out");
        let o = run(&["count", "--threads", "2", "--input"], &[&input, Path::new("--out"), &out]);
        assert_eq!(code(&o), 0);
        let pairs: Vec<(String, String)> = text
            .lines()
            .map(|l| {
                let mut t = l.split_whitespace();
                (t.next().unwrap().to_string(), t.next().unwrap().to_string())
            })
            .collect();
        let result = orbitadj::api::count(&pairs, 1).unwrap();
        let labels: String = result.labels.iter().enumerate().map(|(i, l)| format!("{i}\t{l}\n")).collect();
        assert_eq!(labels, fs::read_to_string(out.join("labels.tsv")).unwrap());
        assert_eq!(result.matrices.len(), 28);
        for (key, m) in &result.matrices {
            let (file, k) = read_matrix(&out.join(format!("{key}.tsv")));
            assert_eq!(k.unwrap().to_string(), *key);
            assert_eq!(&file, m, "{key}");
            let mut buf = Vec::new();
            m.write_triplets(Some(key.parse().unwrap()), &mut buf).unwrap();
            assert_eq!(buf, fs::read(out.join(format!("{key}.tsv"))).unwrap(), "{key}");
        }
    }
}
