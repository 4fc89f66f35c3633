use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use randreal::separability::Witness;
use randreal::{sample_embedding, sample_random_tree, Graph};

fn randreal(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_randreal")).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(code(&randreal(&["--help"])), 0);
    assert_eq!(code(&randreal(&["--version"])), 0);
    assert_eq!(code(&randreal(&["sweep", "--bogus"])), 1);
    assert_eq!(code(&randreal(&["sweep", "--d-grid", "5,3"])), 1);
    assert_eq!(code(&randreal(&["realize-tree", "--n", "5"])), 1);
    assert_eq!(code(&randreal(&["verify", "--graph", "/nonexistent/g", "--embedding", "/nonexistent/f", "--weights", "/nonexistent/w"])), 2);
}

#[test]
fn realize_then_verify_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let tree = sample_random_tree(10, 8).unwrap();
    let f = sample_embedding(10, 20_000, 0.0, 1.0, 9).unwrap();
    let g_path = dir.path().join("tree.txt");
    let f_path = dir.path().join("emb.txt");
    let w_path = dir.path().join("w.txt");
    let trace = dir.path().join("trace.csv");
    fs::write(&g_path, tree.graph().to_text()).unwrap();
    fs::write(&f_path, f.to_dump()).unwrap();
    let out = randreal(&[
        "realize-tree",
        "--graph", path_str(&g_path),
        "--embedding", path_str(&f_path),
        "--save-weights", path_str(&w_path),
        "--out", path_str(&trace),
    ]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    assert!(String::from_utf8_lossy(&out.stderr).contains("realized: true"));
    assert_eq!(fs::read_to_string(&trace).unwrap().lines().count(), 20_001);

    let out = randreal(&["verify", "--graph", path_str(&g_path), "--embedding", path_str(&f_path), "--weights", path_str(&w_path)]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = stdout.lines().collect();
    assert_eq!(lines[0], "max_edge_dist,min_nonedge_dist,separable,realized");
    assert!(lines[1].ends_with(",1,1"), "{}", lines[1]);

    // Mismatched sizes are a usage error.
    fs::write(&g_path, Graph::path(4).to_text()).unwrap();
    let out = randreal(&["verify", "--graph", path_str(&g_path), "--embedding", path_str(&f_path), "--weights", path_str(&w_path)]);
    assert_eq!(code(&out), 1);
}

#[test]
fn oracle_witness_replays() {
    let dir = tempfile::tempdir().unwrap();
    let g = Graph::cycle(5).unwrap();
    let f = sample_embedding(5, 12, 0.0, 1.0, 4).unwrap();
    let g_path = dir.path().join("g.txt");
    let f_path = dir.path().join("f.txt");
    fs::write(&g_path, g.to_text()).unwrap();
    fs::write(&f_path, f.to_dump()).unwrap();
    for mode in ["nonneg", "free"] {
        let out = randreal(&["oracle", "--graph", path_str(&g_path), "--embedding", path_str(&f_path), "--mode", mode]);
        assert_eq!(code(&out), 0);
        let text = String::from_utf8(out.stdout).unwrap();
        let mut lines = text.splitn(3, '\n');
        let status = lines.next().unwrap();
        assert_eq!(lines.next().unwrap(), format!("mode {mode}"));
        if status == "status feasible" {
            let w = Witness::parse(lines.next().unwrap()).unwrap();
            assert!(w.check(&g, &f));
        } else {
            assert_eq!(status, "status infeasible");
        }
    }
}

#[test]
fn sweep_writes_csv() {
    let out = randreal(&["sweep", "--n", "8", "--d-grid", "10,100", "--trials", "5", "--seed", "3"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    assert_eq!(rdr.headers().unwrap().get(0), Some("schema=1"));
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(&rows[1][3], "100");

    let out = randreal(&["radon", "--d", "2", "--m", "4", "--trials", "10"]);
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8(out.stdout).unwrap().contains("radon"));
}
