use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nodetopo::{DistanceMatrix, PersistenceDiagram};

fn run(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nodetopo"))
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str], dir: &Path) -> String {
    let out = run(args, dir);
    assert!(
        out.status.success(),
        "{:?} failed: {}",
        args,
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) {
    fs::write(dir.join(name), text).unwrap();
}

#[test]
fn ingest_diagram_dist_project_chain() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "path.txt", "#n 4\n0 1\n1 2\n2 3\n");
    write(d, "star.txt", "0 1\n0 2\n0 3\n0 4\n");
    write(d, "tri.off", "OFF\n3 1 0\n0 0 0\n1 0 0\n0 1 0\n3 0 1 2\n");

    let canon = ok(&["ingest", "path.txt"], d);
    assert!(canon.starts_with("#n 4\n0 1 1.0000000000000000e0\n"));
    assert_eq!(ok(&["ingest", "tri.off"], d).lines().count(), 4);

    write(d, "field.csv", "vertex,value\n0,0\n1,2\n2,1\n3,3\n");
    ok(&["diagram", "path.txt", "--field", "field.csv", "--filtration", "filt.txt", "-o", "path.json"], d);
    let dg = PersistenceDiagram::from_json(&fs::read_to_string(d.join("path.json")).unwrap()).unwrap();
    assert_eq!(dg.canonical().finite, vec![(1.0, 2.0), (2.0, 2.0), (3.0, 3.0)]);
    assert_eq!(dg.essential, vec![0.0]);
    let filt = fs::read_to_string(d.join("filt.txt")).unwrap();
    assert!(filt.starts_with("V 0 "));
    assert_eq!(filt.lines().count(), 7);

    ok(&["diagram", "star.txt", "-o", "star.json"], d);
    ok(&["diagram", "star.txt", "--node", "1", "--k", "1", "--finitize", "drop", "-o", "ego.json"], d);
    let ego = PersistenceDiagram::from_json(&fs::read_to_string(d.join("ego.json")).unwrap()).unwrap();
    assert!(ego.is_finite());

    let csv = ok(&["dist", "path.json", "star.json", "ego.json", "--q", "2", "--finitize", "cap"], d);
    let m = DistanceMatrix::from_csv(&csv).unwrap();
    assert_eq!(m.labels, vec!["path", "star", "ego"]);
    m.validate().unwrap();
    write(d, "d.csv", &csv);

    let proj = ok(&["project", "d.csv"], d);
    assert_eq!(proj.lines().next(), Some("label,x0,x1"));
    assert_eq!(proj.lines().count(), 4);

    for scheme in ["betti", "landscape", "image"] {
        let rows = ok(&["vectorize", "path.json", "star.json", "--scheme", scheme, "--resolution", "8"], d);
        let rows: Vec<&str> = rows.lines().collect();
        assert_eq!(rows.len(), 2);
        assert!(rows[0].starts_with(&format!("path,{},", scheme)));
        assert_eq!(rows[0].split(',').count(), rows[1].split(',').count());
    }
}

#[test]
fn embed_and_stability() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "g.txt", "0 1\n1 2\n2 3\n3 0\n0 2\n");
    let args = ["embed", "g.txt", "--encoder", "node2vec", "--seed", "5", "--walks-per-node", "3"];
    let a = ok(&[&args[..], &["--corpus", "walks.txt"]].concat(), d);
    assert_eq!(a, ok(&args, d));
    assert_eq!(a.lines().count(), 5);
    assert_eq!(fs::read_to_string(d.join("walks.txt")).unwrap().lines().count(), 12);

    let stats = ok(
        &["stability", "g.txt", "--encoder", "deepwalk", "--runs", "3", "--walks-per-node", "2"],
        d,
    );
    let v: serde_json::Value = serde_json::from_str(&stats).unwrap();
    assert_eq!(v["runs"], 3);
    assert_eq!(v["pairs"], 3);
    assert!(v["diagram_max"].as_f64().unwrap() <= v["field_max"].as_f64().unwrap() + 1e-9);
}

#[test]
fn run_is_reproducible() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "a.txt", "0 1\n1 2\n2 0\n2 3\n");
    write(d, "b.txt", "0 1\n1 2\n");
    write(
        d,
        "exp.spec",
        "input = a a.txt\ninput = b b.txt\nencoder = deepwalk\nwalk.walks_per_node = 2\nseeds = 1, 2\noutput = out\n",
    );
    let first = ok(&["run", "exp.spec"], d);
    let diagrams = fs::read_to_string(d.join("out/diagrams.json")).unwrap();
    let second = ok(&["run", "exp.spec"], d);
    assert_eq!(first, second);
    assert_eq!(diagrams, fs::read_to_string(d.join("out/diagrams.json")).unwrap());
    for f in ["distances.csv", "projection.csv", "stats.json", "manifest.json"] {
        assert!(d.join("out").join(f).exists(), "{}", f);
    }
}

#[test]
fn run_checksum_survives_relocation() {
    let spec = "input = a a.txt\ninput = gone missing.txt\nseeds = 3\n";
    let mut sums = Vec::new();
    for _ in 0..2 {
        let tmp = tempfile::tempdir().unwrap();
        let d = tmp.path();
        write(d, "a.txt", "0 1\n1 2\n");
        write(d, "exp.spec", spec);
        let spec_path = d.join("exp.spec");
        sums.push(ok(&["run", spec_path.to_str().unwrap()], Path::new("/")));
    }
    assert_eq!(sums[0], sums[1]);
}

#[test]
fn exit_codes() {
    let tmp = tempfile::tempdir().unwrap();
    let d = tmp.path();
    write(d, "loop.txt", "0 0\n");
    write(d, "neg.txt", "0 1 -1\n");
    write(d, "quad.off", "OFF\n4 1 0\n0 0 0\n1 0 0\n1 1 0\n0 1 0\n4 0 1 2 3\n");
    write(d, "x.json", "{\"finite\": [[0, 1]], \"essential\": [], \"f_max\": 1}");
    write(d, "inf.json", "{\"finite\": [], \"essential\": [0], \"f_max\": 0}");

    let code = |args: &[&str]| run(args, d).status.code();
    assert_eq!(code(&["ingest", "loop.txt"]), Some(1));
    assert_eq!(code(&["ingest", "neg.txt"]), Some(1));
    assert_eq!(code(&["ingest", "quad.off"]), Some(1));
    assert_eq!(code(&["ingest", "missing.txt"]), Some(1));
    assert_eq!(code(&["dist", "x.json", "--q", "0.5"]), Some(2));
    assert_eq!(code(&["dist", "x.json", "--q", "2"]), Some(0));
    assert_eq!(code(&["run", "missing.spec"]), Some(1));
    assert_eq!(code(&["vectorize", "x.json", "--scheme", "silhouette"]), Some(1));
    assert_eq!(code(&["frobnicate"]), Some(1));
    assert_eq!(code(&["--help"]), Some(0));

    // essential points are removed before measuring
    let out = run(&["dist", "x.json", "inf.json", "--finitize", "drop"], d);
    assert_eq!(out.status.code(), Some(0));
}
