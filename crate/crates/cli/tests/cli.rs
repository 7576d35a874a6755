use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_maxmod")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn json(args: &[&str]) -> Value {
    let mut full = args.to_vec();
    full.extend(["--output", "json"]);
    let out = run(&full);
    assert!(out.status.success(), "{args:?} failed: {}", stderr(&out));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn solve_examples() {
    let two_k3 = data("two_k3.edges");
    let r = json(&["solve", "--method", "brute", path(&two_k3)]);
    assert_eq!(r["schema"], 1);
    assert_eq!(r["q"]["fraction"], "1/2");
    assert_eq!(r["q"]["decimal"], "0.500000000000");
    assert_eq!(r["rescored"], true);

    let r = json(&["solve", "--method", "tw", "--td", path(&data("c5.td")), path(&data("c5.edges"))]);
    assert_eq!(r["q"]["fraction"], "2/25");
    assert_eq!(r["counters"]["width"], 2);

    let r = json(&["solve", "--method", "tw-approx", "--epsilon", "0.5", path(&two_k3)]);
    assert_eq!(r["q"]["fraction"], "1/2");
    assert_eq!(r["counters"]["max_parts"], 2);
}

#[test]
fn all_methods_agree_and_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for graph in ["two_k3.edges", "c5.edges", "k4_subdivided.edges", "k4.edges"] {
        let g = data(graph);
        let mut numerators = Vec::new();
        for method in ["auto", "brute", "tw", "connsub", "vc"] {
            let r = json(&["solve", "--method", method, path(&g)]);
            numerators.push((r["q"]["numerator"].clone(), r["q"]["denominator"].clone()));

            let parts: Vec<String> = r["partition"]
                .as_array()
                .unwrap()
                .iter()
                .map(|p| p.as_array().unwrap().iter().map(|l| l.as_str().unwrap()).collect::<Vec<_>>().join(" "))
                .collect();
            let part_file = dir.path().join("p.part");
            fs::write(&part_file, parts.join("\n")).unwrap();
            let s = json(&["score", path(&g), part_file.to_str().unwrap()]);
            assert_eq!(s["q"]["numerator"], r["q"]["numerator"], "{graph} {method}");
        }
        assert!(numerators.windows(2).all(|w| w[0] == w[1]), "{graph}: {numerators:?}");
    }
}

#[test]
fn text_and_json_carry_the_same_value() {
    let g = data("c5.edges");
    let r = json(&["solve", "--method", "connsub", path(&g)]);
    let text = stdout(&run(&["solve", "--method", "connsub", path(&g)]));
    let expected = format!(
        "q = 2/25 = 0.080000000000 ({} / {})",
        r["q"]["numerator"].as_str().unwrap(),
        r["q"]["denominator"].as_str().unwrap()
    );
    assert!(text.contains(&expected), "{text}");
}

#[test]
fn max_parts() {
    let g = data("two_k3.edges");
    for method in ["brute", "tw"] {
        let r = json(&["solve", "--method", method, "--max-parts", "1", path(&g)]);
        assert_eq!(r["q"]["fraction"], "0");
        assert_eq!(r["parts"], 1);
    }
    let out = run(&["solve", "--method", "vc", "--max-parts", "2", path(&g)]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn auto_logs_its_choice() {
    let dir = tempfile::tempdir().unwrap();
    let star = dir.path().join("star.edges");
    let edges: String = (1..=15).map(|i| format!("0 {i}\n")).collect();
    fs::write(&star, edges).unwrap();
    let out = run(&["solve", star.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(stderr(&out).contains("auto: using vc (vertex cover 1 <= 8)"), "{}", stderr(&out));
    assert!(stdout(&out).contains("q = 0 "));

    let out = run(&["solve", path(&data("two_k3.edges"))]);
    assert!(stderr(&out).contains("auto: using brute"));
}

#[test]
fn score_examples() {
    let r = json(&["score", path(&data("two_k3.edges")), path(&data("two_k3.part"))]);
    assert_eq!(r["q"]["fraction"], "1/2");
    assert_eq!(r["coverage"]["fraction"], "1");
    assert_eq!(r["degree_tax"]["fraction"], "1/2");
    assert_eq!(r["deficit"]["fraction"], "1/2");

    let dir = tempfile::tempdir().unwrap();
    let k3 = dir.path().join("k3.edges");
    let trivial = dir.path().join("k3.part");
    fs::write(&k3, "a b\nb c\na c\n").unwrap();
    fs::write(&trivial, "a b c\n").unwrap();
    let r = json(&["score", k3.to_str().unwrap(), trivial.to_str().unwrap()]);
    assert_eq!(r["q"]["fraction"], "0");

    let out = run(&["score", path(&data("two_k3.edges")), path(&data("overlap.part"))]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("more than one part"));
}

#[test]
fn gadget_example_and_witness() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("k4");
    let r = json(&[
        "gadget",
        path(&data("k4_subdivided.edges")),
        "--anchors",
        "a1,a2,a3,a4",
        "--unsafe-alpha",
        "8",
        "--out",
        prefix.to_str().unwrap(),
        "--check-witness",
        path(&data("k4_witness.part")),
    ]);
    assert_eq!(r["m"], 72);
    assert_eq!(r["beta"], 24);
    assert_eq!(r["q0"]["fraction"], "167/216");
    assert_eq!(r["unsafe_alpha"], true);
    assert_eq!(r["witness"], "witness verified: q = q0 = 167/216");

    let meta = fs::read_to_string(dir.path().join("k4.meta")).unwrap();
    for line in ["alpha=8", "beta=24", "m=72", "q0_num=167", "q0_den=216", "unsafe=true", "anchors=a1 a2 a3 a4"] {
        assert!(meta.lines().any(|l| l == line), "missing {line} in\n{meta}");
    }
    let edges = dir.path().join("k4.edges");
    let stats = json(&["stats", edges.to_str().unwrap()]);
    assert_eq!(stats["m"], 72);
    assert_eq!(stats["n"], 92);
}

#[test]
fn gadget_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("x");
    let g = data("k4_subdivided.edges");
    let out = run(&["gadget", path(&g), "--anchors", "a1,a2,a3", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stderr(&out).contains("condition 4"), "{}", stderr(&out));

    let out = run(&["gadget", path(&g), "--anchors", "a1,a2,a3,a4", "--unsafe-alpha", "7", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));

    // The default alpha gives a gadget with about 39 million vertices.
    let out = run(&["gadget", path(&g), "--anchors", "a1,a2,a3,a4", "--out", prefix.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(stderr(&out).contains("--metadata-only"));

    let r = json(&["gadget", path(&g), "--anchors", "a1,a2,a3,a4", "--metadata-only", "--out", prefix.to_str().unwrap()]);
    assert_eq!(r["alpha"], 6272);
    assert_eq!(r["unsafe_alpha"], false);
    assert!(!dir.path().join("x.edges").exists());
}

#[test]
fn stats_decompose_validate() {
    let r = json(&["stats", path(&data("k4.edges"))]);
    assert_eq!(r["vertex_cover"], 3);
    assert_eq!(r["width"], 3);
    assert_eq!(r["connected_subgraphs"], 15);

    let td = stdout(&run(&["decompose", path(&data("path.edges"))]));
    assert!(td.starts_with("s td "));
    let dir = tempfile::tempdir().unwrap();
    let td_file = dir.path().join("p.td");
    fs::write(&td_file, &td).unwrap();
    let r = json(&["validate-td", path(&data("path.edges")), td_file.to_str().unwrap()]);
    assert_eq!(r["valid"], true);
    assert_eq!(r["width"], 1);

    let out = run(&["validate-td", path(&data("path.edges")), path(&data("path_uncovered.td"))]);
    assert_eq!(out.status.code(), Some(4));
    assert!(stdout(&out).contains("edge `b`-`c` is in no bag"));
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.edges");
    fs::write(&bad, "1 2 3\n").unwrap();
    assert_eq!(run(&["solve", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["solve", "/nonexistent/graph"]).status.code(), Some(2));

    let g = data("k4_subdivided.edges");
    let out = run(&["solve", "--method", "tw", "--cap-states", "3", path(&g)]);
    assert_eq!(out.status.code(), Some(3), "{}", stderr(&out));
    let out = run(&["solve", "--method", "connsub", "--cap-subgraphs", "10", path(&g)]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn edgeless_graph_reports_one() {
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("empty.edges");
    fs::write(&g, "v a\nv b\n").unwrap();
    let r = json(&["solve", g.to_str().unwrap()]);
    assert_eq!(r["q"]["fraction"], "1");
    assert_eq!(r["parts"], 2);
    assert!(r["warnings"][0].as_str().unwrap().contains("edgeless"));
}

#[test]
fn generated_graphs_are_reproducible() {
    let a = stdout(&run(&["gen", "--n", "12", "--p", "0.3", "--seed", "5"]));
    let b = stdout(&run(&["gen", "--n", "12", "--p", "0.3", "--seed", "5"]));
    assert_eq!(a, b);
    let dir = tempfile::tempdir().unwrap();
    let g = dir.path().join("g.edges");
    fs::write(&g, &a).unwrap();
    let r = json(&["stats", g.to_str().unwrap()]);
    assert_eq!(r["n"], 12);
}
