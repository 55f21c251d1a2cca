use fatdecomp::corpus::expand;
use fatdecomp::graph::io::write_edge_list;
use fatdecomp::Graph;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_fatdecomp"));
    c.env_remove("FATDECOMP_BUDGET");
    c
}

fn run(c: &mut Command) -> (i32, String, String) {
    let Output { status, stdout, stderr } = c.output().unwrap();
    (
        status.code().unwrap(),
        String::from_utf8(stdout).unwrap(),
        String::from_utf8(stderr).unwrap(),
    )
}

fn write_graph(dir: &Path, name: &str, g: &Graph) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, write_edge_list(g)).unwrap();
    p
}

fn generated(spec: &str) -> Graph {
    expand(spec).unwrap().remove(0).graph
}

/// Hub `0` with three spokes of `len` edges ending on a cycle of length
/// `3 * gap`.
fn hub_spokes(len: usize, gap: usize) -> Graph {
    let mut g = Graph::empty(1);
    let cyc: Vec<usize> = (0..3 * gap).map(|_| g.add_vertex()).collect();
    for i in 0..cyc.len() {
        g.add_edge(cyc[i], cyc[(i + 1) % cyc.len()]).unwrap();
    }
    for e in [cyc[0], cyc[gap], cyc[2 * gap]] {
        let mut prev = 0;
        for _ in 1..len {
            let x = g.add_vertex();
            g.add_edge(prev, x).unwrap();
            prev = x;
        }
        g.add_edge(prev, e).unwrap();
    }
    g
}

#[test]
fn path_decomposes_and_round_trips() {
    let dir = TempDir::new().unwrap();
    let input = write_graph(dir.path(), "path.txt", &Graph::path_graph(100));
    let out = dir.path().join("out");
    let (code, _, err) = run(bin()
        .args(["decompose", "--target", "k4minus", "--fat", "1", "--out"])
        .arg(&out)
        .arg(&input));
    assert_eq!(code, 0, "{err}");
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert_eq!(report["branch"], "decomposition");
    assert!(report["metrics"]["orw"].as_u64().unwrap() <= 43);
    assert!(report["metrics"]["irs"].as_u64().unwrap() <= 31);
    let dec = out.join("decomposition.txt");
    let (code, msg, _) = run(bin()
        .args(["verify", "--kind", "decomposition", "--target", "k4minus", "--fat", "1"])
        .arg(&input)
        .arg(&dec));
    assert_eq!(code, 0, "{msg}");
    let (code, msg, _) = run(bin()
        .args(["verify", "--kind", "qi", "--decomposition"])
        .arg(&dec)
        .arg(&input)
        .arg(out.join("qi.txt")));
    assert_eq!(code, 0, "{msg}");
}

#[test]
fn trap_gives_a_witness_that_verifies() {
    let dir = TempDir::new().unwrap();
    let input = write_graph(dir.path(), "trap.txt", &generated("trap4m:60"));
    let out = dir.path().join("out");
    let (code, _, err) = run(bin().args(["decompose", "--target", "k4minus", "--out"]).arg(&out).arg(&input));
    assert_eq!(code, 10, "{err}");
    let (code, msg, _) = run(bin()
        .args(["verify", "--kind", "model", "--target", "k4minus", "--fat", "1"])
        .arg(&input)
        .arg(out.join("witness.txt")));
    assert_eq!(code, 0, "{msg}");
    // The same witness is not 100-fat.
    let (code, msg, _) = run(bin()
        .args(["verify", "--kind", "model", "--fat", "100"])
        .arg(&input)
        .arg(out.join("witness.txt")));
    assert_eq!(code, 1, "{msg}");
    // Nor is it a model of K4.
    let (code, _, _) = run(bin()
        .args(["verify", "--kind", "model", "--target", "k4"])
        .arg(&input)
        .arg(out.join("witness.txt")));
    assert_eq!(code, 1);
}

#[test]
fn malformed_input_exits_2_with_a_line_number() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("bad.txt");
    std::fs::write(&p, "0 1\n1 two\n").unwrap();
    let (code, _, err) = run(bin().arg("decompose").arg(&p));
    assert_eq!(code, 2);
    assert!(err.contains("line 2"), "{err}");
    let (code, _, _) = run(bin().arg("decompose").arg(dir.path().join("missing.txt")));
    assert_eq!(code, 2);
    let (code, _, _) = run(bin().args(["decompose", "--fat", "0"]).arg(write_graph(dir.path(), "g", &Graph::path_graph(3))));
    assert_eq!(code, 2);
}

#[test]
fn deleting_a_bag_vertex_is_caught() {
    let dir = TempDir::new().unwrap();
    let input = write_graph(dir.path(), "c.txt", &Graph::cycle_graph(200));
    let out = dir.path().join("out");
    let (code, _, _) = run(bin().args(["decompose", "--target", "k4minus", "--out"]).arg(&out).arg(&input));
    assert_eq!(code, 0);
    let text = std::fs::read_to_string(out.join("decomposition.txt")).unwrap();
    // Drop vertex 0 from every bag that holds it.
    let mutated: String = text
        .lines()
        .map(|l| match l.split_once(':') {
            Some((head, tail)) if head.starts_with("bag") => {
                let kept: Vec<&str> = tail.split_whitespace().filter(|&v| v != "0").collect();
                format!("{head}: {}\n", kept.join(" "))
            }
            _ => format!("{l}\n"),
        })
        .collect();
    assert_ne!(mutated, text);
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, mutated).unwrap();
    let (code, msg, _) = run(bin().args(["verify", "--kind", "decomposition"]).arg(&input).arg(&bad));
    assert_eq!(code, 1);
    assert!(msg.contains("covering"), "{msg}");
}

#[test]
fn shrinking_the_additive_constant_breaks_the_quasi_isometry() {
    let dir = TempDir::new().unwrap();
    let input = write_graph(dir.path(), "c.txt", &Graph::cycle_graph(200));
    let out = dir.path().join("out");
    run(bin().args(["decompose", "--target", "k4minus", "--out"]).arg(&out).arg(&input));
    let dec = out.join("decomposition.txt");
    let qi = std::fs::read_to_string(out.join("qi.txt")).unwrap();
    let (header, rest) = qi.split_once('\n').unwrap();
    let (m, a) = header.split_once(' ').unwrap();
    let mut failed = None;
    for a in (0..a.parse::<i64>().unwrap()).rev() {
        let p = dir.path().join("qi.txt");
        std::fs::write(&p, format!("{m} {a}\n{rest}")).unwrap();
        let (code, msg, _) = run(bin().args(["verify", "--kind", "qi", "--decomposition"]).arg(&dec).arg(&input).arg(&p));
        if code != 0 {
            assert_eq!(code, 1);
            failed = Some(msg);
            break;
        }
    }
    let msg = failed.expect("some A is too small");
    assert!(msg.contains("nodes") || msg.contains("vertex"), "{msg}");
}

#[test]
fn kind_mismatch_exits_2() {
    let dir = TempDir::new().unwrap();
    let input = write_graph(dir.path(), "trap.txt", &generated("trap4m:60"));
    let out = dir.path().join("out");
    run(bin().args(["decompose", "--target", "k4minus", "--out"]).arg(&out).arg(&input));
    let (code, _, _) = run(bin().args(["verify", "--kind", "decomposition"]).arg(&input).arg(out.join("witness.txt")));
    assert_eq!(code, 2);
    let (code, _, _) = run(bin().args(["verify", "--kind", "qi"]).arg(&input).arg(out.join("witness.txt")));
    assert_eq!(code, 2);
}

#[test]
fn json_envelope_and_digest() {
    let dir = TempDir::new().unwrap();
    let p = dir.path().join("g.txt");
    std::fs::write(&p, "0 1\n1 2\n").unwrap();
    let (code, out, _) = run(bin().args(["decompose", "--json"]).arg(&p));
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(
        v["report"]["input_digest"],
        "8ba65ee1bbe8297e30cab4c5fc9b62a8caa0dbe7b89298edf1da2609beb24ae1"
    );
    assert_eq!(v["report"]["target"], "k4");
    assert_eq!(v["report"]["bounds"][0], 25306);
    assert_eq!(v["certificate"]["kind"], "decomposition");
    assert!(v["certificate"]["text"].as_str().unwrap().starts_with("nodes 1"));
}

#[test]
fn outputs_are_deterministic() {
    let dir = TempDir::new().unwrap();
    let input = write_graph(dir.path(), "g.txt", &generated("grid:8x8"));
    let a = run(bin().args(["decompose", "--target", "k4minus"]).arg(&input)).1;
    let b = run(bin().args(["decompose", "--target", "k4minus"]).arg(&input)).1;
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn scaled_k4_runs_reach_both_branches() {
    let dir = TempDir::new().unwrap();
    let spokes = write_graph(dir.path(), "spokes.txt", &hub_spokes(1450, 700));
    let out = dir.path().join("w");
    let (code, _, err) = run(bin().args(["decompose", "--scaled-constants", "4", "--out"]).arg(&out).arg(&spokes));
    assert_eq!(code, 10, "{err}");
    let (code, msg, _) = run(bin()
        .args(["verify", "--kind", "model", "--target", "k4", "--fat", "1"])
        .arg(&spokes)
        .arg(out.join("witness.txt")));
    assert_eq!(code, 0, "{msg}");

    let cycle = write_graph(dir.path(), "cycle.txt", &Graph::cycle_graph(4500));
    let out = dir.path().join("d");
    let (code, _, err) = run(bin().args(["decompose", "--scaled-constants", "4", "--out"]).arg(&out).arg(&cycle));
    assert_eq!(code, 0, "{err}");
    let (code, msg, _) = run(bin()
        .args(["verify", "--kind", "decomposition", "--target", "k4", "--fat", "1", "--scaled-constants", "4"])
        .arg(&cycle)
        .arg(out.join("decomposition.txt")));
    assert_eq!(code, 0, "{msg}");

    // A budget of zero from the environment stops the same run.
    let (code, _, err) = run(bin()
        .env("FATDECOMP_BUDGET", "0")
        .args(["decompose", "--scaled-constants", "4"])
        .arg(&cycle));
    assert_eq!(code, 20, "{err}");
    assert!(err.contains("budget"));
    // Scaled constants below 4, or for the K4- target, are refused.
    let (code, _, _) = run(bin().args(["decompose", "--scaled-constants", "3"]).arg(&cycle));
    assert_eq!(code, 2);
    let (code, _, _) = run(bin().args(["decompose", "--target", "k4minus", "--scaled-constants", "4"]).arg(&cycle));
    assert_eq!(code, 2);
}

#[test]
fn corpus_command() {
    let (code, out, _) = run(bin().args(["corpus", "path:40;cycle:60;trap4m:60", "--fat", "1..2"]));
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 3 * 2 * 2);
    assert!(out.lines().all(|l| l.contains("verified=true")));

    let (code, out, _) = run(bin().args(["corpus", "empty"]));
    assert_eq!(code, 0);
    assert!(out.is_empty());

    let (code, out, _) = run(bin().args(["corpus", "cycle:10", "--json", "--target", "k4"]));
    assert_eq!(code, 0);
    let row: serde_json::Value = serde_json::from_str(out.trim()).unwrap();
    assert_eq!(row["verified"], true);
    assert_eq!(row["branch"], "decomposition");

    let budget = ["corpus", "cycle:4500", "--target", "k4", "--scaled-constants", "4", "--budget", "0"];
    let (code, out, _) = run(bin().args(budget));
    assert_eq!(code, 20);
    assert!(out.contains("budget-error"));
    let (code, _, _) = run(bin().args(budget).arg("--allow-budget-errors"));
    assert_eq!(code, 0);

    let (code, _, _) = run(bin().args(["corpus", "nonsense:3"]));
    assert_eq!(code, 2);
}
