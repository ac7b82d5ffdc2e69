use std::path::Path;
use std::process::{Command, Output};

const F4: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/data/f4.json");

fn mscut(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mscut")).args(args).output().unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_writes_loadable_floorplan() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let o = mscut(&["gen", "--blocks", "12", "--nets", "20", "--seed", "3", "--out", path(&out)]);
    assert!(o.status.success());
    let fp = mscut::floorplan::load_floorplan(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((fp.blocks().len(), fp.nets().len()), (12, 20));

    let o = mscut(&["gen", "--blocks", "12", "--nets", "20", "--seed", "3"]);
    assert_eq!(String::from_utf8(o.stdout).unwrap(), std::fs::read_to_string(&out).unwrap());
}

#[test]
fn sweep_writes_reports() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out");
    let o = mscut(&["sweep", "--input", F4, "--out", path(&out), "--gammas", "0.4", "--betas", "0.1,0.3"]);
    assert_eq!(o.status.code(), Some(0));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert_eq!(csv.lines().count(), 1 + 6);
    assert!(csv.lines().next().unwrap().contains("crossed_bends"));
    let json: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(out.join("report.json")).unwrap()).unwrap();
    assert!(json.is_object());
    assert!(out.join("f4_0.svg").exists());
}

#[test]
fn sweep_row_failure_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    let missing = dir.path().join("missing.json");
    let text = serde_json::json!({
        "inputs": [
            { "kind": "json", "name": "f4", "path": F4 },
            { "kind": "json", "name": "gone", "path": missing },
        ],
        "gamma_grid": [0.4],
        "beta_grid": [0.3],
        "svg": false,
    });
    std::fs::write(&cfg, text.to_string()).unwrap();
    let out = dir.path().join("out");
    let o = mscut(&["sweep", "--config", path(&cfg), "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(2));
    let csv = std::fs::read_to_string(out.join("report.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("gone,") && !l.ends_with(',')));
    assert!(csv.lines().any(|l| l.starts_with("f4,") && l.ends_with(',')));
}

#[test]
fn bad_arguments_exit_nonzero() {
    assert_eq!(mscut(&["sweep"]).status.code(), Some(1));
    assert_eq!(mscut(&["render", "--input", F4, "--out", "/dev/null", "--gamma", "2"]).status.code(), Some(1));
    assert!(!mscut(&["frobnicate"]).status.success());
}

#[test]
fn render_tree_and_root() {
    let dir = tempfile::tempdir().unwrap();
    let tree = dir.path().join("t.svg");
    let root = dir.path().join("r.svg");
    assert!(mscut(&["render", "--input", F4, "--out", path(&tree)]).status.success());
    assert!(mscut(&["render", "--input", F4, "--out", path(&root), "--root-only"]).status.success());
    let tree = std::fs::read_to_string(tree).unwrap();
    let root = std::fs::read_to_string(root).unwrap();
    assert!(tree.starts_with("<svg") || tree.starts_with("<?xml"));
    assert_eq!(root.matches("<rect").count(), tree.matches("<rect").count());
    assert!(root.matches("<polyline").count() < tree.matches("<polyline").count());
}

#[test]
fn bench_prints_csv() {
    let o = mscut(&["bench", "--input", F4, "--modes", "BFS,RAND"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "circuit,n,k,mode,seconds");
    assert!(lines[1].starts_with("f4,4,2,BFS,"));
    assert!(lines[2].starts_with("f4,4,2,RAND,"));
    assert_eq!(lines[3], "normalized geomean,,,BFS,1.0");
    assert_eq!(lines.len(), 5);
}

#[test]
fn oracle_reports_and_writes_dot() {
    let dir = tempfile::tempdir().unwrap();
    let dot = dir.path().join("h.dot");
    let o = mscut(&["oracle", "--input", F4, "--dot", path(&dot)]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert!(text.contains("oracle best: {A,B} gain 0.850000"));
    assert_eq!(text.matches("chains valid: true").count(), 3);
    assert!(std::fs::read_to_string(dot).unwrap().starts_with("digraph"));
}
