use std::path::Path;
use std::process::{Command, Output};

use g2braid::qscalar::QScalar;
use g2braid::repbuilder::{RepSet, Young, G2};
use g2braid::verifier::{fingerprint, fingerprint_difference};
use serde_json::Value;

fn g2braid(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_g2braid"))
        .args(args)
        .env_remove("G2BRAID_WORKERS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn node_mult(v: &Value, level: u64, label: [u64; 2]) -> Option<u64> {
    v["levels"].as_array()?.iter().find(|l| l["level"] == level)?["nodes"]
        .as_array()?
        .iter()
        .find(|n| n["label"] == serde_json::json!(label))?["mult"]
        .as_u64()
}

#[test]
fn bratteli_json_level_three() {
    let o = g2braid(&["bratteli", "--instance", "g2", "--levels", "3", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(node_mult(&v, 3, [1, 0]), Some(4));
    assert_eq!(node_mult(&v, 3, [0, 1]), Some(2));
    assert_eq!(node_mult(&v, 3, [3, 0]), Some(1));
}

#[test]
fn bratteli_level_zero_is_one_node() {
    let o = g2braid(&["bratteli", "--levels", "0"]);
    assert_eq!(code(&o), 0);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["levels"].as_array().unwrap().len(), 1);
    assert_eq!(v["levels"][0]["nodes"].as_array().unwrap().len(), 1);
    assert_eq!(v["edges"].as_array().unwrap().len(), 0);
}

#[test]
fn bratteli_young_dot_has_five_partitions_of_four() {
    let o = g2braid(&["bratteli", "--instance", "young", "--levels", "4", "--format", "dot"]);
    assert_eq!(code(&o), 0);
    let dot = stdout(&o);
    assert!(dot.starts_with("digraph"));
    let level4 = dot.lines().find(|l| l.contains("@4\" [")).unwrap();
    assert_eq!(level4.matches("[label=").count(), 5);
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    for args in [
        &["bratteli", "--levels", "4", "--format", "json"][..],
        &["bratteli", "--instance", "young", "--levels", "5", "--format", "dot"][..],
        &["rep", "--levels", "4", "--seed", "7"][..],
        &["rep", "--levels", "4", "--backend", "eval", "--eval-point", "5/3"][..],
    ] {
        let a = g2braid(args);
        let b = g2braid(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn worker_count_does_not_change_output() {
    let args = ["rep", "--levels", "4"];
    let one = g2braid(&args);
    let four = Command::new(env!("CARGO_BIN_EXE_g2braid"))
        .args(args)
        .env("G2BRAID_WORKERS", "4")
        .output()
        .unwrap();
    assert_eq!(one.stdout, four.stdout);
}

fn load_g2(path: &Path) -> RepSet<G2, QScalar> {
    RepSet::from_json(G2, &std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn rep_level_two_is_diagonal() {
    let o = g2braid(&["rep", "--instance", "g2", "--levels", "2"]);
    assert_eq!(code(&o), 0);
    let rep = RepSet::<G2, QScalar>::from_json(G2, &stdout(&o)).unwrap();
    assert_eq!(rep.blocks.len(), 4);
    assert!(rep.blocks.values().all(|b| b.dim() == 1));
}

#[test]
fn seeds_change_files_but_not_fingerprints() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for (seed, p) in [("1", &a), ("2", &b)] {
        let o = g2braid(&["rep", "--levels", "4", "--seed", seed, "--out", p.to_str().unwrap()]);
        assert_eq!(code(&o), 0);
    }
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let (ra, rb) = (load_g2(&a), load_g2(&b));
    assert_eq!(fingerprint_difference(&fingerprint(&ra), &fingerprint(&rb)), None);
}

#[test]
fn young_level_three_satisfies_hecke_quadratic() {
    let o = g2braid(&["rep", "--instance", "young", "--levels", "3"]);
    assert_eq!(code(&o), 0);
    let rep = RepSet::<Young, QScalar>::from_json(Young, &stdout(&o)).unwrap();
    let (q, qi) = (QScalar::q_pow(1), QScalar::q_pow(-1));
    for b in rep.blocks.values() {
        let s = b.matrix();
        // (σ - q)(σ + q^-1) = 0
        let prod = s.sub_scalar(&q).mul(&s.sub_scalar(&-qi.clone()));
        assert!(prod.is_zero(), "{}", b.name());
    }
}

#[test]
fn verify_braid_and_central_to_five() {
    let o = g2braid(&["verify", "--checks", "braid,central", "--levels", "5"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).ends_with("0 failed\n"));
}

#[test]
fn verify_rigidity_passes() {
    let o = g2braid(&["verify", "--checks", "rigidity", "--trials", "5", "--levels", "4"]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn verify_default_checks_on_young_skip_g2_formulas() {
    let o = g2braid(&["verify", "--instance", "young", "--levels", "4", "--format", "json"]);
    assert_eq!(code(&o), 0);
    let rows: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(rows.iter().any(|r| r["check"] == "ribbon" && r["status"] == "skip"));
    assert!(rows.iter().all(|r| r["status"] != "fail"));
}

#[test]
fn corrupted_file_fails_with_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("rep.json");
    let o = g2braid(&["rep", "--levels", "3", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    // Scale one off-diagonal entry of the first level-3 block of size > 1.
    let blocks = v["levels"][1]["blocks"].as_array_mut().unwrap();
    let b = blocks.iter_mut().find(|b| b["matrix"].as_array().unwrap().len() > 1).unwrap();
    let x = QScalar::from_json(&b["matrix"][0][1]).unwrap();
    b["matrix"][0][1] = (x * QScalar::from_int(5)).to_json();
    std::fs::write(&path, v.to_string()).unwrap();

    let o = g2braid(&["verify", "--input", path.to_str().unwrap(), "--checks", "braid", "--format", "json"]);
    assert_eq!(code(&o), 1);
    let rows: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    let fail = rows.iter().find(|r| r["status"] == "fail").unwrap();
    assert!(fail["witness"].as_str().unwrap().contains("residual"));

    let good = dir.path().join("good.json");
    g2braid(&["rep", "--levels", "3", "--out", good.to_str().unwrap()]);
    let o = g2braid(&["verify", "--input", good.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
}

#[test]
fn unreadable_input_is_a_failure() {
    let o = g2braid(&["verify", "--input", "/nonexistent/rep.json"]);
    assert_eq!(code(&o), 1);
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&g2braid(&["bratteli", "--bogus"])), 2);
    assert_eq!(code(&g2braid(&["rep", "--backend", "float"])), 2);
    assert_eq!(code(&g2braid(&["rep", "--backend", "eval", "--eval-point", "0/1"])), 2);
    assert_eq!(code(&g2braid(&["rep", "--backend", "eval", "--eval-point", "x"])), 2);
    assert_eq!(code(&g2braid(&["verify", "--format", "dot"])), 2);
    assert_eq!(code(&g2braid(&["verify", "--checks", "nonsense"])), 2);
    assert_eq!(code(&g2braid(&[])), 2);
    let o = Command::new(env!("CARGO_BIN_EXE_g2braid"))
        .args(["bratteli"])
        .env("G2BRAID_WORKERS", "zero")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2);
}

#[test]
fn help_exits_zero() {
    let o = g2braid(&["--help"]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("verify"));
}
