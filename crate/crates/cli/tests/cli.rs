use std::process::{Command, Output};

fn minorkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_minorkit")).args(args).env_remove("MINORKIT_BUDGET").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("json output")
}

#[test]
fn obstructions_of_edgeless_graphs() {
    let o = minorkit(&["obstructions", "-F", "K2", "-k", "0", "--nmax", "4"]);
    assert!(o.status.success());
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(lines, vec!["A_".to_string()]);
}

#[test]
fn apex_count_at_six() {
    let o = minorkit(&["bounds", "eval", "apex_count", "--t", "6"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["value"], "1");
    assert!(v["trace"]["steps"].is_array());
    assert!(v["constants"].is_object());
}

#[test]
fn k5_in_petersen_has_a_witness() {
    let dir = std::env::temp_dir().join(format!("minorkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let g6 = dir.join("petersen.g6");
    let petersen = minorkit::graph::named::petersen();
    std::fs::write(&g6, minorkit::graph::to_graph6(&petersen) + "\n").unwrap();
    let o = minorkit(&["minor", "--pattern", "K5", "--host", g6.to_str().unwrap()]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["minor"], true);
    let w: minorkit::ContractionWitness = serde_json::from_value(v["witness"].clone()).unwrap();
    assert_eq!(w.branch_sets.len(), 5);
    let sets: Vec<Vec<usize>> = w.branch_sets.clone();
    for (i, a) in sets.iter().enumerate() {
        assert!(petersen.is_connected_subset(a));
        for b in &sets[i + 1..] {
            assert!(a.iter().all(|x| !b.contains(x)));
            assert!(a.iter().any(|&x| b.iter().any(|&y| petersen.has_edge(x, y))));
        }
    }
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn exit_codes() {
    assert_eq!(minorkit(&["minor", "--pattern", "K5", "--host", "nonsense"]).status.code(), Some(2));
    assert_eq!(minorkit(&["wall", "--r", "4"]).status.code(), Some(2));
    assert_eq!(minorkit(&["bounds", "eval", "no_such_bound"]).status.code(), Some(2));
    assert_eq!(minorkit(&["--budget", "5", "minor", "--pattern", "K5", "--host", "petersen"]).status.code(), Some(3));
    assert_eq!(minorkit(&["bounds", "eval", "tw_bound", "--a", "1", "--s", "1", "--k", "0", "--max-bits", "4"]).status.code(), Some(3));
}

#[test]
fn budget_from_environment() {
    let o = Command::new(env!("CARGO_BIN_EXE_minorkit"))
        .args(["minor", "--pattern", "K5", "--host", "petersen"])
        .env("MINORKIT_BUDGET", "5")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn seeded_output_is_reproducible() {
    let run = || stdout(&minorkit(&["--seed", "9", "--threads", "2", "flatness", "fixture", "--r", "5"]));
    assert_eq!(run(), run());
    let a = stdout(&minorkit(&["--seed", "4", "contract", "panchromatic", "--r", "2", "--a", "2"]));
    let b = stdout(&minorkit(&["--seed", "4", "contract", "panchromatic", "--r", "2", "--a", "2"]));
    assert_eq!(a, b);
    assert_eq!(serde_json::from_str::<serde_json::Value>(&a).unwrap()["verified"], true);
}

#[test]
fn treewidth_roundtrip_through_validate() {
    let dir = std::env::temp_dir().join(format!("minorkit-td-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let td = dir.join("g.td");
    let o = minorkit(&["decomp", "tw", "grid:3x3"]);
    assert!(o.status.success());
    std::fs::write(&td, &o.stdout).unwrap();
    assert!(stdout(&o).starts_with("s td"));
    let v = json(&minorkit(&["decomp", "validate", "grid:3x3", td.to_str().unwrap()]));
    assert_eq!(v["valid"], true);
    assert_eq!(v["width"], 3);
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn manifest_records_the_run() {
    let dir = std::env::temp_dir().join(format!("minorkit-man-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let m = dir.join("m.json");
    let o = minorkit(&["--seed", "7", "--manifest", m.to_str().unwrap(), "obstructions", "-F", "K3", "--nmax", "5"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&m).unwrap()).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["complete"], true);
    assert_eq!(v["exit_code"], 0);
    std::fs::remove_dir_all(&dir).ok();
}
