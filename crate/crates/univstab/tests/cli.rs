use serde_json::{json, Value};
use std::collections::BTreeSet;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_univstab"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json on stdout")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

const BANANA: &str = r#"{"genera":[0,0],"edges":[[0,1],[0,1]],"markings":[0,1,1]}"#;

fn tmp(name: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("univstab-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn graph_catalogs() {
    let v = json_of(&run(&["graphs", "1", "1"]));
    assert_eq!(v["count"], 2);
    assert_eq!(v["graphs"].as_array().unwrap().len(), 2);
    assert_eq!(json_of(&run(&["graphs", "0", "3"]))["count"], 1);
    assert_eq!(code(&run(&["graphs", "9", "9"])), 2);
    assert_eq!(code(&run(&["--max-vertices", "2", "graphs", "2", "2"])), 2);
    let table = run(&["--format", "table", "graphs", "2", "0"]);
    assert!(table.status.success());
    assert_eq!(String::from_utf8(table.stdout).unwrap().lines().count(), 7);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["graphs", "2", "1"]);
    let b = run(&["graphs", "2", "1"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn stability_queries() {
    let phi = r#"["1/3","2/3"]"#;
    let v = json_of(&run(&["stable", "--graph", BANANA, "--phi", phi, "--sheaf", r#"{"m":[0,1]}"#]));
    assert_eq!(v["verdict"], "stable");
    let v = json_of(&run(&["stable", "--graph", BANANA, "--phi", phi, "--sheaf", r#"{"m":[2,-1]}"#]));
    assert_eq!(v["verdict"], "unstable");
    assert!(!v["violations"].as_array().unwrap().is_empty());
    let v = json_of(&run(&["stable", "--graph", BANANA, "--phi", phi, "--all"]));
    assert_eq!(v["count"], 2);
    let mismatch = run(&["stable", "--graph", BANANA, "--phi", phi, "--sheaf", r#"{"m":[1,1]}"#]);
    assert_eq!(code(&mismatch), 3);
    assert_eq!(code(&run(&["stable", "--graph", BANANA, "--phi", r#"["0","1"]"#, "--all"])), 4);
    // Files work as well as literals.
    let path = tmp("banana.json");
    std::fs::write(&path, BANANA).unwrap();
    let from_file = run(&["stable", "--graph", path.to_str().unwrap(), "--phi", phi, "--all"]);
    assert_eq!(json_of(&from_file)["count"], 2);
    let at_file = format!("@{}", path.display());
    assert_eq!(json_of(&run(&["stable", "--graph", &at_file, "--phi", phi, "--all"]))["count"], 2);
}

#[test]
fn bad_input_exits_one() {
    assert_eq!(code(&run(&["stable", "--graph", "{", "--phi", "1,1"])), 1);
    assert_eq!(code(&run(&["nonsense"])), 1);
}

#[test]
fn evaluation() {
    let v = json_of(&run(&["eval", "2", "1", "--phi", "canonical", "--d", "3", "--vine", "1,1,[1]"]));
    assert_eq!(v["values"], json!(["3/2", "3/2"]));
}

#[test]
fn chamber_plots() {
    let svg = tmp("d13.svg");
    let v = json_of(&run(&["chambers", "1", "3", "0", "--svg", svg.to_str().unwrap()]));
    assert_eq!(v["count"], 2);
    let doc = std::fs::read_to_string(&svg).unwrap();
    let families: BTreeSet<&str> = doc
        .split("data-family=\"")
        .skip(1)
        .map(|t| &t[..t.find('"').unwrap()])
        .collect();
    assert_eq!(families, BTreeSet::from(["D(0,[2,3])", "D(0,[2])", "D(0,[3])"]));
    assert_eq!(doc.matches("<polygon").count(), 2);
    assert!(doc.contains("id=\"chamber-0\"") && doc.contains("id=\"chamber-1\""));

    let svg = tmp("d22.svg");
    let v = json_of(&run(&["chambers", "2", "2", "0", "--svg", svg.to_str().unwrap()]));
    let doc = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(doc.matches("<polygon").count() as u64, v["count"].as_u64().unwrap());

    assert_eq!(json_of(&run(&["chambers", "2", "0", "1"]))["count"], 0);
    assert_eq!(code(&run(&["chambers", "2", "3", "0", "--svg", tmp("x.svg").to_str().unwrap()])), 5);
}

#[test]
fn orbit_reports() {
    let v = json_of(&run(&["orbits", "1", "1"]));
    assert_eq!(v, json!({"orbits": 1, "transitive": true, "free": false}));
    assert_eq!(json_of(&run(&["orbits", "2", "2"]))["transitive"], false);
}

#[test]
fn abel_jacobi_reports() {
    let phi = r#"{"g":2,"n":2,"d":"1","alpha":{"(0,[1,2])":"1/7","(1,[1,2])":"1/7","(1,[1])":"1/7"},"x":{"1":"1/10","2":"-1/5"}}"#;
    let v = json_of(&run(&["abeljacobi", "2", "2", "--k", "0", "--dvec", "1", "0", "--phi", phi]));
    assert_eq!(v, json!({"extends": false, "strata": [[2, 0, [1, 2]]]}));
    let v = json_of(&run(&["abeljacobi", "2", "2", "--k", "0", "--dvec", "1", "0"]));
    assert_eq!(v["extends"], true);
    assert_eq!(code(&run(&["abeljacobi", "2", "2", "--k", "0", "--dvec", "1", "1", "--phi", phi])), 3);
    let on_wall = phi.replace("1/10", "0").replace("-1/5", "0");
    assert_eq!(code(&run(&["abeljacobi", "2", "2", "--k", "0", "--dvec", "1", "0", "--phi", &on_wall])), 4);
}

#[test]
fn normalization_round_trip() {
    let phi = r#"{"g":2,"n":2,"d":"1","alpha":{"(0,[1,2])":"1/7","(1,[1,2])":"1/7","(1,[1])":"1/7"},"x":{"1":"1/10","2":"-1/5"}}"#;
    let v = json_of(&run(&["normalize", "--phi", phi]));
    assert_eq!(v["phi"]["d"], "0/1");
    assert_eq!(v["phi"]["x"], json!({"1": "1/10", "2": "4/5"}));
    assert_eq!(v["witness"]["t"], false);
}
