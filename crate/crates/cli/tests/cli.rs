use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_braceforge"));
    c.env_remove("BRACEFORGE_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn result(o: &Output) -> Value {
    let v: Value =
        serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)));
    assert_eq!(v["tool"], "braceforge");
    v["result"].clone()
}

fn construct(dir: &Path, name: &str, params: [&str; 3], extra: &[&str]) -> PathBuf {
    let path = dir.join(name);
    let [y, i, k] = params;
    let mut args = vec!["construct", "--p", "5", "--y", y, "--i", i, "--k", k, "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    let o = run(&args);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn construct_writes_family_and_expanded_forms() {
    let dir = TempDir::new().unwrap();
    let fam: Value =
        serde_json::from_str(&std::fs::read_to_string(construct(dir.path(), "b.json", ["1", "0", "0"], &[])).unwrap())
            .unwrap();
    assert_eq!(fam["kind"], "family");
    let t = construct(dir.path(), "t.json", ["1", "0", "0"], &["--expand"]);
    let table: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    assert_eq!(table["kind"], "table");
    assert_eq!(table["lambda"].as_array().unwrap().len(), 625);
    // both forms classify identically
    let a = result(&run(&["classify", s(&dir.path().join("b.json"))]));
    let b = result(&run(&["classify", s(&t)]));
    assert_eq!(a, b);
}

#[test]
fn construct_to_stdout_and_csv() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("t.csv");
    let o = run(&["construct", "--p", "5", "--y", "2", "--csv", s(&csv)]);
    assert_eq!(code(&o), 0);
    let file: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(file["kind"], "family");
    let text = std::fs::read_to_string(&csv).unwrap();
    let rows: Vec<&str> = text.lines().collect();
    assert_eq!(rows.len(), 625);
    let first: Vec<u32> = rows[0].split(',').map(|x| x.parse().unwrap()).collect();
    assert_eq!(first, (0..625).collect::<Vec<_>>());
}

#[test]
fn invalid_prime_is_a_usage_error() {
    let o = run(&["construct", "--p", "4", "--y", "1"]);
    assert_eq!(code(&o), 2);
    assert!(String::from_utf8_lossy(&o.stderr).contains("p must be prime > 3"));
    assert_eq!(code(&run(&["sweep", "--p", "6"])), 2);
    assert_eq!(code(&run(&["construct", "--p", "5", "--y", "0"])), 2);
    assert_eq!(code(&run(&["bogus"])), 2);
}

#[test]
fn classify_family_brace() {
    let dir = TempDir::new().unwrap();
    let b = construct(dir.path(), "b.json", ["1", "0", "0"], &[]);
    let r = result(&run(&["classify", s(&b)]));
    assert_eq!(r["left_nilpotent"], true);
    assert_eq!(r["right_nilpotent"], false);
    assert_eq!(r["strongly_nilpotent"], false);
    assert_eq!(r["prime"], true);
    assert_eq!(r["group"], "XV");
    assert_eq!(r["center_size"], 5);
    assert_eq!(r["chain_dims"]["left"], serde_json::json!([4, 3, 2, 1, 0]));
}

fn trivial_table(dir: &Path) -> PathBuf {
    let id: Vec<i64> = (0..16).map(|i| (i % 5 == 0) as i64).collect();
    let file = serde_json::json!({
        "kind": "table", "p": 5, "n": 4, "basis": ["R", "Q", "P", "S"],
        "lambda": vec![id; 625],
    });
    let path = dir.join("trivial.json");
    std::fs::write(&path, file.to_string()).unwrap();
    path
}

#[test]
fn classify_trivial_table() {
    let dir = TempDir::new().unwrap();
    let r = result(&run(&["classify", s(&trivial_table(dir.path()))]));
    assert_eq!(r["left_nilpotent"], true);
    assert_eq!(r["right_nilpotent"], true);
    assert_eq!(r["strongly_nilpotent"], true);
    assert_eq!(r["prime"], false);
    assert_eq!(r["group"], "abelian");
}

#[test]
fn corrupted_table_reports_a_failing_triple() {
    let dir = TempDir::new().unwrap();
    let t = construct(dir.path(), "t.json", ["1", "0", "0"], &["--expand"]);
    let mut table: Value = serde_json::from_str(&std::fs::read_to_string(&t).unwrap()).unwrap();
    // λ of element 1 becomes the identity: still invertible, but no longer a homomorphism
    let id: Vec<i64> = (0..16).map(|i| (i % 5 == 0) as i64).collect();
    table["lambda"][125] = serde_json::json!(id);
    std::fs::write(&t, table.to_string()).unwrap();
    let o = run(&["classify", s(&t)]);
    assert_eq!(code(&o), 3);
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("witness ["), "{err}");

    let mut singular = table.clone();
    singular["lambda"][7] = serde_json::json!(vec![0; 16]);
    std::fs::write(&t, singular.to_string()).unwrap();
    assert_eq!(code(&run(&["verify", s(&t)])), 3);

    std::fs::write(&t, "{\"kind\": \"table\", \"p\": 5").unwrap();
    assert_eq!(code(&run(&["verify", s(&t)])), 2);
    assert_eq!(code(&run(&["verify", s(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn verify_is_reproducible_and_echoes_the_seed() {
    let dir = TempDir::new().unwrap();
    let b = construct(dir.path(), "b.json", ["3", "2", "1"], &[]);
    let args = ["verify", s(&b), "--samples", "2000", "--seed", "7"];
    let (x, y) = (run(&args), run(&args));
    assert_eq!(code(&x), 0);
    assert_eq!(x.stdout, y.stdout);
    let v: Value = serde_json::from_slice(&x.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["result"]["seed"], 7);
    assert_eq!(v["command"][0], "verify");
    assert!(String::from_utf8_lossy(&x.stderr).contains("wall time"));
}

#[test]
fn exhausted_budget_exits_four() {
    let dir = TempDir::new().unwrap();
    let b = construct(dir.path(), "b.json", ["1", "0", "0"], &[]);
    let o = run(&["verify", s(&b), "--full", "--time-budget", "0"]);
    assert_eq!(code(&o), 4);
    assert_eq!(result(&o)["complete"], false);
}

#[test]
fn threads_flag_and_environment() {
    let dir = TempDir::new().unwrap();
    let b = construct(dir.path(), "b.json", ["1", "0", "0"], &[]);
    assert_eq!(code(&run(&["--threads", "0", "chains", s(&b)])), 2);
    let o = bin().args(["chains", s(&b)]).env("BRACEFORGE_THREADS", "2").output().unwrap();
    assert_eq!(code(&o), 0);
    let chains = result(&o);
    assert_eq!(chains[0]["kind"], "left");
    assert_eq!(chains[1]["dims"], serde_json::json!([4, 3, 3]));
    assert_eq!(chains[1]["stabilized_nonzero"], true);
}

#[test]
fn ideals_of_the_family() {
    let dir = TempDir::new().unwrap();
    let b = construct(dir.path(), "b.json", ["1", "0", "0"], &[]);
    let r = result(&run(&["ideals", s(&b)]));
    assert_eq!(r["subspaces_examined"], 1120);
    assert_eq!(r["prime"], true);
    let dims: Vec<u64> = r["ideals"].as_array().unwrap().iter().map(|i| i["dim"].as_u64().unwrap()).collect();
    assert_eq!(dims, vec![0, 3, 4]);
}

#[test]
fn iso_between_family_members() {
    let dir = TempDir::new().unwrap();
    let a = construct(dir.path(), "a.json", ["1", "0", "0"], &[]);
    let b = construct(dir.path(), "b.json", ["4", "0", "0"], &[]);
    let c = construct(dir.path(), "c.json", ["1", "1", "0"], &[]);
    let r = result(&run(&["iso", s(&a), s(&b)]));
    assert_eq!(r["isomorphic"], true);
    assert_eq!(r["witness"]["images"].as_object().unwrap().len(), 4);
    assert_eq!(result(&run(&["iso", s(&a), s(&c)]))["isomorphic"], false);
}

#[test]
fn ybe_prelie_and_relations() {
    let dir = TempDir::new().unwrap();
    let b = construct(dir.path(), "b.json", ["1", "0", "0"], &[]);
    let o = run(&["ybe", s(&b), "--samples", "20000", "--seed", "3"]);
    assert_eq!(code(&o), 0);
    let names: Vec<String> =
        result(&o)["checks"].as_array().unwrap().iter().map(|c| c["name"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["involutive", "left_nondegenerate", "right_nondegenerate", "braid"]);

    let p = result(&run(&["prelie", "--p", "5", "--y", "2", "--j", "1", "--k", "3"]));
    assert_eq!(p["nilpotency"]["left"], true);
    assert_eq!(p["nilpotency"]["right"], false);
    assert_eq!(code(&run(&["prelie", "--p", "5", "--y", "0"])), 2);

    let m = run(&["matrix-relations", "--p", "7", "--y", "3", "--i", "2", "--k", "5"]);
    assert_eq!(code(&m), 0);
    assert_eq!(result(&m)["relations"]["checks"].as_array().unwrap().len(), 10);
}

#[test]
fn hol_with_gamma_files() {
    let dir = TempDir::new().unwrap();
    let b = construct(dir.path(), "b.json", ["1", "0", "0"], &[]);
    let gamma = dir.path().join("g.json");
    let out = dir.path().join("conj.json");
    let write_gamma =
        |m: &[i64]| std::fs::write(&gamma, serde_json::json!({"p": 5, "n": 4, "matrix": m}).to_string()).unwrap();

    write_gamma(&[1, 0, 0, 0, 2, 1, 0, 0, 0, 3, 1, 0, 1, 0, 4, 1]);
    let o = run(&["hol", s(&b), "--gamma", s(&gamma), "--out", s(&out)]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = result(&o);
    assert_eq!(r["embedding_regular"], true);
    assert_eq!(r["gamma_is_isomorphism"]["checks"][0]["passed"], true);
    assert_eq!(r["preserves_circle"], r["fixes_table"]);
    // the conjugated table loads and is isomorphic to the original
    assert_eq!(result(&run(&["iso", s(&out), s(&b)]))["isomorphic"], true);

    let id: Vec<i64> = (0..16).map(|i| (i % 5 == 0) as i64).collect();
    write_gamma(&id);
    assert_eq!(result(&run(&["hol", s(&b), "--gamma", s(&gamma)]))["brace_automorphism"], true);

    write_gamma(&[0; 16]);
    assert_eq!(code(&run(&["hol", s(&b), "--gamma", s(&gamma)])), 2);
}

#[test]
fn sweep_at_five() {
    let o = run(&["sweep", "--p", "5", "--samples", "2000"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let r = result(&o);
    assert_eq!(r["total"], 100);
    assert_eq!(r["passed"], 100);
    assert_eq!(r["distinct_fingerprints"], 1);
}
