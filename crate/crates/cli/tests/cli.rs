use serde_json::Value;
use std::path::Path;
use std::process::{Command, Output};

fn qehrhart(args: &[&str], cache: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_qehrhart"));
    c.args(args).env_remove("QEHRHART_CACHE");
    if let Some(dir) = cache {
        c.env("QEHRHART_CACHE", dir);
    }
    c.output().expect("binary runs")
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn json_out(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("json on stdout")
}

fn row(v: &Value, m: usize) -> Vec<i64> {
    v["iq"][m].as_array().unwrap().iter().map(|x| x.as_i64().unwrap()).collect()
}

#[test]
fn unit_square_to_order_3() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "sq.json", r#"{"name": "square", "vertices": [[0,0],[1,0],[0,1],[1,1]]}"#);
    let o = qehrhart(&["compute", &f, "--max-t", "3"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["T"], 3);
    assert_eq!(row(&v, 0), vec![1]);
    assert_eq!(row(&v, 1), vec![1, 2, 1]);
    assert_eq!(row(&v, 2), vec![1, 2, 3, 2, 1]);
    assert_eq!(row(&v, 3), vec![1, 2, 3, 4, 3, 2, 1]);
}

#[test]
fn triangle_cubic_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "tri.json", r#"{"name": "tri", "vertices": [[0,0],[2,1],[1,2]]}"#);
    let o = qehrhart(&["compute", &f, "--max-t", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(row(&json_out(&o), 3), vec![1, 2, 3, 4, 5, 3, 1]);
}

#[test]
fn bad_inputs_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "empty.json", r#"{"name": "nothing", "vertices": []}"#);
    assert_eq!(qehrhart(&["compute", &empty], None).status.code(), Some(2));
    let junk = write(dir.path(), "junk.json", "{not json");
    assert_eq!(qehrhart(&["compute", &junk], None).status.code(), Some(2));
    assert_eq!(qehrhart(&["compute", "/nonexistent/p.json"], None).status.code(), Some(2));
    assert_eq!(qehrhart(&["table", "fig9"], None).status.code(), Some(2));
    assert_eq!(qehrhart(&["verify", "classical", "--max-t", "2", "--max-m", "3"], None).status.code(), Some(2));
}

#[test]
fn cache_replay_matches_recompute() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache");
    let f = write(dir.path(), "tri.json", r#"{"name": "tri", "vertices": [[0,0],[2,1],[1,2]]}"#);
    let fresh = qehrhart(&["compute", &f, "--max-t", "4"], None);
    let first = qehrhart(&["compute", &f, "--max-t", "4"], Some(&cache));
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 1);
    let replay = qehrhart(&["compute", &f, "--max-t", "4"], Some(&cache));
    assert_eq!(fresh.stdout, first.stdout);
    assert_eq!(first.stdout, replay.stdout);
    // a different order is a different entry
    qehrhart(&["compute", &f, "--max-t", "3", "--cache", cache.to_str().unwrap()], None);
    assert_eq!(std::fs::read_dir(&cache).unwrap().count(), 2);
}

#[test]
fn out_file_written() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "seg.json", r#"{"name": "seg", "vertices": [[0],[2]]}"#);
    let out = dir.path().join("res").join("seg.json");
    let o = qehrhart(&["interior", &f, "--max-t", "3", "--out", out.to_str().unwrap()], None);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    // interior of m·[0,2] has 2m−1 points, the harmonic space is [2m−1]_q
    assert_eq!(v["iqInterior"][2], serde_json::json!([1, 1, 1]));
}

#[test]
fn guess_segment() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "seg.json", r#"{"name": "seg", "vertices": [[0],[3]]}"#);
    let o = qehrhart(&["guess", &f, "--max-t", "8"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert!(v["guess"].is_object());
    assert!(v["guessBar"].is_object());
}

#[test]
fn table_fig1_passes() {
    let o = qehrhart(&["table", "fig1"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
}

#[test]
fn verify_is_deterministic() {
    let a = qehrhart(&["verify", "closure", "--trials", "10", "--seed", "3"], None);
    let b = qehrhart(&["verify", "closure", "--trials", "10", "--seed", "3", "--jobs", "1"], None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn poset_and_modp() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "chain.json", r#"{"n": 2, "covers": [[0, 1]]}"#);
    let o = qehrhart(&["poset", "order", &p, "--max-t", "3"], None);
    let c = qehrhart(&["poset", "chain", &p, "--max-t", "3"], None);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json_out(&o)["iq"], json_out(&c)["iq"]);
    let cyc = write(dir.path(), "cyc.json", r#"{"n": 2, "covers": [[0, 1], [1, 0]]}"#);
    assert_eq!(qehrhart(&["poset", "order", &cyc], None).status.code(), Some(2));

    let b = qehrhart(&["modp", "beta", "--r", "2", "--r2", "2", "--prime", "2"], None);
    assert_eq!(json_out(&b), serde_json::json!([{"p": 2, "beta": 2}]));

    let z = write(dir.path(), "z.json", r#"{"n": 1, "points": [[0],[1]]}"#);
    let w = write(dir.path(), "w.json", r#"{"n": 1, "points": [[0],[1]]}"#);
    let m = qehrhart(&["modp", "closure", &z, &w], None);
    assert_eq!(m.status.code(), Some(0), "{}", String::from_utf8_lossy(&m.stderr));
    assert_eq!(json_out(&m).as_array().unwrap().len(), 3);
    // {0, 2} collapses mod 2
    let bad = write(dir.path(), "bad.json", r#"{"n": 1, "points": [[0],[2]]}"#);
    assert_eq!(qehrhart(&["modp", "closure", &z, &bad], None).status.code(), Some(2));
}

#[test]
fn equivariant_segment() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "seg.json", r#"{"name": "seg", "vertices": [[-1],[1]]}"#);
    let o = qehrhart(&["equivariant", &f, "--group", "negation", "--table", "z2", "--max-t", "2"], None);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = json_out(&o);
    // V for [−m, m] is spanned by y^k, k ≤ 2m; negation acts by (−1)^k
    assert_eq!(v["characters"]["-1"][1], serde_json::json!(["1", "-1", "1"]));
    assert!(v["multiplicities"].is_array());
    let lopsided = write(dir.path(), "lop.json", r#"{"name": "lop", "vertices": [[0],[1]]}"#);
    assert_eq!(qehrhart(&["equivariant", &lopsided, "--group", "negation"], None).status.code(), Some(2));
}
