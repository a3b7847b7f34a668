use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::{json, Value};
use sharpflat::iwasawa::TruncPoly;
use sharpflat::padic::{make_context, QpPoly, EXACT};
use sharpflat::twovar::{Labels, TruncPoly2};

fn sharpflat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sharpflat")).args(args).output().expect("spawn sharpflat")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}); stderr: {}", String::from_utf8_lossy(&o.stderr))
    })
}

fn read(p: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(p).unwrap()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn empty_suite_list_exits_zero() {
    let d = tempfile::tempdir().unwrap();
    let r = d.path().join("r.json");
    let o = sharpflat(&["run-suite", "--suites", "", "--out", path(&r)]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(read(&r)["checks"], json!([]));
}

#[test]
fn unknown_suite_is_an_error() {
    let o = sharpflat(&["run-suite", "--suites", "bogus"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn fault_injection_fails_determinant_with_witness() {
    let d = tempfile::tempdir().unwrap();
    let out = d.path().join("r.json");
    let o = sharpflat(&["run-suite", "--suites", "matrix-identities", "--n", "2", "--fault-level", "2", "--out", path(&out)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stdout).contains("FAIL"));
    let r = read(&out);
    let det = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == "determinant n=2")
        .expect("determinant check present");
    assert_eq!(det["verdict"], "FAIL");
    assert!(!det["witness"].is_null());
}

#[test]
fn clean_matrix_identities_pass() {
    let o = sharpflat(&["run-suite", "--suites", "matrix-identities", "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn gadget_phi_and_omega_are_integral() {
    let o = sharpflat(&["gadget", "--kind", "phi", "--n", "1", "--p", "5", "--k", "4", "--ap", "5"]);
    assert_eq!(stdout_json(&o)["coeffs"], json!(["5", "10", "10", "5", "1"]));
    let o = sharpflat(&["gadget", "--kind", "omega", "--n", "2"]);
    let c = stdout_json(&o)["coeffs"].clone();
    assert_eq!(c.as_array().unwrap().len(), 10);
    assert_eq!(c[0], "0");
    assert_eq!(c[1], "9");
    assert_eq!(c[9], "1");
}

#[test]
fn gadget_delta_has_degree_h() {
    let o = sharpflat(&["gadget", "--kind", "delta", "--p", "5", "--k", "4", "--ap", "5", "--prec", "8"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["coeffs"].as_array().unwrap().len(), 4);
    assert_eq!(v["coeffs"][0], "0");
    assert_eq!(v["prec"], 8);
}

#[test]
fn gen_matrix_writes_four_entries() {
    let o = sharpflat(&["gen-matrix", "--n", "1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["entries"].as_array().unwrap().len(), 2);
    assert_eq!(v["entries"][0].as_array().unwrap().len(), 2);
    assert_eq!(v["context"]["p"], 3);
}

#[test]
fn xi_trivial_class_flat_is_linear() {
    let o = sharpflat(&["xi", "--eta", "none", "--bullet", "flat"]);
    let v = stdout_json(&o);
    assert_eq!(v["display"], "Lin(0)");
    let o = sharpflat(&["xi", "--eta", "none", "--bullet", "sharp"]);
    assert_eq!(stdout_json(&o)["display"], "Unit");
}

#[test]
fn synthetic_inputs_are_deterministic() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    for d in [&a, &b] {
        let o = sharpflat(&["gen-synthetic", "--trials", "2", "--seed", "7", "--out", path(d.path())]);
        assert_eq!(o.status.code(), Some(0));
    }
    for f in ["context.json", "signed_pairs.json", "eigen_pairs.json", "image_pairs.json", "doubly_signed.json", "matrix.json"]
    {
        let x = fs::read(a.path().join(f)).unwrap();
        let y = fs::read(b.path().join(f)).unwrap();
        assert_eq!(x, y, "{f} differs between runs");
    }
}

#[test]
fn pipeline_over_synthetic_inputs() {
    let d = tempfile::tempdir().unwrap();
    let o = sharpflat(&["gen-synthetic", "--trials", "2", "--out", path(d.path())]);
    assert_eq!(o.status.code(), Some(0));
    let ctx = d.path().join("context.json");

    let o = sharpflat(&["factor", "--context", path(&ctx), "--input", path(&d.path().join("eigen_pairs.json")), "--n", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout_json(&o)["pairs"].as_array().unwrap().len(), 2);

    let pairs = read(&d.path().join("image_pairs.json"));
    let mut seen = 0;
    for (i, pair) in pairs["pairs"].as_array().unwrap().iter().enumerate() {
        let f = d.path().join(format!("pair{i}.json"));
        fs::write(&f, pair.to_string()).unwrap();
        let eta = pair["eta"].as_str().unwrap();
        let eta = if eta == "none" { "none".to_string() } else { eta.trim_start_matches("ω^").to_string() };
        let mode = if pair["mode"] == "perrin-riou" { "perrin-riou" } else { "coleman" };
        let o = sharpflat(&["image-check", "--context", path(&ctx), "--pair", path(&f), "--eta", &eta, "--mode", mode]);
        assert_eq!(o.status.code(), Some(0), "generated pair {i} rejected: {}", String::from_utf8_lossy(&o.stdout));
        seen += 1;
    }
    assert!(seen > 0);

    let o = sharpflat(&["twovar-verify", "--context", path(&ctx), "--signed", path(&d.path().join("doubly_signed.json"))]);
    assert_eq!(o.status.code(), Some(0));
    let v = stdout_json(&o);
    assert_eq!(v["identity"], "PASS");
    assert_eq!(v["slice"], "PASS");
}

fn grid(cs: &[(usize, usize, i64)]) -> TruncPoly2 {
    let mut rows = vec![vec![0i64; 4]; 4];
    for &(i, j, c) in cs {
        rows[j][i] = c;
    }
    let rows = rows.iter().map(|r| TruncPoly::from_qp(QpPoly::from_i64s(3, r, EXACT))).collect();
    TruncPoly2::from_rows(3, rows, (4, 4), Labels::PPc)
}

#[test]
fn derive_ac_of_norm_form() {
    // (1+X)(1+Y) − 1 = (1+S)² − 1 vanishes on S = 0 with S-slope 2.
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let g = grid(&[(1, 0, 1), (0, 1, 1), (1, 1, 1)]);
    let d = tempfile::tempdir().unwrap();
    let f = d.path().join("g.json");
    fs::write(&f, g.to_json(&h.field, 40).to_string()).unwrap();
    let o = sharpflat(&["derive-ac", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v = stdout_json(&o);
    let cs = v["series"]["coeffs"].as_array().unwrap();
    // 2·log_3(4) has valuation 1; the rest vanish.
    assert_eq!(cs[0]["val"], "1");
    for c in &cs[1..] {
        assert_eq!(c["digits_a"], json!([]));
        assert_eq!(c["digits_b"], json!([]));
    }
}

#[test]
fn derive_ac_rejects_nonvanishing_input() {
    let h = make_context(3, 2, 3, 1, 1, 40).unwrap();
    let d = tempfile::tempdir().unwrap();
    let f = d.path().join("g.json");
    fs::write(&f, grid(&[(1, 0, 1)]).to_json(&h.field, 40).to_string()).unwrap();
    let o = sharpflat(&["derive-ac", "--in", path(&f)]);
    assert_eq!(o.status.code(), Some(2));
}
