use std::process::{Command, Output};

fn hypercheb(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypercheb"))
        .args(args)
        .env_remove("HYPERCHEB_TOL")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = hypercheb(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn expansion_coefficients() {
    assert_eq!(stdout(&["cheb", "--m", "3", "--kind", "0", "--n", "2", "--coeffs"]), "x^2 + 2*y*z\n");
    assert_eq!(stdout(&["cheb", "--m", "2", "--n", "2", "--coeffs"]), "x^2 + y^2\n");
}

#[test]
fn cubic_surface() {
    assert_eq!(stdout(&["surface", "--m", "3", "--poly"]), "x^3 + y^3 + z^3 - 3*x*y*z\n");
    assert_eq!(stdout(&["surface", "--m", "2"]), "x^2 - y^2\n");
}

#[test]
fn fibonacci_orbit() {
    let text = stdout(&["companion", "--alphas", "1,1", "--seeds", "0,1", "--n", "10", "--orbit"]);
    let values: Vec<&str> = text.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(values, ["0", "1", "1", "2", "3", "5", "8", "13", "21", "34", "55"]);
}

#[test]
fn matrix_power_json() {
    let text = stdout(&["companion", "--alphas", "1,1", "--seeds", "0,1", "--matrix-power", "5"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["matrix"], serde_json::json!([["8", "5"], ["5", "3"]]));
}

#[test]
fn closed_form_shift() {
    let text = stdout(&["companion", "--alphas", "1,1,1", "--seeds", "0,1,1", "--n", "12", "--closed-form"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["matching_shift"], 1);
}

#[test]
fn chebyshev_generator_float_orbit() {
    let text = stdout(&["companion", "--chebyshev", "2", "--alpha", "0,0", "--n", "4"]);
    let last = text.lines().last().unwrap();
    let re: f64 = last.split(',').nth(1).unwrap().parse().unwrap();
    assert!((re - 2.0).abs() < 1e-12);
}

#[test]
fn evaluation_uses_seventeen_digits() {
    let text = stdout(&["cheb", "--m", "2", "--n", "1", "--alpha", "1,0"]);
    let (re, im) = text.trim().split_once(',').unwrap();
    let mantissa = re.split('e').next().unwrap().replace('.', "");
    assert_eq!(mantissa.len(), 17);
    assert!((re.parse::<f64>().unwrap() - 1f64.cosh()).abs() <= 4.0 * f64::EPSILON);
    assert_eq!(im.parse::<f64>().unwrap(), 0.0);
}

#[test]
fn stream_table_shape() {
    let text = stdout(&["cheb", "--m", "3", "--n", "4", "--alpha", "0.3,-0.2", "--table"]);
    assert_eq!(text.lines().count(), 1 + 5 * 3);
    assert!(text.starts_with("n,stream,re,im\n0,0,1.0000000000000000e0,"));
}

#[test]
fn genfun_symbolic_and_json() {
    let text = stdout(&["genfun", "--stream", "0", "--terms", "3"]);
    assert!(text.contains("\nseries\n0: 1\n1: x\n2: 3*x^2 - 2*xs"), "{text}");
    let json = stdout(&["genfun", "--stream", "2", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc["denominator"], serde_json::json!(["1", "-3*x", "3*xs", "-1"]));
    assert_eq!(doc["series"].as_array().unwrap().len(), 12);
}

#[test]
fn quartic_reconciliation() {
    let doc: serde_json::Value = serde_json::from_str(&stdout(&["surface", "--m", "4", "--reconcile"])).unwrap();
    assert_eq!(doc["identical"], false);
    let relabelings = doc["relabelings"].as_array().unwrap();
    assert!(relabelings.contains(&serde_json::json!({ "perm": [0, 1, 2, 3], "sign": -1 })));
}

#[test]
fn point_cloud_lies_on_surface() {
    let text = stdout(&["surface", "--m", "3", "--points", "--grid", "3", "--radius", "0.5"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    let points = doc["points"].as_array().unwrap();
    assert_eq!(points.len(), 9);
    for p in points {
        let v = &p["invariant"];
        assert!((v[0].as_f64().unwrap() - 1.0).abs() < 1e-12 && v[1].as_f64().unwrap().abs() < 1e-12);
    }
}

#[test]
fn lucas_tables_and_identification() {
    let text = stdout(&["lucas", "--roots", "1,2,3", "--which", "V", "--n", "3"]);
    let last = text.lines().last().unwrap();
    assert!(last.starts_with("3,V,3.6000000000000000e1,"), "{last}");
    let json = stdout(&["lucas", "--roots", "1,2,4", "--identify", "--n", "3", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let unit = doc["residuals"].as_array().unwrap().iter().find(|r| r["id"] == "a/unit-product").unwrap();
    assert!(unit["residual"].as_f64().unwrap() < 1e-9);
}

#[test]
fn verify_json_round_trips() {
    let text = stdout(&["verify", "--suites", "companion", "--seed", "3", "--json"]);
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(doc["seed"], 3);
    assert!(doc["cases"].as_array().unwrap().iter().all(|c| c["pass"] == true));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_hypercheb"))
        .args(["verify", "--suites", "lucas"])
        .env("HYPERCHEB_TOL", "1e-15")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("# verify seed=0 tol=1e-15"));
}

#[test]
fn output_file() {
    let path = std::env::temp_dir().join(format!("hypercheb-cli-test-{}.txt", std::process::id()));
    let out = hypercheb(&["surface", "--m", "3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap(), "x^3 + y^3 + z^3 - 3*x*y*z\n");
    std::fs::remove_file(path).unwrap();
}

#[test]
fn exit_codes() {
    assert_eq!(hypercheb(&["verify", "--suites", "bogus"]).status.code(), Some(2));
    assert_eq!(hypercheb(&["cheb", "--m", "3", "--alpha", "x,y"]).status.code(), Some(2));
    assert_eq!(hypercheb(&["cheb", "--n", "-1"]).status.code(), Some(2));
    assert_eq!(hypercheb(&["cheb", "--m", "3", "--n", "2", "--alpha", "800,0"]).status.code(), Some(3));
    assert_eq!(hypercheb(&["lucas", "--roots", "2,2,2"]).status.code(), Some(3));
    let bad = hypercheb(&["companion", "--alphas", "1,1", "--seeds", "0"]);
    assert_eq!(bad.status.code(), Some(3));
    assert_eq!(String::from_utf8_lossy(&bad.stderr).lines().count(), 1);
}
