use std::process::Command;

use ou_heat::cli::run;
use serde_json::Value;

const L_PLUS: &str = r#"{"theta":1,"a":1,"b":0,"rho":1}"#;
const L_MINUS: &str = r#"{"theta":1,"a":1,"b":0,"rho":-1}"#;

fn invoke(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("ou-heat").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).unwrap_or_else(|e| panic!("not JSON ({e}): {text}"))
}

#[test]
fn classify_l_plus() {
    let (code, out, err) = invoke(&["classify", "--op", L_PLUS]);
    assert_eq!(code, 0, "{err}");
    let v = json(&out);
    assert_eq!(v["regime"], "hyperbolic");
    assert!((v["lambda0"].as_f64().unwrap() - 5f64.sqrt()).abs() < 1e-15);
    assert_eq!(v["discriminant"].as_f64().unwrap(), 5.0);
    assert!(err.is_empty());
}

#[test]
fn classify_respects_eps_class() {
    let near = r#"{"theta":1,"a":2,"b":0,"rho":-0.999999}"#;
    let (_, out, _) = invoke(&["classify", "--op", near]);
    assert_eq!(json(&out)["regime"], "hyperbolic");
    let (_, out, _) = invoke(&["classify", "--op", near, "--eps-class", "1e-5"]);
    let v = json(&out);
    assert_eq!(v["regime"], "critical");
    assert!(v["lambda0"].is_null());
}

#[test]
fn kernel_at_a_singular_time_is_a_domain_error() {
    let ts = std::f64::consts::PI / 3f64.sqrt();
    let (code, out, err) = invoke(&["kernel", "--op", L_MINUS, "--t", &ts.to_string(), "--x", "0", "--x0", "0"]);
    assert_eq!(code, 1);
    let v = json(&out);
    assert_eq!(v["error"], "singular_time");
    assert_eq!(v["k"], 1);
    assert!((v["t_singular"].as_f64().unwrap() - 1.8137993642342178).abs() < 1e-12);
    assert!(err.contains("singular time"));
}

#[test]
fn kernel_values_and_products() {
    let (code, out, _) = invoke(&["kernel", "--op", L_PLUS, "--t", "0.5", "--x", "0.3", "--x0", "-0.2"]);
    assert_eq!(code, 0);
    let single = json(&out)["log_p"].as_f64().unwrap();
    assert_eq!(single, ou_heat::log_kernel(&ou_heat::OUOperator::new(1.0, 1.0, 0.0, 1.0).unwrap(), 0.5, 0.3, -0.2).unwrap());

    let product = format!(r#"{{"factors":[{L_PLUS},{L_PLUS}]}}"#);
    let (code, out, _) = invoke(&["kernel", "--op", &product, "--t", "0.5", "--x", "0.3,0.3", "--x0", "-0.2,-0.2"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert!((v["log_p"].as_f64().unwrap() - 2.0 * single).abs() < 1e-14);
    assert_eq!(v["x"], serde_json::json!([0.3, 0.3]));

    let (code, _, err) = invoke(&["kernel", "--op", &product, "--t", "0.5", "--x", "0.3", "--x0", "0"]);
    assert_eq!(code, 2);
    assert!(err.contains("dimension"));
}

#[test]
fn kernel_csv_keeps_full_precision() {
    let (code, out, _) = invoke(&["kernel", "--op", L_PLUS, "--t", "0.5", "--x", "0.3", "--x0", "-0.2", "--format", "csv"]);
    assert_eq!(code, 0);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("t,x,x0,log_p"));
    let row: Vec<&str> = lines.next().unwrap().split(',').collect();
    let log_p: f64 = row[3].parse().unwrap();
    let want = ou_heat::log_kernel(&ou_heat::OUOperator::new(1.0, 1.0, 0.0, 1.0).unwrap(), 0.5, 0.3, -0.2).unwrap();
    assert_eq!(log_p, want);
    assert!(!out.contains('\r'));
}

#[test]
fn geodesic_outputs() {
    let (code, out, _) = invoke(&["geodesic", "--op", L_PLUS, "--x0", "1", "--x", "0", "--samples", "5"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["result"], "unique");
    assert_eq!(v["x"].as_array().unwrap().len(), 5);
    let r5 = 5f64.sqrt();
    assert!((v["x"][2].as_f64().unwrap() - (r5 / 2.0).sinh() / r5.sinh()).abs() < 1e-15);

    let (code, out, _) = invoke(&["geodesic", "--op", L_PLUS, "--x0", "1", "--x", "0", "--samples", "3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 4);
    assert!(out.starts_with("s,x\n"));

    // λ₀ = π: x1 must be −x0.
    let resonant = r#"{"theta":1,"a":0,"b":0,"rho":-2.4674011002723395}"#;
    let (code, out, _) = invoke(&["geodesic", "--op", resonant, "--x0", "1", "--x", "0.5"]);
    assert_eq!(code, 0);
    let v = json(&out);
    assert_eq!(v["result"], "no_solution");
    assert_eq!(v["k"], 1);
    assert_eq!(v["required_endpoint"].as_f64().unwrap(), -1.0);

    let (code, out, _) = invoke(&["geodesic", "--op", resonant, "--x0", "1", "--x", "-1"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["result"], "family");
}

#[test]
fn verify_is_deterministic_and_passes_on_l_plus() {
    let args = ["verify", "--op", L_PLUS, "--suite", "all", "--seed", "42"];
    let (code, first, err) = invoke(&args);
    assert_eq!(code, 0, "{first}\n{err}");
    let (_, second, _) = invoke(&args);
    assert_eq!(first, second);
    let v = json(&first);
    assert_eq!(v["passed"], true);
    assert!(v["reports"].as_array().unwrap().len() >= 10);
}

#[test]
fn verify_failure_exit_code() {
    // A time step larger than the reference time cannot be simulated.
    let (code, out, _) = invoke(&["verify", "--op", L_PLUS, "--suite", "mc", "--dt", "10"]);
    assert_eq!(code, 3);
    assert_eq!(json(&out)["passed"], false);
}

#[test]
fn sample_grid() {
    let (code, out, _) = invoke(&["sample", "--op", L_PLUS, "--t", "0.5,1", "--x", "-1,1", "--samples", "3"]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "t,x,x0,log_p");
    assert_eq!(lines.len(), 7);
    let fields: Vec<f64> = lines[6].split(',').map(|f| f.parse().unwrap()).collect();
    assert_eq!(fields[..3], [1.0, 1.0, 0.0]);
}

#[test]
fn singular_times_listing() {
    let (code, out, _) = invoke(&["singular-times", "--op", L_MINUS, "--t", "4"]);
    assert_eq!(code, 0);
    let times = json(&out)["singular_times"].as_array().unwrap().clone();
    assert_eq!(times.len(), 2);
    assert!((times[1].as_f64().unwrap() - 2.0 * std::f64::consts::PI / 3f64.sqrt()).abs() < 1e-15);
    let (_, out, _) = invoke(&["singular-times", "--op", L_MINUS, "--t", "1"]);
    assert_eq!(json(&out)["singular_times"], serde_json::json!([]));
}

#[test]
fn usage_errors() {
    assert_eq!(invoke(&["classify"]).0, 2);
    assert_eq!(invoke(&["nonsense", "--op", L_PLUS]).0, 2);
    assert_eq!(invoke(&["classify", "--op", L_PLUS, "--bogus"]).0, 2);
    let (code, out, err) = invoke(&["classify", "--op", r#"{"theta":0,"a":1,"b":0,"rho":1}"#]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("theta must be positive"), "{err}");
    assert_eq!(invoke(&["kernel", "--op", L_PLUS, "--t", "x", "--x", "0", "--x0", "0"]).0, 2);
    assert_eq!(invoke(&["kernel", "--op", L_PLUS, "--t", "1", "--x", "0,abc", "--x0", "0"]).0, 2);
    assert_eq!(invoke(&["classify", "--op-file", "/nonexistent/op.json"]).0, 2);
    assert_eq!(invoke(&["verify", "--op", L_PLUS, "--suite", "nope"]).0, 2);
}

#[test]
fn binary_reads_operator_files() {
    let dir = std::env::temp_dir().join(format!("ou-heat-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("op.json");
    std::fs::write(&path, L_MINUS).unwrap();
    let output = Command::new(env!("CARGO_BIN_EXE_ou-heat"))
        .args(["classify", "--op-file", path.to_str().unwrap()])
        .output()
        .unwrap();
    std::fs::remove_dir_all(&dir).unwrap();
    assert_eq!(output.status.code(), Some(0));
    let v = json(&String::from_utf8(output.stdout).unwrap());
    assert_eq!(v["regime"], "oscillatory");
    assert!((v["lambda0"].as_f64().unwrap() - 3f64.sqrt()).abs() < 1e-15);
}
