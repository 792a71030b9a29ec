use std::path::Path;
use std::process::{Command, Output};

fn modelset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modelset")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn data_rows(csv: &str) -> Vec<&str> {
    csv.lines().skip(1).collect()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn squarefree_up_to_thirty() {
    let o = modelset(&["gen", "--scheme", "squarefree", "--N", "30"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("x,weight\n"));
    let xs: Vec<i64> = data_rows(&out).iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(xs, vec![1, 2, 3, 5, 6, 7, 10, 11, 13, 14, 15, 17, 19, 21, 22, 23, 26, 29, 30]);
}

#[test]
fn empty_region_is_a_config_error_and_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("points.csv");
    let o = modelset(&["gen", "--scheme", "fibonacci", "--N", "0", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);
}

#[test]
fn period_doubling_on_zero_to_fifteen() {
    let o = modelset(&["gen", "--scheme", "period_doubling", "--N", "15", "--depth", "10"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let xs: Vec<i64> = data_rows(&out).iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    // evens, 3 mod 8, 15 mod 32
    assert_eq!(xs, vec![0, 2, 3, 4, 6, 8, 10, 11, 12, 14, 15]);
}

#[test]
fn period_doubling_levels() {
    let o = modelset(&["diffract", "--scheme", "period_doubling", "--rmax", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let mut levels: Vec<f64> = data_rows(&out).iter().map(|r| r.split(',').nth(2).unwrap().parse().unwrap()).collect();
    levels.sort_by(|a, b| b.partial_cmp(a).unwrap());
    levels.dedup();
    assert_eq!(levels.len(), 4);
    for (l, e) in levels.iter().zip([4.0 / 9.0, 1.0 / 9.0, 1.0 / 36.0, 1.0 / 144.0]) {
        assert!((l - e).abs() < 1e-15);
    }
}

#[test]
fn fibonacci_origin_peak() {
    let o = modelset(&["diffract", "--scheme", "fibonacci", "--index", "20", "--floor", "1e-6", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let peaks = v["peaks"].as_array().unwrap();
    let origin = peaks.iter().find(|p| p["label"] == serde_json::json!({"n": 0, "m": 0})).unwrap();
    assert!((origin["intensity"].as_f64().unwrap() - 1.894_427).abs() < 1e-6);
    assert!(peaks.iter().all(|p| p["intensity"].as_f64().unwrap() >= 1e-6));
}

#[test]
fn squarefree_single_class() {
    let o = modelset(&["diffract", "--scheme", "squarefree", "--Q", "1", "--kmax", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let rows = data_rows(&out);
    assert_eq!(rows.len(), 7);
    for r in rows {
        let i: f64 = r.split(',').nth(2).unwrap().parse().unwrap();
        assert!((i - 0.369_576).abs() < 1e-6);
    }
}

#[test]
fn plot_data_and_comparison_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sq.csv");
    let o = modelset(&[
        "diffract", "--scheme", "squarefree", "--Q", "50", "--sample", "1500", "--plot-data", "--out",
        path_str(&out),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let csv = std::fs::read_to_string(&out).unwrap();
    assert!(csv.starts_with("label,frequency,intensity,log10_intensity\n"));
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("sq.csv.comparison.json")).unwrap()).unwrap();
    assert_eq!(report["peaks"].as_array().unwrap().len(), 10);
    let first = &report["peaks"][0];
    for key in ["predicted", "measured", "relative_error"] {
        assert!(first[key].is_number());
    }
}

#[test]
fn verify_squarefree_sieve_with_small_prime_bound() {
    let o = modelset(&["verify", "--scheme", "squarefree", "--P", "2", "--N", "100000"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let sieve = v["checks"].as_array().unwrap().iter().find(|c| c["name"] == "squarefree_sieve").unwrap();
    assert_eq!(sieve["passed"], true);
    // n ≤ 10⁵ divisible by p² for some odd prime p but not by 4
    assert_eq!(sieve["value"].as_f64().unwrap(), 14206.0);
}

#[test]
fn corrupted_scheme_file() {
    let dir = tempfile::tempdir().unwrap();
    let scheme = dir.path().join("scheme.json");
    let window = dir.path().join("window.json");
    std::fs::write(&scheme, "{\"d\": 1, \"n\": 1, \"basis\": [1, 0,").unwrap();
    std::fs::write(&window, "{\"lower\": -0.5, \"upper\": 0.5}").unwrap();
    let o = modelset(&["verify", "--scheme-file", path_str(&scheme), "--window-file", path_str(&window)]);
    assert_eq!(o.status.code(), Some(2));
    assert!(o.stdout.is_empty());
}

#[test]
fn missing_output_directory_is_an_io_error() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("p.csv");
    let o = modelset(&["gen", "--scheme", "squarefree", "--N", "30", "--out", path_str(&out)]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!out.exists());
}

#[test]
fn custom_scheme_reproduces_fibonacci() {
    let dir = tempfile::tempdir().unwrap();
    let tau = (1.0 + 5f64.sqrt()) / 2.0;
    let s = (2.0 + tau).sqrt();
    let scheme = dir.path().join("scheme.json");
    let window = dir.path().join("window.json");
    let basis = serde_json::json!({"d": 1, "n": 1, "basis": [1.0 / s, tau / s, tau / s, -1.0 / s]});
    std::fs::write(&scheme, basis.to_string()).unwrap();
    let half = (1.0 + tau) / s / 2.0;
    let w = serde_json::json!({"lower": -half, "upper": half, "closure": "half_open_right"});
    std::fs::write(&window, w.to_string()).unwrap();
    let custom = modelset(&[
        "gen", "--scheme", "custom", "--scheme-file", path_str(&scheme), "--window-file", path_str(&window),
        "--N", "50",
    ]);
    let fib = modelset(&["gen", "--scheme", "fibonacci", "--N", "50"]);
    assert!(custom.status.success());
    let a: Vec<f64> = data_rows(&stdout(&custom)).iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    let b: Vec<f64> = data_rows(&stdout(&fib)).iter().map(|r| r.split(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(a.len(), b.len());
    assert!(a.iter().zip(&b).all(|(x, y)| (x - y).abs() < 1e-9));

    let o = modelset(&["verify", "--scheme-file", path_str(&scheme), "--window-file", path_str(&window)]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("custom_density"));
}

#[test]
fn residue_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("pd.json");
    std::fs::write(&cfg, "{\"kind\": \"period_doubling\", \"prime_bound\": null, \"depth\": 10}").unwrap();
    let o = modelset(&["gen", "--config", path_str(&cfg), "--N", "15"]);
    assert!(o.status.success());
    assert_eq!(data_rows(&stdout(&o)).len(), 11);
}

#[test]
fn density_and_autocorrelation() {
    let o = modelset(&["density", "--scheme", "period_doubling", "--N", "65535", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!((v["density_estimate"].as_f64().unwrap() - 2.0 / 3.0).abs() < 1e-3);

    let o = modelset(&["autocorr", "--scheme", "fibonacci", "--N", "2000", "--format", "json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let entries = v["entries"].as_array().unwrap();
    assert_eq!(entries.len(), 20);
    for e in entries {
        let diff = e["eta"].as_f64().unwrap() - e["predicted"].as_f64().unwrap();
        assert!(diff.abs() < 5e-3);
    }
    let o = modelset(&["autocorr", "--scheme", "squarefree", "--N", "1000"]);
    assert!(stdout(&o).starts_with("z,eta\n0,"));
}

#[test]
fn seedless_runs_and_outputs_are_reproducible() {
    let a = modelset(&["diffract", "--scheme", "fibonacci", "--index", "8", "--seedless"]);
    assert!(a.status.success());
    assert!(String::from_utf8_lossy(&a.stderr).contains("byte-identical"));
    let b = modelset(&["diffract", "--scheme", "fibonacci", "--index", "8"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_scheme_is_rejected() {
    let o = modelset(&["gen", "--scheme", "penrose"]);
    assert_eq!(o.status.code(), Some(2));
}
