use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mbergman")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut rdr = csv::Reader::from_reader(text.as_bytes());
    let header = rdr.headers().unwrap().iter().map(String::from).collect();
    let rows = rdr.records().map(|r| r.unwrap().iter().map(String::from).collect()).collect();
    (header, rows)
}

#[test]
fn classical_metric_density_has_equal_columns() {
    let o = run(&["metric-density", "--alpha", "0", "--beta", "0", "--out", "csv"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    assert_eq!(header, ["r", "rho", "lower", "upper"]);
    assert!(!rows.is_empty());
    for row in rows {
        let v: Vec<f64> = row.iter().map(|s| s.parse().unwrap()).collect();
        let want = 2f64.sqrt() / (1.0 - v[0] * v[0]);
        assert!((v[1] - want).abs() <= 1e-13 * want);
        assert_eq!(v[1], v[2]);
        assert_eq!(v[2], v[3]);
    }
}

#[test]
fn beta_at_or_below_minus_one_is_rejected() {
    for beta in ["-1", "-1.5"] {
        let o = run(&["metric-density", "--beta", beta]);
        assert_eq!(o.status.code(), Some(1));
        let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
        assert!(err["message"].as_str().unwrap().contains("beta out of range"), "{err}");
        assert_eq!(err["error"], "domain");
    }
}

#[test]
fn usage_errors_exit_one_with_a_record() {
    let o = run(&["no-such-command"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "usage");
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_exit_codes() {
    let ok = run(&["verify", "--criterion", "4", "--criterion", "15"]);
    assert_eq!(ok.status.code(), Some(0));
    let (_, rows) = csv_rows(&stdout(&ok));
    assert_eq!(rows.len(), 15);
    let strict = run(&["verify", "--criterion", "4", "--tol", "h_identities=0"]);
    assert_eq!(strict.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&strict.stderr).contains("[FAIL]"));
    assert_eq!(run(&["verify", "--tol", "bogus=1"]).status.code(), Some(1));
    assert_eq!(run(&["verify", "--criterion", "42"]).status.code(), Some(1));
}

#[test]
fn json_and_csv_carry_the_same_numbers() {
    let args = ["kernel-eval", "--alpha", "0.5", "--beta", "1.5", "--radii", "2", "--angles", "3"];
    let csv = run(&[&args[..], &["--out", "csv"]].concat());
    let json = run(&[&args[..], &["--out", "json"]].concat());
    assert!(csv.status.success() && json.status.success());
    let (header, rows) = csv_rows(&stdout(&csv));
    let records: Vec<serde_json::Map<String, serde_json::Value>> = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(records.len(), rows.len());
    for (rec, row) in records.iter().zip(&rows) {
        for (name, text) in header.iter().zip(row) {
            let a: f64 = text.parse().unwrap();
            assert_eq!(rec[name].as_f64().unwrap(), a, "{name}");
        }
    }
}

#[test]
fn output_is_bit_stable() {
    let args = ["iomega", "--sigma", "1", "--gamma", "0.5", "--omega", "1"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn distance_reports_bracket_and_graph() {
    let o = run(&["distance", "--from-re", "0", "--to-re", "0.5", "--graph", "--out", "json"]);
    assert!(o.status.success());
    let rec: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let rec = &rec[0];
    let want = 2f64.sqrt() * 0.5f64.atanh();
    assert!((rec["distance"].as_f64().unwrap() - want).abs() < 1e-3);
    assert!((rec["graph_relaxed"].as_f64().unwrap() - want).abs() < 1e-3);
    let plain = run(&["distance", "--from-re", "0", "--to-re", "0.5", "--out", "json"]);
    let rec: serde_json::Value = serde_json::from_slice(&plain.stdout).unwrap();
    assert!(rec[0]["graph_fine"].is_null());
}

#[test]
fn symbol_and_measure_specs() {
    assert!(run(&["berezin", "--symbol", "const:2", "--points", "2"]).status.success());
    assert!(run(&["toeplitz", "--symbol", "indicator:0.5", "--truncation", "4"]).status.success());
    let o = run(&["carleson-ratio", "--measure", "mu", "--rings", "1", "--angles", "2"]);
    let (_, rows) = csv_rows(&stdout(&o));
    for row in rows {
        assert!((row[2].parse::<f64>().unwrap() - 1.0).abs() < 1e-6);
    }
    assert_eq!(run(&["berezin", "--symbol", "wavy"]).status.code(), Some(1));
    assert_eq!(run(&["carleson-ratio", "--measure", "atoms:0.1,0"]).status.code(), Some(1));
}

#[test]
fn output_file_is_written() {
    let dir = std::env::temp_dir().join(format!("mbergman-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rho.csv");
    let o = run(&["metric-density", "--points", "3", "--output-file", path.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let (header, rows) = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(header[0], "r");
    assert_eq!(rows.len(), 3);
    std::fs::remove_dir_all(dir).unwrap();
}
