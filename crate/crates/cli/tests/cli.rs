use std::path::Path;
use std::process::{Command, Output};

fn rigd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rigd")).args(args).output().expect("rigd runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> (Vec<String>, Vec<Vec<String>>) {
    let mut lines = text.lines();
    assert!(lines.next().unwrap().starts_with("# config: {"));
    let header = lines.next().unwrap().split(',').map(String::from).collect();
    let rows = lines.map(|l| l.split(',').map(String::from).collect()).collect();
    (header, rows)
}

fn column(header: &[String], name: &str) -> usize {
    header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"))
}

#[test]
fn huber_simulation_ends_at_the_left_regime_rate() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let o = rigd(&["simulate", "--instance", "huber", "--delta", "0.3", "--h", "0.75", "--n", "20", "--out", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    let last = summary["metrics"]["ratio_last"].as_f64().unwrap();
    assert!((last - 1.0 / 11.0).abs() <= 1e-12, "{last}");

    let (header, rows) = csv_rows(&std::fs::read_to_string(&path).unwrap());
    assert_eq!(header, ["k", "x", "g_norm", "d_norm", "f", "err_ratio"]);
    assert_eq!(rows.len(), 21);
}

#[test]
fn certify_passes_on_every_grid_point() {
    let o = rigd(&["certify", "--delta", "0,0.1,0.5,0.8", "--grid", "40"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&stdout(&o));
    let passed = column(&header, "passed");
    assert_eq!(rows.len(), 160);
    assert!(rows.iter().all(|r| r[passed] == "true"));
}

#[test]
fn hmax_dominates_the_prior_stepsize() {
    let o = rigd(&["hmax", "--format", "json"]);
    assert!(o.status.success());
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 100);
    for r in rows {
        let (ours, prior) = (r["ours"].as_f64().unwrap(), r["prior"].as_f64().unwrap());
        assert!(ours >= prior);
        if r["delta"].as_f64().unwrap() > 0.0 {
            assert!(ours > prior);
        }
    }
}

#[test]
fn rates_marks_regime_boundaries() {
    let o = rigd(&["rates", "--delta", "0.5", "--points", "11", "--n", "1,5"]);
    assert!(o.status.success());
    let (header, rows) = csv_rows(&stdout(&o));
    let (b, gap) = (column(&header, "boundary"), column(&header, "branch_gap"));
    let tagged: Vec<_> = rows.iter().filter(|r| !r[b].is_empty()).collect();
    assert_eq!(tagged.len(), 2);
    assert!(tagged.iter().all(|r| r[gap].parse::<f64>().unwrap() <= 1e-10));
    // h = 1 is both a grid point and h_LI; it appears once
    assert_eq!(rows.iter().filter(|r| r[1] == "1").count(), 1);
}

#[test]
fn hopt_rows_stay_in_the_intermediate_regime() {
    let o = rigd(&["hopt", "--delta", "0.2:0.9:0.1", "--n", "1,20"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let (header, rows) = csv_rows(&stdout(&o));
    let ratio = column(&header, "ratio");
    assert_eq!(rows.len(), 16);
    assert!(rows.iter().all(|r| r[ratio].parse::<f64>().unwrap() <= 1.05));
}

#[test]
fn failed_checks_exit_with_one() {
    let o = rigd(&["hopt", "--delta", "0.5", "--n", "1", "--tolerance", "1.0"]);
    assert_eq!(o.status.code(), Some(1));
    let err: serde_json::Value = serde_json::from_str(String::from_utf8_lossy(&o.stderr).trim()).unwrap();
    assert_eq!(err["failures"][0]["check"], "h_opt");
}

#[test]
fn invalid_arguments_are_rejected() {
    for args in [
        &["rates", "--delta", "1.5"][..],
        &["rates", "--delta", "0.1:0.2"],
        &["simulate", "--instance", "huber", "--delta", "0.5", "--h", "2.0"],
        &["search", "--h", "1.0", "--delta", "0.5", "--dim", "3"],
        &["certify", "--bogus"],
    ] {
        let o = rigd(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
}

#[test]
fn outputs_are_byte_identical_across_runs() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str, args: &[&str]| {
        let path = dir.path().join(name);
        let mut full: Vec<&str> = args.to_vec();
        let p = path.to_str().unwrap().to_string();
        full.extend(["--out", &p]);
        assert!(rigd(&full).status.success());
        std::fs::read(Path::new(&p)).unwrap()
    };
    let search = ["search", "--h", "1.11", "--delta", "0.5", "--budget", "200", "--seed", "7", "--compare"];
    assert_eq!(run("a.json", &search), run("b.json", &search));
    let sim = ["simulate", "--instance", "quadratic", "--oracle", "random", "--delta", "0.4", "--h", "1.0", "--n", "50", "--dim", "2", "--seed", "3"];
    assert_eq!(run("a.csv", &sim), run("b.csv", &sim));
    let rates = ["rates", "--points", "50"];
    assert_eq!(run("r1.csv", &rates), run("r2.csv", &rates));
}

#[test]
fn search_output_carries_seed_and_bound() {
    let o = rigd(&["search", "--h", "1.0", "--delta", "0.3", "--budget", "200", "--seed", "11"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(doc["config"]["args"]["seed"], 11);
    let r = &doc["result"];
    assert!(r["value"].as_f64().unwrap() <= r["bound"].as_f64().unwrap() + 1e-6);
    assert!(String::from_utf8_lossy(&o.stderr).contains("seed = 11"));
}
