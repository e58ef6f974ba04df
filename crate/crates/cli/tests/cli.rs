use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn specest(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_specest"))
        .args(args)
        .current_dir(dir)
        .env_remove("THREADS")
        .output()
        .expect("binary runs")
}

fn read(path: PathBuf) -> String {
    std::fs::read_to_string(path).expect("csv written")
}

fn rows(text: &str) -> Vec<Vec<String>> {
    text.lines().skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn every_experiment_writes_its_header() {
    let dir = tempfile::tempdir().unwrap();
    let cases: [(&str, &[&str], &str); 9] = [
        ("tomography", &["--n", "500"], "d,n,trial,seed,op_norm_error,scaled_error"),
        ("moments", &["--k", "3"], "d,k,n,trial,estimate,truth"),
        ("renyi", &[], "d,k,n,trial,estimate,truth"),
        ("bucket", &["--d", "6", "--n", "800"], "d,B,eps,n,trial,seed,large_err,miscls,alignment_err,rank_r"),
        ("spectrum", &["--d", "4", "--eps", "0.5"], "d,eps,trial,seed,tv_error,alignment_err,miscls,rank_r"),
        ("classical", &["--d", "32", "--n", "300"], "d,eps,n,trial,seed,tv_error"),
        ("game", &["--n", "5", "--m", "200"], "d,n,m,seed,success"),
        ("scan", &["--m", "200"], "family_k,d,n_min,m,threshold,seed"),
        ("fit", &[], "family_k,a,c,b,rss"),
    ];
    for (exp, extra, head) in cases {
        let out = format!("{exp}.csv");
        let mut args = vec![exp, "--trials", "3", "--out", &out];
        args.extend_from_slice(extra);
        let o = specest(dir.path(), &args);
        assert!(o.status.success(), "{exp}: {}", String::from_utf8_lossy(&o.stderr));
        let text = read(dir.path().join(&out));
        assert_eq!(text.lines().next().unwrap(), head, "{exp}");
        let expected_rows = match exp {
            "game" | "scan" => 1,
            "fit" => 2,
            _ => 3,
        };
        assert_eq!(rows(&text).len(), expected_rows, "{exp}");

        let stdout = String::from_utf8(o.stdout).unwrap();
        assert_eq!(stdout.lines().count(), 1);
        let summary: serde_json::Value = serde_json::from_str(&stdout).unwrap();
        assert_eq!(summary["experiment"], exp);
        assert_eq!(summary["rows"], expected_rows);
    }
}

#[test]
fn reruns_are_byte_identical_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    for exp in ["spectrum", "bucket", "moments", "classical", "game"] {
        let mut outputs = Vec::new();
        for (i, threads) in ["1", "4", "4"].iter().enumerate() {
            let out = format!("{exp}{i}.csv");
            let mut args = vec![exp, "--trials", "4", "--threads", threads, "--out", &out, "--seed", "7"];
            match exp {
                "bucket" => args.extend(["--d", "6", "--n", "800"]),
                "classical" => args.extend(["--d", "32", "--n", "300"]),
                "game" => args.extend(["--n", "7", "--m", "500"]),
                _ => {}
            }
            assert!(specest(dir.path(), &args).status.success());
            outputs.push(read(dir.path().join(out)));
        }
        assert_eq!(outputs[0], outputs[1], "{exp}: 1 vs 4 threads");
        assert_eq!(outputs[1], outputs[2], "{exp}: rerun");
    }
}

#[test]
fn threads_environment_variable_is_a_fallback() {
    let dir = tempfile::tempdir().unwrap();
    let run = |env: Option<&str>, flag: Option<&str>| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_specest"));
        cmd.args(["game", "--n", "5", "--m", "50", "--out", "g.csv"]).current_dir(dir.path()).env_remove("THREADS");
        if let Some(v) = env {
            cmd.env("THREADS", v);
        }
        if let Some(v) = flag {
            cmd.args(["--threads", v]);
        }
        cmd.output().unwrap()
    };
    let summary = |o: Output| -> serde_json::Value { serde_json::from_slice(&o.stdout).unwrap() };
    assert_eq!(summary(run(Some("3"), None))["threads"], 3);
    assert_eq!(summary(run(Some("3"), Some("2")))["threads"], 2);
    assert_eq!(run(Some("many"), None).status.code(), Some(2));
}

#[test]
fn zero_trials_is_rejected_without_output() {
    let dir = tempfile::tempdir().unwrap();
    let o = specest(dir.path(), &["spectrum", "--trials", "0", "--out", "s.csv"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!dir.path().join("s.csv").exists());
}

#[test]
fn invalid_configurations_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("unknown.json"), r#"{"d": 8, "colour": "red"}"#).unwrap();
    std::fs::write(dir.path().join("broken.json"), "{").unwrap();
    let cases: [&[&str]; 9] = [
        &["tomography", "--config", "unknown.json"],
        &["tomography", "--config", "broken.json"],
        &["tomography", "--config", "missing.json"],
        &["tomography", "--colour", "red"],
        &["spectrum", "--eps", "0"],
        &["spectrum", "--d", "3"],
        &["game", "--k", "3", "--d", "8", "--n", "5"],
        &["game"],
        &["fit", "--k", "5"],
    ];
    for args in cases {
        let o = specest(dir.path(), args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn runtime_failures_exit_with_three_and_leave_no_file() {
    let dir = tempfile::tempdir().unwrap();
    // more copies than the Schur evaluator accepts
    let o = specest(dir.path(), &["game", "--n", "30000", "--m", "1", "--out", "g.csv"]);
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    assert!(!dir.path().join("g.csv").exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0, "temporary file left behind");
}

#[test]
fn command_line_beats_file_beats_defaults() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("cfg.json"), r#"{"d": 5, "n": 40, "trials": 2, "k": 3, "seed": 11}"#).unwrap();
    let o = specest(dir.path(), &["moments", "--config", "cfg.json", "--d", "3", "--out", "m.csv"]);
    assert!(o.status.success());
    let r = rows(&read(dir.path().join("m.csv")));
    assert_eq!(r.len(), 2);
    assert_eq!(&r[0][..4], ["3", "3", "40", "0"]);
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(summary["seed"], 11);
}

#[test]
fn scan_reproduces_the_reference_copy_counts() {
    let dir = tempfile::tempdir().unwrap();
    let o = specest(dir.path(), &["scan", "--k", "2", "--d", "6", "--d_max", "12", "--seed", "1", "--m", "10000"]);
    assert!(o.status.success());
    let r = rows(&read(dir.path().join("scan.csv")));
    let reference = [(6, 9), (8, 12), (10, 15), (12, 18)];
    assert_eq!(r.len(), reference.len());
    for (row, (d, n)) in r.iter().zip(reference) {
        assert_eq!(row[1].parse::<usize>().unwrap(), d);
        let got: i64 = row[2].parse().unwrap();
        assert!((got - n).abs() <= 2, "d = {d}: {got} vs {n}");
    }
}

#[test]
fn fit_reads_a_scan_table() {
    let dir = tempfile::tempdir().unwrap();
    let scan = "family_k,d,n_min,m,threshold,seed\n3,6,21,1,0.7,1\n3,9,37,1,0.7,1\n3,12,56,1,0.7,1\n3,15,76,1,0.7,1\n2,6,9,1,0.7,1\n";
    std::fs::write(dir.path().join("scan.csv"), scan).unwrap();
    let o = specest(dir.path(), &["fit", "--k", "3", "--input", "scan.csv"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let r = rows(&read(dir.path().join("fit.csv")));
    assert_eq!(r.len(), 2);
    let fixed_c: f64 = r[1][2].parse().unwrap();
    assert!((fixed_c - 4.0 / 3.0).abs() < 1e-15);

    let o = specest(dir.path(), &["fit", "--k", "4", "--input", "scan.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn numbers_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    assert!(specest(dir.path(), &["fit", "--k", "4"]).status.success());
    let r = rows(&read(dir.path().join("fit.csv")));
    let c: f64 = r[0][2].parse().unwrap();
    assert!((c - 1.53).abs() <= 0.05);
    assert!(r[0][1].contains('e'));
    assert_eq!(format!("{c:.16e}"), r[0][2]);
}
