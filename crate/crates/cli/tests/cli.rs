use std::path::Path;
use std::process::{Command, Output};

fn frlp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_frlp"))
        .args(args)
        .env_remove("FRLP_LOG")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn value_after(text: &str, key: &str) -> f64 {
    let line = text
        .lines()
        .find(|l| l.starts_with(key))
        .unwrap_or_else(|| panic!("no line {key} in\n{text}"));
    line[key.len()..].trim().parse().unwrap()
}

#[test]
fn sweep_fig7_cyclic_never_needs_more_stations() {
    let dir = tempfile::tempdir().unwrap();
    let csv_path = dir.path().join("detail.csv");
    let o = frlp(&[
        "sweep",
        "--name",
        "fig7",
        "--alphas",
        "1.0,1.5",
        "--objective",
        "minstations",
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let rows: Vec<Vec<f64>> = text
        .lines()
        .filter_map(|l| {
            let cols: Vec<f64> = l.split_whitespace().filter_map(|c| c.parse().ok()).collect();
            (cols.len() == 7).then_some(cols)
        })
        .collect();
    assert_eq!(rows.len(), 2, "{text}");
    for r in &rows {
        assert!(r[4] <= r[1], "cyclic {} > original {}", r[4], r[1]);
    }

    let mut reader = csv::Reader::from_path(&csv_path).unwrap();
    let header: Vec<String> = reader.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        ["instance", "routing", "alpha", "time_s", "separation_time_s", "bb_nodes", "cuts"]
    );
    let records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    assert_eq!(records.len(), 4);
    assert_eq!(&records[0][1], "original");
    assert_eq!(&records[1][1], "cyclic");
}

#[test]
fn prop5a_bounds_show_the_gap() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p5.json");
    let g = frlp(&["generate", "--name", "prop5a", "--n", "5", "--out", path.to_str().unwrap()]);
    assert!(g.status.success());
    let o = frlp(&["bounds", path.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let f1 = 1.0;
    let agg = value_after(&text, "agg-LP");
    let dis = value_after(&text, "disagg-LP");
    assert!(agg <= f1 / 3.0 + 1e-6, "{text}");
    assert!(f1 / 3.0 < f1);
    assert!(dis >= f1 - 1e-6, "{text}");
}

#[test]
fn validate_reports_violations() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(
        &bad,
        r#"{"range": 10, "nodes": ["a", "b"],
            "edges": [{"u": "a", "v": "b", "length": -1}],
            "demands": [{"origin": "a", "destination": "a", "volume": 1, "alpha": 0.5}]}"#,
    )
    .unwrap();
    let o = frlp(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("length must be positive"), "{err}");
    assert!(err.contains("origin equals destination"), "{err}");
    assert!(err.contains("alpha must be >= 1"), "{err}");

    let garbled = dir.path().join("garbled.json");
    std::fs::write(&garbled, "{ not json").unwrap();
    assert_eq!(frlp(&["validate", garbled.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn validate_accepts_generated_files() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["fig2", "fig7", "fig8", "prop5b", "random"] {
        let path = dir.path().join(format!("{name}.json"));
        assert!(frlp(&["generate", "--name", name, "--out", path.to_str().unwrap()]).status.success());
        let o = frlp(&["validate", path.to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn check_reproduces_the_example_split() {
    let orig = stdout(&frlp(&["check", "--name", "fig7", "--stations", "4", "--variant", "original"]));
    assert!(orig.contains("not served"), "{orig}");
    let cyc = stdout(&frlp(&["check", "--name", "fig7", "--stations", "4", "--variant", "cyclic"]));
    assert!(cyc.contains(": served"), "{cyc}");
    assert!(cyc.contains("witness (1, 2, 4, 1)"), "{cyc}");
}

#[test]
fn trace_lists_five_extractions_ending_at_the_sink() {
    let o = frlp(&["check", "--name", "fig8", "--stations", "3", "--trace"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let steps: Vec<&str> = text
        .lines()
        .filter(|l| l.trim_start().chars().next().is_some_and(|c| c.is_ascii_digit()))
        .collect();
    assert_eq!(steps.len(), 5, "{text}");
    assert!(steps[4].ends_with("1:(1, 1, 3, 1, 2)  sink"), "{text}");
}

#[test]
fn enumerate_matches_the_cycle_table() {
    let text = stdout(&frlp(&["enumerate", "--name", "fig7", "--variant", "cyclic"]));
    for route in ["(1, 2, 1)", "(1, 2, 3, 1)", "(1, 2, 4, 1)", "(1, 3, 2, 3, 1)"] {
        assert!(text.contains(route), "{route} missing from\n{text}");
    }
    assert!(text.contains("4 routes"));
}

#[test]
fn solve_and_oracle_agree() {
    for variant in ["original", "cyclic"] {
        let args = |cmd| {
            vec![
                cmd, "--name", "random", "--seed", "5", "--nodes", "7", "--variant", variant, "--objective", "maxcover",
                "--budget", "2",
            ]
        };
        let s = stdout(&frlp(&args("solve")));
        let o = stdout(&frlp(&args("oracle")));
        assert_eq!(value_after(&s, "objective"), value_after(&o, "objective"));
    }
}

#[test]
fn stats_out_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("stats.csv");
    let o = frlp(&[
        "solve",
        "--name",
        "fig7",
        "--alpha-override",
        "1.2",
        "--stats-out",
        path.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    let text = std::fs::read_to_string(Path::new(&path)).unwrap();
    assert!(text.starts_with("instance,routing,alpha,time_s,separation_time_s,bb_nodes,cuts\n"));
    assert!(text.lines().nth(1).unwrap().starts_with("fig7,cyclic,1.2,"));
}

#[test]
fn exit_codes() {
    assert_eq!(frlp(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(frlp(&["solve", "--bogus"]).status.code(), Some(1));
    assert_eq!(frlp(&["--help"]).status.code(), Some(0));
    assert_eq!(frlp(&["solve", "--name", "nope"]).status.code(), Some(1));
    // a forced-closed network cannot serve the demand
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("closed.json");
    std::fs::write(
        &path,
        r#"{"range": 10, "nodes": ["a", "b"],
            "edges": [{"u": "a", "v": "b", "length": 4}],
            "demands": [{"origin": "a", "destination": "b", "volume": 1, "alpha": 1}],
            "placement": {"closed": ["a", "b"]}}"#,
    )
    .unwrap();
    let o = frlp(&["solve", path.to_str().unwrap(), "--objective", "minstations"]);
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stderr));
}
