use std::fs;
use std::path::Path;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_simulate");

fn simulate(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("simulate runs")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

const TINY: [&str; 8] = ["--grid-size", "8", "--poi-count", "3", "--home-count", "10", "--weeks", "2"];

fn tiny(extra: &[&str]) -> Vec<String> {
    TINY.iter().chain(extra).map(|s| s.to_string()).collect()
}

fn run(args: &[String]) -> Output {
    Command::new(BIN).args(args).output().expect("simulate runs")
}

fn lines(path: &Path) -> Vec<String> {
    fs::read_to_string(path).unwrap().lines().map(str::to_string).collect()
}

#[test]
fn writes_series_and_no_visit_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("res");
    let o = run(&tiny(&["--strategy", "blacklist", "--threshold", "2,4", "--runs", "3", "--out", out.to_str().unwrap()]));
    assert!(o.status.success(), "{}", stderr(&o));

    for th in [2, 4] {
        let series = lines(&out.join(format!("blacklist_th{th}.csv")));
        assert_eq!(series[0], "tick,quality_index,connectivity_index,sdu");
        assert_eq!(series.len(), 1 + 336);
        assert!(series[1].starts_with("0,"));
        for row in &series[1..] {
            let fields: Vec<&str> = row.split(',').collect();
            assert_eq!(fields.len(), 4);
            for f in &fields[1..] {
                assert_eq!(f.split('.').nth(1).map(str::len), Some(6), "{row}");
            }
        }
        let nv = lines(&out.join(format!("blacklist_th{th}_novisit.csv")));
        assert_eq!(nv, ["week,no_visit_count", nv[1].as_str(), nv[2].as_str()]);
        assert!(nv[1].starts_with("1,") && nv[2].starts_with("2,"));
    }
}

#[test]
fn config_file_with_flag_overrides() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.toml");
    let out = dir.path().join("out");
    fs::write(
        &cfg,
        format!(
            "grid_size = 8\npoi_count = 3\nhome_count = 10\nweeks = 5\nruns = 2\nthreshold = [2, 3]\nstrategy = all\nout = {:?}\n",
            out.to_str().unwrap()
        ),
    )
    .unwrap();
    let o = simulate(&["--config", cfg.to_str().unwrap(), "--weeks", "1", "--threshold", "7"]);
    assert!(o.status.success(), "{}", stderr(&o));

    let mut names: Vec<String> = fs::read_dir(&out)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .collect();
    names.sort();
    let mut expected: Vec<String> = ["as_planned", "blacklist", "replace", "replace_with_closure"]
        .iter()
        .flat_map(|s| [format!("{s}_th7.csv"), format!("{s}_th7_novisit.csv")])
        .collect();
    expected.sort();
    assert_eq!(names, expected);
    // --weeks 1 beat the file's 5.
    assert_eq!(lines(&out.join("replace_th7.csv")).len(), 1 + 168);
}

#[test]
fn missing_config_is_a_config_error() {
    let o = simulate(&["--config", "/nonexistent/exp.toml"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("config file not found"), "{}", stderr(&o));
}

#[test]
fn unknown_key_and_bad_values_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    for (body, needle) in [
        ("colour = 3\n", "unknown config key `colour`"),
        ("threshold = 0\n", "threshold"),
        ("strategy = \"sometimes\"\n", "unknown strategy"),
        ("grid_size = 3\n", "grid_size"),
        ("runs = [1\n", "malformed config"),
        ("strategy = often # bare word\n", "unknown strategy `often`"),
        ("alternative_scan = \"hourly\"\n", "alternative_scan"),
    ] {
        let cfg = dir.path().join("bad.toml");
        fs::write(&cfg, body).unwrap();
        let o = simulate(&["--config", cfg.to_str().unwrap()]);
        assert_eq!(o.status.code(), Some(2), "{body}");
        assert!(stderr(&o).contains(needle), "{body}: {}", stderr(&o));
    }
}

#[test]
fn unwritable_output_dir_fails_cleanly() {
    let dir = tempfile::tempdir().unwrap();
    let blocker = dir.path().join("file");
    fs::write(&blocker, "not a directory").unwrap();
    let out = blocker.join("res");
    let o = run(&tiny(&["--runs", "1", "--out", out.to_str().unwrap()]));
    assert_eq!(o.status.code(), Some(1));
    let err = stderr(&o);
    assert!(err.contains("cannot write output") && err.contains("file/res"), "{err}");
}

#[test]
fn flag_validation() {
    let o = run(&tiny(&["--strategy", "nope"]));
    assert_eq!(o.status.code(), Some(2));
    let o = run(&tiny(&["--runs", "0"]));
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("runs"));
}

#[test]
fn same_seed_same_bytes_different_seed_different_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let read = |name: &str, seed: &str, jobs: &str| {
        let out = dir.path().join(name);
        let o = run(&tiny(&["--strategy", "replace_with_closure", "--threshold", "2", "--runs", "4", "--seed", seed, "--jobs", jobs, "--out", out.to_str().unwrap()]));
        assert!(o.status.success(), "{}", stderr(&o));
        fs::read(out.join("replace_with_closure_th2.csv")).unwrap()
    };
    let a = read("a", "9", "1");
    assert_eq!(a, read("b", "9", "2"));
    assert_ne!(a, read("c", "10", "1"));
}
