use std::process::{Command, Output};

fn pin3(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pin3"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn build_trivial_group() {
    let o = pin3(&["build", "C_n:n=1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("order 1"));
}

#[test]
fn exit_codes() {
    assert_eq!(pin3(&["build", "Q_8"]).status.code(), Some(2));
    assert_eq!(pin3(&["reproduce", "T4"]).status.code(), Some(2));
    assert_eq!(pin3(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(pin3(&["mckay", "BD_4n:n=5000"]).status.code(), Some(3));
    assert_eq!(pin3(&["chartable", "BT_24", "--format", "dot"]).status.code(), Some(2));
    let o = pin3(&["build", "Q_8"]);
    let err = String::from_utf8(o.stderr).unwrap();
    assert_eq!(err.lines().count(), 1, "{err}");
}

#[test]
fn chartable_layout() {
    let o = pin3(&["chartable", "BT_24"]);
    let s = stdout(&o);
    let lines: Vec<&str> = s.lines().collect();
    assert!(lines[1].starts_with("Class"));
    assert!(lines[2].starts_with("Size"));
    assert!(lines[3].starts_with("Order"));
    assert_eq!(lines.len(), 4 + 7);
}

#[test]
fn containments_fig3_all_ok() {
    let o = pin3(&["containments", "--figure", "fig3"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.lines().count() > 5);
    assert!(s.lines().all(|l| l.ends_with("OK")), "{s}");
}

#[test]
fn dot_of_binary_tetrahedral() {
    let s = stdout(&pin3(&["mckay", "BT_24", "--format", "dot"]));
    assert!(s.starts_with("graph "));
    assert_eq!(s.lines().filter(|l| l.contains(" [label=")).count(), 7);
    assert_eq!(s.lines().filter(|l| l.contains(" -- ")).count(), 6);
}

#[test]
fn decorated_dot_carries_types() {
    let s = stdout(&pin3(&["decorate", "BT_24<BO_48", "--format", "dot"]));
    let types: Vec<&str> = s
        .lines()
        .filter_map(|l| l.split("dyson=\"").nth(1))
        .map(|r| r.split('"').next().unwrap())
        .collect();
    assert_eq!(types, ["I", "V", "V", "VIII", "VI", "VI", "I"]);
}

#[test]
fn quiver_dot_is_a_digraph() {
    let s = stdout(&pin3(&["mckay", "B-2T_48", "--format", "dot"]));
    assert!(s.starts_with("digraph "));
    assert!(!s.contains(" -- "));
    assert_eq!(s.lines().filter(|l| l.contains(" -> ")).count(), 24);
}

#[test]
fn byte_determinism() {
    for args in [
        &["reproduce", "all", "--format", "json"][..],
        &["decorate", "BI_120", "--format", "json"][..],
        &["list-gradings", "--n", "3"][..],
    ] {
        let a = pin3(args);
        let b = pin3(args);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        assert!(!a.stdout.is_empty());
    }
}

#[test]
fn reproduce_all_passes_with_json_report() {
    let o = pin3(&["reproduce", "all", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    let reports = v.as_array().unwrap();
    assert_eq!(reports.len(), 21);
    assert!(reports.iter().all(|r| r["passed"] == true));
}

#[test]
fn out_file_matches_stdout() {
    let dir = std::env::temp_dir().join(format!("pin3-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bt.json");
    let o = pin3(&["chartable", "BT_24", "--format", "json", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let direct = pin3(&["chartable", "BT_24", "--format", "json"]).stdout;
    assert_eq!(std::fs::read(&path).unwrap(), direct);
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn kleinian_reports_exponent() {
    let s = stdout(&pin3(&["kleinian", "--n", "4"]));
    assert!(s.contains("k = 5: holds"), "{s}");
    assert!(s.contains("with exponent n = 4 instead: fails"), "{s}");
}
