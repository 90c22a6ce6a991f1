use std::fs;
use std::process::{Command, Output};

const BIN: &str = env!("CARGO_BIN_EXE_rspsim");

fn rspsim(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn ghz_run_is_exact_on_every_branch() {
    let out = rspsim(&["run", "--protocol", "ghz", "--theta", "1.1", "--phi", "2.3", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r[1], "2");
        assert_eq!(r[3], "1.000000");
    }
}

#[test]
fn explicit_run_matches_closed_form() {
    let out = rspsim(&[
        "run", "--protocol", "explicit", "--theta", "0", "--phi", "0", "--q", "0.95", "--depth", "10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let field = |name: &str| -> f64 {
        text.lines()
            .find_map(|l| l.strip_prefix(name))
            .unwrap()
            .trim()
            .parse()
            .unwrap()
    };
    let (sim, ana) = (field("simulated_F"), field("analytic_F"));
    assert!((sim - ana).abs() <= 1e-6);
    assert!(field("abs_diff") <= 1e-9);
    assert!((0.95..=1.0).contains(&sim));
}

#[test]
fn degrees_flag_converts() {
    let rad = rspsim(&["run", "--protocol", "ghz", "--theta", "0.5235987755982988", "--phi", "1.5707963267948966"]);
    let deg = rspsim(&["run", "--protocol", "ghz", "--theta", "30", "--phi", "90", "--degrees"]);
    assert_eq!(stdout(&rad), stdout(&deg));
}

#[test]
fn domain_errors_exit_three_without_output() {
    let out = rspsim(&["run", "--protocol", "explicit", "--theta", "3.5", "--q", "0.95", "--depth", "10"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(out.stdout.is_empty());
    let err = String::from_utf8(out.stderr).unwrap();
    assert_eq!(err.lines().count(), 1);
    assert!(err.contains("theta"));
}

#[test]
fn central_gap_points_to_fallbacks() {
    let out = rspsim(&["run", "--protocol", "explicit", "--theta", "0.785", "--q", "0.95", "--depth", "10"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("improved1") && err.contains("appendixB"));
}

#[test]
fn parse_errors_exit_two() {
    for args in [
        &["run", "--protocol", "teleport", "--theta", "0.1"][..],
        &["run", "--protocol", "explicit", "--theta", "x", "--q", "0.9", "--depth", "3"],
        &["run", "--protocol", "explicit", "--theta", "0.1", "--q", "0.9", "--depth", "3", "--m", "2"],
        &["run", "--protocol", "explicit", "--theta", "0.1", "--q", "0.9"],
        &["run", "--protocol", "ghz", "--theta", "0.1", "--mode", "montecarlo", "--trials", "10"],
        &["sweep", "--protocol", "explicit", "--q", "0.95", "--m", "2", "--grid", "1"],
        &["resources", "--kind", "appendixA", "--f-min", "0.9", "--q", "0.9"],
        &["compress", "--q", "0.99", "--p", "0.99"],
    ] {
        let out = rspsim(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(out.stdout.is_empty());
    }
}

#[test]
fn sweep_agrees_and_respects_floor() {
    let out = rspsim(&["sweep", "--protocol", "explicit", "--q", "0.95", "--m", "2", "--grid", "200"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("theta,analytic_F,simulated_F,abs_diff\n"));
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 200);
    let mut last = -1.0;
    for r in &rows {
        let theta: f64 = r[0].parse().unwrap();
        assert!(theta > last);
        last = theta;
        assert!(r[3].parse::<f64>().unwrap() <= 1e-9);
        assert!(r[1].parse::<f64>().unwrap() >= 0.95);
    }
    let two = rspsim(&["sweep", "--protocol", "improved1", "--q", "0.95", "--depth", "10", "--grid", "2"]);
    assert_eq!(csv_rows(&stdout(&two)).len(), 2);
}

#[test]
fn outputs_are_byte_stable() {
    let args = ["sweep", "--protocol", "appendixB", "--q", "0.9", "--depth", "5", "--grid", "50"];
    assert_eq!(rspsim(&args).stdout, rspsim(&args).stdout);
    let mc = [
        "run", "--protocol", "explicit", "--theta", "0.2", "--q", "0.9", "--depth", "4", "--mode",
        "montecarlo", "--trials", "20000", "--seed", "11", "--format", "csv",
    ];
    let a = rspsim(&mc);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, rspsim(&mc).stdout);
}

#[test]
fn resource_tables() {
    let out = rspsim(&["resources", "--kind", "appendixA", "--m", "2", "--q", "0.90,0.95,0.98,0.99", "--format", "table"]);
    assert_eq!(stdout(&out), include_str!("golden/appendix_a_m2.txt"));
    for want in ["17.55", "37.18", "95.95", "193.89"] {
        assert!(stdout(&out).contains(want));
    }
    let out = rspsim(&["resources", "--kind", "improved1", "--f-min", "0.9999", "--q", "0.90", "--format", "table"]);
    assert!(stdout(&out).lines().last().unwrap().ends_with("20.08"));
    let out = rspsim(&["resources", "--kind", "appendixB", "--f-min", "0.97", "--q", "0.98"]);
    let rows = csv_rows(&stdout(&out));
    assert!((rows[0][2].parse::<f64>().unwrap() - 86.15).abs() < 0.01);
}

#[test]
fn resource_curve_is_monotone() {
    let out = rspsim(&["resources", "--kind", "improved1", "--f-min", "0.99", "--q-range", "0.55:0.9", "--samples", "30"]);
    let rows = csv_rows(&stdout(&out));
    assert_eq!(rows.len(), 30);
    let n: Vec<f64> = rows.iter().map(|r| r[1].parse().unwrap()).collect();
    assert!(n.windows(2).all(|w| w[1] > w[0]));
}

#[test]
fn compress_plans() {
    let out = rspsim(&["compress", "--q", "0.99", "--N", "194", "--P", "0.99"]);
    assert_eq!(stdout(&out), include_str!("golden/compress_q099_p099.txt"));
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    assert_eq!(lines[..4], ["M=50", "194", "173", "158"]);

    let out = rspsim(&["compress", "--q", "0.99", "--N", "194", "--P", "0.98"]);
    assert_eq!(stdout(&out).lines().next(), Some("M=29"));
    assert!(String::from_utf8(out.stderr).unwrap().contains("head 2"));

    let strict = rspsim(&["compress", "--q", "0.99", "--N", "194", "--P", "0.98", "--strict"]);
    assert_eq!(strict.status.code(), Some(3));
    assert!(strict.stdout.is_empty());
    assert!(String::from_utf8(strict.stderr).unwrap().contains("head 2"));

    let out = rspsim(&["compress", "--q", "0.95", "--n", "17", "--p", "1.0"]);
    assert_eq!(stdout(&out).lines().next(), Some("M=17"));
}

#[test]
fn output_file_is_written_only_on_success() {
    let dir = std::env::temp_dir().join(format!("rspsim-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let ok = dir.join("ok.csv");
    let out = rspsim(&["sweep", "--protocol", "ghz", "--grid", "3", "--output", ok.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    assert_eq!(fs::read_to_string(&ok).unwrap().lines().count(), 4);
    let bad = dir.join("bad.csv");
    let out = rspsim(&["sweep", "--protocol", "explicit", "--q", "1.5", "--depth", "3", "--output", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!bad.exists());
    fs::remove_dir_all(&dir).unwrap();
}
