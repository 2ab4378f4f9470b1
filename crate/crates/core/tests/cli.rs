use std::fs;
use std::path::Path;

use mpue_sim::cli::cli_main;
use mpue_sim::kpi::KpiReport;

fn run(args: &[&str]) -> i32 {
    let mut argv = vec!["mpue-sim"];
    argv.extend_from_slice(args);
    cli_main(argv)
}

fn small(dir: &Path) -> Vec<String> {
    vec![
        "--set".into(),
        "n_ues=6".into(),
        "--set".into(),
        "sim_duration_s=3".into(),
        "--out-dir".into(),
        dir.display().to_string(),
    ]
}

#[test]
fn run_writes_report_and_log() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = vec![
        "run".to_string(),
        "--seed".into(),
        "7".into(),
        "--trace-links".into(),
    ];
    args.extend(small(tmp.path()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(run(&args), 0);
    for f in [
        "kpi_report.json",
        "kpi_report.csv",
        "events.jsonl",
        "trace_links.csv",
    ] {
        assert!(tmp.path().join(f).exists(), "{f} missing");
    }
    assert!(!tmp.path().join("trace_motion.csv").exists());
    let report: KpiReport =
        serde_json::from_str(&fs::read_to_string(tmp.path().join("kpi_report.json")).unwrap())
            .unwrap();
    assert_eq!(report.seed, 7);
    assert_eq!(report.n_ues, 6);
    let csv = fs::read_to_string(tmp.path().join("kpi_report.csv")).unwrap();
    assert!(
        csv.starts_with("scheme,k_b,o_a3,t_ttt,pct_success,pct_fast_ho,pct_failure,outage_pct\n")
    );
    let links = fs::read_to_string(tmp.path().join("trace_links.csv")).unwrap();
    assert!(links.starts_with("time_ms,ue,cell,beam,panel,rsrp_dbm,sinr_db\n"));
    assert!(links.lines().count() > 1);
}

#[test]
fn replay_matches_the_run() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args = vec!["run".to_string(), "--set".into(), "ue_model=mpue_a1".into()];
    args.extend(small(tmp.path()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(run(&args), 0);
    let log = tmp.path().join("events.jsonl");
    let report = tmp.path().join("kpi_report.json");
    assert_eq!(
        run(&[
            "replay",
            log.to_str().unwrap(),
            "--compare",
            report.to_str().unwrap()
        ]),
        0
    );

    // A tampered report no longer matches.
    let mut r: KpiReport = serde_json::from_str(&fs::read_to_string(&report).unwrap()).unwrap();
    r.n_success += 1;
    fs::write(&report, serde_json::to_string(&r).unwrap()).unwrap();
    assert_eq!(
        run(&[
            "replay",
            log.to_str().unwrap(),
            "--compare",
            report.to_str().unwrap()
        ]),
        1
    );
}

#[test]
fn sweep_writes_one_row_per_point() {
    let tmp = tempfile::tempdir().unwrap();
    let mut args: Vec<String> = [
        "sweep",
        "--o-a3",
        "1,3",
        "--t-ttt",
        "80",
        "--k-b",
        "4",
        "--schemes",
        "mpue_a3,isotropic",
        "--seeds",
        "1,2",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect();
    args.extend(small(tmp.path()));
    let args: Vec<&str> = args.iter().map(String::as_str).collect();
    assert_eq!(run(&args), 0);
    let csv = fs::read_to_string(tmp.path().join("kpi_report.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 4);
    assert!(rows[0].starts_with("mpue_a3,4,1,80,"));
    assert!(rows[3].starts_with("isotropic,4,3,80,"));
}

#[test]
fn validate_config_reports_bad_fields() {
    let tmp = tempfile::tempdir().unwrap();
    let good = tmp.path().join("good.toml");
    fs::write(&good, "o_a3_db = 3.0\nue_model = \"mpue_a3\"\n").unwrap();
    assert_eq!(run(&["validate-config", good.to_str().unwrap()]), 0);

    let bad = tmp.path().join("bad.toml");
    fs::write(&bad, "gamma_in_db = -9.0\n").unwrap();
    assert_eq!(run(&["validate-config", bad.to_str().unwrap()]), 1);

    let unknown = tmp.path().join("unknown.toml");
    fs::write(&unknown, "not_a_key = 1\n").unwrap();
    assert_eq!(run(&["validate-config", unknown.to_str().unwrap()]), 1);

    assert_eq!(
        run(&[
            "validate-config",
            tmp.path().join("missing.toml").to_str().unwrap()
        ]),
        1
    );
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(run(&["frobnicate"]), 2);
    assert_eq!(run(&["run", "--parallel"]), 2);
    assert_eq!(run(&["run", "--set", "k_b=99"]), 1);
}
