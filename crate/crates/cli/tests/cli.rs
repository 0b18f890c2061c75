use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/injection_moulding")
        .join(name)
}

fn taguchi(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_taguchi"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = taguchi(args);
    assert!(
        out.status.success(),
        "taguchi {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn config() -> String {
    fixture("config.toml").to_string_lossy().into_owned()
}

fn results() -> String {
    fixture("results.csv").to_string_lossy().into_owned()
}

fn json(text: &str) -> Value {
    serde_json::from_str(text).expect("valid json")
}

#[test]
fn design_emits_the_l9_run_sheet() {
    let sheet = ok(&["design", &config()]);
    let rows: Vec<&str> = sheet.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(
        rows,
        [
            "run,mould_temperature(°C),melt_temperature(°C),injection_pressure(MPa),holding_time(s)",
            "1,75,215,47,3.5",
            "2,75,220,53,4.5",
            "3,75,230,58,5.5",
            "4,80,215,53,5.5",
            "5,80,220,58,3.5",
            "6,80,230,47,4.5",
            "7,85,215,58,4.5",
            "8,85,220,47,5.5",
            "9,85,230,53,3.5",
        ]
    );
}

#[test]
fn auto_selection_picks_l9_and_says_so() {
    let sheet = ok(&["design", &config(), "--array", "auto"]);
    assert!(
        sheet.lines().next().unwrap().contains("L9 (auto-selected)"),
        "{sheet}"
    );
    assert_eq!(sheet.lines().filter(|l| !l.starts_with('#')).count(), 10);
}

#[test]
fn five_three_level_factors_do_not_fit_l9() {
    let dir = TempDir::new().unwrap();
    let mut text = std::fs::read_to_string(fixture("config.toml")).unwrap();
    text.push_str("\n[[factors]]\nname = \"cooling_time\"\nunit = \"s\"\nlevels = [10, 12, 14]\n");
    let path = dir.path().join("five.toml");
    std::fs::write(&path, text).unwrap();
    let out_file = dir.path().join("sheet.csv");
    let out = taguchi(&[
        "design",
        path.to_str().unwrap(),
        "--out",
        out_file.to_str().unwrap(),
    ]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.starts_with("error:"), "{err}");
    assert!(err.contains("L9"), "{err}");
    assert!(!out_file.exists(), "no partial output on failure");

    // auto mode moves up to L27 instead
    let sheet = ok(&["design", path.to_str().unwrap(), "--array", "auto"]);
    assert!(sheet.contains("L27"), "{sheet}");
}

#[test]
fn analyze_reports_snr_ranks_and_optimum() {
    let report = json(&ok(&["analyze", &config(), &results()]));
    let responses = report["responses"].as_array().unwrap();
    let expected_ranks = [[1, 2, 4, 3], [1, 2, 3, 4]];
    for (r, want) in responses.iter().zip(expected_ranks) {
        let ranks: Vec<u64> = r["effects"]
            .as_array()
            .unwrap()
            .iter()
            .map(|e| e["rank"].as_u64().unwrap())
            .collect();
        assert_eq!(ranks, want);
        assert_eq!(r["runs"].as_array().unwrap().len(), 9);
    }
    let run1 = &responses[0]["runs"][0];
    assert!((run1["snr"].as_f64().unwrap() - -20.0 * 49.4161f64.log10()).abs() < 1e-9);
    assert!((responses[0]["predicted_optimum"].as_f64().unwrap() - 21.2575).abs() < 1e-9);
}

#[test]
fn analyze_text_and_plot_data() {
    let dir = TempDir::new().unwrap();
    let plot = dir.path().join("plot.csv");
    let text = ok(&[
        "analyze",
        &config(),
        &results(),
        "--format",
        "text",
        "--plot-data",
        plot.to_str().unwrap(),
    ]);
    assert!(text.contains("-33.88"), "{text}");
    assert!(text.contains("predicted optimum: 21.2575"), "{text}");
    let csv = std::fs::read_to_string(plot).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("response,factor,level,mean"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(
        rows.iter().filter(|l| l.starts_with("cycle_time,")).count(),
        12
    );
    assert_eq!(
        rows.iter().filter(|l| l.starts_with("shrinkage,")).count(),
        12
    );
}

#[test]
fn json_output_is_deterministic_and_matches_the_golden_file() {
    let first = ok(&["analyze", &config(), &results()]);
    let second = ok(&["analyze", &config(), &results()]);
    assert_eq!(first, second);

    let dir = TempDir::new().unwrap();
    let out = dir.path().join("report.json");
    ok(&[
        "analyze",
        &config(),
        &results(),
        "--out",
        out.to_str().unwrap(),
    ]);
    let written = std::fs::read(&out).unwrap();
    let golden = std::fs::read(fixture("expected_report.json")).unwrap();
    assert_eq!(written, golden);
}

#[test]
fn weighted_compromise_is_opt_in() {
    let plain = json(&ok(&["analyze", &config(), &results()]));
    assert!(plain.get("weighted_recommendation").is_none());
    let weighted = json(&ok(&[
        "analyze",
        &config(),
        &results(),
        "--weights",
        "cycle_time=1,shrinkage=1",
    ]));
    assert!(weighted["weighted_recommendation"].is_object());
    let bad = taguchi(&["analyze", &config(), &results(), "--weights", "nope=1"]);
    assert!(!bad.status.success());
}

#[test]
fn predict_at_the_optimum_and_at_an_override() {
    let ct = json(&ok(&[
        "predict",
        &config(),
        &results(),
        "--response",
        "cycle_time",
    ]));
    assert!((ct["predicted"].as_f64().unwrap() - 21.2575).abs() < 1e-9);
    let values: Vec<&str> = ct["settings"]
        .as_array()
        .unwrap()
        .iter()
        .map(|s| s["value"].as_str().unwrap())
        .collect();
    assert_eq!(values, ["85", "215", "53", "3.5"]);

    let sh = json(&ok(&[
        "predict",
        &config(),
        &results(),
        "--response",
        "shrinkage",
    ]));
    assert!((sh["predicted"].as_f64().unwrap() - 1.834333).abs() < 1e-6);

    // L9 with four factors is saturated: run 1's own settings reproduce run 1
    for levels in [
        "75,215,47,3.5",
        "mould_temperature=75,melt_temperature=215,injection_pressure=47,holding_time=3.5",
    ] {
        let p = json(&ok(&[
            "predict",
            &config(),
            &results(),
            "--response",
            "cycle_time",
            "--levels",
            levels,
        ]));
        assert!((p["predicted"].as_f64().unwrap() - 49.4161).abs() < 1e-9);
    }

    let bad = taguchi(&[
        "predict",
        &config(),
        &results(),
        "--response",
        "cycle_time",
        "--levels",
        "70,215,47,3.5",
    ]);
    assert!(!bad.status.success());
    let unknown = taguchi(&["predict", &config(), &results(), "--response", "weight"]);
    assert!(!unknown.status.success());
}

#[test]
fn validate_computes_error_percent() {
    let dir = TempDir::new().unwrap();
    let check = |response: &str, confirmed: &str, want: f64| {
        let p = dir.path().join(format!("{response}.json"));
        ok(&[
            "predict",
            &config(),
            &results(),
            "--response",
            response,
            "--out",
            p.to_str().unwrap(),
        ]);
        let v = json(&ok(&[
            "validate",
            p.to_str().unwrap(),
            "--confirmed",
            confirmed,
        ]));
        let e = v["error_percent"].as_f64().unwrap();
        assert!((e - want).abs() < 0.01, "{response}: {e}");
        p
    };
    check("cycle_time", "22.92", 7.25);
    let p = check("shrinkage", "1.98", 7.36);

    let predicted = json(&std::fs::read_to_string(&p).unwrap())["predicted"]
        .as_f64()
        .unwrap()
        .to_string();
    let same = json(&ok(&[
        "validate",
        p.to_str().unwrap(),
        "--confirmed",
        &predicted,
    ]));
    assert_eq!(same["error_percent"].as_f64().unwrap(), 0.0);

    for bad in ["0", "-1"] {
        let out = taguchi(&[
            "validate",
            p.to_str().unwrap(),
            &format!("--confirmed={bad}"),
        ]);
        assert!(!out.status.success(), "confirmed {bad} accepted");
    }
}

#[test]
fn surrogate_round_trip() {
    let dir = TempDir::new().unwrap();
    let s = dir.path().join("surrogate.json");
    ok(&[
        "fit-surrogate",
        &config(),
        &results(),
        "--response",
        "cycle_time",
        "--out",
        s.to_str().unwrap(),
    ]);
    let at_optimum = ok(&["evaluate", s.to_str().unwrap()]);
    assert!(at_optimum.contains("21.2575"), "{at_optimum}");
    let at_run1 = ok(&["evaluate", s.to_str().unwrap(), "--levels", "75,215,47,3.5"]);
    assert!(at_run1.contains("49.4161"), "{at_run1}");
    let off_grid = taguchi(&["evaluate", s.to_str().unwrap(), "--levels", "76,215,47,3.5"]);
    assert!(!off_grid.status.success());
}

#[test]
fn array_listing_and_verification() {
    let l9 = ok(&["array", "L9", "--verify"]);
    assert!(l9.contains("PASS"), "{l9}");
    let unknown = taguchi(&["array", "L7"]);
    assert!(!unknown.status.success());
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("L27"));
}

#[test]
fn failures_leave_no_partial_files() {
    let dir = TempDir::new().unwrap();
    let broken = dir.path().join("results.csv");
    std::fs::write(&broken, "run,cycle_time,shrinkage\n1,49.4,2.2\n2,abc,2.1\n").unwrap();
    let out = dir.path().join("report.json");
    let res = taguchi(&[
        "analyze",
        &config(),
        broken.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(!res.status.success());
    assert!(!out.exists());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 1);

    let missing = taguchi(&["analyze", &config(), "/nonexistent/results.csv"]);
    assert!(!missing.status.success());
    assert!(String::from_utf8_lossy(&missing.stderr).starts_with("error:"));
}
