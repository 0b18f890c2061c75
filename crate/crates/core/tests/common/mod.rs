#![allow(dead_code)]

use std::path::PathBuf;

use taguchi_core::analysis::analyze_with_snr;
use taguchi_core::config::ProjectConfig;
use taguchi_core::{AnalysisReport, Design, ResultTable};

pub fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../fixtures/injection_moulding")
        .join(name)
}

pub fn read_fixture(name: &str) -> String {
    std::fs::read_to_string(fixture(name)).unwrap()
}

/// The case study loaded through the public config/CSV path.
pub fn case_study() -> (Design, ResultTable, AnalysisReport) {
    let config = ProjectConfig::load(fixture("config.toml")).unwrap();
    let (design, _) = config.design(None).unwrap();
    let results = ResultTable::read_csv(read_fixture("results.csv").as_bytes()).unwrap();
    let report = analyze_with_snr(&design, &results, &config.response_specs().unwrap()).unwrap();
    (design, results, report)
}

/// Independent oracle: the nine runs typed in as
/// (mould °C, melt °C, injection MPa, holding s, cycle time s, shrinkage %).
pub const RUNS: [[f64; 6]; 9] = [
    [75.0, 215.0, 47.0, 3.5, 49.4161, 2.2],
    [75.0, 220.0, 53.0, 4.5, 51.0519, 2.183],
    [75.0, 230.0, 58.0, 5.5, 54.4495, 2.571],
    [80.0, 215.0, 53.0, 5.5, 29.3798, 1.992],
    [80.0, 220.0, 58.0, 3.5, 30.4038, 2.093],
    [80.0, 230.0, 47.0, 4.5, 32.3585, 2.062],
    [85.0, 215.0, 58.0, 4.5, 22.925, 1.972],
    [85.0, 220.0, 47.0, 5.5, 23.4541, 1.961],
    [85.0, 230.0, 53.0, 3.5, 24.4298, 2.144],
];

pub const LEVELS: [[f64; 3]; 4] = [
    [75.0, 80.0, 85.0],
    [215.0, 220.0, 230.0],
    [47.0, 53.0, 58.0],
    [3.5, 4.5, 5.5],
];

pub const CYCLE: usize = 4;
pub const SHRINK: usize = 5;

pub fn oracle_grand_mean(response: usize) -> f64 {
    RUNS.iter().map(|r| r[response]).sum::<f64>() / RUNS.len() as f64
}

/// Mean response over the runs whose `factor` column equals `value`.
pub fn oracle_level_mean(factor: usize, value: f64, response: usize) -> f64 {
    let hits: Vec<f64> = RUNS
        .iter()
        .filter(|r| r[factor] == value)
        .map(|r| r[response])
        .collect();
    hits.iter().sum::<f64>() / hits.len() as f64
}

/// Grand mean plus each factor's deviation at the given physical settings.
pub fn oracle_prediction(settings: [f64; 4], response: usize) -> f64 {
    let g = oracle_grand_mean(response);
    g + (0..4)
        .map(|f| oracle_level_mean(f, settings[f], response) - g)
        .sum::<f64>()
}

/// Single-replicate smaller-the-better ratio: 10·log10(1/y²).
pub fn oracle_snr(y: f64) -> f64 {
    10.0 * (1.0 / (y * y)).log10()
}

pub fn rel_close(a: f64, b: f64, rel: f64) -> bool {
    (a - b).abs() <= rel * a.abs().max(b.abs()).max(f64::MIN_POSITIVE)
}
