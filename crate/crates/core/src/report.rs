//! Machine (JSON) and human (aligned text) renderings of analysis results,
//! plus main-effects plot data.
//!
//! JSON documents carry `schema_version` 1, show levels 1-based, and keep
//! full `f64` precision. Text output rounds half away from zero to the
//! configured [`Precision`].

use serde::{Deserialize, Serialize};

use crate::analysis::{
    AnalysisReport, Objective, Prediction, ResponseReport, WeightedRecommendation,
};
use crate::config::Precision;

pub const SCHEMA_VERSION: u32 = 1;

/// Rounds half away from zero to `places` decimals and formats with exactly
/// that many.
pub fn fixed(x: f64, places: usize) -> String {
    let scale = 10f64.powi(places as i32);
    let mut r = (x * scale).round() / scale;
    if r == 0.0 {
        r = 0.0;
    }
    format!("{r:.places$}")
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorDoc {
    pub name: String,
    pub unit: String,
    pub levels: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunDoc {
    pub run: usize,
    pub replicates: usize,
    pub mean: f64,
    pub snr: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FactorEffectDoc {
    pub factor: String,
    pub level_means: Vec<f64>,
    pub delta: f64,
    pub rank: usize,
    /// 1-based.
    pub optimal_level: usize,
    pub optimal_value: String,
    pub tie: bool,
    pub snr_level_means: Option<Vec<f64>>,
    pub snr_delta: Option<f64>,
    pub snr_rank: Option<usize>,
    pub snr_optimal_level: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResponseDoc {
    pub name: String,
    pub unit: String,
    pub objective: Objective,
    pub grand_mean: f64,
    pub snr_grand_mean: Option<f64>,
    pub balanced: bool,
    pub runs: Vec<RunDoc>,
    pub effects: Vec<FactorEffectDoc>,
    pub predicted_optimum: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WeightedDoc {
    pub method: String,
    pub weights: Vec<(String, f64)>,
    /// 1-based.
    pub levels: Vec<usize>,
    pub values: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisDoc {
    pub schema_version: u32,
    pub array: String,
    pub runs: usize,
    pub factors: Vec<FactorDoc>,
    pub responses: Vec<ResponseDoc>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub weighted_recommendation: Option<WeightedDoc>,
}

const WEIGHTED_METHOD: &str =
    "heuristic weighted sum of level-mean offsets normalised by each response's largest delta; not a Taguchi statistic";

impl AnalysisDoc {
    pub fn new(
        report: &AnalysisReport<f64>,
        weighted: Option<&WeightedRecommendation<f64>>,
    ) -> Self {
        let factors = report
            .factors
            .iter()
            .map(|f| FactorDoc {
                name: f.name().to_string(),
                unit: f.unit().to_string(),
                levels: f.labels().to_vec(),
            })
            .collect();
        let responses = report
            .responses
            .iter()
            .map(|r| response_doc(report, r))
            .collect();
        let weighted_recommendation = weighted.map(|w| WeightedDoc {
            method: WEIGHTED_METHOD.to_string(),
            weights: w.weights.clone(),
            levels: w.levels.iter().map(|l| l + 1).collect(),
            values: report
                .factors
                .iter()
                .zip(&w.levels)
                .map(|(f, &l)| f.labels()[l].clone())
                .collect(),
        });
        Self {
            schema_version: SCHEMA_VERSION,
            array: report.array.clone(),
            runs: report.runs,
            factors,
            responses,
            weighted_recommendation,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serialises");
        s.push('\n');
        s
    }
}

fn response_doc(report: &AnalysisReport<f64>, r: &ResponseReport<f64>) -> ResponseDoc {
    let snr = r.snr.as_ref();
    let runs = (0..report.runs)
        .map(|i| RunDoc {
            run: i + 1,
            replicates: r.replicates[i],
            mean: r.run_means[i],
            snr: snr.map(|s| s.per_run[i]),
        })
        .collect();
    let effects = report
        .factors
        .iter()
        .enumerate()
        .map(|(f, factor)| FactorEffectDoc {
            factor: factor.name().to_string(),
            level_means: r.level_means.row(f).to_vec(),
            delta: r.ranking.deltas[f],
            rank: r.ranking.ranks[f],
            optimal_level: r.optimal.levels[f] + 1,
            optimal_value: factor.labels()[r.optimal.levels[f]].clone(),
            tie: r.optimal.ties[f],
            snr_level_means: snr.map(|s| s.level_means.row(f).to_vec()),
            snr_delta: snr.map(|s| s.ranking.deltas[f]),
            snr_rank: snr.map(|s| s.ranking.ranks[f]),
            snr_optimal_level: snr.map(|s| s.optimal.levels[f] + 1),
        })
        .collect();
    ResponseDoc {
        name: r.spec.name.clone(),
        unit: r.spec.unit.clone(),
        objective: r.spec.objective,
        grand_mean: r.grand_mean,
        snr_grand_mean: snr.map(|s| s.grand_mean),
        balanced: r.balanced,
        runs,
        effects,
        predicted_optimum: r.predict_optimum(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SettingDoc {
    pub factor: String,
    pub unit: String,
    /// 1-based.
    pub level: usize,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionDoc {
    pub schema_version: u32,
    pub response: String,
    pub unit: String,
    pub objective: Objective,
    pub grand_mean: f64,
    pub settings: Vec<SettingDoc>,
    pub predicted: f64,
    pub confirmation: Option<f64>,
    pub error_percent: Option<f64>,
}

impl PredictionDoc {
    pub fn new(p: &Prediction<f64>) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            response: p.response.name.clone(),
            unit: p.response.unit.clone(),
            objective: p.response.objective,
            grand_mean: p.grand_mean,
            settings: p
                .settings
                .iter()
                .map(|s| SettingDoc {
                    factor: s.factor.clone(),
                    unit: s.unit.clone(),
                    level: s.level + 1,
                    value: s.label.clone(),
                })
                .collect(),
            predicted: p.predicted,
            confirmation: p.confirmation,
            error_percent: p.error_percent,
        }
    }

    pub fn from_json(text: &str) -> Result<Self, String> {
        let doc: Self = serde_json::from_str(text).map_err(|e| e.to_string())?;
        if doc.schema_version != SCHEMA_VERSION {
            return Err(format!("unsupported schema_version {}", doc.schema_version));
        }
        Ok(doc)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("prediction serialises");
        s.push('\n');
        s
    }

    pub fn to_text(&self, precision: &Precision) -> String {
        let mut out = format!(
            "Prediction for {}{} ({})\n",
            self.response,
            unit_suffix(&self.unit),
            self.objective
        );
        let mut t = TextTable::new(vec!["factor".into(), "level".into(), "value".into()]);
        for s in &self.settings {
            t.push(vec![
                heading(&s.factor, &s.unit),
                s.level.to_string(),
                s.value.clone(),
            ]);
        }
        out.push_str(&t.render());
        out.push_str(&format!(
            "grand mean: {}\npredicted:  {}\n",
            fixed(self.grand_mean, precision.mean),
            fixed(self.predicted, precision.prediction)
        ));
        if let Some(c) = self.confirmation {
            out.push_str(&format!("confirmed:  {}\n", fixed(c, precision.prediction)));
        }
        if let Some(e) = self.error_percent {
            out.push_str(&format!(
                "error:      {} %\n",
                fixed(e, precision.error_percent)
            ));
        }
        out
    }
}

fn unit_suffix(unit: &str) -> String {
    if unit.is_empty() {
        String::new()
    } else {
        format!(" [{unit}]")
    }
}

fn heading(name: &str, unit: &str) -> String {
    if unit.is_empty() {
        name.to_string()
    } else {
        format!("{name}({unit})")
    }
}

/// Main-effects plot data: `response,factor,level,mean`, one row per factor
/// level per response, levels given by their declared value.
pub fn plot_data_csv(report: &AnalysisReport<f64>) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["response", "factor", "level", "mean"])
        .expect("in-memory write");
    for r in &report.responses {
        for (f, factor) in report.factors.iter().enumerate() {
            for (l, label) in factor.labels().iter().enumerate() {
                w.write_record([
                    r.spec.name.as_str(),
                    factor.name(),
                    label.as_str(),
                    &r.level_means.get(f, l).to_string(),
                ])
                .expect("in-memory write");
            }
        }
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("UTF-8")
}

/// Human-readable report: per response, the run table with S/N and the
/// level-means table with deltas, ranks and optimal levels.
pub fn analysis_text(doc: &AnalysisDoc, precision: &Precision) -> String {
    let mut out = format!(
        "Array {} ({} runs), {} factors\n",
        doc.array,
        doc.runs,
        doc.factors.len()
    );
    for r in &doc.responses {
        out.push_str(&format!(
            "\nResponse {}{} ({})\n",
            r.name,
            unit_suffix(&r.unit),
            r.objective
        ));
        if !r.balanced {
            out.push_str("warning: array columns are not balanced\n");
        }
        let mut runs = TextTable::new(vec![
            "run".into(),
            "n".into(),
            "mean".into(),
            "S/N (dB)".into(),
        ]);
        for run in &r.runs {
            runs.push(vec![
                run.run.to_string(),
                run.replicates.to_string(),
                fixed(run.mean, precision.mean),
                run.snr
                    .map(|s| fixed(s, precision.snr))
                    .unwrap_or_else(|| "-".into()),
            ]);
        }
        out.push_str(&runs.render());
        out.push_str(&format!(
            "grand mean: {}",
            fixed(r.grand_mean, precision.mean)
        ));
        if let Some(s) = r.snr_grand_mean {
            out.push_str(&format!("   mean S/N: {} dB", fixed(s, precision.snr)));
        }
        out.push('\n');

        let levels = doc
            .factors
            .iter()
            .map(|f| f.levels.len())
            .max()
            .unwrap_or(0);
        let mut header = vec!["factor".to_string()];
        header.extend((1..=levels).map(|l| format!("level {l}")));
        header.extend(["delta".into(), "rank".into(), "optimal".into()]);
        let mut effects = TextTable::new(header);
        for (e, f) in r.effects.iter().zip(&doc.factors) {
            let mut row = vec![heading(&f.name, &f.unit)];
            row.extend((0..levels).map(|l| {
                e.level_means
                    .get(l)
                    .map(|&m| fixed(m, precision.mean))
                    .unwrap_or_default()
            }));
            row.push(fixed(e.delta, precision.mean));
            row.push(e.rank.to_string());
            row.push(format!(
                "{} (level {}){}",
                e.optimal_value,
                e.optimal_level,
                if e.tie { " tie" } else { "" }
            ));
            effects.push(row);
        }
        out.push_str(&effects.render());

        if r.effects.iter().all(|e| e.snr_level_means.is_some()) {
            let mut header = vec!["factor".to_string()];
            header.extend((1..=levels).map(|l| format!("S/N {l}")));
            header.extend(["delta".into(), "rank".into()]);
            let mut snr = TextTable::new(header);
            for (e, f) in r.effects.iter().zip(&doc.factors) {
                let means = e.snr_level_means.as_deref().unwrap_or_default();
                let mut row = vec![heading(&f.name, &f.unit)];
                row.extend((0..levels).map(|l| {
                    means
                        .get(l)
                        .map(|&m| fixed(m, precision.snr))
                        .unwrap_or_default()
                }));
                row.push(
                    e.snr_delta
                        .map(|d| fixed(d, precision.snr))
                        .unwrap_or_default(),
                );
                row.push(e.snr_rank.map(|r| r.to_string()).unwrap_or_default());
                snr.push(row);
            }
            out.push_str("S/N level means (reference):\n");
            out.push_str(&snr.render());
        }
        out.push_str(&format!(
            "predicted optimum: {}\n",
            fixed(r.predicted_optimum, precision.prediction)
        ));
    }
    if let Some(w) = &doc.weighted_recommendation {
        out.push_str(&format!("\nWeighted recommendation ({})\n", w.method));
        let weights: Vec<String> = w.weights.iter().map(|(n, v)| format!("{n}={v}")).collect();
        out.push_str(&format!("weights: {}\n", weights.join(", ")));
        for (f, (l, v)) in doc.factors.iter().zip(w.levels.iter().zip(&w.values)) {
            out.push_str(&format!(
                "  {}: {} (level {})\n",
                heading(&f.name, &f.unit),
                v,
                l
            ));
        }
    }
    out
}

struct TextTable {
    header: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl TextTable {
    fn new(header: Vec<String>) -> Self {
        Self {
            header,
            rows: Vec::new(),
        }
    }

    fn push(&mut self, row: Vec<String>) {
        self.rows.push(row);
    }

    /// First column left-aligned, the rest right-aligned.
    fn render(&self) -> String {
        let width = |c: usize| {
            std::iter::once(&self.header)
                .chain(&self.rows)
                .map(|r| r.get(c).map_or(0, |s| s.chars().count()))
                .max()
                .unwrap_or(0)
        };
        let widths: Vec<usize> = (0..self.header.len()).map(width).collect();
        let line = |cells: &Vec<String>| {
            let mut s = String::new();
            for (c, w) in widths.iter().enumerate() {
                let cell = cells.get(c).map(String::as_str).unwrap_or("");
                let pad = w - cell.chars().count();
                if c == 0 {
                    s.push_str(cell);
                    s.push_str(&" ".repeat(pad));
                } else {
                    s.push_str("  ");
                    s.push_str(&" ".repeat(pad));
                    s.push_str(cell);
                }
            }
            s.trim_end().to_string() + "\n"
        };
        let mut out = line(&self.header);
        for r in &self.rows {
            out.push_str(&line(r));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rounding_is_half_away_from_zero() {
        assert_eq!(fixed(1.25, 1), "1.3");
        assert_eq!(fixed(-1.25, 1), "-1.3");
        assert_eq!(fixed(21.257500000000007, 4), "21.2575");
        assert_eq!(fixed(-33.877369, 2), "-33.88");
        assert_eq!(fixed(-0.0001, 2), "0.00");
        assert_eq!(fixed(7.0, 0), "7");
    }

    #[test]
    fn table_alignment() {
        let mut t = TextTable::new(vec!["name".into(), "v".into()]);
        t.push(vec!["a".into(), "10.5".into()]);
        t.push(vec!["long".into(), "1".into()]);
        assert_eq!(t.render(), "name     v\na     10.5\nlong     1\n");
    }

    #[test]
    fn prediction_doc_round_trips() {
        let doc = PredictionDoc {
            schema_version: 1,
            response: "y".into(),
            unit: "s".into(),
            objective: Objective::SmallerTheBetter,
            grand_mean: 2.0,
            settings: vec![SettingDoc {
                factor: "f".into(),
                unit: "".into(),
                level: 2,
                value: "3.5".into(),
            }],
            predicted: 1.5,
            confirmation: None,
            error_percent: None,
        };
        assert_eq!(PredictionDoc::from_json(&doc.to_json()).unwrap(), doc);
        let v2 = doc
            .to_json()
            .replace("\"schema_version\": 1", "\"schema_version\": 2");
        assert!(PredictionDoc::from_json(&v2).is_err());
        let text = doc.to_text(&Precision::default());
        assert!(text.contains("predicted:  1.5000"), "{text}");
    }
}
