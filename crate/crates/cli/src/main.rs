//! `taguchi`: file-based design, analysis, prediction and validation.

use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};

use taguchi_core::analysis::{analyze_with_snr, error_percent, weighted_levels};
use taguchi_core::arrays::{get_array, verify_orthogonality};
use taguchi_core::config::{Precision, ProjectConfig};
use taguchi_core::evaluators::fit_surrogate;
use taguchi_core::report::{analysis_text, plot_data_csv, AnalysisDoc, PredictionDoc};
use taguchi_core::{AnalysisReport, Design, Evaluator, ResultTable, SurrogateEvaluator};

#[derive(Parser)]
#[command(
    name = "taguchi",
    version,
    about = "Orthogonal-array experiment design and analysis"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Print a catalog array as CSV (1-based levels) or its orthogonality check.
    Array {
        name: String,
        #[arg(long)]
        verify: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the run sheet for a project config.
    Design {
        config: PathBuf,
        /// Catalog array name or `auto`; overrides the config.
        #[arg(long)]
        array: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Analyse recorded results: S/N, level means, ranks, optimal levels.
    Analyze {
        config: PathBuf,
        results: PathBuf,
        #[arg(long)]
        array: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write main-effects plot data (CSV) here.
        #[arg(long)]
        plot_data: Option<PathBuf>,
        /// Heuristic multi-response compromise, e.g. `cycle_time=1,shrinkage=2`.
        #[arg(long)]
        weights: Option<String>,
    },
    /// Additive prediction at the optimal (or overridden) levels.
    Predict {
        config: PathBuf,
        results: PathBuf,
        #[arg(long)]
        response: String,
        /// `v1,v2,…` for every factor, or `name=value,…` for some of them.
        #[arg(long)]
        levels: Option<String>,
        #[arg(long)]
        array: Option<String>,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compare a saved prediction with a confirmation measurement.
    Validate {
        prediction: PathBuf,
        #[arg(long)]
        confirmed: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Fit the additive surrogate of one response and save it as JSON.
    FitSurrogate {
        config: PathBuf,
        results: PathBuf,
        #[arg(long)]
        response: String,
        #[arg(long)]
        array: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a saved surrogate at a level combination.
    Evaluate {
        surrogate: PathBuf,
        #[arg(long)]
        levels: Option<String>,
    },
}

fn main() {
    let cli = Cli::parse();
    if let Err(e) = run(cli) {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Array { name, verify, out } => {
            let array = get_array(&name)?;
            let text = if verify {
                format!("{array}\n{}", verify_orthogonality(&array))
            } else {
                array.to_csv()
            };
            emit(out.as_deref(), &text)
        }
        Command::Design { config, array, out } => {
            let config = load_config(&config)?;
            let (design, selection) = config.design(array.as_deref())?;
            let mut text = String::new();
            if selection.auto {
                text.push_str(&format!(
                    "# array: {} (auto-selected)\n",
                    design.array().name()
                ));
            }
            text.push_str(&design.run_sheet_csv());
            emit(out.as_deref(), &text)
        }
        Command::Analyze {
            config,
            results,
            array,
            format,
            out,
            plot_data,
            weights,
        } => {
            let config = load_config(&config)?;
            let (_, report) = analyse(&config, &results, array.as_deref())?;
            let weighted = weights
                .map(|w| weighted_levels(&report, &parse_weights(&w)?).map_err(anyhow::Error::from))
                .transpose()?;
            let doc = AnalysisDoc::new(&report, weighted.as_ref());
            let text = match format {
                Format::Json => doc.to_json(),
                Format::Text => analysis_text(&doc, &config.precision),
            };
            if let Some(path) = plot_data {
                write_atomic(&path, &plot_data_csv(&report))?;
            }
            emit(out.as_deref(), &text)
        }
        Command::Predict {
            config,
            results,
            response,
            levels,
            array,
            format,
            out,
        } => {
            let config = load_config(&config)?;
            let (design, report) = analyse(&config, &results, array.as_deref())?;
            let chosen = match levels {
                Some(spec) => {
                    let defaults = &report.response(&response)?.optimal.levels;
                    Some(parse_levels(&spec, &design, defaults)?)
                }
                None => None,
            };
            let prediction = report.predict_optimum(&response, chosen.as_deref())?;
            let doc = PredictionDoc::new(&prediction);
            emit(
                out.as_deref(),
                &render_prediction(&doc, format, &config.precision),
            )
        }
        Command::Validate {
            prediction,
            confirmed,
            format,
            out,
        } => {
            let text = read(&prediction)?;
            let mut doc = PredictionDoc::from_json(&text)
                .map_err(|e| anyhow!("{}: {e}", prediction.display()))?;
            doc.error_percent = Some(error_percent(doc.predicted, confirmed)?);
            doc.confirmation = Some(confirmed);
            emit(
                out.as_deref(),
                &render_prediction(&doc, format, &Precision::default()),
            )
        }
        Command::FitSurrogate {
            config,
            results,
            response,
            array,
            out,
        } => {
            let config = load_config(&config)?;
            let (_, report) = analyse(&config, &results, array.as_deref())?;
            let surrogate = fit_surrogate(&report, &response)?;
            emit(out.as_deref(), &(surrogate.to_json()? + "\n"))
        }
        Command::Evaluate { surrogate, levels } => {
            let s = SurrogateEvaluator::from_json(&read(&surrogate)?)
                .with_context(|| format!("reading {}", surrogate.display()))?;
            let (optimum, _) = s.argmin();
            let chosen = match levels {
                Some(spec) => resolve_levels(&spec, &surrogate_factors(&s), &optimum)?,
                None => optimum,
            };
            let value = s.evaluate_levels(&chosen, &s.response.name)?;
            let settings: Vec<String> = s
                .factors
                .iter()
                .zip(&chosen)
                .map(|(f, &l)| format!("{}={}", f.name, f.labels[l]))
                .collect();
            emit(
                None,
                &format!(
                    "{} at {}: {}\n",
                    s.response.name,
                    settings.join(", "),
                    value
                ),
            )
        }
    }
}

fn render_prediction(doc: &PredictionDoc, format: Format, precision: &Precision) -> String {
    match format {
        Format::Json => doc.to_json(),
        Format::Text => doc.to_text(precision),
    }
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_config(path: &Path) -> Result<ProjectConfig> {
    ProjectConfig::load(path).with_context(|| format!("in {}", path.display()))
}

fn analyse(
    config: &ProjectConfig,
    results: &Path,
    array: Option<&str>,
) -> Result<(Design, AnalysisReport)> {
    let (design, _) = config.design(array)?;
    let table = ResultTable::read_csv(read(results)?.as_bytes())
        .with_context(|| format!("in {}", results.display()))?;
    let specs = config.response_specs()?;
    if specs.is_empty() {
        bail!("config declares no responses");
    }
    let report = analyze_with_snr(&design, &table, &specs)?;
    Ok((design, report))
}

fn parse_weights(spec: &str) -> Result<Vec<(String, f64)>> {
    spec.split(',')
        .map(|part| {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("weight `{part}` is not `name=value`"))?;
            let w: f64 = value
                .trim()
                .parse()
                .with_context(|| format!("weight `{part}`"))?;
            Ok((name.trim().to_string(), w))
        })
        .collect()
}

/// `(name, labels, values)` per factor.
type FactorInfo = Vec<(String, Vec<String>, Vec<f64>)>;

fn surrogate_factors(s: &SurrogateEvaluator) -> FactorInfo {
    s.factors
        .iter()
        .map(|f| (f.name.clone(), f.labels.clone(), f.levels.clone()))
        .collect()
}

fn parse_levels(spec: &str, design: &Design, defaults: &[usize]) -> Result<Vec<usize>> {
    let factors: FactorInfo = design
        .factors()
        .iter()
        .map(|f| {
            (
                f.name().to_string(),
                f.labels().to_vec(),
                f.levels().to_vec(),
            )
        })
        .collect();
    resolve_levels(spec, &factors, defaults)
}

/// Level text is matched against declared labels first, then numerically.
fn resolve_levels(spec: &str, factors: &FactorInfo, defaults: &[usize]) -> Result<Vec<usize>> {
    let find = |f: usize, text: &str| -> Result<usize> {
        let (name, labels, values) = &factors[f];
        let text = text.trim();
        if let Some(i) = labels.iter().position(|l| l == text) {
            return Ok(i);
        }
        text.parse::<f64>()
            .ok()
            .and_then(|v| values.iter().position(|&l| l == v))
            .ok_or_else(|| {
                anyhow!(
                    "`{text}` is not a level of `{name}` (levels: {})",
                    labels.join(", ")
                )
            })
    };
    let parts: Vec<&str> = spec.split(',').collect();
    if parts.iter().any(|p| p.contains('=')) {
        let mut chosen = defaults.to_vec();
        for part in parts {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| anyhow!("mix of `name=value` and bare values in `{spec}`"))?;
            let f = factors
                .iter()
                .position(|(n, _, _)| n == name.trim())
                .ok_or_else(|| anyhow!("unknown factor `{}`", name.trim()))?;
            chosen[f] = find(f, value)?;
        }
        Ok(chosen)
    } else {
        if parts.len() != factors.len() {
            bail!("{} levels given for {} factors", parts.len(), factors.len());
        }
        parts.iter().enumerate().map(|(f, p)| find(f, p)).collect()
    }
}

fn emit(out: Option<&Path>, text: &str) -> Result<()> {
    match out {
        Some(path) => write_atomic(path, text),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

/// Writes to a temporary file beside `path`, then renames it into place.
fn write_atomic(path: &Path, text: &str) -> Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)
        .with_context(|| format!("cannot create a file in {}", dir.display()))?;
    tmp.write_all(text.as_bytes())?;
    tmp.persist(path)
        .with_context(|| format!("cannot write {}", path.display()))?;
    Ok(())
}
