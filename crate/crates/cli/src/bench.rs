//! Benchmark suites: directories of `*.case.json` files, each naming a
//! dataset, labels and an action relative to the case file.

use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{anyhow, Context};
use lattice_select::dsl::{Action, ProgramMetrics};
use lattice_select::{synthesize, Budget, Dataset, EditRequest, Error, SynthesisMode, SynthesisOptions};
use serde::{Deserialize, Serialize};

use crate::commands::{parse_action_text, read_dataset, read_labels};

pub const DEFAULT_TIMEOUT: f64 = 60.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionSpec {
    Text(String),
    Json(Action),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchCase {
    #[serde(skip)]
    pub name: String,
    pub dataset: PathBuf,
    pub labels: PathBuf,
    pub action: ActionSpec,
    /// Ids the program must select, in dataset order.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    /// Seconds.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub timeout: Option<f64>,
}

impl BenchCase {
    pub fn new(dataset: &str, labels: &str, action: Action) -> Self {
        BenchCase {
            name: String::new(),
            dataset: dataset.into(),
            labels: labels.into(),
            action: ActionSpec::Json(action),
            expected: None,
            mode: None,
            timeout: None,
        }
    }

    /// Reads one case file; relative paths are resolved against its directory.
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        let mut case: BenchCase =
            serde_json::from_slice(&bytes).with_context(|| format!("in {}", path.display()))?;
        let dir = path.parent().unwrap_or(Path::new("."));
        case.dataset = dir.join(&case.dataset);
        case.labels = dir.join(&case.labels);
        case.name = path
            .file_name()
            .and_then(|n| n.to_str())
            .and_then(|n| n.strip_suffix(".case.json"))
            .unwrap_or_default()
            .to_string();
        if matches!(case.timeout, Some(t) if t.is_nan() || t <= 0.0) {
            return Err(anyhow!("{}: timeout must be positive", path.display()));
        }
        Ok(case)
    }

    /// Every `*.case.json` directly inside `dir`, by file name.
    pub fn discover(dir: &Path) -> anyhow::Result<Vec<BenchCase>> {
        let mut paths: Vec<PathBuf> = fs::read_dir(dir)
            .with_context(|| format!("cannot read suite {}", dir.display()))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.file_name().and_then(|n| n.to_str()).is_some_and(|n| n.ends_with(".case.json")))
            .collect();
        paths.sort();
        paths.iter().map(|p| BenchCase::load(p)).collect()
    }

    fn inputs(&self) -> anyhow::Result<(Dataset, EditRequest)> {
        let dataset = read_dataset(&self.dataset)?;
        let labels = read_labels(&self.labels)?;
        let action = match &self.action {
            ActionSpec::Text(t) => parse_action_text(t)?,
            ActionSpec::Json(a) => {
                a.validate()?;
                a.clone()
            }
        };
        Ok((dataset, labels.into_edit(action)))
    }

    fn mode(&self) -> anyhow::Result<SynthesisMode> {
        match &self.mode {
            None => Ok(SynthesisMode::Full),
            Some(m) => m.parse().map_err(|e: String| anyhow!(e)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CaseResult {
    pub case: String,
    pub mode: SynthesisMode,
    pub solved: bool,
    pub timed_out: bool,
    /// Seconds.
    pub time: f64,
    /// Per synthesized class.
    pub lattice_sizes: Vec<String>,
    pub clauses: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub metrics: Option<ProgramMetrics>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub program: Option<String>,
    pub selected: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected_match: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

/// One synthesis call. Never fails: errors are recorded in the result.
pub fn run_case(
    name: &str,
    dataset: &Dataset,
    edit: &EditRequest,
    expected: Option<&[String]>,
    mode: SynthesisMode,
    timeout: f64,
) -> CaseResult {
    let options = SynthesisOptions {
        budget: Budget::with_timeout(Duration::from_secs_f64(timeout)),
        ..SynthesisOptions::with_mode(mode)
    };
    let start = Instant::now();
    let outcome = synthesize(dataset, edit, &options);
    let time = start.elapsed().as_secs_f64();
    let mut result = CaseResult {
        case: name.to_string(),
        mode,
        solved: false,
        timed_out: false,
        time,
        lattice_sizes: Vec::new(),
        clauses: 0,
        metrics: None,
        program: None,
        selected: Vec::new(),
        expected_match: None,
        error: None,
    };
    match outcome {
        Ok(report) => {
            let matches = expected.map(|e| e == report.selected.as_slice());
            result.solved = matches.unwrap_or(true);
            result.expected_match = matches;
            result.lattice_sizes = report.classes.iter().map(|c| c.lattice_size.clone()).collect();
            result.clauses = report.classes.iter().map(|c| c.cover_size).sum();
            result.metrics = Some(report.metrics);
            result.program = Some(report.program_text);
            result.selected = report.selected;
        }
        Err(e) => {
            result.timed_out = matches!(e, Error::Timeout | Error::Cancelled);
            result.error = Some(e.to_string());
        }
    }
    result
}

fn failed(case: &BenchCase, mode: SynthesisMode, e: anyhow::Error) -> CaseResult {
    CaseResult {
        case: case.name.clone(),
        mode,
        solved: false,
        timed_out: false,
        time: 0.0,
        lattice_sizes: Vec::new(),
        clauses: 0,
        metrics: None,
        program: None,
        selected: Vec::new(),
        expected_match: None,
        error: Some(format!("{e:#}")),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModeRun {
    /// `None` when each case used its own mode.
    pub mode: Option<SynthesisMode>,
    pub cases: Vec<CaseResult>,
    pub solved: usize,
    pub total: usize,
    /// Seconds, summed over cases.
    pub total_time: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchReport {
    pub runs: Vec<ModeRun>,
}

/// Runs every case once per mode in `modes`, or once in its own mode when
/// `modes` is `None`.
pub fn run_suite(cases: &[BenchCase], modes: Option<&[SynthesisMode]>, timeout: Option<f64>) -> BenchReport {
    let sweep: Vec<Option<SynthesisMode>> = match modes {
        Some(ms) => ms.iter().copied().map(Some).collect(),
        None => vec![None],
    };
    let loaded: Vec<anyhow::Result<(Dataset, EditRequest)>> = cases.iter().map(BenchCase::inputs).collect();
    let runs = sweep
        .into_iter()
        .map(|forced| {
            let results: Vec<CaseResult> = cases
                .iter()
                .zip(&loaded)
                .map(|(case, input)| {
                    let mode = match forced.map(Ok).unwrap_or_else(|| case.mode()) {
                        Ok(m) => m,
                        Err(e) => return failed(case, SynthesisMode::Full, e),
                    };
                    match input {
                        Ok((dataset, edit)) => run_case(
                            &case.name,
                            dataset,
                            edit,
                            case.expected.as_deref(),
                            mode,
                            timeout.or(case.timeout).unwrap_or(DEFAULT_TIMEOUT),
                        ),
                        Err(e) => failed(case, mode, anyhow!("{e:#}")),
                    }
                })
                .collect();
            ModeRun {
                mode: forced,
                solved: results.iter().filter(|r| r.solved).count(),
                total: results.len(),
                total_time: results.iter().map(|r| r.time).sum(),
                cases: results,
            }
        })
        .collect();
    BenchReport { runs }
}

impl BenchReport {
    pub fn table(&self) -> String {
        let mut out = String::new();
        for run in &self.runs {
            let _ = writeln!(
                out,
                "{:<24} {:<15} {:<7} {:>9} {:>12} {:>7} {:>4} {:>4} {:>4} {:>4} {:>6}",
                "case", "mode", "solved", "time(s)", "|L|", "clauses", "ast", "and", "or", "in", "notin"
            );
            for r in &run.cases {
                let m = r.metrics.unwrap_or_default();
                let status = if r.solved {
                    "yes"
                } else if r.timed_out {
                    "timeout"
                } else {
                    "no"
                };
                let _ = writeln!(
                    out,
                    "{:<24} {:<15} {:<7} {:>9.4} {:>12} {:>7} {:>4} {:>4} {:>4} {:>4} {:>6}",
                    r.case,
                    r.mode.name(),
                    status,
                    r.time,
                    r.lattice_sizes.join("+"),
                    r.clauses,
                    m.ast_size,
                    m.count_and,
                    m.count_or,
                    m.count_in,
                    m.count_notin
                );
                if let Some(e) = &r.error {
                    let _ = writeln!(out, "  {e}");
                }
            }
            let label = run.mode.map_or("per-case", SynthesisMode::name);
            let _ = writeln!(
                out,
                "total [{label}]: {}/{} solved in {:.4} s\n",
                run.solved, run.total, run.total_time
            );
        }
        out
    }
}
