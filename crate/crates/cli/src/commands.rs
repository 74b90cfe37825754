use std::fs;
use std::path::{Path, PathBuf};
use std::time::Duration;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use lattice_select::dataset::build_specification;
use lattice_select::dsl::{
    parse_action, parse_program, run_program, select, validate_program, Action, Program,
};
use lattice_select::generate::{generate, GeneratorSpec};
use lattice_select::{load_dataset, synthesize, Budget, Dataset, LabelsFile, SynthesisMode, SynthesisOptions};

use crate::bench::{self, BenchCase};
use crate::{CliResult, EXIT_OK, EXIT_VIOLATION};

const EXIT_CODES: &str = "Exit codes: 0 success, 1 violations or disagreement (check), \
2 input or specification error, 3 timeout.\n\
LATTICE_SELECT_SIZE_CAP overrides the materialization cap of the no-diff and naive modes.";

#[derive(Debug, Parser)]
#[command(name = "lattice-select", version, about = "Synthesize object-selection programs from labeled examples", after_help = EXIT_CODES)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Synthesize a program from a dataset and labels.
    Synth(SynthArgs),
    /// Check a program against labels, or against another program.
    Check(CheckArgs),
    /// Run every `*.case.json` in a suite directory.
    Bench(BenchArgs),
    /// Generate a random dataset, labels and case file.
    Gen(GenArgs),
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    /// Action file, or inline text such as `Cover(Blur)` or `{"op":"Remove"}`.
    #[arg(long)]
    pub action: String,
    #[arg(long, default_value = "full")]
    pub mode: SynthesisMode,
    /// Seconds.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long)]
    pub emit_plan: Option<PathBuf>,
    #[arg(long)]
    pub stats: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub dataset: PathBuf,
    #[arg(long)]
    pub labels: PathBuf,
    #[arg(long)]
    pub program: PathBuf,
    /// A second program that must select the same objects.
    #[arg(long)]
    pub against: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    #[arg(long)]
    pub suite: PathBuf,
    /// Comma-separated modes, or `all`. Overrides the per-case mode.
    #[arg(long, value_delimiter = ',')]
    pub mode: Vec<String>,
    /// Seconds per case. Overrides the per-case timeout.
    #[arg(long)]
    pub timeout: Option<f64>,
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct GenArgs {
    #[arg(long)]
    pub attrs: usize,
    #[arg(long)]
    pub range: usize,
    #[arg(long)]
    pub pos: usize,
    #[arg(long)]
    pub neg: usize,
    #[arg(long, default_value_t = 0)]
    pub neutral: usize,
    #[arg(long, default_value_t = 0.0)]
    pub numeric_frac: f64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
}

pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Synth(a) => synth(&a),
        Command::Check(a) => check(&a),
        Command::Bench(a) => bench_cmd(&a),
        Command::Gen(a) => gen(&a),
    }
}

fn read(path: &Path) -> anyhow::Result<Vec<u8>> {
    fs::read(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write(path: &Path, contents: impl AsRef<[u8]>) -> anyhow::Result<()> {
    fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))
}

pub fn read_dataset(path: &Path) -> anyhow::Result<Dataset> {
    load_dataset(&read(path)?).with_context(|| format!("in {}", path.display()))
}

pub fn read_labels(path: &Path) -> anyhow::Result<LabelsFile> {
    LabelsFile::parse(&read(path)?).with_context(|| format!("in {}", path.display()))
}

/// Accepts DSL text (`Cover(Blur)`) or the JSON form (`{"op":"Remove"}`).
pub fn parse_action_text(text: &str) -> anyhow::Result<Action> {
    let text = text.trim();
    let action = if text.starts_with('{') {
        serde_json::from_str(text).context("invalid action JSON")?
    } else {
        parse_action(text)?
    };
    action.validate()?;
    Ok(action)
}

/// `arg` names a file when one exists at that path, otherwise it is the
/// action itself.
pub fn load_action(arg: &str) -> anyhow::Result<Action> {
    let path = Path::new(arg);
    if path.is_file() {
        let text = String::from_utf8(read(path)?).context("action file is not UTF-8")?;
        parse_action_text(&text).with_context(|| format!("in {}", path.display()))
    } else {
        parse_action_text(arg)
    }
}

pub fn budget(timeout: f64) -> anyhow::Result<Budget> {
    if !(timeout > 0.0 && timeout.is_finite()) {
        bail!("timeout must be a positive number of seconds");
    }
    Ok(Budget::with_timeout(Duration::from_secs_f64(timeout)))
}

fn synth(a: &SynthArgs) -> CliResult {
    let dataset = read_dataset(&a.dataset)?;
    let labels = read_labels(&a.labels)?;
    let action = load_action(&a.action)?;
    let options = SynthesisOptions {
        budget: budget(a.timeout)?,
        ..SynthesisOptions::with_mode(a.mode)
    };
    let report = synthesize(&dataset, &labels.into_edit(action), &options)?;
    let text = format!("{}\n", report.program_text);
    match &a.out {
        Some(path) => write(path, &text)?,
        None => print!("{text}"),
    }
    if let Some(path) = &a.emit_plan {
        let plan = run_program(&report.program, &dataset)?;
        write(path, serde_json::to_string_pretty(&plan)?)?;
    }
    if let Some(path) = &a.stats {
        write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(EXIT_OK)
}

fn read_program(path: &Path, dataset: &Dataset) -> anyhow::Result<Program> {
    let text = String::from_utf8(read(path)?).context("program file is not UTF-8")?;
    let program = parse_program(text.trim()).with_context(|| format!("in {}", path.display()))?;
    validate_program(&program, dataset).with_context(|| format!("in {}", path.display()))?;
    Ok(program)
}

fn check(a: &CheckArgs) -> CliResult {
    let dataset = read_dataset(&a.dataset)?;
    let labels = read_labels(&a.labels)?;
    let program = read_program(&a.program, &dataset)?;
    let spec = build_specification(&dataset, &labels.into_edit(program.action.clone()))?;
    let chosen = select(&program.objects, &dataset)?;
    let mut code = EXIT_OK;
    for &i in &spec.positives {
        if !chosen.contains(&i) {
            println!("{}: positive not selected", dataset.objects[i].id);
            code = EXIT_VIOLATION;
        }
    }
    for &i in &spec.negatives {
        if chosen.contains(&i) {
            println!("{}: negative selected", dataset.objects[i].id);
            code = EXIT_VIOLATION;
        }
    }
    if let Some(other) = &a.against {
        let other = read_program(other, &dataset)?;
        let theirs = select(&other.objects, &dataset)?;
        for (i, o) in dataset.objects.iter().enumerate() {
            let (x, y) = (chosen.contains(&i), theirs.contains(&i));
            if x != y {
                let side = if x { "program only" } else { "against only" };
                println!("{}: selected by {side}", o.id);
                code = EXIT_VIOLATION;
            }
        }
    }
    Ok(code)
}

pub fn parse_modes(args: &[String]) -> anyhow::Result<Option<Vec<SynthesisMode>>> {
    if args.is_empty() {
        return Ok(None);
    }
    let mut modes = Vec::new();
    for a in args {
        if a == "all" {
            modes.extend(SynthesisMode::ALL);
        } else {
            modes.push(a.parse().map_err(|e: String| anyhow!(e))?);
        }
    }
    modes.dedup();
    Ok(Some(modes))
}

fn bench_cmd(a: &BenchArgs) -> CliResult {
    let modes = parse_modes(&a.mode)?;
    if let Some(t) = a.timeout {
        budget(t)?;
    }
    let cases = BenchCase::discover(&a.suite)?;
    let report = bench::run_suite(&cases, modes.as_deref(), a.timeout);
    print!("{}", report.table());
    if let Some(path) = &a.json {
        write(path, serde_json::to_string_pretty(&report)?)?;
    }
    Ok(EXIT_OK)
}

fn gen(a: &GenArgs) -> CliResult {
    let spec = GeneratorSpec {
        attrs: a.attrs,
        range: a.range,
        pos: a.pos,
        neg: a.neg,
        neutral: a.neutral,
        numeric_frac: a.numeric_frac,
        seed: a.seed,
    };
    let case = generate(&spec)?;
    fs::create_dir_all(&a.out).with_context(|| format!("cannot create {}", a.out.display()))?;
    write(&a.out.join("dataset.json"), case.dataset.to_json() + "\n")?;
    write(&a.out.join("labels.json"), serde_json::to_string_pretty(&case.labels)? + "\n")?;
    let bench_case = BenchCase::new("dataset.json", "labels.json", Action::Remove);
    write(
        &a.out.join("generated.case.json"),
        serde_json::to_string_pretty(&bench_case)? + "\n",
    )?;
    Ok(EXIT_OK)
}
