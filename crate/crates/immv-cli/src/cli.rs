//! Argument definitions and subcommand dispatch for the `immv` binary.
//!
//! Exit statuses: 0 for a clean run, 1 when records were left unfilled, 2
//! for errors (bad arguments, unreadable input, failed checks).

use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use immv_core::{
    build_codecs, compute_attribute_stats, encode, impute_dataset, partition_records, run_eval,
    Dataset, MethodSpec, TiePolicy, TieRule,
};

use crate::casestudy;
use crate::render;
use crate::table::{self, TableOptions};

#[derive(Debug, Parser)]
#[command(
    name = "immv",
    version,
    about = "Fill and evaluate missing values in delimited tables"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Fill missing cells from the most similar complete records
    Impute(ImputeArgs),
    /// Mask a complete table at random and score each method's recovery
    Eval(EvalArgs),
    /// Show the complete/incomplete split and per-attribute spread
    Stats(StatsArgs),
    /// Run the built-in worked example and check every expected value
    Casestudy(CasestudyArgs),
}

#[derive(Debug, Args)]
pub struct InputArgs {
    /// Input table
    #[arg(long)]
    pub input: PathBuf,

    /// Cell text that marks a missing value
    #[arg(long, default_value = "?")]
    pub missing_marker: String,

    /// Column separator: one character, or \t for tab
    #[arg(long, default_value = ",", value_parser = parse_delimiter)]
    pub delimiter: u8,

    /// Schema file pinning column kinds, one `name,kind` line per column
    #[arg(long)]
    pub schema: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum TiePolicyArg {
    #[value(name = "mode_then_first")]
    ModeThenFirst,
    #[value(name = "first")]
    First,
}

#[derive(Debug, Args)]
pub struct ImputeArgs {
    #[command(flatten)]
    pub io: InputArgs,

    /// Where to write the completed table (standard output when absent)
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Write per-donor similarity scores to this file
    #[arg(long)]
    pub report: Option<PathBuf>,

    /// Write per-cell donor provenance to this file
    #[arg(long)]
    pub provenance: Option<PathBuf>,

    /// Attribute holding the class label; excluded from comparisons
    #[arg(long)]
    pub class_column: Option<String>,

    /// Only draw donors whose class equals the subject's
    #[arg(long, requires = "class_column")]
    pub same_class_only: bool,

    /// How near-equal donor scores resolve
    #[arg(long, value_enum, default_value = "mode_then_first")]
    pub tie_policy: TiePolicyArg,

    /// Scores within this distance of the best count as tied
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub io: InputArgs,

    /// Where to write the score report (standard output when absent)
    #[arg(long)]
    pub output: Option<PathBuf>,

    /// Fraction of cells to mask, strictly between 0 and 1
    #[arg(long, default_value_t = 0.1)]
    pub rate: f64,

    /// Seed for the masked-cell selection
    #[arg(long, default_value_t = 0)]
    pub seed: u64,

    /// Comma-separated methods to score: immv, mode, knn
    #[arg(long, default_value = "immv,mode,knn")]
    pub methods: String,

    /// Neighbor count for the knn method
    #[arg(long, default_value_t = 1)]
    pub k: usize,

    /// How near-equal donor scores resolve
    #[arg(long, value_enum, default_value = "mode_then_first")]
    pub tie_policy: TiePolicyArg,

    /// Scores within this distance of the best count as tied
    #[arg(long, default_value_t = 1e-9)]
    pub epsilon: f64,
}

#[derive(Debug, Args)]
pub struct StatsArgs {
    #[command(flatten)]
    pub io: InputArgs,

    /// Where to write the statistics (standard output when absent)
    #[arg(long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CasestudyArgs {
    /// Deliberately break one embedded expectation
    #[arg(long, hide = true)]
    pub corrupt_expectations: bool,
}

fn parse_delimiter(text: &str) -> Result<u8, String> {
    match text {
        "\\t" => Ok(b'\t'),
        _ if text.len() == 1 && text.is_ascii() => Ok(text.as_bytes()[0]),
        _ => Err("delimiter must be a single character or \\t".to_string()),
    }
}

/// Runs one parsed command and returns the process exit status.
pub fn run(cli: Cli) -> i32 {
    let outcome = match cli.command {
        Command::Impute(args) => cmd_impute(args),
        Command::Eval(args) => cmd_eval(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Casestudy(args) => cmd_casestudy(args),
    };
    match outcome {
        Ok(status) => status,
        Err(message) => {
            eprintln!("error: {message}");
            2
        }
    }
}

fn read_file(path: &Path) -> Result<String, String> {
    std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))
}

fn write_output(path: Option<&Path>, text: &str) -> Result<(), String> {
    table::emit(path, text).map_err(|e| match path {
        Some(path) => format!("{}: {e}", path.display()),
        None => e.to_string(),
    })
}

fn load_dataset(io: &InputArgs) -> Result<(Dataset, TableOptions), String> {
    let options = TableOptions {
        delimiter: io.delimiter,
        missing_marker: io.missing_marker.clone(),
    };
    let hint = io
        .schema
        .as_deref()
        .map(|path| {
            table::parse_schema_hint(&read_file(path)?)
                .map_err(|e| format!("{}: {e}", path.display()))
        })
        .transpose()?;
    let text = read_file(&io.input)?;
    let dataset = table::parse_table(&text, &options, hint.as_deref())
        .map_err(|e| format!("{}: {e}", io.input.display()))?;
    Ok((dataset, options))
}

fn build_policy(rule: TiePolicyArg, epsilon: f64) -> Result<TiePolicy, String> {
    if epsilon < 0.0 || epsilon.is_nan() {
        return Err("epsilon must be nonnegative".to_string());
    }
    let rule = match rule {
        TiePolicyArg::ModeThenFirst => TieRule::ModeThenFirst,
        TiePolicyArg::First => TieRule::First,
    };
    Ok(TiePolicy { epsilon, rule })
}

fn parse_methods(text: &str, k: usize) -> Result<Vec<MethodSpec>, String> {
    let mut methods = Vec::new();
    for name in text.split(',') {
        let method = match name.trim() {
            "immv" => MethodSpec::Immv,
            "mode" => MethodSpec::ModeMean,
            "knn" => MethodSpec::Knn { k },
            other => {
                return Err(format!(
                    "unknown method `{other}`: expected immv, mode, or knn"
                ))
            }
        };
        methods.push(method);
    }
    Ok(methods)
}

fn cmd_impute(args: ImputeArgs) -> Result<i32, String> {
    let policy = build_policy(args.tie_policy, args.epsilon)?;
    let (dataset, options) = load_dataset(&args.io)?;
    let result = impute_dataset(
        &dataset,
        &policy,
        args.class_column.as_deref(),
        args.same_class_only,
    )
    .map_err(|e| e.to_string())?;

    let completed = table::write_table(&result.completed, &options);
    write_output(args.output.as_deref(), &completed)?;
    if let Some(path) = args.report.as_deref() {
        let text = render::render_similarity_reports(&result.reports, args.io.delimiter);
        write_output(Some(path), &text)?;
    }
    if let Some(path) = args.provenance.as_deref() {
        let text =
            render::render_provenance(&result.provenance, dataset.schema(), args.io.delimiter);
        write_output(Some(path), &text)?;
    }
    for (id, reason) in &result.unimputable {
        eprintln!("warning: record {id} left unfilled: {reason}");
    }
    Ok(if result.unimputable.is_empty() { 0 } else { 1 })
}

fn cmd_eval(args: EvalArgs) -> Result<i32, String> {
    let policy = build_policy(args.tie_policy, args.epsilon)?;
    let methods = parse_methods(&args.methods, args.k)?;
    let (dataset, _) = load_dataset(&args.io)?;
    let report =
        run_eval(&dataset, args.rate, args.seed, &methods, &policy).map_err(|e| e.to_string())?;
    write_output(args.output.as_deref(), &render::render_eval(&report))?;
    Ok(0)
}

fn cmd_stats(args: StatsArgs) -> Result<i32, String> {
    let (dataset, _) = load_dataset(&args.io)?;
    let encoded = encode(&dataset, &build_codecs(&dataset)).map_err(|e| e.to_string())?;
    let parts = partition_records(&encoded);
    let stats = compute_attribute_stats(&parts.complete).map_err(|e| e.to_string())?;
    let text = render::render_stats(
        dataset.schema(),
        &stats,
        parts.incomplete.len(),
        args.io.delimiter,
    );
    write_output(args.output.as_deref(), &text)?;
    Ok(0)
}

fn cmd_casestudy(args: CasestudyArgs) -> Result<i32, String> {
    let outcome =
        casestudy::run_case_study(args.corrupt_expectations).map_err(|e| e.to_string())?;
    print!("{}", outcome.output);
    Ok(if outcome.failures == 0 { 0 } else { 2 })
}
