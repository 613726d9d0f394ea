//! `curbatch` — deterministic minibatch schedules for parallel corpora.
//!
//! The binary binds the library into five reproducible commands:
//!
//! * `ranks`    — build a word frequency-rank table from a corpus
//! * `bpe`      — learn, apply, or decode a subword vocabulary
//! * `schedule` — turn a corpus (or a raw feature vector) into a batch
//!   schedule file: shuffled, bucketed, sorted, curriculum, or reversed
//!   curriculum
//! * `analyze`  — audit a schedule file: coverage, padding waste,
//!   homogeneity, complexity progression, curriculum phases
//! * `reorder`  — materialize a schedule as reordered corpus files
//!
//! Identical inputs and flags always produce byte-identical outputs.
//! Every output format carries the effective configuration in `#` headers
//! (reordered corpora excepted — they are plain parallel text — so their
//! configuration is echoed to stderr instead). Diagnostics and the config
//! echo go to stderr only, never into data files.
//!
//! Exit codes: 0 success; 1 usage errors; 2 data errors (unreadable or
//! malformed files, corpora out of step with a schedule, failed coverage);
//! 3 precondition failures (non-monotone bins without `--auto-adjust`,
//! vocabulary targets below the alphabet, missing tags or rank tables).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

use curbatch::binning::BinError;
use curbatch::corpus::CorpusError;
use curbatch::features::FeatureError;
use curbatch::metrics::MetricsError;
use curbatch::schedule::ScheduleFileError;
use curbatch::schedulers::ScheduleError;
use curbatch::subword::SubwordError;

mod commands;
mod config;

/// Top-level error, bucketed by exit code.
#[derive(Debug)]
pub enum CliError {
    /// Wrong invocation: unknown names, invalid flag values, missing or
    /// conflicting flags. Exit code 1.
    Usage(String),
    /// Broken or inconsistent inputs. Exit code 2.
    Data(String),
    /// Inputs are readable but violate an operation's precondition.
    /// Exit code 3.
    Precondition(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Data(_) => 2,
            CliError::Precondition(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Usage(m) | CliError::Data(m) | CliError::Precondition(m) => m,
        }
    }
}

/// Shorthand for usage errors built from format strings.
macro_rules! usage {
    ($($arg:tt)*) => { CliError::Usage(format!($($arg)*)) };
}
pub(crate) use usage;

impl From<CorpusError> for CliError {
    fn from(e: CorpusError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<ScheduleFileError> for CliError {
    fn from(e: ScheduleFileError) -> Self {
        CliError::Data(e.to_string())
    }
}

impl From<BinError> for CliError {
    fn from(e: BinError) -> Self {
        // Bin specs reach the CLI only through --thresholds.
        CliError::Usage(e.to_string())
    }
}

impl From<MetricsError> for CliError {
    fn from(e: MetricsError) -> Self {
        CliError::Precondition(e.to_string())
    }
}

impl From<ScheduleError> for CliError {
    fn from(e: ScheduleError) -> Self {
        match &e {
            ScheduleError::NonMonotoneBins { .. } => CliError::Precondition(format!(
                "{e}; rerun with --auto-adjust to merge offending bins"
            )),
            ScheduleError::InvalidBatchSize => CliError::Usage(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<SubwordError> for CliError {
    fn from(e: SubwordError) -> Self {
        match &e {
            SubwordError::TargetTooSmall { .. } => CliError::Precondition(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

impl From<FeatureError> for CliError {
    fn from(e: FeatureError) -> Self {
        fn classify(e: &FeatureError) -> u8 {
            match e {
                FeatureError::MissingTags { .. }
                | FeatureError::MissingLexicon
                | FeatureError::MissingRankTable { .. } => 3,
                FeatureError::InvalidBlockSize => 1,
                FeatureError::AtExample { source, .. } => classify(source),
                _ => 2,
            }
        }
        match classify(&e) {
            1 => CliError::Usage(e.to_string()),
            3 => CliError::Precondition(e.to_string()),
            _ => CliError::Data(e.to_string()),
        }
    }
}

#[derive(Parser)]
#[command(
    name = "curbatch",
    version,
    about = "Deterministic minibatch schedules for parallel corpora",
    after_help = "Exit codes: 0 success, 1 usage error, 2 data error, 3 precondition failure."
)]
struct Cli {
    /// JSON config file with flat keys named after long flags
    /// (e.g. {"batch-size": 32, "seed": 7}); flags override it.
    /// Defaults to $CURBATCH_CONFIG when that is set.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a word frequency-rank table from a parallel corpus
    Ranks(RanksArgs),
    /// Learn or use a byte-pair subword vocabulary
    #[command(subcommand)]
    Bpe(BpeCommand),
    /// Build a batch schedule from a corpus or a raw feature vector
    Schedule(ScheduleArgs),
    /// Audit a schedule file and emit a JSON report
    Analyze(AnalyzeArgs),
    /// Rewrite corpus files in schedule order
    Reorder(ReorderArgs),
}

#[derive(Args)]
pub struct RanksArgs {
    /// Source-side corpus, one sentence per line
    #[arg(long, value_name = "FILE")]
    src: PathBuf,
    /// Target-side corpus, line-aligned with --src
    #[arg(long, value_name = "FILE")]
    tgt: PathBuf,
    /// Text feeding the table: src, tgt, or combined [default: combined]
    #[arg(long)]
    scope: Option<String>,
    /// Words per rank block [default: 5000]
    #[arg(long)]
    block_size: Option<u32>,
    /// Output table file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Subcommand)]
pub enum BpeCommand {
    /// Learn merges jointly over both sides of a corpus
    Learn(BpeLearnArgs),
    /// Segment whitespace-tokenized text with a learned model
    Apply(BpeApplyArgs),
    /// Undo a segmentation produced by apply
    Decode(BpeDecodeArgs),
}

#[derive(Args)]
pub struct BpeLearnArgs {
    /// Source-side corpus
    #[arg(long, value_name = "FILE")]
    src: PathBuf,
    /// Target-side corpus, line-aligned with --src
    #[arg(long, value_name = "FILE")]
    tgt: PathBuf,
    /// Total vocabulary size: alphabet plus merges [default: 30000]
    #[arg(long)]
    target_size: Option<u64>,
    /// Output merges file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
pub struct BpeApplyArgs {
    /// Merges file produced by `bpe learn`
    #[arg(long, value_name = "FILE")]
    model: PathBuf,
    /// Text to segment, one sentence per line
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Segmented output; token boundaries become single spaces
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

#[derive(Args)]
pub struct BpeDecodeArgs {
    /// Segmented text, one sentence per line
    #[arg(long, value_name = "FILE")]
    input: PathBuf,
    /// Reassembled output
    #[arg(long, value_name = "FILE")]
    output: PathBuf,
}

/// Flags shared by every command that reads a corpus and measures features.
#[derive(Args)]
pub struct CorpusInputArgs {
    /// Source-side corpus
    #[arg(long, value_name = "FILE")]
    src: Option<PathBuf>,
    /// Target-side corpus, line-aligned with --src
    #[arg(long, value_name = "FILE")]
    tgt: Option<PathBuf>,
    /// Source-side tag file: one line per sentence, one token|TAG item per
    /// token
    #[arg(long, value_name = "FILE")]
    src_tags: Option<PathBuf>,
    /// Target-side tag file
    #[arg(long, value_name = "FILE")]
    tgt_tags: Option<PathBuf>,
    /// Character separating token from tag in tag files [default: |]
    #[arg(long)]
    tag_separator: Option<char>,
    /// Drop pairs where either side exceeds this many tokens; ids are
    /// assigned after filtering
    #[arg(long)]
    max_tokens: Option<u32>,
    /// Precomputed feature vector, one integer per line, replacing
    /// --src/--tgt entirely
    #[arg(long, value_name = "FILE")]
    values: Option<PathBuf>,
    /// Feature to measure: src-length, tgt-length, src-conjunctions,
    /// tgt-verbs, ..., rank-src, rank-tgt, rank-max, rank-combined
    /// [default: tgt-length]
    #[arg(long)]
    feature: Option<String>,
    /// Lexicon file for conjunction counting, one surface form per line
    /// [default: built-in English conjunctions]
    #[arg(long, value_name = "FILE")]
    lexicon: Option<PathBuf>,
    /// Source-side rank table for rank-src / rank-max
    #[arg(long, value_name = "FILE")]
    ranks_src: Option<PathBuf>,
    /// Target-side rank table for rank-tgt / rank-max
    #[arg(long, value_name = "FILE")]
    ranks_tgt: Option<PathBuf>,
    /// Combined rank table for rank-combined
    #[arg(long, value_name = "FILE")]
    ranks_combined: Option<PathBuf>,
}

#[derive(Args)]
pub struct ScheduleArgs {
    /// Batch order: shuffle, bucket, curriculum, reverse-curriculum, or
    /// sorted
    #[arg(long)]
    strategy: Option<String>,
    #[command(flatten)]
    input: CorpusInputArgs,
    /// Bin thresholds as ascending inclusive upper bounds, e.g. 8,12,16,20,40
    #[arg(long)]
    thresholds: Option<String>,
    /// Merge bins that break the nonincreasing-size rule instead of failing
    #[arg(long)]
    auto_adjust: bool,
    /// Examples per batch [default: 64]
    #[arg(long)]
    batch_size: Option<u32>,
    /// Seed for every random choice [default: 0]
    #[arg(long)]
    seed: Option<u64>,
    /// Sort hardest-first instead of easiest-first (sorted strategy only)
    #[arg(long)]
    descending: bool,
    /// Output schedule file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
}

#[derive(Args)]
pub struct AnalyzeArgs {
    /// Schedule file to audit
    #[arg(long, value_name = "FILE")]
    schedule: PathBuf,
    #[command(flatten)]
    input: CorpusInputArgs,
    /// Bin thresholds for homogeneity and phase checks [default: the
    /// schedule's own thresholds header]
    #[arg(long)]
    thresholds: Option<String>,
    /// Expected corpus size when neither a corpus nor --values is given
    /// [default: the schedule's n header]
    #[arg(long)]
    n: Option<u64>,
    /// Side whose token count measures padding waste: src or tgt
    /// [default: tgt]
    #[arg(long)]
    padding_side: Option<String>,
    /// Write the JSON report here instead of stdout
    #[arg(long, value_name = "FILE")]
    report: Option<PathBuf>,
    /// Also write the per-batch mean feature value as CSV
    #[arg(long, value_name = "FILE")]
    curve: Option<PathBuf>,
    /// Require a curriculum phase report (fails on other strategies)
    #[arg(long)]
    phases: bool,
}

#[derive(Args)]
pub struct ReorderArgs {
    /// Schedule file to replay
    #[arg(long, value_name = "FILE")]
    schedule: PathBuf,
    /// Source-side corpus the schedule was built from
    #[arg(long, value_name = "FILE")]
    src: PathBuf,
    /// Target-side corpus
    #[arg(long, value_name = "FILE")]
    tgt: PathBuf,
    /// Drop pairs where either side exceeds this many tokens; must match
    /// the filter used when the schedule was built
    #[arg(long)]
    max_tokens: Option<u32>,
    /// Reordered source output
    #[arg(long, value_name = "FILE")]
    out_src: PathBuf,
    /// Reordered target output
    #[arg(long, value_name = "FILE")]
    out_tgt: PathBuf,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let result = config::Config::load(cli.config.as_deref()).and_then(|cfg| match cli.command {
        Command::Ranks(args) => commands::ranks(args, &cfg),
        Command::Bpe(BpeCommand::Learn(args)) => commands::bpe_learn(args, &cfg),
        Command::Bpe(BpeCommand::Apply(args)) => commands::bpe_apply(args),
        Command::Bpe(BpeCommand::Decode(args)) => commands::bpe_decode(args),
        Command::Schedule(args) => commands::schedule(args, &cfg),
        Command::Analyze(args) => commands::analyze(args, &cfg),
        Command::Reorder(args) => commands::reorder(args),
    });

    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message());
            ExitCode::from(e.exit_code())
        }
    }
}
