//! `edittag`: batch front end for the edit-tagging toolkit.
//!
//! Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

mod commands;
mod lines;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use lines::Failure;

#[derive(Parser)]
#[command(name = "edittag", version, about = "Edit-tag conversion, noising, toy training and scoring")]
struct Cli {
    /// Worker threads; defaults to the number of available cores.
    #[arg(long, global = true)]
    workers: Option<usize>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Convert source<TAB>target pairs to labeled JSON lines.
    Tag(TagArgs),
    /// Apply edit sequences to source sentences.
    Apply(ApplyArgs),
    /// Generate corrupted<TAB>clean pairs from clean text.
    Noise(NoiseArgs),
    /// Train the toy multi-head tagger on labeled JSON lines.
    TrainToy(TrainArgs),
    /// Correct sentences with a trained toy model.
    Predict(PredictArgs),
    /// Score hypotheses against references.
    Score(ScoreArgs),
    /// Tag coverage report for source<TAB>target pairs.
    Coverage(CoverageArgs),
}

#[derive(Args)]
pub struct TagArgs {
    /// Parallel corpus, one source<TAB>target pair per line.
    #[arg(long)]
    pub src_tgt: PathBuf,
    /// Tagset file; the bundled tagset if omitted.
    #[arg(long)]
    pub tagset: Option<PathBuf>,
    /// Lexicon data directory with a MANIFEST; the bundled data if omitted.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Output JSON-lines file (`-` for stdout).
    #[arg(long)]
    pub out: PathBuf,
    /// Disable character-level transformation tags.
    #[arg(long)]
    pub no_char_transforms: bool,
}

#[derive(Args)]
pub struct ApplyArgs {
    /// Source sentences, one per line.
    #[arg(long)]
    pub src: PathBuf,
    /// One edit sequence per line: space-separated tags or a labeled JSON record.
    #[arg(long)]
    pub edits: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    /// Leave tokens with inapplicable tags unchanged instead of failing.
    #[arg(long)]
    pub lenient: bool,
}

#[derive(Args)]
pub struct NoiseArgs {
    /// Clean sentences, one per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    /// Noise profile; the bundled profile if omitted.
    #[arg(long)]
    pub profile: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Overrides the profile seed.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Write generation statistics as JSON.
    #[arg(long)]
    pub stats: Option<PathBuf>,
    /// Annotated source<TAB>target corpus for the edit dictionary.
    #[arg(long)]
    pub dict: Option<PathBuf>,
    /// Lexicon and pattern data directory; the bundled data if omitted.
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum HeadCount {
    #[value(name = "5")]
    Five,
    #[value(name = "7")]
    Seven,
}

#[derive(Args)]
pub struct TrainArgs {
    /// Labeled JSON lines as written by `tag`.
    #[arg(long)]
    pub data: PathBuf,
    /// Base tagset; the bundled tagset if omitted.
    #[arg(long)]
    pub tagset: Option<PathBuf>,
    #[arg(long)]
    pub out: PathBuf,
    /// Weight of the auxiliary losses.
    #[arg(long, default_value_t = edittag::tagger::DEFAULT_LAMBDA)]
    pub lambda: f64,
    #[arg(long, value_enum, default_value = "7")]
    pub heads: HeadCount,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 10)]
    pub epochs: usize,
    #[arg(long, default_value_t = 0.5)]
    pub learning_rate: f64,
    #[arg(long, default_value_t = 8)]
    pub batch_size: usize,
    /// Hashed feature dimension.
    #[arg(long, default_value_t = edittag::tagger::DEFAULT_DIM)]
    pub dim: usize,
    /// Classify over the whole base tagset instead of the tags seen in the data.
    #[arg(long)]
    pub full_tagset: bool,
    /// Write per-epoch losses as JSON.
    #[arg(long)]
    pub report: Option<PathBuf>,
}

#[derive(Args)]
pub struct PredictArgs {
    #[arg(long)]
    pub model: PathBuf,
    /// Sentences to correct, one per line.
    #[arg(long = "in")]
    pub input: PathBuf,
    #[arg(long)]
    pub out: PathBuf,
    /// Maximum refinement passes.
    #[arg(long, default_value_t = edittag::edit2seq::DEFAULT_MAX_ITERS)]
    pub iters: usize,
    /// Added to the $KEEP probability.
    #[arg(long, default_value_t = 0.0)]
    pub keep_bias: f64,
    /// Leave a sentence unchanged unless some token's error probability reaches this.
    #[arg(long, default_value_t = 0.0)]
    pub min_error_prob: f64,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum MetricArg {
    F05,
    Gleu,
    Both,
}

#[derive(Args)]
pub struct ScoreArgs {
    #[arg(long)]
    pub src: PathBuf,
    #[arg(long)]
    pub hyp: PathBuf,
    /// Reference file; repeat for several references per sentence.
    #[arg(long = "ref", required = true)]
    pub refs: Vec<PathBuf>,
    #[arg(long, value_enum, default_value = "both")]
    pub metric: MetricArg,
    /// Seed for multi-reference GLEU sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Report file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args)]
pub struct CoverageArgs {
    #[arg(long)]
    pub src_tgt: PathBuf,
    #[arg(long)]
    pub tagset: Option<PathBuf>,
    #[arg(long)]
    pub lexicon: Option<PathBuf>,
    #[arg(long)]
    pub no_char_transforms: bool,
    /// Report file; stdout if omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

fn run(cli: Cli) -> Result<(), Failure> {
    if let Some(n) = cli.workers {
        if n == 0 {
            return Err(Failure::Usage("--workers must be at least 1".into()));
        }
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| Failure::Usage(e.to_string()))?;
    }
    match cli.command {
        Command::Tag(a) => commands::tag(a),
        Command::Apply(a) => commands::apply(a),
        Command::Noise(a) => commands::noise(a),
        Command::TrainToy(a) => commands::train_toy(a),
        Command::Predict(a) => commands::predict(a),
        Command::Score(a) => commands::score(a),
        Command::Coverage(a) => commands::coverage(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match std::panic::catch_unwind(|| run(cli)) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(f)) => {
            eprintln!("edittag: {f}");
            ExitCode::from(f.exit_code() as u8)
        }
        Err(_) => ExitCode::from(3),
    }
}
