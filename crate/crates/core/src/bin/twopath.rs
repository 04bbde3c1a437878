//! Command-line front end. Exit codes: 0 success, 1 runtime failure, 2 usage error.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use twopath::analysis::{self, DayZone, Field, DEFAULT_TOP_K};
use twopath::config::RunConfig;
use twopath::corpus::{self, CorpusFormat};
use twopath::embedding::load_embeddings;
use twopath::engine::{self, Mode};
use twopath::evaluation::{self, DEFAULT_BASE_RATE, DEFAULT_SAMPLE_SIZE};
use twopath::neuralnet::gradcheck::{self, CheckLimits, DEFAULT_STEP, DEFAULT_TOLERANCE};
use twopath::synth::{self, SynthConfig};
use twopath::{Corpus, Error};

#[derive(Parser)]
#[command(name = "twopath", version, about = "Two-path bootstrapping of a hateful-document labeler")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize a corpus and report statistics; optionally write normalized JSONL.
    Ingest {
        input: PathBuf,
        #[arg(long, default_value = "jsonl")]
        format: CorpusFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run the bootstrapping loop described by a JSON config.
    Bootstrap(BootstrapArgs),
    #[command(subcommand)]
    Evaluate(EvaluateCmd),
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Generate a planted synthetic corpus with ground truth.
    Synth(SynthArgs),
    /// Compare analytic LSTM gradients with finite differences.
    Gradcheck {
        #[arg(long, default_value_t = 20)]
        configs: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STEP)]
        step: f64,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
}

#[derive(Args)]
struct BootstrapArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    max_iterations: Option<u32>,
    /// Disable the validation-precision stopping rule.
    #[arg(long)]
    no_stop_precision: bool,
}

/// Corpus source shared by commands that read pool documents.
#[derive(Args)]
struct CorpusArgs {
    /// Run config whose corpus list is used.
    #[arg(long, conflicts_with = "corpus")]
    config: Option<PathBuf>,
    #[arg(long)]
    corpus: Vec<PathBuf>,
    #[arg(long, default_value = "jsonl")]
    format: CorpusFormat,
}

#[derive(Subcommand)]
enum EvaluateCmd {
    /// Draw a uniform annotation sample from a labeled pool.
    Sample {
        #[arg(long)]
        pool: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE)]
        k: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Estimate precision, recall and F1 from an annotated sample.
    Estimate {
        /// Hateful documents found in the sample.
        #[arg(long, required_unless_present = "annotations", conflicts_with = "annotations")]
        n: Option<u64>,
        /// Annotated CSV from `evaluate sample`; supplies n and k.
        #[arg(long)]
        annotations: Option<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_SAMPLE_SIZE as u64)]
        k: u64,
        #[arg(long)]
        tagged: u64,
        #[arg(long)]
        corpus_size: u64,
        #[arg(long, default_value_t = DEFAULT_BASE_RATE)]
        base_rate: f64,
    },
    /// Exact precision, recall and F1 against a ground-truth file.
    Exact {
        #[arg(long)]
        pool: PathBuf,
        #[arg(long)]
        truth: PathBuf,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// Per-day hateful counts and ratios as CSV.
    Temporal {
        #[arg(long)]
        pool: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long, default_value = "utc")]
        zone: DayZone,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Most frequent mentions or hashtags in the pool as CSV.
    Top {
        #[arg(long)]
        pool: PathBuf,
        #[command(flatten)]
        corpus: CorpusArgs,
        #[arg(long)]
        field: Field,
        #[arg(long, default_value_t = DEFAULT_TOP_K)]
        k: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Args)]
struct SynthArgs {
    /// JSON generator config; flags override its keys.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    docs: Option<usize>,
    #[arg(long)]
    planted_slurs: Option<usize>,
    #[arg(long)]
    implicit_patterns: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: PathBuf,
}

enum Failure {
    Usage(String),
    Run(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Run(e)
    }
}

type CliResult = Result<(), Failure>;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match dispatch(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("twopath: usage error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Run(e)) => {
            eprintln!("twopath: {e}");
            ExitCode::from(1)
        }
    }
}

fn dispatch(command: Command) -> CliResult {
    match command {
        Command::Ingest { input, format, out } => ingest(&input, format, out.as_deref()),
        Command::Bootstrap(args) => bootstrap(args),
        Command::Evaluate(cmd) => evaluate(cmd),
        Command::Analyze(cmd) => analyze(cmd),
        Command::Synth(args) => synth_cmd(args),
        Command::Gradcheck { configs, seed, step, tolerance } => {
            if configs == 0 {
                return Err(Failure::Usage("--configs must be positive".into()));
            }
            let report = gradcheck::gradient_check(seed, configs, CheckLimits::default(), step, tolerance)?;
            for (i, c) in report.configs.iter().enumerate() {
                println!(
                    "config {i:>3}: hidden {} input {} len {} params {:>3} max_rel_error {:.3e} ({})",
                    c.hidden_size, c.input_size, c.max_seq_len, c.params_checked, c.max_rel_error, c.worst_param
                );
            }
            println!("max_rel_error {:.3e} tolerance {:.1e}: {}", report.max_rel_error, tolerance, if report.passed { "PASS" } else { "FAIL" });
            if report.passed {
                Ok(())
            } else {
                Err(Failure::Run(Error::InvalidArgument(format!(
                    "gradient check failed: relative error {:.3e} exceeds {:.1e}",
                    report.max_rel_error, tolerance
                ))))
            }
        }
    }
}

fn ingest(input: &Path, format: CorpusFormat, out: Option<&Path>) -> CliResult {
    let corpus = corpus::ingest(input, format)?;
    println!(
        "documents {} dropped {} tokens {} types {}",
        corpus.len(),
        corpus.dropped_count(),
        corpus.total_token_count(),
        corpus.token_totals().len()
    );
    if let Some(out) = out {
        let mut w = create(out)?;
        for doc in corpus.documents() {
            serde_json::to_writer(&mut w, doc).map_err(Error::from)?;
            w.write_all(b"\n").map_err(|e| io_err(out, e))?;
        }
        w.flush().map_err(|e| io_err(out, e))?;
    }
    Ok(())
}

fn bootstrap(args: BootstrapArgs) -> CliResult {
    let mut cfg = RunConfig::load(&args.config)?;
    if let Some(mode) = args.mode {
        cfg.mode = mode;
    }
    if let Some(out) = args.out {
        cfg.out = Some(out);
    }
    if let Some(seed) = args.seed {
        cfg.rng_seed = seed;
    }
    if let Some(n) = args.max_iterations {
        cfg.max_iterations = n;
    }
    if args.no_stop_precision {
        cfg.stop_precision = None;
    }
    if cfg.corpus.is_empty() {
        return Err(Failure::Usage("config key `corpus` is required".into()));
    }
    let Some(out) = cfg.out.clone() else {
        return Err(Failure::Usage("output directory required (`out` key or --out)".into()));
    };
    if cfg.mode.uses_lstm() && cfg.embeddings.is_none() {
        return Err(Failure::Usage(format!("mode {} needs the `embeddings` key", cfg.mode.as_str())));
    }
    if cfg.mode.uses_lstm() && cfg.stop_precision.is_some() && cfg.validation.is_none() {
        return Err(Failure::Usage("the precision stopping rule needs the `validation` key".into()));
    }

    let corpus = cfg.load_corpus()?;
    let table = cfg.embeddings.as_ref().map(load_embeddings).transpose()?;
    let validation = cfg.validation.as_ref().map(evaluation::load_labeled_documents).transpose()?.unwrap_or_default();
    let bcfg = cfg.bootstrap_config(validation);
    let (outcome, _) = engine::run_to_dir(&corpus, table.as_ref(), &bcfg, &out)?;
    for log in &outcome.logs {
        println!(
            "iteration {}: pool {} -> {} (+{} slur, +{} lstm, {} both), {} new terms, precision {}",
            log.iteration,
            log.pool_size_before,
            log.pool_size_after,
            log.new_by_slur,
            log.new_by_lstm,
            log.overlap,
            log.new_terms,
            log.validation_precision.map_or("-".to_string(), |p| format!("{p:.4}"))
        );
    }
    println!(
        "stop {}; pool {}; lexicon {}; output {}",
        serde_json::to_string(&outcome.stop_reason).map_err(Error::from)?,
        outcome.pool.len(),
        outcome.lexicon.len(),
        out.display()
    );
    Ok(())
}

fn load_corpus(args: &CorpusArgs) -> Result<Corpus, Failure> {
    if let Some(path) = &args.config {
        return Ok(RunConfig::load(path)?.load_corpus()?);
    }
    if args.corpus.is_empty() {
        return Err(Failure::Usage("pass --corpus or --config".into()));
    }
    let cfg = RunConfig { corpus: args.corpus.clone(), corpus_format: args.format, ..RunConfig::default() };
    Ok(cfg.load_corpus()?)
}

fn evaluate(cmd: EvaluateCmd) -> CliResult {
    match cmd {
        EvaluateCmd::Sample { pool, corpus, k, seed, out } => {
            let pool = corpus::load_labeled(&pool)?;
            let corpus = load_corpus(&corpus)?;
            let sample = evaluation::draw_sample(pool.ids(), k, seed)?;
            evaluation::export_annotation_csv(&sample, &corpus, &out)?;
            println!("sampled {} of {} tagged documents into {}", sample.len(), pool.len(), out.display());
            Ok(())
        }
        EvaluateCmd::Estimate { n, annotations, k, tagged, corpus_size, base_rate } => {
            let (n, k) = match annotations {
                Some(path) => {
                    let rows = evaluation::import_annotation_csv(&path, None)?;
                    (evaluation::count_hateful(&rows), rows.len() as u64)
                }
                None => (n.expect("clap enforces --n"), k),
            };
            let r = evaluation::estimate(n, k, tagged, corpus_size, base_rate)?;
            println!("precision {:.3}", r.precision);
            println!("recall {:.3}{}", r.recall_estimate, if r.recall_capped { " (capped)" } else { "" });
            println!("f1 {:.3}", r.f1);
            println!("estimated_hateful {:.0}", r.estimated_hateful);
            Ok(())
        }
        EvaluateCmd::Exact { pool, truth } => {
            let pool = corpus::load_labeled(&pool)?;
            let truth = synth::load_truth(&truth)?;
            let r = evaluation::exact_evaluate(pool.ids(), &truth);
            println!("tagged {} true_positives {} positives {}", r.tagged, r.true_positives, r.total_positive);
            println!("precision {:.4} recall {:.4} f1 {:.4}", r.precision, r.recall, r.f1);
            Ok(())
        }
    }
}

fn analyze(cmd: AnalyzeCmd) -> CliResult {
    match cmd {
        AnalyzeCmd::Temporal { pool, corpus, zone, out } => {
            let pool = corpus::load_labeled(&pool)?;
            let corpus = load_corpus(&corpus)?;
            let hist = analysis::temporal_distribution(&pool, &corpus, zone)?;
            if hist.skipped > 0 {
                log::warn!("{} documents without timestamp were skipped", hist.skipped);
            }
            with_output(out.as_deref(), |w| analysis::write_temporal_csv(&hist, w))
        }
        AnalyzeCmd::Top { pool, corpus, field, k, out } => {
            let pool = corpus::load_labeled(&pool)?;
            let corpus = load_corpus(&corpus)?;
            let items = analysis::top_k(&pool, &corpus, field, k);
            with_output(out.as_deref(), |w| analysis::write_top_csv(&items, w))
        }
    }
}

fn synth_cmd(args: SynthArgs) -> CliResult {
    let mut cfg = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| io_err(path, e))?;
            serde_json::from_str(&text).map_err(Error::from)?
        }
        None => SynthConfig::default(),
    };
    cfg.docs = args.docs.unwrap_or(cfg.docs);
    cfg.planted_slurs = args.planted_slurs.unwrap_or(cfg.planted_slurs);
    cfg.implicit_patterns = args.implicit_patterns.unwrap_or(cfg.implicit_patterns);
    cfg.seed = args.seed.unwrap_or(cfg.seed);
    let s = synth::generate(&cfg)?;
    s.write(&args.out)?;
    println!(
        "wrote {} documents ({} hateful), {} planted slurs, {} patterns to {}",
        s.records.len(),
        s.truth().values().filter(|h| **h).count(),
        s.slurs.len(),
        s.patterns.len(),
        args.out.display()
    );
    Ok(())
}

fn with_output(out: Option<&Path>, f: impl FnOnce(&mut dyn Write) -> twopath::Result<()>) -> CliResult {
    match out {
        Some(path) => {
            let mut w = create(path)?;
            f(&mut w)?;
            w.flush().map_err(|e| io_err(path, e))?;
        }
        None => f(&mut io::stdout().lock())?,
    }
    Ok(())
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path).map(BufWriter::new).map_err(|e| io_err(path, e))
}

fn io_err(path: &Path, source: io::Error) -> Failure {
    Failure::Run(Error::Io { path: path.to_path_buf(), source })
}
