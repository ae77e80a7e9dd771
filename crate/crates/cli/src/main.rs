use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use log::info;

use mipe_core::config::MipeConfig;
use mipe_core::embedding::EmbeddingStore;
use mipe_core::harness::{emit_report, load_dataset, score_dataset, RatingFusion, ScoreReport, INSTANCES_FILE};
use mipe_core::idf::{build_idf_from_file, IdfDictionary};
use mipe_core::metrics::ExternalScores;
use mipe_core::pipeline::Resources;
use mipe_core::Error;

const EXIT_USAGE: u8 = 1;
const EXIT_DATA: u8 = 2;

/// Metric-independent scoring of code-mixed generation output.
#[derive(Parser)]
#[command(name = "mipe", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// IDF dictionary tools.
    Idf {
        #[command(subcommand)]
        command: IdfCommand,
    },
    /// Score a dataset and write instance scores, rating means and
    /// correlations.
    Score(ScoreArgs),
    /// Rebuild the tables from an instance score dump.
    Report(ReportArgs),
    /// Print the default configuration as TOML.
    Config,
}

#[derive(Subcommand)]
enum IdfCommand {
    /// Build a dictionary from a corpus with one sentence per line.
    Build {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Weight for words absent from the corpus.
        #[arg(long)]
        mu_miss: Option<f64>,
    },
}

#[derive(Args)]
struct ScoreArgs {
    /// JSON-lines dataset.
    #[arg(long)]
    dataset: PathBuf,
    /// Dictionary written by `mipe idf build`.
    #[arg(long)]
    idf: PathBuf,
    /// Aligned word vectors in word2vec text format.
    #[arg(long)]
    embeddings: Option<PathBuf>,
    #[arg(long, value_delimiter = ',', default_value = "bleu,nist,wer,ter")]
    metrics: Vec<String>,
    /// Precomputed scores of an external metric; repeatable.
    #[arg(long = "external-scores")]
    external_scores: Vec<PathBuf>,
    #[arg(long)]
    config: Option<PathBuf>,
    /// Overrides the config file's rating fusion.
    #[arg(long, value_enum)]
    fusion: Option<Fusion>,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct ReportArgs {
    /// Directory holding an instance score dump.
    #[arg(long)]
    scores: PathBuf,
    /// Defaults to the scores directory.
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "per-rating")]
    fusion: Fusion,
}

#[derive(Clone, Copy, ValueEnum)]
enum Fusion {
    PerRating,
    Mean,
}

impl From<Fusion> for RatingFusion {
    fn from(f: Fusion) -> Self {
        match f {
            Fusion::PerRating => RatingFusion::PerRating,
            Fusion::Mean => RatingFusion::Mean,
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::UnknownMetric { .. } | Error::Config(_) => EXIT_USAGE,
        _ => EXIT_DATA,
    }
}

fn idf_build(corpus: PathBuf, out: PathBuf, mu_miss: Option<f64>) -> mipe_core::Result<()> {
    if let Some(m) = mu_miss {
        if !(m > 0.0 && m.is_finite()) {
            return Err(Error::Config("--mu-miss must be positive".into()));
        }
    }
    let mut dict = build_idf_from_file::<f64>(&corpus)?;
    if let Some(m) = mu_miss {
        dict = dict.with_mu_miss(m);
    }
    dict.save(&out)?;
    info!(
        "{} words from {} sentences -> {}",
        dict.len(),
        dict.n_docs(),
        out.display()
    );
    Ok(())
}

fn score(args: ScoreArgs) -> mipe_core::Result<()> {
    let cfg = match &args.config {
        Some(p) => MipeConfig::<f64>::load(p)?,
        None => MipeConfig::default(),
    };
    let idf = IdfDictionary::load(&args.idf)?;
    let store = match &args.embeddings {
        Some(p) => EmbeddingStore::load(p)?,
        None => EmbeddingStore::empty(0),
    };
    let mut res = Resources::from_config(idf, store, &cfg)?;
    for p in &args.external_scores {
        res.add_external(ExternalScores::load(p)?)?;
    }
    let metrics = res.resolve_metrics(&args.metrics)?;
    let instances = load_dataset(&args.dataset)?;
    info!("scoring {} instances under {} metrics", instances.len(), metrics.len());
    let rows = score_dataset(&instances, &metrics, &res)?;
    let fusion = args.fusion.map_or(cfg.harness.rating_fusion, RatingFusion::from);
    for p in emit_report(&ScoreReport::new(fusion, rows), &args.out)? {
        info!("wrote {}", p.display());
    }
    Ok(())
}

fn report(args: ReportArgs) -> mipe_core::Result<()> {
    let report = ScoreReport::<f64>::read_instances(args.scores.join(INSTANCES_FILE), args.fusion.into())?;
    let out = args.out.unwrap_or(args.scores);
    for p in emit_report(&report, &out)? {
        info!("wrote {}", p.display());
    }
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = match cli.command {
        Command::Idf {
            command: IdfCommand::Build { corpus, out, mu_miss },
        } => idf_build(corpus, out, mu_miss),
        Command::Score(args) => score(args),
        Command::Report(args) => report(args),
        Command::Config => {
            print!("{}", MipeConfig::<f64>::default().to_toml_string());
            Ok(())
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
