use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use distsim_cli::config::{parse_grid, PipelineConfig, Source};
use distsim_cli::pipeline::{execute, Run, CONFIG_EXIT_CODE};

/// Distributional word-similarity statistics for transliterated corpora.
///
/// The full pipeline tokenizes the corpus, counts distance-1/2 word pairs,
/// computes blended per-pair mutual information, ranks word pairs by
/// profile similarity, exports a minimum spanning tree of the ranking, and
/// fits a rank-frequency power law. Each subcommand can also run one stage
/// alone; running the stages in order reproduces `run` byte for byte.
#[derive(Parser)]
#[command(name = "distsim", version, about, max_term_width = 100)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the whole pipeline and write every report.
    Run(StageArgs),
    /// Tokenize the corpus (rule rewrites applied) into tokens.txt.
    Tokenize(StageArgs),
    /// Word and pair frequency tables (words.tsv, pairs_d1.tsv, pairs_d2.tsv).
    Stats(StageArgs),
    /// Mutual information tables (mi_d1.tsv, mi_d2.tsv, mi_blended.tsv).
    Mi(MiArgs),
    /// Ranked similarity report (similarity.tsv, similarity.json).
    Rank(StageArgs),
    /// Grid-search the blend weight against anchor pairs (needs --anchors).
    Calibrate(StageArgs),
    /// Minimum spanning tree of the ranked pairs (mst.dot, mst.tsv).
    Mst(StageArgs),
    /// Rank-frequency table and power-law fit (zipf.tsv, zipf.json).
    Zipf(StageArgs),
}

#[derive(Args)]
struct StageArgs {
    /// Corpus files; texts never span file boundaries.
    corpus: Vec<PathBuf>,

    /// Config file with `key = value` lines; flags override it.
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,

    /// Word separator character.
    #[arg(long, value_name = "CHAR")]
    separator: Option<char>,

    /// Text-boundary sentinel token.
    #[arg(long, value_name = "STR")]
    sentinel: Option<String>,

    /// Morpheme rule file, or `default` / `none`.
    #[arg(long, value_name = "PATH")]
    rules: Option<String>,

    /// Gloss lexicon TSV, or `default` / `none`.
    #[arg(long, value_name = "PATH")]
    lexicon: Option<String>,

    /// Anchor pairs TSV for calibration.
    #[arg(long, value_name = "FILE")]
    anchors: Option<PathBuf>,

    /// Calibration grid: a single weight or `start:stop:step`.
    #[arg(long, value_name = "SPEC")]
    grid: Option<String>,

    /// Blend weight W in [0, 1].
    #[arg(long, value_name = "W")]
    weight: Option<f64>,

    /// Minimum raw count for both words of a ranked pair.
    #[arg(long = "min-count", value_name = "N")]
    min_count: Option<u64>,

    /// Similarity cutoff in [0, 1].
    #[arg(long, value_name = "C")]
    cutoff: Option<f64>,

    /// Output directory (env: DISTSIM_OUTPUT_DIR).
    #[arg(short = 'o', long = "output-dir", value_name = "DIR")]
    output_dir: Option<PathBuf>,

    /// Use plain PMI instead of the frequency-weighted form.
    #[arg(long = "pmi-mode")]
    pmi_mode: bool,

    /// Clamp negative mutual-information values to zero before blending.
    #[arg(long = "clamp-negative")]
    clamp_negative: bool,

    /// Report the raw contribution sum instead of the mean.
    #[arg(long = "unnormalized-similarity")]
    unnormalized_similarity: bool,

    /// Calibrate on mean anchor rank instead of mean anchor similarity.
    #[arg(long = "rank-objective")]
    rank_objective: bool,

    /// Fit the power law over the top N ranks only.
    #[arg(long = "zipf-max-rank", value_name = "N")]
    zipf_max_rank: Option<usize>,
}

#[derive(Args)]
struct MiArgs {
    #[command(flatten)]
    common: StageArgs,

    /// Emit only the table for this distance (1 or 2).
    #[arg(long, value_name = "D")]
    distance: Option<u8>,
}

impl StageArgs {
    fn resolve(self) -> Result<PipelineConfig, String> {
        let mut config = PipelineConfig::default();
        if let Some(path) = &self.config {
            config.apply_file(path).map_err(|e| e.to_string())?;
        }
        if let Ok(dir) = std::env::var("DISTSIM_OUTPUT_DIR") {
            if !dir.is_empty() {
                config.output_dir = PathBuf::from(dir);
            }
        }
        if !self.corpus.is_empty() {
            config.corpus_paths = self.corpus;
        }
        if let Some(separator) = self.separator {
            config.separator = separator;
        }
        if let Some(sentinel) = self.sentinel {
            config.sentinel = sentinel;
        }
        if let Some(rules) = self.rules {
            config.rules = Source::parse(&rules);
        }
        if let Some(lexicon) = self.lexicon {
            config.lexicon = Source::parse(&lexicon);
        }
        if let Some(anchors) = self.anchors {
            config.anchors = Some(anchors);
        }
        if let Some(grid) = self.grid {
            config.grid = Some(parse_grid(&grid).map_err(|e| e.to_string())?);
        }
        if let Some(weight) = self.weight {
            config.weight = weight;
        }
        if let Some(min_count) = self.min_count {
            config.min_count = min_count;
        }
        if let Some(cutoff) = self.cutoff {
            config.cutoff = cutoff;
        }
        if let Some(output_dir) = self.output_dir {
            config.output_dir = output_dir;
        }
        if self.pmi_mode {
            config.pmi_mode = true;
        }
        if self.clamp_negative {
            config.clamp_negative = true;
        }
        if self.unnormalized_similarity {
            config.unnormalized_similarity = true;
        }
        if self.rank_objective {
            config.rank_objective = true;
        }
        if let Some(n) = self.zipf_max_rank {
            config.zipf_max_rank = if n == 0 { None } else { Some(n) };
        }
        config.validate().map_err(|e| e.to_string())?;
        Ok(config)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (args, run) = match cli.command {
        Command::Run(a) => (a, Run::All),
        Command::Tokenize(a) => (a, Run::Tokenize),
        Command::Stats(a) => (a, Run::Stats),
        Command::Mi(m) => {
            let distance = m.distance;
            (m.common, Run::Mi(distance))
        }
        Command::Rank(a) => (a, Run::Rank),
        Command::Calibrate(a) => (a, Run::Calibrate),
        Command::Mst(a) => (a, Run::Mst),
        Command::Zipf(a) => (a, Run::Zipf),
    };
    let config = match args.resolve() {
        Ok(config) => config,
        Err(message) => {
            eprintln!("error[config]: {message}");
            return ExitCode::from(CONFIG_EXIT_CODE as u8);
        }
    };
    match execute(&config, run) {
        Ok(()) => ExitCode::SUCCESS,
        Err(stage_error) => {
            eprintln!("{stage_error}");
            ExitCode::from(stage_error.stage.exit_code() as u8)
        }
    }
}
