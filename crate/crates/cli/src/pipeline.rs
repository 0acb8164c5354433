//! Stage orchestration: the full pipeline and single-stage runs.
//!
//! Stages run in a fixed order — tokenize, stats, mi, rank, calibrate (when
//! anchors are given), mst, zipf — and each writes a fixed set of files
//! into the output directory. A failing stage removes everything written in
//! this run and maps to its own exit code, so callers can tell stages apart.
//! Single-stage runs recompute their prerequisites in memory and write only
//! their own files; running all stages one by one therefore produces a
//! directory byte-identical to a full run.

use std::fmt;
use std::path::PathBuf;

use distsim_core::{
    annotate, apply_rules, blend, calibrate, export_dot, fit_ranked, load_anchors,
    minimum_spanning_tree, mutual_information_with, parse_corpus, rank_frequency, rank_pairs,
    BlendWeight, CalibrateParams, CalibrationObjective, Corpus, CorpusTables, Lexicon, MiMatrix,
    MiVariant, RankParams, SimilarityRecord,
};

use crate::config::PipelineConfig;
use crate::report;

/// Pipeline stages, each with a distinct exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Corpus,
    Stats,
    Mi,
    Rank,
    Calibrate,
    Mst,
    Zipf,
}

impl Stage {
    pub fn name(self) -> &'static str {
        match self {
            Stage::Corpus => "corpus",
            Stage::Stats => "stats",
            Stage::Mi => "mi",
            Stage::Rank => "rank",
            Stage::Calibrate => "calibrate",
            Stage::Mst => "mst",
            Stage::Zipf => "zipf",
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            Stage::Corpus => 10,
            Stage::Stats => 11,
            Stage::Mi => 12,
            Stage::Rank => 13,
            Stage::Calibrate => 14,
            Stage::Mst => 15,
            Stage::Zipf => 16,
        }
    }
}

/// Exit code for configuration problems, before any stage runs.
pub const CONFIG_EXIT_CODE: i32 = 3;

#[derive(Debug)]
pub struct StageError {
    pub stage: Stage,
    pub message: String,
}

impl fmt::Display for StageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "error[{}]: {}", self.stage.name(), self.message)
    }
}

impl std::error::Error for StageError {}

fn stage_err<E: fmt::Display>(stage: Stage) -> impl FnOnce(E) -> StageError {
    move |e| StageError {
        stage,
        message: e.to_string(),
    }
}

/// Tracks files written during one run so a failing stage can remove them.
struct Outputs {
    dir: PathBuf,
    written: Vec<PathBuf>,
}

impl Outputs {
    fn new(dir: PathBuf) -> Self {
        Outputs {
            dir,
            written: Vec::new(),
        }
    }

    fn write(&mut self, stage: Stage, name: &str, contents: &str) -> Result<(), StageError> {
        std::fs::create_dir_all(&self.dir).map_err(stage_err(stage))?;
        let path = self.dir.join(name);
        std::fs::write(&path, contents).map_err(stage_err(stage))?;
        self.written.push(path);
        Ok(())
    }

    fn remove_written(&mut self) {
        for path in self.written.drain(..) {
            let _ = std::fs::remove_file(path);
        }
    }
}

/// Which stages to execute and write.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Run {
    All,
    Tokenize,
    Stats,
    /// The mi stage; `Some(gap)` restricts output to one distance file.
    Mi(Option<u8>),
    Rank,
    Calibrate,
    Mst,
    Zipf,
}

struct Analysis {
    corpus: Corpus,
    tables: CorpusTables,
    lexicon: Lexicon,
}

fn mi_variant(config: &PipelineConfig) -> MiVariant {
    if config.pmi_mode {
        MiVariant::Pmi
    } else {
        MiVariant::Weighted
    }
}

fn load_corpus(config: &PipelineConfig) -> Result<Corpus, StageError> {
    let mut raw = String::new();
    for (i, path) in config.corpus_paths.iter().enumerate() {
        let text = std::fs::read_to_string(path).map_err(|e| StageError {
            stage: Stage::Corpus,
            message: format!("cannot read corpus file {}: {e}", path.display()),
        })?;
        if i > 0 {
            // texts never span input files
            raw.push('\n');
            raw.push_str(&config.sentinel);
            raw.push('\n');
        }
        raw.push_str(&text);
    }
    let parsed =
        parse_corpus(&raw, config.separator, &config.sentinel).map_err(stage_err(Stage::Corpus))?;
    let rules = config.load_rules().map_err(stage_err(Stage::Corpus))?;
    Ok(apply_rules(&parsed, &rules))
}

fn prepare(config: &PipelineConfig) -> Result<Analysis, StageError> {
    let corpus = load_corpus(config)?;
    let tables = CorpusTables::build(&corpus).map_err(stage_err(Stage::Stats))?;
    let lexicon = config.load_lexicon().map_err(stage_err(Stage::Corpus))?;
    Ok(Analysis {
        corpus,
        tables,
        lexicon,
    })
}

fn compute_mi(
    config: &PipelineConfig,
    tables: &CorpusTables,
) -> Result<(MiMatrix, MiMatrix, MiMatrix), StageError> {
    let variant = mi_variant(config);
    let mut m1 = mutual_information_with(&tables.freq, &tables.dist1, variant)
        .map_err(stage_err(Stage::Mi))?;
    let mut m2 = mutual_information_with(&tables.freq, &tables.dist2, variant)
        .map_err(stage_err(Stage::Mi))?;
    if config.clamp_negative {
        m1 = m1.clamp_negative();
        m2 = m2.clamp_negative();
    }
    let weight = BlendWeight::new(config.weight).map_err(stage_err(Stage::Mi))?;
    let blended = blend(&m1, &m2, weight).map_err(stage_err(Stage::Mi))?;
    Ok((m1, m2, blended))
}

fn compute_ranking(
    config: &PipelineConfig,
    tables: &CorpusTables,
    blended: &MiMatrix,
    lexicon: &Lexicon,
) -> Result<Vec<SimilarityRecord>, StageError> {
    let params = RankParams {
        min_count: config.min_count,
        cutoff: config.cutoff,
        normalized: !config.unnormalized_similarity,
    };
    let mut records =
        rank_pairs(blended, &tables.freq, &params, None).map_err(stage_err(Stage::Rank))?;
    annotate(&mut records, lexicon);
    Ok(records)
}

fn write_calibration(
    config: &PipelineConfig,
    tables: &CorpusTables,
    out: &mut Outputs,
) -> Result<(), StageError> {
    let anchors_path = config.anchors.as_ref().ok_or_else(|| StageError {
        stage: Stage::Calibrate,
        message: "calibration needs --anchors FILE".to_string(),
    })?;
    let anchors = load_anchors(anchors_path).map_err(stage_err(Stage::Calibrate))?;
    let grid = config
        .grid
        .clone()
        .unwrap_or_else(|| (0..=20).map(|k| (k as f64 * 0.05).min(1.0)).collect());
    let params = CalibrateParams {
        objective: if config.rank_objective {
            CalibrationObjective::MeanRank
        } else {
            CalibrationObjective::MeanSimilarity
        },
        variant: mi_variant(config),
        clamp_negative: config.clamp_negative,
    };
    let report =
        calibrate(tables, &anchors, &grid, &params).map_err(stage_err(Stage::Calibrate))?;
    out.write(
        Stage::Calibrate,
        "calibration.tsv",
        &report::calibration_tsv(config, &report),
    )?;
    out.write(
        Stage::Calibrate,
        "calibration.json",
        &report::calibration_json(config, &report),
    )?;
    Ok(())
}

fn write_mst(
    config: &PipelineConfig,
    records: &[SimilarityRecord],
    lexicon: &Lexicon,
    out: &mut Outputs,
) -> Result<(), StageError> {
    if config.unnormalized_similarity {
        // raw contribution sums are not confined to [0, 1], so the metric
        // conversion behind the tree is undefined for them
        eprintln!("warning[mst]: unnormalized similarities have no Gower distance; writing an empty graph");
        out.write(Stage::Mst, "mst.dot", "graph word_similarity {\n}\n")?;
        out.write(Stage::Mst, "mst.tsv", &report::mst_tsv_empty(config))?;
        return Ok(());
    }
    if records.is_empty() {
        eprintln!("warning[mst]: no ranked pairs at the current filters; writing an empty graph");
        out.write(Stage::Mst, "mst.dot", "graph word_similarity {\n}\n")?;
        out.write(Stage::Mst, "mst.tsv", &report::mst_tsv_empty(config))?;
        return Ok(());
    }
    let tree = minimum_spanning_tree(records).map_err(stage_err(Stage::Mst))?;
    if !tree.is_connected() {
        eprintln!(
            "warning[mst]: ranked pairs do not connect all words; emitting a {}-component forest",
            tree.components()
        );
    }
    out.write(Stage::Mst, "mst.dot", &export_dot(&tree, Some(lexicon)))?;
    out.write(Stage::Mst, "mst.tsv", &report::mst_tsv(config, &tree))?;
    Ok(())
}

fn write_zipf(
    config: &PipelineConfig,
    tables: &CorpusTables,
    out: &mut Outputs,
    echo_to_stdout: bool,
) -> Result<(), StageError> {
    let ranked = rank_frequency(&tables.freq);
    let fit = fit_ranked(&ranked, config.zipf_max_rank).map_err(stage_err(Stage::Zipf))?;
    out.write(Stage::Zipf, "zipf.tsv", &report::zipf_tsv(config, &ranked))?;
    let json = report::zipf_json(config, &fit);
    out.write(Stage::Zipf, "zipf.json", &json)?;
    if echo_to_stdout {
        print!("{json}");
    }
    Ok(())
}

/// Execute the selected stage(s). On error, everything written by this call
/// is removed and the failing stage is reported.
pub fn execute(config: &PipelineConfig, run: Run) -> Result<(), StageError> {
    let mut out = Outputs::new(config.output_dir.clone());
    let result = execute_inner(config, run, &mut out);
    if result.is_err() {
        out.remove_written();
    }
    result
}

fn execute_inner(
    config: &PipelineConfig,
    run: Run,
    out: &mut Outputs,
) -> Result<(), StageError> {
    if run == Run::Tokenize {
        let corpus = load_corpus(config)?;
        return out.write(
            Stage::Corpus,
            "tokens.txt",
            &report::tokens_text(config, &corpus),
        );
    }

    let analysis = prepare(config)?;
    let tables = &analysis.tables;

    match run {
        Run::Tokenize => unreachable!("handled above"),
        Run::All => {
            out.write(
                Stage::Corpus,
                "tokens.txt",
                &report::tokens_text(config, &analysis.corpus),
            )?;
            out.write(Stage::Stats, "words.tsv", &report::words_tsv(config, &tables.freq))?;
            out.write(Stage::Stats, "pairs_d1.tsv", &report::pairs_tsv(config, &tables.dist1))?;
            out.write(Stage::Stats, "pairs_d2.tsv", &report::pairs_tsv(config, &tables.dist2))?;
            let (m1, m2, blended) = compute_mi(config, tables)?;
            out.write(Stage::Mi, "mi_d1.tsv", &report::mi_tsv(config, &m1))?;
            out.write(Stage::Mi, "mi_d2.tsv", &report::mi_tsv(config, &m2))?;
            out.write(Stage::Mi, "mi_blended.tsv", &report::mi_tsv(config, &blended))?;
            let records = compute_ranking(config, tables, &blended, &analysis.lexicon)?;
            out.write(
                Stage::Rank,
                "similarity.tsv",
                &report::similarity_tsv(config, &records),
            )?;
            out.write(
                Stage::Rank,
                "similarity.json",
                &report::similarity_json(config, &records),
            )?;
            if config.anchors.is_some() {
                write_calibration(config, tables, out)?;
            }
            write_mst(config, &records, &analysis.lexicon, out)?;
            write_zipf(config, tables, out, false)?;
        }
        Run::Stats => {
            out.write(Stage::Stats, "words.tsv", &report::words_tsv(config, &tables.freq))?;
            out.write(Stage::Stats, "pairs_d1.tsv", &report::pairs_tsv(config, &tables.dist1))?;
            out.write(Stage::Stats, "pairs_d2.tsv", &report::pairs_tsv(config, &tables.dist2))?;
        }
        Run::Mi(which) => {
            let (m1, m2, blended) = compute_mi(config, tables)?;
            match which {
                Some(1) => out.write(Stage::Mi, "mi_d1.tsv", &report::mi_tsv(config, &m1))?,
                Some(2) => out.write(Stage::Mi, "mi_d2.tsv", &report::mi_tsv(config, &m2))?,
                Some(other) => {
                    return Err(StageError {
                        stage: Stage::Mi,
                        message: format!("distance must be 1 or 2, got {other}"),
                    })
                }
                None => {
                    out.write(Stage::Mi, "mi_d1.tsv", &report::mi_tsv(config, &m1))?;
                    out.write(Stage::Mi, "mi_d2.tsv", &report::mi_tsv(config, &m2))?;
                    out.write(Stage::Mi, "mi_blended.tsv", &report::mi_tsv(config, &blended))?;
                }
            }
        }
        Run::Rank => {
            let (_, _, blended) = compute_mi(config, tables)?;
            let records = compute_ranking(config, tables, &blended, &analysis.lexicon)?;
            out.write(
                Stage::Rank,
                "similarity.tsv",
                &report::similarity_tsv(config, &records),
            )?;
            out.write(
                Stage::Rank,
                "similarity.json",
                &report::similarity_json(config, &records),
            )?;
        }
        Run::Calibrate => write_calibration(config, tables, out)?,
        Run::Mst => {
            let (_, _, blended) = compute_mi(config, tables)?;
            let records = compute_ranking(config, tables, &blended, &analysis.lexicon)?;
            write_mst(config, &records, &analysis.lexicon, out)?;
        }
        Run::Zipf => write_zipf(config, tables, out, true)?,
    }
    Ok(())
}
