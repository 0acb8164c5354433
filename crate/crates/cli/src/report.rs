//! Deterministic report rendering.
//!
//! Every TSV report opens with the resolved analysis parameters as `#`
//! comment lines, so results are self-describing; the output directory is
//! deliberately not echoed, keeping two runs into different directories
//! byte-identical. All floating-point TSV columns are fixed at 6 decimals.

use std::fmt::Write as _;

use distsim_core::{
    export_edge_list, CalibrationReport, Corpus, FrequencyTable, MiMatrix, PairTable, RankedWord,
    SimilarityRecord, SpanningTree, ZipfFit,
};
use serde::Serialize;

use crate::config::PipelineConfig;

pub fn fmt6(v: f64) -> String {
    format!("{v:.6}")
}

fn path_list(paths: &[std::path::PathBuf]) -> String {
    paths
        .iter()
        .map(|p| p.display().to_string())
        .collect::<Vec<_>>()
        .join(",")
}

/// The `# key = value` parameter block shared by every TSV report.
pub fn echo_lines(config: &PipelineConfig) -> String {
    let mut out = String::new();
    let mut line = |key: &str, value: String| writeln!(out, "# {key} = {value}").unwrap();
    line("corpus", path_list(&config.corpus_paths));
    line("separator", config.separator.to_string());
    line("sentinel", config.sentinel.clone());
    line("rules", config.rules.to_string());
    line("lexicon", config.lexicon.to_string());
    line(
        "anchors",
        config
            .anchors
            .as_ref()
            .map(|p| p.display().to_string())
            .unwrap_or_else(|| "none".to_string()),
    );
    line(
        "grid",
        config
            .grid
            .as_ref()
            .map(|g| g.iter().map(|&w| fmt6(w)).collect::<Vec<_>>().join(","))
            .unwrap_or_else(|| "none".to_string()),
    );
    line("weight", fmt6(config.weight));
    line("min_count", config.min_count.to_string());
    line("cutoff", fmt6(config.cutoff));
    line("pmi_mode", config.pmi_mode.to_string());
    line("clamp_negative", config.clamp_negative.to_string());
    line(
        "unnormalized_similarity",
        config.unnormalized_similarity.to_string(),
    );
    line("rank_objective", config.rank_objective.to_string());
    line(
        "zipf_max_rank",
        config
            .zipf_max_rank
            .map(|n| n.to_string())
            .unwrap_or_else(|| "none".to_string()),
    );
    out
}

/// JSON mirror of the echoed parameters.
#[derive(Serialize)]
pub struct ConfigJson {
    corpus: Vec<String>,
    separator: String,
    sentinel: String,
    rules: String,
    lexicon: String,
    anchors: Option<String>,
    grid: Option<Vec<f64>>,
    weight: f64,
    min_count: u64,
    cutoff: f64,
    pmi_mode: bool,
    clamp_negative: bool,
    unnormalized_similarity: bool,
    rank_objective: bool,
    zipf_max_rank: Option<usize>,
}

impl ConfigJson {
    pub fn from_config(config: &PipelineConfig) -> Self {
        ConfigJson {
            corpus: config
                .corpus_paths
                .iter()
                .map(|p| p.display().to_string())
                .collect(),
            separator: config.separator.to_string(),
            sentinel: config.sentinel.clone(),
            rules: config.rules.to_string(),
            lexicon: config.lexicon.to_string(),
            anchors: config.anchors.as_ref().map(|p| p.display().to_string()),
            grid: config.grid.clone(),
            weight: config.weight,
            min_count: config.min_count,
            cutoff: config.cutoff,
            pmi_mode: config.pmi_mode,
            clamp_negative: config.clamp_negative,
            unnormalized_similarity: config.unnormalized_similarity,
            rank_objective: config.rank_objective,
            zipf_max_rank: config.zipf_max_rank,
        }
    }
}

fn to_pretty_json<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("report serialization");
    text.push('\n');
    text
}

/// The tokenized corpus in the corpus file format itself: one text per
/// line, a sentinel line between texts. Feeding it back in (with no rules)
/// reparses to the same corpus.
pub fn tokens_text(config: &PipelineConfig, corpus: &Corpus) -> String {
    let sep = config.separator.to_string();
    let mut out = String::new();
    for (i, text) in corpus.texts().iter().enumerate() {
        if i > 0 {
            out.push_str(&config.sentinel);
            out.push('\n');
        }
        let words: Vec<&str> = text.iter().map(|&id| corpus.surface(id)).collect();
        out.push_str(&words.join(&sep));
        out.push('\n');
    }
    out
}

pub fn words_tsv(config: &PipelineConfig, freq: &FrequencyTable) -> String {
    let mut rows: Vec<(String, u64, f64)> = freq
        .iter()
        .map(|(id, count)| (freq.surface(id).to_string(), count, freq.frequency(id)))
        .collect();
    rows.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = echo_lines(config);
    out.push_str("word\tcount\tfrequency\n");
    for (word, count, frequency) in rows {
        writeln!(out, "{word}\t{count}\t{}", fmt6(frequency)).unwrap();
    }
    out
}

fn surface_pair(table: &PairTable, a: distsim_core::WordId, b: distsim_core::WordId) -> (String, String) {
    let sa = table.surface(a).to_string();
    let sb = table.surface(b).to_string();
    if sa <= sb {
        (sa, sb)
    } else {
        (sb, sa)
    }
}

pub fn pairs_tsv(config: &PipelineConfig, pairs: &PairTable) -> String {
    let total = pairs.total_pairs() as f64;
    let mut rows: Vec<(String, String, u64)> = pairs
        .iter()
        .map(|((a, b), count)| {
            let (sa, sb) = surface_pair(pairs, a, b);
            (sa, sb, count)
        })
        .collect();
    rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut out = echo_lines(config);
    out.push_str("word1\tword2\tdistance\tcount\tfrequency\n");
    let label = pairs.distance().label();
    for (w1, w2, count) in rows {
        writeln!(out, "{w1}\t{w2}\t{label}\t{count}\t{}", fmt6(count as f64 / total)).unwrap();
    }
    out
}

pub fn mi_tsv(config: &PipelineConfig, matrix: &MiMatrix) -> String {
    let mut rows: Vec<(String, String, f64)> = matrix
        .iter()
        .map(|((a, b), value)| {
            let sa = matrix.surface(a).to_string();
            let sb = matrix.surface(b).to_string();
            if sa <= sb {
                (sa, sb, value)
            } else {
                (sb, sa, value)
            }
        })
        .collect();
    rows.sort_by(|a, b| (&a.0, &a.1).cmp(&(&b.0, &b.1)));
    let mut out = echo_lines(config);
    out.push_str("word1\tword2\tdistance\tvalue_bits\n");
    let label = matrix.tag().label();
    for (w1, w2, value) in rows {
        writeln!(out, "{w1}\t{w2}\t{label}\t{}", fmt6(value)).unwrap();
    }
    out
}

fn gloss_or_question(gloss: &Option<String>) -> &str {
    gloss.as_deref().unwrap_or("?")
}

pub fn similarity_tsv(config: &PipelineConfig, records: &[SimilarityRecord]) -> String {
    let mut out = echo_lines(config);
    out.push_str("rank\tword1\tword2\tgloss1\tgloss2\tsimilarity\tcount1\tcount2\n");
    for (i, r) in records.iter().enumerate() {
        writeln!(
            out,
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}",
            i + 1,
            r.word1,
            r.word2,
            gloss_or_question(&r.gloss1),
            gloss_or_question(&r.gloss2),
            fmt6(r.similarity),
            r.count1,
            r.count2
        )
        .unwrap();
    }
    out
}

#[derive(Serialize)]
struct SimilarityRowJson<'a> {
    rank: usize,
    word1: &'a str,
    word2: &'a str,
    gloss1: &'a str,
    gloss2: &'a str,
    similarity: f64,
    count1: u64,
    count2: u64,
}

#[derive(Serialize)]
struct SimilarityReportJson<'a> {
    config: ConfigJson,
    records: Vec<SimilarityRowJson<'a>>,
}

pub fn similarity_json(config: &PipelineConfig, records: &[SimilarityRecord]) -> String {
    let rows = records
        .iter()
        .enumerate()
        .map(|(i, r)| SimilarityRowJson {
            rank: i + 1,
            word1: &r.word1,
            word2: &r.word2,
            gloss1: gloss_or_question(&r.gloss1),
            gloss2: gloss_or_question(&r.gloss2),
            similarity: r.similarity,
            count1: r.count1,
            count2: r.count2,
        })
        .collect();
    to_pretty_json(&SimilarityReportJson {
        config: ConfigJson::from_config(config),
        records: rows,
    })
}

pub fn calibration_tsv(config: &PipelineConfig, report: &CalibrationReport) -> String {
    let mut out = echo_lines(config);
    writeln!(out, "# chosen_w = {}", fmt6(report.chosen.value())).unwrap();
    out.push_str("w\tobjective\n");
    for &(w, objective) in &report.grid {
        writeln!(out, "{}\t{}", fmt6(w), fmt6(objective)).unwrap();
    }
    out
}

#[derive(Serialize)]
struct CalibrationPointJson {
    w: f64,
    objective: f64,
}

#[derive(Serialize)]
struct CalibrationReportJson {
    config: ConfigJson,
    anchors: Vec<(String, String)>,
    grid: Vec<CalibrationPointJson>,
    chosen_w: f64,
}

pub fn calibration_json(config: &PipelineConfig, report: &CalibrationReport) -> String {
    to_pretty_json(&CalibrationReportJson {
        config: ConfigJson::from_config(config),
        anchors: report.anchors.clone(),
        grid: report
            .grid
            .iter()
            .map(|&(w, objective)| CalibrationPointJson { w, objective })
            .collect(),
        chosen_w: report.chosen.value(),
    })
}

pub fn mst_tsv(config: &PipelineConfig, tree: &SpanningTree) -> String {
    let mut out = echo_lines(config);
    out.push_str(&export_edge_list(tree));
    out
}

/// Edge-list header alone, for the degenerate no-records case.
pub fn mst_tsv_empty(config: &PipelineConfig) -> String {
    let mut out = echo_lines(config);
    out.push_str("word1\tword2\tdistance\n");
    out
}

pub fn zipf_tsv(config: &PipelineConfig, ranked: &[RankedWord]) -> String {
    let mut out = echo_lines(config);
    out.push_str("rank\tword\tfrequency\n");
    for row in ranked {
        writeln!(out, "{}\t{}\t{}", row.rank, row.surface, fmt6(row.frequency)).unwrap();
    }
    out
}

#[derive(Serialize)]
struct ZipfJson {
    config: ConfigJson,
    c: f64,
    alpha: f64,
    r_squared: f64,
    n_ranks: usize,
}

pub fn zipf_json(config: &PipelineConfig, fit: &ZipfFit) -> String {
    to_pretty_json(&ZipfJson {
        config: ConfigJson::from_config(config),
        c: fit.c,
        alpha: fit.alpha,
        r_squared: fit.r_squared,
        n_ranks: fit.n_ranks,
    })
}
