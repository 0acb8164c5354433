//! Profile similarity over blended mutual information, pair ranking, and
//! blend-weight calibration.
//!
//! Two words are similar when they carry similar information about the rest
//! of the vocabulary. For words x, y and every context word z ≠ x, y with a
//! nonzero blended value on either side, each z contributes
//! `2ab / (a² + b²)` with `a = I_B(x,z)`, `b = I_B(y,z)`; the score is the
//! mean contribution. Identical profiles score exactly 1, disjoint profiles
//! score 0, and the score is invariant under a global rescaling of the
//! matrix — so the log base chosen upstream cannot change a ranking.

use std::collections::BTreeMap;

use crate::cooccur::{CorpusTables, FrequencyTable};
use crate::corpus::WordId;
use crate::error::{Error, Result};
use crate::infotheory::{blend, mutual_information_with, BlendWeight, MiMatrix, MiVariant};
use crate::lexicon::{annotate, AnchorSet, Lexicon};

/// One ranked row: a canonical (lexicographically ordered) word pair with
/// its score, raw corpus counts and optional glosses.
#[derive(Debug, Clone, PartialEq)]
pub struct SimilarityRecord {
    pub word1: String,
    pub word2: String,
    pub similarity: f64,
    pub count1: u64,
    pub count2: u64,
    pub gloss1: Option<String>,
    pub gloss2: Option<String>,
}

impl SimilarityRecord {
    /// Build a record, swapping the pair into canonical order if needed.
    pub fn new(word1: &str, word2: &str, similarity: f64, count1: u64, count2: u64) -> Self {
        let (word1, word2, count1, count2) = if word1 <= word2 {
            (word1, word2, count1, count2)
        } else {
            (word2, word1, count2, count1)
        };
        SimilarityRecord {
            word1: word1.to_string(),
            word2: word2.to_string(),
            similarity,
            count1,
            count2,
            gloss1: None,
            gloss2: None,
        }
    }
}

/// Filters for `rank_pairs`. Defaults are min-count 3, cutoff 0.95, and the
/// mean-normalized score.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RankParams {
    /// Both words must occur at least this often in the corpus.
    pub min_count: u64,
    /// Keep pairs with score >= cutoff.
    pub cutoff: f64,
    /// Divide the contribution sum by |Z|; turning this off reports the raw
    /// sum, whose range is no longer [0, 1].
    pub normalized: bool,
}

impl Default for RankParams {
    fn default() -> Self {
        RankParams {
            min_count: 3,
            cutoff: 0.95,
            normalized: true,
        }
    }
}

impl RankParams {
    fn validate(&self) -> Result<()> {
        if self.min_count < 1 {
            return Err(Error::BadMinCount);
        }
        if !(0.0..=1.0).contains(&self.cutoff) {
            return Err(Error::Domain {
                what: "similarity cutoff",
                value: self.cutoff,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(())
    }
}

/// Sparse neighbor profiles: for each word, its nonzero matrix row sorted by
/// context id. Building them once makes all-pairs ranking a merge-join.
struct Profiles {
    rows: BTreeMap<WordId, Vec<(WordId, f64)>>,
}

impl Profiles {
    fn build(matrix: &MiMatrix) -> Self {
        let mut rows: BTreeMap<WordId, Vec<(WordId, f64)>> = BTreeMap::new();
        // Key iteration is ascending, so every row comes out sorted by the
        // context id without an explicit sort.
        for ((a, b), value) in matrix.iter() {
            rows.entry(a).or_default().push((b, value));
            if a != b {
                rows.entry(b).or_default().push((a, value));
            }
        }
        Profiles { rows }
    }

    fn row(&self, word: WordId) -> &[(WordId, f64)] {
        self.rows.get(&word).map(Vec::as_slice).unwrap_or(&[])
    }
}

/// Mean contribution over the merged context set, excluding x and y
/// themselves. `normalized = false` returns the raw sum instead.
fn profile_similarity(
    profiles: &Profiles,
    x: WordId,
    y: WordId,
    normalized: bool,
) -> f64 {
    let px = profiles.row(x);
    let py = profiles.row(y);
    let mut sum = 0.0;
    let mut contexts = 0u64;
    let (mut i, mut j) = (0, 0);
    while i < px.len() || j < py.len() {
        let (z, a, b) = match (px.get(i), py.get(j)) {
            (Some(&(zx, a)), Some(&(zy, b))) => {
                if zx < zy {
                    i += 1;
                    (zx, a, 0.0)
                } else if zy < zx {
                    j += 1;
                    (zy, 0.0, b)
                } else {
                    i += 1;
                    j += 1;
                    (zx, a, b)
                }
            }
            (Some(&(zx, a)), None) => {
                i += 1;
                (zx, a, 0.0)
            }
            (None, Some(&(zy, b))) => {
                j += 1;
                (zy, 0.0, b)
            }
            (None, None) => unreachable!(),
        };
        if z == x || z == y {
            continue;
        }
        contexts += 1;
        sum += 2.0 * a * b / (a * a + b * b);
    }
    if contexts == 0 {
        0.0
    } else if normalized {
        sum / contexts as f64
    } else {
        sum
    }
}

/// Similarity of two distinct vocabulary words over the blended matrix.
pub fn similarity(blended: &MiMatrix, x: WordId, y: WordId) -> Result<f64> {
    if x == y {
        return Err(Error::SelfPair {
            word: blended.interner().surface(x).to_string(),
        });
    }
    let missing: Vec<String> = [x, y]
        .iter()
        .filter(|&&w| !blended.contains_word(w))
        .map(|&w| blended.interner().surface(w).to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::UnknownWords { words: missing });
    }
    let profiles = Profiles::build(blended);
    Ok(profile_similarity(&profiles, x, y, true))
}

/// Score every eligible vocabulary pair, keep those at or above the cutoff,
/// and sort by descending score with lexicographic tie-breaking. Glosses are
/// attached when a lexicon is given.
pub fn rank_pairs(
    blended: &MiMatrix,
    freq: &FrequencyTable,
    params: &RankParams,
    lexicon: Option<&Lexicon>,
) -> Result<Vec<SimilarityRecord>> {
    params.validate()?;
    let profiles = Profiles::build(blended);
    let eligible: Vec<WordId> = blended
        .vocabulary()
        .iter()
        .copied()
        .filter(|&w| freq.count(w) >= params.min_count)
        .collect();
    let mut records = Vec::new();
    for (i, &x) in eligible.iter().enumerate() {
        for &y in &eligible[i + 1..] {
            let s = profile_similarity(&profiles, x, y, params.normalized);
            if s >= params.cutoff {
                records.push(SimilarityRecord::new(
                    blended.surface(x),
                    blended.surface(y),
                    s,
                    freq.count(x),
                    freq.count(y),
                ));
            }
        }
    }
    records.sort_by(|r1, r2| {
        r2.similarity
            .total_cmp(&r1.similarity)
            .then_with(|| r1.word1.cmp(&r2.word1))
            .then_with(|| r1.word2.cmp(&r2.word2))
    });
    if let Some(lexicon) = lexicon {
        annotate(&mut records, lexicon);
    }
    Ok(records)
}

/// How a grid point is scored during calibration.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CalibrationObjective {
    /// Mean similarity over the anchor pairs (higher is better).
    #[default]
    MeanSimilarity,
    /// Negated mean rank of the anchor pairs in the full ranking, so that
    /// higher is still better.
    MeanRank,
}

/// Options threaded through calibration; defaults match the pipeline's
/// default analysis settings.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct CalibrateParams {
    pub objective: CalibrationObjective,
    pub variant: MiVariant,
    pub clamp_negative: bool,
}

/// Grid evaluation plus the selected weight.
#[derive(Debug, Clone, PartialEq)]
pub struct CalibrationReport {
    /// (W, objective score) in grid order.
    pub grid: Vec<(f64, f64)>,
    pub chosen: BlendWeight,
    pub anchors: Vec<(String, String)>,
}

/// Evaluate every grid weight against the anchor pairs and pick the
/// argmax; ties break toward the smaller weight.
pub fn calibrate(
    tables: &CorpusTables,
    anchors: &AnchorSet,
    grid: &[f64],
    params: &CalibrateParams,
) -> Result<CalibrationReport> {
    if anchors.is_empty() {
        return Err(Error::EmptyAnchors);
    }
    if grid.is_empty() {
        return Err(Error::EmptyGrid);
    }
    let weights: Vec<BlendWeight> = grid
        .iter()
        .map(|&w| BlendWeight::new(w))
        .collect::<Result<_>>()?;

    let freq = &tables.freq;
    let mut anchor_ids = Vec::new();
    let mut missing = Vec::new();
    for (a, b) in anchors.pairs() {
        let ida = freq.interner().get(a).filter(|&id| freq.contains(id));
        let idb = freq.interner().get(b).filter(|&id| freq.contains(id));
        for (surface, id) in [(a, ida), (b, idb)] {
            if id.is_none() && !missing.contains(surface) {
                missing.push(surface.clone());
            }
        }
        if let (Some(ida), Some(idb)) = (ida, idb) {
            anchor_ids.push((ida, idb));
        }
    }
    if !missing.is_empty() {
        return Err(Error::UnknownWords { words: missing });
    }

    let mut m1 = mutual_information_with(freq, &tables.dist1, params.variant)?;
    let mut m2 = mutual_information_with(freq, &tables.dist2, params.variant)?;
    if params.clamp_negative {
        m1 = m1.clamp_negative();
        m2 = m2.clamp_negative();
    }

    let mut report_grid = Vec::with_capacity(weights.len());
    let mut best: Option<(f64, BlendWeight)> = None;
    for &w in &weights {
        let blended = blend(&m1, &m2, w)?;
        let score = match params.objective {
            CalibrationObjective::MeanSimilarity => {
                let profiles = Profiles::build(&blended);
                let total: f64 = anchor_ids
                    .iter()
                    .map(|&(x, y)| profile_similarity(&profiles, x, y, true))
                    .sum();
                total / anchor_ids.len() as f64
            }
            CalibrationObjective::MeanRank => {
                let ranking = rank_pairs(
                    &blended,
                    freq,
                    &RankParams {
                        min_count: 1,
                        cutoff: 0.0,
                        normalized: true,
                    },
                    None,
                )?;
                let total: f64 = anchor_ids
                    .iter()
                    .map(|&(x, y)| {
                        let (s1, s2) = order_surfaces(freq, x, y);
                        ranking
                            .iter()
                            .position(|r| r.word1 == s1 && r.word2 == s2)
                            .map(|p| (p + 1) as f64)
                            .unwrap_or((ranking.len() + 1) as f64)
                    })
                    .sum();
                -(total / anchor_ids.len() as f64)
            }
        };
        report_grid.push((w.value(), score));
        best = match best {
            None => Some((score, w)),
            Some((bs, bw)) => {
                if score > bs || (score == bs && w.value() < bw.value()) {
                    Some((score, w))
                } else {
                    Some((bs, bw))
                }
            }
        };
    }

    Ok(CalibrationReport {
        grid: report_grid,
        chosen: best.expect("grid is nonempty").1,
        anchors: anchors.pairs().to_vec(),
    })
}

fn order_surfaces(freq: &FrequencyTable, x: WordId, y: WordId) -> (String, String) {
    let sx = freq.surface(x).to_string();
    let sy = freq.surface(y).to_string();
    if sx <= sy {
        (sx, sy)
    } else {
        (sy, sx)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::parse_corpus;
    use crate::infotheory::MiTag;

    fn blended(vocab: &[&str], entries: &[((&str, &str), f64)]) -> MiMatrix {
        MiMatrix::from_entries(MiTag::Blended, vocab, entries).unwrap()
    }

    fn sim(m: &MiMatrix, x: &str, y: &str) -> f64 {
        similarity(m, m.word_id(x).unwrap(), m.word_id(y).unwrap()).unwrap()
    }

    #[test]
    fn identical_profiles_score_one() {
        let m = blended(
            &["x", "y", "p", "q"],
            &[
                (("x", "p"), 0.7),
                (("y", "p"), 0.7),
                (("x", "q"), 2.3),
                (("y", "q"), 2.3),
            ],
        );
        assert_eq!(sim(&m, "x", "y"), 1.0);
    }

    #[test]
    fn disjoint_profiles_score_zero() {
        let m = blended(
            &["x", "y", "p", "q"],
            &[(("x", "p"), 0.7), (("y", "q"), 2.3)],
        );
        assert_eq!(sim(&m, "x", "y"), 0.0);
    }

    #[test]
    fn empty_context_set_scores_zero() {
        let m = blended(&["x", "y", "p"], &[(("x", "y"), 1.0)]);
        // the only entry links x and y directly; no third word z exists
        assert_eq!(sim(&m, "x", "y"), 0.0);
    }

    #[test]
    fn three_word_profile_matches_direct_formula() {
        let (a1, b1) = (0.9, 0.4);
        let (a2, b2) = (1.5, 1.5);
        let m = blended(
            &["x", "y", "u", "v"],
            &[
                (("x", "u"), a1),
                (("y", "u"), b1),
                (("x", "v"), a2),
                (("y", "v"), b2),
            ],
        );
        let expected =
            (2.0 * a1 * b1 / (a1 * a1 + b1 * b1) + 2.0 * a2 * b2 / (a2 * a2 + b2 * b2)) / 2.0;
        assert_eq!(sim(&m, "x", "y"), expected);
    }

    #[test]
    fn symmetry_is_exact() {
        let m = blended(
            &["x", "y", "u", "v", "w"],
            &[
                (("x", "u"), 0.31),
                (("y", "u"), 1.7),
                (("x", "v"), 0.05),
                (("y", "w"), 2.9),
            ],
        );
        assert_eq!(sim(&m, "x", "y"), sim(&m, "y", "x"));
    }

    #[test]
    fn self_pair_and_unknown_word_are_errors() {
        let m = blended(&["x", "y"], &[(("x", "y"), 1.0)]);
        let x = m.word_id("x").unwrap();
        assert!(matches!(similarity(&m, x, x), Err(Error::SelfPair { .. })));
        assert!(m.word_id("zz").is_none());
    }

    #[test]
    fn the_pair_itself_is_excluded_from_contexts() {
        // x and y share context u, and also co-occur directly; the direct
        // entry must not contribute
        let m = blended(
            &["x", "y", "u"],
            &[(("x", "u"), 1.0), (("y", "u"), 1.0), (("x", "y"), 9.0)],
        );
        assert_eq!(sim(&m, "x", "y"), 1.0);
    }

    fn toy_tables() -> (MiMatrix, FrequencyTable) {
        let corpus = parse_corpus(
            "kdi:qor:li:XXXX:abr:qor:li:XXXX:kdi:qor:li:XXXX:abr:qor:li:XXXX:\
             kdi:qor:li:XXXX:abr:qor:li:XXXX:se:mlo:se:mlo:se",
            ':',
            "XXXX",
        )
        .unwrap();
        let tables = CorpusTables::build(&corpus).unwrap();
        let m1 = mutual_information_with(&tables.freq, &tables.dist1, MiVariant::Weighted).unwrap();
        let m2 = mutual_information_with(&tables.freq, &tables.dist2, MiVariant::Weighted).unwrap();
        let blended = blend(&m1, &m2, BlendWeight::new(0.75).unwrap()).unwrap();
        (blended, tables.freq)
    }

    #[test]
    fn ranking_filters_and_sorts() {
        let (blended, freq) = toy_tables();
        let records = rank_pairs(&blended, &freq, &RankParams::default(), None).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].word1, "abr");
        assert_eq!(records[0].word2, "kdi");
        assert_eq!(records[0].similarity, 1.0);
        assert_eq!((records[0].count1, records[0].count2), (3, 3));
        assert_eq!(records[0].gloss1, None);
    }

    #[test]
    fn ranking_is_sorted_and_within_range() {
        let (blended, freq) = toy_tables();
        let params = RankParams {
            min_count: 1,
            cutoff: 0.0,
            normalized: true,
        };
        let records = rank_pairs(&blended, &freq, &params, None).unwrap();
        for pair in records.windows(2) {
            assert!(
                pair[0].similarity > pair[1].similarity
                    || (pair[0].similarity == pair[1].similarity
                        && (pair[0].word1.clone(), pair[0].word2.clone())
                            <= (pair[1].word1.clone(), pair[1].word2.clone()))
            );
        }
        for r in &records {
            assert!((0.0..=1.0).contains(&r.similarity));
            assert!(r.word1 < r.word2);
        }
    }

    #[test]
    fn min_count_uses_raw_counts() {
        let (blended, freq) = toy_tables();
        let params = RankParams {
            min_count: 3,
            cutoff: 0.0,
            normalized: true,
        };
        let records = rank_pairs(&blended, &freq, &params, None).unwrap();
        // only se (3) and mlo (2)… mlo is below 3, so no pair survives except
        // those among words with count >= 3
        for r in &records {
            assert!(r.count1 >= 3 && r.count2 >= 3, "{r:?}");
        }
    }

    #[test]
    fn cutoff_is_range_checked() {
        let (blended, freq) = toy_tables();
        let params = RankParams {
            min_count: 3,
            cutoff: 1.0 + 1e-9,
            normalized: true,
        };
        assert!(matches!(
            rank_pairs(&blended, &freq, &params, None),
            Err(Error::Domain { .. })
        ));
        let params = RankParams {
            min_count: 0,
            cutoff: 0.5,
            normalized: true,
        };
        assert!(matches!(
            rank_pairs(&blended, &freq, &params, None),
            Err(Error::BadMinCount)
        ));
    }

    #[test]
    fn cutoff_of_one_keeps_only_exact_matches() {
        let (blended, freq) = toy_tables();
        let params = RankParams {
            min_count: 1,
            cutoff: 1.0,
            normalized: true,
        };
        let records = rank_pairs(&blended, &freq, &params, None).unwrap();
        assert!(records.iter().all(|r| r.similarity == 1.0));
        assert!(records
            .iter()
            .any(|r| r.word1 == "abr" && r.word2 == "kdi"));
    }

    #[test]
    fn global_scaling_preserves_scores() {
        let (blended, freq) = toy_tables();
        let params = RankParams {
            min_count: 1,
            cutoff: 0.0,
            normalized: true,
        };
        let base = rank_pairs(&blended, &freq, &params, None).unwrap();
        for c in [0.5, 2.0] {
            let scaled = rank_pairs(&blended.scaled(c).unwrap(), &freq, &params, None).unwrap();
            assert_eq!(base, scaled, "scale {c}");
        }
    }

    #[test]
    fn calibrate_identical_profiles_tie_breaks_low() {
        let corpus = parse_corpus(
            "kdi:qor:li:XXXX:abr:qor:li:XXXX:kdi:qor:li:XXXX:abr:qor:li",
            ':',
            "XXXX",
        )
        .unwrap();
        let tables = CorpusTables::build(&corpus).unwrap();
        let anchors = AnchorSet::new(vec![("kdi".to_string(), "abr".to_string())]).unwrap();
        let report = calibrate(
            &tables,
            &anchors,
            &[0.0, 0.25, 0.5, 0.75, 1.0],
            &CalibrateParams::default(),
        )
        .unwrap();
        for &(_, score) in &report.grid {
            assert_eq!(score, 1.0);
        }
        assert_eq!(report.chosen.value(), 0.0);
    }

    #[test]
    fn calibrate_single_point_grid() {
        let corpus = parse_corpus("kdi:qor:li:XXXX:abr:qor:li:XXXX:kdi:x:y", ':', "XXXX").unwrap();
        let tables = CorpusTables::build(&corpus).unwrap();
        let anchors = AnchorSet::new(vec![("kdi".to_string(), "abr".to_string())]).unwrap();
        let report =
            calibrate(&tables, &anchors, &[0.75], &CalibrateParams::default()).unwrap();
        assert_eq!(report.chosen.value(), 0.75);
        assert_eq!(report.grid.len(), 1);
    }

    #[test]
    fn calibrate_lists_missing_anchor_words() {
        let corpus = parse_corpus("a:b:c", ':', "XXXX").unwrap();
        let tables = CorpusTables::build(&corpus).unwrap();
        let anchors = AnchorSet::new(vec![
            ("a".to_string(), "zz".to_string()),
            ("qq".to_string(), "b".to_string()),
        ])
        .unwrap();
        let err = calibrate(&tables, &anchors, &[0.5], &CalibrateParams::default()).unwrap_err();
        match err {
            Error::UnknownWords { words } => {
                assert_eq!(words, vec!["zz".to_string(), "qq".to_string()]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn calibrate_validates_grid_and_anchors() {
        let corpus = parse_corpus("a:b:c", ':', "XXXX").unwrap();
        let tables = CorpusTables::build(&corpus).unwrap();
        let anchors = AnchorSet::new(vec![("a".to_string(), "b".to_string())]).unwrap();
        assert!(matches!(
            calibrate(&tables, &anchors, &[], &CalibrateParams::default()),
            Err(Error::EmptyGrid)
        ));
        assert!(matches!(
            calibrate(&tables, &anchors, &[1.5], &CalibrateParams::default()),
            Err(Error::Domain { .. })
        ));
        let empty = AnchorSet::new(vec![]).unwrap();
        assert!(matches!(
            calibrate(&tables, &empty, &[0.5], &CalibrateParams::default()),
            Err(Error::EmptyAnchors)
        ));
    }
}
