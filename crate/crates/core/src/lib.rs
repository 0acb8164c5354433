//! Distributional word-similarity statistics for small transliterated
//! corpora.
//!
//! The pipeline has five stages:
//!
//! 1. [`corpus`] — tokenize separator-delimited texts and split bound
//!    morphemes with a data-driven rewrite table;
//! 2. [`cooccur`] — normalized word frequencies plus unordered pair
//!    frequencies at word distances one and two, never crossing a text
//!    boundary;
//! 3. [`infotheory`] — per-pair mutual information at each distance and the
//!    weighted blend `sqrt(I_1² + (W·I_2)²)`;
//! 4. [`similarity`] — profile similarity over the blended matrix, pair
//!    ranking with count and cutoff filters, and grid calibration of W
//!    against known-similar anchor pairs;
//! 5. [`graph`] — Gower distances `sqrt(2(1−s))` and a minimum spanning
//!    tree export of the ranked pairs.
//!
//! [`zipf`] adds a rank-frequency power-law fit as a corpus sanity check,
//! and [`lexicon`] carries glosses for annotating reports.

pub mod cooccur;
pub mod corpus;
pub mod error;
pub mod graph;
pub mod infotheory;
pub mod lexicon;
pub mod similarity;
pub mod zipf;

pub use cooccur::{
    pair_frequencies, word_frequencies, CorpusTables, FrequencyTable, PairDistance, PairTable,
};
pub use corpus::{
    apply_rules, load_rule_table, parse_corpus, Corpus, Interner, MorphemeRule, RuleKind,
    RuleTable, WordId,
};
pub use error::{Error, Result};
pub use graph::{
    export_dot, export_edge_list, gower_distance, minimum_spanning_tree, DistanceEdge,
    SpanningTree,
};
pub use infotheory::{
    blend, mutual_information, mutual_information_with, BlendWeight, MiMatrix, MiTag, MiVariant,
};
pub use lexicon::{
    annotate, load_anchors, load_lexicon, AnchorSet, Confidence, Lexicon, LexiconEntry,
};
pub use similarity::{
    calibrate, rank_pairs, similarity, CalibrateParams, CalibrationObjective, CalibrationReport,
    RankParams, SimilarityRecord,
};
pub use zipf::{fit_ranked, fit_zipf, rank_frequency, RankedWord, ZipfFit};
