//! Error type shared by all analysis stages.

use thiserror::Error;

/// Errors produced by corpus ingestion and the statistics stages.
#[derive(Debug, Error)]
pub enum Error {
    #[error("empty corpus: input contains no words")]
    EmptyCorpus,

    #[error("malformed input: token {token:?} contains the text sentinel {sentinel:?}")]
    MalformedInput { token: String, sentinel: String },

    #[error("separator {separator:?} occurs inside the sentinel {sentinel:?}")]
    SeparatorInSentinel { separator: char, sentinel: String },

    #[error("sentinel must be a nonempty string")]
    EmptySentinel,

    #[error("invalid rule {rule:?}: {reason}")]
    InvalidRule { rule: String, reason: String },

    #[error("rule file line {line}: {message}")]
    RuleParse { line: usize, message: String },

    #[error("no pairs: no text is long enough for distance-{distance} windows")]
    NoPairs { distance: usize },

    #[error("inconsistent tables: word {word:?} has pair counts but no frequency entry")]
    InconsistentTables { word: String },

    #[error("distance tag mismatch: expected {expected}, found {found}")]
    TagMismatch { expected: String, found: String },

    #[error("self-pair: similarity of {word:?} with itself is undefined")]
    SelfPair { word: String },

    #[error("unknown words: {}", words.join(", "))]
    UnknownWords { words: Vec<String> },

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    Domain {
        what: &'static str,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("min-count must be at least 1")]
    BadMinCount,

    #[error("empty graph: no similarity records to span")]
    EmptyGraph,

    #[error("insufficient data: need at least {needed} points, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("lexicon file line {line}: {message}")]
    LexiconParse { line: usize, message: String },

    #[error("anchor file line {line}: {message}")]
    AnchorParse { line: usize, message: String },

    #[error("empty calibration grid")]
    EmptyGrid,

    #[error("no anchor pairs given")]
    EmptyAnchors,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
