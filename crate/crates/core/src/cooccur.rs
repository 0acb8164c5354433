//! Normalized word frequencies and distance-1/distance-2 pair frequencies.
//!
//! For a text `A B C`, `A/B` and `B/C` are distance-one neighbors and `A/C`
//! is a distance-two neighbor. Pairs are pooled unordered and never span a
//! text boundary. Counts accumulate as exact integers; division by the
//! window total happens once, on lookup.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::corpus::{Corpus, Interner, WordId};
use crate::error::{Error, Result};

/// Window distance for pair counting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum PairDistance {
    One,
    Two,
}

impl PairDistance {
    pub fn gap(self) -> usize {
        match self {
            PairDistance::One => 1,
            PairDistance::Two => 2,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            PairDistance::One => "1",
            PairDistance::Two => "2",
        }
    }
}

/// Canonical unordered pair key: the smaller id first.
pub fn pair_key(a: WordId, b: WordId) -> (WordId, WordId) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Per-word counts and normalized frequencies over the whole corpus.
#[derive(Debug, Clone)]
pub struct FrequencyTable {
    interner: Arc<Interner>,
    counts: BTreeMap<WordId, u64>,
    total: u64,
}

impl FrequencyTable {
    pub fn count(&self, word: WordId) -> u64 {
        self.counts.get(&word).copied().unwrap_or(0)
    }

    /// count(word) / total-words.
    pub fn frequency(&self, word: WordId) -> f64 {
        self.count(word) as f64 / self.total as f64
    }

    pub fn total_words(&self) -> u64 {
        self.total
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    pub fn contains(&self, word: WordId) -> bool {
        self.counts.contains_key(&word)
    }

    /// Entries in ascending id order.
    pub fn iter(&self) -> impl Iterator<Item = (WordId, u64)> + '_ {
        self.counts.iter().map(|(&id, &c)| (id, c))
    }

    pub fn words(&self) -> impl Iterator<Item = WordId> + '_ {
        self.counts.keys().copied()
    }

    pub fn interner(&self) -> &Interner {
        &self.interner
    }

    pub fn surface(&self, word: WordId) -> &str {
        self.interner.surface(word)
    }
}

/// Unordered pair counts at a fixed distance, plus the window total used for
/// normalization.
#[derive(Debug, Clone)]
pub struct PairTable {
    interner: Arc<Interner>,
    distance: PairDistance,
    counts: BTreeMap<(WordId, WordId), u64>,
    total_windows: u64,
}

impl PairTable {
    pub fn distance(&self) -> PairDistance {
        self.distance
    }

    pub fn count(&self, a: WordId, b: WordId) -> u64 {
        self.counts.get(&pair_key(a, b)).copied().unwrap_or(0)
    }

    /// count(pair) / total distance-d windows.
    pub fn frequency(&self, a: WordId, b: WordId) -> f64 {
        self.count(a, b) as f64 / self.total_windows as f64
    }

    pub fn total_pairs(&self) -> u64 {
        self.total_windows
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Entries in ascending canonical-key order.
    pub fn iter(&self) -> impl Iterator<Item = ((WordId, WordId), u64)> + '_ {
        self.counts.iter().map(|(&k, &c)| (k, c))
    }

    pub fn interner(&self) -> &Interner {
        &self.interner
    }

    pub fn surface(&self, word: WordId) -> &str {
        self.interner.surface(word)
    }
}

/// Count every word of the corpus and normalize by the corpus word total.
pub fn word_frequencies(corpus: &Corpus) -> FrequencyTable {
    let mut counts: BTreeMap<WordId, u64> = BTreeMap::new();
    let mut total = 0u64;
    for text in corpus.texts() {
        for &word in text {
            *counts.entry(word).or_insert(0) += 1;
            total += 1;
        }
    }
    FrequencyTable {
        interner: corpus.shared_interner(),
        counts,
        total,
    }
}

/// Count unordered distance-d pairs. A text of length `n` contributes
/// `max(n - d, 0)` windows; pairs never span text boundaries. Errors when no
/// text is long enough to form a single window.
pub fn pair_frequencies(corpus: &Corpus, distance: PairDistance) -> Result<PairTable> {
    let gap = distance.gap();
    let mut counts: BTreeMap<(WordId, WordId), u64> = BTreeMap::new();
    let mut total_windows = 0u64;
    for text in corpus.texts() {
        if text.len() <= gap {
            continue;
        }
        for i in 0..text.len() - gap {
            let key = pair_key(text[i], text[i + gap]);
            *counts.entry(key).or_insert(0) += 1;
            total_windows += 1;
        }
    }
    if total_windows == 0 {
        return Err(Error::NoPairs { distance: gap });
    }
    Ok(PairTable {
        interner: corpus.shared_interner(),
        distance,
        counts,
        total_windows,
    })
}

/// The three tables every downstream stage consumes.
#[derive(Debug, Clone)]
pub struct CorpusTables {
    pub freq: FrequencyTable,
    pub dist1: PairTable,
    pub dist2: PairTable,
}

impl CorpusTables {
    pub fn build(corpus: &Corpus) -> Result<Self> {
        Ok(CorpusTables {
            freq: word_frequencies(corpus),
            dist1: pair_frequencies(corpus, PairDistance::One)?,
            dist2: pair_frequencies(corpus, PairDistance::Two)?,
        })
    }
}
