//! Per-pair mutual information and the distance-blended combination.
//!
//! For words x, y the association value is `p_xy * log2(p_xy / (p_x * p_y))`
//! in bits, computed separately from the distance-1 and distance-2 pair
//! tables. The two are then combined per pair as
//! `I_B = sqrt(I_1^2 + (W * I_2)^2)` with a blend weight `W` in [0, 1].
//! Negative values are kept — the squaring makes the blend nonnegative — and
//! zero cells are never materialized: an absent entry reads as exactly 0.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::cooccur::{pair_key, FrequencyTable, PairDistance, PairTable};
use crate::corpus::{Interner, WordId};
use crate::error::{Error, Result};

/// Which tables a matrix was computed from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MiTag {
    Distance(PairDistance),
    Blended,
}

impl MiTag {
    pub fn label(self) -> &'static str {
        match self {
            MiTag::Distance(PairDistance::One) => "1",
            MiTag::Distance(PairDistance::Two) => "2",
            MiTag::Blended => "blended",
        }
    }
}

/// The per-pair statistic to compute.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MiVariant {
    /// `p_xy * log2(p_xy / (p_x * p_y))` — the frequency-weighted form.
    #[default]
    Weighted,
    /// Plain pointwise mutual information, `log2(p_xy / (p_x * p_y))`.
    Pmi,
}

/// Blend weight W. Valid values lie in [0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BlendWeight(f64);

impl BlendWeight {
    pub fn new(w: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&w) {
            return Err(Error::Domain {
                what: "blend weight W",
                value: w,
                lo: 0.0,
                hi: 1.0,
            });
        }
        Ok(BlendWeight(w))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

/// Symmetric sparse map of per-pair information values in bits. Entries are
/// stored under the canonical (smaller id first) key; absent entries denote
/// exactly 0 and zero-valued results are never stored.
#[derive(Debug, Clone)]
pub struct MiMatrix {
    interner: Arc<Interner>,
    tag: MiTag,
    values: BTreeMap<(WordId, WordId), f64>,
    vocabulary: BTreeSet<WordId>,
}

impl MiMatrix {
    pub fn tag(&self) -> MiTag {
        self.tag
    }

    pub fn value(&self, a: WordId, b: WordId) -> f64 {
        self.values.get(&pair_key(a, b)).copied().unwrap_or(0.0)
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Entries in ascending canonical-key order.
    pub fn iter(&self) -> impl Iterator<Item = ((WordId, WordId), f64)> + '_ {
        self.values.iter().map(|(&k, &v)| (k, v))
    }

    pub fn vocabulary(&self) -> &BTreeSet<WordId> {
        &self.vocabulary
    }

    pub fn contains_word(&self, word: WordId) -> bool {
        self.vocabulary.contains(&word)
    }

    pub fn interner(&self) -> &Interner {
        &self.interner
    }

    pub fn surface(&self, word: WordId) -> &str {
        self.interner.surface(word)
    }

    pub fn word_id(&self, surface: &str) -> Option<WordId> {
        let id = self.interner.get(surface)?;
        self.vocabulary.contains(&id).then_some(id)
    }

    /// Copy with negative entries clamped to zero — which, under the
    /// absent-means-zero convention, removes them.
    pub fn clamp_negative(&self) -> MiMatrix {
        MiMatrix {
            interner: Arc::clone(&self.interner),
            tag: self.tag,
            values: self
                .values
                .iter()
                .filter(|(_, &v)| v > 0.0)
                .map(|(&k, &v)| (k, v))
                .collect(),
            vocabulary: self.vocabulary.clone(),
        }
    }

    /// Copy with every entry multiplied by `c`. Intended for sensitivity
    /// checks; `c` must be positive so the sparsity pattern is preserved.
    pub fn scaled(&self, c: f64) -> Result<MiMatrix> {
        if !(c > 0.0 && c.is_finite()) {
            return Err(Error::Domain {
                what: "scale factor",
                value: c,
                lo: f64::MIN_POSITIVE,
                hi: f64::INFINITY,
            });
        }
        Ok(MiMatrix {
            interner: Arc::clone(&self.interner),
            tag: self.tag,
            values: self.values.iter().map(|(&k, &v)| (k, v * c)).collect(),
            vocabulary: self.vocabulary.clone(),
        })
    }

    /// Build a matrix from explicit surface-keyed entries, for tests and
    /// synthetic experiments. Matrices meant to be blended together must be
    /// built over the same `vocab` list so their ids agree.
    pub fn from_entries(
        tag: MiTag,
        vocab: &[&str],
        entries: &[((&str, &str), f64)],
    ) -> Result<MiMatrix> {
        let mut interner = Interner::new();
        for w in vocab {
            interner.intern(w);
        }
        let lookup = |s: &str| {
            interner
                .get(s)
                .ok_or_else(|| Error::UnknownWords { words: vec![s.to_string()] })
        };
        let mut values = BTreeMap::new();
        for &((a, b), v) in entries {
            let key = pair_key(lookup(a)?, lookup(b)?);
            if v != 0.0 {
                values.insert(key, v);
            }
        }
        Ok(MiMatrix {
            vocabulary: interner.ids().collect(),
            interner: Arc::new(interner),
            tag,
            values,
        })
    }
}

/// Per-pair mutual information from the frequency and pair tables, using the
/// frequency-weighted form.
pub fn mutual_information(freq: &FrequencyTable, pairs: &PairTable) -> Result<MiMatrix> {
    mutual_information_with(freq, pairs, MiVariant::Weighted)
}

/// Per-pair mutual information with an explicit variant choice.
pub fn mutual_information_with(
    freq: &FrequencyTable,
    pairs: &PairTable,
    variant: MiVariant,
) -> Result<MiMatrix> {
    let total = pairs.total_pairs() as f64;
    let mut values = BTreeMap::new();
    for ((a, b), count) in pairs.iter() {
        for word in [a, b] {
            if !freq.contains(word) {
                return Err(Error::InconsistentTables {
                    word: pairs.surface(word).to_string(),
                });
            }
        }
        let p_xy = count as f64 / total;
        let ratio = p_xy / (freq.frequency(a) * freq.frequency(b));
        let value = match variant {
            MiVariant::Weighted => p_xy * ratio.log2(),
            MiVariant::Pmi => ratio.log2(),
        };
        if value != 0.0 {
            values.insert((a, b), value);
        }
    }
    Ok(MiMatrix {
        interner: Arc::new(freq.interner().clone()),
        tag: MiTag::Distance(pairs.distance()),
        values,
        vocabulary: freq.words().collect(),
    })
}

/// Combine distance-1 and distance-2 matrices:
/// `I_B = sqrt(I_1^2 + (W * I_2)^2)` for every pair present in either input.
pub fn blend(m1: &MiMatrix, m2: &MiMatrix, w: BlendWeight) -> Result<MiMatrix> {
    if m1.tag != MiTag::Distance(PairDistance::One) {
        return Err(Error::TagMismatch {
            expected: "1".to_string(),
            found: m1.tag.label().to_string(),
        });
    }
    if m2.tag != MiTag::Distance(PairDistance::Two) {
        return Err(Error::TagMismatch {
            expected: "2".to_string(),
            found: m2.tag.label().to_string(),
        });
    }
    debug_assert!(
        m1.interner == m2.interner,
        "blend inputs must share one vocabulary"
    );
    let weight = w.value();
    let keys: BTreeSet<(WordId, WordId)> =
        m1.values.keys().chain(m2.values.keys()).copied().collect();
    let mut values = BTreeMap::new();
    for key in keys {
        let i1 = m1.values.get(&key).copied().unwrap_or(0.0);
        let i2 = m2.values.get(&key).copied().unwrap_or(0.0);
        let wi2 = weight * i2;
        let blended = (i1 * i1 + wi2 * wi2).sqrt();
        if blended != 0.0 {
            values.insert(key, blended);
        }
    }
    Ok(MiMatrix {
        interner: Arc::clone(&m1.interner),
        tag: MiTag::Blended,
        values,
        vocabulary: m1.vocabulary.union(&m2.vocabulary).copied().collect(),
    })
}
