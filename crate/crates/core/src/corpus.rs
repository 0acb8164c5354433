//! Corpus ingestion: tokenization, word interning, and bound-morpheme
//! separation.
//!
//! A corpus file is a stream of words delimited by a single separator
//! character (newlines count as separators). A sentinel token — `XXXX` by
//! default — marks the boundary between texts, so that statistics never pair
//! the last word of one text with the first word of the next. Bound
//! morphemes are split off by a data-driven rewrite table; the bundled table
//! covers the common suffix constructions seen in Meroitic transliterations.

use std::collections::HashMap;
use std::fmt;
use std::path::Path;
use std::sync::Arc;

use crate::error::{Error, Result};

/// Interned handle for a word surface. Ids are assigned in first-occurrence
/// order and are only meaningful relative to the corpus that produced them.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WordId(pub u32);

impl fmt::Display for WordId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// Bijective surface ↔ id map. Append-only; equal surfaces always receive
/// equal ids.
#[derive(Debug, Default, Clone, PartialEq)]
pub struct Interner {
    surfaces: Vec<String>,
    index: HashMap<String, u32>,
}

impl Interner {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn intern(&mut self, surface: &str) -> WordId {
        if let Some(&id) = self.index.get(surface) {
            return WordId(id);
        }
        let id = self.surfaces.len() as u32;
        self.surfaces.push(surface.to_string());
        self.index.insert(surface.to_string(), id);
        WordId(id)
    }

    pub fn get(&self, surface: &str) -> Option<WordId> {
        self.index.get(surface).copied().map(WordId)
    }

    pub fn surface(&self, id: WordId) -> &str {
        &self.surfaces[id.0 as usize]
    }

    pub fn len(&self) -> usize {
        self.surfaces.len()
    }

    pub fn is_empty(&self) -> bool {
        self.surfaces.is_empty()
    }

    /// All interned ids, ascending.
    pub fn ids(&self) -> impl Iterator<Item = WordId> + '_ {
        (0..self.surfaces.len() as u32).map(WordId)
    }
}

/// A tokenized corpus: an ordered list of texts, each an ordered list of
/// interned words. Boundaries are structural — the sentinel never appears as
/// a token — and every text is nonempty.
#[derive(Debug, Clone, PartialEq)]
pub struct Corpus {
    interner: Arc<Interner>,
    texts: Vec<Vec<WordId>>,
}

impl Corpus {
    /// Build a corpus from pre-tokenized surface texts. Empty texts and an
    /// empty corpus are rejected.
    pub fn from_texts<T, W>(texts: T) -> Result<Self>
    where
        T: IntoIterator<Item = W>,
        W: IntoIterator<Item = String>,
    {
        let mut interner = Interner::new();
        let mut out: Vec<Vec<WordId>> = Vec::new();
        for text in texts {
            let mut ids = Vec::new();
            for word in text {
                if word.is_empty() {
                    return Err(Error::MalformedInput {
                        token: word,
                        sentinel: String::new(),
                    });
                }
                ids.push(interner.intern(&word));
            }
            if ids.is_empty() {
                return Err(Error::EmptyCorpus);
            }
            out.push(ids);
        }
        if out.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(Corpus {
            interner: Arc::new(interner),
            texts: out,
        })
    }

    pub fn interner(&self) -> &Interner {
        &self.interner
    }

    pub(crate) fn shared_interner(&self) -> Arc<Interner> {
        Arc::clone(&self.interner)
    }

    pub fn texts(&self) -> &[Vec<WordId>] {
        &self.texts
    }

    pub fn text_count(&self) -> usize {
        self.texts.len()
    }

    pub fn total_words(&self) -> u64 {
        self.texts.iter().map(|t| t.len() as u64).sum()
    }

    pub fn vocabulary_size(&self) -> usize {
        self.interner.len()
    }

    pub fn surface(&self, id: WordId) -> &str {
        self.interner.surface(id)
    }

    pub fn word_id(&self, surface: &str) -> Option<WordId> {
        self.interner.get(surface)
    }

    /// Texts as plain surface strings, for dumps and reference checks.
    pub fn to_surface_texts(&self) -> Vec<Vec<String>> {
        self.texts
            .iter()
            .map(|t| t.iter().map(|&id| self.surface(id).to_string()).collect())
            .collect()
    }
}

/// Tokenize a raw character stream into a corpus.
///
/// Words are split on `separator` and on line breaks; empty tokens (doubled
/// separators, leading/trailing separators) are dropped. A token equal to
/// `sentinel` closes the current text. A token merely *containing* the
/// sentinel is malformed input.
pub fn parse_corpus(raw: &str, separator: char, sentinel: &str) -> Result<Corpus> {
    if sentinel.is_empty() {
        return Err(Error::EmptySentinel);
    }
    if sentinel.contains(separator) {
        return Err(Error::SeparatorInSentinel {
            separator,
            sentinel: sentinel.to_string(),
        });
    }

    let mut interner = Interner::new();
    let mut texts: Vec<Vec<WordId>> = Vec::new();
    let mut current: Vec<WordId> = Vec::new();

    for token in raw.split([separator, '\n', '\r']) {
        if token.is_empty() {
            continue;
        }
        if token == sentinel {
            if !current.is_empty() {
                texts.push(std::mem::take(&mut current));
            }
            continue;
        }
        if token.contains(sentinel) {
            return Err(Error::MalformedInput {
                token: token.to_string(),
                sentinel: sentinel.to_string(),
            });
        }
        current.push(interner.intern(token));
    }
    if !current.is_empty() {
        texts.push(current);
    }
    if texts.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    Ok(Corpus {
        interner: Arc::new(interner),
        texts,
    })
}

/// Whether a rewrite matches a whole word or strips a suffix.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RuleKind {
    WholeWord,
    Suffix,
}

/// A single rewrite: the matched span is replaced by the concatenation-equal
/// sequence of pieces. Rules rewrite; they never add or drop characters.
#[derive(Debug, Clone, PartialEq)]
pub struct MorphemeRule {
    pattern: String,
    kind: RuleKind,
    replacement: Vec<String>,
}

impl MorphemeRule {
    pub fn new(pattern: &str, kind: RuleKind, replacement: Vec<String>) -> Result<Self> {
        if pattern.is_empty() {
            return Err(Error::InvalidRule {
                rule: pattern.to_string(),
                reason: "empty match pattern".to_string(),
            });
        }
        if replacement.is_empty() || replacement.iter().any(String::is_empty) {
            return Err(Error::InvalidRule {
                rule: pattern.to_string(),
                reason: "replacement must be a nonempty list of nonempty pieces".to_string(),
            });
        }
        if replacement.concat() != pattern {
            return Err(Error::InvalidRule {
                rule: pattern.to_string(),
                reason: format!(
                    "replacement pieces concatenate to {:?}, not the match",
                    replacement.concat()
                ),
            });
        }
        Ok(MorphemeRule {
            pattern: pattern.to_string(),
            kind,
            replacement,
        })
    }

    pub fn pattern(&self) -> &str {
        &self.pattern
    }

    pub fn kind(&self) -> RuleKind {
        self.kind
    }

    pub fn replacement(&self) -> &[String] {
        &self.replacement
    }
}

/// Ordered rewrite table: explicit whole-word rules plus a generic set of
/// splittable suffix morphemes. Explicit rules win; the suffix set drives
/// iterative longest-match stripping for words no explicit rule covers.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RuleTable {
    whole: Vec<MorphemeRule>,
    whole_index: HashMap<String, usize>,
    // longest-match-first
    suffix: Vec<MorphemeRule>,
}

const BUNDLED_RULES: &str = include_str!("../data/meroitic.rules");

impl RuleTable {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The rule table bundled with the crate: the standard Meroitic
    /// bound-morpheme separations, with generic suffix stripping disabled.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_RULES).expect("bundled rule table is valid")
    }

    pub fn from_rules(rules: Vec<MorphemeRule>) -> Result<Self> {
        let mut table = RuleTable::default();
        for rule in rules {
            table.push(rule)?;
        }
        table.sort_suffixes();
        Ok(table)
    }

    fn push(&mut self, rule: MorphemeRule) -> Result<()> {
        match rule.kind {
            RuleKind::WholeWord => {
                if self.whole_index.contains_key(&rule.pattern) {
                    return Err(Error::InvalidRule {
                        rule: rule.pattern.clone(),
                        reason: "duplicate whole-word rule".to_string(),
                    });
                }
                self.whole_index
                    .insert(rule.pattern.clone(), self.whole.len());
                self.whole.push(rule);
            }
            RuleKind::Suffix => {
                if self.suffix.iter().any(|r| r.pattern == rule.pattern) {
                    return Ok(()); // duplicate morpheme listings are harmless
                }
                self.suffix.push(rule);
            }
        }
        Ok(())
    }

    fn sort_suffixes(&mut self) {
        self.suffix
            .sort_by(|a, b| b.pattern.len().cmp(&a.pattern.len()).then(a.pattern.cmp(&b.pattern)));
    }

    /// Parse the rule file format: one `match -> piece+piece` line per rule,
    /// `#` comments, and an optional `[suffixes]` section listing the generic
    /// splittable morphemes one per line.
    pub fn parse(text: &str) -> Result<Self> {
        let mut table = RuleTable::default();
        let mut in_suffixes = false;
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = match raw_line.find('#') {
                Some(pos) => raw_line[..pos].trim(),
                None => raw_line.trim(),
            };
            if line.is_empty() {
                continue;
            }
            if line == "[suffixes]" {
                in_suffixes = true;
                continue;
            }
            if in_suffixes {
                if line.contains("->") || line.contains(char::is_whitespace) {
                    return Err(Error::RuleParse {
                        line: line_no,
                        message: format!("expected a bare morpheme, got {line:?}"),
                    });
                }
                let rule = MorphemeRule::new(line, RuleKind::Suffix, vec![line.to_string()])?;
                table.push(rule)?;
                continue;
            }
            let (lhs, rhs) = line.split_once("->").ok_or_else(|| Error::RuleParse {
                line: line_no,
                message: format!("expected `match -> piece+piece`, got {line:?}"),
            })?;
            let pattern = lhs.trim();
            let pieces: Vec<String> = rhs.split('+').map(|p| p.trim().to_string()).collect();
            let rule = MorphemeRule::new(pattern, RuleKind::WholeWord, pieces)?;
            table.push(rule)?;
        }
        table.sort_suffixes();
        Ok(table)
    }

    pub fn is_empty(&self) -> bool {
        self.whole.is_empty() && self.suffix.is_empty()
    }

    pub fn whole_word_rules(&self) -> &[MorphemeRule] {
        &self.whole
    }

    pub fn splittable_morphemes(&self) -> impl Iterator<Item = &str> {
        self.suffix.iter().map(|r| r.pattern.as_str())
    }

    /// Rewrite one word into its morpheme pieces. The first matching
    /// whole-word rule wins; otherwise suffixes are stripped iteratively,
    /// longest match first, while a nonempty stem remains. Unmatched words
    /// pass through unchanged.
    pub fn rewrite<'a>(&'a self, word: &'a str) -> Vec<&'a str> {
        if let Some(&i) = self.whole_index.get(word) {
            return self.whole[i].replacement.iter().map(String::as_str).collect();
        }
        let mut stem = word;
        let mut stripped: Vec<&str> = Vec::new();
        'strip: loop {
            for rule in &self.suffix {
                let m = rule.pattern.as_str();
                if stem.len() > m.len() && stem.ends_with(m) {
                    for piece in rule.replacement.iter().rev() {
                        stripped.push(piece);
                    }
                    stem = &stem[..stem.len() - m.len()];
                    continue 'strip;
                }
            }
            break;
        }
        let mut out = Vec::with_capacity(1 + stripped.len());
        out.push(stem);
        out.extend(stripped.into_iter().rev());
        out
    }
}

/// Load and validate a rule table from a file.
pub fn load_rule_table<P: AsRef<Path>>(path: P) -> Result<RuleTable> {
    let text = std::fs::read_to_string(path)?;
    RuleTable::parse(&text)
}

/// Rewrite every word of the corpus through the rule table. Text boundaries
/// are unchanged; the output corpus has its own interner, assigned in
/// rewritten first-occurrence order.
pub fn apply_rules(corpus: &Corpus, rules: &RuleTable) -> Corpus {
    let mut interner = Interner::new();
    let texts = corpus
        .texts
        .iter()
        .map(|text| {
            let mut out = Vec::with_capacity(text.len());
            for &id in text {
                for piece in rules.rewrite(corpus.surface(id)) {
                    out.push(interner.intern(piece));
                }
            }
            out
        })
        .collect();
    Corpus {
        interner: Arc::new(interner),
        texts,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn surfaces(corpus: &Corpus) -> Vec<Vec<String>> {
        corpus.to_surface_texts()
    }

    #[test]
    fn splits_texts_on_sentinel() {
        let corpus = parse_corpus("a:b:XXXX:c:d", ':', "XXXX").unwrap();
        assert_eq!(surfaces(&corpus), vec![vec!["a", "b"], vec!["c", "d"]]);
    }

    #[test]
    fn single_token_stream() {
        let corpus = parse_corpus("a", ':', "XXXX").unwrap();
        assert_eq!(surfaces(&corpus), vec![vec!["a"]]);
    }

    #[test]
    fn doubled_separator_drops_empty_token() {
        let corpus = parse_corpus("a::b", ':', "XXXX").unwrap();
        assert_eq!(surfaces(&corpus), vec![vec!["a", "b"]]);
    }

    #[test]
    fn newline_acts_as_separator() {
        let corpus = parse_corpus("a:b\nc:d", ':', "XXXX").unwrap();
        assert_eq!(surfaces(&corpus), vec![vec!["a", "b", "c", "d"]]);
    }

    #[test]
    fn sentinel_on_own_line_splits_texts() {
        let corpus = parse_corpus("a:b\nXXXX\nc", ':', "XXXX").unwrap();
        assert_eq!(surfaces(&corpus), vec![vec!["a", "b"], vec!["c"]]);
    }

    #[test]
    fn empty_stream_is_an_error() {
        assert!(matches!(parse_corpus("", ':', "XXXX"), Err(Error::EmptyCorpus)));
        assert!(matches!(
            parse_corpus(":::XXXX::", ':', "XXXX"),
            Err(Error::EmptyCorpus)
        ));
    }

    #[test]
    fn embedded_sentinel_is_malformed() {
        let err = parse_corpus("a:bXXXXc", ':', "XXXX").unwrap_err();
        assert!(matches!(err, Error::MalformedInput { .. }));
    }

    #[test]
    fn separator_inside_sentinel_is_rejected() {
        assert!(matches!(
            parse_corpus("a", 'X', "XXXX"),
            Err(Error::SeparatorInSentinel { .. })
        ));
    }

    #[test]
    fn leading_and_trailing_sentinels_are_structural() {
        let corpus = parse_corpus("XXXX:a:XXXX:XXXX:b:XXXX", ':', "XXXX").unwrap();
        assert_eq!(surfaces(&corpus), vec![vec!["a"], vec!["b"]]);
    }

    #[test]
    fn interning_is_bijective() {
        let corpus = parse_corpus("a:b:a:c:b", ':', "XXXX").unwrap();
        let a1 = corpus.word_id("a").unwrap();
        let text = &corpus.texts()[0];
        assert_eq!(text[0], a1);
        assert_eq!(text[2], a1);
        assert_ne!(text[0], text[1]);
        assert_eq!(corpus.vocabulary_size(), 3);
    }

    #[test]
    fn bundled_table_has_eleven_rules() {
        let table = RuleTable::bundled();
        assert_eq!(table.whole_word_rules().len(), 11);
        // Generic suffix stripping stays off unless a file enables it.
        assert_eq!(table.splittable_morphemes().count(), 0);
        let expect = |word: &str, pieces: &[&str]| {
            assert_eq!(table.rewrite(word), pieces, "rewrite of {word:?}");
        };
        expect("qo", &["qo"]);
        expect("lw", &["lw"]);
        expect("lo", &["lo"]);
        expect("li", &["li"]);
        expect("atomhe", &["ato", "mhe"]);
        expect("atmhe", &["at", "mhe"]);
        expect("telowi", &["te", "lo", "wi"]);
        expect("teli", &["te", "li"]);
        expect("qowi", &["qo", "wi"]);
        expect("lowi", &["lo", "wi"]);
        expect("lebkwi", &["lebk", "wi"]);
    }

    #[test]
    fn unmatched_words_pass_through() {
        let table = RuleTable::bundled();
        assert_eq!(table.rewrite("abc"), vec!["abc"]);
    }

    #[test]
    fn apply_rules_preserves_text_boundaries() {
        let corpus = parse_corpus("telowi:abc:XXXX:atomhe", ':', "XXXX").unwrap();
        let rewritten = apply_rules(&corpus, &RuleTable::bundled());
        assert_eq!(
            surfaces(&rewritten),
            vec![vec!["te", "lo", "wi", "abc"], vec!["ato", "mhe"]]
        );
        assert_eq!(rewritten.text_count(), corpus.text_count());
    }

    #[test]
    fn empty_table_is_identity() {
        let table = RuleTable::parse("").unwrap();
        assert!(table.is_empty());
        let corpus = parse_corpus("telowi:abc", ':', "XXXX").unwrap();
        let rewritten = apply_rules(&corpus, &table);
        assert_eq!(surfaces(&rewritten), surfaces(&corpus));
    }

    #[test]
    fn concatenation_violation_is_rejected() {
        let err = RuleTable::parse("xy -> x+z").unwrap_err();
        assert!(matches!(err, Error::InvalidRule { .. }));
    }

    #[test]
    fn duplicate_whole_word_rule_is_rejected() {
        let err = RuleTable::parse("ab -> a+b\nab -> ab").unwrap_err();
        assert!(matches!(err, Error::InvalidRule { .. }));
    }

    #[test]
    fn missing_arrow_is_a_parse_error() {
        let err = RuleTable::parse("just a line").unwrap_err();
        assert!(matches!(err, Error::RuleParse { line: 1, .. }));
    }

    #[test]
    fn suffix_stripping_is_iterative_and_longest_first() {
        let table = RuleTable::parse("[suffixes]\nlo\nwi\nli").unwrap();
        assert_eq!(table.rewrite("kharlowi"), vec!["khar", "lo", "wi"]);
        // the stem is never stripped to nothing
        assert_eq!(table.rewrite("lo"), vec!["lo"]);
        assert_eq!(table.rewrite("lowi"), vec!["lo", "wi"]);
        // longest match beats a shorter one that is its suffix
        let table = RuleTable::parse("[suffixes]\ni\nli").unwrap();
        assert_eq!(table.rewrite("teli"), vec!["te", "li"]);
    }

    #[test]
    fn explicit_rules_beat_suffix_stripping() {
        let table = RuleTable::parse("telowi -> telowi\n[suffixes]\nlo\nwi").unwrap();
        assert_eq!(table.rewrite("telowi"), vec!["telowi"]);
        assert_eq!(table.rewrite("xlowi"), vec!["x", "lo", "wi"]);
    }

    #[test]
    fn rewrite_concatenation_round_trips() {
        let table = RuleTable::bundled();
        for word in ["telowi", "atomhe", "qo", "abcdef", "lebkwi", "x"] {
            assert_eq!(table.rewrite(word).concat(), word);
        }
    }

    #[test]
    fn apply_rules_is_idempotent_on_bundled_table() {
        let corpus =
            parse_corpus("telowi:qowi:abc:XXXX:atmhe:lo:teli:lebkwi", ':', "XXXX").unwrap();
        let table = RuleTable::bundled();
        let once = apply_rules(&corpus, &table);
        let twice = apply_rules(&once, &table);
        assert_eq!(surfaces(&once), surfaces(&twice));
    }

    #[test]
    fn from_texts_rejects_empty_inputs() {
        let empty: Vec<Vec<String>> = vec![];
        assert!(Corpus::from_texts(empty).is_err());
        assert!(Corpus::from_texts(vec![Vec::<String>::new()]).is_err());
    }
}
