//! Known-word glosses and calibration anchor pairs.
//!
//! The lexicon is a TSV of `surface<TAB>gloss<TAB>confidence` rows. The
//! confidence level controls the punctuation appended when a gloss is
//! displayed: `known` prints bare, `tentative` appends `?`, `unknown`
//! appends `??`. Words absent from the lexicon display as `?`.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::similarity::SimilarityRecord;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Confidence {
    Known,
    Tentative,
    Unknown,
}

impl Confidence {
    pub fn label(self) -> &'static str {
        match self {
            Confidence::Known => "known",
            Confidence::Tentative => "tentative",
            Confidence::Unknown => "unknown",
        }
    }

    fn parse(s: &str) -> Option<Self> {
        match s {
            "known" => Some(Confidence::Known),
            "tentative" => Some(Confidence::Tentative),
            "unknown" => Some(Confidence::Unknown),
            _ => None,
        }
    }

    fn marker(self) -> &'static str {
        match self {
            Confidence::Known => "",
            Confidence::Tentative => "?",
            Confidence::Unknown => "??",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LexiconEntry {
    pub gloss: String,
    pub confidence: Confidence,
}

impl LexiconEntry {
    /// Gloss with the confidence marker appended, e.g. `divinity??`.
    pub fn display(&self) -> String {
        format!("{}{}", self.gloss, self.confidence.marker())
    }
}

/// Surface → gloss map.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Lexicon {
    entries: BTreeMap<String, LexiconEntry>,
}

const BUNDLED_LEXICON: &str = include_str!("../data/meroitic_lexicon.tsv");

impl Lexicon {
    pub fn empty() -> Self {
        Self::default()
    }

    /// The gloss list bundled with the crate: the handful of Meroitic words
    /// with accepted or conjectured meanings.
    pub fn bundled() -> Self {
        Self::parse(BUNDLED_LEXICON).expect("bundled lexicon is valid")
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut entries = BTreeMap::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            if raw_line.trim().is_empty() || raw_line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw_line.split('\t').collect();
            if fields.len() != 3 {
                return Err(Error::LexiconParse {
                    line: line_no,
                    message: format!("expected 3 tab-separated fields, got {}", fields.len()),
                });
            }
            let surface = fields[0].trim();
            if surface.is_empty() {
                return Err(Error::LexiconParse {
                    line: line_no,
                    message: "empty surface".to_string(),
                });
            }
            if surface.contains(char::is_whitespace) {
                return Err(Error::LexiconParse {
                    line: line_no,
                    message: format!("surface {surface:?} contains whitespace"),
                });
            }
            let confidence = Confidence::parse(fields[2].trim()).ok_or_else(|| {
                Error::LexiconParse {
                    line: line_no,
                    message: format!(
                        "confidence must be known, tentative or unknown, got {:?}",
                        fields[2].trim()
                    ),
                }
            })?;
            entries.insert(
                surface.to_string(),
                LexiconEntry {
                    gloss: fields[1].trim().to_string(),
                    confidence,
                },
            );
        }
        Ok(Lexicon { entries })
    }

    pub fn get(&self, surface: &str) -> Option<&LexiconEntry> {
        self.entries.get(surface)
    }

    /// Displayed gloss for a surface; `?` when the word is not listed.
    pub fn gloss_display(&self, surface: &str) -> String {
        match self.entries.get(surface) {
            Some(entry) => entry.display(),
            None => "?".to_string(),
        }
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &LexiconEntry)> {
        self.entries.iter().map(|(s, e)| (s.as_str(), e))
    }

    /// Canonical serialization: sorted rows, no comments. `parse` of the
    /// result reproduces the lexicon, and serializing a lexicon loaded from
    /// a canonical file reproduces the file bytes.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (surface, entry) in &self.entries {
            writeln!(
                out,
                "{surface}\t{}\t{}",
                entry.gloss,
                entry.confidence.label()
            )
            .unwrap();
        }
        out
    }
}

/// Load a lexicon TSV (`#` comments allowed) from a file.
pub fn load_lexicon<P: AsRef<Path>>(path: P) -> Result<Lexicon> {
    let text = std::fs::read_to_string(path)?;
    Lexicon::parse(&text)
}

/// Word pairs expected to be similar, used for calibrating the blend weight.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct AnchorSet {
    pairs: Vec<(String, String)>,
}

impl AnchorSet {
    pub fn new(pairs: Vec<(String, String)>) -> Result<Self> {
        for (a, b) in &pairs {
            if a.is_empty() || b.is_empty() {
                return Err(Error::AnchorParse {
                    line: 0,
                    message: "anchor surfaces must be nonempty".to_string(),
                });
            }
            if a == b {
                return Err(Error::AnchorParse {
                    line: 0,
                    message: format!("self-pair {a:?} is not a valid anchor"),
                });
            }
        }
        Ok(AnchorSet { pairs })
    }

    /// Parse `word1<TAB>word2` lines, `#` comments allowed.
    pub fn parse(text: &str) -> Result<Self> {
        let mut pairs = Vec::new();
        for (i, raw_line) in text.lines().enumerate() {
            let line_no = i + 1;
            if raw_line.trim().is_empty() || raw_line.trim_start().starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = raw_line.split('\t').map(str::trim).collect();
            if fields.len() != 2 || fields.iter().any(|f| f.is_empty()) {
                return Err(Error::AnchorParse {
                    line: line_no,
                    message: "expected `word1<TAB>word2`".to_string(),
                });
            }
            if fields[0] == fields[1] {
                return Err(Error::AnchorParse {
                    line: line_no,
                    message: format!("self-pair {:?} is not a valid anchor", fields[0]),
                });
            }
            pairs.push((fields[0].to_string(), fields[1].to_string()));
        }
        Ok(AnchorSet { pairs })
    }

    pub fn pairs(&self) -> &[(String, String)] {
        &self.pairs
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Load an anchor list from a file.
pub fn load_anchors<P: AsRef<Path>>(path: P) -> Result<AnchorSet> {
    let text = std::fs::read_to_string(path)?;
    AnchorSet::parse(&text)
}

/// Fill the gloss fields of every record from the lexicon; words without an
/// entry display as `?`. Scores, counts and ordering are untouched, and
/// re-annotating is idempotent.
pub fn annotate(records: &mut [SimilarityRecord], lexicon: &Lexicon) {
    for record in records {
        record.gloss1 = Some(lexicon.gloss_display(&record.word1));
        record.gloss2 = Some(lexicon.gloss_display(&record.word2));
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_and_displays_confidence_markers() {
        let lex = Lexicon::parse("kdi\twoman\tknown\nseb\tdivinity\tunknown\nqorte\tin the king\ttentative\n").unwrap();
        assert_eq!(lex.gloss_display("kdi"), "woman");
        assert_eq!(lex.gloss_display("seb"), "divinity??");
        assert_eq!(lex.gloss_display("qorte"), "in the king?");
        assert_eq!(lex.gloss_display("kek"), "?");
    }

    #[test]
    fn empty_file_gives_empty_lexicon() {
        let lex = Lexicon::parse("").unwrap();
        assert!(lex.is_empty());
        assert_eq!(lex.gloss_display("anything"), "?");
    }

    #[test]
    fn empty_surface_is_a_parse_error_with_line_number() {
        let err = Lexicon::parse("kdi\twoman\tknown\n\tman\tknown\n").unwrap_err();
        match err {
            Error::LexiconParse { line, .. } => assert_eq!(line, 2),
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn bad_confidence_is_rejected() {
        assert!(Lexicon::parse("kdi\twoman\tcertain\n").is_err());
    }

    #[test]
    fn comments_are_skipped() {
        let lex = Lexicon::parse("# header\nkdi\twoman\tknown\n\n# more\n").unwrap();
        assert_eq!(lex.len(), 1);
    }

    #[test]
    fn canonical_round_trip_is_byte_identical() {
        let canonical = "abr\tman\tknown\nkdi\twoman\tknown\nseb\tdivinity\tunknown\n";
        let lex = Lexicon::parse(canonical).unwrap();
        assert_eq!(lex.to_tsv(), canonical);
    }

    #[test]
    fn bundled_lexicon_covers_the_known_words() {
        let lex = Lexicon::bundled();
        assert_eq!(lex.gloss_display("kdi"), "woman");
        assert_eq!(lex.gloss_display("abr"), "man");
        assert_eq!(lex.gloss_display("mk"), "god");
        assert_eq!(lex.gloss_display("amnp"), "Amun of Napata");
        assert_eq!(lex.gloss_display("qes"), "Kush");
        assert_eq!(lex.gloss_display("qor"), "king");
        assert_eq!(lex.gloss_display("pqr"), "prince");
        assert_eq!(lex.gloss_display("abrsel"), "every man");
        assert_eq!(lex.gloss_display("seb"), "divinity??");
        assert_eq!(lex.gloss_display("qorte"), "in the king?");
    }

    #[test]
    fn annotate_fills_gloss_fields_only() {
        let lex = Lexicon::parse("mk\tgod\tknown\n").unwrap();
        let mut records = vec![SimilarityRecord::new("mk", "kek", 1.0, 7, 5)];
        let before = records.clone();
        annotate(&mut records, &lex);
        assert_eq!(records[0].gloss1.as_deref(), Some("?"));
        assert_eq!(records[0].gloss2.as_deref(), Some("god"));
        assert_eq!(records[0].word1, "kek"); // canonical order puts kek first
        assert_eq!(records[0].similarity, before[0].similarity);
        assert_eq!(records[0].count1, before[0].count1);
        // idempotent
        let once = records.clone();
        annotate(&mut records, &lex);
        assert_eq!(records, once);
    }

    #[test]
    fn anchors_parse_and_reject_self_pairs() {
        let anchors = AnchorSet::parse("# pairs\nkdi\tabr\nmk\tamnp\n").unwrap();
        assert_eq!(anchors.len(), 2);
        assert_eq!(anchors.pairs()[0], ("kdi".to_string(), "abr".to_string()));
        assert!(AnchorSet::parse("kdi\tkdi\n").is_err());
        assert!(AnchorSet::parse("kdi abr\n").is_err());
    }
}
