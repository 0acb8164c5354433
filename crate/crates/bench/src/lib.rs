//! Synthetic corpus generation for the benchmarks: Zipf-distributed word
//! choices over an invented vocabulary, texts of natural-ish lengths.

use distsim_core::Corpus;
use rand::prelude::*;
use rand_chacha::ChaCha8Rng;

/// Raw corpus text with `vocab` distinct words and roughly `words` tokens,
/// separated by `:` with `XXXX` text boundaries.
pub fn synthetic_corpus_text(vocab: usize, words: usize, seed: u64) -> String {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let surfaces: Vec<String> = (0..vocab).map(|i| format!("w{i:04}")).collect();
    // cumulative 1/rank weights for a Zipf-ish draw
    let mut cumulative = Vec::with_capacity(vocab);
    let mut total = 0.0;
    for rank in 1..=vocab {
        total += 1.0 / rank as f64;
        cumulative.push(total);
    }
    let draw = |rng: &mut ChaCha8Rng| -> &str {
        let u = rng.random_range(0.0..total);
        let i = cumulative.partition_point(|&c| c < u);
        &surfaces[i.min(vocab - 1)]
    };

    let mut out = String::new();
    let mut emitted = 0;
    while emitted < words {
        if emitted > 0 {
            out.push_str("\nXXXX\n");
        }
        let len = rng.random_range(5..=12).min(words - emitted).max(1);
        let text: Vec<&str> = (0..len).map(|_| draw(&mut rng)).collect();
        out.push_str(&text.join(":"));
        emitted += len;
    }
    out.push('\n');
    out
}

/// Parsed synthetic corpus.
pub fn synthetic_corpus(vocab: usize, words: usize, seed: u64) -> Corpus {
    distsim_core::parse_corpus(&synthetic_corpus_text(vocab, words, seed), ':', "XXXX")
        .expect("synthetic corpus parses")
}
