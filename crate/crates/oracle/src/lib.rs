//! Naive, dense reference implementations of the statistics pipeline.
//!
//! Everything here is written for obviousness, not speed: explicit window
//! enumeration, dense V×V matrices, full z-loops and exhaustive spanning
//! tree search. Test suites compare the optimized sparse implementations
//! against these. This crate deliberately shares no code with the
//! implementation it checks.

// dense index loops are the point here
#![allow(clippy::needless_range_loop)]

use std::collections::HashMap;

/// Dense corpus model: vocabulary in first-occurrence order, raw counts,
/// and full mutual-information matrices for distances one and two.
#[derive(Debug, Clone)]
pub struct DenseModel {
    pub words: Vec<String>,
    pub index: HashMap<String, usize>,
    pub counts: Vec<u64>,
    pub total_words: u64,
    pub pair_counts1: Vec<Vec<u64>>,
    pub pair_counts2: Vec<Vec<u64>>,
    pub total_windows1: u64,
    pub total_windows2: u64,
    /// Weighted per-pair MI, distance one. 0.0 means no entry.
    pub mi1: Vec<Vec<f64>>,
    /// Weighted per-pair MI, distance two.
    pub mi2: Vec<Vec<f64>>,
}

impl DenseModel {
    /// Build every table by brute force from tokenized texts.
    pub fn build(texts: &[Vec<String>]) -> DenseModel {
        let mut words: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        for text in texts {
            for w in text {
                if !index.contains_key(w) {
                    index.insert(w.clone(), words.len());
                    words.push(w.clone());
                }
            }
        }
        let v = words.len();

        let mut counts = vec![0u64; v];
        let mut total_words = 0u64;
        for text in texts {
            for w in text {
                counts[index[w]] += 1;
                total_words += 1;
            }
        }

        let pair_counts = |gap: usize| {
            let mut m = vec![vec![0u64; v]; v];
            let mut windows = 0u64;
            for text in texts {
                if text.len() <= gap {
                    continue;
                }
                for i in 0..text.len() - gap {
                    let a = index[&text[i]];
                    let b = index[&text[i + gap]];
                    let (lo, hi) = if a <= b { (a, b) } else { (b, a) };
                    m[lo][hi] += 1;
                    windows += 1;
                }
            }
            // mirror for symmetric access
            for lo in 0..v {
                for hi in lo + 1..v {
                    m[hi][lo] = m[lo][hi];
                }
            }
            (m, windows)
        };
        let (pair_counts1, total_windows1) = pair_counts(1);
        let (pair_counts2, total_windows2) = pair_counts(2);

        let mi = |pairs: &Vec<Vec<u64>>, windows: u64| -> Vec<Vec<f64>> {
            let mut m = vec![vec![0.0f64; v]; v];
            if windows == 0 {
                return m;
            }
            for x in 0..v {
                for y in x..v {
                    let c = pairs[x][y];
                    if c == 0 {
                        continue;
                    }
                    let p_xy = c as f64 / windows as f64;
                    let p_x = counts[x] as f64 / total_words as f64;
                    let p_y = counts[y] as f64 / total_words as f64;
                    let value = p_xy * (p_xy / (p_x * p_y)).log2();
                    m[x][y] = value;
                    m[y][x] = value;
                }
            }
            m
        };
        let mi1 = mi(&pair_counts1, total_windows1);
        let mi2 = mi(&pair_counts2, total_windows2);

        DenseModel {
            words,
            index,
            counts,
            total_words,
            pair_counts1,
            pair_counts2,
            total_windows1,
            total_windows2,
            mi1,
            mi2,
        }
    }

    pub fn vocab_len(&self) -> usize {
        self.words.len()
    }

    /// Dense blended matrix: sqrt(mi1² + (w·mi2)²) entrywise.
    pub fn blended(&self, w: f64) -> Vec<Vec<f64>> {
        let v = self.vocab_len();
        let mut m = vec![vec![0.0f64; v]; v];
        for x in 0..v {
            for y in 0..v {
                let i1 = self.mi1[x][y];
                let wi2 = w * self.mi2[x][y];
                m[x][y] = (i1 * i1 + wi2 * wi2).sqrt();
            }
        }
        m
    }

    /// All-pairs ranking over the blended matrix: pairs where both counts
    /// reach `min_count` and the similarity reaches `cutoff`, as
    /// (word1, word2, similarity, count1, count2) rows in canonical surface
    /// order, sorted by descending similarity then pair.
    pub fn rank(
        &self,
        w: f64,
        min_count: u64,
        cutoff: f64,
        normalized: bool,
    ) -> Vec<(String, String, f64, u64, u64)> {
        let blended = self.blended(w);
        let v = self.vocab_len();
        let mut rows = Vec::new();
        for x in 0..v {
            if self.counts[x] < min_count {
                continue;
            }
            for y in x + 1..v {
                if self.counts[y] < min_count {
                    continue;
                }
                let s = similarity_dense(&blended, x, y, normalized);
                if s >= cutoff {
                    let (w1, w2, c1, c2) = if self.words[x] <= self.words[y] {
                        (&self.words[x], &self.words[y], self.counts[x], self.counts[y])
                    } else {
                        (&self.words[y], &self.words[x], self.counts[y], self.counts[x])
                    };
                    rows.push((w1.clone(), w2.clone(), s, c1, c2));
                }
            }
        }
        rows.sort_by(|a, b| {
            b.2.total_cmp(&a.2)
                .then_with(|| a.0.cmp(&b.0).then_with(|| a.1.cmp(&b.1)))
        });
        rows
    }
}

/// Full z-loop similarity on a dense matrix: the mean of 2ab/(a²+b²) over
/// contexts z ≠ x, y where a or b is nonzero.
pub fn similarity_dense(blended: &[Vec<f64>], x: usize, y: usize, normalized: bool) -> f64 {
    let v = blended.len();
    let mut sum = 0.0;
    let mut contexts = 0u64;
    for z in 0..v {
        if z == x || z == y {
            continue;
        }
        let a = blended[x][z];
        let b = blended[y][z];
        if a == 0.0 && b == 0.0 {
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

/// Minimum spanning-tree weight by exhaustive enumeration over all
/// (n−1)-edge subsets. Returns None when the graph is disconnected. Each
/// candidate's weight is summed in ascending edge-weight order.
pub fn min_spanning_weight(n: usize, edges: &[(usize, usize, f64)]) -> Option<f64> {
    if n == 0 {
        return None;
    }
    if n == 1 {
        return Some(0.0);
    }
    let e = edges.len();
    let need = n - 1;
    if e < need || e >= 64 {
        return None;
    }
    let mut best: Option<f64> = None;
    for mask in 0u64..(1u64 << e) {
        if mask.count_ones() as usize != need {
            continue;
        }
        let mut chosen: Vec<(usize, usize, f64)> = Vec::with_capacity(need);
        for (i, &edge) in edges.iter().enumerate() {
            if mask & (1 << i) != 0 {
                chosen.push(edge);
            }
        }
        // spanning check with plain parent-pointer merging
        let mut parent: Vec<usize> = (0..n).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        let mut merged = 0;
        for &(u, v, _) in &chosen {
            let (ru, rv) = (root(&mut parent, u), root(&mut parent, v));
            if ru != rv {
                parent[ru] = rv;
                merged += 1;
            }
        }
        if merged != need {
            continue;
        }
        chosen.sort_by(|a, b| a.2.total_cmp(&b.2));
        let weight: f64 = chosen.iter().map(|&(_, _, w)| w).sum();
        best = Some(match best {
            None => weight,
            Some(b) if weight < b => weight,
            Some(b) => b,
        });
    }
    best
}

/// Least-squares line via the computational formula, returning
/// (slope, intercept, r²).
pub fn linear_fit(xs: &[f64], ys: &[f64]) -> (f64, f64, f64) {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len() as f64;
    let sum_x: f64 = xs.iter().sum();
    let sum_y: f64 = ys.iter().sum();
    let sum_xy: f64 = xs.iter().zip(ys).map(|(x, y)| x * y).sum();
    let sum_xx: f64 = xs.iter().map(|x| x * x).sum();
    let sum_yy: f64 = ys.iter().map(|y| y * y).sum();
    let slope = (n * sum_xy - sum_x * sum_y) / (n * sum_xx - sum_x * sum_x);
    let intercept = (sum_y - slope * sum_x) / n;
    let denom = (n * sum_xx - sum_x * sum_x) * (n * sum_yy - sum_y * sum_y);
    let r2 = if denom == 0.0 {
        1.0
    } else {
        let num = n * sum_xy - sum_x * sum_y;
        (num * num) / denom
    };
    (slope, intercept, r2)
}
