//! Rank-frequency listing and power-law fitting, `f_z = C / z^alpha`.
//!
//! A corpus sanity check: ranked word frequencies of natural-language text
//! follow an approximate power law. The fit is ordinary least squares on
//! (log rank, log frequency); alpha is the negated slope and C the
//! exponentiated intercept.

use crate::cooccur::FrequencyTable;
use crate::error::{Error, Result};

/// One rank-frequency row. Ties in frequency are ordered lexicographically
/// by surface.
#[derive(Debug, Clone, PartialEq)]
pub struct RankedWord {
    pub rank: usize,
    pub surface: String,
    pub count: u64,
    pub frequency: f64,
}

/// Sort the table by descending frequency and assign ranks 1..n.
pub fn rank_frequency(freq: &FrequencyTable) -> Vec<RankedWord> {
    let mut rows: Vec<(String, u64)> = freq
        .iter()
        .map(|(id, count)| (freq.surface(id).to_string(), count))
        .collect();
    // counts are exact integers, so sorting on them avoids float compares
    rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    rows.into_iter()
        .enumerate()
        .map(|(i, (surface, count))| RankedWord {
            rank: i + 1,
            surface,
            count,
            frequency: count as f64 / freq.total_words() as f64,
        })
        .collect()
}

/// Fitted power law.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZipfFit {
    pub c: f64,
    pub alpha: f64,
    pub r_squared: f64,
    pub n_ranks: usize,
}

/// Least-squares fit of `log f = log C - alpha * log z` over (rank,
/// frequency) points. Needs at least 3 points with positive frequencies.
pub fn fit_zipf(points: &[(usize, f64)]) -> Result<ZipfFit> {
    if points.len() < 3 {
        return Err(Error::InsufficientData {
            needed: 3,
            got: points.len(),
        });
    }
    for &(rank, f) in points {
        if rank < 1 {
            return Err(Error::Domain {
                what: "rank",
                value: rank as f64,
                lo: 1.0,
                hi: f64::INFINITY,
            });
        }
        if !(f > 0.0 && f.is_finite()) {
            return Err(Error::Domain {
                what: "frequency",
                value: f,
                lo: f64::MIN_POSITIVE,
                hi: f64::INFINITY,
            });
        }
    }
    let n = points.len() as f64;
    let xs: Vec<f64> = points.iter().map(|&(z, _)| (z as f64).ln()).collect();
    let ys: Vec<f64> = points.iter().map(|&(_, f)| f.ln()).collect();
    if ys.iter().all(|&y| y == ys[0]) {
        // constant frequencies: a flat line fits perfectly
        return Ok(ZipfFit {
            c: ys[0].exp(),
            alpha: 0.0,
            r_squared: 1.0,
            n_ranks: points.len(),
        });
    }
    let x_mean = xs.iter().sum::<f64>() / n;
    let y_mean = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        sxx += (x - x_mean) * (x - x_mean);
        sxy += (x - x_mean) * (y - y_mean);
    }
    if sxx == 0.0 {
        return Err(Error::Domain {
            what: "rank spread",
            value: 0.0,
            lo: f64::MIN_POSITIVE,
            hi: f64::INFINITY,
        });
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let mut ss_res = 0.0;
    let mut ss_tot = 0.0;
    for (x, y) in xs.iter().zip(&ys) {
        let predicted = intercept + slope * x;
        ss_res += (y - predicted) * (y - predicted);
        ss_tot += (y - y_mean) * (y - y_mean);
    }
    // a constant series is fit perfectly by its own mean
    let r_squared = if ss_tot == 0.0 {
        1.0
    } else {
        (1.0 - ss_res / ss_tot).max(0.0)
    };
    Ok(ZipfFit {
        c: intercept.exp(),
        alpha: -slope,
        r_squared,
        n_ranks: points.len(),
    })
}

/// Convenience: fit over the first `max_rank` rows of a ranked list (all
/// rows when `max_rank` is None).
pub fn fit_ranked(ranked: &[RankedWord], max_rank: Option<usize>) -> Result<ZipfFit> {
    let take = max_rank.unwrap_or(ranked.len()).min(ranked.len());
    let points: Vec<(usize, f64)> = ranked[..take]
        .iter()
        .map(|r| (r.rank, r.frequency))
        .collect();
    fit_zipf(&points)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cooccur::word_frequencies;
    use crate::corpus::parse_corpus;

    #[test]
    fn ranks_sort_descending() {
        // counts: a:5, b:3, c:2 over 10 words
        let corpus = parse_corpus("a:a:a:a:a:b:b:b:c:c", ':', "XXXX").unwrap();
        let ranked = rank_frequency(&word_frequencies(&corpus));
        let rows: Vec<(usize, &str, f64)> = ranked
            .iter()
            .map(|r| (r.rank, r.surface.as_str(), r.frequency))
            .collect();
        assert_eq!(rows, vec![(1, "a", 0.5), (2, "b", 0.3), (3, "c", 0.2)]);
    }

    #[test]
    fn ties_order_lexicographically() {
        let corpus = parse_corpus("d:c:b:a", ':', "XXXX").unwrap();
        let ranked = rank_frequency(&word_frequencies(&corpus));
        let surfaces: Vec<&str> = ranked.iter().map(|r| r.surface.as_str()).collect();
        assert_eq!(surfaces, vec!["a", "b", "c", "d"]);
        assert!(ranked.iter().all(|r| r.frequency == 0.25));
        assert_eq!(
            ranked.iter().map(|r| r.rank).collect::<Vec<_>>(),
            vec![1, 2, 3, 4]
        );
    }

    #[test]
    fn exact_power_law_is_recovered() {
        let points: Vec<(usize, f64)> = (1..=40).map(|z| (z, 0.1 / z as f64)).collect();
        let fit = fit_zipf(&points).unwrap();
        assert!((fit.alpha - 1.0).abs() < 1e-9, "alpha {}", fit.alpha);
        assert!((fit.c - 0.1).abs() < 1e-9, "c {}", fit.c);
        assert!(fit.r_squared >= 1.0 - 1e-12);
        assert_eq!(fit.n_ranks, 40);
    }

    #[test]
    fn constant_frequencies_fit_flat() {
        let points: Vec<(usize, f64)> = (1..=10).map(|z| (z, 0.1)).collect();
        let fit = fit_zipf(&points).unwrap();
        assert!(fit.alpha.abs() < 1e-12);
        assert!((fit.c - 0.1).abs() < 1e-12);
        assert!(fit.r_squared >= 1.0 - 1e-12);
    }

    #[test]
    fn too_few_points_is_an_error() {
        assert!(matches!(
            fit_zipf(&[(1, 0.5), (2, 0.25)]),
            Err(Error::InsufficientData { needed: 3, got: 2 })
        ));
    }

    #[test]
    fn nonpositive_frequency_is_rejected() {
        assert!(fit_zipf(&[(1, 0.5), (2, 0.0), (3, 0.1)]).is_err());
        assert!(fit_zipf(&[(1, 0.5), (2, -0.1), (3, 0.1)]).is_err());
    }

    #[test]
    fn scale_equivariance() {
        let points: Vec<(usize, f64)> = (1..=20).map(|z| (z, 0.3 / (z as f64).powf(1.2))).collect();
        let base = fit_zipf(&points).unwrap();
        let scaled: Vec<(usize, f64)> = points.iter().map(|&(z, f)| (z, 7.0 * f)).collect();
        let fit = fit_zipf(&scaled).unwrap();
        assert!((fit.alpha - base.alpha).abs() < 1e-9);
        assert!((fit.c - 7.0 * base.c).abs() < 1e-9 * fit.c.abs().max(1.0));
    }

    #[test]
    fn truncated_fit_uses_leading_ranks() {
        let corpus = parse_corpus("a:a:a:a:b:b:c:d", ':', "XXXX").unwrap();
        let ranked = rank_frequency(&word_frequencies(&corpus));
        let full = fit_ranked(&ranked, None).unwrap();
        let truncated = fit_ranked(&ranked, Some(3)).unwrap();
        assert_eq!(full.n_ranks, 4);
        assert_eq!(truncated.n_ranks, 3);
    }
}
