#![allow(dead_code)]

use std::sync::Arc;

use rand::Rng;
use trace_align::aligner::ScoringScheme;
use trace_align::model::{Alignment, EventLog};

pub const LETTERS: [&str; 14] = ["A", "B", "C", "D", "E", "F", "G", "H", "I", "J", "K", "L", "M", "N"];

pub fn aln(rows: &[(&str, Vec<&str>)]) -> Alignment {
    Alignment::from_label_rows(rows).unwrap()
}

/// `n` traces of length `1..=max_len` over the first `types` letters.
pub fn random_log(rng: &mut impl Rng, n: usize, max_len: usize, types: usize) -> Arc<EventLog> {
    let rows: Vec<(String, Vec<&str>)> = (0..n)
        .map(|i| {
            let len = rng.gen_range(1..=max_len);
            let labels = (0..len).map(|_| LETTERS[rng.gen_range(0..types)]).collect();
            (format!("t{i}"), labels)
        })
        .collect();
    Arc::new(EventLog::from_label_rows(&rows).unwrap())
}

fn sub(s: &ScoringScheme, a: u8, b: u8) -> i64 {
    if a == b {
        s.match_score
    } else {
        s.mismatch
    }
}

/// Best score over every global alignment of `a` and `b`, by plain
/// enumeration of all alignment paths.
pub fn brute_force_pairwise(a: &[u8], b: &[u8], s: &ScoringScheme) -> i64 {
    match (a.split_first(), b.split_first()) {
        (None, None) => 0,
        (Some((_, ra)), None) => s.gap + brute_force_pairwise(ra, b, s),
        (None, Some((_, rb))) => s.gap + brute_force_pairwise(a, rb, s),
        (Some((&x, ra)), Some((&y, rb))) => [
            sub(s, x, y) + brute_force_pairwise(ra, rb, s),
            s.gap + brute_force_pairwise(ra, b, s),
            s.gap + brute_force_pairwise(a, rb, s),
        ]
        .into_iter()
        .max()
        .unwrap(),
    }
}

/// Exact optimum of the sum-of-pairs score for three sequences, by a full
/// three-dimensional DP over all seven column shapes.
pub fn three_way_optimum(seqs: [&[u8]; 3], s: &ScoringScheme) -> i64 {
    let [a, b, c] = seqs;
    let pair = |x: Option<u8>, y: Option<u8>| match (x, y) {
        (Some(x), Some(y)) => sub(s, x, y),
        (None, None) => 0,
        _ => s.gap,
    };
    let (na, nb, nc) = (a.len(), b.len(), c.len());
    let idx = |i: usize, j: usize, k: usize| (i * (nb + 1) + j) * (nc + 1) + k;
    let mut dp = vec![i64::MIN; (na + 1) * (nb + 1) * (nc + 1)];
    dp[0] = 0;
    for i in 0..=na {
        for j in 0..=nb {
            for k in 0..=nc {
                if i + j + k == 0 {
                    continue;
                }
                let mut best = i64::MIN;
                for mask in 1u8..8 {
                    let (di, dj, dk) = ((mask & 1) as usize, ((mask >> 1) & 1) as usize, ((mask >> 2) & 1) as usize);
                    if di > i || dj > j || dk > k {
                        continue;
                    }
                    let prev = dp[idx(i - di, j - dj, k - dk)];
                    if prev == i64::MIN {
                        continue;
                    }
                    let x = (di == 1).then(|| a[i - 1]);
                    let y = (dj == 1).then(|| b[j - 1]);
                    let z = (dk == 1).then(|| c[k - 1]);
                    best = best.max(prev + pair(x, y) + pair(x, z) + pair(y, z));
                }
                dp[idx(i, j, k)] = best;
            }
        }
    }
    dp[idx(na, nb, nc)]
}

/// Every string of length `1..=max_len` over `letters` symbols.
pub fn all_strings(letters: u8, max_len: usize) -> Vec<Vec<u8>> {
    let mut out = Vec::new();
    let mut layer: Vec<Vec<u8>> = vec![Vec::new()];
    for _ in 0..max_len {
        layer = layer
            .iter()
            .flat_map(|s| {
                (0..letters).map(move |l| {
                    let mut t = s.clone();
                    t.push(l);
                    t
                })
            })
            .collect();
        out.extend(layer.iter().cloned());
    }
    out
}

pub fn labels(codes: &[u8]) -> Vec<&'static str> {
    codes.iter().map(|&c| LETTERS[c as usize]).collect()
}
