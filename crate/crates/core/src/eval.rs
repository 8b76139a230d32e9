//! Span-level P/R/F0.5 and GLEU.

use std::collections::{BTreeSet, HashMap};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::seq2edit::{alignment_ops, AlignOp};
use crate::types::{Sentence, Token};

/// Replace source tokens `start..end` with `replacement` (space-joined,
/// possibly empty). `start == end` is an insertion.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct SpanEdit {
    pub start: usize,
    pub end: usize,
    pub replacement: String,
}

/// Maximal runs of non-matching alignment operations between `source` and
/// `corrected`, in source coordinates.
pub fn extract_spans(source: &Sentence, corrected: &Sentence) -> BTreeSet<SpanEdit> {
    let mut out = BTreeSet::new();
    let mut open: Option<(usize, Vec<&str>)> = None;
    let mut next_src = 0;
    for op in alignment_ops(source, corrected) {
        match op {
            AlignOp::Match { src, .. } => {
                if let Some((start, words)) = open.take() {
                    out.insert(SpanEdit {
                        start,
                        end: src,
                        replacement: words.join(" "),
                    });
                }
                next_src = src + 1;
            }
            AlignOp::Substitute { src, tgt } => {
                open.get_or_insert_with(|| (src, Vec::new())).1.push(&corrected[tgt]);
                next_src = src + 1;
            }
            AlignOp::Delete { src } => {
                open.get_or_insert_with(|| (src, Vec::new()));
                next_src = src + 1;
            }
            AlignOp::Insert { tgt } => {
                open.get_or_insert_with(|| (next_src, Vec::new())).1.push(&corrected[tgt]);
            }
        }
    }
    if let Some((start, words)) = open {
        out.insert(SpanEdit {
            start,
            end: source.len(),
            replacement: words.join(" "),
        });
    }
    out
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Prf {
    #[serde(rename = "P")]
    pub precision: f64,
    #[serde(rename = "R")]
    pub recall: f64,
    #[serde(rename = "F0.5")]
    pub f_half: f64,
}

pub fn f_beta(precision: f64, recall: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * precision + recall;
    if denom == 0.0 {
        0.0
    } else {
        (1.0 + b2) * precision * recall / denom
    }
}

/// `1.25·P·R / (0.25·P + R)`, or 0 when the denominator vanishes.
pub fn f_half_from(precision: f64, recall: f64) -> f64 {
    f_beta(precision, recall, 0.5)
}

/// Pooled edit counts. Ratios are taken only after summing over a corpus.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SpanCounts {
    pub hypothesis: usize,
    pub reference: usize,
    pub matched: usize,
}

impl SpanCounts {
    pub fn of(hyp: &BTreeSet<SpanEdit>, reference: &BTreeSet<SpanEdit>) -> Self {
        SpanCounts {
            hypothesis: hyp.len(),
            reference: reference.len(),
            matched: hyp.intersection(reference).count(),
        }
    }

    /// With no proposed edits, precision is 1 if the reference has none
    /// either and 0 otherwise; recall mirrors this.
    pub fn prf(&self) -> Prf {
        let ratio = |num: usize, den: usize, other: usize| {
            if den > 0 {
                num as f64 / den as f64
            } else if other == 0 {
                1.0
            } else {
                0.0
            }
        };
        let precision = ratio(self.matched, self.hypothesis, self.reference);
        let recall = ratio(self.matched, self.reference, self.hypothesis);
        Prf {
            precision,
            recall,
            f_half: f_half_from(precision, recall),
        }
    }
}

impl std::ops::Add for SpanCounts {
    type Output = SpanCounts;

    fn add(self, other: SpanCounts) -> SpanCounts {
        SpanCounts {
            hypothesis: self.hypothesis + other.hypothesis,
            reference: self.reference + other.reference,
            matched: self.matched + other.matched,
        }
    }
}

pub fn f_half(hyp: &BTreeSet<SpanEdit>, reference: &BTreeSet<SpanEdit>) -> Prf {
    SpanCounts::of(hyp, reference).prf()
}

fn check_streams(sources: &[Sentence], hypotheses: &[Sentence], references: &[Vec<Sentence>]) -> Result<()> {
    if hypotheses.is_empty() {
        return Err(Error::InvalidInput("empty hypothesis stream".into()));
    }
    for len in [hypotheses.len(), references.len()] {
        if len != sources.len() {
            return Err(Error::LengthMismatch {
                expected: sources.len(),
                found: len,
            });
        }
    }
    if let Some(i) = references.iter().position(Vec::is_empty) {
        return Err(Error::InvalidInput(format!("sentence {} has no reference", i + 1)));
    }
    Ok(())
}

/// Corpus-level span scores. With several references per sentence, each
/// sentence uses the reference that maximizes the running corpus F0.5
/// (first one on ties).
pub fn corpus_f_half(sources: &[Sentence], hypotheses: &[Sentence], references: &[Vec<Sentence>]) -> Result<Prf> {
    check_streams(sources, hypotheses, references)?;
    let per_sentence: Vec<Vec<SpanCounts>> = (0..sources.len())
        .into_par_iter()
        .map(|i| {
            let hyp = extract_spans(&sources[i], &hypotheses[i]);
            references[i]
                .iter()
                .map(|r| SpanCounts::of(&hyp, &extract_spans(&sources[i], r)))
                .collect()
        })
        .collect();
    let mut total = SpanCounts::default();
    for options in per_sentence {
        let mut best = total + options[0];
        for c in &options[1..] {
            let cand = total + *c;
            if cand.prf().f_half > best.prf().f_half {
                best = cand;
            }
        }
        total = best;
    }
    Ok(total.prf())
}

pub const GLEU_MAX_N: usize = 4;
/// Reference samples drawn when some sentence has several references.
pub const GLEU_ITERATIONS: usize = 500;

fn ngram_counts(tokens: &[Token], n: usize) -> HashMap<&[Token], i64> {
    let mut m = HashMap::new();
    if tokens.len() >= n {
        for w in tokens.windows(n) {
            *m.entry(w).or_insert(0) += 1;
        }
    }
    m
}

fn intersection_size(a: &HashMap<&[Token], i64>, b: &HashMap<&[Token], i64>) -> i64 {
    a.iter().map(|(k, &v)| v.min(b.get(k).copied().unwrap_or(0))).sum()
}

/// `[hyp_len, ref_len, num_1, den_1, .., num_n, den_n]` for one sentence
/// and one reference.
fn gleu_stats(source: &[Token], hyp: &[Token], reference: &[Token], n_max: usize) -> Vec<i64> {
    let mut stats = vec![hyp.len() as i64, reference.len() as i64];
    for n in 1..=n_max {
        let h = ngram_counts(hyp, n);
        let s = ngram_counts(source, n);
        let r = ngram_counts(reference, n);
        // Source n-grams the reference removed.
        let s_minus_r: HashMap<&[Token], i64> = s
            .iter()
            .filter_map(|(k, &v)| {
                let d = v - r.get(k).copied().unwrap_or(0);
                (d > 0).then_some((*k, d))
            })
            .collect();
        let num = intersection_size(&h, &r) - intersection_size(&h, &s_minus_r);
        stats.push(num.max(0));
        stats.push((hyp.len() as i64 + 1 - n as i64).max(0));
    }
    stats
}

fn gleu_from_stats(stats: &[i64], n_max: usize) -> f64 {
    if stats.contains(&0) {
        return 0.0;
    }
    let (c, r) = (stats[0] as f64, stats[1] as f64);
    let log_prec: f64 = stats[2..]
        .chunks(2)
        .map(|p| (p[0] as f64 / p[1] as f64).ln())
        .sum::<f64>()
        / n_max as f64;
    ((1.0 - r / c).min(0.0) + log_prec).exp()
}

/// Corpus GLEU. Any zero count makes the score 0, as in the reference
/// implementation without smoothing. With a single reference per sentence
/// the score is computed once; otherwise it is the mean over
/// [`GLEU_ITERATIONS`] corpora with one reference per sentence drawn by a
/// generator seeded with `seed`.
pub fn gleu(
    sources: &[Sentence],
    hypotheses: &[Sentence],
    references: &[Vec<Sentence>],
    n_max: usize,
    seed: u64,
) -> Result<f64> {
    check_streams(sources, hypotheses, references)?;
    if n_max == 0 {
        return Err(Error::InvalidInput("n_max must be positive".into()));
    }
    let stats: Vec<Vec<Vec<i64>>> = (0..sources.len())
        .into_par_iter()
        .map(|i| {
            references[i]
                .iter()
                .map(|r| gleu_stats(&sources[i], &hypotheses[i], r, n_max))
                .collect()
        })
        .collect();
    let width = 2 + 2 * n_max;
    let corpus = |pick: &dyn Fn(usize) -> usize| {
        let mut total = vec![0i64; width];
        for (i, per_ref) in stats.iter().enumerate() {
            for (t, v) in total.iter_mut().zip(&per_ref[pick(i)]) {
                *t += v;
            }
        }
        gleu_from_stats(&total, n_max)
    };
    if references.iter().all(|r| r.len() == 1) {
        return Ok(corpus(&|_| 0));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sum = 0.0;
    for _ in 0..GLEU_ITERATIONS {
        let picks: Vec<usize> = references.iter().map(|r| rng.random_range(0..r.len())).collect();
        sum += corpus(&|i| picks[i]);
    }
    Ok(sum / GLEU_ITERATIONS as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Metric {
    FHalf,
    Gleu,
    Both,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    #[serde(flatten, skip_serializing_if = "Option::is_none")]
    pub spans: Option<Prf>,
    #[serde(rename = "GLEU", skip_serializing_if = "Option::is_none")]
    pub gleu: Option<f64>,
    pub sentence_count: usize,
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

pub fn evaluate(
    sources: &[Sentence],
    hypotheses: &[Sentence],
    references: &[Vec<Sentence>],
    metric: Metric,
    seed: u64,
) -> Result<EvalReport> {
    let spans = match metric {
        Metric::FHalf | Metric::Both => Some(corpus_f_half(sources, hypotheses, references)?),
        Metric::Gleu => None,
    };
    let gleu = match metric {
        Metric::Gleu | Metric::Both => Some(gleu(sources, hypotheses, references, GLEU_MAX_N, seed)?),
        Metric::FHalf => None,
    };
    Ok(EvalReport {
        spans,
        gleu,
        sentence_count: sources.len(),
    })
}
