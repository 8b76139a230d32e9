use super::model::{Forward, Head, MultiHeadModel};
use crate::error::Result;
use crate::types::{EditSequence, Sentence};

/// Inference-time adjustments.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Tweaks {
    /// Added to the `$KEEP` probability before the argmax.
    pub keep_bias: f64,
    /// If no token's detection-head error probability reaches this value,
    /// the whole sentence is left unchanged. Clamped to [0, 1]; a value of
    /// 1 suppresses every edit.
    pub min_error_prob: f64,
}

impl Tweaks {
    pub fn new(keep_bias: f64, min_error_prob: f64) -> Self {
        Tweaks {
            keep_bias,
            min_error_prob: min_error_prob.clamp(0.0, 1.0),
        }
    }
}

/// Decodes tags from head outputs.
pub fn decode(model: &MultiHeadModel, forward: &Forward, tweaks: &Tweaks) -> EditSequence {
    let correction = forward.head(Head::Correction).expect("every model has a correction head");
    let n = correction.len();
    let threshold = tweaks.min_error_prob.clamp(0.0, 1.0);
    let suppressed = threshold >= 1.0
        || forward.head(Head::Detection).is_some_and(|det| {
            let max_err = det.iter().map(|p| p[1]).fold(0.0, f64::max);
            max_err < threshold
        });
    if suppressed {
        return EditSequence::all_keep(n);
    }
    let tagset = model.tagset();
    let keep = tagset.keep_id();
    correction
        .iter()
        .map(|p| {
            let keep_score = p[keep] + tweaks.keep_bias;
            let mut best = keep;
            let mut best_score = keep_score;
            for (k, &v) in p.iter().enumerate() {
                if v > best_score {
                    best = k;
                    best_score = v;
                }
            }
            tagset.tag(best).expect("class ids index the tagset").clone()
        })
        .collect()
}

/// Tags for one sentence under the given tweaks.
pub fn predict(model: &MultiHeadModel, sentence: &Sentence, tweaks: &Tweaks) -> EditSequence {
    decode(model, &model.forward_sentence(sentence), tweaks)
}

/// Fraction of tokens whose predicted tag equals the gold tag.
pub fn token_accuracy(model: &MultiHeadModel, data: &[(Sentence, EditSequence)], tweaks: &Tweaks) -> Result<f64> {
    let (mut right, mut total) = (0usize, 0usize);
    for (s, gold) in data {
        let pred = predict(model, s, tweaks);
        total += s.len();
        right += pred.iter().zip(gold.iter()).filter(|(a, b)| a == b).count();
    }
    if total == 0 {
        return Err(crate::error::Error::InvalidInput("no tokens to score".into()));
    }
    Ok(right as f64 / total as f64)
}
