use std::collections::BTreeMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::features::{FeatureEncoder, TokenFeatures};
use crate::error::{Error, Result};
use crate::labels::{BinaryHead, LabeledExample};
use crate::types::{Sentence, TagSet};

/// One classification head.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Head {
    Correction,
    Deletion,
    Insertion,
    Substitution,
    Merge,
    Transformation,
    Detection,
}

impl Head {
    pub const ALL: [Head; 7] = [
        Head::Correction,
        Head::Deletion,
        Head::Insertion,
        Head::Substitution,
        Head::Merge,
        Head::Transformation,
        Head::Detection,
    ];

    /// The five-head variant drops merge and transformation.
    pub const FIVE: [Head; 5] = [
        Head::Correction,
        Head::Deletion,
        Head::Insertion,
        Head::Substitution,
        Head::Detection,
    ];

    pub fn binary(self) -> Option<BinaryHead> {
        Some(match self {
            Head::Correction => return None,
            Head::Deletion => BinaryHead::Deletion,
            Head::Insertion => BinaryHead::Insertion,
            Head::Substitution => BinaryHead::Substitution,
            Head::Merge => BinaryHead::Merge,
            Head::Transformation => BinaryHead::Transformation,
            Head::Detection => BinaryHead::Detection,
        })
    }

    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn from_code(code: u8) -> Option<Head> {
        Head::ALL.get(code as usize).copied()
    }

    pub fn name(self) -> &'static str {
        match self.binary() {
            None => "correction",
            Some(b) => b.name(),
        }
    }
}

/// Head subsets: all seven, or five.
pub fn head_set(count: usize) -> Result<Vec<Head>> {
    match count {
        7 => Ok(Head::ALL.to_vec()),
        5 => Ok(Head::FIVE.to_vec()),
        _ => Err(Error::Model(format!("unsupported head count {count}; use 5 or 7"))),
    }
}

pub const DEFAULT_LAMBDA: f64 = 0.5;

/// An encoded training example.
#[derive(Debug, Clone, PartialEq)]
pub struct Example {
    pub features: Vec<TokenFeatures>,
    /// Correction class id per token.
    pub correction: Vec<usize>,
    /// Binary labels indexed like [`BinaryHead::ALL`].
    pub binary: [Vec<u8>; 6],
}

/// Per-head, per-token class distributions.
#[derive(Debug, Clone, PartialEq)]
pub struct Forward {
    pub heads: Vec<(Head, Vec<Vec<f64>>)>,
}

impl Forward {
    pub fn head(&self, head: Head) -> Option<&[Vec<f64>]> {
        self.heads.iter().find(|(h, _)| *h == head).map(|(_, p)| p.as_slice())
    }
}

/// Sparse gradient: for each head, rows of touched features.
pub type Gradient = Vec<BTreeMap<u32, Vec<f64>>>;

/// Hashed-feature encoder with linear softmax heads and the weighted
/// multi-task loss `l_c + λ Σ l_aux`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiHeadModel {
    pub(crate) encoder: FeatureEncoder,
    pub(crate) tagset: TagSet,
    pub(crate) lambda: f64,
    pub(crate) heads: Vec<Head>,
    /// Feature-major `dim × classes` weights per head.
    pub(crate) weights: Vec<Vec<f64>>,
}

pub(crate) fn softmax_in_place(z: &mut [f64]) {
    let max = z.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in z.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in z.iter_mut() {
        *v /= sum;
    }
}

impl MultiHeadModel {
    /// Zero-initialized model. The head list must start with the
    /// correction head.
    pub fn new(encoder: FeatureEncoder, tagset: TagSet, heads: Vec<Head>, lambda: f64) -> Result<Self> {
        if heads.first() != Some(&Head::Correction) {
            return Err(Error::Model("the first head must be correction".into()));
        }
        let mut seen = heads.clone();
        seen.sort();
        seen.dedup();
        if seen.len() != heads.len() {
            return Err(Error::Model("duplicate head".into()));
        }
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Model(format!("lambda {lambda} outside [0, 1]")));
        }
        let dim = encoder.dim();
        let weights = heads
            .iter()
            .map(|h| vec![0.0; dim * Self::classes_for(*h, &tagset)])
            .collect();
        Ok(MultiHeadModel {
            encoder,
            tagset,
            lambda,
            heads,
            weights,
        })
    }

    fn classes_for(head: Head, tagset: &TagSet) -> usize {
        if head == Head::Correction {
            tagset.len()
        } else {
            2
        }
    }

    pub fn encoder(&self) -> &FeatureEncoder {
        &self.encoder
    }

    pub fn tagset(&self) -> &TagSet {
        &self.tagset
    }

    pub fn heads(&self) -> &[Head] {
        &self.heads
    }

    pub fn lambda(&self) -> f64 {
        self.lambda
    }

    pub fn set_lambda(&mut self, lambda: f64) -> Result<()> {
        if !(0.0..=1.0).contains(&lambda) {
            return Err(Error::Model(format!("lambda {lambda} outside [0, 1]")));
        }
        self.lambda = lambda;
        Ok(())
    }

    pub fn classes(&self, head_index: usize) -> usize {
        Self::classes_for(self.heads[head_index], &self.tagset)
    }

    pub fn weights(&self, head_index: usize) -> &[f64] {
        &self.weights[head_index]
    }

    pub fn weights_mut(&mut self, head_index: usize) -> &mut [f64] {
        &mut self.weights[head_index]
    }

    pub fn parameter_count(&self) -> usize {
        self.weights.iter().map(Vec::len).sum()
    }

    /// Fills the weights uniformly in `[-scale, scale]`.
    pub fn randomize(&mut self, seed: u64, scale: f64) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for w in self.weights.iter_mut().flatten() {
            *w = rng.random_range(-scale..=scale);
        }
    }

    /// Loss weight of a head in the total loss.
    pub fn head_scale(&self, head: Head) -> f64 {
        if head == Head::Correction {
            1.0
        } else {
            self.lambda
        }
    }

    fn check_features(&self, features: &[TokenFeatures]) -> Result<()> {
        let dim = self.encoder.dim();
        if let Some(f) = features.iter().flatten().find(|&&f| f as usize >= dim) {
            return Err(Error::Model(format!("feature index {f} outside dimension {dim}")));
        }
        Ok(())
    }

    pub(crate) fn logits(&self, head_index: usize, features: &TokenFeatures) -> Vec<f64> {
        let c = self.classes(head_index);
        let w = &self.weights[head_index];
        let mut z = vec![0.0; c];
        for &f in features {
            let row = &w[f as usize * c..(f as usize + 1) * c];
            for (zk, wk) in z.iter_mut().zip(row) {
                *zk += wk;
            }
        }
        z
    }

    /// Class distributions of every head for every token.
    pub fn forward(&self, features: &[TokenFeatures]) -> Result<Forward> {
        self.check_features(features)?;
        let heads = self
            .heads
            .iter()
            .enumerate()
            .map(|(h, head)| {
                let probs = features
                    .iter()
                    .map(|f| {
                        let mut z = self.logits(h, f);
                        softmax_in_place(&mut z);
                        z
                    })
                    .collect();
                (*head, probs)
            })
            .collect();
        Ok(Forward { heads })
    }

    pub fn forward_sentence(&self, sentence: &Sentence) -> Forward {
        self.forward(&self.encoder.encode(sentence))
            .expect("encoder output is within the model dimension")
    }

    /// Encodes a labeled example. Tags outside the model's tagset become
    /// `$UNKNOWN`.
    pub fn encode_example(&self, example: &LabeledExample) -> Example {
        let unknown = self.tagset.unknown_id();
        Example {
            features: self.encoder.encode(&example.source),
            correction: example
                .labels
                .correction
                .iter()
                .map(|t| self.tagset.id(t).unwrap_or(unknown))
                .collect(),
            binary: BinaryHead::ALL.map(|b| example.labels.stream(b).to_vec()),
        }
    }

    fn gold(&self, head: Head, ex: &Example, t: usize) -> usize {
        match head.binary() {
            None => ex.correction[t],
            Some(b) => {
                let i = BinaryHead::ALL.iter().position(|x| *x == b).expect("all heads listed");
                ex.binary[i][t] as usize
            }
        }
    }

    fn check_batch(&self, batch: &[Example]) -> Result<usize> {
        let tokens: usize = batch.iter().map(|e| e.features.len()).sum();
        if tokens == 0 {
            return Err(Error::InvalidInput("empty batch".into()));
        }
        for ex in batch {
            self.check_features(&ex.features)?;
            let n = ex.features.len();
            if ex.correction.len() != n || ex.binary.iter().any(|b| b.len() != n) {
                return Err(Error::LengthMismatch {
                    expected: n,
                    found: ex.correction.len(),
                });
            }
            if let Some(&c) = ex.correction.iter().find(|&&c| c >= self.tagset.len()) {
                return Err(Error::Model(format!("class id {c} outside the tagset")));
            }
        }
        Ok(tokens)
    }

    /// Mean token cross-entropy of each head over the batch.
    pub fn head_losses(&self, batch: &[Example]) -> Result<Vec<(Head, f64)>> {
        let tokens = self.check_batch(batch)? as f64;
        Ok(self
            .heads
            .iter()
            .enumerate()
            .map(|(h, head)| {
                let mut sum = 0.0;
                for ex in batch {
                    for (t, f) in ex.features.iter().enumerate() {
                        let mut z = self.logits(h, f);
                        softmax_in_place(&mut z);
                        sum -= z[self.gold(*head, ex, t)].ln();
                    }
                }
                (*head, sum / tokens)
            })
            .collect())
    }

    /// `l_c + λ Σ l_aux` over the batch.
    pub fn total_loss(&self, batch: &[Example]) -> Result<f64> {
        Ok(self
            .head_losses(batch)?
            .into_iter()
            .map(|(h, l)| self.head_scale(h) * l)
            .sum())
    }

    /// Total loss and its gradient with respect to every weight.
    pub fn loss_and_gradient(&self, batch: &[Example]) -> Result<(f64, Gradient)> {
        let tokens = self.check_batch(batch)? as f64;
        let mut loss = 0.0;
        let mut grad: Gradient = vec![BTreeMap::new(); self.heads.len()];
        for (h, head) in self.heads.iter().enumerate() {
            let scale = self.head_scale(*head);
            let c = self.classes(h);
            for ex in batch {
                for (t, f) in ex.features.iter().enumerate() {
                    let mut p = self.logits(h, f);
                    softmax_in_place(&mut p);
                    let gold = self.gold(*head, ex, t);
                    loss -= scale * p[gold].ln() / tokens;
                    if scale == 0.0 {
                        continue;
                    }
                    p[gold] -= 1.0;
                    for &feat in f {
                        let row = grad[h].entry(feat).or_insert_with(|| vec![0.0; c]);
                        for (g, d) in row.iter_mut().zip(&p) {
                            *g += scale * d / tokens;
                        }
                    }
                }
            }
        }
        Ok((loss, grad))
    }
}
