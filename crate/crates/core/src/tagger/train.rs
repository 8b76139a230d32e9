use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::model::{Example, MultiHeadModel};
use crate::error::{Error, Result};

/// Optimizer settings. Updates are AdaGrad-scaled per parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    pub epochs: usize,
    pub learning_rate: f64,
    /// Sentences per update.
    pub batch_size: usize,
    /// Seeds the per-epoch example order.
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig {
            epochs: 10,
            learning_rate: 0.5,
            batch_size: 8,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainReport {
    /// Total loss on the training set before training and after each epoch.
    pub losses: Vec<f64>,
    pub steps: usize,
}

const ADAGRAD_EPS: f64 = 1e-8;

/// Trains in place. Deterministic for a given seed.
pub fn train(model: &mut MultiHeadModel, data: &[Example], config: &TrainConfig) -> Result<TrainReport> {
    if data.iter().all(|e| e.features.is_empty()) {
        return Err(Error::InvalidInput("training set has no tokens".into()));
    }
    if config.batch_size == 0 {
        return Err(Error::InvalidInput("batch size must be positive".into()));
    }
    let mut accum: Vec<Vec<f64>> = model.weights.iter().map(|w| vec![0.0; w.len()]).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut order: Vec<usize> = (0..data.len()).filter(|&i| !data[i].features.is_empty()).collect();
    let mut losses = vec![model.total_loss(data)?];
    let mut steps = 0;
    let mut batch = Vec::with_capacity(config.batch_size);
    for _ in 0..config.epochs {
        order.shuffle(&mut rng);
        for chunk in order.chunks(config.batch_size) {
            batch.clear();
            batch.extend(chunk.iter().map(|&i| data[i].clone()));
            let (loss, grad) = model.loss_and_gradient(&batch)?;
            if !loss.is_finite() {
                return Err(Error::Divergence { step: steps, loss });
            }
            for (h, rows) in grad.iter().enumerate() {
                let c = model.classes(h);
                let w = &mut model.weights[h];
                let g2 = &mut accum[h];
                for (&feat, row) in rows {
                    let base = feat as usize * c;
                    for (k, g) in row.iter().enumerate() {
                        g2[base + k] += g * g;
                        w[base + k] -= config.learning_rate * g / (g2[base + k].sqrt() + ADAGRAD_EPS);
                    }
                }
            }
            steps += 1;
        }
        let loss = model.total_loss(data)?;
        if !loss.is_finite() {
            return Err(Error::Divergence { step: steps, loss });
        }
        losses.push(loss);
    }
    Ok(TrainReport { losses, steps })
}

/// Finite-difference step of [`gradient_check`].
pub const GRADIENT_CHECK_STEP: f64 = 1e-5;

/// Largest relative gap between the analytic gradient and central
/// differences over every parameter. The relative error of a pair is
/// `|a - n| / max(|a|, |n|, 1e-6)`, so parameters with (near) zero
/// gradient are compared absolutely.
pub fn gradient_check(model: &MultiHeadModel, batch: &[Example]) -> Result<f64> {
    let (_, grad) = model.loss_and_gradient(batch)?;
    let mut probe = model.clone();
    let mut worst = 0.0f64;
    for h in 0..model.weights.len() {
        let c = model.classes(h);
        for i in 0..model.weights[h].len() {
            let analytic = grad[h]
                .get(&((i / c) as u32))
                .map_or(0.0, |row| row[i % c]);
            let orig = probe.weights[h][i];
            probe.weights[h][i] = orig + GRADIENT_CHECK_STEP;
            let plus = probe.total_loss(batch)?;
            probe.weights[h][i] = orig - GRADIENT_CHECK_STEP;
            let minus = probe.total_loss(batch)?;
            probe.weights[h][i] = orig;
            let numeric = (plus - minus) / (2.0 * GRADIENT_CHECK_STEP);
            let rel = (analytic - numeric).abs() / analytic.abs().max(numeric.abs()).max(1e-6);
            worst = worst.max(rel);
        }
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::labels::LabeledExample;
    use crate::tagger::features::{FeatureEncoder, DEFAULT_TEMPLATES};
    use crate::tagger::model::{head_set, Head};
    use crate::types::{tokenize, EditSequence, TagSet};

    fn setup(lambda: f64) -> (MultiHeadModel, Vec<Example>) {
        let tagset = TagSet::parse("$KEEP\n$DELETE\n$APPEND_the\n$REPLACE_went\n$UNKNOWN\n").unwrap();
        let enc = FeatureEncoder::new(60, DEFAULT_TEMPLATES.to_vec()).unwrap();
        let m = MultiHeadModel::new(enc, tagset, head_set(7).unwrap(), lambda).unwrap();
        let data = [
            ("I go home", "$KEEP $REPLACE_went $KEEP"),
            ("saw saw cat", "$DELETE $APPEND_the $KEEP"),
            ("a b", "$KEEP $KEEP"),
        ]
        .iter()
        .map(|(s, e)| {
            let e: EditSequence = e.parse().unwrap();
            m.encode_example(&LabeledExample::new(tokenize(s), &e).unwrap())
        })
        .collect();
        (m, data)
    }

    #[test]
    fn gradients_match_finite_differences() {
        let (mut m, data) = setup(0.5);
        m.randomize(11, 0.3);
        assert!(gradient_check(&m, &data).unwrap() < 1e-4);
    }

    #[test]
    fn lambda_zero_leaves_aux_gradients_zero() {
        let (mut m, data) = setup(0.0);
        m.randomize(5, 0.3);
        let (_, grad) = m.loss_and_gradient(&data).unwrap();
        for (h, head) in m.heads().iter().enumerate() {
            if *head != Head::Correction {
                assert!(grad[h].values().flatten().all(|g| *g == 0.0));
            }
        }
    }

    #[test]
    fn training_decreases_loss_deterministically() {
        let (m0, data) = setup(0.5);
        let cfg = TrainConfig {
            epochs: 20,
            learning_rate: 0.3,
            batch_size: 1,
            seed: 4,
        };
        let mut a = m0.clone();
        let ra = train(&mut a, &data, &cfg).unwrap();
        assert!(ra.losses.windows(2).all(|w| w[1] < w[0]), "{:?}", ra.losses);
        let mut b = m0.clone();
        train(&mut b, &data, &cfg).unwrap();
        assert_eq!(a, b);
        let mut c = m0.clone();
        train(&mut c, &data, &TrainConfig { learning_rate: 0.0, ..cfg }).unwrap();
        assert_eq!(c, m0);
    }

    #[test]
    fn divergence_is_reported() {
        let (mut m, data) = setup(0.5);
        m.weights_mut(0).fill(f64::NAN);
        let err = train(&mut m, &data, &TrainConfig::default()).unwrap_err();
        assert!(matches!(err, Error::Divergence { step: 0, .. }), "{err}");
    }
}
