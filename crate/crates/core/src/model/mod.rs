//! Sequence classifiers with hand-derived backward passes, Adam, and the
//! training loop.

mod adam;
mod config;
mod gradcheck;
mod layers;
mod linear;
mod params;
mod train;
mod transformer;
mod weights;

use ndarray::Array1;
use rayon::prelude::*;

pub use adam::Adam;
pub use config::{Arch, ModelConfig, Pooling, TrainConfig};
pub use gradcheck::{gradient_check, GradientCheck};
pub use params::ParamStore;
pub use train::{train, train_with, BatchTransform, EpochRecord, TrainLog, TrainedSpecialist};
pub use weights::{load_weights, save_weights, read_weights, write_weights, WEIGHTS_VERSION};

use crate::error::{Error, Result};
use crate::landmarks::LandmarkSequence;
use crate::rng::{derive_rng, stream, Rng};
use layers::{softmax, Input};

enum Cache {
    Transformer(transformer::Cache),
    Linear(linear::Cache),
}

/// A configured architecture together with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub struct Classifier {
    config: ModelConfig,
    params: ParamStore,
}

impl Classifier {
    /// Fresh parameters drawn from the `seed`-derived initialization stream.
    pub fn new(config: ModelConfig, seed: u64) -> Result<Self> {
        config.validate()?;
        let mut rng = derive_rng(seed, &[stream::INIT]);
        let params = init(&config, &mut rng);
        Ok(Self { config, params })
    }

    /// Every parameter set to zero.
    pub fn zeroed(config: ModelConfig) -> Result<Self> {
        let mut c = Self::new(config, 0)?;
        c.params = c.params.zeros_like();
        Ok(c)
    }

    pub fn from_parts(config: ModelConfig, params: ParamStore) -> Result<Self> {
        config.validate()?;
        let expected = init(&config, &mut derive_rng(0, &[]));
        if !expected.same_shape(&params) || expected.names() != params.names() {
            return Err(Error::Shape(
                "parameter tensors do not match the model configuration".into(),
            ));
        }
        Ok(Self { config, params })
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn params(&self) -> &ParamStore {
        &self.params
    }

    pub fn params_mut(&mut self) -> &mut ParamStore {
        &mut self.params
    }

    pub fn into_params(self) -> ParamStore {
        self.params
    }

    fn check(&self, seq: &LandmarkSequence) -> Result<()> {
        if seq.joints() * 3 != self.config.input_dim {
            return Err(Error::Shape(format!(
                "sequence has {} features per frame, model expects {}",
                seq.joints() * 3,
                self.config.input_dim
            )));
        }
        if seq.len() > self.config.max_len {
            return Err(Error::Shape(format!(
                "sequence length {} exceeds the model's maximum {}",
                seq.len(),
                self.config.max_len
            )));
        }
        if seq.real_count() == 0 {
            return Err(Error::EmptySequence);
        }
        Ok(())
    }

    fn logits(&self, seq: &LandmarkSequence, rng: Option<&mut Rng>) -> Result<(Array1<f64>, Cache)> {
        self.check(seq)?;
        let input = Input::from_sequence(seq);
        Ok(match self.config.arch {
            Arch::Transformer => {
                let (l, c) = transformer::forward(&self.config, &self.params, input, rng);
                (l, Cache::Transformer(c))
            }
            Arch::LinearPooled => {
                let (l, c) = linear::forward(&self.config, &self.params, input, rng);
                (l, Cache::Linear(c))
            }
        })
    }

    fn backward(&self, cache: &Cache, dlogits: &Array1<f64>) -> ParamStore {
        match cache {
            Cache::Transformer(c) => transformer::backward(&self.config, &self.params, c, dlogits),
            Cache::Linear(c) => linear::backward(&self.config, &self.params, c, dlogits),
        }
    }

    /// Class probabilities for one sequence, dropout disabled.
    pub fn probabilities(&self, seq: &LandmarkSequence) -> Result<Vec<f64>> {
        let (logits, _) = self.logits(seq, None)?;
        Ok(softmax(&logits).to_vec())
    }

    /// Class probabilities for each sequence in the batch.
    pub fn forward(&self, batch: &[LandmarkSequence]) -> Result<Vec<Vec<f64>>> {
        batch.par_iter().map(|s| self.probabilities(s)).collect()
    }

    /// Mean cross-entropy over the batch and its gradient. Dropout is active
    /// exactly when `dropout_rng` is given.
    pub fn loss_and_gradients(
        &self,
        batch: &[&LandmarkSequence],
        labels: &[usize],
        mut dropout_rng: Option<&mut Rng>,
    ) -> Result<(f64, ParamStore)> {
        if batch.len() != labels.len() || batch.is_empty() {
            return Err(Error::Shape(format!(
                "{} sequences but {} labels",
                batch.len(),
                labels.len()
            )));
        }
        let n = batch.len() as f64;
        let mut grads = self.params.zeros_like();
        let mut loss = 0.0;
        for (seq, &label) in batch.iter().zip(labels) {
            if label >= self.config.class_count {
                return Err(Error::Shape(format!(
                    "label {label} outside {} classes",
                    self.config.class_count
                )));
            }
            let (logits, cache) = self.logits(seq, dropout_rng.as_deref_mut())?;
            let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let lse = m + logits.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
            loss += lse - logits[label];
            let mut d = softmax(&logits);
            d[label] -= 1.0;
            d /= n;
            grads.add_scaled(&self.backward(&cache, &d), 1.0);
        }
        Ok((loss / n, grads))
    }

    /// Argmax labels and probability vectors.
    pub fn predict(&self, seqs: &[LandmarkSequence]) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
        let probs = self.forward(seqs)?;
        Ok((probs.iter().map(|p| argmax(p)).collect(), probs))
    }
}

fn init(cfg: &ModelConfig, rng: &mut Rng) -> ParamStore {
    match cfg.arch {
        Arch::Transformer => transformer::init(cfg, rng),
        Arch::LinearPooled => linear::init(cfg, rng),
    }
}

/// Index of the largest entry; ties go to the lowest index.
pub fn argmax(values: &[f64]) -> usize {
    let mut best = 0;
    for (i, &v) in values.iter().enumerate().skip(1) {
        if v > values[best] {
            best = i;
        }
    }
    best
}
