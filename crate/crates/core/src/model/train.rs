use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::adam::Adam;
use super::config::{ModelConfig, TrainConfig};
use super::Classifier;
use crate::dataset::{LabeledDataset, Preprocess};
use crate::error::{Error, Result};
use crate::landmarks::LandmarkSequence;
use crate::rng::{derive_rng, stream};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    /// 1-based epoch number.
    pub epoch: usize,
    pub train_loss: f64,
    /// `None` when training ran without a validation split.
    pub validation_accuracy: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct TrainLog {
    pub epochs: Vec<EpochRecord>,
}

impl TrainLog {
    pub fn best_validation_accuracy(&self) -> Option<f64> {
        self.epochs
            .iter()
            .filter_map(|e| e.validation_accuracy)
            .fold(None, |m, v| Some(m.map_or(v, |m: f64| m.max(v))))
    }
}

/// Per-batch input transformation applied to training sequences only.
pub trait BatchTransform: Sync {
    /// Transform row `row` of `dataset` for the given 1-based epoch and
    /// 0-based batch index.
    fn transform(
        &self,
        epoch: usize,
        batch: usize,
        dataset: &LabeledDataset,
        row: usize,
    ) -> Result<LandmarkSequence>;
}

/// A trained model, the regime it was trained under, and its history.
#[derive(Debug, Clone, PartialEq)]
pub struct TrainedSpecialist {
    pub classifier: Classifier,
    /// Augmentation preset name or method tag such as `baseline`.
    pub tag: String,
    preprocess: Preprocess,
    log: TrainLog,
    best_epoch: usize,
}

impl TrainedSpecialist {
    pub(crate) fn from_parts(
        classifier: Classifier,
        tag: String,
        preprocess: Preprocess,
        log: TrainLog,
        best_epoch: usize,
    ) -> Result<Self> {
        if best_epoch == 0 || best_epoch > log.epochs.len() {
            return Err(Error::Training(format!(
                "best epoch {best_epoch} outside the {}-epoch log",
                log.epochs.len()
            )));
        }
        Ok(Self {
            classifier,
            tag,
            preprocess,
            log,
            best_epoch,
        })
    }

    pub fn log(&self) -> &TrainLog {
        &self.log
    }

    pub fn best_epoch(&self) -> usize {
        self.best_epoch
    }

    pub fn best_record(&self) -> &EpochRecord {
        &self.log.epochs[self.best_epoch - 1]
    }

    pub fn model_config(&self) -> &ModelConfig {
        self.classifier.config()
    }

    pub fn preprocess(&self) -> &Preprocess {
        &self.preprocess
    }

    /// Labels and probabilities for raw sequences; the stored preprocessing
    /// is applied first.
    pub fn predict(&self, seqs: &[LandmarkSequence]) -> Result<(Vec<usize>, Vec<Vec<f64>>)> {
        if self.preprocess.is_identity() {
            return self.classifier.predict(seqs);
        }
        let prepared = seqs.iter().map(|s| self.preprocess.apply(s)).collect::<Result<Vec<_>>>()?;
        self.classifier.predict(&prepared)
    }

    pub fn with_tag(mut self, tag: impl Into<String>) -> Self {
        self.tag = tag.into();
        self
    }
}

fn accuracy_on(model: &Classifier, data: &LabeledDataset) -> Result<f64> {
    let (pred, _) = model.predict(&data.sequences)?;
    let hits = pred.iter().zip(&data.labels).filter(|(p, l)| p == l).count();
    Ok(hits as f64 / data.len() as f64)
}

/// Train with minibatch Adam and keep the weights of the epoch with the
/// highest validation accuracy (earliest on ties).
pub fn train(
    train: &LabeledDataset,
    validation: &LabeledDataset,
    model: &ModelConfig,
    config: &TrainConfig,
) -> Result<TrainedSpecialist> {
    train_with(train, validation, model, config, None)
}

/// [`train`] with an optional per-batch transform of the training inputs.
///
/// Initialization, shuffling and dropout each draw from their own stream of
/// `config.seed`, so a transform never perturbs them.
pub fn train_with(
    train: &LabeledDataset,
    validation: &LabeledDataset,
    model: &ModelConfig,
    config: &TrainConfig,
    transform: Option<&dyn BatchTransform>,
) -> Result<TrainedSpecialist> {
    config.validate()?;
    if train.is_empty() {
        return Err(Error::Training("empty training split".into()));
    }
    if let Some(&l) = train.labels.iter().chain(&validation.labels).find(|&&l| l >= model.class_count) {
        return Err(Error::Training(format!(
            "label {l} outside the model's {} classes",
            model.class_count
        )));
    }
    let pre = config.preprocess;
    let prepared = match transform {
        Some(_) => None,
        None => Some(train.preprocess(&pre)?),
    };
    let validation = validation.preprocess(&pre)?;
    let mut net = Classifier::new(model.clone(), config.seed)?;
    let mut adam = Adam::new(net.params(), config.learning_rate);
    let mut dropout_rng = derive_rng(config.seed, &[stream::DROPOUT]);
    let mut order: Vec<usize> = (0..train.len()).collect();
    let mut log = TrainLog::default();
    let mut best: Option<(f64, usize, Classifier)> = None;

    for epoch in 1..=config.max_epochs {
        order.shuffle(&mut derive_rng(config.seed, &[stream::SHUFFLE, epoch as u64]));
        let mut total = 0.0;
        for (b, rows) in order.chunks(config.batch_size).enumerate() {
            let transformed: Vec<LandmarkSequence>;
            let batch: Vec<&LandmarkSequence> = match transform {
                Some(tf) => {
                    transformed = rows
                        .iter()
                        .map(|&r| pre.apply(&tf.transform(epoch, b, train, r)?))
                        .collect::<Result<_>>()?;
                    transformed.iter().collect()
                }
                None => {
                    let data = prepared.as_ref().expect("prepared when untransformed");
                    rows.iter().map(|&r| &data.sequences[r]).collect()
                }
            };
            let labels: Vec<usize> = rows.iter().map(|&r| train.labels[r]).collect();
            let (loss, grads) = net.loss_and_gradients(&batch, &labels, Some(&mut dropout_rng))?;
            if !loss.is_finite() {
                return Err(Error::Training(format!("loss diverged at epoch {epoch}")));
            }
            total += loss * rows.len() as f64;
            adam.step(net.params_mut(), &grads)?;
        }
        let validation_accuracy = if validation.is_empty() {
            None
        } else {
            Some(accuracy_on(&net, &validation)?)
        };
        log.epochs.push(EpochRecord {
            epoch,
            train_loss: total / train.len() as f64,
            validation_accuracy,
        });
        if let Some(acc) = validation_accuracy {
            if best.as_ref().is_none_or(|(b, _, _)| acc > *b) {
                best = Some((acc, epoch, net.clone()));
            }
            let since = epoch - best.as_ref().map_or(epoch, |b| b.1);
            if config.patience > 0 && since >= config.patience {
                break;
            }
        }
    }

    let (best_epoch, mut chosen) = match best {
        Some((_, e, c)) => (e, c),
        None => (log.epochs.len(), net),
    };
    chosen.params_mut().round_to_f32();
    TrainedSpecialist::from_parts(chosen, "baseline".into(), pre, log, best_epoch)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmarks::Point;
    use crate::model::config::Pooling;
    use crate::rng::Rng;
    use crate::topology::SkeletonTopology;
    use rand::Rng as _;

    /// Two classes separated along x in every frame's mean.
    fn separable(n: usize, rng: &mut Rng) -> LabeledDataset {
        let mut seqs = vec![];
        let mut labels = vec![];
        for i in 0..n {
            let label = i % 2;
            let sign = if label == 0 { -1.0 } else { 1.0 };
            let frames = (0..6)
                .map(|_| {
                    (0..2)
                        .map(|_| {
                            Point::new(
                                sign + rng.random_range(-0.3..0.3),
                                rng.random_range(-1.0..1.0),
                                rng.random_range(-1.0..1.0),
                            )
                        })
                        .collect()
                })
                .collect();
            seqs.push(LandmarkSequence::from_frames(frames).unwrap());
            labels.push(label);
        }
        let subjects = vec![0; n];
        LabeledDataset::new(seqs, labels, vec!["a".into(), "b".into()], subjects, SkeletonTopology::plain(2)).unwrap()
    }

    fn quick(seed: u64, patience: usize, epochs: usize) -> TrainConfig {
        TrainConfig {
            learning_rate: 1e-2,
            batch_size: 8,
            max_epochs: epochs,
            patience,
            seed,
            preprocess: Preprocess::default(),
        }
    }

    #[test]
    fn separable_data_reaches_full_validation_accuracy() {
        let mut rng = derive_rng(11, &[]);
        let (tr, va) = (separable(40, &mut rng), separable(20, &mut rng));
        let mut cfg = ModelConfig::linear_pooled(6, 2, 8);
        cfg.pooling = Pooling::MeanOverTime;
        let t = train(&tr, &va, &cfg, &quick(1, 0, 50)).unwrap();
        assert_eq!(t.log().best_validation_accuracy(), Some(1.0));
        assert_eq!(t.best_record().validation_accuracy, Some(1.0));
    }

    #[test]
    fn identical_seeds_give_identical_logs() {
        let mut rng = derive_rng(12, &[]);
        let (tr, va) = (separable(24, &mut rng), separable(8, &mut rng));
        let cfg = ModelConfig::linear_pooled(6, 2, 4);
        let a = train(&tr, &va, &cfg, &quick(5, 3, 20)).unwrap();
        let b = train(&tr, &va, &cfg, &quick(5, 3, 20)).unwrap();
        assert_eq!(a, b);
        let c = train(&tr, &va, &cfg, &quick(6, 3, 20)).unwrap();
        assert_ne!(a.log(), c.log());
    }

    #[test]
    fn zero_patience_runs_every_epoch() {
        let mut rng = derive_rng(13, &[]);
        let (tr, va) = (separable(16, &mut rng), separable(8, &mut rng));
        let cfg = ModelConfig::linear_pooled(6, 2, 4);
        let t = train(&tr, &va, &cfg, &quick(2, 0, 15)).unwrap();
        assert_eq!(t.log().epochs.len(), 15);
        let best = t.log().best_validation_accuracy().unwrap();
        let first = t.log().epochs.iter().position(|e| e.validation_accuracy == Some(best)).unwrap();
        assert_eq!(t.best_epoch(), first + 1);
    }

    #[test]
    fn empty_validation_keeps_final_epoch_and_empty_train_fails() {
        let mut rng = derive_rng(14, &[]);
        let tr = separable(10, &mut rng);
        let empty = tr.subset(&[]);
        let cfg = ModelConfig::linear_pooled(6, 2, 4);
        let t = train(&tr, &empty, &cfg, &quick(0, 2, 7)).unwrap();
        assert_eq!(t.best_epoch(), 7);
        assert!(t.log().epochs.iter().all(|e| e.validation_accuracy.is_none()));
        assert!(train(&empty, &tr, &cfg, &quick(0, 2, 7)).is_err());
    }
}
