//! Specialist ensembles, voting rules, and the generalist and bagging
//! comparison methods.

use std::fs;
use std::path::{Path, PathBuf};

use rand::Rng as _;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::augment::{build_specialist_dataset, Augmentation, DatasetMode, NamedAugmentation};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::landmarks::LandmarkSequence;
use crate::model::{
    load_weights, train, train_with, write_weights, BatchTransform, ModelConfig, TrainConfig,
    TrainedSpecialist,
};
use crate::rng::{derive_rng, derive_seed, stream};

/// Tie rule shared by both voting schemes, recorded in manifests.
pub const TIE_POLICY: &str = "highest summed probability among tied classes, then lowest class index";

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Aggregation {
    #[default]
    HardVote,
    SoftVote,
}

/// Order-independent sum.
fn stable_sum(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    v.iter().sum()
}

fn class_prob_sums(probs: &[Vec<f64>], classes: usize) -> Vec<f64> {
    (0..classes)
        .map(|c| stable_sum(probs.iter().map(|p| p.get(c).copied().unwrap_or(0.0)).collect()))
        .collect()
}

/// Plurality vote over member labels. Ties go to the tied class with the
/// highest summed probability, then to the lowest index.
pub fn hard_vote(labels: &[usize], probs: &[Vec<f64>]) -> usize {
    let classes = labels
        .iter()
        .map(|&l| l + 1)
        .chain(probs.iter().map(Vec::len))
        .max()
        .unwrap_or(0);
    let mut counts = vec![0usize; classes];
    for &l in labels {
        counts[l] += 1;
    }
    let top = counts.iter().copied().max().unwrap_or(0);
    let tied: Vec<usize> = (0..classes).filter(|&c| counts[c] == top).collect();
    if tied.len() == 1 {
        return tied[0];
    }
    let sums = class_prob_sums(probs, classes);
    let mut best = tied[0];
    for &c in &tied[1..] {
        if sums[c] > sums[best] {
            best = c;
        }
    }
    best
}

/// Re-normalized mean of the member probability vectors.
pub fn mean_probabilities(probs: &[Vec<f64>]) -> Vec<f64> {
    let classes = probs.iter().map(Vec::len).max().unwrap_or(0);
    let sums = class_prob_sums(probs, classes);
    let total: f64 = sums.iter().sum();
    sums.into_iter().map(|s| s / total).collect()
}

/// Argmax of the averaged probabilities, lowest index on ties.
pub fn soft_vote(probs: &[Vec<f64>]) -> usize {
    crate::model::argmax(&mean_probabilities(probs))
}

/// Ensemble decisions plus each member's outputs.
#[derive(Debug, Clone, PartialEq)]
pub struct EnsemblePrediction {
    pub labels: Vec<usize>,
    /// `member_labels[i][n]`: member `i`'s label for input `n`.
    pub member_labels: Vec<Vec<usize>>,
    pub member_probs: Vec<Vec<Vec<f64>>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EnsembleModel {
    members: Vec<TrainedSpecialist>,
    pub aggregation: Aggregation,
    pub master_seed: u64,
}

impl EnsembleModel {
    pub fn new(members: Vec<TrainedSpecialist>, aggregation: Aggregation, master_seed: u64) -> Result<Self> {
        let first = members
            .first()
            .ok_or_else(|| Error::param("an ensemble needs at least one member"))?
            .model_config()
            .clone();
        for m in &members[1..] {
            let c = m.model_config();
            if c.class_count != first.class_count || c.input_dim != first.input_dim {
                return Err(Error::Shape(
                    "ensemble members disagree on class count or input shape".into(),
                ));
            }
        }
        Ok(Self {
            members,
            aggregation,
            master_seed,
        })
    }

    pub fn members(&self) -> &[TrainedSpecialist] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn predict(&self, seqs: &[LandmarkSequence]) -> Result<EnsemblePrediction> {
        let outputs = self
            .members
            .par_iter()
            .map(|m| m.predict(seqs))
            .collect::<Result<Vec<_>>>()?;
        let (member_labels, member_probs): (Vec<_>, Vec<_>) = outputs.into_iter().unzip();
        let labels = (0..seqs.len())
            .map(|n| {
                let probs: Vec<Vec<f64>> = member_probs.iter().map(|p: &Vec<Vec<f64>>| p[n].clone()).collect();
                match self.aggregation {
                    Aggregation::HardVote => {
                        let ls: Vec<usize> = member_labels.iter().map(|l: &Vec<usize>| l[n]).collect();
                        hard_vote(&ls, &probs)
                    }
                    Aggregation::SoftVote => soft_vote(&probs),
                }
            })
            .collect();
        Ok(EnsemblePrediction {
            labels,
            member_labels,
            member_probs,
        })
    }
}

/// Seeding and dataset assembly choices for ensemble training.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct EnsembleOptions {
    pub aggregation: Aggregation,
    pub dataset_mode: DatasetMode,
    /// Train every member from `train_config.seed` itself instead of a
    /// per-member derived seed.
    pub shared_seed: bool,
}

fn member_config(base: &TrainConfig, i: usize, shared: bool) -> TrainConfig {
    let seed = if shared {
        base.seed
    } else {
        derive_seed(base.seed, &[stream::MEMBER, i as u64])
    };
    TrainConfig { seed, ..base.clone() }
}

/// One specialist per augmentation, each trained only on the training split
/// expanded by its own augmentation. `train_config.seed` is the master seed.
pub fn train_ensaug(
    train_split: &LabeledDataset,
    validation: &LabeledDataset,
    augmentations: &[NamedAugmentation],
    model: &ModelConfig,
    train_config: &TrainConfig,
    options: EnsembleOptions,
) -> Result<EnsembleModel> {
    if augmentations.is_empty() {
        return Err(Error::param("an ensemble needs at least one augmentation"));
    }
    let members = augmentations
        .par_iter()
        .enumerate()
        .map(|(i, aug)| train_specialist(train_split, validation, aug, model, &member_config(train_config, i, options.shared_seed), options.dataset_mode))
        .collect::<Result<Vec<_>>>()?;
    EnsembleModel::new(members, options.aggregation, train_config.seed)
}

/// A single model trained on the split expanded by one augmentation.
pub fn train_specialist(
    train_split: &LabeledDataset,
    validation: &LabeledDataset,
    augmentation: &NamedAugmentation,
    model: &ModelConfig,
    train_config: &TrainConfig,
    mode: DatasetMode,
) -> Result<TrainedSpecialist> {
    let aug_seed = derive_seed(train_config.seed, &[stream::AUGMENT]);
    let data = build_specialist_dataset(train_split, &augmentation.augmentation, aug_seed, mode)?;
    Ok(train(&data, validation, model, train_config)?.with_tag(augmentation.name.clone()))
}

struct RandomPerBatch<'a> {
    augmentations: &'a [NamedAugmentation],
    seed: u64,
}

impl BatchTransform for RandomPerBatch<'_> {
    fn transform(&self, epoch: usize, batch: usize, data: &LabeledDataset, row: usize) -> Result<LandmarkSequence> {
        let mut rng = derive_rng(
            self.seed,
            &[stream::GENERALIST, epoch as u64, batch as u64, data.sequence_ids[row]],
        );
        let pick: &Augmentation = &self.augmentations[rng.random_range(0..self.augmentations.len())].augmentation;
        pick.apply(&data.sequences[row], &data.topology, &mut rng)
    }
}

/// One model whose every training sequence, in every batch, receives one
/// augmentation drawn uniformly from `augmentations`.
pub fn train_generalist(
    train_split: &LabeledDataset,
    validation: &LabeledDataset,
    augmentations: &[NamedAugmentation],
    model: &ModelConfig,
    train_config: &TrainConfig,
) -> Result<TrainedSpecialist> {
    if augmentations.is_empty() {
        return Err(Error::param("generalist requires augmentations"));
    }
    for a in augmentations {
        a.augmentation.validate()?;
    }
    let tf = RandomPerBatch {
        augmentations,
        seed: train_config.seed,
    };
    Ok(train_with(train_split, validation, model, train_config, Some(&tf))?.with_tag("generalist"))
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bootstrap {
    /// `N` draws with replacement.
    #[default]
    Resample,
    /// The training split unchanged.
    Identity,
}

/// Bootstrap sample indices for member `member` of an ensemble seeded by `master_seed`.
pub fn bootstrap_indices(n: usize, master_seed: u64, member: usize) -> Vec<usize> {
    let mut rng = derive_rng(master_seed, &[stream::BOOTSTRAP, member as u64]);
    (0..n).map(|_| rng.random_range(0..n)).collect()
}

/// `members` models, each trained on its own bootstrap resample of the split.
pub fn train_bagging(
    train_split: &LabeledDataset,
    validation: &LabeledDataset,
    members: usize,
    model: &ModelConfig,
    train_config: &TrainConfig,
    options: EnsembleOptions,
    bootstrap: Bootstrap,
) -> Result<EnsembleModel> {
    if members == 0 {
        return Err(Error::param("an ensemble needs at least one member"));
    }
    let trained = (0..members)
        .into_par_iter()
        .map(|i| {
            let data = match bootstrap {
                Bootstrap::Resample => {
                    train_split.subset(&bootstrap_indices(train_split.len(), train_config.seed, i))
                }
                Bootstrap::Identity => train_split.clone(),
            };
            let cfg = member_config(train_config, i, options.shared_seed);
            Ok(train(&data, validation, model, &cfg)?.with_tag(format!("bagging.{i}")))
        })
        .collect::<Result<Vec<_>>>()?;
    EnsembleModel::new(trained, options.aggregation, train_config.seed)
}

pub const MANIFEST_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ManifestMember {
    /// Weight file relative to the manifest's directory.
    pub file: PathBuf,
    pub preset: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EnsembleManifest {
    pub version: u32,
    pub aggregation: Aggregation,
    pub tie_policy: String,
    pub master_seed: u64,
    #[serde(default)]
    pub config_hash: Option<String>,
    pub members: Vec<ManifestMember>,
}

/// File names and contents of a saved ensemble: `member_XX.ensw` weight
/// files followed by `manifest.json`, all relative to one directory.
pub fn ensemble_files(ensemble: &EnsembleModel, config_hash: Option<&str>) -> Result<Vec<(PathBuf, Vec<u8>)>> {
    let mut files = vec![];
    let mut members = vec![];
    for (i, m) in ensemble.members.iter().enumerate() {
        let file = PathBuf::from(format!("member_{i:02}.ensw"));
        files.push((file.clone(), write_weights(m)?));
        members.push(ManifestMember {
            file,
            preset: m.tag.clone(),
        });
    }
    let manifest = EnsembleManifest {
        version: MANIFEST_VERSION,
        aggregation: ensemble.aggregation,
        tie_policy: TIE_POLICY.into(),
        master_seed: ensemble.master_seed,
        config_hash: config_hash.map(str::to_string),
        members,
    };
    files.push((PathBuf::from("manifest.json"), serde_json::to_vec_pretty(&manifest)?));
    Ok(files)
}

/// Write [`ensemble_files`] into `dir` and return the manifest path.
pub fn save_ensemble(dir: &Path, ensemble: &EnsembleModel, config_hash: Option<&str>) -> Result<PathBuf> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, bytes) in ensemble_files(ensemble, config_hash)? {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| Error::io(&path, e))?;
    }
    Ok(dir.join("manifest.json"))
}

pub fn load_ensemble(manifest_path: &Path) -> Result<EnsembleModel> {
    let text = fs::read_to_string(manifest_path).map_err(|e| Error::io(manifest_path, e))?;
    let manifest: EnsembleManifest = serde_json::from_str(&text).map_err(|e| Error::Corrupt {
        path: manifest_path.to_path_buf(),
        reason: e.to_string(),
    })?;
    if manifest.version != MANIFEST_VERSION {
        return Err(Error::Version {
            path: manifest_path.to_path_buf(),
            found: manifest.version,
            expected: MANIFEST_VERSION,
        });
    }
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let members = manifest
        .members
        .iter()
        .map(|m| {
            let spec = load_weights(&dir.join(&m.file))?;
            if spec.tag != m.preset {
                return Err(Error::Corrupt {
                    path: dir.join(&m.file),
                    reason: format!("weight tag `{}` does not match manifest `{}`", spec.tag, m.preset),
                });
            }
            Ok(spec)
        })
        .collect::<Result<Vec<_>>>()?;
    EnsembleModel::new(members, manifest.aggregation, manifest.master_seed)
}
