//! Geometry-aware augmentation of landmark sequences.

pub mod ops;
pub mod presets;
mod spec;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

pub use spec::{
    AugmentationKind, AugmentationSpec, DepthSchedule, Direction, ParamRange, Ramp, RotationAxis,
    ShiftMode,
};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::genaug::{self, GenericAugSpec};
use crate::landmarks::LandmarkSequence;
use crate::rng::{derive_seed, rng_from_seed, stream, Rng};
use crate::topology::SkeletonTopology;

/// Either a geometry-aware or a generic transformation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Augmentation {
    Geometric(AugmentationSpec),
    Generic(GenericAugSpec),
}

impl Augmentation {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Geometric(s) => s.kind().label(),
            Self::Generic(g) => g.label(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::Geometric(s) => s.validate(),
            Self::Generic(g) => g.validate(),
        }
    }

    pub fn apply(
        &self,
        seq: &LandmarkSequence,
        topo: &SkeletonTopology,
        rng: &mut Rng,
    ) -> Result<LandmarkSequence> {
        match self {
            Self::Geometric(s) => s.apply(seq, topo, rng),
            Self::Generic(g) => g.apply(seq, rng),
        }
    }
}

impl From<AugmentationSpec> for Augmentation {
    fn from(s: AugmentationSpec) -> Self {
        Self::Geometric(s)
    }
}

impl From<GenericAugSpec> for Augmentation {
    fn from(g: GenericAugSpec) -> Self {
        Self::Generic(g)
    }
}

/// Resolve a preset name from either catalogue (`viewrot.yaw`, `generic.jitter`, ...).
pub fn resolve(name: &str) -> Result<Augmentation> {
    if let Ok(spec) = presets::lookup(name) {
        return Ok(spec.into());
    }
    genaug::catalogue()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, g)| g.into())
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// An augmentation together with the name it is reported under.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NamedAugmentation {
    pub name: String,
    pub augmentation: Augmentation,
}

impl NamedAugmentation {
    pub fn new(name: impl Into<String>, augmentation: impl Into<Augmentation>) -> Self {
        Self {
            name: name.into(),
            augmentation: augmentation.into(),
        }
    }

    /// Look up a catalogue preset by name.
    pub fn preset(name: &str) -> Result<Self> {
        Ok(Self::new(name, resolve(name)?))
    }
}

/// Apply `spec` with parameters drawn from a generator seeded by `seed`.
///
/// Identical `(seq, spec, seed)` triples give bit-identical output.
pub fn apply_augmentation(
    seq: &LandmarkSequence,
    topo: &SkeletonTopology,
    spec: &AugmentationSpec,
    seed: u64,
) -> Result<LandmarkSequence> {
    spec.apply(seq, topo, &mut rng_from_seed(seed))
}

/// How a specialist's training set is assembled from the originals.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DatasetMode {
    /// Every sequence is replaced by its transformed copy.
    Replace,
    /// Originals followed by one transformed copy of each.
    #[default]
    Append,
}

/// Seed used to transform the sequence with stable id `sequence_id`.
pub fn sequence_seed(master_seed: u64, sequence_id: u64) -> u64 {
    derive_seed(master_seed, &[stream::AUGMENT, sequence_id])
}

/// Transform a whole dataset with one augmentation.
///
/// Each sequence is seeded from `(master_seed, sequence_id)`, so the transform
/// a sequence receives does not depend on its position in the dataset.
pub fn build_specialist_dataset(
    dataset: &LabeledDataset,
    spec: &Augmentation,
    master_seed: u64,
    mode: DatasetMode,
) -> Result<LabeledDataset> {
    spec.validate()?;
    let sequences = dataset
        .sequences
        .par_iter()
        .zip(dataset.sequence_ids.par_iter())
        .map(|(seq, &id)| {
            spec.apply(seq, &dataset.topology, &mut rng_from_seed(sequence_seed(master_seed, id)))
        })
        .collect::<Result<Vec<_>>>()?;
    let transformed = LabeledDataset {
        sequences,
        ..dataset.clone()
    };
    match mode {
        DatasetMode::Replace => Ok(transformed),
        DatasetMode::Append => dataset.concat(&transformed),
    }
}
