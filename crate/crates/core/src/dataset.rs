//! Labeled datasets and subject-independent splits.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landmarks::{center_sequence, normalize_length, LandmarkSequence};
use crate::topology::SkeletonTopology;

/// Sequences with class labels, subject ids and stable per-sequence ids.
///
/// `sequence_ids` identify a sequence independently of its position, so
/// seeds derived from them survive reordering and subsetting.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledDataset {
    pub sequences: Vec<LandmarkSequence>,
    pub labels: Vec<usize>,
    pub class_names: Vec<String>,
    pub subject_ids: Vec<u32>,
    pub sequence_ids: Vec<u64>,
    pub topology: SkeletonTopology,
}

impl LabeledDataset {
    /// Assemble and validate a dataset; sequence ids default to `0..N`.
    pub fn new(
        sequences: Vec<LandmarkSequence>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        subject_ids: Vec<u32>,
        topology: SkeletonTopology,
    ) -> Result<Self> {
        let ids = (0..sequences.len() as u64).collect();
        Self::with_ids(sequences, labels, class_names, subject_ids, ids, topology)
    }

    pub fn with_ids(
        sequences: Vec<LandmarkSequence>,
        labels: Vec<usize>,
        class_names: Vec<String>,
        subject_ids: Vec<u32>,
        sequence_ids: Vec<u64>,
        topology: SkeletonTopology,
    ) -> Result<Self> {
        let d = Self {
            sequences,
            labels,
            class_names,
            subject_ids,
            sequence_ids,
            topology,
        };
        d.validate()?;
        Ok(d)
    }

    pub fn validate(&self) -> Result<()> {
        let n = self.sequences.len();
        if self.labels.len() != n || self.subject_ids.len() != n || self.sequence_ids.len() != n {
            return Err(Error::Dataset(format!(
                "length mismatch: {n} sequences, {} labels, {} subject ids, {} sequence ids",
                self.labels.len(),
                self.subject_ids.len(),
                self.sequence_ids.len()
            )));
        }
        self.topology.validate()?;
        let c = self.class_names.len();
        if let Some((i, l)) = self.labels.iter().enumerate().find(|(_, &l)| l >= c) {
            return Err(Error::Dataset(format!(
                "sequence {i} has label {l} but only {c} classes exist"
            )));
        }
        let j = self.topology.joint_count();
        if let Some((i, s)) = self
            .sequences
            .iter()
            .enumerate()
            .find(|(_, s)| s.joints() != j)
        {
            return Err(Error::Dataset(format!(
                "sequence {i} has {} joints, topology `{}` has {j}",
                s.joints(),
                self.topology.name
            )));
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.sequences.len()
    }

    pub fn is_empty(&self) -> bool {
        self.sequences.is_empty()
    }

    pub fn class_count(&self) -> usize {
        self.class_names.len()
    }

    /// Longest sequence length, in frames.
    pub fn max_len(&self) -> usize {
        self.sequences.iter().map(LandmarkSequence::len).max().unwrap_or(0)
    }

    pub fn subset(&self, indices: &[usize]) -> Self {
        Self {
            sequences: indices.iter().map(|&i| self.sequences[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            class_names: self.class_names.clone(),
            subject_ids: indices.iter().map(|&i| self.subject_ids[i]).collect(),
            sequence_ids: indices.iter().map(|&i| self.sequence_ids[i]).collect(),
            topology: self.topology.clone(),
        }
    }

    /// Append another dataset with the same classes and topology.
    pub fn concat(&self, other: &Self) -> Result<Self> {
        if other.class_names != self.class_names || other.topology != self.topology {
            return Err(Error::Dataset(
                "cannot concatenate datasets with different classes or topology".into(),
            ));
        }
        let mut out = self.clone();
        out.sequences.extend(other.sequences.iter().cloned());
        out.labels.extend(&other.labels);
        out.subject_ids.extend(&other.subject_ids);
        out.sequence_ids.extend(&other.sequence_ids);
        Ok(out)
    }

    /// Replace every sequence with `f(sequence)`, keeping all metadata.
    pub fn try_map(&self, f: impl Fn(usize, &LandmarkSequence) -> Result<LandmarkSequence>) -> Result<Self> {
        let sequences = self
            .sequences
            .iter()
            .enumerate()
            .map(|(i, s)| f(i, s))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            sequences,
            ..self.clone()
        })
    }

    pub fn subjects(&self) -> BTreeSet<u32> {
        self.subject_ids.iter().copied().collect()
    }

    /// Apply `pre` to every sequence.
    pub fn preprocess(&self, pre: &Preprocess) -> Result<Self> {
        if pre.is_identity() {
            return Ok(self.clone());
        }
        self.try_map(|_, s| pre.apply(s))
    }
}

/// Per-sequence input normalization applied ahead of a classifier.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Preprocess {
    /// Center-crop or zero-pad to this many frames.
    pub length: Option<usize>,
    /// Subtract the mean over real frames and joints.
    pub center: bool,
}

impl Preprocess {
    pub fn is_identity(&self) -> bool {
        self.length.is_none() && !self.center
    }

    pub fn apply(&self, seq: &LandmarkSequence) -> Result<LandmarkSequence> {
        let s = match self.length {
            Some(n) => normalize_length(seq, n)?,
            None => seq.clone(),
        };
        if self.center {
            center_sequence(&s)
        } else {
            Ok(s)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum SplitSpec {
    BySubject {
        train: Vec<u32>,
        #[serde(default)]
        validation: Vec<u32>,
        #[serde(default)]
        test: Vec<u32>,
    },
    ByIndex {
        train: Vec<usize>,
        #[serde(default)]
        validation: Vec<usize>,
        #[serde(default)]
        test: Vec<usize>,
    },
}

/// Index lists into a dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Splits {
    pub train: Vec<usize>,
    pub validation: Vec<usize>,
    pub test: Vec<usize>,
}

impl SplitSpec {
    /// Subjects `1..=a` train, the next `b` validate, the next `c` test.
    pub fn subject_ranges(a: u32, b: u32, c: u32) -> Self {
        SplitSpec::BySubject {
            train: (1..=a).collect(),
            validation: (a + 1..=a + b).collect(),
            test: (a + b + 1..=a + b + c).collect(),
        }
    }

    fn check_disjoint<T: Ord + Copy + std::fmt::Debug>(sets: [&[T]; 3]) -> Result<()> {
        let mut seen = BTreeSet::new();
        for s in sets {
            for &x in s {
                if !seen.insert(x) {
                    return Err(Error::Dataset(format!("{x:?} appears in more than one split")));
                }
            }
        }
        Ok(())
    }
}

pub fn make_splits(dataset: &LabeledDataset, spec: &SplitSpec) -> Result<Splits> {
    match spec {
        SplitSpec::BySubject {
            train,
            validation,
            test,
        } => {
            SplitSpec::check_disjoint([train, validation, test])?;
            let present = dataset.subjects();
            let unknown: Vec<u32> = train
                .iter()
                .chain(validation)
                .chain(test)
                .copied()
                .filter(|s| !present.contains(s))
                .collect();
            if !unknown.is_empty() {
                return Err(Error::UnknownSubjects(unknown));
            }
            let pick = |set: &[u32]| -> Vec<usize> {
                (0..dataset.len())
                    .filter(|&i| set.contains(&dataset.subject_ids[i]))
                    .collect()
            };
            Ok(Splits {
                train: pick(train),
                validation: pick(validation),
                test: pick(test),
            })
        }
        SplitSpec::ByIndex {
            train,
            validation,
            test,
        } => {
            SplitSpec::check_disjoint([train, validation, test])?;
            if let Some(&i) = train
                .iter()
                .chain(validation)
                .chain(test)
                .find(|&&i| i >= dataset.len())
            {
                return Err(Error::Dataset(format!(
                    "split index {i} out of range for {} sequences",
                    dataset.len()
                )));
            }
            Ok(Splits {
                train: train.clone(),
                validation: validation.clone(),
                test: test.clone(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::landmarks::Point;

    fn tiny(subjects: &[u32]) -> LabeledDataset {
        let seqs = subjects
            .iter()
            .map(|&s| LandmarkSequence::single_frame(vec![Point::new(s as f64, 0.0, 0.0)]).unwrap())
            .collect();
        LabeledDataset::new(
            seqs,
            vec![0; subjects.len()],
            vec!["a".into()],
            subjects.to_vec(),
            SkeletonTopology::plain(1),
        )
        .unwrap()
    }

    #[test]
    fn by_subject_basic() {
        let d = tiny(&[1, 1, 2, 3]);
        let spec = SplitSpec::BySubject {
            train: vec![1],
            validation: vec![2],
            test: vec![3],
        };
        let s = make_splits(&d, &spec).unwrap();
        assert_eq!(s.train, vec![0, 1]);
        assert_eq!(s.validation, vec![2]);
        assert_eq!(s.test, vec![3]);
    }

    #[test]
    fn empty_test_set() {
        let d = tiny(&[1, 2]);
        let spec = SplitSpec::BySubject {
            train: vec![1],
            validation: vec![2],
            test: vec![],
        };
        assert!(make_splits(&d, &spec).unwrap().test.is_empty());
    }

    #[test]
    fn unknown_subject_is_listed() {
        let d = tiny(&[1, 2]);
        let spec = SplitSpec::BySubject {
            train: vec![1],
            validation: vec![],
            test: vec![9, 7],
        };
        match make_splits(&d, &spec) {
            Err(Error::UnknownSubjects(v)) => assert_eq!(v, vec![9, 7]),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn overlapping_subjects_rejected() {
        let d = tiny(&[1, 2]);
        let spec = SplitSpec::BySubject {
            train: vec![1, 2],
            validation: vec![2],
            test: vec![],
        };
        assert!(make_splits(&d, &spec).is_err());
    }

    #[test]
    fn signum_shaped_split_sizes_follow_subject_counts() {
        // 25 signers, signer s contributes (s % 3) + 1 sequences
        let mut subjects = vec![];
        for s in 1..=25u32 {
            subjects.extend(std::iter::repeat_n(s, (s % 3) as usize + 1));
        }
        let d = tiny(&subjects);
        let s = make_splits(&d, &SplitSpec::subject_ranges(14, 4, 7)).unwrap();
        let count = |r: std::ops::RangeInclusive<u32>| -> usize { r.map(|s| (s % 3) as usize + 1).sum() };
        assert_eq!(s.train.len(), count(1..=14));
        assert_eq!(s.validation.len(), count(15..=18));
        assert_eq!(s.test.len(), count(19..=25));
        assert_eq!(s.train.len() + s.validation.len() + s.test.len(), d.len());
    }

    #[test]
    fn dataset_validation() {
        let seq = LandmarkSequence::single_frame(vec![Point::zeros()]).unwrap();
        let bad_label = LabeledDataset::new(
            vec![seq.clone()],
            vec![1],
            vec!["a".into()],
            vec![1],
            SkeletonTopology::plain(1),
        );
        assert!(bad_label.is_err());
        let bad_joints = LabeledDataset::new(
            vec![seq],
            vec![0],
            vec!["a".into()],
            vec![1],
            SkeletonTopology::plain(2),
        );
        assert!(bad_joints.is_err());
    }
}
