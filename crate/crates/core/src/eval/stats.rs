use std::collections::BTreeSet;

use itertools::Itertools;
use rand::seq::index::sample;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ContinuousCDF, StudentsT};

use crate::ensemble::{hard_vote, soft_vote, Aggregation};
use crate::error::{Error, Result};
use crate::rng::derive_rng;

/// Fraction of positions where `predicted` equals `truth`.
pub fn accuracy(predicted: &[usize], truth: &[usize]) -> Result<f64> {
    if predicted.is_empty() || predicted.len() != truth.len() {
        return Err(Error::param(format!(
            "accuracy needs equal non-empty inputs, got {} and {}",
            predicted.len(),
            truth.len()
        )));
    }
    let hits = predicted.iter().zip(truth).filter(|(p, t)| p == t).count();
    Ok(hits as f64 / truth.len() as f64)
}

/// Sample mean with a Student-t confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MeanCi {
    pub mean: f64,
    /// `None` when fewer than two values were given.
    pub half_width: Option<f64>,
    pub n: usize,
    pub confidence: f64,
}

/// Two-sided Student-t quantile `t_{(1+confidence)/2, dof}`.
pub fn t_quantile(confidence: f64, dof: usize) -> f64 {
    StudentsT::new(0.0, 1.0, dof as f64)
        .expect("positive degrees of freedom")
        .inverse_cdf(0.5 + confidence / 2.0)
}

pub fn mean_ci(values: &[f64], confidence: f64) -> Result<MeanCi> {
    if values.is_empty() {
        return Err(Error::param("mean of an empty sample"));
    }
    if !(0.0..1.0).contains(&confidence) || confidence == 0.0 {
        return Err(Error::param(format!("confidence {confidence} outside (0, 1)")));
    }
    let n = values.len();
    let mean = values.iter().sum::<f64>() / n as f64;
    let half_width = (n >= 2).then(|| {
        let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1) as f64;
        t_quantile(confidence, n - 1) * var.sqrt() / (n as f64).sqrt()
    });
    Ok(MeanCi {
        mean,
        half_width,
        n,
        confidence,
    })
}

/// Indices where the prediction is wrong.
pub fn error_set(predicted: &[usize], truth: &[usize]) -> BTreeSet<usize> {
    predicted
        .iter()
        .zip(truth)
        .enumerate()
        .filter(|(_, (p, t))| p != t)
        .map(|(i, _)| i)
        .collect()
}

/// `|a ∩ b| / |a ∪ b|`, undefined (`None`) when both sets are empty.
pub fn jaccard(a: &BTreeSet<usize>, b: &BTreeSet<usize>) -> Option<f64> {
    let union = a.union(b).count();
    (union > 0).then(|| a.intersection(b).count() as f64 / union as f64)
}

pub fn jaccard_matrix(sets: &[BTreeSet<usize>]) -> Vec<Vec<Option<f64>>> {
    sets.iter()
        .map(|a| sets.iter().map(|b| jaccard(a, b)).collect())
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JaccardSummary {
    pub min: f64,
    pub mean: f64,
    pub max: f64,
    /// Off-diagonal pairs with a defined index.
    pub pairs: usize,
    pub undefined_pairs: usize,
}

/// Min/mean/max over distinct pairs, skipping undefined entries.
pub fn summarize_jaccard(matrix: &[Vec<Option<f64>>]) -> Option<JaccardSummary> {
    let mut vals = vec![];
    let mut undefined = 0;
    for i in 0..matrix.len() {
        for j in i + 1..matrix.len() {
            match matrix[i][j] {
                Some(v) => vals.push(v),
                None => undefined += 1,
            }
        }
    }
    if vals.is_empty() {
        return None;
    }
    Some(JaccardSummary {
        min: vals.iter().cloned().fold(f64::INFINITY, f64::min),
        mean: vals.iter().sum::<f64>() / vals.len() as f64,
        max: vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max),
        pairs: vals.len(),
        undefined_pairs: undefined,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepPoint {
    pub k: usize,
    pub subsets: usize,
    pub accuracy: MeanCi,
}

/// Largest member count swept exhaustively.
pub const MAX_EXHAUSTIVE_MEMBERS: usize = 20;

/// Cached outputs of ensemble members on one test set.
#[derive(Debug, Clone, Copy)]
pub struct MemberOutputs<'a> {
    /// `labels[i][n]`: member `i`'s label for input `n`.
    pub labels: &'a [Vec<usize>],
    /// `probs[i][n]`: member `i`'s probability vector for input `n`.
    pub probs: &'a [Vec<Vec<f64>>],
}

impl MemberOutputs<'_> {
    pub fn members(&self) -> usize {
        self.labels.len()
    }

    /// Aggregated labels of the members listed in `subset`.
    pub fn aggregate(&self, subset: &[usize], aggregation: Aggregation) -> Vec<usize> {
        let n = self.labels.first().map_or(0, Vec::len);
        (0..n)
            .map(|x| {
                let probs: Vec<Vec<f64>> = subset.iter().map(|&i| self.probs[i][x].clone()).collect();
                match aggregation {
                    Aggregation::HardVote => {
                        let ls: Vec<usize> = subset.iter().map(|&i| self.labels[i][x]).collect();
                        hard_vote(&ls, &probs)
                    }
                    Aggregation::SoftVote => soft_vote(&probs),
                }
            })
            .collect()
    }
}

/// Mean accuracy over member subsets of every size `k = 1..=M`.
///
/// All `C(M, k)` subsets are enumerated when `M <= 20`. Larger ensembles are
/// refused unless `sample = Some((count, seed))`, which draws `count` random
/// subsets per size instead.
pub fn subset_sweep(
    outputs: MemberOutputs<'_>,
    truth: &[usize],
    aggregation: Aggregation,
    sample_subsets: Option<(usize, u64)>,
) -> Result<Vec<SweepPoint>> {
    let m = outputs.members();
    if m == 0 {
        return Err(Error::param("subset sweep needs at least one member"));
    }
    if m > MAX_EXHAUSTIVE_MEMBERS && sample_subsets.is_none() {
        return Err(Error::param(format!(
            "{m} members exceed the exhaustive sweep limit of {MAX_EXHAUSTIVE_MEMBERS}; enable subset sampling"
        )));
    }
    (1..=m)
        .map(|k| {
            let subsets: Vec<Vec<usize>> = match sample_subsets {
                Some((count, seed)) if m > MAX_EXHAUSTIVE_MEMBERS => {
                    let mut rng = derive_rng(seed, &[k as u64]);
                    (0..count).map(|_| sample(&mut rng, m, k).into_vec()).collect()
                }
                _ => (0..m).combinations(k).collect(),
            };
            let accs = subsets
                .iter()
                .map(|s| accuracy(&outputs.aggregate(s, aggregation), truth))
                .collect::<Result<Vec<_>>>()?;
            Ok(SweepPoint {
                k,
                subsets: subsets.len(),
                accuracy: mean_ci(&accs, 0.95)?,
            })
        })
        .collect()
}
