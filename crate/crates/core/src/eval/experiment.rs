use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::stats::{
    accuracy, error_set, jaccard_matrix, mean_ci, subset_sweep, summarize_jaccard, JaccardSummary,
    MeanCi, MemberOutputs, SweepPoint,
};
use crate::augment::NamedAugmentation;
use crate::dataset::{LabeledDataset, Splits};
use crate::ensemble::{
    train_bagging, train_ensaug, train_generalist, Aggregation, Bootstrap, EnsembleOptions,
};
use crate::error::{Error, Result};
use crate::model::{train, ModelConfig, TrainConfig};
use crate::rng::{derive_seed, stream};

/// A training regime compared in an experiment.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Method {
    Baseline,
    Generalist,
    Bagging,
    EnsAug,
    /// Every ensemble member reported on its own.
    Specialists,
    /// One ensemble member, by preset name.
    Specialist(String),
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Baseline => f.write_str("baseline"),
            Method::Generalist => f.write_str("generalist"),
            Method::Bagging => f.write_str("bagging"),
            Method::EnsAug => f.write_str("ensaug"),
            Method::Specialists => f.write_str("specialists"),
            Method::Specialist(n) => write!(f, "specialist:{n}"),
        }
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "baseline" => Method::Baseline,
            "generalist" => Method::Generalist,
            "bagging" => Method::Bagging,
            "ensaug" => Method::EnsAug,
            "specialists" => Method::Specialists,
            other => match other.strip_prefix("specialist:") {
                Some(name) if !name.is_empty() => Method::Specialist(name.to_string()),
                _ => {
                    return Err(Error::Config(format!(
                        "unknown method `{other}` (expected baseline, generalist, bagging, ensaug, specialists or specialist:<preset>)"
                    )))
                }
            },
        })
    }
}

impl TryFrom<String> for Method {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Method> for String {
    fn from(m: Method) -> Self {
        m.to_string()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub runs: usize,
    pub master_seed: u64,
    pub methods: Vec<Method>,
    /// Preset names, one specialist each; the generalist draws from the same list.
    pub augmentations: Vec<String>,
    /// Bagging ensemble size; defaults to the number of augmentations.
    #[serde(default)]
    pub bagging_members: Option<usize>,
    pub model: ModelConfig,
    /// Its `seed` is replaced by each run's derived seed.
    pub train: TrainConfig,
    #[serde(default)]
    pub ensemble: EnsembleOptions,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
}

fn default_confidence() -> f64 {
    0.95
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 || self.methods.is_empty() {
            return Err(Error::Config("an experiment needs at least one run and one method".into()));
        }
        self.model.validate()?;
        self.train.validate()?;
        for m in &self.methods {
            if let Method::Specialist(n) = m {
                if !self.augmentations.contains(n) {
                    return Err(Error::Config(format!(
                        "specialist `{n}` is not in the augmentation list"
                    )));
                }
            }
        }
        let needs_augs = self.methods.iter().any(|m| !matches!(m, Method::Baseline | Method::Bagging));
        if needs_augs && self.augmentations.is_empty() {
            return Err(Error::Config("the requested methods need at least one augmentation".into()));
        }
        if self.bagging_members == Some(0) {
            return Err(Error::Config("bagging_members must be positive".into()));
        }
        Ok(())
    }

    /// Seed of run `r`.
    pub fn run_seed(&self, r: usize) -> u64 {
        derive_seed(self.master_seed, &[stream::RUN, r as u64])
    }
}

/// Cached test-set outputs of one ensemble.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionCache {
    pub truth: Vec<usize>,
    pub member_names: Vec<String>,
    pub member_labels: Vec<Vec<usize>>,
    pub member_probs: Vec<Vec<Vec<f64>>>,
}

impl PredictionCache {
    pub fn outputs(&self) -> MemberOutputs<'_> {
        MemberOutputs {
            labels: &self.member_labels,
            probs: &self.member_probs,
        }
    }

    pub fn error_sets(&self) -> Vec<BTreeSet<usize>> {
        self.member_labels.iter().map(|l| error_set(l, &self.truth)).collect()
    }
}

/// Diversity analysis of one ensemble's cached predictions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ablation {
    pub member_names: Vec<String>,
    pub jaccard: Vec<Vec<Option<f64>>>,
    pub jaccard_summary: Option<JaccardSummary>,
    pub sweep: Vec<SweepPoint>,
}

pub fn ablate(cache: &PredictionCache, aggregation: Aggregation) -> Result<Ablation> {
    let jaccard = jaccard_matrix(&cache.error_sets());
    Ok(Ablation {
        member_names: cache.member_names.clone(),
        jaccard_summary: summarize_jaccard(&jaccard),
        jaccard,
        sweep: subset_sweep(cache.outputs(), &cache.truth, aggregation, None)?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub run: usize,
    pub seed: u64,
    /// `(method label, test accuracy)` in report order.
    pub accuracies: Vec<(String, f64)>,
    pub ablation: Option<Ablation>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MethodSummary {
    pub method: String,
    pub accuracies: Vec<f64>,
    pub summary: MeanCi,
}

/// Per-`k` sweep averaged over runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SweepSummary {
    pub k: usize,
    /// Over runs, of each run's mean-over-subsets accuracy.
    pub accuracy: MeanCi,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub config_hash: Option<String>,
    pub ci_method: String,
    pub methods: Vec<MethodSummary>,
    pub runs: Vec<RunResult>,
    /// Pairwise specialist Jaccard indices averaged over runs where defined.
    pub mean_jaccard: Option<Vec<Vec<Option<f64>>>>,
    pub jaccard_summary: Option<JaccardSummary>,
    pub sweep: Vec<SweepSummary>,
    /// Member predictions per run, for later ablation.
    #[serde(skip)]
    pub caches: Vec<PredictionCache>,
}

impl EvalReport {
    pub fn method(&self, label: &str) -> Option<&MethodSummary> {
        self.methods.iter().find(|m| m.method == label)
    }
}

/// Train one run of every requested method on `splits` and score it on the test split.
pub fn run_once(
    data: &LabeledDataset,
    splits: &Splits,
    config: &ExperimentConfig,
    run: usize,
) -> Result<(RunResult, Option<PredictionCache>)> {
    let train_split = data.subset(&splits.train);
    let validation = data.subset(&splits.validation);
    let test = data.subset(&splits.test);
    if test.is_empty() {
        return Err(Error::Config("the test split is empty".into()));
    }
    let seed = config.run_seed(run);
    let tc = TrainConfig {
        seed,
        ..config.train.clone()
    };
    let augs = config
        .augmentations
        .iter()
        .map(|n| NamedAugmentation::preset(n))
        .collect::<Result<Vec<_>>>()?;
    let truth = &test.labels;
    let score = |labels: &[usize]| accuracy(labels, truth);

    let needs_members = config
        .methods
        .iter()
        .any(|m| matches!(m, Method::EnsAug | Method::Specialists | Method::Specialist(_)));
    let ensemble = if needs_members {
        Some(train_ensaug(&train_split, &validation, &augs, &config.model, &tc, config.ensemble)?)
    } else {
        None
    };
    let prediction = ensemble.as_ref().map(|e| e.predict(&test.sequences)).transpose()?;

    let mut accuracies = vec![];
    for method in &config.methods {
        match method {
            Method::Baseline => {
                let m = train(&train_split, &validation, &config.model, &tc)?;
                accuracies.push((method.to_string(), score(&m.predict(&test.sequences)?.0)?));
            }
            Method::Generalist => {
                let m = train_generalist(&train_split, &validation, &augs, &config.model, &tc)?;
                accuracies.push((method.to_string(), score(&m.predict(&test.sequences)?.0)?));
            }
            Method::Bagging => {
                let members = config.bagging_members.unwrap_or(augs.len().max(1));
                let e = train_bagging(
                    &train_split,
                    &validation,
                    members,
                    &config.model,
                    &tc,
                    config.ensemble,
                    Bootstrap::Resample,
                )?;
                accuracies.push((method.to_string(), score(&e.predict(&test.sequences)?.labels)?));
            }
            Method::EnsAug => {
                let p = prediction.as_ref().expect("members trained");
                accuracies.push((method.to_string(), score(&p.labels)?));
            }
            Method::Specialists => {
                let p = prediction.as_ref().expect("members trained");
                for (a, labels) in augs.iter().zip(&p.member_labels) {
                    accuracies.push((format!("specialist:{}", a.name), score(labels)?));
                }
            }
            Method::Specialist(name) => {
                let p = prediction.as_ref().expect("members trained");
                let i = augs.iter().position(|a| &a.name == name).expect("validated");
                accuracies.push((method.to_string(), score(&p.member_labels[i])?));
            }
        }
    }

    let cache = prediction.map(|p| PredictionCache {
        truth: truth.clone(),
        member_names: augs.iter().map(|a| a.name.clone()).collect(),
        member_labels: p.member_labels,
        member_probs: p.member_probs,
    });
    let ablation = cache.as_ref().map(|c| ablate(c, config.ensemble.aggregation)).transpose()?;
    Ok((
        RunResult {
            run,
            seed,
            accuracies,
            ablation,
        },
        cache,
    ))
}

/// Repeat [`run_once`] for every run and aggregate.
pub fn run_experiment(data: &LabeledDataset, splits: &Splits, config: &ExperimentConfig) -> Result<EvalReport> {
    config.validate()?;
    let mut runs = vec![];
    let mut caches = vec![];
    for r in 0..config.runs {
        let (res, cache) = run_once(data, splits, config, r)?;
        runs.push(res);
        caches.extend(cache);
    }
    summarize(runs, caches, config.confidence)
}

/// Aggregate per-run results into a report.
pub fn summarize(runs: Vec<RunResult>, caches: Vec<PredictionCache>, confidence: f64) -> Result<EvalReport> {
    let first = runs.first().ok_or_else(|| Error::param("no runs to summarize"))?;
    let labels: Vec<String> = first.accuracies.iter().map(|(l, _)| l.clone()).collect();
    let methods = labels
        .iter()
        .enumerate()
        .map(|(i, label)| {
            let accs: Vec<f64> = runs.iter().map(|r| r.accuracies[i].1).collect();
            Ok(MethodSummary {
                method: label.clone(),
                summary: mean_ci(&accs, confidence)?,
                accuracies: accs,
            })
        })
        .collect::<Result<Vec<_>>>()?;

    let ablations: Vec<&Ablation> = runs.iter().filter_map(|r| r.ablation.as_ref()).collect();
    let (mean_jaccard, jaccard_summary, sweep) = match ablations.first() {
        None => (None, None, vec![]),
        Some(a0) => {
            let m = a0.member_names.len();
            let mean: Vec<Vec<Option<f64>>> = (0..m)
                .map(|i| {
                    (0..m)
                        .map(|j| {
                            let vals: Vec<f64> = ablations.iter().filter_map(|a| a.jaccard[i][j]).collect();
                            (!vals.is_empty()).then(|| vals.iter().sum::<f64>() / vals.len() as f64)
                        })
                        .collect()
                })
                .collect();
            let sweep = (0..a0.sweep.len())
                .map(|k| {
                    let vals: Vec<f64> = ablations.iter().map(|a| a.sweep[k].accuracy.mean).collect();
                    Ok(SweepSummary {
                        k: k + 1,
                        accuracy: mean_ci(&vals, confidence)?,
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            (Some(mean.clone()), summarize_jaccard(&mean), sweep)
        }
    };
    Ok(EvalReport {
        config_hash: None,
        ci_method: format!("two-sided Student-t, {:.0}% confidence", confidence * 100.0),
        methods,
        runs,
        mean_jaccard,
        jaccard_summary,
        sweep,
        caches,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn method_names_round_trip() {
        for s in ["baseline", "generalist", "bagging", "ensaug", "specialists", "specialist:viewrot.yaw"] {
            assert_eq!(s.parse::<Method>().unwrap().to_string(), s);
        }
        assert!("specialist:".parse::<Method>().is_err());
        assert!("magic".parse::<Method>().is_err());
    }

    #[test]
    fn single_run_has_undefined_interval() {
        let run = RunResult {
            run: 0,
            seed: 1,
            accuracies: vec![("baseline".into(), 0.75)],
            ablation: None,
        };
        let r = summarize(vec![run], vec![], 0.95).unwrap();
        assert_eq!(r.methods[0].summary.mean, 0.75);
        assert_eq!(r.methods[0].summary.half_width, None);
    }
}
