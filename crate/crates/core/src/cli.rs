//! Run configuration and the command implementations behind the `ensaug`
//! binary.
//!
//! Every command reads a [`RunConfig`], computes all of its outputs in memory
//! and then writes them under `<out>/<command>/` with stable names. Existing
//! files are never replaced unless `force` is set, and every artifact carries
//! the configuration hash.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::augment::presets::{self, DEFAULT_SPECIALISTS};
use crate::augment::{build_specialist_dataset, DatasetMode, NamedAugmentation};
use crate::dataio::{decode_dataset, encode_dataset, generate_synthetic, import_csv, CsvSchema, SyntheticSpec};
use crate::dataset::{make_splits, LabeledDataset, Preprocess, SplitSpec, Splits};
use crate::ensemble::{
    ensemble_files, load_ensemble, train_bagging, train_ensaug, train_generalist, train_specialist,
    Bootstrap, EnsembleModel, EnsembleOptions,
};
use crate::error::{Error, Result};
use crate::eval::plot::trajectory_comparison;
use crate::eval::{
    ablate, ablation_files, accuracy, jaccard_csv, report_files, run_experiment, summarize, sweep_csv,
    text_table, Ablation, EvalReport, ExperimentConfig, Method, PredictionCache, RunResult,
};
use crate::genaug;
use crate::model::{train, write_weights, Arch, ModelConfig, Pooling, TrainConfig, TrainedSpecialist};
use crate::topology::SkeletonTopology;

pub const CONFIG_VERSION: u32 = 1;
/// Environment variable that overrides the output root.
pub const OUT_ENV: &str = "ENSAUG_OUT";

/// Where the sequences come from. `path` wins over `csv`, which wins over
/// `synthetic`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
#[derive(Default)]
pub struct DatasetSection {
    /// A dataset container written by `synth` or `augment`.
    #[serde(default)]
    pub path: Option<PathBuf>,
    #[serde(default)]
    pub csv: Option<CsvSection>,
    #[serde(default)]
    pub synthetic: SyntheticSpec,
    /// Generator seed; defaults to the run seed.
    #[serde(default)]
    pub synthetic_seed: Option<u64>,
}


#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CsvSection {
    pub dir: PathBuf,
    /// Topology preset name (`hands42`, `body20`, ...).
    pub topology: String,
    #[serde(default)]
    pub schema: CsvSchema,
}

/// Classifier shape; input width, class count and length come from the data.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ModelSection {
    pub arch: Arch,
    pub model_dim: Option<usize>,
    pub encoder_layers: usize,
    pub attention_heads: usize,
    pub ff_dim: usize,
    pub dropout: f64,
    pub pooling: Pooling,
}

impl Default for ModelSection {
    fn default() -> Self {
        Self {
            arch: Arch::LinearPooled,
            model_dim: Some(32),
            encoder_layers: 1,
            attention_heads: 2,
            ff_dim: 32,
            dropout: 0.0,
            pooling: Pooling::MeanOverTime,
        }
    }
}

impl ModelSection {
    pub fn resolve(&self, input_dim: usize, class_count: usize, max_len: usize) -> ModelConfig {
        match self.arch {
            Arch::LinearPooled => ModelConfig {
                pooling: self.pooling,
                dropout: self.dropout,
                model_dim: self.model_dim,
                ..ModelConfig::linear_pooled(input_dim, class_count, self.model_dim.unwrap_or(32))
            },
            Arch::Transformer => ModelConfig {
                arch: Arch::Transformer,
                input_dim,
                model_dim: self.model_dim,
                encoder_layers: self.encoder_layers,
                attention_heads: self.attention_heads,
                ff_dim: self.ff_dim,
                dropout: self.dropout,
                pooling: self.pooling,
                class_count,
                max_len,
            },
        }
    }
}

/// Optimizer settings; the seed is derived from the run seed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct TrainSection {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    pub patience: usize,
    pub preprocess: Preprocess,
}

impl Default for TrainSection {
    fn default() -> Self {
        Self {
            learning_rate: 0.01,
            batch_size: 16,
            max_epochs: 60,
            patience: 15,
            preprocess: Preprocess {
                length: None,
                center: true,
            },
        }
    }
}

impl TrainSection {
    pub fn with_seed(&self, seed: u64) -> TrainConfig {
        TrainConfig {
            learning_rate: self.learning_rate,
            batch_size: self.batch_size,
            max_epochs: self.max_epochs,
            patience: self.patience,
            seed,
            preprocess: self.preprocess,
        }
    }
}

/// Everything a command needs, read from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub version: u32,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_output_dir")]
    pub output_dir: PathBuf,
    #[serde(default)]
    pub dataset: DatasetSection,
    #[serde(default = "default_split")]
    pub split: SplitSpec,
    #[serde(default = "default_augmentations")]
    pub augmentations: Vec<String>,
    #[serde(default = "default_methods")]
    pub methods: Vec<Method>,
    #[serde(default = "default_runs")]
    pub runs: usize,
    #[serde(default)]
    pub bagging_members: Option<usize>,
    #[serde(default)]
    pub model: ModelSection,
    #[serde(default)]
    pub train: TrainSection,
    #[serde(default)]
    pub ensemble: EnsembleOptions,
    #[serde(default = "default_confidence")]
    pub confidence: f64,
    /// What the `train` command fits: `baseline`, `generalist`, `bagging` or
    /// `specialist:<preset>`.
    #[serde(default = "default_train_method")]
    pub train_method: Method,
}

fn default_output_dir() -> PathBuf {
    PathBuf::from("ensaug-out")
}

fn default_split() -> SplitSpec {
    SplitSpec::subject_ranges(5, 2, 3)
}

fn default_augmentations() -> Vec<String> {
    DEFAULT_SPECIALISTS.iter().map(|s| s.to_string()).collect()
}

fn default_methods() -> Vec<Method> {
    vec![Method::Baseline, Method::Generalist, Method::Bagging, Method::Specialists, Method::EnsAug]
}

fn default_runs() -> usize {
    5
}

fn default_confidence() -> f64 {
    0.95
}

fn default_train_method() -> Method {
    Method::Baseline
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            version: CONFIG_VERSION,
            seed: 0,
            output_dir: default_output_dir(),
            dataset: DatasetSection::default(),
            split: default_split(),
            augmentations: default_augmentations(),
            methods: default_methods(),
            runs: default_runs(),
            bagging_members: None,
            model: ModelSection::default(),
            train: TrainSection::default(),
            ensemble: EnsembleOptions::default(),
            confidence: default_confidence(),
            train_method: default_train_method(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_toml(&text).map_err(|e| match e {
            Error::Config(m) => Error::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn to_toml(&self) -> Result<String> {
        toml::to_string_pretty(self).map_err(|e| Error::Config(e.to_string()))
    }

    /// Schema checks that need no data.
    pub fn validate(&self) -> Result<()> {
        if self.version != CONFIG_VERSION {
            return Err(Error::Config(format!(
                "config version {} is not supported (expected {CONFIG_VERSION})",
                self.version
            )));
        }
        if self.runs == 0 {
            return Err(Error::Config("runs must be at least 1".into()));
        }
        if self.methods.is_empty() {
            return Err(Error::Config("methods must not be empty".into()));
        }
        if !(self.confidence > 0.0 && self.confidence < 1.0) {
            return Err(Error::Config(format!("confidence {} outside (0, 1)", self.confidence)));
        }
        for name in &self.augmentations {
            NamedAugmentation::preset(name).map_err(|_| {
                Error::Config(format!("unknown augmentation preset `{name}` (see `ensaug list-augs`)"))
            })?;
        }
        if let Method::EnsAug | Method::Specialists = self.train_method {
            return Err(Error::Config(format!(
                "train_method `{}` is an ensemble; use the `ensemble` command",
                self.train_method
            )));
        }
        self.train.with_seed(0).validate()?;
        self.dataset.synthetic.validate()
    }

    /// SHA-256 over the canonical JSON form, excluding the output location.
    pub fn hash(&self) -> Result<String> {
        let mut canonical = serde_json::to_value(self)?;
        if let Some(map) = canonical.as_object_mut() {
            map.remove("output_dir");
        }
        let digest = Sha256::digest(serde_json::to_string(&canonical)?.as_bytes());
        Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
    }

    pub fn augmentation_list(&self) -> Result<Vec<NamedAugmentation>> {
        self.augmentations.iter().map(|n| NamedAugmentation::preset(n)).collect()
    }

    /// The experiment protocol for a dataset of this shape.
    pub fn experiment(&self, data: &LabeledDataset) -> ExperimentConfig {
        let max_len = self.train.preprocess.length.unwrap_or_else(|| data.max_len());
        ExperimentConfig {
            runs: self.runs,
            master_seed: self.seed,
            methods: self.methods.clone(),
            augmentations: self.augmentations.clone(),
            bagging_members: self.bagging_members,
            model: self.model.resolve(data.topology.joint_count() * 3, data.class_count(), max_len),
            train: self.train.with_seed(self.seed),
            ensemble: self.ensemble,
            confidence: self.confidence,
        }
    }

    /// Load, import or generate the configured dataset.
    pub fn load_dataset(&self) -> Result<LabeledDataset> {
        let d = &self.dataset;
        if let Some(path) = &d.path {
            return read_dataset(path);
        }
        if let Some(csv) = &d.csv {
            return import_csv(&csv.dir, &SkeletonTopology::preset(&csv.topology)?, &csv.schema);
        }
        generate_synthetic(&d.synthetic, d.synthetic_seed.unwrap_or(self.seed))
    }
}

fn read_dataset(path: &Path) -> Result<LabeledDataset> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(decode_dataset(&bytes, path)?.0)
}

/// A prepared command context: configuration, hash and output policy.
#[derive(Debug, Clone)]
pub struct Session {
    pub config: RunConfig,
    pub out: PathBuf,
    pub force: bool,
    pub hash: String,
}

/// Cached member predictions written by `evaluate` and read by `ablate`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionFile {
    pub config_hash: String,
    pub aggregation: crate::ensemble::Aggregation,
    pub confidence: f64,
    pub runs: Vec<PredictionCache>,
}

#[derive(Serialize)]
struct TrainSummary<'a> {
    config_hash: &'a str,
    method: String,
    seed: u64,
    test_accuracy: f64,
    members: Vec<MemberSummary<'a>>,
}

#[derive(Serialize)]
struct MemberSummary<'a> {
    tag: &'a str,
    best_epoch: usize,
    best_validation_accuracy: Option<f64>,
    test_accuracy: f64,
    log: &'a crate::model::TrainLog,
}

type Files = Vec<(PathBuf, Vec<u8>)>;

impl Session {
    /// `out` overrides the configured output root.
    pub fn new(config: RunConfig, out: Option<PathBuf>, force: bool) -> Result<Self> {
        config.validate()?;
        let hash = config.hash()?;
        let out = out.unwrap_or_else(|| config.output_dir.clone());
        Ok(Self {
            config,
            out,
            force,
            hash,
        })
    }

    fn dataset(&self, path: Option<&Path>) -> Result<LabeledDataset> {
        match path {
            Some(p) => read_dataset(p),
            None => self.config.load_dataset(),
        }
    }

    fn splits(&self, data: &LabeledDataset) -> Result<Splits> {
        make_splits(data, &self.config.split)
    }

    fn config_file(&self) -> Result<(PathBuf, Vec<u8>)> {
        let text = format!("# config hash {}\n{}", self.hash, self.config.to_toml()?);
        Ok(("config.toml".into(), text.into_bytes()))
    }

    /// Write `files` under `<out>/<command>/`, refusing to replace anything
    /// unless `force` is set. Nothing is written if any target exists.
    pub fn commit(&self, command: &str, mut files: Files) -> Result<Vec<PathBuf>> {
        files.push(self.config_file()?);
        let dir = self.out.join(command);
        let paths: Vec<PathBuf> = files.iter().map(|(p, _)| dir.join(p)).collect();
        if !self.force {
            if let Some(p) = paths.iter().find(|p| p.exists()) {
                return Err(Error::Exists(p.clone()));
            }
        }
        for (path, (_, bytes)) in paths.iter().zip(&files) {
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| Error::io(parent, e))?;
            }
            fs::write(path, bytes).map_err(|e| Error::io(path, e))?;
        }
        Ok(paths)
    }

    /// `synth`: generate the configured synthetic dataset.
    pub fn synth(&self) -> Result<Vec<PathBuf>> {
        let d = &self.config.dataset;
        let data = generate_synthetic(&d.synthetic, d.synthetic_seed.unwrap_or(self.config.seed))?;
        let bytes = encode_dataset(&data, Some(&self.hash))?;
        self.commit("synth", vec![("dataset.ensd".into(), bytes)])
    }

    /// `augment`: one transformed copy of the dataset per preset, and with
    /// `gallery` a before/after figure for the first sequence.
    pub fn augment(&self, dataset: Option<&Path>, presets: &[String], gallery: bool) -> Result<Vec<PathBuf>> {
        let data = self.dataset(dataset)?;
        let names = if presets.is_empty() { &self.config.augmentations } else { presets };
        let mut files: Files = vec![];
        for name in names {
            let aug = NamedAugmentation::preset(name)?;
            let out = build_specialist_dataset(&data, &aug.augmentation, self.config.seed, DatasetMode::Replace)?;
            files.push((format!("{name}.ensd").into(), encode_dataset(&out, Some(&self.hash))?));
            if gallery {
                if let (Some(before), Some(after)) = (data.sequences.first(), out.sequences.first()) {
                    let title = format!("{name} (config {})", &self.hash[..12]);
                    let svg = trajectory_comparison(&title, before, after, gallery_joint(&data.topology));
                    files.push((format!("gallery/{name}.svg").into(), svg.into_bytes()));
                }
            }
        }
        self.commit("augment", files)
    }

    /// `train`: one model of `train_method`, with its training log.
    pub fn train(&self, dataset: Option<&Path>) -> Result<Vec<PathBuf>> {
        let data = self.dataset(dataset)?;
        let splits = self.splits(&data)?;
        let exp = self.config.experiment(&data);
        let (tr, va, te) = (data.subset(&splits.train), data.subset(&splits.validation), data.subset(&splits.test));
        let seed = exp.run_seed(0);
        let tc = self.config.train.with_seed(seed);
        let augs = self.config.augmentation_list()?;
        let method = &self.config.train_method;
        let mut files: Files = vec![];
        let members: Vec<TrainedSpecialist> = match method {
            Method::Baseline => vec![train(&tr, &va, &exp.model, &tc)?],
            Method::Generalist => vec![train_generalist(&tr, &va, &augs, &exp.model, &tc)?],
            Method::Specialist(name) => {
                let aug = NamedAugmentation::preset(name)?;
                vec![train_specialist(&tr, &va, &aug, &exp.model, &tc, self.config.ensemble.dataset_mode)?]
            }
            Method::Bagging => {
                let n = self.config.bagging_members.unwrap_or(augs.len().max(1));
                let e = train_bagging(&tr, &va, n, &exp.model, &tc, self.config.ensemble, Bootstrap::Resample)?;
                files.extend(ensemble_files(&e, Some(&self.hash))?);
                e.members().to_vec()
            }
            Method::EnsAug | Method::Specialists => unreachable!("rejected by validation"),
        };
        let test_accuracy = if let Method::Bagging = method {
            let e = EnsembleModel::new(members.clone(), self.config.ensemble.aggregation, seed)?;
            accuracy(&e.predict(&te.sequences)?.labels, &te.labels)?
        } else {
            files.push(("model.ensw".into(), write_weights(&members[0])?));
            accuracy(&members[0].predict(&te.sequences)?.0, &te.labels)?
        };
        files.push((
            "summary.json".into(),
            self.summary_json(method.to_string(), seed, test_accuracy, &members, &te)?,
        ));
        self.commit("train", files)
    }

    fn summary_json(
        &self,
        method: String,
        seed: u64,
        test_accuracy: f64,
        members: &[TrainedSpecialist],
        test: &LabeledDataset,
    ) -> Result<Vec<u8>> {
        let members = members
            .iter()
            .map(|m| {
                Ok(MemberSummary {
                    tag: &m.tag,
                    best_epoch: m.best_epoch(),
                    best_validation_accuracy: m.log().best_validation_accuracy(),
                    test_accuracy: accuracy(&m.predict(&test.sequences)?.0, &test.labels)?,
                    log: m.log(),
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let s = TrainSummary {
            config_hash: &self.hash,
            method,
            seed,
            test_accuracy,
            members,
        };
        Ok(serde_json::to_vec_pretty(&s)?)
    }

    /// `ensemble`: train one specialist per configured augmentation and save
    /// the ensemble with its manifest.
    pub fn ensemble(&self, dataset: Option<&Path>) -> Result<Vec<PathBuf>> {
        let data = self.dataset(dataset)?;
        let splits = self.splits(&data)?;
        let exp = self.config.experiment(&data);
        let (tr, va, te) = (data.subset(&splits.train), data.subset(&splits.validation), data.subset(&splits.test));
        let seed = exp.run_seed(0);
        let tc = self.config.train.with_seed(seed);
        let e = train_ensaug(&tr, &va, &self.config.augmentation_list()?, &exp.model, &tc, self.config.ensemble)?;
        let acc = accuracy(&e.predict(&te.sequences)?.labels, &te.labels)?;
        let mut files = ensemble_files(&e, Some(&self.hash))?;
        files.push(("summary.json".into(), self.summary_json("ensaug".into(), seed, acc, e.members(), &te)?));
        self.commit("ensemble", files)
    }

    /// `evaluate`: with `models`, score a saved ensemble on the test split;
    /// otherwise run the full multi-run protocol over every configured method.
    pub fn evaluate(&self, dataset: Option<&Path>, models: Option<&Path>) -> Result<(EvalReport, Vec<PathBuf>)> {
        let data = self.dataset(dataset)?;
        let splits = self.splits(&data)?;
        let mut report = match models {
            Some(manifest) => self.evaluate_saved(&data, &splits, manifest)?,
            None => run_experiment(&data, &splits, &self.config.experiment(&data))?,
        };
        report.config_hash = Some(self.hash.clone());
        let mut files: Files = report_files(&report)?
            .into_iter()
            .map(|(n, s)| (PathBuf::from(n), s.into_bytes()))
            .collect();
        if !report.caches.is_empty() {
            let preds = PredictionFile {
                config_hash: self.hash.clone(),
                aggregation: self.config.ensemble.aggregation,
                confidence: self.config.confidence,
                runs: report.caches.clone(),
            };
            files.push(("predictions.json".into(), serde_json::to_vec(&preds)?));
        }
        let paths = self.commit("evaluate", files)?;
        Ok((report, paths))
    }

    fn evaluate_saved(&self, data: &LabeledDataset, splits: &Splits, manifest: &Path) -> Result<EvalReport> {
        let e = load_ensemble(manifest)?;
        let test = data.subset(&splits.test);
        let p = e.predict(&test.sequences)?;
        let mut accuracies = vec![("ensaug".to_string(), accuracy(&p.labels, &test.labels)?)];
        for (m, labels) in e.members().iter().zip(&p.member_labels) {
            accuracies.push((format!("specialist:{}", m.tag), accuracy(labels, &test.labels)?));
        }
        let cache = PredictionCache {
            truth: test.labels.clone(),
            member_names: e.members().iter().map(|m| m.tag.clone()).collect(),
            member_labels: p.member_labels,
            member_probs: p.member_probs,
        };
        let run = RunResult {
            run: 0,
            seed: e.master_seed,
            accuracies,
            ablation: Some(ablate(&cache, e.aggregation)?),
        };
        summarize(vec![run], vec![cache], self.config.confidence)
    }

    /// `ablate`: Jaccard matrix and subset sweep for every cached run, plus
    /// their average over runs.
    pub fn ablate(&self, predictions: Option<&Path>) -> Result<Vec<PathBuf>> {
        let default = self.out.join("evaluate").join("predictions.json");
        let path = predictions.unwrap_or(&default);
        let text = fs::read(path).map_err(|e| Error::io(path, e))?;
        let preds: PredictionFile = serde_json::from_slice(&text).map_err(|e| Error::Corrupt {
            path: path.to_path_buf(),
            reason: e.to_string(),
        })?;
        if preds.runs.is_empty() {
            return Err(Error::Config(format!("{} holds no cached runs", path.display())));
        }
        let mut files: Files = vec![];
        let mut runs = vec![];
        for (r, cache) in preds.runs.iter().enumerate() {
            let a: Ablation = ablate(cache, preds.aggregation)?;
            for (name, body) in ablation_files(&a, &preds.config_hash)? {
                files.push((PathBuf::from(format!("run_{r:02}")).join(name), body.into_bytes()));
            }
            runs.push(RunResult {
                run: r,
                seed: 0,
                accuracies: vec![],
                ablation: Some(a),
            });
        }
        let mut summary = summarize(runs, vec![], preds.confidence)?;
        summary.config_hash = Some(preds.config_hash.clone());
        files.push(("summary.txt".into(), text_table(&summary).into_bytes()));
        if let Some(m) = &summary.mean_jaccard {
            files.push((
                "jaccard.csv".into(),
                jaccard_csv(&preds.runs[0].member_names, m, &preds.config_hash)?.into_bytes(),
            ));
        }
        let rows: Vec<_> = summary
            .sweep
            .iter()
            .map(|s| (s.k, preds.runs.len(), s.accuracy.mean, s.accuracy.half_width))
            .collect();
        files.push(("sweep.csv".into(), sweep_csv(&rows, &preds.config_hash)?.into_bytes()));
        self.commit("ablate", files)
    }
}

/// Joint drawn in gallery figures: a fingertip when there is one.
fn gallery_joint(topo: &SkeletonTopology) -> usize {
    topo.hands
        .first()
        .map(|h| h.fingers.first().map_or(h.wrist, |f| f[3]))
        .unwrap_or(topo.joint_count().saturating_sub(1))
}

/// The preset catalogue as a plain-text table.
pub fn list_augs() -> String {
    let mut out = String::from("Geometry-aware presets\n");
    let rows = presets::catalogue();
    let w = rows.iter().map(|p| p.name.len()).max().unwrap_or(0);
    for p in rows {
        let default = if DEFAULT_SPECIALISTS.contains(&p.name) { " *" } else { "" };
        out.push_str(&format!("  {:<w$}  {:<20}  {}{default}\n", p.name, p.spec.kind().label(), p.pattern));
    }
    out.push_str("\nGeneric presets\n");
    for (name, spec) in genaug::catalogue() {
        out.push_str(&format!("  {:<w$}  {}\n", name, spec.label()));
    }
    out.push_str("\n* default specialist list\n");
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_keys_and_versions_are_rejected() {
        assert!(RunConfig::from_toml("version = 1\nbogus = 3\n").is_err());
        assert!(RunConfig::from_toml("version = 2\n").is_err());
        assert!(RunConfig::from_toml("version = 1\naugmentations = [\"nope\"]\n").is_err());
        let c = RunConfig::from_toml("version = 1\nseed = 4\n").unwrap();
        assert_eq!(c.seed, 4);
        assert_eq!(c.runs, 5);
    }

    #[test]
    fn toml_round_trip_preserves_config_and_hash() {
        let c = RunConfig {
            seed: 11,
            split: SplitSpec::subject_ranges(3, 1, 1),
            ..RunConfig::default()
        };
        let back = RunConfig::from_toml(&c.to_toml().unwrap()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.hash().unwrap(), c.hash().unwrap());
        let moved = RunConfig {
            output_dir: "elsewhere".into(),
            ..c.clone()
        };
        assert_eq!(moved.hash().unwrap(), c.hash().unwrap());
        let reseeded = RunConfig { seed: 12, ..c.clone() };
        assert_ne!(reseeded.hash().unwrap(), c.hash().unwrap());
    }

    #[test]
    fn catalogue_lists_every_preset() {
        let text = list_augs();
        for p in presets::catalogue() {
            assert!(text.contains(p.name), "{}", p.name);
        }
        assert!(text.contains("generic.jitter"));
    }

    #[test]
    fn commit_is_write_once() {
        let tmp = tempfile::tempdir().unwrap();
        let s = Session::new(RunConfig::default(), Some(tmp.path().into()), false).unwrap();
        s.commit("x", vec![("a.txt".into(), b"1".to_vec())]).unwrap();
        let err = s.commit("x", vec![("a.txt".into(), b"2".to_vec())]).unwrap_err();
        assert!(matches!(err, Error::Exists(_)));
        assert_eq!(fs::read(tmp.path().join("x/a.txt")).unwrap(), b"1");
        let forced = Session { force: true, ..s };
        forced.commit("x", vec![("a.txt".into(), b"2".to_vec())]).unwrap();
        assert_eq!(fs::read(tmp.path().join("x/a.txt")).unwrap(), b"2");
    }
}
