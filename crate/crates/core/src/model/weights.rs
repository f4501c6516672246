//! Binary weight files.
//!
//! Layout, all integers little-endian:
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `ENSW` |
//! | 4 | `u32` format version |
//! | 8 | `u64` header length `H` |
//! | H | UTF-8 JSON header: model config, tag, preprocessing, best epoch, training log, tensor directory |
//! | 4·n | `f32` payload, tensors in directory order, each row-major |

use std::fs;
use std::path::Path;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use super::config::ModelConfig;
use super::params::ParamStore;
use super::train::{TrainLog, TrainedSpecialist};
use super::Classifier;
use crate::dataset::Preprocess;
use crate::error::{Error, Result};

const MAGIC: &[u8; 4] = b"ENSW";
pub const WEIGHTS_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct TensorEntry {
    name: String,
    shape: [usize; 2],
}

#[derive(Serialize, Deserialize)]
struct Header {
    model_config: ModelConfig,
    tag: String,
    #[serde(default)]
    preprocess: Preprocess,
    best_epoch: usize,
    log: TrainLog,
    tensors: Vec<TensorEntry>,
}

/// Serialize a trained model to bytes.
pub fn write_weights(spec: &TrainedSpecialist) -> Result<Vec<u8>> {
    let params = spec.classifier.params();
    let header = Header {
        model_config: spec.model_config().clone(),
        tag: spec.tag.clone(),
        preprocess: *spec.preprocess(),
        best_epoch: spec.best_epoch(),
        log: spec.log().clone(),
        tensors: params
            .names()
            .iter()
            .zip(params.tensors())
            .map(|(name, t)| TensorEntry {
                name: name.clone(),
                shape: [t.nrows(), t.ncols()],
            })
            .collect(),
    };
    let json = serde_json::to_vec(&header)?;
    let mut out = Vec::with_capacity(16 + json.len() + 4 * params.scalar_count());
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&WEIGHTS_VERSION.to_le_bytes());
    out.extend_from_slice(&(json.len() as u64).to_le_bytes());
    out.extend_from_slice(&json);
    for t in params.tensors() {
        for &v in t.iter() {
            out.extend_from_slice(&(v as f32).to_le_bytes());
        }
    }
    Ok(out)
}

/// Parse bytes produced by [`write_weights`]; `path` is used in error messages.
pub fn read_weights(bytes: &[u8], path: &Path) -> Result<TrainedSpecialist> {
    let corrupt = |reason: &str| Error::Corrupt {
        path: path.to_path_buf(),
        reason: reason.to_string(),
    };
    if bytes.len() < 16 || &bytes[..4] != MAGIC {
        return Err(corrupt("missing weight-file magic"));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != WEIGHTS_VERSION {
        return Err(Error::Version {
            path: path.to_path_buf(),
            found: version,
            expected: WEIGHTS_VERSION,
        });
    }
    let hlen = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    let body = &bytes[16..];
    if body.len() < hlen {
        return Err(corrupt("truncated header"));
    }
    let header: Header =
        serde_json::from_slice(&body[..hlen]).map_err(|e| corrupt(&format!("bad header: {e}")))?;
    let mut payload = body[hlen..].chunks_exact(4);
    let expected: usize = header.tensors.iter().map(|t| t.shape[0] * t.shape[1]).sum();
    if payload.len() != expected || !payload.remainder().is_empty() {
        return Err(corrupt(&format!(
            "payload holds {} bytes, directory needs {}",
            body.len() - hlen,
            4 * expected
        )));
    }
    let mut names = Vec::with_capacity(header.tensors.len());
    let mut tensors = Vec::with_capacity(header.tensors.len());
    for entry in header.tensors {
        let data: Vec<f64> = payload
            .by_ref()
            .take(entry.shape[0] * entry.shape[1])
            .map(|c| f32::from_le_bytes(c.try_into().expect("4 bytes")) as f64)
            .collect();
        let t = Array2::from_shape_vec((entry.shape[0], entry.shape[1]), data)
            .map_err(|e| corrupt(&e.to_string()))?;
        names.push(entry.name);
        tensors.push(t);
    }
    let params = ParamStore::from_parts(names, tensors)?;
    let classifier = Classifier::from_parts(header.model_config, params)?;
    TrainedSpecialist::from_parts(classifier, header.tag, header.preprocess, header.log, header.best_epoch)
}

pub fn save_weights(path: &Path, spec: &TrainedSpecialist) -> Result<()> {
    fs::write(path, write_weights(spec)?).map_err(|e| Error::io(path, e))
}

pub fn load_weights(path: &Path) -> Result<TrainedSpecialist> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    read_weights(&bytes, path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::train::EpochRecord;
    use crate::model::{Arch, Pooling};

    fn specialist() -> TrainedSpecialist {
        let cfg = ModelConfig {
            arch: Arch::Transformer,
            input_dim: 6,
            model_dim: Some(6),
            encoder_layers: 1,
            attention_heads: 2,
            ff_dim: 4,
            dropout: 0.1,
            pooling: Pooling::MeanOverTime,
            class_count: 3,
            max_len: 5,
        };
        let mut c = Classifier::new(cfg, 9).unwrap();
        c.params_mut().round_to_f32();
        let log = TrainLog {
            epochs: vec![EpochRecord {
                epoch: 1,
                train_loss: 0.1 + 0.2,
                validation_accuracy: Some(2.0 / 3.0),
            }],
        };
        let pre = Preprocess {
            length: Some(5),
            center: true,
        };
        TrainedSpecialist::from_parts(c, "viewrot.yaw".into(), pre, log, 1).unwrap()
    }

    #[test]
    fn round_trip_is_exact() {
        let s = specialist();
        let back = read_weights(&write_weights(&s).unwrap(), Path::new("mem")).unwrap();
        assert_eq!(back, s);
    }

    #[test]
    fn damaged_files_are_rejected() {
        let bytes = write_weights(&specialist()).unwrap();
        let p = Path::new("mem");
        assert!(matches!(read_weights(&bytes[..bytes.len() - 3], p), Err(Error::Corrupt { .. })));
        assert!(matches!(read_weights(b"XXXX0000", p), Err(Error::Corrupt { .. })));
        let mut v = bytes.clone();
        v[4] = 9;
        let err = read_weights(&v, p).unwrap_err();
        assert!(matches!(err, Error::Version { found: 9, expected: 1, .. }));
    }
}
