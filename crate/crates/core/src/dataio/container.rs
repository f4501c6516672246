//! Single-file dataset container.
//!
//! | bytes | content |
//! |-------|---------|
//! | 4 | magic `ENSD` |
//! | 4 | `u32` LE format version |
//! | 8 | `u64` LE manifest length `H` |
//! | H | UTF-8 JSON [`DatasetManifest`] |
//! | B | tensor blob: `f32` LE, per sequence `t`-major, joint next, xyz innermost |
//! | 32 | SHA-256 of every preceding byte |

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::landmarks::{LandmarkSequence, Point};
use crate::topology::SkeletonTopology;

const MAGIC: &[u8; 4] = b"ENSD";
pub const DATASET_VERSION: u32 = 1;
const DIGEST_LEN: usize = 32;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SequenceRecord {
    /// Byte offset into the blob.
    pub offset: u64,
    /// Byte length in the blob, `frames * joints * 12`.
    pub length: u64,
    pub frames: usize,
    pub label: usize,
    pub subject: u32,
    pub sequence_id: u64,
    /// `1`/`0` per frame for real/padded; absent when every frame is real.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mask: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetManifest {
    pub format_version: u32,
    pub topology: SkeletonTopology,
    pub class_names: Vec<String>,
    pub records: Vec<SequenceRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

fn mask_string(seq: &LandmarkSequence) -> Option<String> {
    if seq.real_count() == seq.len() {
        None
    } else {
        Some(seq.mask().iter().map(|&r| if r { '1' } else { '0' }).collect())
    }
}

/// Encode a dataset, optionally stamping a config hash into the manifest.
pub fn encode_dataset(data: &LabeledDataset, config_hash: Option<&str>) -> Result<Vec<u8>> {
    data.validate()?;
    let joints = data.topology.joint_count();
    let mut blob = Vec::new();
    let mut records = Vec::with_capacity(data.len());
    for (i, seq) in data.sequences.iter().enumerate() {
        let offset = blob.len() as u64;
        for p in seq.points() {
            for v in [p.x, p.y, p.z] {
                blob.extend_from_slice(&(v as f32).to_le_bytes());
            }
        }
        records.push(SequenceRecord {
            offset,
            length: (seq.len() * joints * 12) as u64,
            frames: seq.len(),
            label: data.labels[i],
            subject: data.subject_ids[i],
            sequence_id: data.sequence_ids[i],
            mask: mask_string(seq),
        });
    }
    let manifest = DatasetManifest {
        format_version: DATASET_VERSION,
        topology: data.topology.clone(),
        class_names: data.class_names.clone(),
        records,
        config_hash: config_hash.map(str::to_string),
    };
    let json = serde_json::to_vec(&manifest)?;
    let mut out = Vec::with_capacity(16 + json.len() + blob.len() + DIGEST_LEN);
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&DATASET_VERSION.to_le_bytes());
    out.extend_from_slice(&(json.len() as u64).to_le_bytes());
    out.extend_from_slice(&json);
    out.extend_from_slice(&blob);
    let digest = Sha256::digest(&out);
    out.extend_from_slice(&digest);
    Ok(out)
}

/// Decode bytes from [`encode_dataset`]; `path` only labels errors.
pub fn decode_dataset(bytes: &[u8], path: &Path) -> Result<(LabeledDataset, DatasetManifest)> {
    let corrupt = |reason: String| Error::Corrupt {
        path: path.to_path_buf(),
        reason,
    };
    if bytes.len() < 4 || &bytes[..4] != MAGIC {
        return Err(corrupt("not a dataset container (bad magic)".into()));
    }
    if bytes.len() < 16 + DIGEST_LEN {
        return Err(corrupt(format!("truncated: only {} bytes", bytes.len())));
    }
    let version = u32::from_le_bytes(bytes[4..8].try_into().expect("4 bytes"));
    if version != DATASET_VERSION {
        return Err(Error::Version {
            path: path.to_path_buf(),
            found: version,
            expected: DATASET_VERSION,
        });
    }
    let (body, digest) = bytes.split_at(bytes.len() - DIGEST_LEN);
    if Sha256::digest(body).as_slice() != digest {
        return Err(corrupt("checksum mismatch (file truncated or modified)".into()));
    }
    let hlen = u64::from_le_bytes(bytes[8..16].try_into().expect("8 bytes")) as usize;
    if 16 + hlen > body.len() {
        return Err(corrupt("manifest length exceeds file size".into()));
    }
    let manifest: DatasetManifest =
        serde_json::from_slice(&body[16..16 + hlen]).map_err(|e| corrupt(format!("bad manifest: {e}")))?;
    let blob = &body[16 + hlen..];
    manifest.topology.validate()?;
    let joints = manifest.topology.joint_count();

    let mut expected_offset = 0u64;
    let mut sequences = Vec::with_capacity(manifest.records.len());
    for (i, r) in manifest.records.iter().enumerate() {
        if r.offset != expected_offset {
            return Err(corrupt(format!("record {i} overlaps or leaves a gap at offset {}", r.offset)));
        }
        if r.length != (r.frames * joints * 12) as u64 {
            return Err(corrupt(format!(
                "record {i}: length {} disagrees with {} frames of {joints} joints",
                r.length, r.frames
            )));
        }
        let end = (r.offset + r.length) as usize;
        if end > blob.len() {
            return Err(corrupt(format!("record {i} runs past the end of the blob")));
        }
        let points: Vec<Point> = blob[r.offset as usize..end]
            .chunks_exact(12)
            .map(|c| {
                let f = |k: usize| f32::from_le_bytes(c[4 * k..4 * k + 4].try_into().expect("4 bytes")) as f64;
                Point::new(f(0), f(1), f(2))
            })
            .collect();
        let real = match &r.mask {
            None => vec![true; r.frames],
            Some(m) if m.len() == r.frames && m.chars().all(|c| c == '0' || c == '1') => {
                m.chars().map(|c| c == '1').collect()
            }
            Some(_) => return Err(corrupt(format!("record {i}: malformed frame mask"))),
        };
        sequences.push(LandmarkSequence::from_parts(points, joints, real)?);
        expected_offset += r.length;
    }
    if expected_offset as usize != blob.len() {
        return Err(corrupt(format!(
            "blob holds {} bytes but records cover {expected_offset}",
            blob.len()
        )));
    }
    let data = LabeledDataset::with_ids(
        sequences,
        manifest.records.iter().map(|r| r.label).collect(),
        manifest.class_names.clone(),
        manifest.records.iter().map(|r| r.subject).collect(),
        manifest.records.iter().map(|r| r.sequence_id).collect(),
        manifest.topology.clone(),
    )?;
    Ok((data, manifest))
}

pub fn save_dataset(path: &Path, data: &LabeledDataset, config_hash: Option<&str>) -> Result<()> {
    fs::write(path, encode_dataset(data, config_hash)?).map_err(|e| Error::io(path, e))
}

pub fn load_dataset(path: &Path) -> Result<LabeledDataset> {
    let bytes = fs::read(path).map_err(|e| Error::io(path, e))?;
    Ok(decode_dataset(&bytes, path)?.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dataio::synthetic::{generate_synthetic, SyntheticSpec};

    fn small() -> LabeledDataset {
        let spec = SyntheticSpec {
            subjects: 2,
            sequences_per_subject_class: 2,
            frames: 6,
            ..Default::default()
        };
        let mut d = generate_synthetic(&spec, 3).unwrap();
        d.sequences[1] = d.sequences[1].with_padding(3);
        d.sequence_ids = d.sequence_ids.iter().map(|i| i * 7 + 100).collect();
        d
    }

    #[test]
    fn round_trip_keeps_metadata_and_rounds_coordinates() {
        let d = small();
        let bytes = encode_dataset(&d, Some("abc")).unwrap();
        let (back, manifest) = decode_dataset(&bytes, Path::new("mem")).unwrap();
        assert_eq!(manifest.config_hash.as_deref(), Some("abc"));
        assert_eq!(back.labels, d.labels);
        assert_eq!(back.subject_ids, d.subject_ids);
        assert_eq!(back.sequence_ids, d.sequence_ids);
        assert_eq!(back.class_names, d.class_names);
        assert_eq!(back.topology, d.topology);
        for (a, b) in back.sequences.iter().zip(&d.sequences) {
            assert_eq!(a.mask(), b.mask());
            for (p, q) in a.points().iter().zip(b.points()) {
                assert!((p - q).amax() < 1e-6);
            }
        }
        let again = encode_dataset(&back, Some("abc")).unwrap();
        assert_eq!(again, bytes);
    }

    #[test]
    fn damage_is_reported() {
        let bytes = encode_dataset(&small(), None).unwrap();
        let p = Path::new("mem");
        let err = decode_dataset(&bytes[..bytes.len() - 10], p).unwrap_err();
        assert!(matches!(err, Error::Corrupt { .. }), "{err}");
        let mut flipped = bytes.clone();
        flipped[40] ^= 1;
        assert!(matches!(decode_dataset(&flipped, p), Err(Error::Corrupt { .. })));
        let mut bumped = bytes.clone();
        bumped[4..8].copy_from_slice(&2u32.to_le_bytes());
        let msg = decode_dataset(&bumped, p).unwrap_err().to_string();
        assert!(msg.contains('2') && msg.contains('1'), "{msg}");
        assert!(decode_dataset(b"nope", p).is_err());
    }
}
