//! Import of per-sequence delimited-text landmark exports.
//!
//! A directory holds one file per sequence (`T` rows of `J * 3` numbers,
//! `x y z` per joint) and an index file with columns `file,label,subject`.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::landmarks::{LandmarkSequence, Point};
use crate::topology::SkeletonTopology;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct CsvSchema {
    /// Index file name inside the directory.
    pub index_file: String,
    pub delimiter: char,
    /// Whether sequence files start with a header row.
    pub has_header: bool,
    /// Allowed labels in class-index order; derived (sorted) from the index when absent.
    pub class_names: Option<Vec<String>>,
}

impl Default for CsvSchema {
    fn default() -> Self {
        Self {
            index_file: "index.csv".into(),
            delimiter: ',',
            has_header: false,
            class_names: None,
        }
    }
}

#[derive(Debug, Deserialize)]
struct IndexRow {
    file: String,
    label: String,
    subject: u32,
}

fn import_err(path: &Path, reason: impl Into<String>) -> Error {
    Error::Import {
        path: path.to_path_buf(),
        reason: reason.into(),
    }
}

fn reader(path: &Path, schema: &CsvSchema, has_headers: bool) -> Result<csv::Reader<std::fs::File>> {
    if !schema.delimiter.is_ascii() {
        return Err(Error::Config("CSV delimiter must be an ASCII character".into()));
    }
    csv::ReaderBuilder::new()
        .delimiter(schema.delimiter as u8)
        .has_headers(has_headers)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| import_err(path, e.to_string()))
}

/// Read one sequence file with `joints` joints.
pub fn read_sequence_csv(path: &Path, joints: usize, schema: &CsvSchema) -> Result<LandmarkSequence> {
    let cols = joints * 3;
    let mut frames = vec![];
    for (r, rec) in reader(path, schema, schema.has_header)?.records().enumerate() {
        let row = r + 1;
        let rec = rec.map_err(|e| import_err(path, e.to_string()))?;
        if rec.len() != cols {
            return Err(import_err(
                path,
                format!("row {row} has {} columns, expected {cols} ({joints} joints x 3)", rec.len()),
            ));
        }
        let mut vals = Vec::with_capacity(cols);
        for (c, field) in rec.iter().enumerate() {
            let v: f64 = field.parse().map_err(|_| {
                import_err(path, format!("row {row}, column {}: `{field}` is not a number", c + 1))
            })?;
            if !v.is_finite() {
                return Err(import_err(path, format!("row {row}, column {}: non-finite value {field}", c + 1)));
            }
            vals.push(v);
        }
        frames.push(vals.chunks_exact(3).map(|p| Point::new(p[0], p[1], p[2])).collect());
    }
    if frames.is_empty() {
        return Err(import_err(path, "no data rows"));
    }
    LandmarkSequence::from_frames(frames)
}

/// Import every sequence listed in the directory's index file.
pub fn import_csv(dir: &Path, topology: &SkeletonTopology, schema: &CsvSchema) -> Result<LabeledDataset> {
    topology.validate()?;
    let index_path = dir.join(&schema.index_file);
    let mut rows: Vec<IndexRow> = vec![];
    let mut rdr = csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .from_path(&index_path)
        .map_err(|e| import_err(&index_path, e.to_string()))?;
    for rec in rdr.deserialize() {
        rows.push(rec.map_err(|e| import_err(&index_path, e.to_string()))?);
    }
    if rows.is_empty() {
        return Err(import_err(&index_path, "index lists no sequences"));
    }
    let class_names = match &schema.class_names {
        Some(c) => c.clone(),
        None => rows.iter().map(|r| r.label.clone()).collect::<BTreeSet<_>>().into_iter().collect(),
    };
    let mut sequences = vec![];
    let mut labels = vec![];
    let mut subjects = vec![];
    for r in &rows {
        let label = class_names.iter().position(|c| *c == r.label).ok_or_else(|| {
            import_err(&index_path, format!("unknown label `{}` for {}", r.label, r.file))
        })?;
        let path: PathBuf = dir.join(&r.file);
        sequences.push(read_sequence_csv(&path, topology.joint_count(), schema)?);
        labels.push(label);
        subjects.push(r.subject);
    }
    LabeledDataset::new(sequences, labels, class_names, subjects, topology.clone())
}
