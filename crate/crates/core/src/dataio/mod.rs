//! Dataset files, CSV ingestion and the synthetic benchmark.

mod container;
mod csv_import;
mod synthetic;

pub use container::{
    decode_dataset, encode_dataset, load_dataset, save_dataset, DatasetManifest, SequenceRecord,
    DATASET_VERSION,
};
pub use csv_import::{import_csv, read_sequence_csv, CsvSchema};
pub use synthetic::{
    generate_synthetic, generate_synthetic_detailed, NuisanceDraw, NuisanceSpec, SyntheticSpec,
};
