//! Augmentation-driven specialist ensembles for skeletal motion sequences.
//!
//! The crate covers the whole pipeline: a landmark data model, eight
//! geometry-aware augmentations plus generic time-series baselines, a small
//! from-scratch sequence classifier with hand-derived gradients, ensemble
//! construction and voting, evaluation statistics and ablations, and portable
//! file formats with a synthetic benchmark generator.
//!
//! Runnable walkthroughs of each capability live in `examples/`:
//!
//! ```bash
//! cargo run -p ensaug --example augment_gallery
//! cargo run -p ensaug --example synthetic_benchmark --release
//! ```

pub mod augment;
pub mod cli;
pub mod dataio;
pub mod dataset;
pub mod ensemble;
pub mod error;
pub mod eval;
pub mod genaug;
pub mod landmarks;
pub mod model;
pub mod rng;
pub mod topology;

pub use dataset::{make_splits, LabeledDataset, Preprocess, SplitSpec, Splits};
pub use error::{Error, Result};
pub use landmarks::{center_sequence, normalize_length, LandmarkSequence, Point};
pub use topology::SkeletonTopology;
