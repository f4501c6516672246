//! Accuracy statistics, error-diversity analysis and experiment reports.

mod experiment;
pub mod plot;
mod report;
mod stats;

pub use experiment::{
    ablate, run_experiment, run_once, summarize, Ablation, EvalReport, ExperimentConfig,
    Method, MethodSummary, PredictionCache, RunResult, SweepSummary,
};
pub use report::{ablation_files, accuracy_csv, jaccard_csv, report_files, sweep_csv, text_table};
pub use stats::{
    accuracy, error_set, jaccard, jaccard_matrix, mean_ci, subset_sweep, summarize_jaccard,
    t_quantile, JaccardSummary, MeanCi, MemberOutputs, SweepPoint, MAX_EXHAUSTIVE_MEMBERS,
};
