//! Rendering of experiment reports: a human-readable table, JSON, CSV exports
//! and SVG figures. Every renderer is a pure function of the report, so equal
//! reports give byte-identical files.

use std::fmt::Write as _;

use super::experiment::{Ablation, EvalReport};
use super::plot::{bar_chart, curve_with_band};
use super::stats::SweepPoint;
use crate::error::{Error, Result};

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "undefined".to_string(), |v| format!("{v:.4}"))
}

fn csv_opt(v: Option<f64>) -> String {
    v.map_or_else(String::new, |v| v.to_string())
}

fn hash_of(report: &EvalReport) -> &str {
    report.config_hash.as_deref().unwrap_or("")
}

/// Column-aligned summary of every method, the Jaccard summary and the sweep.
pub fn text_table(report: &EvalReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "config hash: {}", hash_of(report));
    let _ = writeln!(out, "runs: {}", report.runs.len());
    let _ = writeln!(out, "interval: {}", report.ci_method);
    out.push('\n');
    let width = report.methods.iter().map(|m| m.method.len()).max().unwrap_or(6).max(6);
    let _ = writeln!(out, "{:<width$}  {:>8}  {:>10}  per-run", "method", "mean", "± CI");
    for m in &report.methods {
        let runs: Vec<String> = m.accuracies.iter().map(|a| format!("{a:.4}")).collect();
        let _ = writeln!(
            out,
            "{:<width$}  {:>8.4}  {:>10}  {}",
            m.method,
            m.summary.mean,
            fmt_opt(m.summary.half_width),
            runs.join(" ")
        );
    }
    if let Some(j) = &report.jaccard_summary {
        out.push('\n');
        let _ = writeln!(
            out,
            "specialist error overlap (Jaccard, mean over runs): min {:.4}  mean {:.4}  max {:.4}  ({} pairs, {} undefined)",
            j.min, j.mean, j.max, j.pairs, j.undefined_pairs
        );
    }
    if !report.sweep.is_empty() {
        out.push('\n');
        let _ = writeln!(out, "{:>3}  {:>8}  {:>10}", "k", "mean", "± CI");
        for s in &report.sweep {
            let _ = writeln!(out, "{:>3}  {:>8.4}  {:>10}", s.k, s.accuracy.mean, fmt_opt(s.accuracy.half_width));
        }
    }
    out
}

fn finish(w: csv::Writer<Vec<u8>>) -> Result<String> {
    let bytes = w.into_inner().map_err(|e| Error::param(format!("csv buffer: {e}")))?;
    String::from_utf8(bytes).map_err(|e| Error::param(e.to_string()))
}

fn csv_err(e: csv::Error) -> Error {
    Error::param(format!("csv encoding: {e}"))
}

/// One row per method: per-run accuracies, mean, half-width and provenance.
pub fn accuracy_csv(report: &EvalReport) -> Result<String> {
    let runs = report.runs.len();
    let mut w = csv::Writer::from_writer(vec![]);
    let mut head = vec!["method".to_string()];
    head.extend((0..runs).map(|r| format!("run_{r}")));
    head.extend(["mean", "ci_half_width", "n", "confidence", "config_hash"].map(String::from));
    w.write_record(&head).map_err(csv_err)?;
    for m in &report.methods {
        let mut row = vec![m.method.clone()];
        row.extend(m.accuracies.iter().map(|a| a.to_string()));
        row.extend([
            m.summary.mean.to_string(),
            csv_opt(m.summary.half_width),
            m.summary.n.to_string(),
            m.summary.confidence.to_string(),
            hash_of(report).to_string(),
        ]);
        w.write_record(&row).map_err(csv_err)?;
    }
    finish(w)
}

/// Square matrix with member names along both axes; undefined cells are empty.
pub fn jaccard_csv(names: &[String], matrix: &[Vec<Option<f64>>], config_hash: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    let mut head = vec!["member".to_string()];
    head.extend(names.iter().cloned());
    head.push("config_hash".into());
    w.write_record(&head).map_err(csv_err)?;
    for (name, row) in names.iter().zip(matrix) {
        let mut rec = vec![name.clone()];
        rec.extend(row.iter().map(|v| csv_opt(*v)));
        rec.push(config_hash.to_string());
        w.write_record(&rec).map_err(csv_err)?;
    }
    finish(w)
}

/// `k, subsets, mean, ci_half_width` rows.
pub fn sweep_csv(points: &[(usize, usize, f64, Option<f64>)], config_hash: &str) -> Result<String> {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record(["k", "subsets", "mean", "ci_half_width", "config_hash"]).map_err(csv_err)?;
    for (k, subsets, mean, half) in points {
        w.write_record([k.to_string(), subsets.to_string(), mean.to_string(), csv_opt(*half), config_hash.to_string()])
            .map_err(csv_err)?;
    }
    finish(w)
}

fn sweep_rows(sweep: &[SweepPoint]) -> Vec<(usize, usize, f64, Option<f64>)> {
    sweep.iter().map(|p| (p.k, p.subsets, p.accuracy.mean, p.accuracy.half_width)).collect()
}

/// Named output files for an experiment report, in a stable order.
pub fn report_files(report: &EvalReport) -> Result<Vec<(&'static str, String)>> {
    let hash = hash_of(report);
    let mut files = vec![
        ("report.txt", text_table(report)),
        ("report.json", serde_json::to_string_pretty(report)? + "\n"),
        ("accuracy.csv", accuracy_csv(report)?),
    ];
    let bars: Vec<(String, f64, Option<f64>)> = report
        .methods
        .iter()
        .map(|m| (m.method.clone(), m.summary.mean, m.summary.half_width))
        .collect();
    files.push((
        "accuracy.svg",
        bar_chart("Test accuracy by method (mean, t-based CI)", "accuracy", &bars),
    ));
    if let (Some(matrix), Some(run)) = (&report.mean_jaccard, report.runs.iter().find_map(|r| r.ablation.as_ref())) {
        files.push(("jaccard.csv", jaccard_csv(&run.member_names, matrix, hash)?));
    }
    if !report.sweep.is_empty() {
        let rows: Vec<_> = report
            .sweep
            .iter()
            .map(|s| (s.k, report.runs.len(), s.accuracy.mean, s.accuracy.half_width))
            .collect();
        files.push(("sweep.csv", sweep_csv(&rows, hash)?));
        let pts: Vec<_> = report
            .sweep
            .iter()
            .map(|s| (s.k as f64, s.accuracy.mean, s.accuracy.half_width))
            .collect();
        files.push((
            "sweep.svg",
            curve_with_band("Accuracy vs. ensemble size k (mean over runs)", "k", "accuracy", &pts),
        ));
    }
    Ok(files)
}

/// Named output files for an ablation of a single prediction cache.
pub fn ablation_files(ablation: &Ablation, config_hash: &str) -> Result<Vec<(&'static str, String)>> {
    let mut text = String::new();
    let _ = writeln!(text, "config hash: {config_hash}");
    match &ablation.jaccard_summary {
        Some(j) => {
            let _ = writeln!(
                text,
                "Jaccard: min {:.4}  mean {:.4}  max {:.4}  ({} pairs, {} undefined)",
                j.min, j.mean, j.max, j.pairs, j.undefined_pairs
            );
        }
        None => text.push_str("Jaccard: undefined for every pair\n"),
    }
    for p in &ablation.sweep {
        let _ = writeln!(
            text,
            "k={:<3} subsets={:<5} mean {:.4}  ± {}",
            p.k,
            p.subsets,
            p.accuracy.mean,
            fmt_opt(p.accuracy.half_width)
        );
    }
    let pts: Vec<_> = ablation
        .sweep
        .iter()
        .map(|p| (p.k as f64, p.accuracy.mean, p.accuracy.half_width))
        .collect();
    Ok(vec![
        ("ablation.txt", text),
        ("ablation.json", serde_json::to_string_pretty(ablation)? + "\n"),
        ("jaccard.csv", jaccard_csv(&ablation.member_names, &ablation.jaccard, config_hash)?),
        ("sweep.csv", sweep_csv(&sweep_rows(&ablation.sweep), config_hash)?),
        (
            "sweep.svg",
            curve_with_band("Accuracy vs. ensemble size k (mean over subsets)", "k", "accuracy", &pts),
        ),
    ])
}
