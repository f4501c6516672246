//! Error-overlap and ensemble-size analysis from one run's cached member
//! predictions, without retraining.
//!
//! cargo run --release -p ensaug --example ablation

use ensaug::cli::RunConfig;
use ensaug::eval::{ablate, run_once, Method};
use ensaug::make_splits;

fn main() -> ensaug::Result<()> {
    let cfg = RunConfig {
        methods: vec![Method::EnsAug],
        ..RunConfig::default()
    };
    let data = cfg.load_dataset()?;
    let splits = make_splits(&data, &cfg.split)?;
    let (_, cache) = run_once(&data, &splits, &cfg.experiment(&data), 0)?;
    let cache = cache.expect("ensemble members were trained");
    let a = ablate(&cache, cfg.ensemble.aggregation)?;

    println!("pairwise Jaccard index of misclassified test sequences:");
    let short: Vec<String> = a.member_names.iter().map(|n| n.chars().take(8).collect()).collect();
    println!("{:>10} {}", "", short.iter().map(|s| format!("{s:>8}")).collect::<String>());
    for (name, row) in short.iter().zip(&a.jaccard) {
        let cells: String = row.iter().map(|v| v.map_or("       -".into(), |v| format!("{v:>8.3}"))).collect();
        println!("{name:>10} {cells}");
    }
    if let Some(s) = a.jaccard_summary {
        println!("min {:.3}  mean {:.3}  max {:.3}", s.min, s.mean, s.max);
    }
    println!("\naccuracy by ensemble size (mean over all subsets):");
    for p in &a.sweep {
        println!("  k={}  {:>3} subsets  {:.4}", p.k, p.subsets, p.accuracy.mean);
    }
    Ok(())
}
