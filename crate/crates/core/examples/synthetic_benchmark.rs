//! The full comparison on the default synthetic benchmark: baseline,
//! generalist, bagging, every specialist and the ensemble over five runs.
//! Report files are written to the output directory.
//!
//! cargo run --release -p ensaug --example synthetic_benchmark -- [out_dir] [runs]

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use ensaug::cli::RunConfig;
use ensaug::eval::{report_files, run_experiment, text_table};
use ensaug::make_splits;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut args = std::env::args().skip(1);
    let dir = args.next().map(PathBuf::from).unwrap_or_else(|| "target/benchmark".into());
    let mut cfg = RunConfig::default();
    if let Some(r) = args.next() {
        cfg.runs = r.parse()?;
    }
    let data = cfg.load_dataset()?;
    let splits = make_splits(&data, &cfg.split)?;
    let start = Instant::now();
    let mut report = run_experiment(&data, &splits, &cfg.experiment(&data))?;
    report.config_hash = Some(cfg.hash()?);
    print!("{}", text_table(&report));
    println!("\n{:.1} s", start.elapsed().as_secs_f64());
    fs::create_dir_all(&dir)?;
    for (name, body) in report_files(&report)? {
        fs::write(dir.join(name), body)?;
    }
    println!("reports in {}", dir.display());
    Ok(())
}
