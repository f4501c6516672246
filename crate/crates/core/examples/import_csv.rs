//! Import a directory of per-sequence CSV exports, and see how malformed
//! files are reported.
//!
//! cargo run -p ensaug --example import_csv

use std::fs;

use ensaug::dataio::{import_csv, CsvSchema};
use ensaug::SkeletonTopology;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::temp_dir().join(format!("ensaug-import-{}", std::process::id()));
    fs::create_dir_all(&dir)?;
    // two joints, so six columns per row
    fs::write(dir.join("wave_a.csv"), "0,0,0,1,0,0\n0.1,0,0,1.1,0,0\n0.2,0,0,1.2,0,0\n")?;
    fs::write(dir.join("wave_b.csv"), "0,0,0,1,0,0\n0.1,0.1,0,1.1,0.1,0\n")?;
    fs::write(dir.join("point_a.csv"), "0,0,0,0,1,0\n0,0,0.1,0,1,0.1\n")?;
    fs::write(dir.join("index.csv"), "file,label,subject\nwave_a.csv,wave,1\nwave_b.csv,wave,2\npoint_a.csv,point,1\n")?;

    let data = import_csv(&dir, &SkeletonTopology::plain(2), &CsvSchema::default())?;
    println!("classes {:?}, subjects {:?}", data.class_names, data.subjects());
    for (i, s) in data.sequences.iter().enumerate() {
        println!("  #{i}: {} frames, label {}", s.len(), data.class_names[data.labels[i]]);
    }

    fs::write(dir.join("wave_b.csv"), "0,0,0,1,0\n")?;
    println!("short row: {}", import_csv(&dir, &SkeletonTopology::plain(2), &CsvSchema::default()).unwrap_err());
    fs::write(dir.join("wave_b.csv"), "0,0,0,1,0,0\n0,0,0,1,0,0\n0,NaN,0,1,0,0\n")?;
    println!("non-finite: {}", import_csv(&dir, &SkeletonTopology::plain(2), &CsvSchema::default()).unwrap_err());
    fs::remove_dir_all(&dir)?;
    Ok(())
}
