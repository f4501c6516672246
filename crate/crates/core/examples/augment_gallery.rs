//! Before/after trajectory figures for every catalogue preset.
//!
//! cargo run -p ensaug --example augment_gallery -- [out_dir]

use std::fs;
use std::path::PathBuf;

use ensaug::augment::presets::catalogue;
use ensaug::augment::apply_augmentation;
use ensaug::dataio::{generate_synthetic, SyntheticSpec};
use ensaug::eval::plot::trajectory_comparison;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let dir = std::env::args().nth(1).map(PathBuf::from).unwrap_or_else(|| "target/gallery".into());
    fs::create_dir_all(&dir)?;
    let data = generate_synthetic(&SyntheticSpec::default(), 7)?;
    let seq = &data.sequences[0];
    // fingertip of the synthetic arm, so finger folds are visible too
    let tip = data.topology.hands[0].fingers[0][3];
    for p in catalogue() {
        let out = apply_augmentation(seq, &data.topology, &p.spec, 1)?;
        let path = dir.join(format!("{}.svg", p.name));
        fs::write(&path, trajectory_comparison(&format!("{}: {}", p.name, p.pattern), seq, &out, tip))?;
        println!("{}", path.display());
    }
    Ok(())
}
