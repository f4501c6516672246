//! Print the augmentation catalogue and what each default specialist does to
//! one synthetic sequence.
//!
//! cargo run -p ensaug --example list_presets

use ensaug::augment::presets::{catalogue, DEFAULT_SPECIALISTS};
use ensaug::augment::apply_augmentation;
use ensaug::dataio::{generate_synthetic, SyntheticSpec};

fn main() -> ensaug::Result<()> {
    print!("{}", ensaug::cli::list_augs());

    let data = generate_synthetic(&SyntheticSpec::default(), 0)?;
    let seq = &data.sequences[0];
    println!("\nmean per-point displacement on sequence 0 ({} frames):", seq.len());
    for p in catalogue().iter().filter(|p| DEFAULT_SPECIALISTS.contains(&p.name)) {
        let out = apply_augmentation(seq, &data.topology, &p.spec, 42)?;
        let moved: f64 = seq.points().iter().zip(out.points()).map(|(a, b)| (a - b).norm()).sum::<f64>()
            / seq.points().len() as f64;
        println!("  {:<20} {moved:.4}", p.name);
    }
    Ok(())
}
