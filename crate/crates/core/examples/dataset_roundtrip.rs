//! Generate the synthetic benchmark, save it as a dataset container and read
//! it back.
//!
//! cargo run -p ensaug --example dataset_roundtrip

use ensaug::dataio::{decode_dataset, encode_dataset, generate_synthetic_detailed, SyntheticSpec};

fn main() -> ensaug::Result<()> {
    let (data, draws) = generate_synthetic_detailed(&SyntheticSpec::default(), 3)?;
    println!(
        "{} sequences, {} classes, {} subjects, topology {}",
        data.len(),
        data.class_count(),
        data.subjects().len(),
        data.topology.name
    );
    let d = &draws[0];
    println!(
        "sequence 0 nuisances: depth x{:.3}, drift ({:.3}, {:.3}), yaw {:.1} deg, speed x{:.3}",
        d.depth_scale, d.drift[0], d.drift[1], d.yaw_deg, d.speed
    );

    let bytes = encode_dataset(&data, Some("example"))?;
    let (back, manifest) = decode_dataset(&bytes, "memory".as_ref())?;
    let worst = data
        .sequences
        .iter()
        .zip(&back.sequences)
        .flat_map(|(a, b)| a.points().iter().zip(b.points()).map(|(p, q)| (p - q).amax()))
        .fold(0.0f64, f64::max);
    println!(
        "container: {} bytes, format v{}, {} records; max coordinate change {worst:.2e}",
        bytes.len(),
        manifest.format_version,
        manifest.records.len()
    );
    assert_eq!(back.labels, data.labels);
    assert_eq!(encode_dataset(&back, Some("example"))?, bytes, "second save is byte-identical");

    let mut damaged = bytes.clone();
    damaged[100] ^= 1;
    println!("one flipped bit: {}", decode_dataset(&damaged, "memory".as_ref()).unwrap_err());
    Ok(())
}
