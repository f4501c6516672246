//! Verify both architectures' hand-written backward passes against central
//! finite differences.
//!
//! cargo run --release -p ensaug --example gradient_check

use ensaug::model::{gradient_check, Arch, Classifier, ModelConfig, Pooling};
use ensaug::rng::derive_rng;
use ensaug::{LandmarkSequence, Point};
use rand::Rng as _;

fn main() -> ensaug::Result<()> {
    let tiny = ModelConfig {
        arch: Arch::Transformer,
        input_dim: 6,
        model_dim: Some(6),
        encoder_layers: 1,
        attention_heads: 2,
        ff_dim: 8,
        dropout: 0.0,
        pooling: Pooling::MeanOverTime,
        class_count: 3,
        max_len: 4,
    };
    let mut rng = derive_rng(5, &[]);
    let batch: Vec<LandmarkSequence> = (0..3)
        .map(|_| {
            let frames = (0..4)
                .map(|_| (0..2).map(|_| Point::from_fn(|_, _| rng.random_range(-1.0..1.0))).collect())
                .collect();
            LandmarkSequence::from_frames(frames)
        })
        .collect::<ensaug::Result<_>>()?;
    for cfg in [tiny, ModelConfig::linear_pooled(6, 3, 5)] {
        let model = Classifier::new(cfg.clone(), 11)?;
        let g = gradient_check(&model, &batch, &[0, 1, 2], 1e-4, 1e-3)?;
        println!(
            "{:?}: {} scalars, max relative error {:.2e} at {}[{}]",
            cfg.arch, g.scalars, g.max_relative_error, g.worst.0, g.worst.1
        );
    }
    Ok(())
}
