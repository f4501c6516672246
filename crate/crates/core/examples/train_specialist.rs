//! Train a baseline and one specialist on the synthetic benchmark, then save
//! and reload the specialist's weights.
//!
//! cargo run --release -p ensaug --example train_specialist

use ensaug::augment::{DatasetMode, NamedAugmentation};
use ensaug::cli::RunConfig;
use ensaug::dataio::{generate_synthetic, SyntheticSpec};
use ensaug::ensemble::train_specialist;
use ensaug::eval::accuracy;
use ensaug::model::{read_weights, train, write_weights};
use ensaug::make_splits;

fn main() -> ensaug::Result<()> {
    let cfg = RunConfig::default();
    let data = generate_synthetic(&SyntheticSpec::default(), 0)?;
    let splits = make_splits(&data, &cfg.split)?;
    let (tr, va, te) = (data.subset(&splits.train), data.subset(&splits.validation), data.subset(&splits.test));
    let model = cfg.experiment(&data).model;
    let tc = cfg.train.with_seed(1);

    let base = train(&tr, &va, &model, &tc)?;
    let aug = NamedAugmentation::preset("viewrot.yaw")?;
    let spec = train_specialist(&tr, &va, &aug, &model, &tc, DatasetMode::Append)?;
    for m in [&base, &spec] {
        let r = m.best_record();
        println!(
            "{:<12} best epoch {:>2}/{:<2}  val {:.3}  test {:.3}",
            m.tag,
            r.epoch,
            m.log().epochs.len(),
            r.validation_accuracy.unwrap_or(f64::NAN),
            accuracy(&m.predict(&te.sequences)?.0, &te.labels)?
        );
    }

    let bytes = write_weights(&spec)?;
    let back = read_weights(&bytes, "memory".as_ref())?;
    assert_eq!(back, spec);
    println!("weights: {} bytes, reload is exact", bytes.len());
    Ok(())
}
