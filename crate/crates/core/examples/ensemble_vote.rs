//! Hard and soft voting, the tie rule, and a small trained ensemble saved to
//! disk with its manifest.
//!
//! cargo run --release -p ensaug --example ensemble_vote

use ensaug::augment::NamedAugmentation;
use ensaug::cli::RunConfig;
use ensaug::dataio::{generate_synthetic, SyntheticSpec};
use ensaug::ensemble::{hard_vote, load_ensemble, save_ensemble, soft_vote, train_ensaug, TIE_POLICY};
use ensaug::eval::accuracy;
use ensaug::make_splits;

fn main() -> ensaug::Result<()> {
    let probs = vec![vec![0.6, 0.4, 0.0], vec![0.1, 0.9, 0.0], vec![0.2, 0.3, 0.5]];
    println!("tie rule: {TIE_POLICY}");
    println!("labels [0, 1, 2] -> hard vote {}", hard_vote(&[0, 1, 2], &probs));
    println!("labels [1, 1, 2] -> hard vote {}", hard_vote(&[1, 1, 2], &probs));
    println!("soft vote {}", soft_vote(&probs));

    let cfg = RunConfig::default();
    let data = generate_synthetic(&SyntheticSpec::default(), 0)?;
    let splits = make_splits(&data, &cfg.split)?;
    let (tr, va, te) = (data.subset(&splits.train), data.subset(&splits.validation), data.subset(&splits.test));
    let augs: Vec<_> = ["camdepth.range", "hvshift.linear", "viewrot.yaw"]
        .iter()
        .map(|n| NamedAugmentation::preset(n))
        .collect::<ensaug::Result<_>>()?;
    let ens = train_ensaug(&tr, &va, &augs, &cfg.experiment(&data).model, &cfg.train.with_seed(2), cfg.ensemble)?;
    let p = ens.predict(&te.sequences)?;
    for (m, labels) in ens.members().iter().zip(&p.member_labels) {
        println!("  {:<16} {:.3}", m.tag, accuracy(labels, &te.labels)?);
    }
    println!("  {:<16} {:.3}", "ensemble", accuracy(&p.labels, &te.labels)?);

    let dir = std::env::temp_dir().join(format!("ensaug-ensemble-{}", std::process::id()));
    let manifest = save_ensemble(&dir, &ens, None)?;
    let back = load_ensemble(&manifest)?;
    assert_eq!(back.predict(&te.sequences)?, p);
    println!("reloaded from {} with identical predictions", manifest.display());
    std::fs::remove_dir_all(&dir).ok();
    Ok(())
}
