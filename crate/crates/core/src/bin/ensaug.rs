use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use ensaug::cli::{list_augs, RunConfig, Session, OUT_ENV};
use ensaug::eval::Method;
use ensaug::Error;

/// Geometry-aware augmentation ensembles for skeletal motion sequences.
#[derive(Parser)]
#[command(name = "ensaug", version)]
struct Cli {
    /// TOML run configuration; built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed, replacing the configured one.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output root, replacing the configured one.
    #[arg(long, global = true, env = OUT_ENV)]
    out: Option<PathBuf>,
    /// Worker threads; defaults to the number of augmentations, capped at the core count.
    #[arg(long, global = true)]
    jobs: Option<usize>,
    /// Overwrite existing outputs.
    #[arg(long, global = true)]
    force: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Generate the configured synthetic dataset.
    Synth,
    /// Write augmented copies of a dataset.
    Augment {
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Preset to apply; repeatable. Defaults to the configured list.
        #[arg(long)]
        preset: Vec<String>,
        /// Also draw before/after trajectories.
        #[arg(long)]
        gallery: bool,
    },
    /// Train one model (baseline, generalist, bagging or specialist:<preset>).
    Train {
        #[arg(long)]
        dataset: Option<PathBuf>,
        #[arg(long)]
        method: Option<Method>,
    },
    /// Train and save the specialist ensemble.
    Ensemble {
        #[arg(long)]
        dataset: Option<PathBuf>,
    },
    /// Run the multi-run comparison, or score a saved ensemble with --models.
    Evaluate {
        #[arg(long)]
        dataset: Option<PathBuf>,
        /// Ensemble manifest written by `ensemble`.
        #[arg(long)]
        models: Option<PathBuf>,
    },
    /// Error overlap and subset sweep from cached predictions.
    Ablate {
        /// Defaults to `<out>/evaluate/predictions.json`.
        #[arg(long)]
        predictions: Option<PathBuf>,
    },
    /// Print the augmentation preset catalogue.
    ListAugs,
}

fn run(cli: Cli) -> Result<Vec<PathBuf>, Error> {
    if let Command::ListAugs = cli.command {
        print!("{}", list_augs());
        return Ok(vec![]);
    }
    let mut config = match &cli.config {
        Some(p) => RunConfig::load(p)?,
        None => RunConfig::default(),
    };
    if let Some(s) = cli.seed {
        config.seed = s;
    }
    if let Command::Train { method: Some(m), .. } = &cli.command {
        config.train_method = m.clone();
    }
    let cores = std::thread::available_parallelism().map_or(1, |n| n.get());
    let jobs = cli.jobs.unwrap_or_else(|| config.augmentations.len().clamp(1, cores));
    rayon::ThreadPoolBuilder::new()
        .num_threads(jobs.max(1))
        .build_global()
        .map_err(|e| Error::Config(format!("thread pool: {e}")))?;

    let session = Session::new(config, cli.out, cli.force)?;
    match cli.command {
        Command::Synth => session.synth(),
        Command::Augment { dataset, preset, gallery } => session.augment(dataset.as_deref(), &preset, gallery),
        Command::Train { dataset, .. } => session.train(dataset.as_deref()),
        Command::Ensemble { dataset } => session.ensemble(dataset.as_deref()),
        Command::Evaluate { dataset, models } => {
            let (report, paths) = session.evaluate(dataset.as_deref(), models.as_deref())?;
            print!("{}", ensaug::eval::text_table(&report));
            Ok(paths)
        }
        Command::Ablate { predictions } => session.ablate(predictions.as_deref()),
        Command::ListAugs => unreachable!(),
    }
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Config(_) | Error::Parameter(_) | Error::UnknownPreset(_) | Error::UnknownSubjects(_) => 2,
        Error::Io { .. } | Error::Exists(_) => 3,
        Error::Corrupt { .. } | Error::Version { .. } | Error::Import { .. } | Error::Dataset(_) => 4,
        _ => 1,
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(paths) => {
            for p in paths {
                println!("wrote {}", p.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(exit_code(&e))
        }
    }
}
