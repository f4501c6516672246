use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use ensaug::augment::presets::catalogue;
use ensaug::cli::RunConfig;
use ensaug::dataio::decode_dataset;

const QUICK: &str = r#"
version = 1
seed = 3
runs = 2
augmentations = ["camdepth.range", "viewrot.yaw", "hvshift.linear"]

[dataset.synthetic]
class_count = 3
subjects = 6
sequences_per_subject_class = 3
frames = 20

[split]
mode = "by-subject"
train = [1, 2, 3]
validation = [4]
test = [5, 6]

[train]
max_epochs = 5
"#;

fn ensaug(args: &[&str], cwd: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ensaug"))
        .args(args)
        .current_dir(cwd)
        .env_remove("ENSAUG_OUT")
        .output()
        .unwrap()
}

fn ok(args: &[&str], cwd: &Path) -> String {
    let o = ensaug(args, cwd);
    assert!(o.status.success(), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    String::from_utf8(o.stdout).unwrap()
}

#[test]
fn pipeline_runs_end_to_end_and_reproduces() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("quick.toml"), QUICK).unwrap();
    let hash = RunConfig::from_toml(QUICK).unwrap().hash().unwrap();
    let c = ["--config", "quick.toml", "--out", "a"];
    let with = |extra: &[&'static str]| -> Vec<&str> { c.iter().copied().chain(extra.iter().copied()).collect() };

    ok(&with(&["synth"]), dir);
    ok(&with(&["augment", "--dataset", "a/synth/dataset.ensd", "--preset", "viewrot.yaw", "--gallery"]), dir);
    ok(&with(&["train", "--dataset", "a/synth/dataset.ensd", "--method", "specialist:viewrot.yaw"]), dir);
    ok(&with(&["ensemble", "--dataset", "a/synth/dataset.ensd"]), dir);
    let table = ok(&with(&["evaluate", "--dataset", "a/synth/dataset.ensd"]), dir);
    assert!(table.contains("Student-t"));
    ok(&with(&["ablate"]), dir);

    for f in [
        "synth/dataset.ensd",
        "augment/viewrot.yaw.ensd",
        "augment/gallery/viewrot.yaw.svg",
        "train/model.ensw",
        "train/summary.json",
        "ensemble/manifest.json",
        "ensemble/member_02.ensw",
        "evaluate/report.txt",
        "evaluate/accuracy.csv",
        "evaluate/accuracy.svg",
        "evaluate/sweep.svg",
        "evaluate/predictions.json",
        "ablate/summary.txt",
        "ablate/run_01/jaccard.csv",
    ] {
        assert!(dir.join("a").join(f).is_file(), "missing {f}");
    }
    for f in ["evaluate/report.txt", "evaluate/accuracy.csv", "ensemble/manifest.json", "ablate/sweep.csv"] {
        let text = fs::read_to_string(dir.join("a").join(f)).unwrap();
        assert!(text.contains(&hash), "{f} lacks the config hash");
    }
    // `--method` is part of the configuration, so it changes the hash
    let mut trained = RunConfig::from_toml(QUICK).unwrap();
    trained.train_method = "specialist:viewrot.yaw".parse().unwrap();
    let summary = fs::read_to_string(dir.join("a/train/summary.json")).unwrap();
    assert!(summary.contains(&trained.hash().unwrap()));
    let bytes = fs::read(dir.join("a/synth/dataset.ensd")).unwrap();
    let (_, manifest) = decode_dataset(&bytes, Path::new("x")).unwrap();
    assert_eq!(manifest.config_hash.as_deref(), Some(hash.as_str()));

    // a second output root from the environment variable gives identical tables
    let o = Command::new(env!("CARGO_BIN_EXE_ensaug"))
        .args(["--config", "quick.toml", "evaluate", "--dataset", "a/synth/dataset.ensd"])
        .current_dir(dir)
        .env("ENSAUG_OUT", "b")
        .output()
        .unwrap();
    assert!(o.status.success());
    for f in ["report.txt", "report.json", "accuracy.csv", "jaccard.csv", "sweep.csv", "accuracy.svg", "predictions.json"] {
        assert_eq!(
            fs::read(dir.join("a/evaluate").join(f)).unwrap(),
            fs::read(dir.join("b/evaluate").join(f)).unwrap(),
            "{f} differs between runs"
        );
    }

    let saved = ok(&with(&["--force", "evaluate", "--dataset", "a/synth/dataset.ensd", "--models", "a/ensemble/manifest.json"]), dir);
    assert!(saved.contains("specialist:viewrot.yaw"));
}

#[test]
fn outputs_are_write_once() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("quick.toml"), QUICK).unwrap();
    ok(&["--config", "quick.toml", "--out", "o", "synth"], dir);
    let before = fs::read(dir.join("o/synth/dataset.ensd")).unwrap();
    let again = ensaug(&["--config", "quick.toml", "--out", "o", "--seed", "9", "synth"], dir);
    assert_eq!(again.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&again.stderr).contains("--force"));
    assert_eq!(fs::read(dir.join("o/synth/dataset.ensd")).unwrap(), before);
    ok(&["--config", "quick.toml", "--out", "o", "--seed", "9", "--force", "synth"], dir);
    assert_ne!(fs::read(dir.join("o/synth/dataset.ensd")).unwrap(), before);
}

#[test]
fn errors_are_categorized() {
    let tmp = tempfile::tempdir().unwrap();
    let dir = tmp.path();
    fs::write(dir.join("bad.toml"), "version = 1\nmystery = true\n").unwrap();
    let o = ensaug(&["--config", "bad.toml", "synth"], dir);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("mystery"));
    let o = ensaug(&["--config", "missing.toml", "synth"], dir);
    assert_eq!(o.status.code(), Some(3));
    fs::write(dir.join("junk.ensd"), b"not a dataset").unwrap();
    let o = ensaug(&["--out", "o", "augment", "--dataset", "junk.ensd"], dir);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn list_augs_shows_the_catalogue() {
    let tmp = tempfile::tempdir().unwrap();
    let text = ok(&["list-augs"], tmp.path());
    for p in catalogue() {
        assert!(text.contains(p.name), "{}", p.name);
    }
}

#[test]
fn shipped_configs_are_valid() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    for name in ["default.toml", "quick.toml", "transformer.toml"] {
        let cfg = RunConfig::load(&dir.join(name)).unwrap();
        cfg.validate().unwrap();
    }
    let shipped = RunConfig::load(&dir.join("default.toml")).unwrap();
    assert_eq!(shipped.hash().unwrap(), RunConfig::default().hash().unwrap());
}
