//! Synthetic gesture benchmark.
//!
//! Each class is a motion template: every joint coordinate follows a rest
//! pose plus a sum of sinusoids with class-specific amplitudes, frequencies
//! and phases. Each sequence is one template seen through per-sequence
//! nuisances (playback speed, yaw about the frame centroid, depth scale,
//! linear planar drift) plus Gaussian noise. Subjects (numbered from 1) add a small persistent
//! distortion of the template amplitudes.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::augment::ops;
use crate::augment::{ParamRange, RotationAxis};
use crate::dataset::LabeledDataset;
use crate::error::{Error, Result};
use crate::landmarks::{LandmarkSequence, Point};
use crate::rng::{derive_rng, stream, Rng};
use crate::topology::SkeletonTopology;

/// Ranges the per-sequence nuisance parameters are drawn from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct NuisanceSpec {
    /// Multiplier on z coordinates.
    pub depth_scale: ParamRange,
    /// Final planar offset of a drift that grows linearly from zero, per axis.
    pub drift: ParamRange,
    /// Rotation about the vertical axis, degrees.
    pub yaw_deg: ParamRange,
    /// Template playback speed; 1 plays the template once over the sequence.
    pub speed: ParamRange,
}

impl Default for NuisanceSpec {
    fn default() -> Self {
        Self {
            depth_scale: ParamRange(0.6, 1.4),
            drift: ParamRange::symmetric(0.3),
            yaw_deg: ParamRange::symmetric(60.0),
            speed: ParamRange(0.75, 1.35),
        }
    }
}

impl NuisanceSpec {
    /// Every nuisance pinned to its identity value.
    pub fn none() -> Self {
        Self {
            depth_scale: ParamRange::fixed(1.0),
            drift: ParamRange::fixed(0.0),
            yaw_deg: ParamRange::fixed(0.0),
            speed: ParamRange::fixed(1.0),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SyntheticSpec {
    pub class_count: usize,
    pub subjects: u32,
    pub sequences_per_subject_class: usize,
    pub frames: usize,
    /// Topology preset name; fixes the joint count.
    pub topology: String,
    /// Sinusoids per coordinate in each template.
    pub harmonics: usize,
    /// Amplitude range of each template sinusoid.
    pub amplitude: ParamRange,
    /// Template frequencies in cycles per sequence.
    pub frequency: ParamRange,
    /// Relative per-subject distortion of template amplitudes.
    pub subject_variation: f64,
    pub noise_sigma: f64,
    pub nuisance: NuisanceSpec,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        Self {
            class_count: 5,
            subjects: 10,
            sequences_per_subject_class: 8,
            frames: 40,
            topology: "synth8".into(),
            harmonics: 2,
            amplitude: ParamRange(0.02, 0.12),
            frequency: ParamRange(0.5, 2.0),
            subject_variation: 0.15,
            noise_sigma: 0.10,
            nuisance: NuisanceSpec::default(),
        }
    }
}

/// Nuisance values one sequence was generated with.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct NuisanceDraw {
    pub depth_scale: f64,
    pub drift: [f64; 2],
    pub yaw_deg: f64,
    pub speed: f64,
}

#[derive(Debug, Clone)]
struct Wave {
    amp: f64,
    freq: f64,
    phase: f64,
}

/// `waves[joint][axis]`.
type Template = Vec<[Vec<Wave>; 3]>;

fn rest_pose(topo: &SkeletonTopology) -> Vec<Point> {
    if topo.name == "synth8" {
        vec![
            Point::new(0.0, 0.0, 0.0),
            Point::new(0.30, -0.30, 0.10),
            Point::new(0.50, -0.10, 0.20),
            Point::new(0.60, 0.00, 0.22),
            Point::new(0.65, 0.05, 0.22),
            Point::new(0.68, 0.09, 0.22),
            Point::new(0.70, 0.12, 0.22),
            Point::new(0.55, 0.05, 0.28),
        ]
    } else {
        (0..topo.joint_count())
            .map(|j| {
                let a = j as f64 * 0.9;
                Point::new(0.3 * a.cos(), 0.05 * j as f64, 0.3 * a.sin())
            })
            .collect()
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let err = |m: &str| Err(Error::Config(format!("synthetic spec: {m}")));
        if self.class_count < 2 || self.subjects == 0 || self.sequences_per_subject_class == 0 {
            return err("needs at least 2 classes, 1 subject and 1 sequence per subject and class");
        }
        if self.frames < 2 || self.harmonics == 0 {
            return err("frames must be >= 2 and harmonics >= 1");
        }
        let n = &self.nuisance;
        for (name, r) in [
            ("amplitude", self.amplitude),
            ("frequency", self.frequency),
            ("depth_scale", n.depth_scale),
            ("drift", n.drift),
            ("yaw_deg", n.yaw_deg),
            ("speed", n.speed),
        ] {
            if !(r.0.is_finite() && r.1.is_finite() && r.0 <= r.1) {
                return err(&format!("range {name} = [{}, {}] is not a valid interval", r.0, r.1));
            }
        }
        if n.depth_scale.0 <= 0.0 || n.speed.0 <= 0.0 {
            return err("depth_scale and speed must be positive");
        }
        if !(-180.0..=180.0).contains(&n.yaw_deg.0) || !(-180.0..=180.0).contains(&n.yaw_deg.1) {
            return err("yaw_deg must lie in [-180, 180]");
        }
        if !(self.noise_sigma >= 0.0) || !(self.subject_variation >= 0.0) {
            return err("noise_sigma and subject_variation must be nonnegative");
        }
        SkeletonTopology::preset(&self.topology)?;
        Ok(())
    }
}

fn draw_template(spec: &SyntheticSpec, joints: usize, rng: &mut Rng) -> Template {
    (0..joints)
        .map(|_| {
            std::array::from_fn(|_| {
                (0..spec.harmonics)
                    .map(|_| Wave {
                        amp: spec.amplitude.sample(rng),
                        freq: spec.frequency.sample(rng),
                        phase: rng.random_range(0.0..std::f64::consts::TAU),
                    })
                    .collect()
            })
        })
        .collect()
}

/// Template trajectory with per-joint amplitude gains, sampled at `phase = s * speed`.
fn render(rest: &[Point], template: &Template, gains: &[f64], frames: usize, speed: f64) -> Vec<Vec<Point>> {
    (0..frames)
        .map(|t| {
            let s = speed * t as f64 / (frames - 1) as f64;
            rest.iter()
                .zip(template)
                .zip(gains)
                .map(|((r, axes), g)| {
                    let mut p = *r;
                    for (a, waves) in axes.iter().enumerate() {
                        p[a] += g * waves
                            .iter()
                            .map(|w| w.amp * (std::f64::consts::TAU * w.freq * s + w.phase).sin())
                            .sum::<f64>();
                    }
                    p
                })
                .collect()
        })
        .collect()
}

/// Euclidean distance between two trajectories viewed as `T * J * 3` vectors.
fn trajectory_distance(a: &[Vec<Point>], b: &[Vec<Point>]) -> f64 {
    a.iter()
        .zip(b)
        .flat_map(|(fa, fb)| fa.iter().zip(fb).map(|(pa, pb)| (pa - pb).norm_squared()))
        .sum::<f64>()
        .sqrt()
}

/// Generate the benchmark; identical `(spec, seed)` give bit-identical data.
pub fn generate_synthetic(spec: &SyntheticSpec, seed: u64) -> Result<LabeledDataset> {
    Ok(generate_synthetic_detailed(spec, seed)?.0)
}

/// [`generate_synthetic`] plus the nuisance values of every sequence.
pub fn generate_synthetic_detailed(spec: &SyntheticSpec, seed: u64) -> Result<(LabeledDataset, Vec<NuisanceDraw>)> {
    spec.validate()?;
    let topo = SkeletonTopology::preset(&spec.topology)?;
    let joints = topo.joint_count();
    let rest = rest_pose(&topo);
    let mut trng = derive_rng(seed, &[stream::SYNTH, 0]);
    let templates: Vec<Template> = (0..spec.class_count).map(|_| draw_template(spec, joints, &mut trng)).collect();

    // Classes must stay apart by a margin well above the noise level.
    let unit = vec![1.0; joints];
    let clean: Vec<_> = templates.iter().map(|tp| render(&rest, tp, &unit, spec.frames, 1.0)).collect();
    let margin = 3.0 * spec.noise_sigma.max(1e-9);
    for a in 0..clean.len() {
        for b in a + 1..clean.len() {
            let d = trajectory_distance(&clean[a], &clean[b]);
            if d < margin {
                return Err(Error::Config(format!(
                    "synthetic templates {a} and {b} are only {d:.3e} apart (need >= {margin:.3e})"
                )));
            }
        }
    }

    let noise = Normal::new(0.0, spec.noise_sigma).map_err(|e| Error::Config(e.to_string()))?;
    let mut sequences = vec![];
    let mut labels = vec![];
    let mut subject_ids = vec![];
    let mut draws = vec![];
    for subject in 0..spec.subjects {
        let mut srng = derive_rng(seed, &[stream::SYNTH, 1, subject as u64]);
        let gains: Vec<Vec<f64>> = (0..spec.class_count)
            .map(|_| {
                (0..joints)
                    .map(|_| 1.0 + spec.subject_variation * srng.random_range(-1.0..=1.0))
                    .collect()
            })
            .collect();
        for class in 0..spec.class_count {
            for k in 0..spec.sequences_per_subject_class {
                let mut rng = derive_rng(seed, &[stream::SYNTH, 2, subject as u64, class as u64, k as u64]);
                let n = &spec.nuisance;
                let draw = NuisanceDraw {
                    speed: n.speed.sample(&mut rng),
                    yaw_deg: n.yaw_deg.sample(&mut rng),
                    depth_scale: n.depth_scale.sample(&mut rng),
                    drift: [n.drift.sample(&mut rng), n.drift.sample(&mut rng)],
                };
                let frames = render(&rest, &templates[class], &gains[class], spec.frames, draw.speed);
                let seq = LandmarkSequence::from_frames(frames)?;
                let seq = ops::view_rot_with(&seq, &ops::rotation(&RotationAxis::Yaw, draw.yaw_deg)?);
                let seq = ops::cam_depth(&seq, draw.depth_scale)?;
                let dx = ops::linear_ramp(0.0, draw.drift[0], spec.frames);
                let dy = ops::linear_ramp(0.0, draw.drift[1], spec.frames);
                let mut seq = ops::hv_shift(&seq, &dx, &dy)?;
                if spec.noise_sigma > 0.0 {
                    seq = seq.map_real_frames(|_, f| {
                        for p in f {
                            for a in 0..3 {
                                p[a] += noise.sample(&mut rng);
                            }
                        }
                    });
                }
                sequences.push(seq);
                labels.push(class);
                subject_ids.push(subject + 1);
                draws.push(draw);
            }
        }
    }
    let class_names = (0..spec.class_count).map(|c| format!("gesture{c}")).collect();
    let data = LabeledDataset::new(sequences, labels, class_names, subject_ids, topo)?;
    Ok((data, draws))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_spec_gives_identical_class_members() {
        let spec = SyntheticSpec {
            subjects: 2,
            sequences_per_subject_class: 3,
            noise_sigma: 0.0,
            subject_variation: 0.0,
            nuisance: NuisanceSpec::none(),
            ..Default::default()
        };
        let d = generate_synthetic(&spec, 4).unwrap();
        for c in 0..spec.class_count {
            let members: Vec<_> = (0..d.len()).filter(|&i| d.labels[i] == c).collect();
            for &i in &members[1..] {
                assert_eq!(d.sequences[i], d.sequences[members[0]]);
            }
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let spec = SyntheticSpec::default();
        assert_eq!(generate_synthetic(&spec, 1).unwrap(), generate_synthetic(&spec, 1).unwrap());
        assert_ne!(generate_synthetic(&spec, 1).unwrap(), generate_synthetic(&spec, 2).unwrap());
    }

    #[test]
    fn default_spec_covers_nuisance_ranges() {
        let spec = SyntheticSpec::default();
        let (d, draws) = generate_synthetic_detailed(&spec, 0).unwrap();
        assert_eq!(d.len(), 400);
        assert_eq!(d.sequences[0].joints(), 8);
        assert_eq!(d.sequences[0].len(), 40);
        let n = &spec.nuisance;
        let cover = |vals: Vec<f64>, r: ParamRange| {
            let lo = vals.iter().cloned().fold(f64::INFINITY, f64::min);
            let hi = vals.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
            let span = r.1 - r.0;
            assert!(vals.iter().all(|v| r.contains(*v)));
            assert!(lo - r.0 < 0.05 * span && r.1 - hi < 0.05 * span, "[{lo}, {hi}] vs {r:?}");
        };
        cover(draws.iter().map(|x| x.depth_scale).collect(), n.depth_scale);
        cover(draws.iter().map(|x| x.yaw_deg).collect(), n.yaw_deg);
        cover(draws.iter().map(|x| x.speed).collect(), n.speed);
        cover(draws.iter().flat_map(|x| x.drift).collect(), n.drift);
    }

    #[test]
    fn degenerate_templates_are_rejected() {
        let spec = SyntheticSpec {
            amplitude: ParamRange::fixed(0.0),
            ..Default::default()
        };
        assert!(generate_synthetic(&spec, 0).is_err());
    }
}
