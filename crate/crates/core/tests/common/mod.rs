//! Shared helpers for integration tests: random skeletons and the geometric
//! invariant checks of every augmentation family.

#![allow(dead_code)]

use ensaug::augment::ops;
use ensaug::augment::presets::catalogue;
use ensaug::augment::{AugmentationKind, Direction, Ramp, RotationAxis};
use ensaug::rng::{derive_rng, Rng};
use ensaug::{LandmarkSequence, Point, SkeletonTopology};
use rand::Rng as _;

pub fn random_sequence(rng: &mut Rng, frames: usize, joints: usize) -> LandmarkSequence {
    let frames = (0..frames)
        .map(|_| {
            (0..joints)
                .map(|_| Point::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(0.2..2.0)))
                .collect()
        })
        .collect();
    LandmarkSequence::from_frames(frames).unwrap()
}

/// One invariant's measured deviation and the largest deviation allowed.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self { name: name.into(), deviation, tolerance }
    }

    pub fn passed(&self) -> bool {
        self.deviation <= self.tolerance
    }
}

fn pairwise_dev(a: &[Point], b: &[Point], group: &[usize]) -> f64 {
    let mut worst = 0.0f64;
    for (i, &p) in group.iter().enumerate() {
        for &q in &group[i + 1..] {
            worst = worst.max(((a[p] - a[q]).norm() - (b[p] - b[q]).norm()).abs());
        }
    }
    worst
}

fn centroid(f: &[Point]) -> Point {
    f.iter().fold(Point::zeros(), |s, p| s + p) / f.len() as f64
}

fn frames<'a>(a: &'a LandmarkSequence, b: &'a LandmarkSequence) -> impl Iterator<Item = (&'a [Point], &'a [Point])> {
    a.real_indices().map(move |t| (a.frame(t), b.frame(t)))
}

fn max_over(a: &LandmarkSequence, b: &LandmarkSequence, f: impl Fn(&[Point], &[Point]) -> f64) -> f64 {
    frames(a, b).map(|(x, y)| f(x, y)).fold(0.0, f64::max)
}

fn identity_dev(a: &LandmarkSequence, b: &LandmarkSequence) -> f64 {
    a.points().iter().zip(b.points()).map(|(p, q)| (p - q).amax()).fold(0.0, f64::max)
}

/// Invariants that must hold for any parameters of `kind`.
pub fn family_checks(kind: AugmentationKind, topo: &SkeletonTopology, before: &LandmarkSequence, after: &LandmarkSequence, prefix: &str) -> Vec<Check> {
    let all: Vec<usize> = (0..topo.joint_count()).collect();
    let n = |s: &str| format!("{prefix}{s}");
    match kind {
        AugmentationKind::ViewRot => vec![
            Check::new(n("viewrot.distances"), max_over(before, after, |a, b| pairwise_dev(a, b, &all)), 1e-9),
            Check::new(n("viewrot.centroid"), max_over(before, after, |a, b| (centroid(a) - centroid(b)).amax()), 1e-9),
        ],
        AugmentationKind::CamDepth | AugmentationKind::TempDepth => {
            let xy = max_over(before, after, |a, b| {
                a.iter().zip(b).map(|(p, q)| if p.x == q.x && p.y == q.y { 0.0 } else { 1.0 }).fold(0.0, f64::max)
            });
            vec![Check::new(n("depth.xy_bit_identical"), xy, 0.0)]
        }
        AugmentationKind::HvShift => vec![Check::new(
            n("hvshift.distances"),
            max_over(before, after, |a, b| pairwise_dev(a, b, &all)),
            1e-12,
        )],
        AugmentationKind::ElbowDisp => {
            let d = topo
                .hands
                .iter()
                .map(|h| max_over(before, after, |a, b| pairwise_dev(a, b, &h.joints)))
                .fold(0.0, f64::max);
            vec![Check::new(n("elbowdisp.hand_distances"), d, 1e-12)]
        }
        AugmentationKind::HandSize => {
            let wrist = topo
                .hands
                .iter()
                .map(|h| max_over(before, after, |a, b| if a[h.wrist] == b[h.wrist] { 0.0 } else { 1.0 }))
                .fold(0.0, f64::max);
            // one common ratio |p' - w| / |p - w| across every joint and frame
            let mut ratios = vec![];
            for (a, b) in frames(before, after) {
                for h in &topo.hands {
                    for &j in h.joints.iter().filter(|&&j| j != h.wrist) {
                        ratios.push((b[j] - b[h.wrist]).norm() / (a[j] - a[h.wrist]).norm());
                    }
                }
            }
            let spread = ratios.iter().map(|r| (r - ratios[0]).abs()).fold(0.0, f64::max);
            vec![
                Check::new(n("handsize.wrist_fixed"), wrist, 0.0),
                Check::new(n("handsize.uniform_ratio"), spread, 1e-12),
            ]
        }
        AugmentationKind::FingerFold => {
            let d = topo
                .hands
                .iter()
                .flat_map(|h| h.fingers.iter())
                .map(|c| {
                    max_over(before, after, |a, b| {
                        (0..3).map(|k| ((a[c[k + 1]] - a[c[k]]).norm() - (b[c[k + 1]] - b[c[k]]).norm()).abs()).fold(0.0, f64::max)
                    })
                })
                .fold(0.0, f64::max);
            vec![Check::new(n("fingerfold.segment_lengths"), d, 1e-9)]
        }
        AugmentationKind::TimeWarp => {
            let real: Vec<usize> = before.real_indices().collect();
            let (f, l) = (real[0], *real.last().unwrap());
            let d = [f, l]
                .iter()
                .flat_map(|&t| before.frame(t).iter().zip(after.frame(t)).map(|(p, q)| (p - q).amax()))
                .fold(0.0, f64::max);
            vec![Check::new(n("timewarp.endpoints"), d, 1e-12)]
        }
    }
}

/// Every invariant on one sequence: random parameters drawn from `seed` at
/// the operation level, each catalogue preset, and neutral parameters.
pub fn all_checks(topo: &SkeletonTopology, seq: &LandmarkSequence, seed: u64) -> Vec<Check> {
    use AugmentationKind as K;
    let mut rng = derive_rng(seed, &[]);
    let len = seq.len();
    let mut out = vec![];

    let axis = RotationAxis::Vector([rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)]);
    let angle = rng.random_range(-180.0..180.0);
    out.extend(family_checks(K::ViewRot, topo, seq, &ops::view_rot(seq, &axis, angle).unwrap(), ""));

    let s = rng.random_range(0.5..1.5);
    out.extend(family_checks(K::CamDepth, topo, seq, &ops::cam_depth(seq, s).unwrap(), ""));
    let sched = ops::linear_ramp(rng.random_range(0.5..1.5), rng.random_range(0.5..1.5), len);
    out.extend(family_checks(K::TempDepth, topo, seq, &ops::temp_depth(seq, &sched).unwrap(), ""));

    let dx: Vec<f64> = (0..len).map(|_| rng.random_range(-0.3..0.3)).collect();
    let dy: Vec<f64> = (0..len).map(|_| rng.random_range(-0.3..0.3)).collect();
    out.extend(family_checks(K::HvShift, topo, seq, &ops::hv_shift(seq, &dx, &dy).unwrap(), ""));

    let alpha = rng.random_range(0.5..1.5);
    let sized = ops::hand_size(seq, topo, alpha).unwrap();
    out.extend(family_checks(K::HandSize, topo, seq, &sized, ""));
    let mut scale_err = 0.0f64;
    for (a, b) in frames(seq, &sized) {
        for h in &topo.hands {
            for &j in &h.joints {
                let want = (a[j] - a[h.wrist]).norm() * alpha;
                scale_err = scale_err.max(((b[j] - b[h.wrist]).norm() - want).abs());
            }
        }
    }
    out.push(Check::new("handsize.scaled_by_alpha", scale_err, 1e-12));

    let progression: Vec<f64> = (0..rng.random_range(1..5)).map(|_| rng.random_range(0.0..1.0)).collect();
    let angles = [rng.random_range(0.0..120.0), rng.random_range(0.0..120.0), rng.random_range(0.0..120.0)];
    let folded = ops::finger_fold(seq, topo, &progression, angles).unwrap().sequence;
    out.extend(family_checks(K::FingerFold, topo, seq, &folded, ""));

    let dir = if rng.random_bool(0.5) { Direction::Inward } else { Direction::Outward };
    let ramp = if rng.random_bool(0.5) { Ramp::Linear } else { Ramp::Constant };
    let moved = ops::elbow_disp(seq, topo, dir, rng.random_range(0.0..0.5), ramp).unwrap();
    out.extend(family_checks(K::ElbowDisp, topo, seq, &moved, ""));

    let warped = ops::time_warp(seq, rng.random_range(0.05..0.4), rng.random_range(1..6), &mut rng).unwrap();
    out.extend(family_checks(K::TimeWarp, topo, seq, &warped, ""));

    for p in catalogue() {
        if !p.spec.supports(topo) {
            continue;
        }
        let after = p.spec.apply(seq, topo, &mut rng).unwrap();
        out.extend(family_checks(p.spec.kind(), topo, seq, &after, "preset."));
    }

    let neutral = [
        ("cam", ops::cam_depth(seq, 1.0).unwrap()),
        ("temp", ops::temp_depth(seq, &vec![1.0; len]).unwrap()),
        ("hv", ops::hv_shift(seq, &vec![0.0; len], &vec![0.0; len]).unwrap()),
        ("hand", ops::hand_size(seq, topo, 1.0).unwrap()),
        ("rot", ops::view_rot(seq, &axis, 0.0).unwrap()),
        ("fold", ops::finger_fold(seq, topo, &[0.0], angles).unwrap().sequence),
        ("elbow", ops::elbow_disp(seq, topo, dir, 0.0, ramp).unwrap()),
        ("warp", ops::time_warp_with(seq, &(0..seq.real_count()).map(|t| t as f64).collect::<Vec<_>>()).unwrap()),
    ];
    for (name, after) in neutral {
        out.push(Check::new(format!("neutral.{name}"), identity_dev(seq, &after), 1e-12));
    }
    out
}
