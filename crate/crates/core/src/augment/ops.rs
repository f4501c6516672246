//! The eight geometry-aware transformations as pure functions of already
//! sampled parameters. Padded frames pass through every operation unchanged.

use nalgebra::{Rotation3, Unit};
use rand::Rng as _;
use rand_distr::{Distribution, Normal};

use crate::error::{Error, Result};
use crate::landmarks::{centroid, LandmarkSequence, Point};
use crate::rng::Rng;
use crate::topology::SkeletonTopology;

use super::spec::{Direction, Ramp, RotationAxis};

/// Default maximum fold angles in degrees at the MCP, PIP and DIP joints.
pub const DEFAULT_FOLD_ANGLES_DEG: [f64; 3] = [90.0, 100.0, 70.0];

fn check_len(name: &str, got: usize, seq: &LandmarkSequence) -> Result<()> {
    if got != seq.len() {
        return Err(Error::Shape(format!(
            "{name} schedule has {got} entries, sequence has {} frames",
            seq.len()
        )));
    }
    Ok(())
}

/// Position of frame `t` in `[0, 1]` across a sequence of `len` frames.
pub(crate) fn phase(t: usize, len: usize) -> f64 {
    if len <= 1 {
        0.0
    } else {
        t as f64 / (len - 1) as f64
    }
}

/// Scale every z coordinate by `s`.
pub fn cam_depth(seq: &LandmarkSequence, s: f64) -> Result<LandmarkSequence> {
    if !(s > 0.0) {
        return Err(Error::param(format!("depth scale must be > 0, got {s}")));
    }
    Ok(seq.map_real_frames(|_, frame| {
        for p in frame {
            p.z *= s;
        }
    }))
}

/// Scale the z coordinates of frame `t` by `schedule[t]`.
pub fn temp_depth(seq: &LandmarkSequence, schedule: &[f64]) -> Result<LandmarkSequence> {
    check_len("depth", schedule.len(), seq)?;
    if let Some(s) = schedule.iter().find(|s| !(**s > 0.0)) {
        return Err(Error::param(format!("depth schedule entries must be > 0, got {s}")));
    }
    Ok(seq.map_real_frames(|t, frame| {
        for p in frame {
            p.z *= schedule[t];
        }
    }))
}

/// Linear depth ramp from `start` to `end`.
pub fn linear_ramp(start: f64, end: f64, len: usize) -> Vec<f64> {
    (0..len)
        .map(|t| start + (end - start) * phase(t, len))
        .collect()
}

/// One raised-cosine cycle: `min` at both ends, `max` at the midpoint.
pub fn sine_cycle(min: f64, max: f64, len: usize) -> Vec<f64> {
    let mid = 0.5 * (min + max);
    let amp = 0.5 * (max - min);
    (0..len)
        .map(|t| mid - amp * (std::f64::consts::TAU * phase(t, len)).cos())
        .collect()
}

/// `amp * sin(2 pi freq t / (T - 1))`, starting at zero.
pub fn sine_shift(amp: f64, freq: f64, len: usize) -> Vec<f64> {
    (0..len)
        .map(|t| amp * (std::f64::consts::TAU * freq * phase(t, len)).sin())
        .collect()
}

/// Translate frame `t` by `(dx[t], dy[t], 0)`.
pub fn hv_shift(seq: &LandmarkSequence, dx: &[f64], dy: &[f64]) -> Result<LandmarkSequence> {
    check_len("x shift", dx.len(), seq)?;
    check_len("y shift", dy.len(), seq)?;
    Ok(seq.map_real_frames(|t, frame| {
        for p in frame {
            p.x += dx[t];
            p.y += dy[t];
        }
    }))
}

/// Scale each hand about its wrist by `alpha`.
pub fn hand_size(
    seq: &LandmarkSequence,
    topo: &SkeletonTopology,
    alpha: f64,
) -> Result<LandmarkSequence> {
    if !(alpha > 0.0) {
        return Err(Error::param(format!("hand scale must be > 0, got {alpha}")));
    }
    if !topo.has_hands() {
        return Err(Error::Topology("no hand joints".into()));
    }
    Ok(seq.map_real_frames(|_, frame| {
        for hand in &topo.hands {
            let w = frame[hand.wrist];
            for &j in &hand.joints {
                if j != hand.wrist {
                    frame[j] = w + (frame[j] - w) * alpha;
                }
            }
        }
    }))
}

/// Rotation for a named axis and an angle in degrees.
///
/// Right-handed: yaw about +y, pitch about +x, roll about +z.
pub fn rotation(axis: &RotationAxis, angle_deg: f64) -> Result<Rotation3<f64>> {
    let v = match axis {
        RotationAxis::Yaw => Point::y(),
        RotationAxis::Pitch => Point::x(),
        RotationAxis::Roll => Point::z(),
        RotationAxis::Vector(v) => Point::new(v[0], v[1], v[2]),
        RotationAxis::RandomUnit => {
            return Err(Error::param(
                "random axis must be sampled before building a rotation",
            ))
        }
    };
    let unit = Unit::try_new(v, 1e-12).ok_or_else(|| Error::param("zero rotation axis"))?;
    Ok(Rotation3::from_axis_angle(&unit, angle_deg.to_radians()))
}

/// Rotate each frame about its own centroid.
pub fn view_rot_with(seq: &LandmarkSequence, r: &Rotation3<f64>) -> LandmarkSequence {
    seq.map_real_frames(|_, frame| {
        let c = centroid(frame);
        for p in frame {
            *p = r * (*p - c) + c;
        }
    })
}

pub fn view_rot(
    seq: &LandmarkSequence,
    axis: &RotationAxis,
    angle_deg: f64,
) -> Result<LandmarkSequence> {
    if !(-180.0..=180.0).contains(&angle_deg) {
        return Err(Error::param(format!("rotation angle {angle_deg} outside [-180, 180]")));
    }
    Ok(view_rot_with(seq, &rotation(axis, angle_deg)?))
}

/// Fold fraction for frame `t`: the sequence is cut into
/// `progression.len()` equal buckets with a constant fraction per bucket.
pub fn fold_fraction(progression: &[f64], t: usize, len: usize) -> f64 {
    let b = progression.len();
    progression[(t * b / len.max(1)).min(b - 1)]
}

/// Result of a finger fold, with the number of fingers skipped because a
/// segment was degenerate.
#[derive(Debug, Clone)]
pub struct FoldOutcome {
    pub sequence: LandmarkSequence,
    pub skipped_fingers: usize,
}

/// Rotate the three segments of a finger chain in place.
///
/// Follows the chain recurrence: each joint is the new position of its
/// predecessor plus the original segment vector rotated by that joint's
/// rotation.
pub fn fold_chain(chain: [Point; 4], rotations: &[Rotation3<f64>; 3]) -> [Point; 4] {
    let [f0, f1, f2, f3] = chain;
    let n1 = f0 + rotations[0] * (f1 - f0);
    let n2 = n1 + rotations[1] * (f2 - f1);
    let n3 = n2 + rotations[2] * (f3 - f2);
    [f0, n1, n2, n3]
}

/// Palm reference direction for a hand at one frame.
fn palm_reference(frame: &[Point], topo: &SkeletonTopology, hand: usize) -> Point {
    let h = &topo.hands[hand];
    let w = frame[h.wrist];
    if h.fingers.len() >= 2 {
        let a = frame[h.fingers[0][0]] - w;
        let b = frame[h.fingers[h.fingers.len() - 1][0]] - w;
        let n = a.cross(&b);
        if n.norm() > 1e-9 {
            return n.normalize();
        }
    }
    if let Some(torso) = topo.torso_point(frame) {
        let d = torso - w;
        if d.norm() > 1e-9 {
            return d.normalize();
        }
    }
    Point::z()
}

/// Fold axes per finger (hand-major order), computed from the first real
/// frame; `None` marks a finger whose geometry is degenerate.
pub fn fold_axes(seq: &LandmarkSequence, topo: &SkeletonTopology) -> Vec<Option<Point>> {
    let Some(t0) = seq.real_indices().next() else {
        return topo.hands.iter().flat_map(|h| h.fingers.iter().map(|_| None)).collect();
    };
    let frame = seq.frame(t0);
    let mut axes = Vec::new();
    for (h, hand) in topo.hands.iter().enumerate() {
        let reference = palm_reference(frame, topo, h);
        for chain in &hand.fingers {
            let segs = [
                frame[chain[1]] - frame[chain[0]],
                frame[chain[2]] - frame[chain[1]],
                frame[chain[3]] - frame[chain[2]],
            ];
            if segs.iter().any(|s| s.norm() < 1e-12) {
                axes.push(None);
                continue;
            }
            let axis = reference.cross(&segs[0]);
            axes.push((axis.norm() > 1e-9).then(|| axis.normalize()));
        }
    }
    axes
}

/// Progressive finger fold about explicit per-finger axes (hand-major order).
pub fn finger_fold_about(
    seq: &LandmarkSequence,
    topo: &SkeletonTopology,
    progression: &[f64],
    max_angles_deg: [f64; 3],
    axes: &[Option<Point>],
) -> Result<FoldOutcome> {
    if progression.is_empty() {
        return Err(Error::param("fold progression is empty"));
    }
    if progression.iter().any(|f| !(0.0..=1.0).contains(f)) {
        return Err(Error::param("fold fractions must lie in [0, 1]"));
    }
    if !topo.has_fingers() {
        return Err(Error::Topology("no finger chains".into()));
    }
    let chains: Vec<[usize; 4]> = topo.hands.iter().flat_map(|h| h.fingers.iter().copied()).collect();
    if axes.len() != chains.len() {
        return Err(Error::Shape(format!(
            "{} fold axes for {} fingers",
            axes.len(),
            chains.len()
        )));
    }
    let units: Vec<Option<Unit<Point>>> = axes
        .iter()
        .map(|a| a.and_then(|v| Unit::try_new(v, 1e-12)))
        .collect();
    let skipped = units.iter().filter(|u| u.is_none()).count();
    let len = seq.len();
    let sequence = seq.map_real_frames(|t, frame| {
        let frac = fold_fraction(progression, t, len);
        for (chain, axis) in chains.iter().zip(&units) {
            let Some(axis) = axis else { continue };
            let rots = max_angles_deg.map(|a| Rotation3::from_axis_angle(axis, (frac * a).to_radians()));
            let folded = fold_chain(chain.map(|j| frame[j]), &rots);
            for (k, &j) in chain.iter().enumerate() {
                frame[j] = folded[k];
            }
        }
    });
    Ok(FoldOutcome {
        sequence,
        skipped_fingers: skipped,
    })
}

/// Progressive finger fold with axes derived from the hand geometry.
pub fn finger_fold(
    seq: &LandmarkSequence,
    topo: &SkeletonTopology,
    progression: &[f64],
    max_angles_deg: [f64; 3],
) -> Result<FoldOutcome> {
    let axes = fold_axes(seq, topo);
    finger_fold_about(seq, topo, progression, max_angles_deg, &axes)
}

fn ramp_weight(ramp: Ramp, t: usize, len: usize) -> f64 {
    match ramp {
        Ramp::Constant => 1.0,
        Ramp::Linear => phase(t, len),
    }
}

/// Translate each hand toward (inward) or away from (outward) the torso.
pub fn elbow_disp(
    seq: &LandmarkSequence,
    topo: &SkeletonTopology,
    direction: Direction,
    intensity: f64,
    ramp: Ramp,
) -> Result<LandmarkSequence> {
    if !(intensity >= 0.0) {
        return Err(Error::param(format!("intensity must be >= 0, got {intensity}")));
    }
    if topo.torso.is_none() {
        return Err(Error::Topology("topology has no torso reference".into()));
    }
    if !topo.has_hands() {
        return Err(Error::Topology("no hand joints".into()));
    }
    let sign = match direction {
        Direction::Inward => 1.0,
        Direction::Outward => -1.0,
    };
    let len = seq.len();
    Ok(seq.map_real_frames(|t, frame| {
        let torso = topo.torso_point(frame).expect("torso checked above");
        let w = ramp_weight(ramp, t, len);
        let shifts: Vec<Point> = topo
            .hands
            .iter()
            .map(|hand| {
                let hc = hand.joints.iter().fold(Point::zeros(), |a, &j| a + frame[j])
                    / hand.joints.len() as f64;
                let toward = torso - hc;
                let n = toward.norm();
                if n < 1e-12 {
                    Point::zeros()
                } else {
                    toward * (sign * intensity * w / n)
                }
            })
            .collect();
        for (hand, d) in topo.hands.iter().zip(shifts) {
            for &j in &hand.joints {
                frame[j] += d;
            }
        }
    }))
}

/// `out[t'] = L[tau[t']]` with linear interpolation between real frames.
///
/// `tau` indexes the real frames of the sequence (padding excluded) and must
/// have one entry per real frame, each within `[0, real_count - 1]`.
pub fn time_warp_with(seq: &LandmarkSequence, tau: &[f64]) -> Result<LandmarkSequence> {
    let real: Vec<usize> = seq.real_indices().collect();
    if tau.len() != real.len() {
        return Err(Error::Shape(format!(
            "warp has {} entries, sequence has {} real frames",
            tau.len(),
            real.len()
        )));
    }
    let last = real.len().saturating_sub(1) as f64;
    if tau.iter().any(|&x| !(0.0..=last).contains(&x)) {
        return Err(Error::param("warp positions must lie inside the sequence"));
    }
    let mut out = seq.clone();
    for (k, &pos) in tau.iter().enumerate() {
        let lo = pos.floor() as usize;
        let hi = (lo + 1).min(real.len() - 1);
        let w = pos - lo as f64;
        let (a, b) = (seq.frame(real[lo]), seq.frame(real[hi]));
        let dst = out.frame_mut(real[k]);
        for j in 0..dst.len() {
            dst[j] = if w == 0.0 { a[j] } else { a[j] * (1.0 - w) + b[j] * w };
        }
    }
    Ok(out)
}

const WARP_RETRIES: usize = 16;

/// Monotone warp curve for `len` frames: `knots + 2` control points spaced
/// evenly in time whose increments are `Normal(1, sigma)` draws clamped to
/// at least 0.05, rescaled to map `0 -> 0` and `len - 1 -> len - 1`.
pub fn warp_curve(len: usize, sigma: f64, knots: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    if !(sigma > 0.0) || knots == 0 {
        return Err(Error::param("time warp needs sigma > 0 and knots >= 1"));
    }
    if len <= 1 {
        return Ok(vec![0.0; len]);
    }
    let normal = Normal::new(1.0, sigma).map_err(|e| Error::param(e.to_string()))?;
    let span = (len - 1) as f64;
    for _ in 0..WARP_RETRIES {
        let increments: Vec<f64> = (0..knots + 2).map(|_| normal.sample(rng).max(0.05)).collect();
        let cumulative: Vec<f64> = increments
            .iter()
            .scan(0.0, |acc, &d| {
                *acc += d;
                Some(*acc)
            })
            .collect();
        let (first, total) = (cumulative[0], cumulative[knots + 1]);
        let control: Vec<f64> = cumulative.iter().map(|c| (c - first) / (total - first) * span).collect();
        if !control.windows(2).all(|w| w[1] > w[0]) {
            continue;
        }
        let step = span / (knots + 1) as f64;
        let mut tau: Vec<f64> = (0..len)
            .map(|t| {
                let x = t as f64 / step;
                let k = (x.floor() as usize).min(knots);
                let w = x - k as f64;
                control[k] + (control[k + 1] - control[k]) * w
            })
            .collect();
        tau[0] = 0.0;
        tau[len - 1] = span;
        for v in tau.iter_mut() {
            *v = v.clamp(0.0, span);
        }
        if tau.windows(2).all(|w| w[1] > w[0]) {
            return Ok(tau);
        }
    }
    Err(Error::param(format!(
        "could not draw a monotone warp in {WARP_RETRIES} attempts"
    )))
}

pub fn time_warp(
    seq: &LandmarkSequence,
    sigma: f64,
    knots: usize,
    rng: &mut Rng,
) -> Result<LandmarkSequence> {
    let tau = warp_curve(seq.real_count(), sigma, knots, rng)?;
    time_warp_with(seq, &tau)
}

/// Uniformly distributed unit vector.
pub(crate) fn random_unit(rng: &mut Rng) -> Point {
    loop {
        let v = Point::new(
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
            rng.random_range(-1.0..=1.0),
        );
        let n = v.norm();
        if n > 1e-6 && n <= 1.0 {
            return v / n;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::rng_from_seed;
    use crate::topology::{Hand, TorsoReference};

    fn p(x: f64, y: f64, z: f64) -> Point {
        Point::new(x, y, z)
    }

    fn one(points: Vec<Point>) -> LandmarkSequence {
        LandmarkSequence::single_frame(points).unwrap()
    }

    fn hand_topo() -> SkeletonTopology {
        SkeletonTopology {
            name: "t".into(),
            joint_names: vec!["torso".into(), "wrist".into(), "tip".into()],
            hands: vec![Hand {
                joints: vec![1, 2],
                wrist: 1,
                fingers: vec![],
            }],
            torso: Some(TorsoReference::Joint(0)),
        }
    }

    #[test]
    fn cam_depth_examples() {
        let s = one(vec![p(0.1, 0.2, 0.5)]);
        assert_eq!(cam_depth(&s, 1.0).unwrap(), s);
        let out = cam_depth(&s, 1.3).unwrap().point(0, 0);
        assert_eq!((out.x, out.y), (0.1, 0.2));
        assert!((out.z - 0.65).abs() < 1e-15);
        assert!(cam_depth(&s, 0.0).is_err());
        assert!(cam_depth(&s, -1.0).is_err());
    }

    #[test]
    fn temp_depth_linear_ramp_oracle() {
        let s = linear_ramp(0.5, 1.3, 5);
        // linear interpolation by hand: step (1.3 - 0.5) / 4 = 0.2
        for (a, b) in s.iter().zip([0.5, 0.7, 0.9, 1.1, 1.3]) {
            assert!((a - b).abs() < 1e-12, "{a} vs {b}");
        }
    }

    #[test]
    fn temp_depth_sine_cycle_oracle() {
        for len in [5, 40, 81] {
            let s = sine_cycle(0.6, 1.4, len);
            assert!((s[0] - s[len - 1]).abs() < 1e-12);
            let max = s.iter().cloned().fold(f64::MIN, f64::max);
            let min = s.iter().cloned().fold(f64::MAX, f64::min);
            assert!((max - 1.4).abs() < 1e-9 || len % 2 == 0, "len {len}: max {max}");
            assert!((min - 0.6).abs() < 1e-12);
        }
        // odd length puts a sample exactly at the midpoint
        assert!((sine_cycle(0.6, 1.4, 5)[2] - 1.4).abs() < 1e-12);
    }

    #[test]
    fn temp_depth_errors() {
        let s = one(vec![p(0.0, 0.0, 1.0)]);
        assert!(temp_depth(&s, &[1.0, 1.0]).is_err());
        assert!(temp_depth(&s, &[0.0]).is_err());
        assert_eq!(temp_depth(&s, &[1.0]).unwrap(), s);
    }

    #[test]
    fn hv_shift_constant_and_sine() {
        let s = one(vec![p(0.0, 0.0, 0.3), p(1.0, 1.0, 0.0)]);
        let out = hv_shift(&s, &[0.15], &[-0.15]).unwrap();
        assert_eq!(out.point(0, 0), p(0.15, -0.15, 0.3));
        assert_eq!(out.point(0, 1), p(1.15, 0.85, 0.0));
        assert!(hv_shift(&s, &[0.1, 0.2], &[0.0]).is_err());

        let dx = sine_shift(0.10, 1.5, 9);
        for (t, v) in dx.iter().enumerate() {
            let expect = 0.10 * (2.0 * std::f64::consts::PI * 1.5 * t as f64 / 8.0).sin();
            assert!((v - expect).abs() < 1e-15);
        }
        assert_eq!(dx[0], 0.0);
    }

    #[test]
    fn hand_size_examples() {
        let topo = hand_topo();
        let s = one(vec![p(5.0, 5.0, 5.0), p(0.0, 0.0, 0.0), p(0.1, 0.0, 0.0)]);
        let out = hand_size(&s, &topo, 1.3).unwrap();
        assert!((out.point(0, 2) - p(0.13, 0.0, 0.0)).norm() < 1e-15);
        assert_eq!(out.point(0, 1), s.point(0, 1));
        assert_eq!(out.point(0, 0), s.point(0, 0));
        assert_eq!(hand_size(&s, &topo, 1.0).unwrap(), s);
        assert!(hand_size(&s, &topo, 0.0).is_err());
        assert!(hand_size(&s, &SkeletonTopology::plain(3), 1.2).is_err());
    }

    #[test]
    fn view_rot_yaw_oracle() {
        let s = one(vec![p(1.0, 0.0, 0.0), p(-1.0, 0.0, 0.0)]);
        let out = view_rot(&s, &RotationAxis::Yaw, 90.0).unwrap();
        // explicit rotation about +y by theta: [[c,0,s],[0,1,0],[-s,0,c]]
        let (c, sn) = (90f64.to_radians().cos(), 90f64.to_radians().sin());
        let m = |v: Point| p(c * v.x + sn * v.z, v.y, -sn * v.x + c * v.z);
        assert!((out.point(0, 0) - m(p(1.0, 0.0, 0.0))).norm() < 1e-12);
        assert!((out.point(0, 0) - p(0.0, 0.0, -1.0)).norm() < 1e-12);
        assert!((out.point(0, 1) - p(0.0, 0.0, 1.0)).norm() < 1e-12);
        assert!(view_rot(&s, &RotationAxis::Vector([0.0, 0.0, 0.0]), 10.0).is_err());
        assert!(view_rot(&s, &RotationAxis::Yaw, 181.0).is_err());
    }

    #[test]
    fn fold_chain_mcp_only_quarter_turn() {
        let chain = [p(0.0, 0.0, 0.0), p(1.0, 0.0, 0.0), p(2.0, 0.0, 0.0), p(3.0, 0.0, 0.0)];
        let z = Unit::new_normalize(Point::z());
        let rots = [
            Rotation3::from_axis_angle(&z, 90f64.to_radians()),
            Rotation3::identity(),
            Rotation3::identity(),
        ];
        let out = fold_chain(chain, &rots);
        // explicit: Rz(90) (1,0,0) = (0,1,0); later segments translate with it
        assert!((out[1] - p(0.0, 1.0, 0.0)).norm() < 1e-12);
        assert!((out[2] - p(1.0, 1.0, 0.0)).norm() < 1e-12);
        assert!((out[3] - p(2.0, 1.0, 0.0)).norm() < 1e-12);
    }

    #[test]
    fn fold_buckets() {
        let prog = [0.2, 0.4, 0.6, 0.8];
        let f: Vec<f64> = (0..8).map(|t| fold_fraction(&prog, t, 8)).collect();
        assert_eq!(f, vec![0.2, 0.2, 0.4, 0.4, 0.6, 0.6, 0.8, 0.8]);
        assert_eq!(fold_fraction(&prog, 0, 1), 0.2);
    }

    #[test]
    fn finger_fold_degenerate_segment_is_skipped() {
        let topo = SkeletonTopology::synth8();
        let mut pts: Vec<Point> = (0..8).map(|j| p(j as f64 * 0.1, 0.0, 0.0)).collect();
        pts[4] = pts[3];
        let s = one(pts);
        let out = finger_fold(&s, &topo, &[0.5], DEFAULT_FOLD_ANGLES_DEG).unwrap();
        assert_eq!(out.skipped_fingers, 1);
        assert_eq!(out.sequence, s);
        assert!(finger_fold(&s, &SkeletonTopology::plain(8), &[0.5], DEFAULT_FOLD_ANGLES_DEG).is_err());
        assert!(finger_fold(&s, &topo, &[1.5], DEFAULT_FOLD_ANGLES_DEG).is_err());
    }

    #[test]
    fn elbow_disp_examples() {
        let topo = hand_topo();
        // hand centroid at (1, 0, 0), torso at the origin
        let s = one(vec![p(0.0, 0.0, 0.0), p(0.9, 0.0, 0.0), p(1.1, 0.0, 0.0)]);
        let out = elbow_disp(&s, &topo, Direction::Outward, 0.3, Ramp::Constant).unwrap();
        assert!((out.point(0, 1) - p(1.2, 0.0, 0.0)).norm() < 1e-12);
        assert!((out.point(0, 2) - p(1.4, 0.0, 0.0)).norm() < 1e-12);
        let inward = elbow_disp(&s, &topo, Direction::Inward, 0.4, Ramp::Constant).unwrap();
        assert!((inward.point(0, 1) - p(0.5, 0.0, 0.0)).norm() < 1e-12);
        assert_eq!(elbow_disp(&s, &topo, Direction::Inward, 0.0, Ramp::Linear).unwrap(), s);
        let mut no_torso = topo.clone();
        no_torso.torso = None;
        assert!(elbow_disp(&s, &no_torso, Direction::Inward, 0.4, Ramp::Constant).is_err());
    }

    #[test]
    fn time_warp_interpolation_oracle() {
        let s = LandmarkSequence::from_frames(vec![
            vec![p(0.0, 0.0, 0.0)],
            vec![p(10.0, 0.0, 0.0)],
            vec![p(20.0, 0.0, 0.0)],
        ])
        .unwrap();
        let out = time_warp_with(&s, &[0.0, 0.5, 2.0]).unwrap();
        let xs: Vec<f64> = (0..3).map(|t| out.point(t, 0).x).collect();
        assert_eq!(xs, vec![0.0, 5.0, 20.0]);
        assert_eq!(time_warp_with(&s, &[0.0, 1.0, 2.0]).unwrap(), s);
        assert!(time_warp_with(&s, &[0.0, 3.0, 2.0]).is_err());
    }

    #[test]
    fn warp_curve_pins_endpoints_and_is_monotone() {
        let mut rng = rng_from_seed(11);
        for len in [2, 3, 40, 80] {
            let tau = warp_curve(len, 0.1, 4, &mut rng).unwrap();
            assert_eq!(tau[0], 0.0);
            assert_eq!(tau[len - 1], (len - 1) as f64);
            assert!(tau.windows(2).all(|w| w[1] > w[0]));
        }
        assert!(warp_curve(10, 0.0, 4, &mut rng).is_err());
        assert!(warp_curve(10, 0.1, 0, &mut rng).is_err());
    }

    #[test]
    fn padded_frames_bypass() {
        let s = one(vec![p(0.3, 0.2, 0.5)]).with_padding(2);
        let out = cam_depth(&s, 1.3).unwrap();
        assert_eq!(out.frame(1), s.frame(1));
        let out = view_rot(&s, &RotationAxis::Roll, 30.0).unwrap();
        assert_eq!(out.mask(), s.mask());
        let mut rng = rng_from_seed(1);
        let out = time_warp(&s, 0.1, 4, &mut rng).unwrap();
        assert_eq!(out, s);
    }
}
