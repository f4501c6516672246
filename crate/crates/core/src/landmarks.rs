//! Landmark sequences: `T` frames of `J` joints, each a 3D point.

use nalgebra::Vector3;

use crate::error::{Error, Result};

pub type Point = Vector3<f64>;

/// A `T x J x 3` tensor of joint coordinates plus a per-frame padding mask.
///
/// Frames are stored contiguously, frame-major. Padded frames hold only
/// zero points; `is_real(t)` is false for them.
#[derive(Debug, Clone, PartialEq)]
pub struct LandmarkSequence {
    points: Vec<Point>,
    joints: usize,
    real: Vec<bool>,
}

impl LandmarkSequence {
    /// Build a sequence with every frame marked real.
    pub fn from_frames(frames: Vec<Vec<Point>>) -> Result<Self> {
        let t = frames.len();
        let joints = frames.first().map(Vec::len).unwrap_or(0);
        let mut points = Vec::with_capacity(t * joints);
        for (i, f) in frames.into_iter().enumerate() {
            if f.len() != joints {
                return Err(Error::Shape(format!(
                    "frame {i} has {} joints, expected {joints}",
                    f.len()
                )));
            }
            points.extend(f);
        }
        Self::from_parts(points, joints, vec![true; t])
    }

    /// Build from a flat frame-major point buffer and a mask (`true` = real).
    pub fn from_parts(points: Vec<Point>, joints: usize, real: Vec<bool>) -> Result<Self> {
        if joints == 0 || real.is_empty() {
            return Err(Error::Shape("sequence needs T >= 1 and J >= 1".into()));
        }
        if points.len() != joints * real.len() {
            return Err(Error::Shape(format!(
                "{} points cannot form {} frames of {joints} joints",
                points.len(),
                real.len()
            )));
        }
        if let Some(i) = points
            .iter()
            .position(|p| !p.iter().all(|c| c.is_finite()))
        {
            return Err(Error::Shape(format!(
                "non-finite coordinate at frame {}, joint {}",
                i / joints,
                i % joints
            )));
        }
        for (t, &r) in real.iter().enumerate() {
            if !r && points[t * joints..(t + 1) * joints].iter().any(|p| *p != Point::zeros()) {
                return Err(Error::Shape(format!("padded frame {t} is not all-zero")));
            }
        }
        Ok(Self {
            points,
            joints,
            real,
        })
    }

    /// Single-frame convenience constructor.
    pub fn single_frame(points: Vec<Point>) -> Result<Self> {
        Self::from_frames(vec![points])
    }

    pub fn len(&self) -> usize {
        self.real.len()
    }

    pub fn is_empty(&self) -> bool {
        self.real.is_empty()
    }

    pub fn joints(&self) -> usize {
        self.joints
    }

    pub fn mask(&self) -> &[bool] {
        &self.real
    }

    pub fn is_real(&self, t: usize) -> bool {
        self.real[t]
    }

    pub fn real_count(&self) -> usize {
        self.real.iter().filter(|&&r| r).count()
    }

    /// Indices of non-padded frames, ascending.
    pub fn real_indices(&self) -> impl Iterator<Item = usize> + '_ {
        self.real
            .iter()
            .enumerate()
            .filter_map(|(t, &r)| r.then_some(t))
    }

    pub fn frame(&self, t: usize) -> &[Point] {
        &self.points[t * self.joints..(t + 1) * self.joints]
    }

    pub fn frame_mut(&mut self, t: usize) -> &mut [Point] {
        let j = self.joints;
        &mut self.points[t * j..(t + 1) * j]
    }

    pub fn point(&self, t: usize, j: usize) -> Point {
        self.points[t * self.joints + j]
    }

    pub fn points(&self) -> &[Point] {
        &self.points
    }

    /// Flat `x, y, z` coordinates of frame `t`, joint-major.
    pub fn frame_features(&self, t: usize) -> impl Iterator<Item = f64> + '_ {
        self.frame(t).iter().flat_map(|p| [p.x, p.y, p.z])
    }

    /// Apply `f(t, frame)` to every real frame; padded frames are left alone.
    pub fn map_real_frames(&self, mut f: impl FnMut(usize, &mut [Point])) -> Self {
        let mut out = self.clone();
        for t in 0..out.len() {
            if out.real[t] {
                f(t, out.frame_mut(t));
            }
        }
        out
    }

    /// Mean over all joints of frame `t`.
    pub fn frame_centroid(&self, t: usize) -> Point {
        centroid(self.frame(t))
    }

    /// Mean over every joint of every real frame.
    pub fn global_mean(&self) -> Result<Point> {
        let n = self.real_count();
        if n == 0 {
            return Err(Error::EmptySequence);
        }
        let sum = self
            .real_indices()
            .flat_map(|t| self.frame(t).iter())
            .fold(Point::zeros(), |acc, p| acc + p);
        Ok(sum / (n * self.joints) as f64)
    }

    /// Append `extra` padded frames.
    pub fn with_padding(&self, extra: usize) -> Self {
        let mut out = self.clone();
        out.points
            .extend(std::iter::repeat_n(Point::zeros(), extra * self.joints));
        out.real.extend(std::iter::repeat_n(false, extra));
        out
    }
}

pub(crate) fn centroid(points: &[Point]) -> Point {
    points.iter().fold(Point::zeros(), |acc, p| acc + p) / points.len() as f64
}

/// Trim (center-crop) or zero-pad a sequence to exactly `target` frames.
pub fn normalize_length(seq: &LandmarkSequence, target: usize) -> Result<LandmarkSequence> {
    if target == 0 {
        return Err(Error::param("target length must be >= 1"));
    }
    let t = seq.len();
    let j = seq.joints();
    if t >= target {
        let start = (t - target) / 2;
        let points = seq.points[start * j..(start + target) * j].to_vec();
        let real = seq.real[start..start + target].to_vec();
        LandmarkSequence::from_parts(points, j, real)
    } else {
        Ok(seq.with_padding(target - t))
    }
}

/// Subtract the mean over all real frames and joints.
pub fn center_sequence(seq: &LandmarkSequence) -> Result<LandmarkSequence> {
    let mean = seq.global_mean()?;
    Ok(seq.map_real_frames(|_, frame| {
        for p in frame {
            *p -= mean;
        }
    }))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ramp(t: usize, j: usize) -> LandmarkSequence {
        let frames = (0..t)
            .map(|ti| {
                (0..j)
                    .map(|ji| Point::new(ti as f64, ji as f64, (ti * j + ji) as f64 * 0.1))
                    .collect()
            })
            .collect();
        LandmarkSequence::from_frames(frames).unwrap()
    }

    #[test]
    fn normalize_identity_at_target() {
        let s = ramp(80, 2);
        assert_eq!(normalize_length(&s, 80).unwrap(), s);
    }

    #[test]
    fn normalize_pads_with_zero_frames() {
        let s = ramp(3, 2);
        let n = normalize_length(&s, 5).unwrap();
        assert_eq!(n.mask(), &[true, true, true, false, false]);
        assert!(n.frame(3).iter().chain(n.frame(4)).all(|p| *p == Point::zeros()));
        assert_eq!(n.frame(2), s.frame(2));
    }

    #[test]
    fn normalize_center_crops() {
        let s = ramp(100, 1);
        let n = normalize_length(&s, 80).unwrap();
        // start = floor((100 - 80) / 2) = 10, i.e. 1-based frames 11..90
        assert_eq!(n.point(0, 0).x, 10.0);
        assert_eq!(n.point(79, 0).x, 89.0);
        let n2 = normalize_length(&ramp(101, 1), 80).unwrap();
        assert_eq!(n2.point(0, 0).x, 10.0);
    }

    #[test]
    fn normalize_rejects_zero_target() {
        assert!(normalize_length(&ramp(2, 1), 0).is_err());
    }

    #[test]
    fn center_single_point() {
        let s = LandmarkSequence::single_frame(vec![Point::new(1.0, 2.0, 3.0)]).unwrap();
        assert_eq!(center_sequence(&s).unwrap().point(0, 0), Point::zeros());
    }

    #[test]
    fn center_two_frames_subtracts_explicit_mean() {
        let s = LandmarkSequence::from_frames(vec![
            vec![Point::new(0.0, 0.0, 0.0), Point::new(2.0, 0.0, 0.0)],
            vec![Point::new(0.0, 2.0, 0.0), Point::new(2.0, 2.0, 0.0)],
        ])
        .unwrap();
        // explicit mean over the four points
        let mean = (Point::new(0.0, 0.0, 0.0)
            + Point::new(2.0, 0.0, 0.0)
            + Point::new(0.0, 2.0, 0.0)
            + Point::new(2.0, 2.0, 0.0))
            / 4.0;
        assert_eq!(mean, Point::new(1.0, 1.0, 0.0));
        let c = center_sequence(&s).unwrap();
        for t in 0..2 {
            for j in 0..2 {
                assert_eq!(c.point(t, j), s.point(t, j) - mean);
            }
        }
    }

    #[test]
    fn center_ignores_padding_and_rejects_all_padded() {
        let s = ramp(3, 2).with_padding(2);
        let c = center_sequence(&s).unwrap();
        assert!(c.global_mean().unwrap().norm() < 1e-12);
        assert_eq!(c.frame(4), s.frame(4));

        let pad_only =
            LandmarkSequence::from_parts(vec![Point::zeros(); 2], 1, vec![false, false]).unwrap();
        assert!(matches!(center_sequence(&pad_only), Err(Error::EmptySequence)));
    }

    #[test]
    fn rejects_non_finite_and_dirty_padding() {
        let bad = LandmarkSequence::from_parts(vec![Point::new(f64::NAN, 0.0, 0.0)], 1, vec![true]);
        assert!(bad.is_err());
        let dirty = LandmarkSequence::from_parts(vec![Point::new(1.0, 0.0, 0.0)], 1, vec![false]);
        assert!(dirty.is_err());
    }
}
