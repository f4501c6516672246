//! Generic time-series augmentations that ignore skeletal structure. These
//! are the "traditional augmentation" baselines: every coordinate channel is
//! treated the same way.

use rand::Rng as _;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::augment::{ops, ParamRange};
use crate::error::{Error, Result};
use crate::landmarks::{LandmarkSequence, Point};
use crate::rng::Rng;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum GenericAugSpec {
    Jitter { sigma: f64 },
    Scale { factor: ParamRange },
    MagWarp { sigma: f64, knots: usize },
    TimeWarp { sigma: f64, knots: usize },
    WinWarp { window_ratio: f64, speed: ParamRange },
    WinScale { window_ratio: f64, factor: ParamRange },
}

/// Additive `Normal(0, sigma)` noise on every coordinate of every real frame.
pub fn jitter(seq: &LandmarkSequence, sigma: f64, rng: &mut Rng) -> Result<LandmarkSequence> {
    if sigma == 0.0 {
        return Ok(seq.clone());
    }
    let normal = Normal::new(0.0, sigma).map_err(|e| Error::param(e.to_string()))?;
    Ok(seq.map_real_frames(|_, frame| {
        for p in frame {
            *p += Point::new(normal.sample(rng), normal.sample(rng), normal.sample(rng));
        }
    }))
}

/// Multiply every coordinate by `factor`.
pub fn scale_mag(seq: &LandmarkSequence, factor: f64) -> LandmarkSequence {
    seq.map_real_frames(|_, frame| {
        for p in frame {
            *p *= factor;
        }
    })
}

/// Smooth multiplicative curve: `knots + 2` control values drawn from
/// `Normal(1, sigma)`, spaced evenly in time and linearly interpolated.
pub fn magnitude_curve(len: usize, sigma: f64, knots: usize, rng: &mut Rng) -> Result<Vec<f64>> {
    if knots == 0 {
        return Err(Error::param("magnitude warp needs knots >= 1"));
    }
    if sigma == 0.0 {
        return Ok(vec![1.0; len]);
    }
    let normal = Normal::new(1.0, sigma).map_err(|e| Error::param(e.to_string()))?;
    let control: Vec<f64> = (0..knots + 2).map(|_| normal.sample(rng)).collect();
    let span = (len.max(2) - 1) as f64;
    let step = span / (knots + 1) as f64;
    Ok((0..len)
        .map(|t| {
            let x = t as f64 / step;
            let k = (x.floor() as usize).min(knots);
            let w = x - k as f64;
            control[k] + (control[k + 1] - control[k]) * w
        })
        .collect())
}

pub fn mag_warp(
    seq: &LandmarkSequence,
    sigma: f64,
    knots: usize,
    rng: &mut Rng,
) -> Result<LandmarkSequence> {
    let curve = magnitude_curve(seq.len(), sigma, knots, rng)?;
    Ok(seq.map_real_frames(|t, frame| {
        for p in frame {
            *p *= curve[t];
        }
    }))
}

/// Random window `[start, start + len)` over the real frames.
fn random_window(real: usize, window_ratio: f64, rng: &mut Rng) -> Result<(usize, usize)> {
    if !(window_ratio > 0.0 && window_ratio <= 1.0) {
        return Err(Error::param("window ratio must lie in (0, 1]"));
    }
    let len = ((real as f64 * window_ratio).ceil() as usize).clamp(1, real.max(1));
    let start = rng.random_range(0..=real.saturating_sub(len));
    Ok((start, len))
}

/// Linear resampling of `frames` (each a joint vector) to `out_len` frames.
fn resample(frames: &[Vec<Point>], out_len: usize) -> Vec<Vec<Point>> {
    let n = frames.len();
    (0..out_len)
        .map(|k| {
            if n == 1 || out_len == 1 {
                return frames[0].clone();
            }
            let pos = k as f64 * (n - 1) as f64 / (out_len - 1) as f64;
            let lo = (pos.floor() as usize).min(n - 1);
            let hi = (lo + 1).min(n - 1);
            let w = pos - lo as f64;
            if w == 0.0 {
                frames[lo].clone()
            } else {
                frames[lo]
                    .iter()
                    .zip(&frames[hi])
                    .map(|(a, b)| a * (1.0 - w) + b * w)
                    .collect()
            }
        })
        .collect()
}

/// Stretch or compress the window `[start, start + len)` of the real frames
/// by `speed`, then resample the whole sequence back to its real length.
pub fn win_warp_at(
    seq: &LandmarkSequence,
    start: usize,
    len: usize,
    speed: f64,
) -> Result<LandmarkSequence> {
    if !(speed > 0.0) {
        return Err(Error::param("window speed must be > 0"));
    }
    let real: Vec<usize> = seq.real_indices().collect();
    if start + len > real.len() || len == 0 {
        return Err(Error::param("window outside the sequence"));
    }
    let frames: Vec<Vec<Point>> = real.iter().map(|&t| seq.frame(t).to_vec()).collect();
    let warped_len = ((len as f64 / speed).round() as usize).max(1);
    let mut joined = frames[..start].to_vec();
    joined.extend(resample(&frames[start..start + len], warped_len));
    joined.extend_from_slice(&frames[start + len..]);
    let out = resample(&joined, real.len());
    let mut result = seq.clone();
    for (k, &t) in real.iter().enumerate() {
        result.frame_mut(t).copy_from_slice(&out[k]);
    }
    Ok(result)
}

pub fn win_warp(
    seq: &LandmarkSequence,
    window_ratio: f64,
    speed: f64,
    rng: &mut Rng,
) -> Result<LandmarkSequence> {
    let (start, len) = random_window(seq.real_count(), window_ratio, rng)?;
    win_warp_at(seq, start, len, speed)
}

/// Multiply the real frames `[start, start + len)` by `factor`.
pub fn win_scale_at(
    seq: &LandmarkSequence,
    start: usize,
    len: usize,
    factor: f64,
) -> Result<LandmarkSequence> {
    let real: Vec<usize> = seq.real_indices().collect();
    if start + len > real.len() {
        return Err(Error::param("window outside the sequence"));
    }
    let window = &real[start..start + len];
    Ok(seq.map_real_frames(|t, frame| {
        if window.contains(&t) {
            for p in frame {
                *p *= factor;
            }
        }
    }))
}

pub fn win_scale(
    seq: &LandmarkSequence,
    window_ratio: f64,
    factor: f64,
    rng: &mut Rng,
) -> Result<LandmarkSequence> {
    let (start, len) = random_window(seq.real_count(), window_ratio, rng)?;
    win_scale_at(seq, start, len, factor)
}

impl GenericAugSpec {
    pub fn label(&self) -> &'static str {
        match self {
            Self::Jitter { .. } => "Jitter",
            Self::Scale { .. } => "Scale",
            Self::MagWarp { .. } => "MagWarp",
            Self::TimeWarp { .. } => "TimeWarp",
            Self::WinWarp { .. } => "WinWarp",
            Self::WinScale { .. } => "WinScale",
        }
    }

    pub fn validate(&self) -> Result<()> {
        let pos = |v: f64, what: &str| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::param(format!("{what} must be > 0")))
            }
        };
        let ratio = |r: f64| {
            if r > 0.0 && r <= 1.0 {
                Ok(())
            } else {
                Err(Error::param("window ratio must lie in (0, 1]"))
            }
        };
        let range = |r: &ParamRange, what: &str| {
            if r.low() <= r.high() && r.low().is_finite() && r.high().is_finite() {
                Ok(())
            } else {
                Err(Error::param(format!("{what} range is not ordered")))
            }
        };
        match self {
            Self::Jitter { sigma } => pos(*sigma, "jitter sigma"),
            Self::Scale { factor } => range(factor, "scale"),
            Self::MagWarp { sigma, knots } | Self::TimeWarp { sigma, knots } => {
                pos(*sigma, "warp sigma")?;
                if *knots == 0 {
                    return Err(Error::param("knots must be >= 1"));
                }
                Ok(())
            }
            Self::WinWarp {
                window_ratio,
                speed,
            } => {
                ratio(*window_ratio)?;
                range(speed, "speed")?;
                pos(speed.low(), "speed")
            }
            Self::WinScale {
                window_ratio,
                factor,
            } => {
                ratio(*window_ratio)?;
                range(factor, "window scale")
            }
        }
    }

    pub fn apply(&self, seq: &LandmarkSequence, rng: &mut Rng) -> Result<LandmarkSequence> {
        self.validate()?;
        match self {
            Self::Jitter { sigma } => jitter(seq, *sigma, rng),
            Self::Scale { factor } => Ok(scale_mag(seq, factor.sample(rng))),
            Self::MagWarp { sigma, knots } => mag_warp(seq, *sigma, *knots, rng),
            Self::TimeWarp { sigma, knots } => ops::time_warp(seq, *sigma, *knots, rng),
            Self::WinWarp {
                window_ratio,
                speed,
            } => {
                let s = speed.sample(rng);
                win_warp(seq, *window_ratio, s, rng)
            }
            Self::WinScale {
                window_ratio,
                factor,
            } => {
                let f = factor.sample(rng);
                win_scale(seq, *window_ratio, f, rng)
            }
        }
    }
}

/// Named generic presets, parallel to the geometric catalogue.
pub fn catalogue() -> Vec<(&'static str, GenericAugSpec)> {
    use GenericAugSpec as G;
    vec![
        ("generic.jitter", G::Jitter { sigma: 0.01 }),
        ("generic.scale", G::Scale { factor: ParamRange(0.8, 1.2) }),
        ("generic.magwarp", G::MagWarp { sigma: 0.2, knots: 4 }),
        ("generic.timewarp", G::TimeWarp { sigma: 0.1, knots: 4 }),
        ("generic.winwarp", G::WinWarp { window_ratio: 0.3, speed: ParamRange(0.5, 2.0) }),
        ("generic.winscale", G::WinScale { window_ratio: 0.3, factor: ParamRange(0.7, 1.3) }),
    ]
}
