use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landmarks::LandmarkSequence;
use crate::rng::Rng;
use crate::topology::SkeletonTopology;

use super::ops;

/// Closed interval `[low, high]` that a scalar is sampled from uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ParamRange(pub f64, pub f64);

impl ParamRange {
    pub fn fixed(v: f64) -> Self {
        ParamRange(v, v)
    }

    pub fn symmetric(v: f64) -> Self {
        ParamRange(-v, v)
    }

    pub fn low(&self) -> f64 {
        self.0
    }

    pub fn high(&self) -> f64 {
        self.1
    }

    pub fn contains(&self, v: f64) -> bool {
        (self.0..=self.1).contains(&v)
    }

    /// Draws exactly one value from `rng`, even for a degenerate range.
    pub fn sample(&self, rng: &mut Rng) -> f64 {
        let u: f64 = rng.random();
        if self.0 == self.1 {
            self.0
        } else {
            self.0 + (self.1 - self.0) * u
        }
    }

    fn check(&self, what: &str) -> Result<()> {
        if !(self.0.is_finite() && self.1.is_finite()) || self.0 > self.1 {
            return Err(Error::param(format!("{what}: range {:?} is not ordered", self)));
        }
        Ok(())
    }

    fn check_positive(&self, what: &str) -> Result<()> {
        self.check(what)?;
        if !(self.0 > 0.0) {
            return Err(Error::param(format!("{what}: range {:?} must be > 0", self)));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "shape", rename_all = "kebab-case")]
pub enum DepthSchedule {
    LinearRamp { start: ParamRange, end: ParamRange },
    SineCycle { min: f64, max: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "kebab-case")]
pub enum ShiftMode {
    Constant { dx: ParamRange, dy: ParamRange },
    /// Ramps from zero at the first frame to the sampled offset at the last.
    Linear { dx: ParamRange, dy: ParamRange },
    /// `frequency` is in cycles per sequence.
    Sine { amp_x: f64, amp_y: f64, frequency: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RotationAxis {
    Yaw,
    Pitch,
    Roll,
    RandomUnit,
    Vector([f64; 3]),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Direction {
    Inward,
    Outward,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Ramp {
    Constant,
    Linear,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AugmentationKind {
    CamDepth,
    TempDepth,
    HvShift,
    HandSize,
    ViewRot,
    FingerFold,
    ElbowDisp,
    TimeWarp,
}

impl AugmentationKind {
    pub fn label(self) -> &'static str {
        match self {
            Self::CamDepth => "CamDepth",
            Self::TempDepth => "TempDepth",
            Self::HvShift => "HV-Shift",
            Self::HandSize => "HandSize",
            Self::ViewRot => "ViewRot",
            Self::FingerFold => "FingerFold",
            Self::ElbowDisp => "ElbowDisp",
            Self::TimeWarp => "TimeWarp",
        }
    }

    /// Whether the transform needs finger chains or a torso reference.
    pub fn hand_specific(self) -> bool {
        matches!(self, Self::FingerFold | Self::ElbowDisp)
    }
}

/// One geometry-aware transformation and the distribution of its parameters.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum AugmentationSpec {
    CamDepth {
        scale: ParamRange,
    },
    TempDepth {
        schedule: DepthSchedule,
    },
    HvShift {
        shift: ShiftMode,
    },
    HandSize {
        alpha: ParamRange,
    },
    ViewRot {
        axis: RotationAxis,
        angle_deg: ParamRange,
    },
    FingerFold {
        progression: Vec<f64>,
        #[serde(default = "default_fold_angles")]
        max_angles_deg: [f64; 3],
    },
    ElbowDisp {
        direction: Direction,
        intensity: f64,
        #[serde(default = "default_ramp")]
        ramp: Ramp,
    },
    TimeWarp {
        sigma: f64,
        knots: usize,
    },
}

fn default_fold_angles() -> [f64; 3] {
    ops::DEFAULT_FOLD_ANGLES_DEG
}

fn default_ramp() -> Ramp {
    Ramp::Linear
}

impl AugmentationSpec {
    pub fn kind(&self) -> AugmentationKind {
        match self {
            Self::CamDepth { .. } => AugmentationKind::CamDepth,
            Self::TempDepth { .. } => AugmentationKind::TempDepth,
            Self::HvShift { .. } => AugmentationKind::HvShift,
            Self::HandSize { .. } => AugmentationKind::HandSize,
            Self::ViewRot { .. } => AugmentationKind::ViewRot,
            Self::FingerFold { .. } => AugmentationKind::FingerFold,
            Self::ElbowDisp { .. } => AugmentationKind::ElbowDisp,
            Self::TimeWarp { .. } => AugmentationKind::TimeWarp,
        }
    }

    /// An augmentation that leaves every sequence unchanged.
    pub fn neutral() -> Self {
        Self::CamDepth {
            scale: ParamRange::fixed(1.0),
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            Self::CamDepth { scale } => scale.check_positive("CamDepth scale"),
            Self::TempDepth { schedule } => match schedule {
                DepthSchedule::LinearRamp { start, end } => {
                    start.check_positive("TempDepth start")?;
                    end.check_positive("TempDepth end")
                }
                DepthSchedule::SineCycle { min, max } => {
                    ParamRange(*min, *max).check_positive("TempDepth sine range")
                }
            },
            Self::HvShift { shift } => match shift {
                ShiftMode::Constant { dx, dy } | ShiftMode::Linear { dx, dy } => {
                    dx.check("HVShift dx")?;
                    dy.check("HVShift dy")
                }
                ShiftMode::Sine {
                    amp_x,
                    amp_y,
                    frequency,
                } => {
                    if [amp_x, amp_y, frequency].iter().all(|v| v.is_finite()) && *frequency >= 0.0 {
                        Ok(())
                    } else {
                        Err(Error::param("HVShift sine parameters must be finite, frequency >= 0"))
                    }
                }
            },
            Self::HandSize { alpha } => alpha.check_positive("HandSize alpha"),
            Self::ViewRot { axis, angle_deg } => {
                angle_deg.check("ViewRot angle")?;
                if angle_deg.low() < -180.0 || angle_deg.high() > 180.0 {
                    return Err(Error::param("ViewRot angles must lie in [-180, 180]"));
                }
                if let RotationAxis::Vector(v) = axis {
                    if v.iter().all(|c| *c == 0.0) {
                        return Err(Error::param("zero rotation axis"));
                    }
                }
                Ok(())
            }
            Self::FingerFold {
                progression,
                max_angles_deg,
            } => {
                if progression.is_empty() || progression.iter().any(|f| !(0.0..=1.0).contains(f)) {
                    return Err(Error::param("fold progression must be non-empty fractions in [0, 1]"));
                }
                if max_angles_deg.iter().any(|a| !a.is_finite()) {
                    return Err(Error::param("fold angles must be finite"));
                }
                Ok(())
            }
            Self::ElbowDisp { intensity, .. } => {
                if *intensity >= 0.0 && intensity.is_finite() {
                    Ok(())
                } else {
                    Err(Error::param("ElbowDisp intensity must be >= 0"))
                }
            }
            Self::TimeWarp { sigma, knots } => {
                if *sigma > 0.0 && sigma.is_finite() && *knots >= 1 {
                    Ok(())
                } else {
                    Err(Error::param("TimeWarp needs sigma > 0 and knots >= 1"))
                }
            }
        }
    }

    /// Sample parameters from `rng` and apply the transformation.
    pub fn apply(
        &self,
        seq: &LandmarkSequence,
        topo: &SkeletonTopology,
        rng: &mut Rng,
    ) -> Result<LandmarkSequence> {
        self.validate()?;
        let len = seq.len();
        match self {
            Self::CamDepth { scale } => ops::cam_depth(seq, scale.sample(rng)),
            Self::TempDepth { schedule } => {
                let s = match schedule {
                    DepthSchedule::LinearRamp { start, end } => {
                        ops::linear_ramp(start.sample(rng), end.sample(rng), len)
                    }
                    DepthSchedule::SineCycle { min, max } => ops::sine_cycle(*min, *max, len),
                };
                ops::temp_depth(seq, &s)
            }
            Self::HvShift { shift } => {
                let (dx, dy) = match shift {
                    ShiftMode::Constant { dx, dy } => {
                        let (x, y) = (dx.sample(rng), dy.sample(rng));
                        (vec![x; len], vec![y; len])
                    }
                    ShiftMode::Linear { dx, dy } => {
                        let (x, y) = (dx.sample(rng), dy.sample(rng));
                        (ops::linear_ramp(0.0, x, len), ops::linear_ramp(0.0, y, len))
                    }
                    ShiftMode::Sine {
                        amp_x,
                        amp_y,
                        frequency,
                    } => (
                        ops::sine_shift(*amp_x, *frequency, len),
                        ops::sine_shift(*amp_y, *frequency, len),
                    ),
                };
                ops::hv_shift(seq, &dx, &dy)
            }
            Self::HandSize { alpha } => ops::hand_size(seq, topo, alpha.sample(rng)),
            Self::ViewRot { axis, angle_deg } => {
                let axis = match axis {
                    RotationAxis::RandomUnit => {
                        let v = ops::random_unit(rng);
                        RotationAxis::Vector([v.x, v.y, v.z])
                    }
                    other => other.clone(),
                };
                ops::view_rot(seq, &axis, angle_deg.sample(rng))
            }
            Self::FingerFold {
                progression,
                max_angles_deg,
            } => ops::finger_fold(seq, topo, progression, *max_angles_deg).map(|o| o.sequence),
            Self::ElbowDisp {
                direction,
                intensity,
                ramp,
            } => ops::elbow_disp(seq, topo, *direction, *intensity, *ramp),
            Self::TimeWarp { sigma, knots } => ops::time_warp(seq, *sigma, *knots, rng),
        }
    }

    /// Whether this transformation can run on `topo`.
    pub fn supports(&self, topo: &SkeletonTopology) -> bool {
        match self {
            Self::HandSize { .. } => topo.has_hands(),
            Self::FingerFold { .. } => topo.has_fingers(),
            Self::ElbowDisp { .. } => topo.has_hands() && topo.torso.is_some(),
            _ => true,
        }
    }
}
