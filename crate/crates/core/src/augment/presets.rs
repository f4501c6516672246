//! Named augmentation presets.
//!
//! The first block reproduces the augmentation patterns and ranges used for
//! the published experiments. The `*.range` presets sample uniformly between
//! the paired patterns of a family and are what the default specialist list
//! uses, so each specialist sees a spread of the variation rather than one
//! fixed copy.

use crate::error::{Error, Result};
use crate::topology::SkeletonTopology;

use super::ops::DEFAULT_FOLD_ANGLES_DEG;
use super::spec::{
    AugmentationSpec, DepthSchedule, Direction, ParamRange, Ramp, RotationAxis, ShiftMode,
};

#[derive(Debug, Clone, PartialEq)]
pub struct Preset {
    pub name: &'static str,
    pub pattern: &'static str,
    pub spec: AugmentationSpec,
}

fn preset(name: &'static str, pattern: &'static str, spec: AugmentationSpec) -> Preset {
    Preset {
        name,
        pattern,
        spec,
    }
}

/// Every geometry-aware preset, in catalogue order.
pub fn catalogue() -> Vec<Preset> {
    use AugmentationSpec as A;
    let ramp = |a: f64, b: f64| A::TempDepth {
        schedule: DepthSchedule::LinearRamp {
            start: ParamRange::fixed(a),
            end: ParamRange::fixed(b),
        },
    };
    vec![
        preset("camdepth.near", "Near, distance 0.7", A::CamDepth { scale: ParamRange::fixed(0.7) }),
        preset("camdepth.far", "Far, distance 1.3", A::CamDepth { scale: ParamRange::fixed(1.3) }),
        preset("tempdepth.far_to_near", "Far to near, distance (0.5, 1.3)", ramp(0.5, 1.3)),
        preset("tempdepth.near_to_far", "Near to far, distance (0.7, 1.5)", ramp(0.7, 1.5)),
        preset(
            "tempdepth.near_far_near",
            "Near far near, distance (0.6, 1.4)",
            A::TempDepth {
                schedule: DepthSchedule::SineCycle { min: 0.6, max: 1.4 },
            },
        ),
        preset(
            "hvshift.linear",
            "Linear shift, distance (-0.15, 0.15)",
            A::HvShift {
                shift: ShiftMode::Linear {
                    dx: ParamRange::symmetric(0.15),
                    dy: ParamRange::symmetric(0.15),
                },
            },
        ),
        preset(
            "hvshift.sine",
            "Sine shift, amplitude_x 0.10, amplitude_y 0.08, frequency 1.5",
            A::HvShift {
                shift: ShiftMode::Sine {
                    amp_x: 0.10,
                    amp_y: 0.08,
                    frequency: 1.5,
                },
            },
        ),
        preset("handsize.large", "Large hands, scale factor 1.3", A::HandSize { alpha: ParamRange::fixed(1.3) }),
        preset("handsize.small", "Small hands, scale factor 0.8", A::HandSize { alpha: ParamRange::fixed(0.8) }),
        preset(
            "viewrot.yaw",
            "Yaw rotation along center, degree (-45, +45)",
            A::ViewRot {
                axis: RotationAxis::Yaw,
                angle_deg: ParamRange::symmetric(45.0),
            },
        ),
        preset(
            "fingerfold.gradual",
            "Gradual finger fold per timestep, folding_progression [0.2, 0.4, 0.6, 0.8]",
            A::FingerFold {
                progression: vec![0.2, 0.4, 0.6, 0.8],
                max_angles_deg: DEFAULT_FOLD_ANGLES_DEG,
            },
        ),
        preset(
            "elbowdisp.inward",
            "Inward, intensity 0.4",
            A::ElbowDisp {
                direction: Direction::Inward,
                intensity: 0.4,
                ramp: Ramp::Linear,
            },
        ),
        preset(
            "elbowdisp.outward",
            "Outward, intensity 0.3",
            A::ElbowDisp {
                direction: Direction::Outward,
                intensity: 0.3,
                ramp: Ramp::Linear,
            },
        ),
        preset("timewarp.moderate", "Moderate time warp, sigma 0.1, knots 4", A::TimeWarp { sigma: 0.1, knots: 4 }),
        preset("timewarp.mild", "Mild time warp, sigma 0.05, knots 4", A::TimeWarp { sigma: 0.05, knots: 4 }),
        // sampled spans between the paired patterns above
        preset("camdepth.range", "Distance sampled in [0.7, 1.3]", A::CamDepth { scale: ParamRange(0.7, 1.3) }),
        preset(
            "tempdepth.range",
            "Ramp start in [0.5, 0.7], end in [1.3, 1.5]",
            A::TempDepth {
                schedule: DepthSchedule::LinearRamp {
                    start: ParamRange(0.5, 0.7),
                    end: ParamRange(1.3, 1.5),
                },
            },
        ),
        preset(
            "hvshift.constant",
            "Constant shift, distance (-0.15, 0.15)",
            A::HvShift {
                shift: ShiftMode::Constant {
                    dx: ParamRange::symmetric(0.15),
                    dy: ParamRange::symmetric(0.15),
                },
            },
        ),
        preset("handsize.range", "Scale factor sampled in [0.8, 1.3]", A::HandSize { alpha: ParamRange(0.8, 1.3) }),
        preset("neutral", "Identity (depth scale 1)", AugmentationSpec::neutral()),
    ]
}

pub fn lookup(name: &str) -> Result<AugmentationSpec> {
    catalogue()
        .into_iter()
        .find(|p| p.name == name)
        .map(|p| p.spec)
        .ok_or_else(|| Error::UnknownPreset(name.to_string()))
}

/// One preset per transformation family, in catalogue order.
pub const DEFAULT_SPECIALISTS: [&str; 8] = [
    "camdepth.range",
    "tempdepth.range",
    "hvshift.linear",
    "handsize.range",
    "viewrot.yaw",
    "fingerfold.gradual",
    "elbowdisp.inward",
    "timewarp.moderate",
];

/// Default specialist presets for a skeleton: all eight families when the
/// topology has fingers and a torso, otherwise the hand-specific families
/// are dropped.
pub fn default_specialists(topo: &SkeletonTopology) -> Vec<&'static str> {
    DEFAULT_SPECIALISTS
        .iter()
        .copied()
        .filter(|name| {
            let spec = lookup(name).expect("default presets exist");
            !(spec.kind().hand_specific() && !topo.has_fingers())
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::augment::AugmentationKind;

    #[test]
    fn names_are_unique_and_valid() {
        let cat = catalogue();
        let mut names: Vec<_> = cat.iter().map(|p| p.name).collect();
        names.sort_unstable();
        names.dedup();
        assert_eq!(names.len(), cat.len());
        for p in &cat {
            p.spec.validate().unwrap();
        }
        assert!(matches!(lookup("bogus"), Err(Error::UnknownPreset(_))));
    }

    #[test]
    fn published_values() {
        assert_eq!(lookup("camdepth.near").unwrap(), AugmentationSpec::CamDepth { scale: ParamRange::fixed(0.7) });
        assert_eq!(lookup("camdepth.far").unwrap(), AugmentationSpec::CamDepth { scale: ParamRange::fixed(1.3) });
        match lookup("tempdepth.near_to_far").unwrap() {
            AugmentationSpec::TempDepth {
                schedule: DepthSchedule::LinearRamp { start, end },
            } => assert_eq!((start, end), (ParamRange::fixed(0.7), ParamRange::fixed(1.5))),
            other => panic!("{other:?}"),
        }
        assert_eq!(
            lookup("hvshift.sine").unwrap(),
            AugmentationSpec::HvShift {
                shift: ShiftMode::Sine { amp_x: 0.10, amp_y: 0.08, frequency: 1.5 }
            }
        );
        assert_eq!(lookup("handsize.small").unwrap(), AugmentationSpec::HandSize { alpha: ParamRange::fixed(0.8) });
        assert_eq!(
            lookup("viewrot.yaw").unwrap(),
            AugmentationSpec::ViewRot { axis: RotationAxis::Yaw, angle_deg: ParamRange(-45.0, 45.0) }
        );
        match lookup("fingerfold.gradual").unwrap() {
            AugmentationSpec::FingerFold { progression, .. } => assert_eq!(progression, vec![0.2, 0.4, 0.6, 0.8]),
            other => panic!("{other:?}"),
        }
        match lookup("elbowdisp.outward").unwrap() {
            AugmentationSpec::ElbowDisp { direction, intensity, .. } => {
                assert_eq!((direction, intensity), (Direction::Outward, 0.3))
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(lookup("timewarp.mild").unwrap(), AugmentationSpec::TimeWarp { sigma: 0.05, knots: 4 });
    }

    #[test]
    fn default_lists_by_skeleton() {
        let hands = default_specialists(&SkeletonTopology::hands42());
        assert_eq!(hands.len(), 8);
        let body = default_specialists(&SkeletonTopology::body20());
        assert_eq!(body.len(), 6);
        assert!(body.iter().all(|n| {
            let k = lookup(n).unwrap().kind();
            k != AugmentationKind::FingerFold && k != AugmentationKind::ElbowDisp
        }));
    }
}
