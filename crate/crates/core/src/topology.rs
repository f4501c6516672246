//! Skeleton topology: which joints form hands, wrists, finger chains and the
//! torso reference that the geometry-aware augmentations consult.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::landmarks::{centroid, Point};

/// One hand: its joints, its wrist, and its finger chains.
///
/// A finger chain is `[pivot, f1, f2, f3]`: the first rotation pivots about
/// `pivot` and moves `f1`, the second rotates the `f1 -> f2` segment, the third
/// the `f2 -> f3` segment.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hand {
    pub joints: Vec<usize>,
    pub wrist: usize,
    #[serde(default)]
    pub fingers: Vec<[usize; 4]>,
}

/// The point hands move toward (inward) or away from (outward).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TorsoReference {
    Joint(usize),
    Midpoint(usize, usize),
    /// Per-frame centroid of all joints, for skeletons without a torso.
    Centroid,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SkeletonTopology {
    pub name: String,
    pub joint_names: Vec<String>,
    pub hands: Vec<Hand>,
    pub torso: Option<TorsoReference>,
}

impl SkeletonTopology {
    pub fn joint_count(&self) -> usize {
        self.joint_names.len()
    }

    pub fn has_hands(&self) -> bool {
        self.hands.iter().any(|h| !h.joints.is_empty())
    }

    pub fn has_fingers(&self) -> bool {
        self.hands.iter().any(|h| !h.fingers.is_empty())
    }

    /// Torso reference point for one frame.
    pub fn torso_point(&self, frame: &[Point]) -> Option<Point> {
        Some(match self.torso? {
            TorsoReference::Joint(i) => frame[i],
            TorsoReference::Midpoint(a, b) => (frame[a] + frame[b]) / 2.0,
            TorsoReference::Centroid => centroid(frame),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let j = self.joint_count();
        if j == 0 {
            return Err(Error::Topology("topology has no joints".into()));
        }
        let bad = |what: &str, i: usize| Error::Topology(format!("{what} index {i} >= joint count {j}"));
        for (h, hand) in self.hands.iter().enumerate() {
            if let Some(&i) = hand.joints.iter().find(|&&i| i >= j) {
                return Err(bad("hand joint", i));
            }
            if !hand.joints.contains(&hand.wrist) {
                return Err(Error::Topology(format!(
                    "hand {h}: wrist {} is not one of its joints",
                    hand.wrist
                )));
            }
            for chain in &hand.fingers {
                if chain.iter().any(|i| !hand.joints.contains(i)) {
                    return Err(Error::Topology(format!(
                        "hand {h}: finger chain {chain:?} leaves the hand"
                    )));
                }
                let mut sorted = *chain;
                sorted.sort_unstable();
                if sorted.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Topology(format!(
                        "hand {h}: finger chain {chain:?} repeats a joint"
                    )));
                }
            }
        }
        match self.torso {
            Some(TorsoReference::Joint(i)) if i >= j => Err(bad("torso", i)),
            Some(TorsoReference::Midpoint(a, b)) if a >= j || b >= j => Err(bad("torso", a.max(b))),
            _ => Ok(()),
        }
    }

    /// Look up a named preset: `hands42`, `body20` or `synth8`.
    pub fn preset(name: &str) -> Result<Self> {
        match name {
            "hands42" => Ok(Self::hands42()),
            "body20" => Ok(Self::body20()),
            "synth8" => Ok(Self::synth8()),
            other => Err(Error::Topology(format!(
                "unknown topology preset `{other}` (known: hands42, body20, synth8)"
            ))),
        }
    }

    /// Two 21-landmark hands in the MediaPipe hand ordering (left then right).
    pub fn hands42() -> Self {
        const PARTS: [&str; 21] = [
            "wrist", "thumb_cmc", "thumb_mcp", "thumb_ip", "thumb_tip", "index_mcp",
            "index_pip", "index_dip", "index_tip", "middle_mcp", "middle_pip", "middle_dip",
            "middle_tip", "ring_mcp", "ring_pip", "ring_dip", "ring_tip", "pinky_mcp",
            "pinky_pip", "pinky_dip", "pinky_tip",
        ];
        let mut joint_names = Vec::with_capacity(42);
        let mut hands = Vec::with_capacity(2);
        for (side, off) in [("left", 0), ("right", 21)] {
            joint_names.extend(PARTS.iter().map(|p| format!("{side}_{p}")));
            let fingers = (0..5)
                .map(|f| {
                    let b = off + 1 + 4 * f;
                    [b, b + 1, b + 2, b + 3]
                })
                .collect();
            hands.push(Hand {
                joints: (off..off + 21).collect(),
                wrist: off,
                fingers,
            });
        }
        Self {
            name: "hands42".into(),
            joint_names,
            hands,
            torso: Some(TorsoReference::Centroid),
        }
    }

    /// Kinect v1 20-joint body skeleton.
    pub fn body20() -> Self {
        const NAMES: [&str; 20] = [
            "hip_center", "spine", "shoulder_center", "head", "shoulder_left", "elbow_left",
            "wrist_left", "hand_left", "shoulder_right", "elbow_right", "wrist_right",
            "hand_right", "hip_left", "knee_left", "ankle_left", "foot_left", "hip_right",
            "knee_right", "ankle_right", "foot_right",
        ];
        Self {
            name: "body20".into(),
            joint_names: NAMES.iter().map(|s| s.to_string()).collect(),
            hands: vec![
                Hand {
                    joints: vec![6, 7],
                    wrist: 6,
                    fingers: vec![],
                },
                Hand {
                    joints: vec![10, 11],
                    wrist: 10,
                    fingers: vec![],
                },
            ],
            torso: Some(TorsoReference::Midpoint(4, 8)),
        }
    }

    /// Compact 8-joint arm-and-hand skeleton used by the synthetic benchmark.
    pub fn synth8() -> Self {
        const NAMES: [&str; 8] = [
            "torso", "elbow", "wrist", "finger_mcp", "finger_pip", "finger_dip", "finger_tip",
            "thumb_tip",
        ];
        Self {
            name: "synth8".into(),
            joint_names: NAMES.iter().map(|s| s.to_string()).collect(),
            hands: vec![Hand {
                joints: vec![2, 3, 4, 5, 6, 7],
                wrist: 2,
                fingers: vec![[3, 4, 5, 6]],
            }],
            torso: Some(TorsoReference::Joint(0)),
        }
    }

    /// A topology with `joints` anonymous joints and no hands.
    pub fn plain(joints: usize) -> Self {
        Self {
            name: format!("plain{joints}"),
            joint_names: (0..joints).map(|j| format!("j{j}")).collect(),
            hands: vec![],
            torso: None,
        }
    }
}
