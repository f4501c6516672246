//! Central finite-difference verification of analytic gradients.

use super::Classifier;
use crate::error::Result;
use crate::landmarks::LandmarkSequence;

/// Outcome of [`gradient_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheck {
    /// Largest `|a - n| / max(|a|, |n|, floor)` over all scalars.
    pub max_relative_error: f64,
    /// Tensor name and flat index where it occurred.
    pub worst: (String, usize),
    pub scalars: usize,
}

/// Compare the analytic gradient of the mean batch loss against central
/// differences `(L(θ+ε) - L(θ-ε)) / 2ε` for every parameter, with dropout off.
/// `floor` keeps near-zero gradients from dominating the relative error.
pub fn gradient_check(
    model: &Classifier,
    batch: &[LandmarkSequence],
    labels: &[usize],
    epsilon: f64,
    floor: f64,
) -> Result<GradientCheck> {
    let refs: Vec<&LandmarkSequence> = batch.iter().collect();
    let (_, analytic) = model.loss_and_gradients(&refs, labels, None)?;
    let mut probe = model.clone();
    let mut out = GradientCheck {
        max_relative_error: 0.0,
        worst: (String::new(), 0),
        scalars: 0,
    };
    for ti in 0..model.params.len() {
        for idx in 0..model.params.get(ti).len() {
            let orig = model.params.get(ti).as_slice().expect("contiguous")[idx];
            let mut loss_at = |v: f64| -> Result<f64> {
                probe.params.get_mut(ti).as_slice_mut().expect("contiguous")[idx] = v;
                Ok(probe.loss_and_gradients(&refs, labels, None)?.0)
            };
            let numeric = (loss_at(orig + epsilon)? - loss_at(orig - epsilon)?) / (2.0 * epsilon);
            loss_at(orig)?;
            let a = analytic.get(ti).as_slice().expect("contiguous")[idx];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(floor);
            if rel > out.max_relative_error {
                out.max_relative_error = rel;
                out.worst = (model.params.names()[ti].clone(), idx);
            }
            out.scalars += 1;
        }
    }
    Ok(out)
}
