//! Forward/backward building blocks shared by both architectures.

use ndarray::{Array1, Array2, ArrayView2, Axis};
use rand::Rng as _;

use super::config::Pooling;
use crate::landmarks::LandmarkSequence;
use crate::rng::Rng;

pub(crate) const LN_EPS: f64 = 1e-5;

/// `T x F` feature matrix and the indices of real (non-padded) rows.
pub(crate) struct Input {
    pub x: Array2<f64>,
    pub real: Vec<usize>,
}

impl Input {
    pub fn from_sequence(seq: &LandmarkSequence) -> Self {
        let f = seq.joints() * 3;
        let x = Array2::from_shape_vec(
            (seq.len(), f),
            (0..seq.len()).flat_map(|t| seq.frame_features(t)).collect(),
        )
        .expect("frame features have J * 3 entries");
        Self {
            x,
            real: seq.real_indices().collect(),
        }
    }
}

pub(crate) fn row(v: Array1<f64>) -> Array2<f64> {
    v.insert_axis(Axis(0))
}

pub(crate) fn col_sum(a: &Array2<f64>) -> Array2<f64> {
    row(a.sum_axis(Axis(0)))
}

pub(crate) fn softmax(logits: &Array1<f64>) -> Array1<f64> {
    let m = logits.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
    let e = logits.mapv(|v| (v - m).exp());
    let s = e.sum();
    e / s
}

/// Inverted dropout mask (entries `0` or `1 / (1 - p)`), or `None` when
/// dropout is inactive.
pub(crate) fn dropout_mask(
    rows: usize,
    cols: usize,
    p: f64,
    rng: Option<&mut Rng>,
) -> Option<Array2<f64>> {
    let rng = rng?;
    if p <= 0.0 {
        return None;
    }
    let keep = 1.0 / (1.0 - p);
    Some(Array2::from_shape_fn((rows, cols), |_| {
        if rng.random::<f64>() < p {
            0.0
        } else {
            keep
        }
    }))
}

pub(crate) fn apply_mask(a: Array2<f64>, mask: &Option<Array2<f64>>) -> Array2<f64> {
    match mask {
        Some(m) => a * m,
        None => a,
    }
}

pub(crate) fn pool(h: ArrayView2<f64>, real: &[usize], pooling: Pooling) -> Array1<f64> {
    match pooling {
        Pooling::MeanOverTime => {
            let mut z = Array1::zeros(h.ncols());
            for &t in real {
                z += &h.row(t);
            }
            z / real.len() as f64
        }
        Pooling::LastTimestep => h.row(*real.last().expect("non-empty")).to_owned(),
    }
}

pub(crate) fn pool_backward(dz: &Array1<f64>, rows: usize, real: &[usize], pooling: Pooling) -> Array2<f64> {
    let mut dh = Array2::zeros((rows, dz.len()));
    match pooling {
        Pooling::MeanOverTime => {
            let g = dz / real.len() as f64;
            for &t in real {
                dh.row_mut(t).assign(&g);
            }
        }
        Pooling::LastTimestep => dh.row_mut(*real.last().expect("non-empty")).assign(dz),
    }
    dh
}

pub(crate) struct LayerNormCache {
    xhat: Array2<f64>,
    inv_std: Array1<f64>,
}

/// Row-wise layer norm with gain `gamma` and bias `beta` (both `1 x d`).
pub(crate) fn layer_norm(
    x: &Array2<f64>,
    gamma: &Array2<f64>,
    beta: &Array2<f64>,
) -> (Array2<f64>, LayerNormCache) {
    let d = x.ncols() as f64;
    let mean = x.sum_axis(Axis(1)) / d;
    let centered = x - &mean.view().insert_axis(Axis(1));
    let var = centered.mapv(|v| v * v).sum_axis(Axis(1)) / d;
    let inv_std = var.mapv(|v| 1.0 / (v + LN_EPS).sqrt());
    let xhat = centered * inv_std.view().insert_axis(Axis(1));
    let y = &xhat * gamma + beta;
    (y, LayerNormCache { xhat, inv_std })
}

/// Returns `(dx, dgamma, dbeta)`.
pub(crate) fn layer_norm_backward(
    dy: &Array2<f64>,
    cache: &LayerNormCache,
    gamma: &Array2<f64>,
) -> (Array2<f64>, Array2<f64>, Array2<f64>) {
    let dgamma = col_sum(&(dy * &cache.xhat));
    let dbeta = col_sum(dy);
    let dxhat = dy * gamma;
    let d = dy.ncols() as f64;
    let mean_dxhat = dxhat.sum_axis(Axis(1)) / d;
    let mean_dxhat_xhat = (&dxhat * &cache.xhat).sum_axis(Axis(1)) / d;
    let dx = (dxhat
        - mean_dxhat.view().insert_axis(Axis(1))
        - &cache.xhat * &mean_dxhat_xhat.view().insert_axis(Axis(1)))
        * cache.inv_std.view().insert_axis(Axis(1));
    (dx, dgamma, dbeta)
}
