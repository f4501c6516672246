//! Pooled per-frame model: `z = pool(tanh(X W + b))`, `logits = z Wc + bc`.

use ndarray::{Array1, Array2};

use super::config::ModelConfig;
use super::layers::{apply_mask, col_sum, dropout_mask, pool, pool_backward, row, Input};
use super::params::ParamStore;
use crate::rng::Rng;

const W_IN: usize = 0;
const B_IN: usize = 1;
const W_CLS: usize = 2;
const B_CLS: usize = 3;

pub(crate) fn init(cfg: &ModelConfig, rng: &mut Rng) -> ParamStore {
    let d = cfg.dim();
    let mut p = ParamStore::new();
    p.push_uniform("embed.weight", cfg.input_dim, d, rng);
    p.push_zeros("embed.bias", 1, d);
    p.push_uniform("classifier.weight", d, cfg.class_count, rng);
    p.push_zeros("classifier.bias", 1, cfg.class_count);
    p
}

pub(crate) struct Cache {
    x: Array2<f64>,
    real: Vec<usize>,
    hidden: Array2<f64>,
    dropped: Array2<f64>,
    mask: Option<Array2<f64>>,
    z: Array1<f64>,
}

pub(crate) fn forward(
    cfg: &ModelConfig,
    p: &ParamStore,
    input: Input,
    rng: Option<&mut Rng>,
) -> (Array1<f64>, Cache) {
    let hidden = (input.x.dot(p.get(W_IN)) + p.get(B_IN)).mapv(f64::tanh);
    let mask = dropout_mask(hidden.nrows(), hidden.ncols(), cfg.dropout, rng);
    let dropped = apply_mask(hidden.clone(), &mask);
    let z = pool(dropped.view(), &input.real, cfg.pooling);
    let logits = z.dot(p.get(W_CLS)) + p.get(B_CLS).row(0);
    let cache = Cache {
        x: input.x,
        real: input.real,
        hidden,
        dropped,
        mask,
        z,
    };
    (logits, cache)
}

pub(crate) fn backward(cfg: &ModelConfig, p: &ParamStore, c: &Cache, dlogits: &Array1<f64>) -> ParamStore {
    let mut g = p.zeros_like();
    *g.get_mut(W_CLS) = row(c.z.clone()).t().dot(&row(dlogits.clone()));
    *g.get_mut(B_CLS) = row(dlogits.clone());
    let dz = p.get(W_CLS).dot(dlogits);
    let mut dh = pool_backward(&dz, c.dropped.nrows(), &c.real, cfg.pooling);
    if let Some(m) = &c.mask {
        dh *= m;
    }
    let dpre = dh * &c.hidden.mapv(|h| 1.0 - h * h);
    *g.get_mut(W_IN) = c.x.t().dot(&dpre);
    *g.get_mut(B_IN) = col_sum(&dpre);
    g
}
