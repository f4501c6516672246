//! Post-norm transformer encoder classifier with hand-derived gradients.
//!
//! Per layer:
//! `h1 = LN(h + drop(MHA(h)))`, `h2 = LN(h1 + drop(W2 drop(relu(W1 h1))))`.
//! Padded frames are masked out of attention keys and pooling, so they never
//! influence real frames.

use ndarray::{s, Array1, Array2, Axis};

use super::config::ModelConfig;
use super::layers::{
    apply_mask, col_sum, dropout_mask, layer_norm, layer_norm_backward, pool, pool_backward, row,
    Input, LayerNormCache,
};
use super::params::ParamStore;
use crate::rng::Rng;

const W_IN: usize = 0;
const B_IN: usize = 1;
const POS: usize = 2;
const HEAD: usize = 3;
const PER_LAYER: usize = 16;

// offsets inside one layer block
const WQ: usize = 0;
const BQ: usize = 1;
const WK: usize = 2;
const BK: usize = 3;
const WV: usize = 4;
const BV: usize = 5;
const WO: usize = 6;
const BO: usize = 7;
const LN1_G: usize = 8;
const LN1_B: usize = 9;
const W1: usize = 10;
const B1: usize = 11;
const W2: usize = 12;
const B2: usize = 13;
const LN2_G: usize = 14;
const LN2_B: usize = 15;

fn layer_base(l: usize) -> usize {
    HEAD + l * PER_LAYER
}

fn cls_w(cfg: &ModelConfig) -> usize {
    layer_base(cfg.encoder_layers)
}

pub(crate) fn init(cfg: &ModelConfig, rng: &mut Rng) -> ParamStore {
    let d = cfg.dim();
    let mut p = ParamStore::new();
    p.push_uniform("input.weight", cfg.input_dim, d, rng);
    p.push_zeros("input.bias", 1, d);
    p.push_uniform("position", cfg.max_len, d, rng);
    for l in 0..cfg.encoder_layers {
        for (name, rows, cols) in [("q", d, d), ("k", d, d), ("v", d, d), ("out", d, d)] {
            p.push_uniform(&format!("layer{l}.attn.{name}.weight"), rows, cols, rng);
            p.push_zeros(&format!("layer{l}.attn.{name}.bias"), 1, cols);
        }
        p.push_filled(&format!("layer{l}.norm1.gain"), 1, d, 1.0);
        p.push_zeros(&format!("layer{l}.norm1.bias"), 1, d);
        p.push_uniform(&format!("layer{l}.ff1.weight"), d, cfg.ff_dim, rng);
        p.push_zeros(&format!("layer{l}.ff1.bias"), 1, cfg.ff_dim);
        p.push_uniform(&format!("layer{l}.ff2.weight"), cfg.ff_dim, d, rng);
        p.push_zeros(&format!("layer{l}.ff2.bias"), 1, d);
        p.push_filled(&format!("layer{l}.norm2.gain"), 1, d, 1.0);
        p.push_zeros(&format!("layer{l}.norm2.bias"), 1, d);
    }
    p.push_uniform("classifier.weight", d, cfg.class_count, rng);
    p.push_zeros("classifier.bias", 1, cfg.class_count);
    p
}

struct LayerCache {
    h_in: Array2<f64>,
    q: Array2<f64>,
    k: Array2<f64>,
    v: Array2<f64>,
    attn: Vec<Array2<f64>>,
    concat: Array2<f64>,
    drop_attn: Option<Array2<f64>>,
    ln1: LayerNormCache,
    h1: Array2<f64>,
    ff_pre: Array2<f64>,
    ff_act: Array2<f64>,
    drop_act: Option<Array2<f64>>,
    drop_ff: Option<Array2<f64>>,
    ln2: LayerNormCache,
}

pub(crate) struct Cache {
    x: Array2<f64>,
    real: Vec<usize>,
    layers: Vec<LayerCache>,
    h_out: Array2<f64>,
    z: Array1<f64>,
}

/// Row-wise softmax restricted to the real key columns.
fn masked_softmax(scores: &Array2<f64>, real: &[usize]) -> Array2<f64> {
    let mut out = Array2::zeros(scores.raw_dim());
    for (r, srow) in scores.outer_iter().enumerate() {
        let m = real.iter().map(|&j| srow[j]).fold(f64::NEG_INFINITY, f64::max);
        let mut sum = 0.0;
        for &j in real {
            let e = (srow[j] - m).exp();
            out[[r, j]] = e;
            sum += e;
        }
        for &j in real {
            out[[r, j]] /= sum;
        }
    }
    out
}

pub(crate) fn forward(
    cfg: &ModelConfig,
    p: &ParamStore,
    input: Input,
    mut rng: Option<&mut Rng>,
) -> (Array1<f64>, Cache) {
    let t = input.x.nrows();
    let d = cfg.dim();
    let heads = cfg.attention_heads;
    let dh = d / heads;
    let scale = 1.0 / (dh as f64).sqrt();
    let mut h = input.x.dot(p.get(W_IN)) + p.get(B_IN) + p.get(POS).slice(s![..t, ..]);
    let mut layers = Vec::with_capacity(cfg.encoder_layers);
    for l in 0..cfg.encoder_layers {
        let b = layer_base(l);
        let q = h.dot(p.get(b + WQ)) + p.get(b + BQ);
        let k = h.dot(p.get(b + WK)) + p.get(b + BK);
        let v = h.dot(p.get(b + WV)) + p.get(b + BV);
        let mut concat = Array2::zeros((t, d));
        let mut attn = Vec::with_capacity(heads);
        for hd in 0..heads {
            let cols = s![.., hd * dh..(hd + 1) * dh];
            let scores = q.slice(cols).dot(&k.slice(cols).t()) * scale;
            let a = masked_softmax(&scores, &input.real);
            concat.slice_mut(cols).assign(&a.dot(&v.slice(cols)));
            attn.push(a);
        }
        let attn_out = concat.dot(p.get(b + WO)) + p.get(b + BO);
        let drop_attn = dropout_mask(t, d, cfg.dropout, rng.as_deref_mut());
        let r1 = &h + &apply_mask(attn_out, &drop_attn);
        let (h1, ln1) = layer_norm(&r1, p.get(b + LN1_G), p.get(b + LN1_B));
        let ff_pre = h1.dot(p.get(b + W1)) + p.get(b + B1);
        let ff_act = ff_pre.mapv(|v| v.max(0.0));
        let drop_act = dropout_mask(t, cfg.ff_dim, cfg.dropout, rng.as_deref_mut());
        let ff_out = apply_mask(ff_act.clone(), &drop_act).dot(p.get(b + W2)) + p.get(b + B2);
        let drop_ff = dropout_mask(t, d, cfg.dropout, rng.as_deref_mut());
        let r2 = &h1 + &apply_mask(ff_out, &drop_ff);
        let (h2, ln2) = layer_norm(&r2, p.get(b + LN2_G), p.get(b + LN2_B));
        layers.push(LayerCache {
            h_in: h,
            q,
            k,
            v,
            attn,
            concat,
            drop_attn,
            ln1,
            h1,
            ff_pre,
            ff_act,
            drop_act,
            drop_ff,
            ln2,
        });
        h = h2;
    }
    let z = pool(h.view(), &input.real, cfg.pooling);
    let c = cls_w(cfg);
    let logits = z.dot(p.get(c)) + p.get(c + 1).row(0);
    let cache = Cache {
        x: input.x,
        real: input.real,
        layers,
        h_out: h,
        z,
    };
    (logits, cache)
}

fn masked(a: Array2<f64>, m: &Option<Array2<f64>>) -> Array2<f64> {
    apply_mask(a, m)
}

pub(crate) fn backward(cfg: &ModelConfig, p: &ParamStore, c: &Cache, dlogits: &Array1<f64>) -> ParamStore {
    let mut g = p.zeros_like();
    let t = c.x.nrows();
    let d = cfg.dim();
    let heads = cfg.attention_heads;
    let dh = d / heads;
    let scale = 1.0 / (dh as f64).sqrt();

    let cw = cls_w(cfg);
    *g.get_mut(cw) = row(c.z.clone()).t().dot(&row(dlogits.clone()));
    *g.get_mut(cw + 1) = row(dlogits.clone());
    let dz = p.get(cw).dot(dlogits);
    let mut dh_out = pool_backward(&dz, c.h_out.nrows(), &c.real, cfg.pooling);

    for l in (0..cfg.encoder_layers).rev() {
        let b = layer_base(l);
        let lc = &c.layers[l];

        // second sublayer
        let (dr2, dg2, db2) = layer_norm_backward(&dh_out, &lc.ln2, p.get(b + LN2_G));
        *g.get_mut(b + LN2_G) = dg2;
        *g.get_mut(b + LN2_B) = db2;
        let dff_out = masked(dr2.clone(), &lc.drop_ff);
        let act_dropped = masked(lc.ff_act.clone(), &lc.drop_act);
        *g.get_mut(b + W2) = act_dropped.t().dot(&dff_out);
        *g.get_mut(b + B2) = col_sum(&dff_out);
        let dact = masked(dff_out.dot(&p.get(b + W2).t()), &lc.drop_act);
        let dpre = dact * &lc.ff_pre.mapv(|v| if v > 0.0 { 1.0 } else { 0.0 });
        *g.get_mut(b + W1) = lc.h1.t().dot(&dpre);
        *g.get_mut(b + B1) = col_sum(&dpre);
        let dh1 = dr2 + dpre.dot(&p.get(b + W1).t());

        // attention sublayer
        let (dr1, dg1, db1) = layer_norm_backward(&dh1, &lc.ln1, p.get(b + LN1_G));
        *g.get_mut(b + LN1_G) = dg1;
        *g.get_mut(b + LN1_B) = db1;
        let dattn_out = masked(dr1.clone(), &lc.drop_attn);
        *g.get_mut(b + WO) = lc.concat.t().dot(&dattn_out);
        *g.get_mut(b + BO) = col_sum(&dattn_out);
        let dconcat = dattn_out.dot(&p.get(b + WO).t());
        let mut dq = Array2::zeros((t, d));
        let mut dk = Array2::zeros((t, d));
        let mut dv = Array2::zeros((t, d));
        for hd in 0..heads {
            let cols = s![.., hd * dh..(hd + 1) * dh];
            let a = &lc.attn[hd];
            let do_h = dconcat.slice(cols);
            let da = do_h.dot(&lc.v.slice(cols).t());
            dv.slice_mut(cols).assign(&a.t().dot(&do_h));
            let rowdot = (&da * a).sum_axis(Axis(1));
            let ds = (da - &rowdot.insert_axis(Axis(1))) * a * scale;
            dq.slice_mut(cols).assign(&ds.dot(&lc.k.slice(cols)));
            dk.slice_mut(cols).assign(&ds.t().dot(&lc.q.slice(cols)));
        }
        *g.get_mut(b + WQ) = lc.h_in.t().dot(&dq);
        *g.get_mut(b + BQ) = col_sum(&dq);
        *g.get_mut(b + WK) = lc.h_in.t().dot(&dk);
        *g.get_mut(b + BK) = col_sum(&dk);
        *g.get_mut(b + WV) = lc.h_in.t().dot(&dv);
        *g.get_mut(b + BV) = col_sum(&dv);
        dh_out = dr1
            + dq.dot(&p.get(b + WQ).t())
            + dk.dot(&p.get(b + WK).t())
            + dv.dot(&p.get(b + WV).t());
    }

    *g.get_mut(W_IN) = c.x.t().dot(&dh_out);
    *g.get_mut(B_IN) = col_sum(&dh_out);
    g.get_mut(POS).slice_mut(s![..t, ..]).assign(&dh_out);
    g
}
