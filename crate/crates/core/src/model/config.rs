use serde::{Deserialize, Serialize};

use crate::dataset::Preprocess;
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Arch {
    /// Transformer encoder stack with learned positional embeddings.
    Transformer,
    /// Per-frame affine embedding with `tanh`, pooled over time, then an
    /// affine classifier.
    LinearPooled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Pooling {
    MeanOverTime,
    LastTimestep,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelConfig {
    pub arch: Arch,
    /// Features per frame, `J * 3`.
    pub input_dim: usize,
    /// Width of the hidden representation. For the transformer `None` picks
    /// `heads * ceil(input_dim / heads)`; for the pooled model it defaults to 32.
    #[serde(default)]
    pub model_dim: Option<usize>,
    pub encoder_layers: usize,
    pub attention_heads: usize,
    pub ff_dim: usize,
    pub dropout: f64,
    pub pooling: Pooling,
    pub class_count: usize,
    /// Longest sequence the positional table covers.
    pub max_len: usize,
}

impl ModelConfig {
    /// The published encoder: 4 layers, 9 heads, feed-forward width 256,
    /// dropout 0.1, mean pooling over time.
    pub fn transformer(input_dim: usize, class_count: usize, max_len: usize) -> Self {
        Self {
            arch: Arch::Transformer,
            input_dim,
            model_dim: None,
            encoder_layers: 4,
            attention_heads: 9,
            ff_dim: 256,
            dropout: 0.1,
            pooling: Pooling::MeanOverTime,
            class_count,
            max_len,
        }
    }

    pub fn linear_pooled(input_dim: usize, class_count: usize, hidden: usize) -> Self {
        Self {
            arch: Arch::LinearPooled,
            input_dim,
            model_dim: Some(hidden),
            encoder_layers: 0,
            attention_heads: 1,
            ff_dim: 0,
            dropout: 0.0,
            pooling: Pooling::MeanOverTime,
            class_count,
            max_len: usize::MAX,
        }
    }

    pub fn dim(&self) -> usize {
        match (self.arch, self.model_dim) {
            (_, Some(d)) => d,
            (Arch::Transformer, None) => {
                let h = self.attention_heads.max(1);
                h * self.input_dim.div_ceil(h)
            }
            (Arch::LinearPooled, None) => 32,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let err = |m: String| Err(Error::Config(m));
        if self.input_dim == 0 || self.class_count == 0 {
            return err("input_dim and class_count must be positive".into());
        }
        if !(0.0..1.0).contains(&self.dropout) {
            return err(format!("dropout {} outside [0, 1)", self.dropout));
        }
        if self.dim() == 0 {
            return err("model_dim must be positive".into());
        }
        if self.arch == Arch::Transformer {
            if self.attention_heads == 0 || !self.dim().is_multiple_of(self.attention_heads) {
                return err(format!(
                    "model_dim {} is not divisible by {} heads",
                    self.dim(),
                    self.attention_heads
                ));
            }
            if self.ff_dim == 0 || self.max_len == 0 {
                return err("ff_dim and max_len must be positive".into());
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TrainConfig {
    pub learning_rate: f64,
    pub batch_size: usize,
    pub max_epochs: usize,
    /// Epochs without a validation improvement before stopping; 0 disables
    /// early stopping.
    pub patience: usize,
    pub seed: u64,
    /// Normalization applied to every input, after any augmentation. Stored
    /// with the trained model and reapplied at prediction time.
    #[serde(default)]
    pub preprocess: Preprocess,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            learning_rate: 1e-4,
            batch_size: 16,
            max_epochs: 400,
            patience: 50,
            seed: 0,
            preprocess: Preprocess::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.learning_rate > 0.0) || self.batch_size == 0 || self.max_epochs == 0 {
            return Err(Error::Config(
                "learning_rate, batch_size and max_epochs must be positive".into(),
            ));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dims_follow_head_rule() {
        let c = ModelConfig::transformer(126, 100, 80);
        assert_eq!(c.dim(), 126);
        c.validate().unwrap();
        let c = ModelConfig::transformer(60, 27, 80);
        assert_eq!(c.dim(), 63);
        c.validate().unwrap();
    }

    #[test]
    fn bad_configs() {
        let mut c = ModelConfig::transformer(6, 2, 4);
        c.model_dim = Some(7);
        c.attention_heads = 2;
        assert!(c.validate().is_err());
        let mut c = ModelConfig::linear_pooled(6, 2, 8);
        c.dropout = 1.0;
        assert!(c.validate().is_err());
        assert!(TrainConfig { batch_size: 0, ..Default::default() }.validate().is_err());
    }
}
