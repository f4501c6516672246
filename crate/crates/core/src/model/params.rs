use ndarray::Array2;
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::rng::Rng;

/// Named 2D parameter tensors in a fixed order. Vectors are stored as `1 x n`.
#[derive(Debug, Clone, PartialEq)]
pub struct ParamStore {
    names: Vec<String>,
    tensors: Vec<Array2<f64>>,
}

impl ParamStore {
    pub(crate) fn new() -> Self {
        Self {
            names: vec![],
            tensors: vec![],
        }
    }

    pub(crate) fn push(&mut self, name: impl Into<String>, tensor: Array2<f64>) -> usize {
        self.names.push(name.into());
        self.tensors.push(tensor);
        self.tensors.len() - 1
    }

    /// Weight matrix with entries uniform in `±1/sqrt(rows)`.
    pub(crate) fn push_uniform(&mut self, name: &str, rows: usize, cols: usize, rng: &mut Rng) -> usize {
        let bound = 1.0 / (rows as f64).sqrt();
        let t = Array2::from_shape_fn((rows, cols), |_| rng.random_range(-bound..=bound));
        self.push(name, t)
    }

    pub(crate) fn push_zeros(&mut self, name: &str, rows: usize, cols: usize) -> usize {
        self.push(name, Array2::zeros((rows, cols)))
    }

    pub(crate) fn push_filled(&mut self, name: &str, rows: usize, cols: usize, v: f64) -> usize {
        self.push(name, Array2::from_elem((rows, cols), v))
    }

    pub fn from_parts(names: Vec<String>, tensors: Vec<Array2<f64>>) -> Result<Self> {
        if names.len() != tensors.len() {
            return Err(Error::Shape("parameter names and tensors differ in count".into()));
        }
        Ok(Self { names, tensors })
    }

    pub fn len(&self) -> usize {
        self.tensors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tensors.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn tensors(&self) -> &[Array2<f64>] {
        &self.tensors
    }

    pub fn tensors_mut(&mut self) -> &mut [Array2<f64>] {
        &mut self.tensors
    }

    pub fn get(&self, i: usize) -> &Array2<f64> {
        &self.tensors[i]
    }

    pub(crate) fn get_mut(&mut self, i: usize) -> &mut Array2<f64> {
        &mut self.tensors[i]
    }

    pub fn scalar_count(&self) -> usize {
        self.tensors.iter().map(Array2::len).sum()
    }

    pub fn zeros_like(&self) -> Self {
        Self {
            names: self.names.clone(),
            tensors: self.tensors.iter().map(|t| Array2::zeros(t.raw_dim())).collect(),
        }
    }

    pub fn same_shape(&self, other: &Self) -> bool {
        self.tensors.len() == other.tensors.len()
            && self
                .tensors
                .iter()
                .zip(&other.tensors)
                .all(|(a, b)| a.shape() == b.shape())
    }

    /// `self += scale * other`.
    pub fn add_scaled(&mut self, other: &Self, scale: f64) {
        for (a, b) in self.tensors.iter_mut().zip(&other.tensors) {
            a.scaled_add(scale, b);
        }
    }

    /// Round every entry to the nearest single-precision value.
    pub fn round_to_f32(&mut self) {
        for t in &mut self.tensors {
            t.mapv_inplace(|v| v as f32 as f64);
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.tensors
            .iter()
            .flat_map(|t| t.iter())
            .fold(0.0f64, |m, v| m.max(v.abs()))
    }
}
