use super::params::ParamStore;
use crate::error::{Error, Result};

/// Adam with bias-corrected moment estimates.
#[derive(Debug, Clone)]
pub struct Adam {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
    m: ParamStore,
    v: ParamStore,
    steps: u64,
}

impl Adam {
    pub fn new(params: &ParamStore, learning_rate: f64) -> Self {
        Self {
            learning_rate,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
            m: params.zeros_like(),
            v: params.zeros_like(),
            steps: 0,
        }
    }

    pub fn steps(&self) -> u64 {
        self.steps
    }

    pub fn step(&mut self, params: &mut ParamStore, grads: &ParamStore) -> Result<()> {
        if !params.same_shape(grads) || !params.same_shape(&self.m) {
            return Err(Error::Shape("gradient shapes do not match parameters".into()));
        }
        self.steps += 1;
        let (b1, b2) = (self.beta1, self.beta2);
        let c1 = 1.0 - b1.powi(self.steps as i32);
        let c2 = 1.0 - b2.powi(self.steps as i32);
        let lr = self.learning_rate;
        let eps = self.epsilon;
        for (((p, g), m), v) in params
            .tensors_mut()
            .iter_mut()
            .zip(grads.tensors())
            .zip(self.m.tensors_mut())
            .zip(self.v.tensors_mut())
        {
            ndarray::Zip::from(p).and(g).and(m).and(v).for_each(|p, &g, m, v| {
                *m = b1 * *m + (1.0 - b1) * g;
                *v = b2 * *v + (1.0 - b2) * g * g;
                let mhat = *m / c1;
                let vhat = *v / c2;
                *p -= lr * mhat / (vhat.sqrt() + eps);
            });
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ndarray::Array2;

    fn store(v: f64) -> ParamStore {
        ParamStore::from_parts(vec!["w".into()], vec![Array2::from_elem((1, 1), v)]).unwrap()
    }

    #[test]
    fn zero_gradient_is_a_no_op() {
        let mut p = store(0.5);
        let mut adam = Adam::new(&p, 1e-3);
        adam.step(&mut p, &store(0.0)).unwrap();
        assert_eq!(p.get(0)[[0, 0]], 0.5);
    }

    #[test]
    fn first_step_moves_by_learning_rate() {
        for g in [3.0, -0.02, 1e-3] {
            let mut p = store(1.0);
            let mut adam = Adam::new(&p, 1e-4);
            adam.step(&mut p, &store(g)).unwrap();
            // m̂ = g, v̂ = g², so the update is lr · g / (|g| + ε)
            let expected = 1e-4 * g / (g.abs() + 1e-8);
            assert!((1.0 - p.get(0)[[0, 0]] - expected).abs() < 1e-15);
        }
    }

    #[test]
    fn shape_mismatch_is_rejected() {
        let mut p = store(0.0);
        let mut adam = Adam::new(&p, 1e-3);
        let bad = ParamStore::from_parts(vec!["w".into()], vec![Array2::zeros((2, 1))]).unwrap();
        assert!(adam.step(&mut p, &bad).is_err());
    }
}
