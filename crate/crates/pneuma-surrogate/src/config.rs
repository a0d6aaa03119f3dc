use serde::{Deserialize, Serialize};

use crate::error::SurrogateError;

/// Architecture and training hyperparameters of the force surrogate.
///
/// The defaults are the best settings found by the hyperparameter sweeps:
/// linear force-pressure head (`degree` 1), three hidden layers, ring
/// embedding dimension 12, no ring pre-processing network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurrogateConfig {
    /// Ring latent dimension `d`. Must be at least 3 so that the learned
    /// missing-ring vector can sit outside the image of the 2-column ring
    /// projection and absence stays distinguishable from every real ring.
    pub embedding_dim: usize,
    /// Hidden-layer widths of an optional network applied to the summed
    /// ring latent before it joins the scalar features. Empty = off.
    pub pre_mlp: Vec<usize>,
    /// Number of hidden layers in the base network.
    pub hidden_layers: usize,
    /// Width of each hidden layer.
    pub hidden_width: usize,
    /// Degree of the force-pressure polynomial (1..=3). Coefficients of
    /// the pressure powers are positive by construction, so predicted
    /// force is always nondecreasing in pressure.
    pub degree: usize,
    /// Full-batch training iterations.
    pub iterations: usize,
    /// Learning rate at the first iteration.
    pub initial_lr: f64,
    /// Learning rate at the last iteration (geometric decay in between).
    pub final_lr: f64,
    /// Seed for weight initialization (and fold shuffling in k-fold runs).
    pub seed: u64,
}

impl Default for SurrogateConfig {
    fn default() -> Self {
        SurrogateConfig {
            embedding_dim: 12,
            pre_mlp: Vec::new(),
            hidden_layers: 3,
            hidden_width: 32,
            degree: 1,
            iterations: 10_000,
            initial_lr: 1e-2,
            final_lr: 1e-3,
            seed: 0,
        }
    }
}

impl SurrogateConfig {
    /// Checks every field contract.
    pub fn validate(&self) -> Result<(), SurrogateError> {
        let fail = |detail: String| Err(SurrogateError::InvalidConfig { detail });
        if self.embedding_dim < 3 {
            return fail(format!(
                "embedding_dim must be >= 3, got {}",
                self.embedding_dim
            ));
        }
        if self.pre_mlp.iter().any(|&w| w == 0) {
            return fail("pre_mlp widths must be nonzero".to_string());
        }
        if self.hidden_layers == 0 {
            return fail("hidden_layers must be >= 1".to_string());
        }
        if self.hidden_width == 0 {
            return fail("hidden_width must be >= 1".to_string());
        }
        if !(1..=3).contains(&self.degree) {
            return fail(format!("degree must be 1, 2, or 3, got {}", self.degree));
        }
        if self.iterations == 0 {
            return fail("iterations must be >= 1".to_string());
        }
        for (name, lr) in [("initial_lr", self.initial_lr), ("final_lr", self.final_lr)] {
            if !(lr.is_finite() && lr > 0.0) {
                return fail(format!("{name} must be positive and finite, got {lr}"));
            }
        }
        Ok(())
    }

    /// The learning rate used at iteration `t` of `self.iterations`:
    /// geometric interpolation from `initial_lr` to `final_lr`.
    pub fn learning_rate(&self, t: usize) -> f64 {
        if self.iterations <= 1 {
            return self.initial_lr;
        }
        let frac = t as f64 / (self.iterations - 1) as f64;
        self.initial_lr * (self.final_lr / self.initial_lr).powf(frac)
    }
}
