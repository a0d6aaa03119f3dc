use pneuma_data::{lhs_designs, DesignVector, SearchSpace};

use crate::acquisition::AcquisitionGrid;
use crate::ensemble::SurrogateEnsemble;
use crate::error::LearnError;

/// Mean predictive standard deviation over a space-filling (Latin
/// hypercube) sample of the design space, each design queried at the
/// grid's central (height, pressure). One number summarizing how
/// uncertain the ensemble still is across the whole space; deterministic
/// given the seed.
pub fn uncertainty_profile<S: SearchSpace + ?Sized>(
    ensemble: &SurrogateEnsemble,
    samples: usize,
    space: &S,
    grid: &AcquisitionGrid,
    seed: u64,
) -> Result<f64, LearnError> {
    if samples < 1 {
        return Err(LearnError::InvalidArgument {
            name: "samples",
            detail: "need at least one sample".into(),
        });
    }
    let designs: Vec<DesignVector> = lhs_designs(space, samples, seed)
        .into_iter()
        .map(|(_, design)| design)
        .collect();
    let (h, p) = grid.center();
    Ok(mean_std_over(ensemble, &designs, h, p))
}

/// Mean predictive standard deviation of the ensemble over an explicit
/// design list at one (height, pressure) — the order of the list cannot
/// matter beyond float summation order.
pub fn mean_std_over(
    ensemble: &SurrogateEnsemble,
    designs: &[DesignVector],
    height_mm: f64,
    pressure_kpa: f64,
) -> f64 {
    let mut evaluator = ensemble.evaluator();
    let total: f64 = designs
        .iter()
        .map(|d| evaluator.predict(d, height_mm, pressure_kpa).std)
        .sum();
    total / designs.len() as f64
}
