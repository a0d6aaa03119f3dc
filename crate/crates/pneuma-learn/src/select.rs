use pneuma_data::{DesignVector, SearchSpace};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::acquisition::{acquisition_with_evaluator, AcquisitionGrid};
use crate::ensemble::{derive_seed, SurrogateEnsemble};
use crate::error::LearnError;

/// Result of a batch-acquisition search: the chosen designs, their raw
/// search-space coordinates, and the acquisition score they achieve.
#[derive(Debug, Clone, PartialEq)]
pub struct Selection {
    pub designs: Vec<DesignVector>,
    pub coords: Vec<Vec<f64>>,
    pub alpha: f64,
}

const MAX_ASCENT_ITERATIONS: usize = 80;
const MAX_BACKTRACKS: usize = 30;
/// Initial line-search step as a fraction of the widest bound range.
const INITIAL_STEP_FRACTION: f64 = 0.25;
const GRADIENT_NORM_FLOOR: f64 = 1e-12;

/// Picks the next `q` designs to fabricate by maximizing the batch
/// acquisition score with seeded multi-start projected gradient ascent:
/// each start draws a uniform batch inside the bounds, repairs it to
/// feasibility, and climbs a finite-difference gradient with a
/// backtracking line search, re-projecting after every step. Starts run
/// in parallel with per-start seeds derived from the master seed, so the
/// result is deterministic. Errors if no start can be repaired to a
/// feasible batch.
pub fn select_next<S: SearchSpace + ?Sized>(
    ensemble: &SurrogateEnsemble,
    q: usize,
    space: &S,
    grid: &AcquisitionGrid,
    starts: usize,
    seed: u64,
) -> Result<Selection, LearnError> {
    if q < 1 {
        return Err(LearnError::InvalidArgument {
            name: "q",
            detail: "batch size must be at least 1".into(),
        });
    }
    if starts < 1 {
        return Err(LearnError::InvalidArgument {
            name: "starts",
            detail: "need at least one start".into(),
        });
    }
    let dim = space.dim();
    let lower = space.lower().to_vec();
    let upper = space.upper().to_vec();
    let widest_range = lower
        .iter()
        .zip(&upper)
        .map(|(lo, hi)| hi - lo)
        .fold(0.0_f64, f64::max);
    let initial_step = (INITIAL_STEP_FRACTION * widest_range).max(1e-6);

    let outcomes: Vec<Option<(f64, Vec<f64>)>> = (0..starts)
        .into_par_iter()
        .map(|start| {
            let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, start as u64));
            let mut x = vec![0.0; q * dim];
            for block in x.chunks_mut(dim) {
                for (i, v) in block.iter_mut().enumerate() {
                    *v = if upper[i] > lower[i] {
                        rng.random_range(lower[i]..upper[i])
                    } else {
                        lower[i]
                    };
                }
                space.project(block);
                if !space.is_feasible(block) {
                    return None;
                }
            }
            let mut evaluator = ensemble.evaluator();
            let mut designs = vec![DesignVector::ringless(1.0, 1.0); q];
            let mut alpha_of = |x: &[f64], designs: &mut Vec<DesignVector>| {
                for (d, block) in designs.iter_mut().zip(x.chunks(dim)) {
                    *d = space.design(block);
                }
                acquisition_with_evaluator(&mut evaluator, designs, grid)
            };
            let mut best = alpha_of(&x, &mut designs);
            let mut step = initial_step;
            let mut gradient = vec![0.0; q * dim];
            for _ in 0..MAX_ASCENT_ITERATIONS {
                // Central-difference gradient of the score in the raw
                // search coordinates (the design map may be arbitrary, so
                // no analytic path exists through it).
                for i in 0..x.len() {
                    let h = 1e-5 * (1.0 + x[i].abs());
                    let saved = x[i];
                    x[i] = saved + h;
                    let plus = alpha_of(&x, &mut designs);
                    x[i] = saved - h;
                    let minus = alpha_of(&x, &mut designs);
                    x[i] = saved;
                    gradient[i] = (plus - minus) / (2.0 * h);
                }
                let norm = gradient.iter().map(|g| g * g).sum::<f64>().sqrt();
                if norm < GRADIENT_NORM_FLOOR {
                    break;
                }
                let mut improved = false;
                let mut trial_step = step;
                for _ in 0..MAX_BACKTRACKS {
                    let mut candidate = x.clone();
                    for (c, g) in candidate.iter_mut().zip(&gradient) {
                        *c += trial_step * g / norm;
                    }
                    for block in candidate.chunks_mut(dim) {
                        space.project(block);
                    }
                    let alpha = alpha_of(&candidate, &mut designs);
                    if alpha > best {
                        x = candidate;
                        best = alpha;
                        // Let the step grow again after a success.
                        step = (trial_step * 2.0).min(initial_step);
                        improved = true;
                        break;
                    }
                    trial_step *= 0.5;
                }
                if !improved {
                    break;
                }
            }
            Some((best, x))
        })
        .collect();

    let mut winner: Option<(f64, &Vec<f64>)> = None;
    for outcome in outcomes.iter().flatten() {
        let better = match &winner {
            None => true,
            Some((best_alpha, _)) => outcome.0 > *best_alpha,
        };
        if better {
            winner = Some((outcome.0, &outcome.1));
        }
    }
    let Some((alpha, x)) = winner else {
        return Err(LearnError::Infeasible {
            detail: format!(
                "none of {starts} starts could be repaired to a feasible batch; the bounds \
                 admit no design satisfying the space's constraints"
            ),
        });
    };
    let coords: Vec<Vec<f64>> = x.chunks(dim).map(<[f64]>::to_vec).collect();
    let designs: Vec<DesignVector> = coords.iter().map(|c| space.design(c)).collect();
    Ok(Selection {
        designs,
        coords,
        alpha,
    })
}
