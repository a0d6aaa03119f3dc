//! Active learning for membrane lift surrogates: randomized-prior
//! ensembles, a disagreement-based acquisition score, batch design
//! selection, and design-space uncertainty profiling.
//!
//! An ensemble member pairs a trainable surrogate with a frozen companion
//! network drawn from the same initialization distribution; the
//! companion's raw coefficients, scaled by a fixed factor, are added to
//! the trainable network's before the coefficient map, during training
//! and inference alike. Away from data, members keep the disagreement
//! their companions seeded; near data, training pulls them together —
//! the spread of member predictions is the epistemic uncertainty.
//!
//! The acquisition score for a candidate batch integrates that spread
//! over a fixed (height × pressure) grid: each member contributes the
//! root-sum-square deviation from the ensemble mean on whichever
//! candidate it disagrees about most. Maximizing the score with seeded
//! multi-start projected gradient ascent proposes the next designs to
//! fabricate; the mean predictive spread over a Latin-hypercube sample
//! tracks how much uncertainty remains across the whole space.

mod acquisition;
mod ensemble;
mod error;
mod profile;
mod select;
mod store;

pub use acquisition::{acquisition, acquisition_batch, AcquisitionGrid};
pub use ensemble::{
    train_ensemble, EnsembleConfig, EnsembleEvaluator, EnsembleMember, EnsemblePrediction,
    SurrogateEnsemble,
};
pub use error::LearnError;
pub use profile::{mean_std_over, uncertainty_profile};
pub use select::{select_next, Selection};
pub use store::{load_ensemble, save_ensemble};
