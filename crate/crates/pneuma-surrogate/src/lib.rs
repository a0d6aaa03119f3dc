//! Neural lift-force surrogates for strain-limited membrane actuators.
//!
//! A surrogate maps a membrane design (contact radius, sheet thickness,
//! up to two limiting rings) and a rig height to the coefficients of a
//! polynomial in inflation pressure; the predicted lift force is that
//! polynomial clamped at zero. The architecture bakes two physical facts
//! into the function class rather than hoping training discovers them:
//!
//! * **Pressure monotonicity.** Every pressure coefficient of order one
//!   and above is the square of a raw network output, so wherever the
//!   prediction is positive it is nondecreasing in pressure — inflating
//!   harder never predicts less force. Only the constant term may be
//!   negative, which lets the model express a membrane that has not yet
//!   reached the rig; a zeroed head yields the zero polynomial exactly.
//! * **Ring-slot symmetry.** The two ring slots are encoded by one shared
//!   linear projection and summed, and an absent ring contributes a
//!   learned missing-ring vector, so swapping the slots is bit-identical
//!   and "no ring" is represented explicitly instead of by a sentinel.
//!
//! Training is seeded, full-batch, and sequential, so a given dataset,
//! configuration, and seed reproduce the same weights bit for bit. The
//! loss balances (membrane, height) test groups equally regardless of how
//! many samples each logged. Cross-validation folds by membrane — the
//! honest question is how well the model predicts designs it never saw.
//!
//! Units follow the bench conventions: millimetres, kilopascals, newtons.

mod config;
mod error;
mod features;
mod model;
mod network;
mod serialize;
mod train;

pub use config::SurrogateConfig;
pub use error::SurrogateError;
pub use features::{Affine, Normalization, Row, TrainingData};
pub use model::{ForceGradient, ModelEvaluator, SurrogateModel};
pub use network::{encode_rings, force_from_coefficients, polynomial_coefficients, RingEncoder};
pub use serialize::{load_model, read_model, save_model, write_model};
pub use train::{
    kfold_rmse, train, train_dataset, train_with_offsets, training_loss, training_loss_gradient,
    KfoldReport, TrainedSurrogate,
};
