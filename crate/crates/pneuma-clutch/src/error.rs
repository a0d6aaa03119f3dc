use pneuma_material::MaterialError;
use thiserror::Error;

/// Errors from clutch, sheath, and drop-stage models.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum ClutchError {
    /// A specification field violates its invariant.
    #[error("invalid parameter {name} = {value}")]
    InvalidParam { name: &'static str, value: f64 },

    /// Clutch-force fraction outside [0, 1].
    #[error("zeta = {value} outside [0, 1]")]
    ZetaOutOfRange { value: f64 },

    /// PWM duty cycle outside [0, 1].
    #[error("duty cycle = {value} outside [0, 1]")]
    DutyOutOfRange { value: f64 },

    /// A duty-cycle calibration table violates its invariants.
    #[error("bad duty calibration: {detail}")]
    BadCalibration { detail: String },

    /// The energy model cannot close: the request drives the sheath past
    /// lock-up (or a root is otherwise unreachable).
    #[error("model breakdown: {detail}")]
    ModelBreakdown { detail: String },

    /// Underlying constitutive-model failure (lock-up, bad stretch, ...).
    #[error(transparent)]
    Material(#[from] MaterialError),
}
