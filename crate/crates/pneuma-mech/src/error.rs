use thiserror::Error;

/// Errors raised by mechanism solvers and scores.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MechError {
    /// A gear ended up with too few teeth to be cuttable.
    #[error("gear '{name}' needs at least {min} teeth, got {z}")]
    TeethTooFew { name: &'static str, z: i64, min: i64 },

    /// A module (or other strictly positive gear length) was not positive.
    #[error("gear parameter '{name}' must be > 0, got {value}")]
    NonPositiveGearParam { name: &'static str, value: f64 },

    /// The requested planet offset forces a profile shift outside |X| <= 1.
    #[error(
        "planet stage {stage}: offset {offset} gives profile shift {xp:.4}, \
         outside the valid |X| <= 1 band"
    )]
    InvalidCombination { stage: u8, offset: i64, xp: f64 },

    /// The internal ratio I2 equals 1 exactly, so the reduction ratio is zero
    /// and back-drive efficiency is undefined.
    #[error("degenerate gear set: I2 = 1 exactly (zero net ratio, no defined back-drive)")]
    DegenerateRatio,

    /// The back-drivability score needs at least two torque trials.
    #[error("back-drivability score needs >= 2 torque trials, got {n}")]
    TooFewTrials { n: usize },

    /// Torque trials are fractions of stall torque and must lie in (0, 1].
    #[error("torque trial fraction {value} outside (0, 1]")]
    TrialOutOfRange { value: f64 },

    /// A valve parameter that must be strictly positive was not.
    #[error("valve parameter '{name}' must be > 0, got {value}")]
    NonPositiveValveParam { name: &'static str, value: f64 },
}
