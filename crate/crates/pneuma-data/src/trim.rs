use serde::{Deserialize, Serialize};

use crate::dataset::LiftDataset;
use crate::error::DataError;

/// Which slice of the raw characterization data the models see.
///
/// The defaults encode the characterization protocol: the first trial at
/// each height is discarded for stress-softening break-in, the second to
/// suppress trial-to-trial scatter, so only the third trial survives; and
/// only the inflation half of each trial is used, because inflation and
/// deflation hysteresis differ by up to a couple of newtons.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TrimPolicy {
    /// The one trial index (1..=3) kept at each set height.
    pub keep_trial: u8,
    /// If true, each kept trial is cut after its pressure peak.
    pub inflation_only: bool,
}

impl Default for TrimPolicy {
    fn default() -> Self {
        TrimPolicy {
            keep_trial: 3,
            inflation_only: true,
        }
    }
}

/// Applies a [`TrimPolicy`]: drops fracture-flagged trials, keeps only the
/// policy's trial index at each height, and (if `inflation_only`) truncates
/// each surviving trial just after its global pressure maximum — the peak
/// sample itself is kept, everything later (the deflation leg) is removed.
/// Ties take the earliest peak. Membranes left with no trials keep their
/// design entry.
///
/// Each step is a pure filter whose output it maps to itself, so the whole
/// operation is idempotent.
pub fn trim_dataset(dataset: &LiftDataset, policy: &TrimPolicy) -> Result<LiftDataset, DataError> {
    if !(1..=3).contains(&policy.keep_trial) {
        return Err(DataError::InvalidArgument {
            name: "keep_trial",
            detail: format!("must be 1, 2, or 3, got {}", policy.keep_trial),
        });
    }
    let mut trimmed = dataset.clone();
    for membrane in trimmed.membranes.values_mut() {
        membrane
            .trials
            .retain(|t| !t.fracture && t.trial_index == policy.keep_trial);
        if policy.inflation_only {
            for trial in &mut membrane.trials {
                if let Some(peak) = earliest_pressure_argmax(trial) {
                    trial.samples.truncate(peak + 1);
                }
            }
        }
    }
    Ok(trimmed)
}

/// Index of the first sample attaining the trial's maximum pressure, or
/// `None` for an empty trial.
fn earliest_pressure_argmax(trial: &crate::dataset::Trial) -> Option<usize> {
    let mut best: Option<(usize, f64)> = None;
    for (i, sample) in trial.samples.iter().enumerate() {
        match best {
            Some((_, p)) if sample.pressure_kpa <= p => {}
            _ => best = Some((i, sample.pressure_kpa)),
        }
    }
    best.map(|(i, _)| i)
}
