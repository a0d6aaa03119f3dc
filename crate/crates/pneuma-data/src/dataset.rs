use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::design_vector::DesignVector;
use crate::error::{DataError, Violation};

/// One logged instant of a lift test.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sample {
    /// Seconds since the start of the trial.
    pub time_s: f64,
    /// Chamber pressure [kPa].
    pub pressure_kpa: f64,
    /// Force on the contact plate [N].
    pub force_n: f64,
    /// Plate height measured on the left side [mm].
    pub height_left_mm: f64,
    /// Plate height measured on the right side [mm].
    pub height_right_mm: f64,
    /// Supply flow-rate channel, preserved verbatim from the rig
    /// (no model consumes it).
    pub flow: f64,
    /// Whether the rig reports the plate in contact with the membrane.
    pub rig_contact: bool,
}

/// Provenance notes attached to a trial. All fields optional.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct TrialMetadata {
    pub material: Option<String>,
    pub test_date: Option<String>,
    pub curing_rack: Option<String>,
}

/// One inflation/deflation run at a fixed set height.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    /// Contact-plate set height [mm].
    pub height_mm: f64,
    /// Which repetition at this height this is (1..=3).
    pub trial_index: u8,
    /// True if the membrane fractured during this trial.
    #[serde(default)]
    pub fracture: bool,
    #[serde(default)]
    pub metadata: TrialMetadata,
    /// Time-ordered log of the trial.
    pub samples: Vec<Sample>,
}

/// A membrane's design plus every trial recorded on it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MembraneRecord {
    pub design: DesignVector,
    pub trials: Vec<Trial>,
}

/// The neutral on-disk dataset: membrane id → design + trials.
///
/// The map is ordered so serialization, iteration, and training order are
/// deterministic.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct LiftDataset {
    pub membranes: BTreeMap<String, MembraneRecord>,
}

impl LiftDataset {
    /// An empty (but valid) dataset.
    pub fn new() -> Self {
        Self::default()
    }

    /// Total number of samples across every trial.
    pub fn sample_count(&self) -> usize {
        self.membranes
            .values()
            .flat_map(|m| &m.trials)
            .map(|t| t.samples.len())
            .sum()
    }

    /// Checks every schema invariant, reporting all violations with their
    /// JSON paths: positive finite design values, trial heights finite and
    /// nonnegative, trial indices in 1..=3 and unique per height, sample
    /// channels finite, and sample times nondecreasing.
    pub fn validate(&self) -> Result<(), DataError> {
        let mut violations = Vec::new();
        for (id, membrane) in &self.membranes {
            let base = format!("membranes.{id}");
            membrane
                .design
                .collect_violations(&format!("{base}.design"), &mut violations);
            let mut seen: BTreeSet<(u64, u8)> = BTreeSet::new();
            for (t, trial) in membrane.trials.iter().enumerate() {
                let tpath = format!("{base}.trials[{t}]");
                if !(trial.height_mm.is_finite() && trial.height_mm >= 0.0) {
                    violations.push(Violation {
                        path: format!("{tpath}.height_mm"),
                        detail: format!(
                            "must be a finite nonnegative height in mm, got {}",
                            trial.height_mm
                        ),
                    });
                }
                if !(1..=3).contains(&trial.trial_index) {
                    violations.push(Violation {
                        path: format!("{tpath}.trial_index"),
                        detail: format!("must be 1, 2, or 3, got {}", trial.trial_index),
                    });
                } else if trial.height_mm.is_finite()
                    && !seen.insert((trial.height_mm.to_bits(), trial.trial_index))
                {
                    violations.push(Violation {
                        path: format!("{tpath}.trial_index"),
                        detail: format!(
                            "duplicate trial index {} at height {} mm",
                            trial.trial_index, trial.height_mm
                        ),
                    });
                }
                let mut last_time = f64::NEG_INFINITY;
                for (s, sample) in trial.samples.iter().enumerate() {
                    let spath = format!("{tpath}.samples[{s}]");
                    for (field, value) in [
                        ("time_s", sample.time_s),
                        ("pressure_kpa", sample.pressure_kpa),
                        ("force_n", sample.force_n),
                        ("height_left_mm", sample.height_left_mm),
                        ("height_right_mm", sample.height_right_mm),
                        ("flow", sample.flow),
                    ] {
                        if !value.is_finite() {
                            violations.push(Violation {
                                path: format!("{spath}.{field}"),
                                detail: format!("must be finite, got {value}"),
                            });
                        }
                    }
                    if sample.time_s.is_finite() && sample.time_s < last_time {
                        violations.push(Violation {
                            path: format!("{spath}.time_s"),
                            detail: format!(
                                "samples must be time-ordered: {} s after {} s",
                                sample.time_s, last_time
                            ),
                        });
                    }
                    if sample.time_s.is_finite() {
                        last_time = sample.time_s;
                    }
                }
            }
        }
        if violations.is_empty() {
            Ok(())
        } else {
            Err(DataError::schema(violations))
        }
    }
}

/// Parses and validates a dataset from JSON text. Returns the dataset plus
/// one warning per unknown field encountered (unknown fields are ignored,
/// never fatal).
pub fn dataset_from_json_str(text: &str) -> Result<(LiftDataset, Vec<String>), DataError> {
    let value: Value = serde_json::from_str(text).map_err(|e| DataError::Parse {
        detail: e.to_string(),
    })?;
    let warnings = unknown_field_warnings(&value);
    let dataset: LiftDataset =
        serde_path_to_error::deserialize(value).map_err(|e| DataError::Schema {
            violations: vec![Violation {
                path: e.path().to_string(),
                detail: e.inner().to_string(),
            }],
        })?;
    dataset.validate()?;
    Ok((dataset, warnings))
}

/// Reads, parses, and validates a dataset file, returning any
/// unknown-field warnings alongside the dataset.
pub fn load_dataset_with_warnings(
    path: impl AsRef<Path>,
) -> Result<(LiftDataset, Vec<String>), DataError> {
    let text = std::fs::read_to_string(path)?;
    dataset_from_json_str(&text)
}

/// Reads, parses, and validates a dataset file. Unknown-field warnings are
/// printed to stderr; use [`load_dataset_with_warnings`] to capture them.
pub fn load_dataset(path: impl AsRef<Path>) -> Result<LiftDataset, DataError> {
    let (dataset, warnings) = load_dataset_with_warnings(path)?;
    for w in &warnings {
        eprintln!("warning: {w}");
    }
    Ok(dataset)
}

/// Serializes a dataset as pretty-printed JSON (deterministic: map keys are
/// ordered, struct fields keep declaration order).
pub fn dataset_to_json_string(dataset: &LiftDataset) -> String {
    let mut text = serde_json::to_string_pretty(dataset)
        .expect("dataset serialization cannot fail");
    text.push('\n');
    text
}

/// Writes a dataset to disk as pretty-printed JSON.
pub fn save_dataset(path: impl AsRef<Path>, dataset: &LiftDataset) -> Result<(), DataError> {
    std::fs::write(path, dataset_to_json_string(dataset))?;
    Ok(())
}

/// Expected object keys at each level of the dataset document, used to
/// flag (but not reject) fields this version does not understand.
const DATASET_KEYS: &[&str] = &["membranes"];
const MEMBRANE_KEYS: &[&str] = &["design", "trials"];
const DESIGN_KEYS: &[&str] = &["contact_radius_mm", "thickness_mm", "ring1", "ring2"];
const RING_KEYS: &[&str] = &["radius_mm", "width_mm"];
const TRIAL_KEYS: &[&str] = &["height_mm", "trial_index", "fracture", "metadata", "samples"];
const METADATA_KEYS: &[&str] = &["material", "test_date", "curing_rack"];
const SAMPLE_KEYS: &[&str] = &[
    "time_s",
    "pressure_kpa",
    "force_n",
    "height_left_mm",
    "height_right_mm",
    "flow",
    "rig_contact",
];

fn unknown_field_warnings(root: &Value) -> Vec<String> {
    let mut warnings = Vec::new();
    check_keys(root, "", DATASET_KEYS, &mut warnings);
    let Some(membranes) = root.get("membranes").and_then(Value::as_object) else {
        return warnings;
    };
    for (id, membrane) in membranes {
        let base = format!("membranes.{id}");
        check_keys(membrane, &base, MEMBRANE_KEYS, &mut warnings);
        if let Some(design) = membrane.get("design") {
            let dpath = format!("{base}.design");
            check_keys(design, &dpath, DESIGN_KEYS, &mut warnings);
            for slot in ["ring1", "ring2"] {
                if let Some(ring) = design.get(slot) {
                    check_keys(ring, &format!("{dpath}.{slot}"), RING_KEYS, &mut warnings);
                }
            }
        }
        let Some(trials) = membrane.get("trials").and_then(Value::as_array) else {
            continue;
        };
        for (t, trial) in trials.iter().enumerate() {
            let tpath = format!("{base}.trials[{t}]");
            check_keys(trial, &tpath, TRIAL_KEYS, &mut warnings);
            if let Some(metadata) = trial.get("metadata") {
                check_keys(
                    metadata,
                    &format!("{tpath}.metadata"),
                    METADATA_KEYS,
                    &mut warnings,
                );
            }
            let Some(samples) = trial.get("samples").and_then(Value::as_array) else {
                continue;
            };
            for (s, sample) in samples.iter().enumerate() {
                check_keys(
                    sample,
                    &format!("{tpath}.samples[{s}]"),
                    SAMPLE_KEYS,
                    &mut warnings,
                );
            }
        }
    }
    warnings
}

fn check_keys(node: &Value, path: &str, expected: &[&str], warnings: &mut Vec<String>) {
    let Some(object) = node.as_object() else {
        return; // a type mismatch here is the deserializer's error to report
    };
    for key in object.keys() {
        if !expected.contains(&key.as_str()) {
            let at = if path.is_empty() { "document root" } else { path };
            warnings.push(format!("unknown field `{key}` at {at} (ignored)"));
        }
    }
}
