use serde::{Deserialize, Serialize};

use pneuma_data::{DesignVector, LiftDataset};

use crate::error::SurrogateError;

/// An affine feature map `x ↦ (x − mean) / std`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Affine {
    pub mean: f64,
    pub std: f64,
}

impl Affine {
    pub const IDENTITY: Affine = Affine {
        mean: 0.0,
        std: 1.0,
    };

    pub fn apply(&self, x: f64) -> f64 {
        (x - self.mean) / self.std
    }
}

/// Per-feature standardization constants fitted on the training data and
/// stored with the model, plus the training ranges downstream consumers
/// need (maximum seen pressure and height).
///
/// Ring radius and width statistics are pooled over both ring slots, so
/// the two slots stay exchangeable after normalization. Pressure is never
/// shifted or scaled: the polynomial head acts on raw pressure so that
/// positive coefficients keep force nondecreasing for every nonnegative
/// pressure.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Normalization {
    pub ring_radius: Affine,
    pub ring_width: Affine,
    pub thickness: Affine,
    pub contact_radius: Affine,
    pub height: Affine,
    /// Largest pressure in the training data [kPa].
    pub pressure_max: f64,
    /// Largest set height in the training data [mm].
    pub height_max: f64,
}

impl Normalization {
    /// No-op normalization (all features pass through unchanged).
    pub fn identity() -> Self {
        Normalization {
            ring_radius: Affine::IDENTITY,
            ring_width: Affine::IDENTITY,
            thickness: Affine::IDENTITY,
            contact_radius: Affine::IDENTITY,
            height: Affine::IDENTITY,
            pressure_max: 10.0,
            height_max: 50.0,
        }
    }

    pub fn validate(&self) -> Result<(), SurrogateError> {
        let checks = [
            ("ring_radius", self.ring_radius),
            ("ring_width", self.ring_width),
            ("thickness", self.thickness),
            ("contact_radius", self.contact_radius),
            ("height", self.height),
        ];
        for (name, affine) in checks {
            if !(affine.mean.is_finite() && affine.std.is_finite() && affine.std > 0.0) {
                return Err(SurrogateError::Format {
                    detail: format!(
                        "normalization {name} must have finite mean and positive std, got {affine:?}"
                    ),
                });
            }
        }
        if !(self.pressure_max.is_finite() && self.height_max.is_finite()) {
            return Err(SurrogateError::Format {
                detail: "normalization ranges must be finite".to_string(),
            });
        }
        Ok(())
    }
}

/// One training row: which membrane, at what set height, what pressure,
/// what measured force.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Row {
    pub design_index: usize,
    pub height_mm: f64,
    pub pressure_kpa: f64,
    pub force_n: f64,
}

/// A flattened training set: one design per membrane plus the force
/// samples referencing them. Rows keep their membrane identity so the
/// trainer can weight each (membrane, height) test equally and the k-fold
/// splitter can hold out whole membranes.
#[derive(Debug, Clone, Default)]
pub struct TrainingData {
    membrane_ids: Vec<String>,
    designs: Vec<DesignVector>,
    rows: Vec<Row>,
}

impl TrainingData {
    pub fn new() -> Self {
        Self::default()
    }

    /// Flattens a (typically already trimmed) dataset: every sample of
    /// every trial becomes a row at the trial's set height. Membranes
    /// without samples are dropped — they carry no training signal.
    pub fn from_dataset(dataset: &LiftDataset) -> Result<Self, SurrogateError> {
        let mut data = TrainingData::new();
        for (id, membrane) in &dataset.membranes {
            let rows: Vec<(f64, f64, f64)> = membrane
                .trials
                .iter()
                .flat_map(|trial| {
                    trial
                        .samples
                        .iter()
                        .map(move |s| (trial.height_mm, s.pressure_kpa, s.force_n))
                })
                .collect();
            if rows.is_empty() {
                continue;
            }
            data.push_membrane(id, membrane.design.clone(), &rows)?;
        }
        Ok(data)
    }

    /// Adds one membrane and its `(height_mm, pressure_kpa, force_n)` rows.
    pub fn push_membrane(
        &mut self,
        id: &str,
        design: DesignVector,
        rows: &[(f64, f64, f64)],
    ) -> Result<(), SurrogateError> {
        if self.membrane_ids.iter().any(|existing| existing == id) {
            return Err(SurrogateError::InvalidData {
                detail: format!("membrane id `{id}` added twice"),
            });
        }
        design.validate().map_err(|e| SurrogateError::InvalidData {
            detail: format!("membrane `{id}`: {e}"),
        })?;
        let design_index = self.designs.len();
        for &(height_mm, pressure_kpa, force_n) in rows {
            for (name, value) in [
                ("height_mm", height_mm),
                ("pressure_kpa", pressure_kpa),
                ("force_n", force_n),
            ] {
                if !value.is_finite() {
                    return Err(SurrogateError::InvalidData {
                        detail: format!("membrane `{id}`: non-finite {name} ({value})"),
                    });
                }
            }
            self.rows.push(Row {
                design_index,
                height_mm,
                pressure_kpa,
                force_n,
            });
        }
        self.membrane_ids.push(id.to_string());
        self.designs.push(design);
        Ok(())
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    pub fn membrane_count(&self) -> usize {
        self.designs.len()
    }

    pub fn row_count(&self) -> usize {
        self.rows.len()
    }

    pub fn membrane_ids(&self) -> &[String] {
        &self.membrane_ids
    }

    pub fn designs(&self) -> &[DesignVector] {
        &self.designs
    }

    pub fn rows(&self) -> &[Row] {
        &self.rows
    }

    /// The force range `max − min` over all rows (0 for an empty set).
    pub fn force_range(&self) -> f64 {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for row in &self.rows {
            lo = lo.min(row.force_n);
            hi = hi.max(row.force_n);
        }
        if lo > hi {
            0.0
        } else {
            hi - lo
        }
    }

    /// The subset holding exactly the membranes selected by `keep`.
    pub(crate) fn subset(&self, keep: &[bool]) -> TrainingData {
        debug_assert_eq!(keep.len(), self.designs.len());
        let mut data = TrainingData::new();
        let mut new_index = vec![usize::MAX; self.designs.len()];
        for (i, &kept) in keep.iter().enumerate() {
            if kept {
                new_index[i] = data.designs.len();
                data.membrane_ids.push(self.membrane_ids[i].clone());
                data.designs.push(self.designs[i].clone());
            }
        }
        for row in &self.rows {
            if keep[row.design_index] {
                data.rows.push(Row {
                    design_index: new_index[row.design_index],
                    ..*row
                });
            }
        }
        data
    }

    /// Fits standardization constants and training ranges on this data.
    pub fn fit_normalization(&self) -> Normalization {
        let mut ring_radius = Vec::new();
        let mut ring_width = Vec::new();
        let mut thickness = Vec::new();
        let mut contact = Vec::new();
        let mut height = Vec::new();
        let mut pressure_max: f64 = 0.0;
        let mut height_max: f64 = 0.0;
        for row in &self.rows {
            let design = &self.designs[row.design_index];
            for slot in design.ring_slots().into_iter().flatten() {
                ring_radius.push(slot[0]);
                ring_width.push(slot[1]);
            }
            thickness.push(design.thickness_mm);
            contact.push(design.contact_radius_mm);
            height.push(row.height_mm);
            pressure_max = pressure_max.max(row.pressure_kpa);
            height_max = height_max.max(row.height_mm);
        }
        Normalization {
            ring_radius: affine_from(&ring_radius),
            ring_width: affine_from(&ring_width),
            thickness: affine_from(&thickness),
            contact_radius: affine_from(&contact),
            height: affine_from(&height),
            pressure_max,
            height_max,
        }
    }
}

fn affine_from(values: &[f64]) -> Affine {
    if values.is_empty() {
        return Affine::IDENTITY;
    }
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
    let std = var.sqrt();
    Affine {
        mean,
        std: if std > 1e-12 { std } else { 1.0 },
    }
}
