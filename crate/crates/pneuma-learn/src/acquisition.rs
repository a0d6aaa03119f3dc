use pneuma_data::DesignVector;
use serde::{Deserialize, Serialize};

use crate::ensemble::{EnsembleEvaluator, SurrogateEnsemble};
use crate::error::LearnError;

/// The fixed (heights × pressures) evaluation lattice the acquisition
/// score integrates member disagreement over.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcquisitionGrid {
    heights_mm: Vec<f64>,
    pressures_kpa: Vec<f64>,
}

impl AcquisitionGrid {
    /// Validates and stores the lattice: both axes nonempty, finite,
    /// nonnegative, and sorted.
    pub fn new(heights_mm: Vec<f64>, pressures_kpa: Vec<f64>) -> Result<Self, LearnError> {
        let check = |name: &'static str, axis: &[f64]| -> Result<(), LearnError> {
            if axis.is_empty() {
                return Err(LearnError::InvalidArgument {
                    name,
                    detail: "axis must be nonempty".into(),
                });
            }
            for pair in axis.windows(2) {
                if !(pair[0] <= pair[1]) {
                    return Err(LearnError::InvalidArgument {
                        name,
                        detail: format!("axis must be sorted, found {} after {}", pair[1], pair[0]),
                    });
                }
            }
            if axis.iter().any(|v| !v.is_finite() || *v < 0.0) {
                return Err(LearnError::InvalidArgument {
                    name,
                    detail: "axis values must be finite and nonnegative".into(),
                });
            }
            Ok(())
        };
        check("heights_mm", &heights_mm)?;
        check("pressures_kpa", &pressures_kpa)?;
        Ok(AcquisitionGrid {
            heights_mm,
            pressures_kpa,
        })
    }

    pub fn heights(&self) -> &[f64] {
        &self.heights_mm
    }

    pub fn pressures(&self) -> &[f64] {
        &self.pressures_kpa
    }

    /// The lattice's central point (middle element of each sorted axis) —
    /// the representative (height, pressure) used for pointwise
    /// uncertainty queries.
    pub fn center(&self) -> (f64, f64) {
        (
            self.heights_mm[(self.heights_mm.len() - 1) / 2],
            self.pressures_kpa[(self.pressures_kpa.len() - 1) / 2],
        )
    }
}

/// Acquisition score for a candidate batch of designs: for every ensemble
/// member, the root-sum-square deviation of its predictions from the
/// ensemble mean over the whole grid is computed per design; the member
/// contributes its best (largest) design, and contributions sum over
/// members. Zero exactly when every member agrees with the mean
/// everywhere on every candidate; always nonnegative; invariant to
/// design order.
pub fn acquisition_batch(
    ensemble: &SurrogateEnsemble,
    designs: &[DesignVector],
    grid: &AcquisitionGrid,
) -> Result<f64, LearnError> {
    if designs.is_empty() {
        return Err(LearnError::InvalidArgument {
            name: "designs",
            detail: "need at least one candidate design".into(),
        });
    }
    let mut evaluator = ensemble.evaluator();
    Ok(acquisition_with_evaluator(&mut evaluator, designs, grid))
}

/// The pairwise acquisition score over two candidate designs.
pub fn acquisition(
    ensemble: &SurrogateEnsemble,
    m1: &DesignVector,
    m2: &DesignVector,
    grid: &AcquisitionGrid,
) -> Result<f64, LearnError> {
    acquisition_batch(ensemble, &[m1.clone(), m2.clone()], grid)
}

/// Allocation-light acquisition core over a prepared evaluator.
pub(crate) fn acquisition_with_evaluator(
    evaluator: &mut EnsembleEvaluator<'_>,
    designs: &[DesignVector],
    grid: &AcquisitionGrid,
) -> f64 {
    let n_members = evaluator.member_count();
    // dist_sq[l * designs.len() + k]: member l's squared grid deviation on
    // design k.
    let mut dist_sq = vec![0.0; n_members * designs.len()];
    let mut sums = vec![0.0; n_members];
    for (k, design) in designs.iter().enumerate() {
        sums.fill(0.0);
        evaluator.accumulate_grid_deviation_sq(
            design,
            grid.heights(),
            grid.pressures(),
            &mut sums,
        );
        for l in 0..n_members {
            dist_sq[l * designs.len() + k] = sums[l];
        }
    }
    let mut alpha = 0.0;
    for l in 0..n_members {
        let best = dist_sq[l * designs.len()..(l + 1) * designs.len()]
            .iter()
            .fold(0.0_f64, |acc, s| acc.max(*s));
        alpha += best.sqrt();
    }
    alpha
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_rejects_empty_and_unsorted_axes() {
        assert!(AcquisitionGrid::new(vec![], vec![1.0]).is_err());
        assert!(AcquisitionGrid::new(vec![20.0], vec![]).is_err());
        assert!(AcquisitionGrid::new(vec![30.0, 20.0], vec![1.0]).is_err());
        assert!(AcquisitionGrid::new(vec![20.0], vec![2.0, 1.0]).is_err());
        assert!(AcquisitionGrid::new(vec![20.0], vec![-1.0, 1.0]).is_err());
        assert!(AcquisitionGrid::new(vec![f64::NAN], vec![1.0]).is_err());
    }

    #[test]
    fn grid_center_picks_middle_elements() {
        let grid = AcquisitionGrid::new(vec![10.0, 20.0, 30.0], vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        assert_eq!(grid.center(), (20.0, 2.0));
        let single = AcquisitionGrid::new(vec![25.0], vec![5.0]).unwrap();
        assert_eq!(single.center(), (25.0, 5.0));
    }
}
