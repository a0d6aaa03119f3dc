use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::design_vector::DesignVector;
use crate::error::DataError;

/// A bounded, possibly constrained design search space.
///
/// A space maps points `x` of a fixed-dimension box to [`DesignVector`]s and
/// knows how to repair an arbitrary point to feasibility. `project` must be
/// deterministic and idempotent; `is_feasible` holds exactly for its fixed
/// points (up to roundoff).
pub trait SearchSpace: Sync {
    /// Per-coordinate lower bounds.
    fn lower(&self) -> &[f64];
    /// Per-coordinate upper bounds (elementwise ≥ `lower`).
    fn upper(&self) -> &[f64];
    /// Repairs `x` in place to the nearest representable feasible point:
    /// clamp into the box, then fix any structural constraints.
    fn project(&self, x: &mut [f64]);
    /// Interprets a point as a membrane design.
    fn design(&self, x: &[f64]) -> DesignVector;

    /// Search dimension.
    fn dim(&self) -> usize {
        self.lower().len()
    }

    /// Whether `x` satisfies the space's constraints (up to roundoff).
    ///
    /// The default checks that `x` is a fixed point of `project`. Spaces
    /// whose repair can stall against the box bounds (leaving a fixed point
    /// that still violates a structural constraint) must override this with
    /// the direct constraint check.
    fn is_feasible(&self, x: &[f64]) -> bool {
        let mut y = x.to_vec();
        self.project(&mut y);
        x.iter()
            .zip(&y)
            .all(|(a, b)| (a - b).abs() <= 1e-9 * (1.0 + a.abs().max(b.abs())))
    }
}

/// The standard six-parameter membrane search space:
/// `[contact_radius, thickness, inner_ring_radius, inner_ring_width,
/// outer_ring_radius, outer_ring_width]`, all in millimeters, with both
/// rings present.
///
/// Besides the box bounds, feasibility requires the first ring slot to sit
/// inside the second with at least `min_ring_separation_mm` of bare
/// membrane between their facing edges (rings cast too close merge during
/// fabrication). `project` repairs violations by moving the inner ring
/// inward, which keeps the repair deterministic and idempotent.
#[derive(Debug, Clone, PartialEq)]
pub struct MembraneSpace {
    lower: [f64; 6],
    upper: [f64; 6],
    min_ring_separation_mm: f64,
}

impl MembraneSpace {
    /// Minimum bare-membrane gap between ring edges [mm].
    pub const DEFAULT_MIN_RING_SEPARATION_MM: f64 = 10.0;

    /// A space from box bounds, using the default ring separation.
    pub fn new(lower: [f64; 6], upper: [f64; 6]) -> Result<Self, DataError> {
        Self::with_min_separation(lower, upper, Self::DEFAULT_MIN_RING_SEPARATION_MM)
    }

    /// A space with an explicit minimum ring-edge separation.
    pub fn with_min_separation(
        lower: [f64; 6],
        upper: [f64; 6],
        min_ring_separation_mm: f64,
    ) -> Result<Self, DataError> {
        for i in 0..6 {
            if !(lower[i].is_finite() && upper[i].is_finite() && lower[i] <= upper[i]) {
                return Err(DataError::InvalidArgument {
                    name: "bounds",
                    detail: format!(
                        "coordinate {i}: need finite lower <= upper, got [{}, {}]",
                        lower[i], upper[i]
                    ),
                });
            }
        }
        if !(min_ring_separation_mm.is_finite() && min_ring_separation_mm >= 0.0) {
            return Err(DataError::InvalidArgument {
                name: "min_ring_separation_mm",
                detail: format!("must be finite and nonnegative, got {min_ring_separation_mm}"),
            });
        }
        Ok(MembraneSpace {
            lower,
            upper,
            min_ring_separation_mm,
        })
    }

    pub fn min_ring_separation_mm(&self) -> f64 {
        self.min_ring_separation_mm
    }

    /// Edge-to-edge gap between the two rings of a point (positive when the
    /// inner ring's outer edge sits inside the outer ring's inner edge).
    pub fn ring_gap_mm(x: &[f64]) -> f64 {
        (x[4] - 0.5 * x[5]) - (x[2] + 0.5 * x[3])
    }
}

impl SearchSpace for MembraneSpace {
    fn lower(&self) -> &[f64] {
        &self.lower
    }

    fn upper(&self) -> &[f64] {
        &self.upper
    }

    fn project(&self, x: &mut [f64]) {
        for i in 0..6 {
            x[i] = x[i].clamp(self.lower[i], self.upper[i]);
        }
        // Shift the inner ring inward until its outer edge clears the outer
        // ring's inner edge by the required gap; the box clamp wins if the
        // two conflict (the point is then infeasible and callers can tell
        // via `is_feasible`).
        let max_inner_radius = x[4] - 0.5 * x[5] - self.min_ring_separation_mm - 0.5 * x[3];
        x[2] = x[2].min(max_inner_radius).clamp(self.lower[2], self.upper[2]);
    }

    fn design(&self, x: &[f64]) -> DesignVector {
        DesignVector::from_coords(&[x[0], x[1], x[2], x[3], x[4], x[5]])
    }

    fn is_feasible(&self, x: &[f64]) -> bool {
        // Direct check: the projection can stall at its box bounds with the
        // ring-separation constraint still violated, so a fixed-point test
        // is not enough here.
        x.len() == 6
            && (0..6).all(|i| {
                let tol = 1e-9 * (1.0 + x[i].abs());
                x[i] >= self.lower[i] - tol && x[i] <= self.upper[i] + tol
            })
            && Self::ring_gap_mm(x) >= self.min_ring_separation_mm - 1e-9
    }
}

/// Draws `n` points by Latin-hypercube sampling of the box `[lower, upper]`:
/// each coordinate's range is split into `n` equal strata, each stratum is
/// hit exactly once, and strata are paired across coordinates by independent
/// seeded permutations. Deterministic given `seed`.
pub fn latin_hypercube(lower: &[f64], upper: &[f64], n: usize, seed: u64) -> Vec<Vec<f64>> {
    assert_eq!(
        lower.len(),
        upper.len(),
        "bound arrays must have equal length"
    );
    let dim = lower.len();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points = vec![vec![0.0; dim]; n];
    let mut strata: Vec<usize> = (0..n).collect();
    for d in 0..dim {
        // Fisher-Yates shuffle of the stratum assignment for this coordinate.
        for i in (1..n).rev() {
            let j = rng.random_range(0..=i);
            strata.swap(i, j);
        }
        for (point, &stratum) in points.iter_mut().zip(strata.iter()) {
            let u: f64 = rng.random();
            let t = (stratum as f64 + u) / n as f64;
            point[d] = lower[d] + (upper[d] - lower[d]) * t;
        }
    }
    points
}

/// Latin-hypercube sample of a constrained space: box sampling followed by
/// feasibility projection of every point. Deterministic given `seed`.
pub fn lhs_designs<S: SearchSpace + ?Sized>(
    space: &S,
    n: usize,
    seed: u64,
) -> Vec<(Vec<f64>, DesignVector)> {
    latin_hypercube(space.lower(), space.upper(), n, seed)
        .into_iter()
        .map(|mut x| {
            space.project(&mut x);
            let design = space.design(&x);
            (x, design)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    // Bounds chosen so the inward-shift repair always has room: even the
    // smallest outer-ring radius with both rings at full width leaves the
    // inner ring a reachable home (52 - 4 - 10 - 4 = 34 >= 30).
    fn wide_space() -> MembraneSpace {
        MembraneSpace::new(
            [15.0, 1.0, 30.0, 2.0, 52.0, 2.0],
            [40.0, 4.0, 55.0, 8.0, 65.0, 8.0],
        )
        .unwrap()
    }

    #[test]
    fn projection_fixes_ring_overlap_by_moving_the_inner_ring_inward() {
        let space = wide_space();
        let mut x = [25.0, 2.0, 54.0, 6.0, 53.0, 4.0];
        space.project(&mut x);
        assert!(space.is_feasible(&x), "projected point stays infeasible: {x:?}");
        assert!(MembraneSpace::ring_gap_mm(&x) >= 10.0 - 1e-12);
        // Only the inner-ring radius moved.
        assert_eq!(&x[..2], &[25.0, 2.0]);
        assert_eq!(&x[3..], &[6.0, 53.0, 4.0]);
    }

    #[test]
    fn projection_is_idempotent() {
        let space = wide_space();
        let mut x = [100.0, -3.0, 60.0, 12.0, 44.0, 11.0];
        space.project(&mut x);
        let once = x;
        space.project(&mut x);
        assert_eq!(x, once);
    }

    #[test]
    fn feasible_points_are_fixed_points() {
        let space = wide_space();
        let x = [25.0, 2.0, 35.0, 4.0, 55.0, 6.0];
        assert!(MembraneSpace::ring_gap_mm(&x) >= 10.0);
        assert!(space.is_feasible(&x));
        let mut y = x;
        space.project(&mut y);
        assert_eq!(y, x);
    }

    #[test]
    fn overtight_bounds_leave_detectably_infeasible_points() {
        // The inner ring cannot retreat far enough: its lower bound keeps it
        // overlapping the outer ring.
        let space = MembraneSpace::new(
            [15.0, 1.0, 50.0, 6.0, 45.0, 4.0],
            [40.0, 4.0, 55.0, 6.0, 47.0, 4.0],
        )
        .unwrap();
        let mut x = [25.0, 2.0, 52.0, 6.0, 46.0, 4.0];
        space.project(&mut x);
        assert!(!space.is_feasible(&x));
    }

    #[test]
    fn latin_hypercube_hits_every_stratum_once_per_coordinate() {
        let lower = [0.0, -5.0, 10.0];
        let upper = [1.0, 5.0, 30.0];
        let n = 32;
        let points = latin_hypercube(&lower, &upper, n, 42);
        assert_eq!(points.len(), n);
        for d in 0..3 {
            let mut strata: Vec<usize> = points
                .iter()
                .map(|p| {
                    let t = (p[d] - lower[d]) / (upper[d] - lower[d]);
                    ((t * n as f64).floor() as usize).min(n - 1)
                })
                .collect();
            strata.sort_unstable();
            let expected: Vec<usize> = (0..n).collect();
            assert_eq!(strata, expected, "coordinate {d} misses strata");
        }
    }

    #[test]
    fn latin_hypercube_is_deterministic_and_seed_sensitive() {
        let lower = [0.0; 4];
        let upper = [1.0; 4];
        let a = latin_hypercube(&lower, &upper, 16, 7);
        let b = latin_hypercube(&lower, &upper, 16, 7);
        let c = latin_hypercube(&lower, &upper, 16, 8);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }

    #[test]
    fn collapsed_bounds_sample_the_single_point() {
        let points = latin_hypercube(&[2.5, 7.0], &[2.5, 7.0], 5, 0);
        for p in points {
            assert_eq!(p, vec![2.5, 7.0]);
        }
    }

    #[test]
    fn lhs_designs_are_feasible_membranes() {
        let space = wide_space();
        for (x, design) in lhs_designs(&space, 64, 3) {
            assert!(space.is_feasible(&x));
            design.validate().unwrap();
            assert_eq!(design.ring_count(), 2);
        }
    }

    #[test]
    fn reversed_bounds_are_rejected() {
        let err = MembraneSpace::new([0.0; 6], [-1.0, 1.0, 1.0, 1.0, 1.0, 1.0]);
        assert!(matches!(err, Err(DataError::InvalidArgument { .. })));
    }
}
