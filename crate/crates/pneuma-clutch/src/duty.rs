use crate::ClutchError;

/// Default calibration table shipped with the crate (digitized bench data;
/// interior knots approximate, terminal knots exact).
const DEFAULT_TABLE: &str = include_str!("../data/pwm_zeta.csv");

/// Monotone piecewise-linear map from PWM duty cycle to the normalized
/// clutch-force fraction ζ.
///
/// Invariants, enforced on construction: duties strictly increasing,
/// terminal knots exactly `(0, 0)` and `(1, 1)`, ζ nondecreasing.
#[derive(Debug, Clone, PartialEq)]
pub struct DutyCalibration {
    knots: Vec<(f64, f64)>,
}

impl DutyCalibration {
    /// Build a calibration from `(duty, zeta)` knots.
    pub fn from_knots(knots: Vec<(f64, f64)>) -> Result<Self, ClutchError> {
        let bad = |detail: String| ClutchError::BadCalibration { detail };
        if knots.len() < 2 {
            return Err(bad(format!("need at least 2 knots, got {}", knots.len())));
        }
        for &(d, z) in &knots {
            if !d.is_finite() || !z.is_finite() {
                return Err(bad(format!("non-finite knot ({d}, {z})")));
            }
        }
        let first = knots[0];
        let last = knots[knots.len() - 1];
        if first != (0.0, 0.0) {
            return Err(bad(format!("first knot must be (0, 0), got {first:?}")));
        }
        if last != (1.0, 1.0) {
            return Err(bad(format!("last knot must be (1, 1), got {last:?}")));
        }
        for w in knots.windows(2) {
            if w[1].0 <= w[0].0 {
                return Err(bad(format!(
                    "duties must be strictly increasing: {} then {}",
                    w[0].0, w[1].0
                )));
            }
            if w[1].1 < w[0].1 {
                return Err(bad(format!(
                    "zeta must be nondecreasing: {} then {}",
                    w[0].1, w[1].1
                )));
            }
        }
        Ok(Self { knots })
    }

    /// Parse a `duty,zeta` CSV (comment lines start with `#`; a header row
    /// is skipped).
    pub fn from_csv_str(text: &str) -> Result<Self, ClutchError> {
        let mut knots = Vec::new();
        for line in text.lines() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let mut parts = line.split(',').map(str::trim);
            let (a, b) = (parts.next(), parts.next());
            match (a.map(str::parse::<f64>), b.map(str::parse::<f64>)) {
                (Some(Ok(d)), Some(Ok(z))) => knots.push((d, z)),
                // Tolerate a single textual header row.
                _ if knots.is_empty() => continue,
                _ => {
                    return Err(ClutchError::BadCalibration {
                        detail: format!("unparsable calibration line: {line:?}"),
                    })
                }
            }
        }
        Self::from_knots(knots)
    }

    /// The knots, sorted by duty.
    pub fn knots(&self) -> &[(f64, f64)] {
        &self.knots
    }
}

impl Default for DutyCalibration {
    /// The digitized bench table shipped in the crate's data directory.
    fn default() -> Self {
        Self::from_csv_str(DEFAULT_TABLE).expect("shipped calibration table is valid")
    }
}

/// Interpolate the clutch-force fraction ζ for a PWM duty cycle in [0, 1].
/// Exact at every calibration knot.
pub fn zeta_from_duty(duty: f64, cal: &DutyCalibration) -> Result<f64, ClutchError> {
    if !(0.0..=1.0).contains(&duty) || !duty.is_finite() {
        return Err(ClutchError::DutyOutOfRange { value: duty });
    }
    let knots = &cal.knots;
    let idx = knots.partition_point(|&(d, _)| d < duty);
    if idx < knots.len() && knots[idx].0 == duty {
        return Ok(knots[idx].1);
    }
    // duty lies strictly between knots[idx-1] and knots[idx]; the terminal
    // knots at 0 and 1 guarantee both exist.
    let (d0, z0) = knots[idx - 1];
    let (d1, z1) = knots[idx];
    Ok(z0 + (z1 - z0) * (duty - d0) / (d1 - d0))
}
