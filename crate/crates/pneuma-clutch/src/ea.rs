use crate::ClutchError;

/// Vacuum permittivity ε₀ [F/m].
pub const VACUUM_PERMITTIVITY: f64 = 8.854_187_812_8e-12;

/// Electrode pair of an electroadhesive clutch.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClutchSpec {
    /// Sliding friction coefficient between the engaged surfaces.
    pub mu_f: f64,
    /// Relative permittivity of the dielectric layer (≥ 1).
    pub eps_r: f64,
    /// Electrode overlap area [m²].
    pub area: f64,
    /// Electrode separation [m].
    pub gap_d: f64,
    /// Applied potential difference [V].
    pub voltage: f64,
}

impl ClutchSpec {
    pub fn validate(&self) -> Result<(), ClutchError> {
        let strictly_positive = [("area", self.area), ("gap_d", self.gap_d)];
        for (name, v) in strictly_positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ClutchError::InvalidParam { name, value: v });
            }
        }
        let nonnegative = [("mu_f", self.mu_f), ("voltage", self.voltage)];
        for (name, v) in nonnegative {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(ClutchError::InvalidParam { name, value: v });
            }
        }
        if !(self.eps_r >= 1.0 && self.eps_r.is_finite()) {
            return Err(ClutchError::InvalidParam {
                name: "eps_r",
                value: self.eps_r,
            });
        }
        Ok(())
    }
}

/// Which electrostatic model to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EaModel {
    /// Uniform dielectric fully filling the gap.
    Ideal,
    /// Air-gap-dominated field between conformable electrodes.
    Airgap,
}

/// `ε₀ A (V/d)² / 2` — the εr-free parallel-plate kernel both models
/// scale. Sharing it keeps the `airgap = εr × ideal` identity exact in
/// floating point.
fn plate_force_kernel(spec: &ClutchSpec) -> f64 {
    let field = spec.voltage / spec.gap_d;
    VACUUM_PERMITTIVITY * spec.area * field * field / 2.0
}

/// Parallel-plate normal force with the dielectric filling the gap:
/// `F = ε₀ εr A V² / (2 d²)`.
pub fn ea_normal_force_ideal(spec: &ClutchSpec) -> Result<f64, ClutchError> {
    spec.validate()?;
    Ok(plate_force_kernel(spec) * spec.eps_r)
}

/// Normal force when the field is concentrated across an air gap in series
/// with the dielectric: `F = ε₀ A (εr V / d)² / 2`.
///
/// Identically `εr ×` the ideal force (exactly, by construction).
pub fn ea_normal_force_airgap(spec: &ClutchSpec) -> Result<f64, ClutchError> {
    spec.validate()?;
    Ok(plate_force_kernel(spec) * spec.eps_r * spec.eps_r)
}

/// Tangential force the clutch can sustain before slipping: the friction
/// coefficient times the normal force of the chosen model.
pub fn clutch_friction_force(spec: &ClutchSpec, model: EaModel) -> Result<f64, ClutchError> {
    let normal = match model {
        EaModel::Ideal => ea_normal_force_ideal(spec)?,
        EaModel::Airgap => ea_normal_force_airgap(spec)?,
    };
    Ok(spec.mu_f * normal)
}

/// Total tensile holding force of the sheathed clutch:
/// `F_max = F_sheath + ζ·F_clutch`, with the clutch contribution scaled by
/// the normalized activation ζ ∈ [0, 1].
pub fn combined_holding_force(sheath_f: f64, clutch_f: f64, zeta: f64) -> Result<f64, ClutchError> {
    if !(0.0..=1.0).contains(&zeta) || !zeta.is_finite() {
        return Err(ClutchError::ZetaOutOfRange { value: zeta });
    }
    Ok(sheath_f + zeta * clutch_f)
}
