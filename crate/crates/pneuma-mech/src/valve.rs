use crate::MechError;

/// Geometry and stiffness of a dome-style check valve with a flexure-hinged
/// sealing disc.
///
/// Lengths are in millimetres, the translational stiffness `k_s` in N/mm,
/// the rotational hinge stiffness `k_r` in N·mm/rad, and the sealing area
/// `a_v` in mm². [`crack_pressure`] converts to SI on output.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValveSpec {
    /// Dome height: travel of the sealing disc from seated to fully open [mm].
    pub h_dome: f64,
    /// Flexure half-base: horizontal distance from hinge to disc center [mm].
    pub b0: f64,
    /// Translational spring stiffness [N/mm].
    pub k_s: f64,
    /// Rotational hinge stiffness [N·mm/rad].
    pub k_r: f64,
    /// Effective sealing area of the disc [mm²].
    pub a_v: f64,
}

impl ValveSpec {
    pub fn validate(&self) -> Result<(), MechError> {
        for (name, v) in [("h_dome", self.h_dome), ("b0", self.b0), ("a_v", self.a_v)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MechError::NonPositiveValveParam { name, value: v });
            }
        }
        for (name, v) in [("k_s", self.k_s), ("k_r", self.k_r)] {
            if !(v >= 0.0 && v.is_finite()) {
                return Err(MechError::NonPositiveValveParam { name, value: v });
            }
        }
        Ok(())
    }
}

/// Restoring force of the valve disc at opening displacement `x` [mm],
/// measured from the fully open position (`x = h_dome` is seated).
///
/// The translational leg stores energy in the stretch of the dome chord,
/// the rotational leg in the hinge angle:
///
/// ```text
/// F(x) = -k_s * (sqrt(h^2 + b0^2) - sqrt(x^2 + b0^2)) / sqrt(x^2 + b0^2) * x
///        + k_r/b0 * (atan(h/b0) + atan(x/b0)) / ((x/b0)^2 + 1)
/// ```
///
/// Returned in newtons.
pub fn valve_spring_force(x: f64, spec: &ValveSpec) -> Result<f64, MechError> {
    spec.validate()?;
    if !x.is_finite() {
        return Err(MechError::NonPositiveValveParam { name: "x", value: x });
    }
    let h = spec.h_dome;
    let b0 = spec.b0;
    let chord_rest = (h * h + b0 * b0).sqrt();
    let chord = (x * x + b0 * b0).sqrt();
    let translational = -spec.k_s * ((chord_rest - chord) / chord) * x;
    let u = x / b0;
    let rotational = (spec.k_r / b0) * ((h / b0).atan() + u.atan()) / (u * u + 1.0);
    Ok(translational + rotational)
}

/// Cracking pressure of the valve in pascals: the seated spring preload
/// divided by the sealing area, `F(0) / a_v`.
///
/// `F(0)` is in newtons and `a_v` in mm², so the quotient is N/mm² (MPa);
/// the result is scaled to Pa.
pub fn crack_pressure(spec: &ValveSpec) -> Result<f64, MechError> {
    let preload = valve_spring_force(0.0, spec)?;
    Ok(preload / spec.a_v * 1.0e6)
}

/// Pressure lost across the valve: the absolute difference between supply
/// and actuator pressure, in whatever unit both arguments share.
pub fn valve_loss(p_supply: f64, p_actuator: f64) -> f64 {
    (p_supply - p_actuator).abs()
}
