use crate::gent::{GentMaterial, PrincipalStretches};
use crate::{first_invariant, gent_energy, MaterialError};

/// First invariant along the uniaxial path: `I1 = l^2 + 2/l`.
pub fn uniaxial_first_invariant(l: f64) -> f64 {
    l * l + 2.0 / l
}

/// First invariant along the equibiaxial path: `I1 = 2 l^2 + 1/l^4`.
pub fn equibiaxial_first_invariant(l: f64) -> f64 {
    2.0 * l * l + l.powi(-4)
}

/// Uniaxial Cauchy stress [Pa]:
/// `sigma1 = mu*Jm/(Jm - I1 + 3) * (l^2 - 1/l)` with `I1 = l^2 + 2/l`.
///
/// Equal to `l * dW/dl` along the uniaxial path; vanishes exactly at `l = 1`
/// and carries the sign of `l - 1`.
pub fn uniaxial_stress(l: f64, m: &GentMaterial) -> Result<f64, MaterialError> {
    let s = PrincipalStretches::uniaxial(l)?;
    // Reuse the energy evaluation for its guard-band check.
    gent_energy(&s, m)?;
    let i1 = first_invariant(&s);
    Ok(m.mu() * m.jm() / (m.jm() - i1 + 3.0) * (l * l - 1.0 / l))
}

/// Equibiaxial Cauchy stress [Pa]:
/// `sigma11 = mu*Jm/(Jm - I1 + 3) * (l^2 - 1/l^4)` with `I1 = 2 l^2 + 1/l^4`.
///
/// Equal to `(l/2) * dW/dl` along the equibiaxial path; vanishes exactly at
/// `l = 1` and is strictly increasing on `(1, lock-up)`.
pub fn equibiaxial_stress(l: f64, m: &GentMaterial) -> Result<f64, MaterialError> {
    let s = PrincipalStretches::equibiaxial(l)?;
    gent_energy(&s, m)?;
    let i1 = first_invariant(&s);
    Ok(m.mu() * m.jm() / (m.jm() - i1 + 3.0) * (l * l - l.powi(-4)))
}
