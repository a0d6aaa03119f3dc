//! Closed-form free inflation of a clamped circular membrane.
//!
//! Before the membrane touches anything it balloons into a spheroidal cap.
//! Treating the cap as a uniformly stretched thin spherical vessel of
//! current radius `lambda * r` and current thickness `t0 / lambda^2` gives a
//! closed-form pressure-stretch relation; the cap's outer dimensions follow
//! from area conservation of the stretched sheet.

use crate::error::MembraneError;
use pneuma_material::{equibiaxial_stress, GentMaterial};

/// Equibiaxial stretch at which the inflated cap passes through a
/// hemisphere: the stretched area `lambda^2 * pi * r^2` equals `2 pi r^2`.
pub const HEMISPHERE_STRETCH: f64 = std::f64::consts::SQRT_2;

fn check_positive(name: &'static str, value: f64) -> Result<(), MembraneError> {
    if !value.is_finite() || value <= 0.0 {
        return Err(MembraneError::InvalidInput { name, value });
    }
    Ok(())
}

/// Inflation pressure [Pa] holding a uniformly stretched spherical cap at
/// equibiaxial stretch `lambda`, for a membrane of undeformed thickness
/// `t0` [m] clamped at aperture radius `r` [m].
///
/// The thin-vessel balance `P = 2 t sigma / R` evaluated at the current
/// radius `R = lambda * r` and current thickness `t = t0 / lambda^2` gives
///
/// ```text
/// P(lambda) = 2 t0 sigma(lambda) / (lambda^3 r)
/// ```
///
/// with `sigma` the equibiaxial Cauchy stress of the material. `P(1) = 0`;
/// the curve rises to an interior limit point, falls, and turns back up as
/// the stretch approaches material lock-up. In the unlimited-extensibility
/// limit it reduces to the classical `(2 t0 mu / r) (1/lambda - 1/lambda^7)`.
///
/// `lambda < 1` is rejected (free inflation only expands the sheet);
/// stretches at or beyond lock-up surface the material's own error.
pub fn free_inflation_pressure(
    lambda: f64,
    t0: f64,
    r: f64,
    material: &GentMaterial,
) -> Result<f64, MembraneError> {
    check_positive("t0", t0)?;
    check_positive("r", r)?;
    if !lambda.is_finite() || lambda < 1.0 {
        return Err(MembraneError::InvalidInput {
            name: "lambda",
            value: lambda,
        });
    }
    let sigma = equibiaxial_stress(lambda, material)?;
    Ok(2.0 * t0 * sigma / (lambda.powi(3) * r))
}

/// Half-surface area of an oblate spheroid with equatorial radius `a` and
/// polar radius `c <= a` (both [m]).
///
/// `S/2 = pi a^2 + (pi / 2) (c^2 / e) ln((1 + e) / (1 - e))` with
/// eccentricity `e = sqrt(1 - c^2/a^2)`; the removable singularity at
/// `e -> 0` is evaluated by series (`ln` term `-> 2 c^2 (1 + e^2/3)`),
/// recovering the hemisphere area `2 pi a^2` when `a = c`.
pub fn oblate_half_area(a: f64, c: f64) -> Result<f64, MembraneError> {
    check_positive("a", a)?;
    check_positive("c", c)?;
    if c > a {
        return Err(MembraneError::InvalidInput { name: "c", value: c });
    }
    let e2 = 1.0 - (c / a) * (c / a);
    let e = e2.max(0.0).sqrt();
    let cap = if e < 1e-8 {
        // series of (c^2 / e) ln((1+e)/(1-e)) about e = 0
        2.0 * c * c * (1.0 + e2 / 3.0)
    } else {
        (c * c / e) * ((1.0 + e) / (1.0 - e)).ln()
    };
    Ok(std::f64::consts::PI * (a * a + 0.5 * cap))
}

/// Outer radius [m] of the free-inflation cap at equibiaxial stretch
/// `lambda`, for aperture radius `r` [m].
///
/// Up to the hemisphere (`lambda <= sqrt(2)`) the cap fits inside the
/// aperture, so the outer radius is the aperture radius itself. Beyond it
/// the cap is modelled as the upper half of an oblate spheroid whose polar
/// radius stays pinned at `r` while the equatorial radius `a` grows to
/// conserve the stretched area:
///
/// ```text
/// S_half(a, c = r) = lambda^2 * pi * r^2
/// ```
///
/// solved for `a` in `[r, lambda r]` by bisection. The map is continuous at
/// the hemisphere (`a -> r` as `lambda -> sqrt(2)`) and increasing beyond
/// it.
pub fn spheroid_radius(lambda: f64, r: f64) -> Result<f64, MembraneError> {
    check_positive("r", r)?;
    if !lambda.is_finite() || lambda < 1.0 {
        return Err(MembraneError::InvalidInput {
            name: "lambda",
            value: lambda,
        });
    }
    if lambda <= HEMISPHERE_STRETCH {
        return Ok(r);
    }

    let target = lambda * lambda * std::f64::consts::PI * r * r;
    let mut lo = r;
    let mut hi = lambda * r;
    // S_half is increasing in a; the bracket ends must straddle the target.
    let f_lo = oblate_half_area(lo, r)? - target;
    let f_hi = oblate_half_area(hi, r)? - target;
    if f_lo > 0.0 || f_hi < 0.0 {
        return Err(MembraneError::SpheroidBracket { lo, hi });
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        let f_mid = oblate_half_area(mid, r)? - target;
        if f_mid < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}
