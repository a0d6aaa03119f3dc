use crate::ClutchError;
use pneuma_material::{uniaxial_first_invariant, uniaxial_stress, GentMaterial};

/// Elastomer sheath loaded in uniaxial tension along its length.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SheathSpec {
    /// Constitutive model of the sheath elastomer.
    pub material: GentMaterial,
    /// Total load-bearing cross-section [m²] (all strips combined).
    pub cross_section: f64,
    /// Unstretched free length [m].
    pub rest_length: f64,
}

impl SheathSpec {
    pub fn validate(&self) -> Result<(), ClutchError> {
        for (name, v) in [
            ("cross_section", self.cross_section),
            ("rest_length", self.rest_length),
        ] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(ClutchError::InvalidParam { name, value: v });
            }
        }
        Ok(())
    }

    /// Largest extension [m] the sheath accepts before the material's
    /// lock-up guard trips (exclusive upper bound for root searches).
    pub fn lockup_extension(&self) -> f64 {
        // lockup_guard() is the guard threshold on I1 - 3.
        let i1_max = 3.0 + self.material.lockup_guard();
        // Solve λ² + 2/λ = i1_max for the tensile root by bisection; the
        // left side is strictly increasing for λ > 1.
        let (mut lo, mut hi) = (1.0, 2.0);
        while uniaxial_first_invariant(hi) < i1_max {
            hi *= 2.0;
        }
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if uniaxial_first_invariant(mid) < i1_max {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        (lo - 1.0) * self.rest_length
    }
}

/// Tensile force [N] of the sheath at the given extension [m]:
/// uniaxial nominal-geometry stress at stretch `1 + extension/rest_length`
/// times the load-bearing cross-section.
pub fn sheath_force(extension: f64, spec: &SheathSpec) -> Result<f64, ClutchError> {
    spec.validate()?;
    if !extension.is_finite() || extension <= -spec.rest_length {
        return Err(ClutchError::InvalidParam {
            name: "extension",
            value: extension,
        });
    }
    let stretch = 1.0 + extension / spec.rest_length;
    let stress = uniaxial_stress(stretch, &spec.material)?;
    Ok(stress * spec.cross_section)
}

/// Strain energy [J] stored by stretching the sheath from extension `from`
/// to extension `to`, by adaptive quadrature of [`sheath_force`].
pub fn sheath_energy(from: f64, to: f64, spec: &SheathSpec) -> Result<f64, ClutchError> {
    spec.validate()?;
    if to < from {
        return Ok(-sheath_energy(to, from, spec)?);
    }
    adaptive_simpson(&|x| sheath_force(x, spec), from, to, 1e-12)
}

/// Smallest nonnegative extension [m] at which the sheath carries `force`
/// [N]. Errors with a model breakdown if the force is not reachable below
/// lock-up.
pub fn sheath_extension_for_force(force: f64, spec: &SheathSpec) -> Result<f64, ClutchError> {
    spec.validate()?;
    if !(force >= 0.0 && force.is_finite()) {
        return Err(ClutchError::InvalidParam {
            name: "force",
            value: force,
        });
    }
    if force == 0.0 {
        return Ok(0.0);
    }
    // Tensile force is strictly increasing in extension up to lock-up.
    let hi = spec.lockup_extension() * (1.0 - 1e-9);
    if sheath_force(hi, spec)? < force {
        return Err(ClutchError::ModelBreakdown {
            detail: format!("requested sheath force {force} N exceeds the lock-up capacity"),
        });
    }
    let mut lo = 0.0;
    let mut hi = hi;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if sheath_force(mid, spec)? < force {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Adaptive Simpson quadrature of a fallible integrand with error
/// propagation; `tol` is an absolute tolerance on the integral.
pub(crate) fn adaptive_simpson<F>(f: &F, a: f64, b: f64, tol: f64) -> Result<f64, ClutchError>
where
    F: Fn(f64) -> Result<f64, ClutchError>,
{
    if a == b {
        return Ok(0.0);
    }
    let m = 0.5 * (a + b);
    let (fa, fm, fb) = (f(a)?, f(m)?, f(b)?);
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson_step(f, a, fa, b, fb, m, fm, whole, tol, 0)
}

#[allow(clippy::too_many_arguments)]
fn simpson_step<F>(
    f: &F,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    m: f64,
    fm: f64,
    whole: f64,
    tol: f64,
    depth: u32,
) -> Result<f64, ClutchError>
where
    F: Fn(f64) -> Result<f64, ClutchError>,
{
    let lm = 0.5 * (a + m);
    let rm = 0.5 * (m + b);
    let (flm, frm) = (f(lm)?, f(rm)?);
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    let split = left + right;
    if depth >= 32 || (split - whole).abs() <= 15.0 * tol {
        // Richardson extrapolation of the two estimates.
        return Ok(split + (split - whole) / 15.0);
    }
    // Halve the budget for the children, but never chase below the rounding
    // noise of the partial sums themselves — without the floor, steep
    // integrands drive the recursion to full depth over macroscopic spans.
    let half = (0.5 * tol).max(1e-15 * split.abs());
    Ok(simpson_step(f, a, fa, m, fm, lm, flm, left, half, depth + 1)?
        + simpson_step(f, m, fm, b, fb, rm, frm, right, half, depth + 1)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::{assert_abs_diff_eq, assert_relative_eq};
    use proptest::prelude::*;

    /// The bench sheath: two 3 mm × 30 mm strips, 66 mm free length.
    fn bench_sheath(mu: f64) -> SheathSpec {
        SheathSpec {
            material: GentMaterial::new(mu, 39.6).unwrap(),
            cross_section: 1.8e-4,
            rest_length: 0.066,
        }
    }

    #[test]
    fn zero_extension_zero_force() {
        let f = sheath_force(0.0, &bench_sheath(31.7e3)).unwrap();
        assert_abs_diff_eq!(f, 0.0, epsilon = 1e-12);
    }

    #[test]
    fn bench_force_at_ten_millimeters() {
        // The stand measures roughly 3 N of sheath contribution at 10 mm;
        // the nominal-geometry model lands within the ±30% band.
        let f = sheath_force(0.010, &bench_sheath(31.7e3)).unwrap();
        assert!((f - 3.0).abs() / 3.0 < 0.30, "f = {f} N");
        assert_relative_eq!(f, 2.615, max_relative = 1e-3);
    }

    #[test]
    fn doubling_cross_section_doubles_force() {
        let base = bench_sheath(31.7e3);
        let double = SheathSpec {
            cross_section: 2.0 * base.cross_section,
            ..base
        };
        assert_relative_eq!(
            sheath_force(0.015, &double).unwrap(),
            2.0 * sheath_force(0.015, &base).unwrap(),
            max_relative = 1e-14
        );
    }

    #[test]
    fn lockup_extension_is_the_force_ceiling() {
        let spec = bench_sheath(31.7e3);
        let ext = spec.lockup_extension();
        assert!(sheath_force(ext * 0.999, &spec).is_ok());
        assert!(matches!(
            sheath_force(ext * 1.001, &spec).unwrap_err(),
            ClutchError::Material(_)
        ));
    }

    #[test]
    fn energy_derivative_recovers_force() {
        let spec = bench_sheath(17e3);
        let x = 0.018;
        let h = 1e-6;
        let de = (sheath_energy(0.0, x + h, &spec).unwrap()
            - sheath_energy(0.0, x - h, &spec).unwrap())
            / (2.0 * h);
        assert_relative_eq!(de, sheath_force(x, &spec).unwrap(), max_relative = 1e-8);
    }

    #[test]
    fn energy_is_additive_and_antisymmetric() {
        let spec = bench_sheath(17e3);
        let (a, b, c) = (0.002, 0.011, 0.024);
        let whole = sheath_energy(a, c, &spec).unwrap();
        let split = sheath_energy(a, b, &spec).unwrap() + sheath_energy(b, c, &spec).unwrap();
        assert_relative_eq!(whole, split, max_relative = 1e-10);
        assert_relative_eq!(
            sheath_energy(c, a, &spec).unwrap(),
            -whole,
            max_relative = 1e-12
        );
    }

    #[test]
    fn extension_for_force_round_trips() {
        let spec = bench_sheath(17e3);
        for x in [0.001, 0.005, 0.02, 0.04] {
            let f = sheath_force(x, &spec).unwrap();
            let back = sheath_extension_for_force(f, &spec).unwrap();
            assert_relative_eq!(back, x, max_relative = 1e-9);
        }
        assert_eq!(sheath_extension_for_force(0.0, &spec).unwrap(), 0.0);
    }

    #[test]
    fn unreachable_force_is_model_breakdown() {
        let spec = bench_sheath(17e3);
        let err = sheath_extension_for_force(1e9, &spec).unwrap_err();
        assert!(matches!(err, ClutchError::ModelBreakdown { .. }));
    }

    proptest! {
        #[test]
        fn force_monotone_in_tension(
            x1 in 0.0_f64..0.05,
            x2 in 0.0_f64..0.05
        ) {
            let spec = bench_sheath(31.7e3);
            let (lo, hi) = if x1 <= x2 { (x1, x2) } else { (x2, x1) };
            let f_lo = sheath_force(lo, &spec).unwrap();
            let f_hi = sheath_force(hi, &spec).unwrap();
            prop_assert!(f_lo <= f_hi + 1e-12);
        }

        #[test]
        fn tensile_energy_is_nonnegative(x in 0.0_f64..0.05) {
            let spec = bench_sheath(17e3);
            prop_assert!(sheath_energy(0.0, x, &spec).unwrap() >= -1e-15);
        }
    }
}
