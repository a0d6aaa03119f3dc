use crate::stress::uniaxial_first_invariant;
use crate::{GentMaterial, MaterialError, LOCKUP_GUARD_FRACTION};

/// Result of fitting the two Gent constants to uniaxial data.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GentFit {
    pub material: GentMaterial,
    /// Root-mean-square stress residual of the fit [Pa].
    pub rms_residual: f64,
}

/// Fit `(mu, Jm)` to uniaxial `(stretch, Cauchy stress [Pa])` samples by
/// unweighted least squares on stress.
///
/// The stress model is linear in `mu` at fixed `Jm`, so `mu` is profiled out
/// analytically and the remaining 1-D problem in `Jm` is solved by a log-grid
/// scan refined with golden-section search. Deterministic; no RNG involved.
///
/// Requires at least 3 samples, at least two distinct stretches, and data
/// reaching above `stretch = 1` (compression-only or identity-only data is
/// rejected as degenerate).
pub fn fit_gent_uniaxial(samples: &[(f64, f64)]) -> Result<GentFit, MaterialError> {
    if samples.len() < 3 {
        return Err(MaterialError::InsufficientData { n: samples.len() });
    }
    for &(l, sigma) in samples {
        if !(l > 0.0 && l.is_finite()) {
            return Err(MaterialError::NonPositiveStretch { value: l });
        }
        if !sigma.is_finite() {
            return Err(MaterialError::FitDiverged {
                detail: format!("non-finite stress sample {sigma}"),
            });
        }
    }

    let mut stretches: Vec<f64> = samples.iter().map(|&(l, _)| l).collect();
    stretches.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let distinct = stretches
        .windows(2)
        .filter(|w| (w[1] - w[0]).abs() > 1e-12)
        .count()
        + 1;
    let max_stretch = *stretches.last().unwrap();
    if distinct < 2 || max_stretch <= 1.0 + 1e-9 {
        return Err(MaterialError::DegenerateData);
    }

    // Jm must keep every sample below the guarded lock-up.
    let max_i1 = samples
        .iter()
        .map(|&(l, _)| uniaxial_first_invariant(l))
        .fold(f64::NEG_INFINITY, f64::max);
    let jm_floor = (max_i1 - 3.0) / LOCKUP_GUARD_FRACTION;

    // Profiled sum of squared residuals as a function of Jm.
    let sse = |jm: f64| -> (f64, f64) {
        let mut s_phi2 = 0.0;
        let mut s_phi_sigma = 0.0;
        for &(l, sigma) in samples {
            let phi = jm * (l * l - 1.0 / l) / (jm - uniaxial_first_invariant(l) + 3.0);
            s_phi2 += phi * phi;
            s_phi_sigma += phi * sigma;
        }
        if s_phi2 <= 0.0 {
            return (f64::INFINITY, 0.0);
        }
        let mu = s_phi_sigma / s_phi2;
        let mut err = 0.0;
        for &(l, sigma) in samples {
            let phi = jm * (l * l - 1.0 / l) / (jm - uniaxial_first_invariant(l) + 3.0);
            let r = sigma - mu * phi;
            err += r * r;
        }
        (err, mu)
    };

    // Log-grid scan over Jm - jm_floor spanning 14 decades.
    let offset_exp = |x: f64| jm_floor * (1.0 + 1e-9) + 10f64.powf(x);
    let (x_lo, x_hi, steps) = (-6.0, 8.0, 561);
    let mut best = (f64::INFINITY, 0usize);
    for k in 0..steps {
        let x = x_lo + (x_hi - x_lo) * k as f64 / (steps - 1) as f64;
        let (err, _) = sse(offset_exp(x));
        if err < best.0 {
            best = (err, k);
        }
    }
    if !best.0.is_finite() {
        return Err(MaterialError::FitDiverged {
            detail: "no finite residual over the Jm search range".to_string(),
        });
    }

    // Golden-section refinement between the scan neighbours of the minimum.
    let dx = (x_hi - x_lo) / (steps - 1) as f64;
    let x_best = x_lo + dx * best.1 as f64;
    let (mut a, mut b) = (x_best - dx, x_best + dx);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let (mut c, mut d) = (b - inv_phi * (b - a), a + inv_phi * (b - a));
    let (mut fc, mut fd) = (sse(offset_exp(c)).0, sse(offset_exp(d)).0);
    for _ in 0..120 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = sse(offset_exp(c)).0;
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = sse(offset_exp(d)).0;
        }
    }
    let jm = offset_exp(0.5 * (a + b));
    let (err, mu) = sse(jm);
    if !(mu > 0.0 && mu.is_finite() && err.is_finite()) {
        return Err(MaterialError::FitDiverged {
            detail: format!("profiled shear modulus {mu} Pa is not admissible"),
        });
    }

    Ok(GentFit {
        material: GentMaterial::new(mu, jm)?,
        rms_residual: (err / samples.len() as f64).sqrt(),
    })
}
