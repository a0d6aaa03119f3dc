//! Equilibrium equations of the axisymmetric membrane and the adaptive
//! integrator that marches them across the free span.
//!
//! The state at undeformed radius `r` is the meridional stretch `lambda1`,
//! the hoop stretch `lambda2`, and the slope angle `beta` of the meridian
//! (positive when the membrane descends outward). The deformed geometry
//! follows kinematically: current radius `R = r * lambda2`, and depth below
//! the contact edge `z' = lambda1 * sin(beta)`.

use crate::error::MembraneError;
use pneuma_material::{gent_partials, GentMaterial};

/// Local membrane state at one undeformed radius.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MembraneState {
    /// Meridional stretch (> 0).
    pub lambda1: f64,
    /// Hoop stretch (> 0).
    pub lambda2: f64,
    /// Meridian slope angle [rad], positive descending outward.
    pub beta: f64,
}

/// Radial derivatives `(dlambda1/dr, dlambda2/dr, dbeta/dr)` of the
/// equilibrium state, for reduced pressure `p_tilde = p / t0` [Pa/m].
///
/// ```text
/// dlambda1/dr = (W2 - lambda1 W12) cos(beta) / (r W11)
///             + (lambda2 W12 - W1) / (r W11)
/// dlambda2/dr = (lambda1 cos(beta) - lambda2) / r
/// dbeta/dr    = (p_tilde r lambda1 lambda2 - W2 sin(beta)) / (r W1)
/// ```
///
/// `W11 > 0` holds everywhere for the energy in use, so only the `W1`
/// division can degenerate. At the flat unloaded identity both the
/// numerator and `W1` vanish and the stationary limit `dbeta/dr = 0` is
/// returned; a vanishing `W1` under load raises the singularity error.
pub fn equilibrium_rhs(
    r: f64,
    state: &MembraneState,
    p_tilde: f64,
    material: &GentMaterial,
) -> Result<[f64; 3], MembraneError> {
    if !r.is_finite() || r <= 0.0 {
        return Err(MembraneError::InvalidInput { name: "r", value: r });
    }
    let l1 = state.lambda1;
    let l2 = state.lambda2;
    let p = gent_partials(l1, l2, material)?;
    let (sin_b, cos_b) = state.beta.sin_cos();

    if p.w11 == 0.0 {
        return Err(MembraneError::Singularity { r, lambda1: l1, lambda2: l2 });
    }
    let d_l1 = ((p.w2 - l1 * p.w12) * cos_b + (l2 * p.w12 - p.w1)) / (r * p.w11);
    let d_l2 = (l1 * cos_b - l2) / r;

    let moment_num = p_tilde * r * l1 * l2 - p.w2 * sin_b;
    let moment_den = r * p.w1;
    let d_beta = if moment_den == 0.0 {
        if moment_num == 0.0 {
            0.0
        } else {
            return Err(MembraneError::Singularity { r, lambda1: l1, lambda2: l2 });
        }
    } else {
        moment_num / moment_den
    };

    Ok([d_l1, d_l2, d_beta])
}

/// Slope angle at the contact edge from the vertical force balance on the
/// rigid disc:
///
/// ```text
/// sin(beta0) = (pi p r0^2 lambda2^2 - force) / (2 pi t0 r0 W1)
/// ```
///
/// Pressure pushes the disc up over the deformed contact circle, the
/// downward load `force` and the meridional membrane tension carry it.
/// Arguments outside `[-1, 1]` mean the membrane cannot carry the load at
/// this contact stretch and raise [`MembraneError::InfeasibleLoad`].
pub fn boundary_beta(
    pressure: f64,
    force: f64,
    r0: f64,
    t0: f64,
    lambda1: f64,
    lambda2: f64,
    material: &GentMaterial,
) -> Result<f64, MembraneError> {
    if !r0.is_finite() || r0 <= 0.0 {
        return Err(MembraneError::InvalidInput { name: "r0", value: r0 });
    }
    if !t0.is_finite() || t0 <= 0.0 {
        return Err(MembraneError::InvalidInput { name: "t0", value: t0 });
    }
    let p = gent_partials(lambda1, lambda2, material)?;
    let num = std::f64::consts::PI * pressure * r0 * r0 * lambda2 * lambda2 - force;
    let den = 2.0 * std::f64::consts::PI * t0 * r0 * p.w1;
    if den == 0.0 && num == 0.0 {
        return Ok(0.0); // unloaded flat membrane
    }
    let arg = num / den;
    if !arg.is_finite() || arg.abs() > 1.0 {
        return Err(MembraneError::InfeasibleLoad { argument: arg });
    }
    Ok(arg.asin())
}

// ============================================================================
// Adaptive Dormand-Prince integration over one material segment
// ============================================================================

/// Integration state vector: `[lambda1, lambda2, beta, z]` where `z` is the
/// depth below the contact edge (descending outward positive).
pub(crate) type StateVec = [f64; 4];

fn rhs4(r: f64, y: &StateVec, p_tilde: f64, m: &GentMaterial) -> Result<StateVec, MembraneError> {
    let s = MembraneState { lambda1: y[0], lambda2: y[1], beta: y[2] };
    let d = equilibrium_rhs(r, &s, p_tilde, m)?;
    Ok([d[0], d[1], d[2], y[0] * y[2].sin()])
}

/// March the state across `[r_start, r_end]` with the classic
/// Dormand-Prince 5(4) pair, appending every accepted node `(r, state)` to
/// `nodes`. The caller seeds `nodes` with the starting node.
pub(crate) fn integrate_segment(
    r_start: f64,
    r_end: f64,
    y_start: StateVec,
    p_tilde: f64,
    material: &GentMaterial,
    rtol: f64,
    atol: f64,
    nodes: &mut Vec<(f64, StateVec)>,
) -> Result<StateVec, MembraneError> {
    let span = r_end - r_start;
    if span <= 0.0 {
        return Ok(y_start);
    }
    let min_step = span * 1e-13;
    let mut r = r_start;
    let mut y = y_start;
    let mut k1 = rhs4(r, &y, p_tilde, material)?;
    let mut h = span / 64.0;

    while r < r_end {
        if r + h > r_end {
            h = r_end - r;
        }
        if h < min_step {
            return Err(MembraneError::StiffIntegration { r, step: h });
        }
        match dp_step(r, &y, &k1, h, p_tilde, material, rtol, atol) {
            Ok((y_new, k_new, err_norm)) => {
                if err_norm <= 1.0 {
                    r = if (r_end - (r + h)).abs() <= span * 1e-12 { r_end } else { r + h };
                    y = y_new;
                    k1 = k_new;
                    nodes.push((r, y));
                }
                let factor = if err_norm > 0.0 {
                    (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0)
                } else {
                    5.0
                };
                h *= factor;
            }
            Err(stage_err) => {
                // A trial stage left the admissible domain. Shrink and
                // retry; if the committed state itself is inadmissible the
                // probe below surfaces the true cause.
                h *= 0.5;
                if h < min_step {
                    rhs4(r, &y, p_tilde, material)?;
                    return Err(stage_err);
                }
            }
        }
    }
    Ok(y)
}

/// One trial Dormand-Prince step. Returns the 5th-order update, the fresh
/// first stage for the next step (FSAL), and the scaled error norm.
#[allow(clippy::too_many_arguments)]
fn dp_step(
    r: f64,
    y: &StateVec,
    k1: &StateVec,
    h: f64,
    p_tilde: f64,
    m: &GentMaterial,
    rtol: f64,
    atol: f64,
) -> Result<(StateVec, StateVec, f64), MembraneError> {
    const C: [f64; 6] = [0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
    const A2: [f64; 1] = [0.2];
    const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
    const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
    const A5: [f64; 4] = [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ];
    const A6: [f64; 5] = [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ];
    const B5: [f64; 6] = [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ];
    const B4: [f64; 7] = [
        5179.0 / 57600.0,
        0.0,
        7571.0 / 16695.0,
        393.0 / 640.0,
        -92097.0 / 339200.0,
        187.0 / 2100.0,
        1.0 / 40.0,
    ];

    let stage = |coef: &[f64], ks: &[&StateVec]| {
        let mut out = *y;
        for (i, v) in out.iter_mut().enumerate() {
            for (c, k) in coef.iter().zip(ks) {
                *v += h * c * k[i];
            }
        }
        out
    };

    let k2 = rhs4(r + C[0] * h, &stage(&A2, &[k1]), p_tilde, m)?;
    let k3 = rhs4(r + C[1] * h, &stage(&A3, &[k1, &k2]), p_tilde, m)?;
    let k4 = rhs4(r + C[2] * h, &stage(&A4, &[k1, &k2, &k3]), p_tilde, m)?;
    let k5 = rhs4(r + C[3] * h, &stage(&A5, &[k1, &k2, &k3, &k4]), p_tilde, m)?;
    let k6 = rhs4(r + C[4] * h, &stage(&A6, &[k1, &k2, &k3, &k4, &k5]), p_tilde, m)?;
    let y5 = stage(&B5, &[k1, &k2, &k3, &k4, &k5, &k6]);
    let k7 = rhs4(r + h, &y5, p_tilde, m)?;

    let mut err_norm: f64 = 0.0;
    let ks = [k1, &k2, &k3, &k4, &k5, &k6, &k7];
    for i in 0..4 {
        let mut y4 = y[i];
        for (c, k) in B4.iter().zip(ks) {
            y4 += h * c * k[i];
        }
        let scale = atol + rtol * y[i].abs().max(y5[i].abs());
        err_norm = err_norm.max((y5[i] - y4).abs() / scale);
    }
    Ok((y5, k7, err_norm))
}
