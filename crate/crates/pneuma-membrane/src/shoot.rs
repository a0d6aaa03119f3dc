//! Shooting solver for the contact boundary-value problem: find the
//! meridional stretch at the contact edge so that the hoop stretch returns
//! to one at the clamped rim.

use crate::design::MembraneDesign;
use crate::error::MembraneError;
use crate::ode::{boundary_beta, integrate_segment, MembraneState, StateVec};
use pneuma_material::GentMaterial;

/// Tunables of the shooting solver. The defaults satisfy the accuracy
/// contract (rim residual below `1e-6`) on the design family this library
/// targets.
#[derive(Debug, Clone)]
pub struct SolverConfig {
    /// Accepted rim residual `|lambda2(rf) - 1|`.
    pub residual_tolerance: f64,
    /// Relative tolerance of the adaptive integrator.
    pub rtol: f64,
    /// Absolute tolerance of the adaptive integrator.
    pub atol: f64,
    /// Number of contact-stretch samples in the bracketing scan.
    pub bracket_samples: usize,
    /// Maximum bisection iterations per bracket.
    pub max_bisections: usize,
    /// Hoop stretch imposed at the contact edge. The disc clamps the
    /// membrane circumferentially, pinning the hoop stretch; the default of
    /// one models a bonded unstretched contact circle.
    pub contact_hoop_stretch: f64,
    /// Tie the contact hoop stretch to the shooting unknown
    /// (`lambda2(r0) = lambda1(r0)`) instead of pinning it. This models a
    /// smooth free apex — the limit of a vanishing contact disc — where
    /// symmetry forces the pole into an equibiaxial state. When set,
    /// `contact_hoop_stretch` is ignored.
    pub equibiaxial_contact: bool,
    /// Radii at which the integrator is forced to restart a step, in
    /// addition to material segment edges. Useful to impose a matching
    /// step sequence on two designs with different segmentation.
    pub extra_stops: Vec<f64>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            residual_tolerance: 1e-6,
            rtol: 1e-8,
            atol: 1e-10,
            bracket_samples: 96,
            max_bisections: 90,
            contact_hoop_stretch: 1.0,
            equibiaxial_contact: false,
            extra_stops: Vec::new(),
        }
    }
}

/// A converged equilibrium of the contact boundary-value problem.
#[derive(Debug, Clone)]
pub struct MembraneSolution {
    /// Chamber pressure [Pa].
    pub pressure: f64,
    /// Downward force carried by the contact disc [N].
    pub force: f64,
    /// Meridional stretch at the contact edge (the shooting unknown).
    pub contact_stretch: f64,
    /// Achieved rim residual `|lambda2(rf) - 1|`.
    pub residual: f64,
    /// Whether the residual scan found more than one distinct equilibrium;
    /// the reported solution is the one with the smallest contact stretch.
    pub multiple_roots: bool,
    /// Undeformed radii of the stored profile nodes [m], increasing.
    pub radii: Vec<f64>,
    /// Membrane state at each node.
    pub states: Vec<MembraneState>,
    /// Deformed profile `(R, Z)` [m]: current radius and height above the
    /// rim (the rim sits at `Z = 0`, the contact edge at `Z = height`).
    pub shape: Vec<(f64, f64)>,
    /// Height of the contact disc above the rim plane [m]; negative when a
    /// force pulls the unpressurised membrane below the rim.
    pub height: f64,
}

/// One evaluated load case of a force/height map.
#[derive(Debug, Clone, Copy)]
pub struct MapRow {
    /// Chamber pressure [Pa].
    pub pressure: f64,
    /// Contact force [N].
    pub force: f64,
    /// Contact height above the rim [m]; `NaN` when not converged.
    pub height: f64,
    /// Rim residual; `NaN` when not converged.
    pub residual: f64,
    /// Contact-edge meridional stretch; `NaN` when not converged.
    pub contact_stretch: f64,
    /// Whether the solver converged for this load case.
    pub converged: bool,
    /// Whether several equilibria were detected.
    pub multiple_roots: bool,
}

/// Integration intervals with their materials, after merging design
/// segments with any forced extra stops.
fn intervals<'a>(
    design: &'a MembraneDesign,
    cfg: &SolverConfig,
) -> Result<Vec<(f64, f64, &'a GentMaterial)>, MembraneError> {
    let segments = design.segments()?;
    let mut bounds: Vec<f64> = Vec::with_capacity(segments.len() + cfg.extra_stops.len() + 1);
    for s in &segments {
        bounds.push(s.start);
    }
    bounds.push(design.clamp_radius);
    for &stop in &cfg.extra_stops {
        if !stop.is_finite() || stop <= design.contact_radius || stop >= design.clamp_radius {
            return Err(MembraneError::InvalidInput { name: "extra_stop", value: stop });
        }
        bounds.push(stop);
    }
    bounds.sort_by(|a, b| a.partial_cmp(b).unwrap());
    bounds.dedup();

    let mut out = Vec::with_capacity(bounds.len() - 1);
    for w in bounds.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let seg = segments
            .iter()
            .find(|s| s.start <= mid && mid < s.end)
            .unwrap_or_else(|| segments.last().unwrap());
        out.push((w[0], w[1], seg.material));
    }
    Ok(out)
}

/// Integrate the full profile for a trial contact stretch `x`. Returns the
/// accepted nodes from the contact edge to the rim.
fn integrate_profile(
    design: &MembraneDesign,
    pressure: f64,
    force: f64,
    x: f64,
    cfg: &SolverConfig,
    spans: &[(f64, f64, &GentMaterial)],
) -> Result<Vec<(f64, StateVec)>, MembraneError> {
    let lam2c = if cfg.equibiaxial_contact { x } else { cfg.contact_hoop_stretch };
    let beta0 = boundary_beta(
        pressure,
        force,
        design.contact_radius,
        design.thickness,
        x,
        lam2c,
        spans[0].2,
    )?;
    let p_tilde = pressure / design.thickness;
    let mut nodes: Vec<(f64, StateVec)> = Vec::with_capacity(256);
    let mut y: StateVec = [x, lam2c, beta0, 0.0];
    nodes.push((design.contact_radius, y));
    for &(start, end, material) in spans {
        y = integrate_segment(start, end, y, p_tilde, material, cfg.rtol, cfg.atol, &mut nodes)?;
    }
    Ok(nodes)
}

fn rim_residual(nodes: &[(f64, StateVec)]) -> f64 {
    nodes.last().unwrap().1[1] - 1.0
}

/// Upper admissible contact stretch: the meridional stretch at which the
/// contact-edge biaxial state reaches the material's lock-up guard.
fn contact_lockup_stretch(material: &GentMaterial, cfg: &SolverConfig) -> f64 {
    let i1_max = 3.0 + material.lockup_guard();
    if cfg.equibiaxial_contact {
        // 2 x^2 + x^-4 = i1_max, increasing for x > 1
        let mut hi = 2.0_f64;
        while 2.0 * hi * hi + hi.powi(-4) < i1_max {
            hi *= 1.5;
        }
        let mut lo = 1.0;
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if 2.0 * mid * mid + mid.powi(-4) < i1_max {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    } else {
        // x^2 + lam2^2 + 1/(x^2 lam2^2) = i1_max  =>  quadratic in x^2
        let lam2 = cfg.contact_hoop_stretch;
        let q = i1_max - lam2 * lam2;
        let disc = (q * q - 4.0 / (lam2 * lam2)).max(0.0);
        let s = 0.5 * (q + disc.sqrt());
        s.max(1.0).sqrt()
    }
}

/// Solve the contact boundary-value problem at one load case.
///
/// The contact stretch is scanned over the admissible range, residual sign
/// changes are bracketed and bisected, and the equilibrium with the
/// smallest contact stretch is returned (flagging when others exist). The
/// unloaded case returns the exact flat identity.
pub fn shoot(
    design: &MembraneDesign,
    pressure: f64,
    force: f64,
    cfg: &SolverConfig,
) -> Result<MembraneSolution, MembraneError> {
    for (name, v) in [("pressure", pressure), ("force", force)] {
        if !v.is_finite() || v < 0.0 {
            return Err(MembraneError::InvalidInput { name, value: v });
        }
    }
    let spans = intervals(design, cfg)?;

    if pressure == 0.0 && force == 0.0 && (cfg.equibiaxial_contact || cfg.contact_hoop_stretch == 1.0)
    {
        // Unloaded membrane: the flat identity is the exact equilibrium.
        let mut radii: Vec<f64> = spans.iter().map(|s| s.0).collect();
        radii.push(design.clamp_radius);
        let states = vec![MembraneState { lambda1: 1.0, lambda2: 1.0, beta: 0.0 }; radii.len()];
        let shape = radii.iter().map(|&r| (r, 0.0)).collect();
        return Ok(MembraneSolution {
            pressure,
            force,
            contact_stretch: 1.0,
            residual: 0.0,
            multiple_roots: false,
            radii,
            states,
            shape,
            height: 0.0,
        });
    }

    let x_lo = 1.0 + 1e-9;
    let x_hi = 0.95 * contact_lockup_stretch(spans[0].2, cfg);
    let n = cfg.bracket_samples.max(8);

    let eval = |x: f64| -> Option<f64> {
        integrate_profile(design, pressure, force, x, cfg, &spans)
            .ok()
            .map(|nodes| rim_residual(&nodes))
    };

    // --- bracketing scan ------------------------------------------------
    // Evaluate a uniform grid, then sharpen every admissibility boundary:
    // equilibria can hug the edge of the feasible region (the boundary
    // angle saturating at +-pi/2), where the residual sweeps through zero
    // within a fraction of one grid step.
    let raw: Vec<(f64, Option<f64>)> = (0..n)
        .map(|i| {
            let x = x_lo + (x_hi - x_lo) * i as f64 / (n - 1) as f64;
            (x, eval(x))
        })
        .collect();
    let mut samples: Vec<(f64, f64)> = Vec::with_capacity(n);
    for i in 0..n {
        let Some(res) = raw[i].1 else { continue };
        if i > 0 && raw[i - 1].1.is_none() {
            if let Some(edge) = edge_sample(raw[i - 1].0, raw[i].0, &eval) {
                samples.push(edge);
            }
        }
        samples.push((raw[i].0, res));
        if i + 1 < n && raw[i + 1].1.is_none() {
            if let Some(edge) = edge_sample(raw[i + 1].0, raw[i].0, &eval) {
                samples.push(edge);
            }
        }
    }
    let mut roots: Vec<f64> = Vec::new();
    for pair in samples.windows(2) {
        let (xa, ra) = pair[0];
        let (xb, rb) = pair[1];
        if ra == 0.0 {
            roots.push(xa);
            continue;
        }
        if ra * rb < 0.0 {
            if let Some(root) = bisect(xa, ra, xb, rb, cfg, &eval) {
                roots.push(root);
            }
        }
    }
    if let Some(&(xl, rl)) = samples.last() {
        if rl == 0.0 {
            roots.push(xl);
        }
    }
    if roots.is_empty() {
        return Err(MembraneError::NoConvergence { x_lo, x_hi, samples: n });
    }

    // --- pick the smallest-stretch equilibrium --------------------------
    roots.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let sep = 1e-6 * (x_hi - x_lo);
    let mut distinct = 1usize;
    for pair in roots.windows(2) {
        if pair[1] - pair[0] > sep {
            distinct += 1;
        }
    }
    let x_star = roots[0];

    let nodes = integrate_profile(design, pressure, force, x_star, cfg, &spans)?;
    let residual = rim_residual(&nodes).abs();
    if residual > cfg.residual_tolerance {
        return Err(MembraneError::NoConvergence { x_lo, x_hi, samples: n });
    }

    let depth_at_rim = nodes.last().unwrap().1[3];
    let radii: Vec<f64> = nodes.iter().map(|&(r, _)| r).collect();
    let states: Vec<MembraneState> = nodes
        .iter()
        .map(|&(_, y)| MembraneState { lambda1: y[0], lambda2: y[1], beta: y[2] })
        .collect();
    let shape: Vec<(f64, f64)> = nodes
        .iter()
        .map(|&(r, y)| (r * y[1], depth_at_rim - y[3]))
        .collect();

    Ok(MembraneSolution {
        pressure,
        force,
        contact_stretch: x_star,
        residual,
        multiple_roots: distinct > 1,
        radii,
        states,
        shape,
        height: depth_at_rim,
    })
}

/// Walk the admissibility boundary between an infeasible and a feasible
/// stretch, returning the closest feasible evaluation to the edge.
fn edge_sample(bad: f64, good: f64, eval: &dyn Fn(f64) -> Option<f64>) -> Option<(f64, f64)> {
    let mut bad = bad;
    let mut good_x = good;
    let mut good_res = None;
    for _ in 0..48 {
        let mid = 0.5 * (bad + good_x);
        if mid == bad || mid == good_x {
            break;
        }
        match eval(mid) {
            Some(res) => {
                good_x = mid;
                good_res = Some(res);
            }
            None => bad = mid,
        }
    }
    good_res.map(|res| (good_x, res))
}

/// Bisect a residual sign change; tolerant of occasional infeasible
/// midpoints (the admissible domain can have holes at scan resolution).
fn bisect(
    mut a: f64,
    mut ra: f64,
    mut b: f64,
    mut rb: f64,
    cfg: &SolverConfig,
    eval: &dyn Fn(f64) -> Option<f64>,
) -> Option<f64> {
    debug_assert!(ra * rb < 0.0);
    for _ in 0..cfg.max_bisections {
        if (b - a) <= f64::EPSILON * b.abs().max(1.0) {
            break;
        }
        let mid = 0.5 * (a + b);
        // Nudge toward a valid evaluation if the midpoint is infeasible.
        let mut probe = None;
        for &frac in &[0.0, -0.1, 0.1, -0.25, 0.25, -0.4, 0.4] {
            let x = mid + frac * 0.5 * (b - a);
            if x <= a || x >= b {
                continue;
            }
            if let Some(res) = eval(x) {
                probe = Some((x, res));
                break;
            }
        }
        let (x, res) = probe?;
        if res == 0.0 {
            return Some(x);
        }
        if res.signum() == ra.signum() {
            a = x;
            ra = res;
        } else {
            b = x;
            rb = res;
        }
    }
    // Return the endpoint with the smaller residual magnitude.
    Some(if ra.abs() <= rb.abs() { a } else { b })
}

/// Solve the boundary-value problem over a pressure/force grid (pressures
/// outer, forces inner). Unconverged cells are reported, not dropped.
pub fn force_height_map(
    design: &MembraneDesign,
    pressures: &[f64],
    forces: &[f64],
    cfg: &SolverConfig,
) -> Result<Vec<MapRow>, MembraneError> {
    design.validate()?;
    let mut rows = Vec::with_capacity(pressures.len() * forces.len());
    for &p in pressures {
        for &f in forces {
            let row = match shoot(design, p, f, cfg) {
                Ok(sol) => MapRow {
                    pressure: p,
                    force: f,
                    height: sol.height,
                    residual: sol.residual,
                    contact_stretch: sol.contact_stretch,
                    converged: true,
                    multiple_roots: sol.multiple_roots,
                },
                Err(MembraneError::InvalidInput { name, value }) => {
                    return Err(MembraneError::InvalidInput { name, value })
                }
                Err(_) => MapRow {
                    pressure: p,
                    force: f,
                    height: f64::NAN,
                    residual: f64::NAN,
                    contact_stretch: f64::NAN,
                    converged: false,
                    multiple_roots: false,
                },
            };
            rows.push(row);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::design::RingSpec;

    fn elastic() -> GentMaterial {
        GentMaterial::new(31.7e3, 39.6).unwrap()
    }

    fn limiter() -> GentMaterial {
        GentMaterial::new(1.0e6, 25.0).unwrap()
    }

    fn bench_design() -> MembraneDesign {
        MembraneDesign::ringless(25.4e-3, 70.0e-3, 2.0e-3, elastic(), limiter())
    }

    #[test]
    fn unloaded_membrane_is_exactly_flat() {
        let sol = shoot(&bench_design(), 0.0, 0.0, &SolverConfig::default()).unwrap();
        assert_eq!(sol.height, 0.0);
        assert_eq!(sol.contact_stretch, 1.0);
        assert_eq!(sol.residual, 0.0);
        assert!(!sol.multiple_roots);
        for s in &sol.states {
            assert_eq!((s.lambda1, s.lambda2, s.beta), (1.0, 1.0, 0.0));
        }
        for (&r, &(cur_r, z)) in sol.radii.iter().zip(&sol.shape) {
            assert_eq!(cur_r, r);
            assert_eq!(z, 0.0);
        }
    }

    #[test]
    fn negative_load_is_rejected() {
        let cfg = SolverConfig::default();
        assert!(shoot(&bench_design(), -1.0, 0.0, &cfg).is_err());
        assert!(shoot(&bench_design(), 0.0, -1.0, &cfg).is_err());
    }

    #[test]
    fn pressurised_membrane_lifts_the_disc() {
        let cfg = SolverConfig::default();
        let sol = shoot(&bench_design(), 4.0e3, 0.0, &cfg).unwrap();
        assert!(sol.height > 1.0e-3, "height {} suspiciously small", sol.height);
        assert!(sol.residual <= cfg.residual_tolerance);
        assert!(sol.contact_stretch > 1.0);
        // rim comes back to its clamped radius
        let (rim_r, rim_z) = *sol.shape.last().unwrap();
        assert!((rim_r - 70.0e-3).abs() <= 70.0e-3 * 1e-5);
        assert_eq!(rim_z, 0.0);
    }

    #[test]
    fn dead_weight_on_unpressurised_membrane_sags_below_the_rim() {
        let cfg = SolverConfig::default();
        let sol = shoot(&bench_design(), 0.0, 5.0, &cfg).unwrap();
        assert!(sol.height < 0.0, "height {} should be negative", sol.height);
        assert!(sol.residual <= cfg.residual_tolerance);
    }

    #[test]
    fn profile_nodes_land_exactly_on_ring_edges() {
        let mut design = bench_design();
        design.rings = vec![RingSpec { center: 45.0e-3, half_width: 4.0e-3 }];
        let sol = shoot(&design, 3.0e3, 0.0, &SolverConfig::default()).unwrap();
        for edge in [design.rings[0].inner(), design.rings[0].outer()] {
            assert!(
                sol.radii.iter().any(|&r| r == edge),
                "no node exactly at ring edge {edge}"
            );
        }
        // radii strictly increasing
        for w in sol.radii.windows(2) {
            assert!(w[1] > w[0]);
        }
    }

    #[test]
    fn extra_stops_outside_the_span_are_rejected()  {
        let mut cfg = SolverConfig::default();
        cfg.extra_stops = vec![80.0e-3];
        assert!(matches!(
            shoot(&bench_design(), 1.0e3, 0.0, &cfg),
            Err(MembraneError::InvalidInput { name: "extra_stop", .. })
        ));
    }

    #[test]
    fn map_reports_unconverged_cells_without_dropping_rows() {
        // An absurd force at zero pressure is infeasible for every contact
        // stretch: the row must survive with converged = false.
        let cfg = SolverConfig { bracket_samples: 24, ..SolverConfig::default() };
        let rows = force_height_map(&bench_design(), &[0.0], &[1.0e7], &cfg).unwrap();
        assert_eq!(rows.len(), 1);
        assert!(!rows[0].converged);
        assert!(rows[0].height.is_nan());
    }
}
