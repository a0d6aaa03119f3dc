use crate::MechError;
use std::f64::consts::PI;

/// Default transverse contact ratio assumed for every mesh when none is
/// measured. Contact ratios are always explicit inputs to the efficiency
/// formulas; this constant is only a convenience default.
pub const DEFAULT_CONTACT_RATIO: f64 = 1.5;

/// Minimum cuttable tooth count accepted for any gear.
const MIN_TEETH: i64 = 5;

// ============================================================================
// Gear set
// ============================================================================

/// A fully specified two-stage compound coaxial gear set.
///
/// Stage 1 (module `m1`): sun `s`, planet `p1`, ring `r1`.
/// Stage 2 (module `m2`): planet `p2` (rigidly joined to `p1`), ring `r2`.
/// Each gear carries a tooth count `Z` and a profile shift coefficient `X`;
/// `cl` is the mesh clearance added at every mesh [mm].
#[derive(Debug, Clone, PartialEq)]
pub struct GearSet {
    pub zs: i64,
    pub zp1: i64,
    pub zr1: i64,
    pub zp2: i64,
    pub zr2: i64,
    pub xs: f64,
    pub xp1: f64,
    pub xr1: f64,
    pub xp2: f64,
    pub xr2: f64,
    /// Module of the sun / planet-1 / ring-1 stage [mm].
    pub m1: f64,
    /// Module of the planet-2 / ring-2 stage [mm].
    pub m2: f64,
    /// Mesh clearance [mm], applied with the sign conventions of the
    /// coaxial radii (added at the external mesh, subtracted at the
    /// internal meshes).
    pub cl: f64,
    /// Sliding friction coefficient used by the mesh-efficiency model.
    pub mu_g: f64,
    /// Contact ratios for the sun/planet-1, planet-1/ring-1 and
    /// planet-2/ring-2 meshes.
    pub eps_a: f64,
    pub eps_b: f64,
    pub eps_c: f64,
}

impl GearSet {
    /// Validate tooth counts and modules.
    pub fn validate(&self) -> Result<(), MechError> {
        for (name, z) in [
            ("sun", self.zs),
            ("planet1", self.zp1),
            ("ring1", self.zr1),
            ("planet2", self.zp2),
            ("ring2", self.zr2),
        ] {
            if z < MIN_TEETH {
                return Err(MechError::TeethTooFew {
                    name,
                    z,
                    min: MIN_TEETH,
                });
            }
        }
        for (name, v) in [("m1", self.m1), ("m2", self.m2)] {
            if !(v > 0.0 && v.is_finite()) {
                return Err(MechError::NonPositiveGearParam { name, value: v });
            }
        }
        Ok(())
    }

    /// First internal ratio `I1 = Zr1 / Zs`.
    pub fn i1(&self) -> f64 {
        self.zr1 as f64 / self.zs as f64
    }

    /// Second internal ratio `I2 = (Zr1 * Zp2) / (Zr2 * Zp1)`.
    pub fn i2(&self) -> f64 {
        (self.zr1 * self.zp2) as f64 / (self.zr2 * self.zp1) as f64
    }

    /// True when `I2 = 1` exactly (integer identity `Zr1*Zp2 == Zr2*Zp1`),
    /// which collapses the reduction ratio to zero.
    pub fn is_degenerate(&self) -> bool {
        self.zr1 * self.zp2 == self.zr2 * self.zp1
    }

    /// Center distance of the sun / planet-1 external mesh [mm]:
    /// sun tip radius + planet-1 root radius + clearance.
    pub fn radius_a(&self) -> f64 {
        0.5 * self.m1
            * ((self.zs as f64 + 2.0 * self.xs + 1.0) + (self.zp1 as f64 + 2.0 * self.xp1 - 1.0))
            + self.cl
    }

    /// Center distance of the planet-1 / ring-1 internal mesh [mm]:
    /// ring-1 root radius − planet-1 tip radius − clearance.
    pub fn radius_b(&self) -> f64 {
        0.5 * self.m1
            * ((self.zr1 as f64 + 2.0 * self.xr1 + 1.0) - (self.zp1 as f64 + 2.0 * self.xp1 + 1.0))
            - self.cl
    }

    /// Center distance of the planet-2 / ring-2 internal mesh [mm].
    pub fn radius_c(&self) -> f64 {
        0.5 * self.m2
            * ((self.zr2 as f64 + 2.0 * self.xr2 + 1.0) - (self.zp2 as f64 + 2.0 * self.xp2 + 1.0))
            - self.cl
    }
}

// ============================================================================
// Coaxial solve
// ============================================================================

/// Free design parameters of the coaxial solve; the planet gears of both
/// stages are dependent and recovered by [`solve_coaxial`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoaxialInputs {
    pub zs: i64,
    pub zr2: i64,
    pub xs: f64,
    pub xr2: f64,
    /// Ring 1 is fixed throughout a study.
    pub zr1: i64,
    pub xr1: f64,
    pub m1: f64,
    pub m2: f64,
    pub cl: f64,
    /// Integer offsets added to the floor solution of each planet stage.
    pub p1_offset: i64,
    pub p2_offset: i64,
}

/// Solve the two dependent planet gears from the coaxial geometry
/// constraint `r_a = r_b = r_c`.
///
/// Eliminating the radii gives one scalar per stage:
///
/// ```text
/// Y1 = (Zr1 + 2*Xr1 - Zs - 2*Xs)/2 - 2*Cl/m1          (= Zp1 + 2*Xp1)
/// Y2 = Zr2 + 2*Xr2 + (m1/m2)*(Zp1 + 2*Xp1 - Zr1 - 2*Xr1)  (= Zp2 + 2*Xp2)
/// ```
///
/// (the clearance terms of `Y2` cancel because the same clearance applies at
/// both internal meshes). Tooth counts are `floor(Y) + offset` and the
/// profile shifts absorb the remainder, `X = (Y - Z)/2`; any offset that
/// pushes a shift outside `|X| <= 1` is rejected. The returned set always
/// satisfies the coaxial constraint to floating-point accuracy, which the
/// test suite asserts at 1e-9 mm.
pub fn solve_coaxial(inputs: &CoaxialInputs) -> Result<GearSet, MechError> {
    for (name, v) in [("m1", inputs.m1), ("m2", inputs.m2)] {
        if !(v > 0.0 && v.is_finite()) {
            return Err(MechError::NonPositiveGearParam { name, value: v });
        }
    }
    if !(inputs.cl >= 0.0 && inputs.cl.is_finite()) {
        return Err(MechError::NonPositiveGearParam {
            name: "cl",
            value: inputs.cl,
        });
    }

    let y1 = 0.5
        * ((inputs.zr1 as f64 + 2.0 * inputs.xr1) - (inputs.zs as f64 + 2.0 * inputs.xs))
        - 2.0 * inputs.cl / inputs.m1;
    let zp1 = y1.floor() as i64 + inputs.p1_offset;
    let xp1 = 0.5 * (y1 - zp1 as f64);
    if xp1.abs() > 1.0 {
        return Err(MechError::InvalidCombination {
            stage: 1,
            offset: inputs.p1_offset,
            xp: xp1,
        });
    }

    let y2 = (inputs.zr2 as f64 + 2.0 * inputs.xr2)
        + (inputs.m1 / inputs.m2) * ((zp1 as f64 + 2.0 * xp1) - (inputs.zr1 as f64 + 2.0 * inputs.xr1));
    let zp2 = y2.floor() as i64 + inputs.p2_offset;
    let xp2 = 0.5 * (y2 - zp2 as f64);
    if xp2.abs() > 1.0 {
        return Err(MechError::InvalidCombination {
            stage: 2,
            offset: inputs.p2_offset,
            xp: xp2,
        });
    }

    let set = GearSet {
        zs: inputs.zs,
        zp1,
        zr1: inputs.zr1,
        zp2,
        zr2: inputs.zr2,
        xs: inputs.xs,
        xp1,
        xr1: inputs.xr1,
        xp2,
        xr2: inputs.xr2,
        m1: inputs.m1,
        m2: inputs.m2,
        cl: inputs.cl,
        mu_g: 0.0,
        eps_a: DEFAULT_CONTACT_RATIO,
        eps_b: DEFAULT_CONTACT_RATIO,
        eps_c: DEFAULT_CONTACT_RATIO,
    };
    set.validate()?;
    Ok(set)
}

// ============================================================================
// Ratio and efficiency
// ============================================================================

/// Reduction ratio `Gr = (1 - I2) / (1 + I1)` evaluated exactly: both the
/// numerator and denominator are formed in integer arithmetic, with a single
/// final floating division, so scaling every tooth count leaves the result
/// bit-identical.
pub fn gear_ratio(set: &GearSet) -> f64 {
    let num = (set.zr2 * set.zp1 - set.zr1 * set.zp2) as i128 * set.zs as i128;
    let den = (set.zr2 * set.zp1) as i128 * (set.zs + set.zr1) as i128;
    num as f64 / den as f64
}

/// Mesh topology: the sign of the second tooth-count term in the sliding
/// loss differs between external (gear-gear) and internal (gear-ring)
/// meshes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MeshKind {
    External,
    Internal,
}

/// Single-mesh sliding efficiency:
/// `eta = 1 - mu*pi*(1/z1 + s/z2)*eps` with `s = +1` external, `-1` internal.
///
/// Frictionless meshes are exactly lossless; an internal mesh of equal tooth
/// counts is lossless for any friction (the sliding terms cancel).
pub fn mesh_efficiency(z1: i64, z2: i64, kind: MeshKind, mu_g: f64, eps: f64) -> f64 {
    let sign = match kind {
        MeshKind::External => 1.0,
        MeshKind::Internal => -1.0,
    };
    1.0 - mu_g * PI * (1.0 / z1 as f64 + sign / z2 as f64) * eps
}

/// Per-mesh efficiencies (eta_a, eta_b, eta_c) of the three meshes.
fn mesh_efficiencies(set: &GearSet) -> (f64, f64, f64) {
    (
        mesh_efficiency(set.zs, set.zp1, MeshKind::External, set.mu_g, set.eps_a),
        mesh_efficiency(set.zp1, set.zr1, MeshKind::Internal, set.mu_g, set.eps_b),
        mesh_efficiency(set.zp2, set.zr2, MeshKind::Internal, set.mu_g, set.eps_c),
    )
}

/// Back-drive efficiency of the gear set, branching on the sign of `1 - I2`.
///
/// ```text
/// I2 < 1:  eta' = (1+I1) * eta_a * (eta_b*eta_c - I2)
///                 / (eta_c * (eta_a*eta_b + I1) * (1 - I2))
/// I2 > 1:  eta' = (1+I1) * eta_a * (1 - eta_b*eta_c*I2)
///                 / ((eta_a*eta_b + I1) * (1 - I2))
/// ```
///
/// Both branches reduce to exactly 1 when every mesh is frictionless. A
/// negative result means the set is self-locking (cannot be back-driven):
/// sliding losses exceed the net ratio margin `|eta_b*eta_c - I2|`.
pub fn backdrive_efficiency(set: &GearSet) -> Result<f64, MechError> {
    set.validate()?;
    if set.is_degenerate() {
        return Err(MechError::DegenerateRatio);
    }
    let (eta_a, eta_b, eta_c) = mesh_efficiencies(set);
    let i1 = set.i1();
    let i2 = set.i2();
    let eta = if i2 < 1.0 {
        (1.0 + i1) * eta_a * (eta_b * eta_c - i2)
            / (eta_c * (eta_a * eta_b + i1) * (1.0 - i2))
    } else {
        (1.0 + i1) * eta_a * (1.0 - eta_b * eta_c * i2) / ((eta_a * eta_b + i1) * (1.0 - i2))
    };
    Ok(eta)
}

// ============================================================================
// Back-drivability score
// ============================================================================

/// Score a built gearbox from its reduction ratio and repeated back-drive
/// torque trials (each trial the fraction of motor stall torque needed to
/// back-drive).
///
/// The single worst (largest) trial is discarded and the score is
/// `ratio / max(remaining trials)` — higher ratios at lower back-drive
/// torque score better.
pub fn gear_reward(ratio: f64, trials: &[f64]) -> Result<f64, MechError> {
    if trials.len() < 2 {
        return Err(MechError::TooFewTrials { n: trials.len() });
    }
    for &t in trials {
        if !(t > 0.0 && t <= 1.0) {
            return Err(MechError::TrialOutOfRange { value: t });
        }
    }
    let worst = trials
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap();
    let denom = trials
        .iter()
        .enumerate()
        .filter(|&(i, _)| i != worst)
        .map(|(_, &t)| t)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(ratio / denom)
}

// ============================================================================
// Tests
// ============================================================================
