use crate::MaterialError;

/// Fraction of `Jm` at which evaluations refuse to approach the lock-up
/// singularity: any state with `I1 - 3 >= LOCKUP_GUARD_FRACTION * Jm` is
/// rejected. Keeping a guard band (rather than admitting everything up to
/// the pole itself) protects downstream root-finders and integrators from
/// the logarithmic asymptote.
pub const LOCKUP_GUARD_FRACTION: f64 = 0.999;

/// Tolerance on `l1*l2*l3 - 1` accepted by the incompressible constructor.
const INCOMPRESSIBILITY_TOL: f64 = 1e-12;

// ============================================================================
// Material constants
// ============================================================================

/// Two-constant Gent material: shear modulus `mu` [Pa] and dimensionless
/// extension limit `jm`. Values are immutable after construction.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GentMaterial {
    mu: f64,
    jm: f64,
}

impl GentMaterial {
    /// Construct a material; both constants must be strictly positive and finite.
    pub fn new(mu: f64, jm: f64) -> Result<Self, MaterialError> {
        if !(mu > 0.0 && mu.is_finite() && jm > 0.0 && jm.is_finite()) {
            return Err(MaterialError::InvalidConstants { mu, jm });
        }
        Ok(Self { mu, jm })
    }

    /// Shear modulus [Pa].
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Dimensionless extension limit.
    pub fn jm(&self) -> f64 {
        self.jm
    }

    /// Largest admissible `I1 - 3` under the guard band.
    pub fn lockup_guard(&self) -> f64 {
        LOCKUP_GUARD_FRACTION * self.jm
    }
}

// ============================================================================
// Kinematics
// ============================================================================

/// Principal stretches (l1, l2, l3) of an incompressible deformation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PrincipalStretches {
    l1: f64,
    l2: f64,
    l3: f64,
}

impl PrincipalStretches {
    /// General constructor: requires strictly positive, finite stretches but
    /// does not enforce incompressibility.
    pub fn new(l1: f64, l2: f64, l3: f64) -> Result<Self, MaterialError> {
        for &value in &[l1, l2, l3] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(MaterialError::NonPositiveStretch { value });
            }
        }
        Ok(Self { l1, l2, l3 })
    }

    /// Incompressible constructor: additionally requires `l1*l2*l3 = 1`
    /// within 1e-12.
    pub fn incompressible(l1: f64, l2: f64, l3: f64) -> Result<Self, MaterialError> {
        let s = Self::new(l1, l2, l3)?;
        let product = l1 * l2 * l3;
        if (product - 1.0).abs() > INCOMPRESSIBILITY_TOL {
            return Err(MaterialError::NotIncompressible {
                product,
                tol: INCOMPRESSIBILITY_TOL,
            });
        }
        Ok(s)
    }

    /// In-plane biaxial state: l3 computed from incompressibility as
    /// `1/(l1*l2)`. This is the state the axisymmetric membrane solver
    /// works in.
    pub fn biaxial(l1: f64, l2: f64) -> Result<Self, MaterialError> {
        let s = Self::new(l1, l2, 1.0)?;
        Ok(Self {
            l3: 1.0 / (s.l1 * s.l2),
            ..s
        })
    }

    /// Uniaxial extension at stretch `l`: (l, 1/sqrt(l), 1/sqrt(l)).
    pub fn uniaxial(l: f64) -> Result<Self, MaterialError> {
        let s = Self::new(l, 1.0, 1.0)?;
        let lat = 1.0 / s.l1.sqrt();
        Ok(Self {
            l1: s.l1,
            l2: lat,
            l3: lat,
        })
    }

    /// Equibiaxial extension at stretch `l`: (l, l, 1/l^2).
    pub fn equibiaxial(l: f64) -> Result<Self, MaterialError> {
        let s = Self::new(l, l, 1.0)?;
        Ok(Self {
            l3: 1.0 / (s.l1 * s.l1),
            ..s
        })
    }

    pub fn l1(&self) -> f64 {
        self.l1
    }

    pub fn l2(&self) -> f64 {
        self.l2
    }

    pub fn l3(&self) -> f64 {
        self.l3
    }
}

/// First invariant of the right Cauchy-Green tensor: `I1 = l1^2 + l2^2 + l3^2`.
/// Under incompressibility `I1 >= 3`, with equality only at the identity.
pub fn first_invariant(s: &PrincipalStretches) -> f64 {
    s.l1 * s.l1 + s.l2 * s.l2 + s.l3 * s.l3
}

// ============================================================================
// Energy density
// ============================================================================

/// Gent strain-energy density `W = -(mu*Jm/2) * ln(1 - (I1 - 3)/Jm)` [Pa].
///
/// `W >= 0` with equality only at `I1 = 3`; grows without bound as `I1 - 3`
/// approaches `Jm`. States inside the guard band are rejected.
pub fn gent_energy(s: &PrincipalStretches, m: &GentMaterial) -> Result<f64, MaterialError> {
    let i1 = first_invariant(s);
    check_lockup(s, m, i1)?;
    let w = -(m.mu() * m.jm() / 2.0) * (1.0 - (i1 - 3.0) / m.jm()).ln();
    // ln(1 - x) <= 0 for x in [0, 1), so w >= 0; clamp the -0.0 at identity.
    Ok(w.max(0.0))
}

fn check_lockup(
    s: &PrincipalStretches,
    m: &GentMaterial,
    i1: f64,
) -> Result<(), MaterialError> {
    let i1_minus_3 = i1 - 3.0;
    if i1_minus_3 >= m.lockup_guard() {
        return Err(MaterialError::Lockup {
            i1_minus_3,
            jm: m.jm(),
            guard: LOCKUP_GUARD_FRACTION,
            l1: s.l1,
            l2: s.l2,
            l3: s.l3,
        });
    }
    Ok(())
}

// ============================================================================
// Analytic partials with respect to the in-plane stretches
// ============================================================================

/// First and second partial derivatives of the Gent energy density with
/// respect to the in-plane stretches of an incompressible biaxial state
/// (`l3 = 1/(l1*l2)` eliminated). These drive the membrane equilibrium
/// equations.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GentPartials {
    /// dW/dl1 [Pa]
    pub w1: f64,
    /// dW/dl2 [Pa]
    pub w2: f64,
    /// d2W/dl1^2 [Pa]
    pub w11: f64,
    /// d2W/(dl1 dl2) [Pa]
    pub w12: f64,
}

/// Evaluate [`GentPartials`] at the biaxial state (`l1`, `l2`).
///
/// With `I1(l1, l2) = l1^2 + l2^2 + 1/(l1^2 l2^2)` and `g = Jm - (I1 - 3)`:
///
/// ```text
/// W1  = (mu Jm / 2) * I1_1 / g
/// W11 = (mu Jm / 2) * (I1_11 / g + I1_1^2 / g^2)
/// ```
///
/// and symmetrically for `W2`, `W12`, where `I1_1`, `I1_11`, `I1_12` are the
/// invariant's own partials. Verified against centred finite differences of
/// [`gent_energy`] in the test suite.
pub fn gent_partials(
    l1: f64,
    l2: f64,
    m: &GentMaterial,
) -> Result<GentPartials, MaterialError> {
    let s = PrincipalStretches::biaxial(l1, l2)?;
    let i1 = first_invariant(&s);
    check_lockup(&s, m, i1)?;

    let g = m.jm() - (i1 - 3.0);
    let half_mu_jm = 0.5 * m.mu() * m.jm();

    let l1_2 = l1 * l1;
    let l2_2 = l2 * l2;
    let i1_d1 = 2.0 * l1 - 2.0 / (l1_2 * l1 * l2_2);
    let i1_d2 = 2.0 * l2 - 2.0 / (l1_2 * l2_2 * l2);
    let i1_d11 = 2.0 + 6.0 / (l1_2 * l1_2 * l2_2);
    let i1_d12 = 4.0 / (l1_2 * l1 * l2_2 * l2);

    Ok(GentPartials {
        w1: half_mu_jm * i1_d1 / g,
        w2: half_mu_jm * i1_d2 / g,
        w11: half_mu_jm * (i1_d11 / g + i1_d1 * i1_d1 / (g * g)),
        w12: half_mu_jm * (i1_d12 / g + i1_d1 * i1_d2 / (g * g)),
    })
}

// ============================================================================
// Tests
// ============================================================================
