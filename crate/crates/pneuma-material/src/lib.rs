//! Gent hyperelastic constitutive core.
//!
//! Implements the two-constant Gent model for incompressible rubber:
//! energy density `W = -(mu*Jm/2) * ln(1 - (I1 - 3)/Jm)`, the principal
//! Cauchy stresses for uniaxial and equibiaxial loading, the analytic
//! partial derivatives of `W` with respect to the in-plane stretches
//! (consumed by the axisymmetric membrane solver), and least-squares
//! fitting of the two constants from uniaxial test data.
//!
//! All quantities are SI: stresses and energy densities in Pa, stretches
//! dimensionless. The model diverges logarithmically as `I1 - 3 -> Jm`;
//! every evaluation rejects states inside a guard band near that lock-up
//! singularity (see [`LOCKUP_GUARD_FRACTION`]) so that downstream solvers
//! never step onto the asymptote.

mod error;
mod fit;
mod gent;
mod stress;

pub use error::MaterialError;
pub use fit::{fit_gent_uniaxial, GentFit};
pub use gent::{
    first_invariant, gent_energy, gent_partials, GentMaterial, GentPartials, PrincipalStretches,
    LOCKUP_GUARD_FRACTION,
};
pub use stress::{
    equibiaxial_first_invariant, equibiaxial_stress, uniaxial_first_invariant, uniaxial_stress,
};
