//! Axisymmetric inflation of a strain-limited elastomer membrane.
//!
//! Two regimes are covered:
//!
//! * **Free inflation** — before contact the clamped sheet balloons into a
//!   spheroidal cap with a closed-form pressure-stretch relation
//!   ([`free_inflation_pressure`]) and an area-conserving outer radius
//!   ([`spheroid_radius`]).
//! * **Contact equilibrium** — once a rigid disc rides on the membrane, the
//!   annular free span between the contact circle and the clamped rim obeys
//!   a two-point boundary-value problem in the meridional stretch, hoop
//!   stretch, and slope angle ([`equilibrium_rhs`]), closed by a force
//!   balance on the disc ([`boundary_beta`]) and solved by shooting
//!   ([`shoot`]). Concentric stiffening rings split the span into segments
//!   that differ only in material constants.
//!
//! All lengths are metres, pressures pascals, forces newtons.

mod design;
mod error;
mod free;
mod ode;
mod shoot;

pub use design::{MembraneDesign, RingSpec, Segment};
pub use error::MembraneError;
pub use free::{
    free_inflation_pressure, oblate_half_area, spheroid_radius, HEMISPHERE_STRETCH,
};
pub use ode::{boundary_beta, equilibrium_rhs, MembraneState};
pub use shoot::{force_height_map, shoot, MapRow, MembraneSolution, SolverConfig};
