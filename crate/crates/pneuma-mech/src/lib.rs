//! Closed-form mechanism models used as design objectives.
//!
//! Two independent mechanism families live here:
//!
//! * **Compound coaxial (Wolfrom-type) gearbox**: solving planet tooth
//!   counts and profile shifts from the coaxial geometry constraint,
//!   reduction ratio, per-mesh sliding efficiency, back-drive efficiency,
//!   and the back-drivability score used to rank built gearboxes.
//! * **Silicone dome check valve**: the dome's nonlinear spring force as a
//!   function of apex position, the crack pressure at which the dome first
//!   opens, and the scalar pressure-matching loss.
//!
//! All gear lengths are in millimetres (the native unit of gear modules);
//! valve forces come out in newtons and crack pressure in pascals.

mod error;
mod gear;
mod valve;

pub use error::MechError;
pub use gear::{
    backdrive_efficiency, gear_ratio, gear_reward, mesh_efficiency, solve_coaxial, CoaxialInputs,
    GearSet, MeshKind, DEFAULT_CONTACT_RATIO,
};
pub use valve::{crack_pressure, valve_loss, valve_spring_force, ValveSpec};
