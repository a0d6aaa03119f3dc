//! Electroadhesive clutch and sheath force models, plus the drop-stage
//! energy balance that predicts how far a loaded stage travels after an
//! impact and whether it oscillates.
//!
//! Four layers build on each other:
//!
//! * **Electrostatics** ([`ea_normal_force_ideal`], [`ea_normal_force_airgap`],
//!   [`clutch_friction_force`]): parallel-plate normal force between the
//!   clutch electrodes — with and without the air-gap correction — and the
//!   tangential friction force it sustains.
//! * **Sheath elasticity** ([`sheath_force`], [`sheath_energy`]): the tensile
//!   force of the strain-limited elastomer sheath wrapped around the clutch,
//!   from its hyperelastic material under uniaxial extension.
//! * **Modulation** ([`DutyCalibration`], [`zeta_from_duty`],
//!   [`combined_holding_force`]): the empirical map from PWM duty cycle to
//!   the normalized clutch-force fraction ζ, and the combined holding force
//!   `F_sheath + ζ·F_clutch`.
//! * **Drop dynamics** ([`stage_drop`]): energy bookkeeping of a mass
//!   dropped onto a sheath-suspended stage — impact losses, gravity work,
//!   rail friction, sheath strain energy, clutch slip — down to the
//!   displacement where the kinetic energy is exhausted.
//!
//! All quantities are SI (meters, newtons, volts, kilograms).

mod drop;
mod duty;
mod ea;
mod error;
mod sheath;

pub use drop::{stage_drop, StageDropParams, StageDropResult, STANDARD_GRAVITY};
pub use duty::{zeta_from_duty, DutyCalibration};
pub use ea::{
    clutch_friction_force, combined_holding_force, ea_normal_force_airgap, ea_normal_force_ideal,
    ClutchSpec, EaModel, VACUUM_PERMITTIVITY,
};
pub use error::ClutchError;
pub use sheath::{sheath_energy, sheath_extension_for_force, sheath_force, SheathSpec};
