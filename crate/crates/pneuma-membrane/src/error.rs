use pneuma_material::MaterialError;
use thiserror::Error;

/// Failures raised by the free-inflation formulas and the membrane
/// boundary-value solver.
#[derive(Debug, Error)]
pub enum MembraneError {
    /// A geometric design is self-inconsistent (overlapping rings, ring
    /// outside the annulus, non-positive thickness, ...).
    #[error("invalid membrane design: {detail}")]
    InvalidDesign { detail: String },

    /// A scalar argument is outside its admissible range.
    #[error("invalid input {name} = {value}")]
    InvalidInput { name: &'static str, value: f64 },

    /// The requested (pressure, force) pair admits no equilibrium angle at
    /// the contact edge: the arcsine argument of the boundary condition left
    /// [-1, 1].
    #[error("infeasible load: boundary angle argument {argument} outside [-1, 1]")]
    InfeasibleLoad { argument: f64 },

    /// The equilibrium right-hand side divided by a vanishing energy
    /// derivative away from the stationary identity state.
    #[error("singular equilibrium at r = {r} (lambda1 = {lambda1}, lambda2 = {lambda2})")]
    Singularity { r: f64, lambda1: f64, lambda2: f64 },

    /// The adaptive integrator drove the step size below its floor, usually
    /// because the state approached material lock-up mid-span.
    #[error("integration stalled at r = {r} (step {step})")]
    StiffIntegration { r: f64, step: f64 },

    /// The shooting scan found no sign change of the outer-rim residual over
    /// the admissible contact-stretch range.
    #[error("no shooting bracket in [{x_lo}, {x_hi}] ({samples} samples)")]
    NoConvergence { x_lo: f64, x_hi: f64, samples: usize },

    /// The spheroid area equation could not be bracketed.
    #[error("no equatorial-radius bracket in [{lo}, {hi}]")]
    SpheroidBracket { lo: f64, hi: f64 },

    /// A material evaluation failed (lock-up, invalid stretch, ...).
    #[error(transparent)]
    Material(#[from] MaterialError),
}
