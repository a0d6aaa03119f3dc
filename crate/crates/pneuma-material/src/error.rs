use thiserror::Error;

/// Errors raised by constitutive evaluations and fitting.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MaterialError {
    /// A stretch was zero, negative, or non-finite.
    #[error("principal stretch must be positive and finite, got {value}")]
    NonPositiveStretch { value: f64 },

    /// Stretches passed to an incompressible constructor do not multiply to 1.
    #[error("stretches violate incompressibility: l1*l2*l3 = {product} (|product - 1| > {tol})")]
    NotIncompressible { product: f64, tol: f64 },

    /// Material constants outside their admissible domain.
    #[error("invalid Gent constants: mu = {mu} Pa, jm = {jm} (both must be > 0)")]
    InvalidConstants { mu: f64, jm: f64 },

    /// Deformation state at or beyond the guarded lock-up singularity.
    #[error(
        "stretch state locks up: I1 - 3 = {i1_minus_3:.6} >= {guard:.6} * Jm with Jm = {jm} \
         (stretches l1 = {l1}, l2 = {l2}, l3 = {l3})"
    )]
    Lockup {
        i1_minus_3: f64,
        jm: f64,
        guard: f64,
        l1: f64,
        l2: f64,
        l3: f64,
    },

    /// Too few samples to fit the two Gent constants.
    #[error("fit needs at least 3 samples with distinct stretches above 1, got {n}")]
    InsufficientData { n: usize },

    /// Samples carry no strain information (all stretches at or near 1, or duplicated).
    #[error("fit data is degenerate: stretches carry no usable strain signal")]
    DegenerateData,

    /// The 1-D search over Jm failed to locate a finite minimiser.
    #[error("fit failed to converge: {detail}")]
    FitDiverged { detail: String },
}
