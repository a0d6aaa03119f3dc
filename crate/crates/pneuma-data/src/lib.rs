//! Neutral data layer for the membrane-lift toolchain: the on-disk dataset
//! schema, the trimming rules that select which raw samples models see, the
//! design-vector type shared by every model, design-space sampling, and
//! lossless CSV result tables.
//!
//! * **Designs** ([`DesignVector`], [`RingParams`]): a membrane as stored
//!   and searched — contact radius, thickness, and up to two optional
//!   stiffening rings. Absent rings are explicit (`None`/JSON `null`),
//!   never numeric sentinels.
//! * **Datasets** ([`LiftDataset`], [`load_dataset`], [`save_dataset`]):
//!   JSON ingestion with full schema validation (violations carry their
//!   JSON path) and warnings — not errors — for unknown fields.
//! * **Trimming** ([`TrimPolicy`], [`trim_dataset`]): fracture removal,
//!   per-height trial selection, and inflation-only truncation at each
//!   trial's pressure peak. Idempotent.
//! * **Design spaces** ([`SearchSpace`], [`MembraneSpace`],
//!   [`latin_hypercube`]): bounded search boxes with deterministic,
//!   idempotent feasibility repair (ring ordering and minimum ring
//!   separation), plus seeded Latin-hypercube sampling.
//! * **Tables** ([`Table`], [`Cell`]): CSV result tables with 17
//!   significant digits, a stable column order, and byte-identical
//!   round trips.
//!
//! Lengths are millimeters, pressures kilopascals, forces newtons, times
//! seconds — the units of the test rig's logs.

mod dataset;
mod design_vector;
mod error;
mod space;
mod table;
mod trim;

pub use dataset::{
    dataset_from_json_str, dataset_to_json_string, load_dataset, load_dataset_with_warnings,
    save_dataset, LiftDataset, MembraneRecord, Sample, Trial, TrialMetadata,
};
pub use design_vector::{DesignVector, RingParams};
pub use error::{DataError, Violation};
pub use space::{latin_hypercube, lhs_designs, MembraneSpace, SearchSpace};
pub use table::{format_f64_lossless, Cell, Table};
pub use trim::{trim_dataset, TrimPolicy};
