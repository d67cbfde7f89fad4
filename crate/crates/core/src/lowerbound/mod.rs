//! Certified lower bounds for commutator norms from explicit witnesses.

mod classical;
mod pipeline;
mod signs;
mod witness;

pub use classical::{bmo_lower, holder_lower, witness_lower, WitnessBound};
pub use pipeline::{lr_lower_pipeline, PipelineReport, SampleRecord, PIPELINE_THRESHOLD};
pub use signs::{random_signs, sign_row};
pub use witness::{crw_identity_residual, crw_witnesses, WitnessTriple};
