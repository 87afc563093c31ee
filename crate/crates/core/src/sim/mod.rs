//! Photonic preparation of the basis, counting statistics and tomography.

pub mod counts;
pub mod optics;
pub mod tomography;

pub use counts::{
    dark_correct, expectation, observable_estimate, outcome_probabilities, read_jsonl,
    sample_counts, sample_settings, weighted_mix_counts, write_jsonl, CountRecord, Estimate,
    NoiseModel,
};
pub use optics::{prep, qplate, spdc_state, PlateKind, PrepRecipe, Waveplate};
pub use tomography::fqst;

use crate::error::Result;
use crate::ghz::GhzLabel;
use crate::pauli::PauliString;
use crate::witness::{adapt_observable, lin_i2_observable};

/// Prepares `target` under `noise` and counts each setting.
pub fn simulate(
    target: GhzLabel,
    settings: &[PauliString],
    noise: &NoiseModel,
) -> Result<Vec<CountRecord>> {
    noise.validate()?;
    let rho = prep(target, noise.white_noise_weight)?;
    sample_settings(&rho, settings, noise)
}

/// Settings for the linear witness adapted to any label (conjugation keeps
/// the Pauli strings, so the list is label independent).
pub fn witness_settings() -> Vec<PauliString> {
    lin_i2_observable().settings()
}

/// Adapted linear witness estimated from counts.
pub fn lin_i2_from_counts(records: &[CountRecord], target: GhzLabel) -> Result<Estimate> {
    observable_estimate(records, &adapt_observable(&lin_i2_observable(), target))
}
