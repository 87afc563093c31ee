//! Linear-inversion state tomography with projection onto density matrices.

use crate::error::{Error, Result};
use crate::pauli::PauliString;
use crate::qmath::{herm_eigen, CMatrix, DensityMatrix};

use super::counts::{expectation, CountRecord};

/// `ρ̂ = (1/16) Σ ⟨σ⟩ σ` over all 256 strings, then the nearest density
/// matrix in Frobenius norm: the spectrum is shifted by a common offset and
/// clipped at zero so that it sums to 1.
pub fn fqst(records: &[CountRecord]) -> Result<DensityMatrix> {
    let missing: Vec<String> = PauliString::all_settings()
        .into_iter()
        .filter(|s| !records.iter().any(|r| r.setting == *s))
        .map(|s| s.to_string())
        .collect();
    if !missing.is_empty() {
        return Err(Error::MissingSettings(missing));
    }
    let mut lin = CMatrix::zeros(16, 16);
    for s in PauliString::all() {
        let e = expectation(records, &s)?;
        lin = &lin + &s.matrix().scale_real(e / 16.0);
    }
    let eig = herm_eigen(&lin.hermitian_part())?;
    let shift = simplex_shift(&eig.values);
    let projected = eig.reconstruct_with(|v| (v - shift).max(0.0));
    DensityMatrix::new(projected.hermitian_part())
}

/// Offset `t` with `Σ max(vᵢ − t, 0) = 1`.
pub fn simplex_shift(values: &[f64]) -> f64 {
    let mut sorted = values.to_vec();
    sorted.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut shift = sorted[0] - 1.0;
    for (k, v) in sorted.iter().enumerate() {
        cum += v;
        let t = (cum - 1.0) / (k + 1) as f64;
        if *v > t {
            shift = t;
        }
    }
    shift
}
