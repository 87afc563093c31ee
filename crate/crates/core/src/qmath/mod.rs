//! Dense complex linear algebra for small Hilbert spaces.

mod eigen;
mod matrix;
mod partial;
mod state;

pub use eigen::{herm_eigen, herm_eigenvalues, HermitianEigen, MAX_SWEEPS, OFF_DIAGONAL_TOL};
pub use matrix::{kron, kron_all, kron_vec, pauli_matrices, CMatrix, C64, I, ONE, ZERO};
pub use partial::{partial_trace, partial_trace_dims, partial_transpose, partial_transpose_dims};
pub use state::{
    fidelity_with_pure, purity, trace_distance, DensityMatrix, QuantumState, StateVector,
    CONVENTION, HERMITIAN_TOL, NORM_TOL, PSD_TOL, TRACE_TOL,
};

/// Largest supported Hilbert-space dimension (eight qubits).
pub const MAX_DIM: usize = 256;
