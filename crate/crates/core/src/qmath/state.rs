use serde::{Deserialize, Serialize};

use super::eigen::{herm_eigen, herm_eigenvalues};
use super::matrix::{CMatrix, C64, ZERO};
use crate::error::{Error, Result};

pub const NORM_TOL: f64 = 1e-10;
pub const HERMITIAN_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const PSD_TOL: f64 = 1e-8;

/// Tag written into every serialized state: subsystem 1 is the most
/// significant bit and matrix indices in formulas are 1-based.
pub const CONVENTION: &str = "msb-first-1-based";

/// A ket over a finite computational basis.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    amps: Vec<C64>,
}

impl StateVector {
    /// Takes amplitudes verbatim; they must be finite and normalized.
    pub fn new(amps: Vec<C64>) -> Result<Self> {
        let s = Self::unnormalized(amps)?;
        let n2 = s.norm_sqr();
        if (n2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(n2));
        }
        Ok(s)
    }

    /// Rescales the amplitudes to unit norm.
    pub fn normalized(amps: Vec<C64>) -> Result<Self> {
        let s = Self::unnormalized(amps)?;
        let n = s.norm_sqr().sqrt();
        if n == 0.0 {
            return Err(Error::ZeroNorm);
        }
        Ok(Self {
            amps: s.amps.into_iter().map(|a| a / n).collect(),
        })
    }

    fn unnormalized(amps: Vec<C64>) -> Result<Self> {
        if amps.is_empty() {
            return Err(Error::ZeroNorm);
        }
        if amps.len() > super::MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension {} exceeds {}",
                amps.len(),
                super::MAX_DIM
            )));
        }
        if amps.iter().any(|a| !a.re.is_finite() || !a.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        Ok(Self { amps })
    }

    /// Computational basis vector `|index⟩` (0-based).
    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; dim];
        amps[index] = C64::new(1.0, 0.0);
        Self { amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amps(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Applies a matrix and renormalizes away round-off.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        Self::normalized(u.apply(&self.amps)?)
    }

    /// Strips the global phase so the first nonzero amplitude is real positive.
    pub fn canonical_phase(&self) -> Self {
        let Some(first) = self.amps.iter().find(|a| a.norm() > 1e-12) else {
            return self.clone();
        };
        let phase = first.conj() / first.norm();
        Self {
            amps: self.amps.iter().map(|a| a * phase).collect(),
        }
    }

    /// `|⟨self|other⟩|²`.
    pub fn overlap(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    pub fn projector(&self) -> DensityMatrix {
        DensityMatrix::from_pure(self)
    }
}

/// A validated density operator: Hermitian, unit trace, positive
/// semidefinite (to the module tolerances).
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    m: CMatrix,
}

impl DensityMatrix {
    pub fn new(m: CMatrix) -> Result<Self> {
        if !m.is_square() {
            return Err(Error::DimensionMismatch {
                expected: m.rows(),
                found: m.cols(),
            });
        }
        if m.rows() == 0 {
            return Err(Error::TraceNotOne(0.0));
        }
        if m.rows() > super::MAX_DIM {
            return Err(Error::InvalidParameter(format!(
                "dimension {} exceeds {}",
                m.rows(),
                super::MAX_DIM
            )));
        }
        if !m.is_finite() {
            return Err(Error::NonFinite);
        }
        let herr = m.hermiticity_error();
        if herr > HERMITIAN_TOL {
            return Err(Error::NotHermitian(herr));
        }
        let tr = m.trace().re;
        if (tr - 1.0).abs() > TRACE_TOL {
            return Err(Error::TraceNotOne(tr));
        }
        let lowest = herm_eigenvalues(&m)?[0];
        if lowest < -PSD_TOL {
            return Err(Error::NotPositive(lowest));
        }
        Ok(Self { m })
    }

    pub fn from_pure(psi: &StateVector) -> Self {
        Self {
            m: CMatrix::outer(psi.amps(), psi.amps()),
        }
    }

    /// `𝟙/dim`.
    pub fn maximally_mixed(dim: usize) -> Self {
        Self {
            m: CMatrix::identity(dim).scale_real(1.0 / dim as f64),
        }
    }

    /// Convex combination `Σ wᵢ ρᵢ`; weights must be nonnegative and sum to one.
    pub fn convex(parts: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let Some((_, first)) = parts.first() else {
            return Err(Error::InvalidWeights("empty mixture".into()));
        };
        let dim = first.dim();
        let mut acc = CMatrix::zeros(dim, dim);
        let mut total = 0.0;
        for (w, rho) in parts {
            if *w < 0.0 || !w.is_finite() {
                return Err(Error::InvalidWeights(format!("weight {w} is negative")));
            }
            if rho.dim() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    found: rho.dim(),
                });
            }
            acc = &acc + &rho.m.scale_real(*w);
            total += w;
        }
        if (total - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidWeights(format!("weights sum to {total}")));
        }
        Self::new(acc)
    }

    pub fn dim(&self) -> usize {
        self.m.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.m
    }

    pub fn into_matrix(self) -> CMatrix {
        self.m
    }

    /// Matrix element with 1-based indices, `ρ_{row,col}`.
    pub fn element(&self, row: usize, col: usize) -> C64 {
        self.m[(row - 1, col - 1)]
    }

    /// Real diagonal entry `ρ_{i,i}` (1-based).
    pub fn diag(&self, i: usize) -> f64 {
        self.m[(i - 1, i - 1)].re
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        herm_eigenvalues(&self.m).expect("density matrices are Hermitian")
    }

    /// `ρ ↦ UρU†` for a unitary `U`.
    pub fn evolve(&self, u: &CMatrix) -> Result<Self> {
        Self::new(self.m.conjugate_by(u)?.hermitian_part())
    }

    /// Largest modulus among off-diagonal entries.
    pub fn max_off_diagonal(&self) -> f64 {
        let n = self.dim();
        let mut worst = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    worst = worst.max(self.m[(i, j)].norm());
                }
            }
        }
        worst
    }

    /// Wraps a matrix that the caller guarantees is a valid state.
    pub(crate) fn from_trusted(m: CMatrix) -> Self {
        debug_assert!(m.hermiticity_error() < 1e-9);
        debug_assert!((m.trace().re - 1.0).abs() < 1e-9);
        Self { m }
    }
}

/// `Tr(ρ²)`.
pub fn purity(rho: &DensityMatrix) -> f64 {
    // Tr(ρ²) = Σ_ij |ρ_ij|² for Hermitian ρ
    rho.matrix().as_slice().iter().map(|z| z.norm_sqr()).sum()
}

/// `⟨ψ|ρ|ψ⟩`.
pub fn fidelity_with_pure(rho: &DensityMatrix, psi: &StateVector) -> Result<f64> {
    if rho.dim() != psi.dim() {
        return Err(Error::DimensionMismatch {
            expected: rho.dim(),
            found: psi.dim(),
        });
    }
    let rpsi = rho.matrix().apply(psi.amps())?;
    let f: C64 = psi
        .amps()
        .iter()
        .zip(&rpsi)
        .map(|(a, b)| a.conj() * b)
        .sum();
    Ok(f.re.clamp(0.0, 1.0))
}

/// `½ Σ|λᵢ(a − b)|`.
pub fn trace_distance(a: &DensityMatrix, b: &DensityMatrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            expected: a.dim(),
            found: b.dim(),
        });
    }
    let diff = a.matrix() - b.matrix();
    let e = herm_eigen(&diff)?;
    Ok((0.5 * e.values.iter().map(|l| l.abs()).sum::<f64>()).min(1.0))
}

type Pair = [f64; 2];

#[derive(Serialize, Deserialize)]
struct StateVectorJson {
    dim: usize,
    convention: String,
    amps: Vec<Pair>,
}

#[derive(Serialize, Deserialize)]
struct DensityMatrixJson {
    dim: usize,
    convention: String,
    entries: Vec<Vec<Pair>>,
}

fn to_pair(z: &C64) -> Pair {
    [z.re, z.im]
}

fn from_pair(p: &Pair) -> C64 {
    C64::new(p[0], p[1])
}

fn check_convention(found: &str) -> Result<()> {
    if found != CONVENTION {
        return Err(Error::Json(format!(
            "unsupported convention {found:?}, expected {CONVENTION:?}"
        )));
    }
    Ok(())
}

impl StateVector {
    pub fn to_json_value(&self) -> serde_json::Value {
        serde_json::to_value(StateVectorJson {
            dim: self.dim(),
            convention: CONVENTION.into(),
            amps: self.amps.iter().map(to_pair).collect(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let raw: StateVectorJson =
            serde_json::from_value(v).map_err(|e| Error::Json(e.to_string()))?;
        check_convention(&raw.convention)?;
        if raw.amps.len() != raw.dim {
            return Err(Error::DimensionMismatch {
                expected: raw.dim,
                found: raw.amps.len(),
            });
        }
        Self::new(raw.amps.iter().map(from_pair).collect())
    }
}

impl DensityMatrix {
    pub fn to_json_value(&self) -> serde_json::Value {
        let n = self.dim();
        serde_json::to_value(DensityMatrixJson {
            dim: n,
            convention: CONVENTION.into(),
            entries: (0..n)
                .map(|i| self.m.row(i).iter().map(to_pair).collect())
                .collect(),
        })
        .expect("plain data serializes")
    }

    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        let raw: DensityMatrixJson =
            serde_json::from_value(v).map_err(|e| Error::Json(e.to_string()))?;
        check_convention(&raw.convention)?;
        if raw.entries.len() != raw.dim {
            return Err(Error::DimensionMismatch {
                expected: raw.dim,
                found: raw.entries.len(),
            });
        }
        let rows: Vec<Vec<C64>> = raw
            .entries
            .iter()
            .map(|r| r.iter().map(from_pair).collect())
            .collect();
        Self::new(CMatrix::from_rows(&rows)?)
    }
}

/// Either kind of state found in a JSON state file.
#[derive(Clone, Debug)]
pub enum QuantumState {
    Pure(StateVector),
    Mixed(DensityMatrix),
}

impl QuantumState {
    /// Reads a state object carrying either `amps` or `entries`.
    pub fn from_json_value(v: serde_json::Value) -> Result<Self> {
        if v.get("amps").is_some() {
            StateVector::from_json_value(v).map(Self::Pure)
        } else if v.get("entries").is_some() {
            DensityMatrix::from_json_value(v).map(Self::Mixed)
        } else {
            Err(Error::Json("state object needs `amps` or `entries`".into()))
        }
    }

    pub fn density(&self) -> DensityMatrix {
        match self {
            Self::Pure(psi) => psi.projector(),
            Self::Mixed(rho) => rho.clone(),
        }
    }
}
