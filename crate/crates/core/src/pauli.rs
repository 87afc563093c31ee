//! Four-qubit Pauli strings and real-weighted Pauli observables.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::qmath::{kron_all, pauli_matrices, CMatrix, DensityMatrix, C64};

pub const QUBITS: usize = 4;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Y, Pauli::Z];

    /// Symplectic `(x, z)` bits, with `Y ∝ XZ`.
    pub fn xz(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn from_xz(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    /// Product up to phase.
    pub fn mul_up_to_phase(self, rhs: Pauli) -> Pauli {
        let (a, b) = (self.xz(), rhs.xz());
        Pauli::from_xz(a.0 ^ b.0, a.1 ^ b.1)
    }

    pub fn letter(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c {
            'I' | '1' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Y' => Some(Pauli::Y),
            'Z' => Some(Pauli::Z),
            _ => None,
        }
    }

    pub fn matrix(self) -> CMatrix {
        let [i, x, y, z] = pauli_matrices();
        match self {
            Pauli::I => i,
            Pauli::X => x,
            Pauli::Y => y,
            Pauli::Z => z,
        }
    }

    /// `σ|b⟩ = phase(b)·|b ⊕ x⟩` — returns `phase(b)`.
    fn phase_on(self, bit: usize) -> C64 {
        match (self, bit) {
            (Pauli::I | Pauli::X, _) => C64::new(1.0, 0.0),
            (Pauli::Y, 0) => C64::new(0.0, 1.0),
            (Pauli::Y, _) => C64::new(0.0, -1.0),
            (Pauli::Z, 0) => C64::new(1.0, 0.0),
            (Pauli::Z, _) => C64::new(-1.0, 0.0),
        }
    }
}

/// Tensor product of four single-qubit Paulis; position 0 acts on subsystem 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PauliString(pub [Pauli; QUBITS]);

impl PauliString {
    pub const IDENTITY: PauliString = PauliString([Pauli::I; QUBITS]);

    pub fn letters(&self) -> [Pauli; QUBITS] {
        self.0
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Whether every letter is one of X, Y, Z (a directly measurable setting).
    pub fn is_setting(&self) -> bool {
        self.0.iter().all(|&p| p != Pauli::I)
    }

    /// Replaces identity positions with Z, the setting that measures this
    /// string alongside its Z-refinements.
    pub fn z_refinement(&self) -> PauliString {
        PauliString(self.0.map(|p| if p == Pauli::I { Pauli::Z } else { p }))
    }

    /// True if a measurement in `setting` determines this string's value.
    pub fn covered_by(&self, setting: &PauliString) -> bool {
        self.0
            .iter()
            .zip(&setting.0)
            .all(|(&p, &s)| p == Pauli::I || p == s)
    }

    /// Bitmask (MSB = subsystem 1) of non-identity positions.
    pub fn support_mask(&self) -> usize {
        self.0
            .iter()
            .fold(0, |acc, &p| (acc << 1) | usize::from(p != Pauli::I))
    }

    fn x_mask(&self) -> usize {
        self.0
            .iter()
            .fold(0, |acc, &p| (acc << 1) | usize::from(p.xz().0))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        let anti = self
            .0
            .iter()
            .zip(&other.0)
            .filter(|(&a, &b)| a != Pauli::I && b != Pauli::I && a != b)
            .count();
        anti % 2 == 0
    }

    /// Position-wise product, dropping the global phase.
    pub fn mul_up_to_phase(&self, other: &PauliString) -> PauliString {
        PauliString(std::array::from_fn(|k| {
            self.0[k].mul_up_to_phase(other.0[k])
        }))
    }

    /// Dense 16×16 matrix via Kronecker products.
    pub fn matrix(&self) -> CMatrix {
        let mats: Vec<CMatrix> = self.0.iter().map(|p| p.matrix()).collect();
        kron_all(mats.iter())
    }

    /// `σ|j⟩ = phase_j |j ⊕ x⟩` for every computational index `j`.
    fn action(&self) -> (usize, [C64; 16]) {
        let mut phases = [C64::new(1.0, 0.0); 16];
        for (j, ph) in phases.iter_mut().enumerate() {
            for (k, p) in self.0.iter().enumerate() {
                let bit = (j >> (QUBITS - 1 - k)) & 1;
                *ph *= p.phase_on(bit);
            }
        }
        (self.x_mask(), phases)
    }

    /// `Tr(ρσ)` without forming the dense Pauli matrix.
    pub fn expectation(&self, rho: &DensityMatrix) -> Result<f64> {
        check_dim(rho)?;
        let (x, phases) = self.action();
        let m = rho.matrix();
        let mut acc = C64::new(0.0, 0.0);
        for (j, ph) in phases.iter().enumerate() {
            acc += m[(j, j ^ x)] * ph;
        }
        Ok(acc.re)
    }

    /// `σ ρ σ` computed as a signed permutation.
    pub fn conjugate(&self, rho: &DensityMatrix) -> Result<DensityMatrix> {
        check_dim(rho)?;
        let (x, phases) = self.action();
        let m = rho.matrix();
        // (σρσ†)_{ab} = ph(a⊕x) ρ_{a⊕x, b⊕x} conj(ph(b⊕x))
        let out = CMatrix::from_fn(16, 16, |a, b| {
            phases[a ^ x] * m[(a ^ x, b ^ x)] * phases[b ^ x].conj()
        });
        Ok(DensityMatrix::from_trusted(out))
    }

    /// All 4⁴ strings in lexicographic `I < X < Y < Z` order.
    pub fn all() -> Vec<PauliString> {
        (0..256)
            .map(|n| {
                PauliString(std::array::from_fn(|k| {
                    Pauli::ALL[(n >> (2 * (3 - k))) & 3]
                }))
            })
            .collect()
    }

    /// The 81 strings over `{X, Y, Z}` in lexicographic order.
    pub fn all_settings() -> Vec<PauliString> {
        Self::all().into_iter().filter(|s| s.is_setting()).collect()
    }

    /// Base-3 rank of a setting among [`PauliString::all_settings`].
    pub fn setting_index(&self) -> Option<usize> {
        self.0.iter().try_fold(0, |acc, p| {
            let digit = match p {
                Pauli::X => 0,
                Pauli::Y => 1,
                Pauli::Z => 2,
                Pauli::I => return None,
            };
            Some(acc * 3 + digit)
        })
    }
}

fn check_dim(rho: &DensityMatrix) -> Result<()> {
    if rho.dim() != 16 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            found: rho.dim(),
        });
    }
    Ok(())
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.0 {
            write!(f, "{}", p.letter())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let letters: Vec<Pauli> = s
            .chars()
            .map(Pauli::from_letter)
            .collect::<Option<_>>()
            .ok_or_else(|| Error::InvalidPauli(s.to_string()))?;
        let arr: [Pauli; QUBITS] = letters
            .try_into()
            .map_err(|_| Error::InvalidPauli(s.to_string()))?;
        Ok(PauliString(arr))
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `Σ cᵢ σᵢ + constant·𝟙` with real coefficients.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PauliObservable {
    pub terms: Vec<(f64, PauliString)>,
    pub constant: f64,
}

impl PauliObservable {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        let mut acc = self.constant;
        for (c, s) in &self.terms {
            acc += c * s.expectation(rho)?;
        }
        Ok(acc)
    }

    pub fn matrix(&self) -> CMatrix {
        self.terms.iter().fold(
            CMatrix::identity(16).scale_real(self.constant),
            |acc, (c, s)| &acc + &s.matrix().scale_real(*c),
        )
    }

    /// The observable `σ O σ`: each term keeps its string and flips sign when
    /// it anticommutes with `σ`.
    pub fn conjugated_by(&self, sigma: &PauliString) -> PauliObservable {
        PauliObservable {
            terms: self
                .terms
                .iter()
                .map(|&(c, s)| (if s.commutes_with(sigma) { c } else { -c }, s))
                .collect(),
            constant: self.constant,
        }
    }

    /// Distinct measurement settings needed, with identity positions folded
    /// into Z, in first-appearance order.
    pub fn settings(&self) -> Vec<PauliString> {
        let mut out: Vec<PauliString> = Vec::new();
        for (_, s) in &self.terms {
            let r = s.z_refinement();
            if !out.contains(&r) {
                out.push(r);
            }
        }
        out
    }
}
