//! Weyl operators, the recursive seed state and the sixteen-element
//! four-qubit GHZ basis with its twin pairing and lattice moves.
//!
//! Labels `b₁b₂b₃b₄` map to states through
//! `(𝟙 ⊗ X^{b₁} ⊗ X^{b₂} ⊗ Ω(b₃,b₄)) |GHZ₀₀₀₀⟩` with
//! `Ω(0,0)=𝟙, Ω(0,1)=Y, Ω(1,0)=X, Ω(1,1)=Z`, followed by fixing the global
//! phase so the first nonzero amplitude is real and positive. This rule
//! reproduces the printed ket of every basis element, e.g.
//! `GHZ₀₁₀₁ = (|RrLl⟩ − |LlRr⟩)/√2` with `R, r ↦ 0` and `L, l ↦ 1`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliString};
use crate::qmath::{kron_all, kron_vec, CMatrix, StateVector, C64, ONE, ZERO};

/// Four-bit basis label `b₁b₂b₃b₄`; `b₁` is the most significant bit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GhzLabel(u8);

impl GhzLabel {
    pub fn new(bits: u8) -> Result<Self> {
        if bits < 16 {
            Ok(Self(bits))
        } else {
            Err(Error::InvalidLabel(format!("{bits}")))
        }
    }

    pub fn bits(self) -> u8 {
        self.0
    }

    /// `b_i` for `i ∈ 1..=4`.
    pub fn bit(self, i: usize) -> bool {
        assert!((1..=4).contains(&i));
        (self.0 >> (4 - i)) & 1 == 1
    }

    /// All sixteen labels in bitstring order.
    pub fn all() -> impl Iterator<Item = GhzLabel> {
        (0..16u8).map(GhzLabel)
    }

    /// The Pauli product `𝟙 ⊗ X^{b₁} ⊗ X^{b₂} ⊗ Ω(b₃,b₄)` that generates this
    /// basis element from `GHZ₀₀₀₀` up to phase.
    pub fn local_pauli(self) -> PauliString {
        let x = |b: bool| if b { Pauli::X } else { Pauli::I };
        let omega = match (self.bit(3), self.bit(4)) {
            (false, false) => Pauli::I,
            (false, true) => Pauli::Y,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Z,
        };
        PauliString([Pauli::I, x(self.bit(1)), x(self.bit(2)), omega])
    }

    /// Inverse of [`GhzLabel::local_pauli`] on the 16 generating products.
    pub fn from_local_pauli(p: &PauliString) -> Option<GhzLabel> {
        GhzLabel::all().find(|l| l.local_pauli() == *p)
    }
}

impl fmt::Display for GhzLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:04b}", self.0)
    }
}

impl FromStr for GhzLabel {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        if s.len() != 4 || !s.chars().all(|c| c == '0' || c == '1') {
            return Err(Error::InvalidLabel(s.to_string()));
        }
        u8::from_str_radix(s, 2)
            .map(GhzLabel)
            .map_err(|_| Error::InvalidLabel(s.to_string()))
    }
}

impl Serialize for GhzLabel {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for GhzLabel {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        String::deserialize(d)?
            .parse()
            .map_err(serde::de::Error::custom)
    }
}

/// `W_{k,l}|j⟩ = ω^{jk}|j+l mod d⟩`, `ω = e^{2πi/d}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct WeylOperator {
    pub k: usize,
    pub l: usize,
    pub d: usize,
}

impl WeylOperator {
    pub fn new(k: usize, l: usize, d: usize) -> Result<Self> {
        if d < 2 || k >= d || l >= d {
            return Err(Error::InvalidWeyl { k, l, d });
        }
        Ok(Self { k, l, d })
    }

    pub fn identity(d: usize) -> Result<Self> {
        Self::new(0, 0, d)
    }

    pub fn matrix(&self) -> CMatrix {
        let d = self.d;
        let mut m = CMatrix::zeros(d, d);
        for j in 0..d {
            let angle = 2.0 * PI * ((j * self.k) % d) as f64 / d as f64;
            m[((j + self.l) % d, j)] = C64::from_polar(1.0, angle);
        }
        m
    }
}

pub fn weyl_matrix(k: usize, l: usize, d: usize) -> Result<CMatrix> {
    Ok(WeylOperator::new(k, l, d)?.matrix())
}

/// `|φₙ⟩ = d^{-1/2} Σᵢ (𝟙^{⊗(n−1)} ⊗ W_{i,i}) |i⟩ ⊗ |φₙ₋₁⟩`, `|φ₁⟩ = |0⟩`.
pub fn seed_state(n: usize, d: usize) -> Result<StateVector> {
    if n < 1 || d < 2 {
        return Err(Error::InvalidParameter(format!(
            "seed state needs n ≥ 1 and d ≥ 2, got n={n}, d={d}"
        )));
    }
    if d.checked_pow(n as u32)
        .is_none_or(|dim| dim > crate::qmath::MAX_DIM)
    {
        return Err(Error::InvalidParameter(format!(
            "{d}^{n} exceeds the dimension cap"
        )));
    }
    let mut phi = vec![ZERO; d];
    phi[0] = ONE;
    let norm = 1.0 / (d as f64).sqrt();
    for m in 2..=n {
        let prev_dim = d.pow(m as u32 - 1);
        let mut next = vec![ZERO; prev_dim * d];
        for i in 0..d {
            let w = weyl_matrix(i, i, d)?;
            let op = CMatrix::identity(d.pow(m as u32 - 2)).kron(&w);
            let moved = op.apply(&phi)?;
            let mut ket_i = vec![ZERO; d];
            ket_i[i] = ONE;
            for (acc, x) in next.iter_mut().zip(kron_vec(&ket_i, &moved)) {
                *acc += x * norm;
            }
        }
        phi = next;
    }
    StateVector::normalized(phi)
}

/// `((𝟙 + iX)/√2)^{⊗n}`, relating the seed to the computational GHZ form.
pub fn basis_change_unitary(n: usize) -> CMatrix {
    let u = CMatrix::from_fn(2, 2, |i, j| {
        if i == j {
            C64::new(FRAC_1_SQRT_2, 0.0)
        } else {
            C64::new(0.0, FRAC_1_SQRT_2)
        }
    });
    kron_all(std::iter::repeat_n(&u, n))
}

/// `(|0000⟩ + |1111⟩)/√2`.
pub fn ghz_0000() -> StateVector {
    let mut amps = vec![ZERO; 16];
    amps[0] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[15] = C64::new(FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps).expect("normalized")
}

pub fn basis_state(label: GhzLabel) -> StateVector {
    ghz_0000()
        .evolve(&label.local_pauli().matrix())
        .expect("Pauli products are unitary")
        .canonical_phase()
}

/// All sixteen basis states in label order.
pub fn full_basis() -> Vec<(GhzLabel, StateVector)> {
    GhzLabel::all().map(|l| (l, basis_state(l))).collect()
}

/// The partner whose equal mixture with `label` is diagonal.
pub fn twin_of(label: GhzLabel) -> GhzLabel {
    GhzLabel(label.0 ^ 0b0011)
}

/// The eight unordered twin pairs, lower label first.
pub fn twin_pairs() -> Vec<(GhzLabel, GhzLabel)> {
    GhzLabel::all()
        .filter(|&l| l < twin_of(l))
        .map(|l| (l, twin_of(l)))
        .collect()
}

/// A single-subsystem Weyl operation on the four-qubit lattice.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LatticeMove {
    pub subsystem: usize,
    pub operator: WeylOperator,
}

impl LatticeMove {
    pub fn new(subsystem: usize, operator: WeylOperator) -> Result<Self> {
        if !(2..=4).contains(&subsystem) {
            return Err(Error::InvalidMoveSubsystem(subsystem));
        }
        if operator.d != 2 {
            return Err(Error::InvalidWeyl {
                k: operator.k,
                l: operator.l,
                d: operator.d,
            });
        }
        Ok(Self {
            subsystem,
            operator,
        })
    }

    /// Moves on subsystem 4 stay inside a quadrant of the lattice.
    pub fn stays_in_quadrant(&self) -> bool {
        self.subsystem == 4
    }

    /// The 16×16 matrix acting on the full register.
    pub fn matrix(&self) -> CMatrix {
        let id = CMatrix::identity(2);
        let w = self.operator.matrix();
        let factors: Vec<&CMatrix> = (1..=4)
            .map(|s| if s == self.subsystem { &w } else { &id })
            .collect();
        kron_all(factors)
    }

    /// The twelve moves: each of the four qubit Weyl operators on 2, 3, 4.
    pub fn canonical() -> Vec<LatticeMove> {
        let mut out = Vec::with_capacity(12);
        for subsystem in 2..=4 {
            for (k, l) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
                let op = WeylOperator::new(k, l, 2).expect("valid qubit indices");
                out.push(LatticeMove::new(subsystem, op).expect("valid subsystem"));
            }
        }
        out
    }
}

/// The basis label reached by applying `mv` to `label`'s state.
pub fn lattice_move(label: GhzLabel, mv: &LatticeMove) -> Result<GhzLabel> {
    let moved = basis_state(label).evolve(&mv.matrix())?;
    identify(&moved).ok_or_else(|| Error::LeavesBasis(label.to_string()))
}

/// Finds the basis label equal to `psi` up to global phase.
pub fn identify(psi: &StateVector) -> Option<GhzLabel> {
    if psi.dim() != 16 {
        return None;
    }
    GhzLabel::all().find(|&l| {
        basis_state(l)
            .overlap(psi)
            .is_ok_and(|f| (f - 1.0).abs() < 1e-10)
    })
}

/// Ket notation with polarisation letters `R/L` on subsystems 1, 3 and OAM
/// letters `r/l` on 2, 4, e.g. `(|RrRr⟩+|LlLl⟩)/√2`.
pub fn ket_notation(psi: &StateVector) -> String {
    assert_eq!(psi.dim(), 16, "ket notation is defined for four qubits");
    let letters = |index: usize| -> String {
        (0..4)
            .map(|k| {
                let bit = (index >> (3 - k)) & 1;
                match (k % 2, bit) {
                    (0, 0) => 'R',
                    (0, _) => 'L',
                    (_, 0) => 'r',
                    _ => 'l',
                }
            })
            .collect()
    };
    let terms: Vec<(usize, C64)> = psi
        .canonical_phase()
        .amps()
        .iter()
        .copied()
        .enumerate()
        .filter(|(_, a)| a.norm() > 1e-12)
        .collect();
    let magnitude = terms.first().map_or(0.0, |(_, a)| a.norm());
    let uniform = terms
        .iter()
        .all(|(_, a)| (a.norm() - magnitude).abs() < 1e-9)
        && (magnitude * (terms.len() as f64).sqrt() - 1.0).abs() < 1e-9;
    let unit_phase = |a: C64| -> Option<&'static str> {
        let u = a / a.norm();
        [("+", ONE), ("-", -ONE), ("+i", C64::i()), ("-i", -C64::i())]
            .into_iter()
            .find(|(_, p)| (u - p).norm() < 1e-9)
            .map(|(s, _)| s)
    };

    if uniform && terms.iter().all(|(_, a)| unit_phase(*a).is_some()) {
        let mut body = String::new();
        for (n, (idx, a)) in terms.iter().enumerate() {
            let sign = unit_phase(*a).unwrap();
            let sign = if n == 0 {
                sign.trim_start_matches('+')
            } else {
                sign
            };
            body.push_str(&format!("{sign}|{}⟩", letters(*idx)));
        }
        if terms.len() == 1 {
            body
        } else {
            format!("({body})/√{}", terms.len())
        }
    } else {
        terms
            .iter()
            .map(|(idx, a)| format!("({:.6}{:+.6}i)|{}⟩", a.re, a.im, letters(*idx)))
            .collect::<Vec<_>>()
            .join(" + ")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qmath::pauli_matrices;

    fn l(s: &str) -> GhzLabel {
        s.parse().unwrap()
    }

    #[test]
    fn weyl_examples() {
        let [id, x, _, z] = pauli_matrices();
        assert_eq!(weyl_matrix(0, 0, 2).unwrap(), id);
        assert_eq!(weyl_matrix(0, 1, 2).unwrap(), x);
        assert!(weyl_matrix(1, 0, 2).unwrap().max_abs_diff(&z) < 1e-15);
        let w11 = weyl_matrix(1, 1, 2).unwrap();
        assert_eq!(w11.apply(&[ONE, ZERO]).unwrap(), vec![ZERO, ONE]);
        assert!(weyl_matrix(2, 0, 2).is_err());
        assert!(weyl_matrix(0, 0, 1).is_err());
    }

    #[test]
    fn weyl_is_unitary_and_has_order_d() {
        for d in 2..=5 {
            for k in 0..d {
                for l_ in 0..d {
                    let w = weyl_matrix(k, l_, d).unwrap();
                    let wwd = w.matmul(&w.adjoint()).unwrap();
                    assert!(wwd.max_abs_diff(&CMatrix::identity(d)) < 1e-12);
                    let mut p = CMatrix::identity(d);
                    for _ in 0..d {
                        p = p.matmul(&w).unwrap();
                    }
                    // W^d is a global phase
                    let ph = p[(0, 0)];
                    assert!((ph.norm() - 1.0).abs() < 1e-12);
                    assert!(p.max_abs_diff(&CMatrix::identity(d).scale(ph)) < 1e-12);
                }
            }
        }
    }

    #[test]
    fn seed_examples() {
        assert_eq!(seed_state(1, 2).unwrap(), StateVector::basis(2, 0));
        let s2 = seed_state(2, 2).unwrap();
        let h = C64::new(FRAC_1_SQRT_2, 0.0);
        let expected = [h, ZERO, ZERO, h];
        assert!(s2
            .amps()
            .iter()
            .zip(expected)
            .all(|(a, b)| (a - b).norm() < 1e-15));
        assert!(seed_state(0, 2).is_err());
    }

    #[test]
    fn seed_after_basis_change_is_ghz_form() {
        for n in 2..=5 {
            let v = seed_state(n, 2)
                .unwrap()
                .evolve(&basis_change_unitary(n))
                .unwrap();
            let nz: Vec<(usize, C64)> = v
                .amps()
                .iter()
                .copied()
                .enumerate()
                .filter(|(_, a)| a.norm() > 1e-12)
                .collect();
            assert_eq!(nz.len(), 2, "n = {n}");
            assert_eq!(nz[0].0 ^ nz[1].0, (1 << n) - 1, "complementary bitstrings");
            for (_, a) in nz {
                assert!((a.norm() - FRAC_1_SQRT_2).abs() < 1e-12);
            }
        }
        // for n = 4 the rotated seed lands on GHZ₀₀₀₁ = (|RrRl⟩ − |LlLr⟩)/√2
        let v = seed_state(4, 2)
            .unwrap()
            .evolve(&basis_change_unitary(4))
            .unwrap();
        assert_eq!(identify(&v), Some(l("0001")));
    }

    #[test]
    fn qutrit_seed_is_normalized() {
        let s = seed_state(3, 3).unwrap();
        assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
        assert_eq!(s.dim(), 27);
    }

    #[test]
    fn printed_basis_kets() {
        assert_eq!(ket_notation(&basis_state(l("0000"))), "(|RrRr⟩+|LlLl⟩)/√2");
        assert_eq!(ket_notation(&basis_state(l("0011"))), "(|RrRr⟩-|LlLl⟩)/√2");
        assert_eq!(ket_notation(&basis_state(l("1110"))), "(|RlLl⟩+|LrRr⟩)/√2");
    }

    #[test]
    fn twin_examples() {
        assert_eq!(twin_of(l("0000")), l("0011"));
        assert_eq!(twin_of(l("0011")), l("0000"));
        assert_eq!(twin_of(l("1101")), l("1110"));
        assert_eq!(twin_pairs().len(), 8);
        for a in GhzLabel::all() {
            assert_ne!(twin_of(a), a);
            assert_eq!(twin_of(twin_of(a)), a);
        }
    }

    #[test]
    fn lattice_examples() {
        let x4 = LatticeMove::new(4, WeylOperator::new(0, 1, 2).unwrap()).unwrap();
        let z4 = LatticeMove::new(4, WeylOperator::new(1, 0, 2).unwrap()).unwrap();
        let id4 = LatticeMove::new(4, WeylOperator::identity(2).unwrap()).unwrap();
        assert_eq!(lattice_move(l("0000"), &x4).unwrap(), l("0010"));
        assert_eq!(lattice_move(l("0000"), &z4).unwrap(), l("0011"));
        assert_eq!(lattice_move(l("0000"), &id4).unwrap(), l("0000"));
        assert!(LatticeMove::new(1, WeylOperator::identity(2).unwrap()).is_err());
        assert!(LatticeMove::new(3, WeylOperator::identity(3).unwrap()).is_err());
    }

    #[test]
    fn quadrant_structure() {
        // quadrant = (b₁, b₂); subsystem 4 keeps it, W_{0,1} on 2 or 3 leaves it
        for a in GhzLabel::all() {
            for mv in LatticeMove::canonical() {
                let b = lattice_move(a, &mv).unwrap();
                let quadrant = |x: GhzLabel| x.bits() >> 2;
                if mv.stays_in_quadrant() {
                    assert_eq!(quadrant(a), quadrant(b));
                } else if mv.operator.l == 1 {
                    assert_ne!(quadrant(a), quadrant(b));
                }
                // applying the same operator twice returns to the start
                assert_eq!(lattice_move(b, &mv).unwrap(), a);
            }
        }
    }

    #[test]
    fn label_parsing() {
        assert!("2222".parse::<GhzLabel>().is_err());
        assert!("000".parse::<GhzLabel>().is_err());
        assert!("+000".parse::<GhzLabel>().is_err());
        assert_eq!(l("1010").to_string(), "1010");
        assert!(l("1000").bit(1) && !l("1000").bit(2));
    }
}
