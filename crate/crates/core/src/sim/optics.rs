//! Two photons, each carrying polarisation (R, L) and a three-mode OAM space
//! (m=0, r, l). Photon space index is `3·pol + oam`; the pair index is
//! `6·a + b`.

use std::f64::consts::{FRAC_1_SQRT_2, PI};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ghz::{basis_state, GhzLabel};
use crate::pauli::Pauli;
use crate::qmath::{kron_all, CMatrix, DensityMatrix, StateVector, C64};

pub const PHOTON_DIM: usize = 6;
pub const PAIR_DIM: usize = PHOTON_DIM * PHOTON_DIM;
pub const PAIR_DIMS: [usize; 4] = [2, 3, 2, 3];

const OAM_ZERO: usize = 0;
const OAM_R: usize = 1;
const OAM_L: usize = 2;
const POP_TOL: f64 = 1e-12;

fn pair_index(pa: usize, oa: usize, pb: usize, ob: usize) -> usize {
    (3 * pa + oa) * PHOTON_DIM + 3 * pb + ob
}

fn split(idx: usize) -> (usize, usize, usize, usize) {
    let (a, b) = (idx / PHOTON_DIM, idx % PHOTON_DIM);
    (a / 3, a % 3, b / 3, b % 3)
}

/// `(|R,0⟩ₐ|L,0⟩_b − |L,0⟩ₐ|R,0⟩_b)/√2`.
pub fn spdc_state() -> StateVector {
    let mut amps = vec![C64::new(0.0, 0.0); PAIR_DIM];
    amps[pair_index(0, OAM_ZERO, 1, OAM_ZERO)] = C64::new(FRAC_1_SQRT_2, 0.0);
    amps[pair_index(1, OAM_ZERO, 0, OAM_ZERO)] = C64::new(-FRAC_1_SQRT_2, 0.0);
    StateVector::new(amps).expect("normalized by construction")
}

/// `|R,0⟩ → |L,r⟩`, `|L,0⟩ → |R,l⟩` on photon `'a'` or `'b'`.
pub fn qplate(state: &StateVector, photon: char) -> Result<StateVector> {
    if state.dim() != PAIR_DIM {
        return Err(Error::DimensionMismatch {
            expected: PAIR_DIM,
            found: state.dim(),
        });
    }
    let on_a = match photon {
        'a' => true,
        'b' => false,
        _ => return Err(Error::InvalidParameter(format!("photon {photon:?}"))),
    };
    let mut out = vec![C64::new(0.0, 0.0); PAIR_DIM];
    let mut stray = 0.0;
    for (idx, amp) in state.amps().iter().enumerate() {
        let (pa, oa, pb, ob) = split(idx);
        let (pol, oam) = if on_a { (pa, oa) } else { (pb, ob) };
        if oam != OAM_ZERO {
            stray += amp.norm_sqr();
            continue;
        }
        let (npol, noam) = if pol == 0 { (1, OAM_R) } else { (0, OAM_L) };
        let target = if on_a {
            pair_index(npol, noam, pb, ob)
        } else {
            pair_index(pa, oa, npol, noam)
        };
        out[target] += amp;
    }
    if stray > POP_TOL {
        return Err(Error::QPlatePrecondition(photon));
    }
    StateVector::normalized(out)
}

/// Restricts to the `{r, l}` OAM modes, giving four qubits ordered
/// (pol a, OAM a, pol b, OAM b) with `R, r ↦ 0` and `L, l ↦ 1`.
pub fn project_to_qubits(state: &StateVector) -> Result<StateVector> {
    if state.dim() != PAIR_DIM {
        return Err(Error::DimensionMismatch {
            expected: PAIR_DIM,
            found: state.dim(),
        });
    }
    let mut out = vec![C64::new(0.0, 0.0); 16];
    let mut stray = 0.0;
    for (idx, amp) in state.amps().iter().enumerate() {
        let (pa, oa, pb, ob) = split(idx);
        if oa == OAM_ZERO || ob == OAM_ZERO {
            stray += amp.norm_sqr();
            continue;
        }
        let q = (pa << 3) | ((oa - OAM_R) << 2) | (pb << 1) | (ob - OAM_R);
        out[q] = *amp;
    }
    if stray > POP_TOL {
        return Err(Error::OamLeakage);
    }
    StateVector::normalized(out)
}

/// Source followed by a q-plate on each photon, as four qubits.
pub fn qplate_output() -> StateVector {
    let s = qplate(&qplate(&spdc_state(), 'a').unwrap(), 'b').unwrap();
    project_to_qubits(&s).expect("both photons converted")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum PlateKind {
    Hwp,
    Qwp,
}

impl PlateKind {
    pub fn retardance(self) -> f64 {
        match self {
            PlateKind::Hwp => PI,
            PlateKind::Qwp => PI / 2.0,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Waveplate {
    pub kind: PlateKind,
    /// Fast-axis angle from horizontal, radians.
    pub angle: f64,
}

impl Waveplate {
    pub fn new(kind: PlateKind, angle: f64) -> Self {
        Self { kind, angle }
    }

    /// Jones matrix in the `(|R⟩, |L⟩)` basis, `|R⟩ = (|H⟩ − i|V⟩)/√2`.
    pub fn jones(&self) -> CMatrix {
        let (s, c) = self.angle.sin_cos();
        let half = self.kind.retardance() / 2.0;
        let rot = |s: f64| {
            CMatrix::from_rows(&[
                vec![C64::new(c, 0.0), C64::new(-s, 0.0)],
                vec![C64::new(s, 0.0), C64::new(c, 0.0)],
            ])
            .unwrap()
        };
        let ret = CMatrix::from_rows(&[
            vec![C64::from_polar(1.0, -half), C64::new(0.0, 0.0)],
            vec![C64::new(0.0, 0.0), C64::from_polar(1.0, half)],
        ])
        .unwrap();
        let hv = &(&rot(s) * &ret) * &rot(-s);
        let h = FRAC_1_SQRT_2;
        let to_hv = CMatrix::from_rows(&[
            vec![C64::new(h, 0.0), C64::new(h, 0.0)],
            vec![C64::new(0.0, -h), C64::new(0.0, h)],
        ])
        .unwrap();
        &(&to_hv.adjoint() * &hv) * &to_hv
    }
}

/// Product of the plates in the order light traverses them.
pub fn sequence_matrix(plates: &[Waveplate]) -> CMatrix {
    plates
        .iter()
        .fold(CMatrix::identity(2), |acc, p| &p.jones() * &acc)
}

/// `|Tr(A†B)|/2`, which is 1 exactly when unitaries agree up to phase.
fn phase_free_overlap(a: &CMatrix, b: &CMatrix) -> f64 {
    (&a.adjoint() * b).trace().norm() / 2.0
}

const RECIPE_TOL: f64 = 1e-12;
const ANGLE_STEPS: usize = 8;

/// Shortest plate sequence equal to `target` up to phase, with angles on a
/// π/8 grid in `[0, π)`.
pub fn solve_plates(target: &CMatrix) -> Option<Vec<Waveplate>> {
    use PlateKind::{Hwp, Qwp};
    let angles: Vec<f64> = (0..ANGLE_STEPS)
        .map(|k| k as f64 * PI / ANGLE_STEPS as f64)
        .collect();
    let shapes: [&[PlateKind]; 5] = [&[], &[Hwp], &[Qwp], &[Hwp, Hwp], &[Qwp, Hwp, Qwp]];
    for shape in shapes {
        let n = shape.len();
        for code in 0..ANGLE_STEPS.pow(n as u32) {
            let plates: Vec<Waveplate> = (0..n)
                .map(|i| {
                    let k = (code / ANGLE_STEPS.pow(i as u32)) % ANGLE_STEPS;
                    Waveplate::new(shape[i], angles[k])
                })
                .collect();
            if phase_free_overlap(target, &sequence_matrix(&plates)) > 1.0 - RECIPE_TOL {
                return Some(plates);
            }
        }
    }
    None
}

/// Local operations turning the q-plate output into a chosen basis state.
/// Polarisation qubits get waveplates; OAM qubits get an ideal Pauli.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PrepRecipe {
    pub target: GhzLabel,
    pub photon_a: Vec<Waveplate>,
    pub oam_a: Pauli,
    pub photon_b: Vec<Waveplate>,
    pub oam_b: Pauli,
}

/// Label reached by the bare q-plate output.
pub fn qplate_label() -> GhzLabel {
    GhzLabel::new(0b1111).unwrap()
}

impl PrepRecipe {
    pub fn for_target(target: GhzLabel) -> Self {
        let from = qplate_label().local_pauli();
        let to = target.local_pauli();
        let ops = to.mul_up_to_phase(&from).0;
        let plates = |p: Pauli| solve_plates(&p.matrix()).expect("every Pauli is reachable");
        Self {
            target,
            photon_a: plates(ops[0]),
            oam_a: ops[1],
            photon_b: plates(ops[2]),
            oam_b: ops[3],
        }
    }

    pub fn unitary(&self) -> CMatrix {
        kron_all(&[
            sequence_matrix(&self.photon_a),
            self.oam_a.matrix(),
            sequence_matrix(&self.photon_b),
            self.oam_b.matrix(),
        ])
    }

    /// Runs source, q-plates and this recipe.
    pub fn prepare(&self) -> StateVector {
        qplate_output()
            .evolve(&self.unitary())
            .expect("16-dimensional unitary")
    }
}

/// `(1−p)|ψ⟩⟨ψ| + p·𝟙/16` with `ψ` from the simulated optical chain.
pub fn prep(target: GhzLabel, white_noise_weight: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&white_noise_weight) {
        return Err(Error::InvalidParameter(format!(
            "white noise weight {white_noise_weight}"
        )));
    }
    let pure = DensityMatrix::from_pure(&PrepRecipe::for_target(target).prepare());
    DensityMatrix::convex(&[
        (1.0 - white_noise_weight, &pure),
        (white_noise_weight, &DensityMatrix::maximally_mixed(16)),
    ])
}

/// Fidelity of the recipe output with the ideal basis state.
pub fn recipe_fidelity(target: GhzLabel) -> f64 {
    PrepRecipe::for_target(target)
        .prepare()
        .overlap(&basis_state(target))
        .expect("same dimension")
}
