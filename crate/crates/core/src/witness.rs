//! GHZ-optimized k-separability criteria `I₂, I₃, I₄`, the linearized
//! Pauli witness `Ĩ₂`, their local-unitary adaptation to any basis label,
//! and measurement accounting.
//!
//! All index arithmetic below is 1-based: `ρ_{1,16}` is the coherence
//! between `|0000⟩` and `|1111⟩`. Every criterion is positive only on states
//! that are not k-separable.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ghz::GhzLabel;
use crate::pauli::{PauliObservable, PauliString};
use crate::qmath::DensityMatrix;

/// Bipartition `{S | S̄}` → the diagonal pair `(a, b)`, `a + b = 17`, whose
/// geometric mean enters `I₂`.
pub const BIPARTITION_PAIRS: [(&[usize], (usize, usize)); 7] = [
    (&[1], (8, 9)),
    (&[2], (5, 12)),
    (&[3], (3, 14)),
    (&[4], (2, 15)),
    (&[1, 2], (4, 13)),
    (&[1, 3], (6, 11)),
    (&[1, 4], (7, 10)),
];

/// Diagonal sextuples of `I₃`.
pub const I3_SEXTUPLES: [[usize; 6]; 6] = [
    [2, 3, 4, 13, 14, 15],
    [2, 5, 6, 11, 12, 15],
    [2, 7, 8, 9, 10, 15],
    [3, 5, 7, 10, 12, 14],
    [3, 6, 8, 9, 11, 14],
    [4, 5, 8, 9, 12, 13],
];

/// Diagonal octuple of `I₄`.
pub const I4_OCTUPLE: [usize; 8] = [2, 3, 5, 8, 9, 12, 14, 15];

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum I2Variant {
    /// `2(|ρ₁,₁₆| − Σ√(ρ_aa ρ_bb))`.
    #[default]
    Normalized,
    /// `2|ρ₁,₁₆| − Σ√(ρ_aa ρ_bb)`.
    AsPrinted,
}

impl std::str::FromStr for I2Variant {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "normalized" => Ok(Self::Normalized),
            "as-printed" => Ok(Self::AsPrinted),
            _ => Err(Error::InvalidParameter(format!("unknown I2 variant {s:?}"))),
        }
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

// round-off can leave diagonals at −1e-17; roots need them clamped
fn d(rho: &DensityMatrix, i: usize) -> f64 {
    rho.diag(i).max(0.0)
}

fn geometric_mean(rho: &DensityMatrix, idx: &[usize]) -> f64 {
    let prod: f64 = idx.iter().map(|&i| d(rho, i)).product();
    prod.powf(1.0 / idx.len() as f64)
}

fn coherence(rho: &DensityMatrix) -> f64 {
    rho.element(1, 16).norm()
}

/// Sum over the seven bipartition pairs of `√(ρ_aa ρ_bb)`.
fn pair_sum(rho: &DensityMatrix) -> f64 {
    BIPARTITION_PAIRS
        .iter()
        .map(|(_, (a, b))| (d(rho, *a) * d(rho, *b)).sqrt())
        .sum()
}

pub fn eval_i2(rho: &DensityMatrix, variant: I2Variant) -> Result<f64> {
    check_dim(rho)?;
    let c = coherence(rho);
    let s = pair_sum(rho);
    Ok(match variant {
        I2Variant::Normalized => 2.0 * (c - s),
        I2Variant::AsPrinted => 2.0 * c - s,
    })
}

pub fn eval_i3(rho: &DensityMatrix) -> Result<f64> {
    check_dim(rho)?;
    let s: f64 = I3_SEXTUPLES.iter().map(|t| geometric_mean(rho, t)).sum();
    Ok(2.0 * coherence(rho) - s)
}

pub fn eval_i4(rho: &DensityMatrix) -> Result<f64> {
    check_dim(rho)?;
    Ok(2.0 * coherence(rho) - 2.0 * geometric_mean(rho, &I4_OCTUPLE))
}

/// The linear witness `Ĩ₂` optimized for `GHZ₀₀₀₀`.
pub fn lin_i2_observable() -> PauliObservable {
    let eighth = 1.0 / 8.0;
    let xy = [
        (1.0, "XXXX"),
        (-1.0, "YYXX"),
        (-1.0, "YXYX"),
        (-1.0, "XYYX"),
        (-1.0, "XXYY"),
        (-1.0, "XYXY"),
        (-1.0, "YXXY"),
        (1.0, "YYYY"),
    ];
    let z = ["ZZII", "ZIIZ", "ZIZI", "IIZZ", "IZIZ", "IZZI", "ZZZZ"];
    let terms = xy
        .iter()
        .map(|&(c, s)| (c * eighth, s))
        .chain(z.iter().map(|&s| (eighth, s)))
        .map(|(c, s)| (c, s.parse::<PauliString>().expect("static Pauli string")))
        .collect();
    PauliObservable {
        terms,
        constant: -7.0 * eighth,
    }
}

/// Which quantity an adapted evaluator computes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Criterion {
    I2(I2Variant),
    I3,
    I4,
    LinI2,
}

impl Criterion {
    pub fn evaluate(self, rho: &DensityMatrix) -> Result<f64> {
        match self {
            Criterion::I2(v) => eval_i2(rho, v),
            Criterion::I3 => eval_i3(rho),
            Criterion::I4 => eval_i4(rho),
            Criterion::LinI2 => lin_i2_observable().evaluate(rho),
        }
    }
}

/// A criterion made optimal for `GHZ_target` by conjugating the input with
/// the local Pauli product that maps `GHZ_target` back to `GHZ₀₀₀₀`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Adapted {
    pub criterion: Criterion,
    pub target: GhzLabel,
}

pub fn adapt(criterion: Criterion, target: GhzLabel) -> Adapted {
    Adapted { criterion, target }
}

impl Adapted {
    pub fn evaluate(&self, rho: &DensityMatrix) -> Result<f64> {
        match self.criterion {
            Criterion::LinI2 => self.observable().unwrap().evaluate(rho),
            c => c.evaluate(&self.target.local_pauli().conjugate(rho)?),
        }
    }

    /// The adapted linear witness as a Pauli observable (only for `LinI2`).
    pub fn observable(&self) -> Option<PauliObservable> {
        (self.criterion == Criterion::LinI2)
            .then(|| adapt_observable(&lin_i2_observable(), self.target))
    }
}

/// `O ↦ σ O σ` with `σ` the label's generating Pauli product.
pub fn adapt_observable(obs: &PauliObservable, target: GhzLabel) -> PauliObservable {
    obs.conjugated_by(&target.local_pauli())
}

/// `Σ cᵢ⟨σᵢ⟩ + constant` from measured expectation values.
pub fn eval_from_expectations(
    obs: &PauliObservable,
    record: &BTreeMap<PauliString, f64>,
) -> Result<f64> {
    let mut acc = obs.constant;
    for (c, s) in &obs.terms {
        if s.is_identity() {
            acc += c;
            continue;
        }
        let v = record
            .get(s)
            .ok_or_else(|| Error::MissingExpectation(s.to_string()))?;
        acc += c * v;
    }
    Ok(acc)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum MeasurementTask {
    Witness,
    Fqst,
    SingleSetting,
}

/// Outcomes per local setting of four qubits.
pub const OUTCOMES_PER_SETTING: usize = 16;

/// Number of projective measurements the task needs.
pub fn measurement_budget(task: MeasurementTask) -> usize {
    let settings = match task {
        MeasurementTask::Witness => lin_i2_observable().settings().len(),
        MeasurementTask::Fqst => PauliString::all_settings().len(),
        MeasurementTask::SingleSetting => 1,
    };
    settings * OUTCOMES_PER_SETTING
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WitnessReport {
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub lin_i2: f64,
    pub adapted_to: GhzLabel,
    pub variant: I2Variant,
}

/// All four quantities adapted to one label.
pub fn report_adapted(
    rho: &DensityMatrix,
    target: GhzLabel,
    variant: I2Variant,
) -> Result<WitnessReport> {
    check_dim(rho)?;
    let moved = target.local_pauli().conjugate(rho)?;
    Ok(WitnessReport {
        i2: eval_i2(&moved, variant)?,
        i3: eval_i3(&moved)?,
        i4: eval_i4(&moved)?,
        lin_i2: adapt_observable(&lin_i2_observable(), target).evaluate(rho)?,
        adapted_to: target,
        variant,
    })
}

/// Values closer than this are treated as ties when picking `adapted_to`.
pub const TIE_TOL: f64 = 1e-12;

/// Each quantity maximized over adaptation to the sixteen labels.
///
/// `adapted_to` is the label maximizing `i2`; `I₂` cannot tell twins apart,
/// so ties are broken by `lin_i2` and then by the lower label.
pub fn best_k_report(rho: &DensityMatrix, variant: I2Variant) -> Result<WitnessReport> {
    let reports: Vec<WitnessReport> = GhzLabel::all()
        .map(|l| report_adapted(rho, l, variant))
        .collect::<Result<_>>()?;
    let max_of =
        |f: fn(&WitnessReport) -> f64| reports.iter().map(f).fold(f64::NEG_INFINITY, f64::max);
    let mut best = &reports[0];
    for r in &reports[1..] {
        let better_i2 = r.i2 > best.i2 + TIE_TOL;
        let tie_i2 = (r.i2 - best.i2).abs() <= TIE_TOL;
        if better_i2 || (tie_i2 && r.lin_i2 > best.lin_i2 + TIE_TOL) {
            best = r;
        }
    }
    Ok(WitnessReport {
        i2: max_of(|r| r.i2),
        i3: max_of(|r| r.i3),
        i4: max_of(|r| r.i4),
        lin_i2: max_of(|r| r.lin_i2),
        adapted_to: best.adapted_to,
        variant,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ghz::{basis_state, twin_of};
    use crate::qmath::{DensityMatrix, StateVector};

    fn l(s: &str) -> GhzLabel {
        s.parse().unwrap()
    }

    fn equal_mix(a: &str, b: &str) -> DensityMatrix {
        let (pa, pb) = (basis_state(l(a)).projector(), basis_state(l(b)).projector());
        DensityMatrix::convex(&[(0.5, &pa), (0.5, &pb)]).unwrap()
    }

    fn noisy(alpha: f64) -> DensityMatrix {
        let g = basis_state(l("0000")).projector();
        let mm = DensityMatrix::maximally_mixed(16);
        DensityMatrix::convex(&[(alpha, &g), (1.0 - alpha, &mm)]).unwrap()
    }

    #[test]
    fn pair_table_matches_bit_flip_construction() {
        // the pair for cut S holds |0…0⟩ with S flipped and its complement
        for (subset, (a, b)) in BIPARTITION_PAIRS {
            assert_eq!(a + b, 17);
            let flipped = subset.iter().fold(0usize, |acc, s| acc | (1 << (4 - s)));
            assert!(flipped + 1 == a || flipped + 1 == b, "{subset:?}");
        }
    }

    #[test]
    fn i2_examples() {
        let g = basis_state(l("0000")).projector();
        assert!((eval_i2(&g, I2Variant::Normalized).unwrap() - 1.0).abs() < 1e-12);
        assert!((eval_i2(&g, I2Variant::AsPrinted).unwrap() - 1.0).abs() < 1e-12);
        assert!(
            eval_i2(&equal_mix("0000", "0011"), I2Variant::Normalized)
                .unwrap()
                .abs()
                < 1e-15
        );
        let untwin = equal_mix("0000", "1110");
        assert!(eval_i2(&untwin, I2Variant::Normalized).unwrap().abs() < 1e-15);
        assert!((eval_i2(&untwin, I2Variant::AsPrinted).unwrap() - 0.25).abs() < 1e-15);
        let mm = DensityMatrix::maximally_mixed(16);
        assert!((eval_i2(&mm, I2Variant::Normalized).unwrap() + 7.0 / 8.0).abs() < 1e-15);
        assert!(eval_i2(&DensityMatrix::maximally_mixed(4), I2Variant::Normalized).is_err());
    }

    #[test]
    fn i3_examples() {
        let g = basis_state(l("0000")).projector();
        assert!((eval_i3(&g).unwrap() - 1.0).abs() < 1e-12);
        assert!((eval_i3(&equal_mix("0000", "1110")).unwrap() - 0.5).abs() < 1e-12);
        assert!(eval_i3(&equal_mix("0000", "0011")).unwrap().abs() < 1e-15);
    }

    #[test]
    fn i4_examples() {
        let g = basis_state(l("0000")).projector();
        assert!((eval_i4(&g).unwrap() - 1.0).abs() < 1e-12);
        let mm = DensityMatrix::maximally_mixed(16);
        assert!((eval_i4(&mm).unwrap() + 1.0 / 8.0).abs() < 1e-15);
        assert!(eval_i4(&noisy(1.0 / 9.0)).unwrap().abs() < 1e-12);
    }

    #[test]
    fn lin_i2_examples() {
        let w = lin_i2_observable();
        assert_eq!(w.terms.len(), 15);
        let g = basis_state(l("0000")).projector();
        assert!((w.evaluate(&g).unwrap() - 1.0).abs() < 1e-12);
        let mm = DensityMatrix::maximally_mixed(16);
        assert!((w.evaluate(&mm).unwrap() + 7.0 / 8.0).abs() < 1e-15);
        assert!(w.evaluate(&basis_state(l("0011")).projector()).unwrap() < 0.0);
    }

    #[test]
    fn lin_i2_dense_matrix_agrees() {
        let w = lin_i2_observable();
        let rho = equal_mix("0101", "1000");
        let dense = rho.matrix().matmul(&w.matrix()).unwrap().trace().re;
        assert!((w.evaluate(&rho).unwrap() - dense).abs() < 1e-14);
    }

    #[test]
    fn adaptation_examples() {
        let a = adapt(Criterion::LinI2, l("0011"));
        assert!((a.evaluate(&basis_state(l("0011")).projector()).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(
            adapt(Criterion::LinI2, l("0000")).observable().unwrap(),
            lin_i2_observable()
        );
        for b in GhzLabel::all() {
            let rho = basis_state(b).projector();
            for c in [
                Criterion::LinI2,
                Criterion::I2(I2Variant::Normalized),
                Criterion::I3,
                Criterion::I4,
            ] {
                assert!(
                    (adapt(c, b).evaluate(&rho).unwrap() - 1.0).abs() < 1e-12,
                    "{b} {c:?}"
                );
            }
        }
    }

    #[test]
    fn eval_from_expectations_examples() {
        let w = lin_i2_observable();
        let g = basis_state(l("0000")).projector();
        let exact: BTreeMap<PauliString, f64> = w
            .terms
            .iter()
            .map(|(_, s)| (*s, s.expectation(&g).unwrap()))
            .collect();
        assert!((eval_from_expectations(&w, &exact).unwrap() - 1.0).abs() < 1e-12);
        let zeros: BTreeMap<_, _> = exact.keys().map(|k| (*k, 0.0)).collect();
        assert!((eval_from_expectations(&w, &zeros).unwrap() + 0.875).abs() < 1e-15);
        let mut missing = exact.clone();
        missing.remove(&"XXXX".parse().unwrap());
        assert_eq!(
            eval_from_expectations(&w, &missing),
            Err(Error::MissingExpectation("XXXX".into()))
        );
    }

    #[test]
    fn budgets() {
        assert_eq!(measurement_budget(MeasurementTask::Witness), 144);
        assert_eq!(measurement_budget(MeasurementTask::Fqst), 1296);
        assert_eq!(measurement_budget(MeasurementTask::SingleSetting), 16);
    }

    #[test]
    fn best_report_examples() {
        let r = best_k_report(&basis_state(l("1010")).projector(), I2Variant::Normalized).unwrap();
        assert!((r.i2 - 1.0).abs() < 1e-12);
        assert_eq!(r.adapted_to, l("1010"));
        let mm = best_k_report(&DensityMatrix::maximally_mixed(16), I2Variant::Normalized).unwrap();
        assert!(mm.i2 < 0.0 && mm.i3 < 0.0 && mm.i4 < 0.0 && mm.lin_i2 < 0.0);
        let twin = best_k_report(&equal_mix("0000", "0011"), I2Variant::Normalized).unwrap();
        for v in [twin.i2, twin.i3, twin.i4, twin.lin_i2] {
            assert!(v <= 1e-12, "{twin:?}");
        }
        assert_eq!(twin_of(l("1010")), l("1001"));
    }

    #[test]
    fn dicke_fixtures() {
        let dicke = |k: u32| {
            let amps = (0..16usize)
                .map(|i| {
                    if i.count_ones() == k {
                        1.0.into()
                    } else {
                        0.0.into()
                    }
                })
                .collect();
            StateVector::normalized(amps).unwrap().projector()
        };
        for v in [I2Variant::Normalized, I2Variant::AsPrinted] {
            assert!(eval_i2(&dicke(1), v).unwrap().abs() < 1e-12);
        }
        // three pairs at 1/6 each: 0 − 1/2 as printed, 2(0 − 1/2) normalized
        assert!((eval_i2(&dicke(2), I2Variant::AsPrinted).unwrap() + 0.5).abs() < 1e-12);
        assert!((eval_i2(&dicke(2), I2Variant::Normalized).unwrap() + 1.0).abs() < 1e-12);
    }
}
