//! Noisy mixtures of up to three GHZ basis states, region classification,
//! partial-transpose diagnostics and simplex scans.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ghz::{basis_state, twin_of, GhzLabel};
use crate::qmath::{herm_eigenvalues, partial_transpose, CMatrix, DensityMatrix};
use crate::witness::{
    adapt, best_k_report, Criterion, I2Variant, WitnessReport, BIPARTITION_PAIRS,
};

/// Detection threshold separating positive criteria from round-off.
pub const CLASS_TOL: f64 = 1e-10;
/// `‖ρ^{T_S} − ρ‖_max` below this counts as invariant.
pub const PT_INVARIANCE_TOL: f64 = 1e-10;
pub const SIMPLEX_TOL: f64 = 1e-12;
pub const MAX_COMPONENTS: usize = 3;

/// `Σ wᵢ |GHZ_{labelᵢ}⟩⟨·| + noise · 𝟙/16`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MixtureSpec {
    pub components: Vec<(GhzLabel, f64)>,
    pub noise_weight: f64,
}

impl MixtureSpec {
    pub fn new(components: Vec<(GhzLabel, f64)>, noise_weight: f64) -> Result<Self> {
        let spec = Self {
            components,
            noise_weight,
        };
        spec.validate()?;
        Ok(spec)
    }

    /// `α GHZ_label + (1 − α) 𝟙/16`.
    pub fn noisy(label: GhzLabel, alpha: f64) -> Result<Self> {
        Self::new(vec![(label, alpha)], 1.0 - alpha)
    }

    pub fn validate(&self) -> Result<()> {
        if self.components.len() > MAX_COMPONENTS {
            return Err(Error::InvalidWeights(format!(
                "at most {MAX_COMPONENTS} GHZ components are supported"
            )));
        }
        let weights = self
            .components
            .iter()
            .map(|(_, w)| *w)
            .chain(std::iter::once(self.noise_weight));
        let mut total = 0.0;
        for w in weights {
            if !w.is_finite() || w < 0.0 {
                return Err(Error::InvalidWeights(format!("weight {w} is negative")));
            }
            total += w;
        }
        if (total - 1.0).abs() > SIMPLEX_TOL {
            return Err(Error::InvalidWeights(format!(
                "weights sum to {total}, not 1"
            )));
        }
        Ok(())
    }
}

pub fn mix(spec: &MixtureSpec) -> Result<DensityMatrix> {
    spec.validate()?;
    let mut acc = CMatrix::identity(16).scale_real(spec.noise_weight / 16.0);
    for (label, w) in &spec.components {
        if *w == 0.0 {
            continue;
        }
        acc = &acc + &basis_state(*label).projector().matrix().scale_real(*w);
    }
    DensityMatrix::new(acc)
}

/// Region of the phase diagram, in decreasing precedence.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum RegionClass {
    /// Every criterion `≤ 0` (black).
    #[serde(rename = "UNDETECTED")]
    Undetected,
    /// `I₄ > 0`, biseparable and 3-separable not excluded (yellow).
    #[serde(rename = "NOT4SEP")]
    Not4Sep,
    /// `I₃ > 0` but not GME (orange).
    #[serde(rename = "NOT3SEP")]
    Not3Sep,
    /// `I₂ > 0` (red).
    #[serde(rename = "GME")]
    Gme,
}

impl RegionClass {
    pub fn name(self) -> &'static str {
        match self {
            RegionClass::Gme => "GME",
            RegionClass::Not3Sep => "NOT3SEP",
            RegionClass::Not4Sep => "NOT4SEP",
            RegionClass::Undetected => "UNDETECTED",
        }
    }

    pub fn color(self) -> &'static str {
        match self {
            RegionClass::Gme => "#ff0000",
            RegionClass::Not3Sep => "#ffa500",
            RegionClass::Not4Sep => "#ffff00",
            RegionClass::Undetected => "#000000",
        }
    }

    pub const ALL: [RegionClass; 4] = [
        RegionClass::Gme,
        RegionClass::Not3Sep,
        RegionClass::Not4Sep,
        RegionClass::Undetected,
    ];

    pub fn from_report(r: &WitnessReport) -> Self {
        if r.i2 > CLASS_TOL {
            RegionClass::Gme
        } else if r.i3 > CLASS_TOL {
            RegionClass::Not3Sep
        } else if r.i4 > CLASS_TOL {
            RegionClass::Not4Sep
        } else {
            RegionClass::Undetected
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct PptReport {
    /// `(subset, λ_min(ρ^{T_subset}))` for the seven bipartitions.
    pub min_eigenvalues: Vec<(Vec<usize>, f64)>,
    pub ppt_all: bool,
    pub pt_invariant: bool,
}

impl PptReport {
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalues
            .iter()
            .map(|(_, v)| *v)
            .fold(f64::INFINITY, f64::min)
    }
}

pub fn ppt_report(rho: &DensityMatrix) -> Result<PptReport> {
    if rho.dim() != 16 {
        return Err(Error::DimensionMismatch {
            expected: 16,
            found: rho.dim(),
        });
    }
    let mut min_eigenvalues = Vec::with_capacity(7);
    let mut invariant = true;
    for (subset, _) in BIPARTITION_PAIRS {
        let pt = partial_transpose(rho, subset)?;
        invariant &= pt.max_abs_diff(rho.matrix()) < PT_INVARIANCE_TOL;
        let low = herm_eigenvalues(&pt)?[0];
        min_eigenvalues.push((subset.to_vec(), low));
    }
    let ppt_all = min_eigenvalues.iter().all(|(_, v)| *v >= -CLASS_TOL);
    Ok(PptReport {
        min_eigenvalues,
        ppt_all,
        pt_invariant: invariant,
    })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Classification {
    pub class: RegionClass,
    pub witnesses: WitnessReport,
    pub ppt: PptReport,
}

/// Classifies by the best-adapted normalized `I₂`, then `I₃`, then `I₄`.
pub fn classify(rho: &DensityMatrix) -> Result<Classification> {
    let witnesses = best_k_report(rho, I2Variant::Normalized)?;
    Ok(Classification {
        class: RegionClass::from_report(&witnesses),
        ppt: ppt_report(rho)?,
        witnesses,
    })
}

/// One node of a simplex scan.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ScanPoint {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub noise: f64,
    pub class: RegionClass,
    pub i2: f64,
    pub i3: f64,
    pub i4: f64,
    pub min_pt_eig: f64,
    /// Integer grid coordinates `(i, j, k)` with `α = i/R` etc.
    pub node: (usize, usize, usize),
}

fn scan_node(
    labels: &[GhzLabel],
    node: (usize, usize, usize),
    resolution: usize,
) -> Result<ScanPoint> {
    let r = resolution as f64;
    let (i, j, k) = node;
    let (alpha, beta, gamma) = (i as f64 / r, j as f64 / r, k as f64 / r);
    let noise = (resolution - i - j - k) as f64 / r;
    let weights = [alpha, beta, gamma];
    let components = labels.iter().copied().zip(weights).collect();
    let rho = mix(&MixtureSpec {
        components,
        noise_weight: noise,
    })?;
    let c = classify(&rho)?;
    Ok(ScanPoint {
        alpha,
        beta,
        gamma,
        noise,
        class: c.class,
        i2: c.witnesses.i2,
        i3: c.witnesses.i3,
        i4: c.witnesses.i4,
        min_pt_eig: c.ppt.min_eigenvalue(),
        node,
    })
}

fn check_resolution(resolution: usize) -> Result<()> {
    if resolution < 2 {
        return Err(Error::InvalidParameter(format!(
            "resolution must be at least 2, got {resolution}"
        )));
    }
    Ok(())
}

/// Nodes `(i, j)` with `i + j ≤ R`, `i` outer; `α = i/R`, `β = j/R`.
pub fn scan_binary(a: GhzLabel, b: GhzLabel, resolution: usize) -> Result<Vec<ScanPoint>> {
    check_resolution(resolution)?;
    let nodes: Vec<_> = (0..=resolution)
        .flat_map(|i| (0..=resolution - i).map(move |j| (i, j, 0)))
        .collect();
    nodes
        .into_par_iter()
        .map(|n| scan_node(&[a, b], n, resolution))
        .collect()
}

/// Nodes `(i, j, k)` with `i + j + k ≤ R` over the twin pair `a, b` and the
/// un-twin `c`.
pub fn scan_ternary(
    a: GhzLabel,
    b: GhzLabel,
    c: GhzLabel,
    resolution: usize,
) -> Result<Vec<ScanPoint>> {
    check_resolution(resolution)?;
    if twin_of(a) != b {
        return Err(Error::InvalidParameter(format!(
            "{a} and {b} are not twins"
        )));
    }
    if c == a || c == b {
        return Err(Error::InvalidParameter(format!(
            "{c} must differ from {a} and {b}"
        )));
    }
    let nodes: Vec<_> = (0..=resolution)
        .flat_map(|i| {
            (0..=resolution - i).flat_map(move |j| (0..=resolution - i - j).map(move |k| (i, j, k)))
        })
        .collect();
    nodes
        .into_par_iter()
        .map(|n| scan_node(&[a, b, c], n, resolution))
        .collect()
}

/// Bisection bound on the crossing point.
pub const THRESHOLD_TOL: f64 = 1e-12;

/// The weight `α` at which `criterion` (adapted to `label`) crosses zero on
/// `α GHZ_label + (1 − α) 𝟙/16`.
pub fn noise_threshold(criterion: Criterion, label: GhzLabel) -> Result<f64> {
    let adapted = adapt(criterion, label);
    let f =
        |alpha: f64| -> Result<f64> { adapted.evaluate(&mix(&MixtureSpec::noisy(label, alpha)?)?) };
    let (mut lo, mut hi) = (0.0, 1.0);
    if f(lo)? > 0.0 || f(hi)? <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "{criterion:?} does not change sign on the noise ray of {label}"
        )));
    }
    while hi - lo > THRESHOLD_TOL {
        let mid = 0.5 * (lo + hi);
        if f(mid)? > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(s: &str) -> GhzLabel {
        s.parse().unwrap()
    }

    fn binary(a: &str, wa: f64, b: &str, wb: f64) -> DensityMatrix {
        mix(&MixtureSpec::new(vec![(l(a), wa), (l(b), wb)], 1.0 - wa - wb).unwrap()).unwrap()
    }

    #[test]
    fn mix_examples() {
        let pure = mix(&MixtureSpec::new(vec![(l("0000"), 1.0)], 0.0).unwrap()).unwrap();
        assert_eq!(pure, basis_state(l("0000")).projector());
        let white = mix(&MixtureSpec::new(vec![], 1.0).unwrap()).unwrap();
        assert_eq!(white, DensityMatrix::maximally_mixed(16));
        let twin = binary("0000", 0.5, "0011", 0.5);
        assert!(twin.max_off_diagonal() < 1e-15);
        assert!((twin.diag(1) - 0.5).abs() < 1e-15 && (twin.diag(16) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn spec_rejects_off_simplex() {
        assert!(MixtureSpec::new(vec![(l("0000"), 0.7)], 0.4).is_err());
        assert!(MixtureSpec::new(vec![(l("0000"), 1.2)], -0.2).is_err());
        let four = GhzLabel::all().take(4).map(|x| (x, 0.25)).collect();
        assert!(MixtureSpec::new(four, 0.0).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&basis_state(l("0000")).projector()).unwrap().class,
            RegionClass::Gme
        );
        let twin = classify(&binary("0000", 0.5, "0011", 0.5)).unwrap();
        assert_eq!(twin.class, RegionClass::Undetected);
        assert!(twin.ppt.pt_invariant && twin.ppt.ppt_all);
        let untwin = classify(&binary("0000", 0.5, "1110", 0.5)).unwrap();
        assert_eq!(untwin.class, RegionClass::Not3Sep);
    }

    #[test]
    fn ghz_is_npt_on_every_cut() {
        let r = ppt_report(&basis_state(l("0110")).projector()).unwrap();
        assert!(!r.ppt_all && !r.pt_invariant);
        for (_, v) in &r.min_eigenvalues {
            assert!((v + 0.5).abs() < 1e-12);
        }
    }

    #[test]
    fn binary_scan_examples() {
        let twin = scan_binary(l("0000"), l("0011"), 4).unwrap();
        assert_eq!(twin.len(), 15);
        let at = |pts: &[ScanPoint], i, j| pts.iter().find(|p| p.node == (i, j, 0)).unwrap().class;
        assert_eq!(at(&twin, 4, 0), RegionClass::Gme);
        assert_eq!(at(&twin, 2, 2), RegionClass::Undetected);
        let untwin = scan_binary(l("0000"), l("1110"), 4).unwrap();
        assert_eq!(at(&untwin, 2, 2), RegionClass::Not3Sep);
        assert!(scan_binary(l("0000"), l("0011"), 1).is_err());
    }

    #[test]
    fn ternary_scan_examples() {
        let pts = scan_ternary(l("0000"), l("0011"), l("1110"), 6).unwrap();
        assert_eq!(pts.len(), 7 * 8 * 9 / 6);
        let at = |n| pts.iter().find(|p| p.node == n).unwrap().class;
        assert_eq!(at((6, 0, 0)), RegionClass::Gme);
        assert_eq!(at((3, 3, 0)), RegionClass::Undetected);
        assert!(scan_ternary(l("0000"), l("1110"), l("0011"), 6).is_err());
    }

    #[test]
    fn thresholds() {
        let g = l("0000");
        let cases = [
            (Criterion::I2(I2Variant::Normalized), 7.0 / 15.0),
            (Criterion::I3, 3.0 / 11.0),
            (Criterion::I4, 1.0 / 9.0),
            (Criterion::LinI2, 7.0 / 15.0),
        ];
        for (c, expected) in cases {
            assert!(
                (noise_threshold(c, g).unwrap() - expected).abs() < 1e-9,
                "{c:?}"
            );
        }
    }
}
