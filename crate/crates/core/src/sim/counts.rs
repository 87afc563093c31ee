//! Projective counting in local Pauli eigenbases, dark counts, and
//! estimators built on count records.

use std::collections::BTreeMap;
use std::f64::consts::FRAC_1_SQRT_2;

use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rand_distr::{Binomial, Distribution, Poisson};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pauli::{Pauli, PauliObservable, PauliString, QUBITS};
use crate::qmath::{kron_all, CMatrix, DensityMatrix, C64};

pub const OUTCOMES: usize = 16;

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct NoiseModel {
    pub white_noise_weight: f64,
    /// Expected accidentals per outcome bin.
    pub dark_rate: f64,
    pub shots_per_setting: u64,
    /// Expected counts instead of samples.
    pub analytic: bool,
    pub rng_seed: u64,
}

impl NoiseModel {
    pub fn ideal() -> Self {
        Self {
            white_noise_weight: 0.0,
            dark_rate: 0.0,
            shots_per_setting: 1_000_000,
            analytic: true,
            rng_seed: 0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |what: &str| Err(Error::InvalidParameter(what.to_string()));
        if !(0.0..1.0).contains(&self.white_noise_weight) {
            return bad("white noise weight must lie in [0, 1)");
        }
        if !(self.dark_rate >= 0.0 && self.dark_rate.is_finite()) {
            return bad("dark rate must be finite and nonnegative");
        }
        if self.shots_per_setting == 0 {
            return bad("shots per setting must be positive");
        }
        Ok(())
    }
}

/// Counts for one local setting. Outcome bit `k` (MSB = qubit 1) is 0 for the
/// +1 eigenvalue of the setting's letter on qubit `k`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CountRecord {
    pub setting: PauliString,
    #[serde(with = "counts_format")]
    pub counts: [f64; OUTCOMES],
    pub shots: u64,
    pub dark_rate: f64,
    #[serde(default)]
    pub corrected: bool,
}

mod counts_format {
    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    /// Integral values print as JSON integers.
    pub fn serialize<S: Serializer>(c: &[f64; 16], s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeSeq;
        let mut seq = s.serialize_seq(Some(16))?;
        for &v in c {
            if v.fract() == 0.0 && v.abs() < 9.0e15 {
                seq.serialize_element(&(v as i64))?;
            } else {
                seq.serialize_element(&v)?;
            }
        }
        seq.end()
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<[f64; 16], D::Error> {
        let v = Vec::<f64>::deserialize(d)?;
        if v.iter().any(|x| !x.is_finite() || *x < 0.0) {
            return Err(D::Error::custom("counts must be finite and nonnegative"));
        }
        v.try_into()
            .map_err(|v: Vec<f64>| D::Error::custom(format!("expected 16 counts, got {}", v.len())))
    }
}

impl CountRecord {
    pub fn total(&self) -> f64 {
        self.counts.iter().sum()
    }

    pub fn to_json_line(&self) -> String {
        serde_json::to_string(self).expect("plain data")
    }

    pub fn from_json_line(line: &str) -> Result<Self> {
        let r: CountRecord = serde_json::from_str(line).map_err(|e| Error::Json(e.to_string()))?;
        if !r.setting.is_setting() {
            return Err(Error::InvalidPauli(r.setting.to_string()));
        }
        if !(r.dark_rate >= 0.0 && r.dark_rate.is_finite()) {
            return Err(Error::InvalidParameter("dark_rate".into()));
        }
        Ok(r)
    }
}

/// One record per line, in the given order.
pub fn write_jsonl(records: &[CountRecord]) -> String {
    records.iter().map(|r| r.to_json_line() + "\n").collect()
}

/// Parses JSON lines, skipping blank lines; errors name the 1-based line.
pub fn read_jsonl(text: &str) -> Result<Vec<CountRecord>> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(n, l)| {
            CountRecord::from_json_line(l).map_err(|e| Error::Json(format!("line {}: {e}", n + 1)))
        })
        .collect()
}

/// Rows are the `+1` and `−1` eigenvectors, conjugated.
fn eigenbasis_rows(p: Pauli) -> CMatrix {
    let h = FRAC_1_SQRT_2;
    let (o, z) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0));
    let rows = match p {
        Pauli::Z | Pauli::I => vec![vec![o, z], vec![z, o]],
        Pauli::X => vec![
            vec![C64::new(h, 0.0), C64::new(h, 0.0)],
            vec![C64::new(h, 0.0), C64::new(-h, 0.0)],
        ],
        Pauli::Y => vec![
            vec![C64::new(h, 0.0), C64::new(0.0, -h)],
            vec![C64::new(h, 0.0), C64::new(0.0, h)],
        ],
    };
    CMatrix::from_rows(&rows).unwrap()
}

/// Born-rule probabilities of the 16 outcomes of a setting.
pub fn outcome_probabilities(
    rho: &DensityMatrix,
    setting: &PauliString,
) -> Result<[f64; OUTCOMES]> {
    if !setting.is_setting() {
        return Err(Error::InvalidPauli(setting.to_string()));
    }
    if rho.dim() != OUTCOMES {
        return Err(Error::DimensionMismatch {
            expected: OUTCOMES,
            found: rho.dim(),
        });
    }
    let factors: Vec<CMatrix> = setting.0.iter().map(|&p| eigenbasis_rows(p)).collect();
    let v = kron_all(&factors);
    let rotated = rho.matrix().conjugate_by(&v)?;
    Ok(std::array::from_fn(|o| rotated[(o, o)].re.max(0.0)))
}

/// Independent generator for one setting, derived from the master seed.
fn setting_rng(seed: u64, setting: &PauliString) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(setting.setting_index().expect("validated setting") as u64);
    rng
}

pub fn sample_counts(
    rho: &DensityMatrix,
    setting: &PauliString,
    noise: &NoiseModel,
) -> Result<CountRecord> {
    noise.validate()?;
    let probs = outcome_probabilities(rho, setting)?;
    let n = noise.shots_per_setting;
    let counts = if noise.analytic {
        std::array::from_fn(|o| n as f64 * probs[o] + noise.dark_rate)
    } else {
        let mut rng = setting_rng(noise.rng_seed, setting);
        let mut counts = [0.0; OUTCOMES];
        let mut remaining = n;
        let mut mass: f64 = probs.iter().sum();
        for o in 0..OUTCOMES {
            if remaining == 0 || mass <= 0.0 {
                break;
            }
            let k = if o == OUTCOMES - 1 {
                remaining
            } else {
                let q = (probs[o] / mass).clamp(0.0, 1.0);
                Binomial::new(remaining, q)
                    .expect("q in [0,1]")
                    .sample(&mut rng)
            };
            counts[o] = k as f64;
            remaining -= k;
            mass -= probs[o];
        }
        if noise.dark_rate > 0.0 {
            let dark = Poisson::new(noise.dark_rate).expect("positive rate");
            for c in counts.iter_mut() {
                *c += dark.sample(&mut rng);
            }
        }
        counts
    };
    Ok(CountRecord {
        setting: *setting,
        counts,
        shots: n,
        dark_rate: noise.dark_rate,
        corrected: false,
    })
}

/// Samples every setting in parallel; the result follows `settings` order
/// and does not depend on scheduling.
pub fn sample_settings(
    rho: &DensityMatrix,
    settings: &[PauliString],
    noise: &NoiseModel,
) -> Result<Vec<CountRecord>> {
    settings
        .par_iter()
        .map(|s| sample_counts(rho, s, noise))
        .collect()
}

/// Subtracts the expected accidentals from every bin, flooring at zero.
pub fn dark_correct(record: &CountRecord) -> CountRecord {
    CountRecord {
        counts: record.counts.map(|c| (c - record.dark_rate).max(0.0)),
        corrected: true,
        ..record.clone()
    }
}

fn covering_record<'a>(records: &'a [CountRecord], pauli: &PauliString) -> Result<&'a CountRecord> {
    let preferred = pauli.z_refinement();
    records
        .iter()
        .find(|r| r.setting == preferred)
        .or_else(|| records.iter().find(|r| pauli.covered_by(&r.setting)))
        .ok_or_else(|| Error::NoCoveringRecord(pauli.to_string()))
}

/// `±1` value of `pauli` on an outcome of a covering setting.
fn parity(pauli: &PauliString, outcome: usize) -> f64 {
    let mask = pauli.support_mask();
    if (outcome & mask).count_ones().is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

fn record_expectation(record: &CountRecord, pauli: &PauliString) -> Result<f64> {
    let total = record.total();
    if total <= 0.0 {
        return Err(Error::EmptyRecord(record.setting.to_string()));
    }
    let s: f64 = (0..OUTCOMES)
        .map(|o| parity(pauli, o) * record.counts[o])
        .sum();
    Ok(s / total)
}

/// `⟨σ⟩` from the record of `σ`'s Z-refinement, or else the first record
/// whose setting agrees with `σ` on its support.
pub fn expectation(records: &[CountRecord], pauli: &PauliString) -> Result<f64> {
    if pauli.is_identity() {
        return Ok(1.0);
    }
    record_expectation(covering_record(records, pauli)?, pauli)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub value: f64,
    pub std_error: f64,
}

/// Value of a Pauli observable from counts, with a multinomial standard
/// error. Terms read from the same record share one estimator.
pub fn observable_estimate(records: &[CountRecord], obs: &PauliObservable) -> Result<Estimate> {
    let mut groups: BTreeMap<PauliString, (usize, Vec<(f64, PauliString)>)> = BTreeMap::new();
    let mut value = obs.constant;
    for &(c, s) in &obs.terms {
        if s.is_identity() {
            value += c;
            continue;
        }
        let r = covering_record(records, &s)?;
        let idx = records.iter().position(|x| std::ptr::eq(x, r)).unwrap();
        groups
            .entry(r.setting)
            .or_insert((idx, Vec::new()))
            .1
            .push((c, s));
    }
    let mut variance = 0.0;
    for (idx, terms) in groups.values() {
        let r = &records[*idx];
        let total = r.total();
        if total <= 0.0 {
            return Err(Error::EmptyRecord(r.setting.to_string()));
        }
        let f = |o: usize| terms.iter().map(|(c, s)| c * parity(s, o)).sum::<f64>();
        let (mut m1, mut m2) = (0.0, 0.0);
        for o in 0..OUTCOMES {
            let w = r.counts[o] / total;
            let v = f(o);
            m1 += w * v;
            m2 += w * v * v;
        }
        value += m1;
        variance += (m2 - m1 * m1).max(0.0) / total;
    }
    Ok(Estimate {
        value,
        std_error: variance.sqrt(),
    })
}

/// Per-setting, per-outcome weighted sums of several record sets.
pub fn weighted_mix_counts(sets: &[(f64, &[CountRecord])]) -> Result<Vec<CountRecord>> {
    let Some((_, first)) = sets.first() else {
        return Err(Error::InvalidWeights("no record sets".into()));
    };
    let sum: f64 = sets.iter().map(|(w, _)| w).sum();
    if sets.iter().any(|(w, _)| !(w.is_finite() && *w >= 0.0)) || (sum - 1.0).abs() > 1e-12 {
        return Err(Error::InvalidWeights(format!(
            "weights must be nonnegative and sum to 1, got sum {sum}"
        )));
    }
    for (_, set) in sets {
        if set.len() != first.len()
            || set
                .iter()
                .zip(first.iter())
                .any(|(a, b)| a.setting != b.setting)
        {
            return Err(Error::MismatchedSettings);
        }
    }
    Ok((0..first.len())
        .map(|i| {
            let mut counts = [0.0; OUTCOMES];
            let (mut shots, mut dark) = (0.0, 0.0);
            for (w, set) in sets {
                let r = &set[i];
                for (acc, c) in counts.iter_mut().zip(r.counts.iter()) {
                    *acc += w * c;
                }
                shots += w * r.shots as f64;
                dark += w * r.dark_rate;
            }
            CountRecord {
                setting: first[i].setting,
                counts,
                shots: shots.round() as u64,
                dark_rate: dark,
                corrected: sets.iter().all(|(_, s)| s[i].corrected),
            }
        })
        .collect())
}

/// Checks that each qubit is one of the settings' letters.
pub fn validate_setting_letters(s: &str) -> Result<PauliString> {
    let p: PauliString = s.parse()?;
    if p.0.len() != QUBITS || !p.is_setting() {
        return Err(Error::InvalidPauli(s.to_string()));
    }
    Ok(p)
}
