use ghz_twins::ghz::{basis_state, GhzLabel};
use ghz_twins::pauli::PauliString;
use ghz_twins::qmath::{trace_distance, DensityMatrix, StateVector, C64};
use ghz_twins::sim::{
    dark_correct, expectation, fqst, lin_i2_from_counts, prep, sample_settings, simulate,
    witness_settings, CountRecord, NoiseModel,
};
use ghz_twins::witness::{adapt_observable, lin_i2_observable};
use rand::{Rng, SeedableRng};

fn sampled(shots: u64, seed: u64, dark: f64, p: f64) -> NoiseModel {
    NoiseModel {
        white_noise_weight: p,
        dark_rate: dark,
        shots_per_setting: shots,
        analytic: false,
        rng_seed: seed,
    }
}

fn random_rho(seed: u64, rank: usize) -> DensityMatrix {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let parts: Vec<DensityMatrix> = (0..rank)
        .map(|_| {
            let a: Vec<C64> = (0..16)
                .map(|_| C64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)))
                .collect();
            DensityMatrix::from_pure(&StateVector::normalized(a).unwrap())
        })
        .collect();
    let w = 1.0 / rank as f64;
    DensityMatrix::convex(&parts.iter().map(|r| (w, r)).collect::<Vec<_>>()).unwrap()
}

#[test]
fn analytic_expectations_match_trace_for_all_strings() {
    for seed in 0..5 {
        let rho = random_rho(seed, 1 + seed as usize % 3);
        let recs =
            sample_settings(&rho, &PauliString::all_settings(), &NoiseModel::ideal()).unwrap();
        for s in PauliString::all() {
            let got = expectation(&recs, &s).unwrap();
            let want = s.expectation(&rho).unwrap();
            assert!((got - want).abs() < 1e-12, "{s}: {got} vs {want}");
        }
    }
}

#[test]
fn analytic_tomography_round_trip_on_fixtures() {
    for seed in 0..4 {
        let rho = random_rho(100 + seed, 1 + seed as usize);
        let recs =
            sample_settings(&rho, &PauliString::all_settings(), &NoiseModel::ideal()).unwrap();
        let back = fqst(&recs).unwrap();
        assert!(trace_distance(&rho, &back).unwrap() < 1e-12);
    }
}

#[test]
fn tomography_output_is_a_state_even_when_sparse() {
    let recs = simulate(
        "0110".parse().unwrap(),
        &PauliString::all_settings(),
        &sampled(50, 3, 1.0, 0.0),
    )
    .unwrap();
    let rho = fqst(&recs).unwrap();
    assert!(rho.eigenvalues()[0] > -1e-10);
    assert!((rho.matrix().trace().re - 1.0).abs() < 1e-10);
}

#[test]
fn witness_from_counts_is_affine_in_white_noise() {
    for label in GhzLabel::all() {
        for p in [0.0, 0.1, 0.37, 0.8] {
            let noise = NoiseModel {
                white_noise_weight: p,
                ..NoiseModel::ideal()
            };
            let recs = simulate(label, &witness_settings(), &noise).unwrap();
            let est = lin_i2_from_counts(&recs, label).unwrap();
            assert!(
                (est.value - (1.0 - 15.0 / 8.0 * p)).abs() < 1e-9,
                "{label} {p}"
            );
        }
    }
}

#[test]
fn propagated_error_matches_seed_spread() {
    let label: GhzLabel = "1011".parse().unwrap();
    let obs = adapt_observable(&lin_i2_observable(), label);
    let rho = prep(label, 0.2).unwrap();
    let (values, errors): (Vec<f64>, Vec<f64>) = (0..200)
        .map(|seed| {
            let recs =
                sample_settings(&rho, &obs.settings(), &sampled(10_000, seed, 0.0, 0.2)).unwrap();
            let e = lin_i2_from_counts(&recs, label).unwrap();
            (e.value, e.std_error)
        })
        .unzip();
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    let sd = (values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    let se = errors.iter().sum::<f64>() / n;
    let ratio = sd / se;
    assert!((1.0 / 1.5..=1.5).contains(&ratio), "sd {sd} se {se}");
}

#[test]
fn dark_correction_moves_estimates_toward_truth() {
    let label: GhzLabel = "0101".parse().unwrap();
    let truth = 1.0 - 15.0 / 8.0 * 0.05;
    let mut wins = 0;
    for seed in 0..100 {
        let raw = simulate(
            label,
            &witness_settings(),
            &sampled(10_000, seed, 20.0, 0.05),
        )
        .unwrap();
        let corrected: Vec<CountRecord> = raw.iter().map(dark_correct).collect();
        let r = lin_i2_from_counts(&raw, label).unwrap().value;
        let c = lin_i2_from_counts(&corrected, label).unwrap().value;
        assert!(r < truth);
        if (c - truth).abs() < (r - truth).abs() {
            wins += 1;
        }
    }
    assert!(wins >= 95, "{wins}");
}

#[test]
fn high_shot_tomography_is_close_to_truth() {
    let truth = DensityMatrix::from_pure(&basis_state("0000".parse().unwrap()));
    let mut worst: f64 = 0.0;
    for seed in 0..20 {
        let recs = sample_settings(
            &truth,
            &PauliString::all_settings(),
            &sampled(1_000_000, seed, 0.0, 0.0),
        )
        .unwrap();
        worst = worst.max(trace_distance(&truth, &fqst(&recs).unwrap()).unwrap());
    }
    assert!(worst < 5e-3, "{worst}");
}

#[test]
fn witness_from_tomography_agrees_with_counts() {
    for (seed, label) in GhzLabel::all().enumerate() {
        let obs = adapt_observable(&lin_i2_observable(), label);
        let noise = sampled(1_000_000, seed as u64, 0.0, 0.1);
        let recs = simulate(label, &PauliString::all_settings(), &noise).unwrap();
        let direct = lin_i2_from_counts(&recs, label).unwrap();
        let from_tomo = obs.evaluate(&fqst(&recs).unwrap()).unwrap();
        // the two estimators are built from the same counts with equal spread
        let combined = 2f64.sqrt() * direct.std_error;
        assert!(
            (from_tomo - direct.value).abs() <= 2.0 * combined,
            "{label}"
        );
    }
}

#[test]
fn witness_z_scores_are_standard() {
    let zs: Vec<f64> = (0..160u64)
        .map(|seed| {
            let label = GhzLabel::new((seed % 16) as u8).unwrap();
            let p = [0.1, 0.3][(seed / 16 % 2) as usize];
            let recs = simulate(
                label,
                &witness_settings(),
                &sampled(100_000, 20_000 + seed, 0.0, p),
            )
            .unwrap();
            let e = lin_i2_from_counts(&recs, label).unwrap();
            (e.value - (1.0 - 15.0 / 8.0 * p)) / e.std_error
        })
        .collect();
    let n = zs.len() as f64;
    let mean = zs.iter().sum::<f64>() / n;
    let sd = (zs.iter().map(|z| (z - mean).powi(2)).sum::<f64>() / (n - 1.0)).sqrt();
    assert!(mean.abs() < 0.3, "mean z {mean}");
    assert!((0.8..1.25).contains(&sd), "sd of z {sd}");
}
