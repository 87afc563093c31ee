use ghz_twins::ghz::{basis_state, ghz_0000, twin_of, twin_pairs};
use ghz_twins::mixture::{mix, noise_threshold, scan_binary, MixtureSpec, RegionClass};
use ghz_twins::pauli::PauliString;
use ghz_twins::qmath::{
    herm_eigen, kron, partial_trace, partial_transpose, partial_transpose_dims, CMatrix,
    DensityMatrix, StateVector, C64,
};
use ghz_twins::sim::{fqst, sample_settings, NoiseModel};
use ghz_twins::witness::{adapt, eval_i2, lin_i2_observable, Criterion, I2Variant};
use ghz_twins::GhzLabel;
use nalgebra::DMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};

fn complex_vec(n: usize) -> impl Strategy<Value = Vec<C64>> {
    prop::collection::vec((-1.0f64..1.0, -1.0f64..1.0), n)
        .prop_map(|v| v.into_iter().map(|(re, im)| C64::new(re, im)).collect())
}

fn density(rank: usize) -> impl Strategy<Value = DensityMatrix> {
    prop::collection::vec(complex_vec(16), rank).prop_filter_map("zero vector", |vs| {
        let pures: Vec<DensityMatrix> = vs
            .into_iter()
            .map(|v| {
                StateVector::normalized(v)
                    .ok()
                    .map(|s| DensityMatrix::from_pure(&s))
            })
            .collect::<Option<_>>()?;
        let w = 1.0 / pures.len() as f64;
        DensityMatrix::convex(&pures.iter().map(|p| (w, p)).collect::<Vec<_>>()).ok()
    })
}

fn any_density() -> impl Strategy<Value = DensityMatrix> {
    (1usize..=4).prop_flat_map(density)
}

fn hermitian(n: usize) -> impl Strategy<Value = CMatrix> {
    complex_vec(n * n).prop_map(move |v| {
        let a = CMatrix::from_fn(n, n, |i, j| v[i * n + j]);
        a.hermitian_part()
    })
}

fn subset() -> impl Strategy<Value = Vec<usize>> {
    prop::sample::subsequence(vec![1usize, 2, 3, 4], 0..=4)
}

fn label() -> impl Strategy<Value = GhzLabel> {
    (0u8..16).prop_map(|b| GhzLabel::new(b).unwrap())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn partial_transpose_is_an_involution(rho in any_density(), s in subset()) {
        let once = partial_transpose(&rho, &s).unwrap();
        let twice = partial_transpose_dims(&once, &[2, 2, 2, 2], &s).unwrap();
        prop_assert!(twice.max_abs_diff(rho.matrix()) <= 1e-14);
    }

    #[test]
    fn partial_trace_keeps_unit_trace(rho in any_density(), s in subset()) {
        prop_assume!(s.len() < 4);
        let red = partial_trace(&rho, &s).unwrap();
        prop_assert!((red.matrix().trace().re - 1.0).abs() < 1e-12);
        prop_assert_eq!(red.dim(), 1 << (4 - s.len()));
    }

    #[test]
    fn eigen_reconstructs_and_matches_oracle(m in hermitian(16)) {
        let e = herm_eigen(&m).unwrap();
        let sum: f64 = e.values.iter().sum();
        prop_assert!((sum - m.trace().re).abs() < 1e-10);
        prop_assert!(e.reconstruct().max_abs_diff(&m) < 1e-9);
        let oracle = DMatrix::from_fn(16, 16, |i, j| m[(i, j)]);
        let mut want: Vec<f64> = oracle.symmetric_eigen().eigenvalues.iter().copied().collect();
        want.sort_by(f64::total_cmp);
        for (a, b) in e.values.iter().zip(&want) {
            prop_assert!((a - b).abs() < 1e-9, "{} vs {}", a, b);
        }
    }

    #[test]
    fn kron_is_associative(a in hermitian(2), b in hermitian(3), c in hermitian(2)) {
        let left = kron(&kron(&a, &b), &c);
        let right = kron(&a, &kron(&b, &c));
        prop_assert!(left.max_abs_diff(&right) <= 1e-14);
    }

    #[test]
    fn adaptation_is_covariant(rho in any_density(), target in label()) {
        let moved = target.local_pauli().conjugate(&rho).unwrap();
        for c in [Criterion::I2(I2Variant::Normalized), Criterion::I2(I2Variant::AsPrinted), Criterion::I3, Criterion::I4, Criterion::LinI2] {
            let a = adapt(c, target).evaluate(&rho).unwrap();
            let b = c.evaluate(&moved).unwrap();
            prop_assert!((a - b).abs() < 1e-12, "{:?}: {} vs {}", c, a, b);
        }
    }

    #[test]
    fn tomography_output_is_always_a_state(rho in any_density(), seed in any::<u64>(), shots in 1u64..200) {
        let noise = NoiseModel { analytic: false, shots_per_setting: shots, rng_seed: seed, ..NoiseModel::ideal() };
        let recs = sample_settings(&rho, &PauliString::all_settings(), &noise).unwrap();
        let est = fqst(&recs).unwrap();
        prop_assert!(est.eigenvalues()[0] >= -1e-8);
        prop_assert!((est.matrix().trace().re - 1.0).abs() < 1e-10);
        prop_assert!(est.matrix().hermiticity_error() < 1e-10);
    }
}

#[test]
fn basis_states_are_local_images_of_0000() {
    for b in GhzLabel::all() {
        let moved = ghz_0000().evolve(&b.local_pauli().matrix()).unwrap();
        assert!((moved.overlap(&basis_state(b)).unwrap() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn twin_map_is_a_fixed_point_free_involution() {
    let mut seen = std::collections::BTreeSet::new();
    for a in GhzLabel::all() {
        assert_ne!(twin_of(a), a);
        assert_eq!(twin_of(twin_of(a)), a);
        seen.insert(a.min(twin_of(a)));
    }
    assert_eq!(seen.len(), 8);
    assert_eq!(twin_pairs().len(), 8);
}

#[test]
fn nonlinear_i2_dominates_its_linearization() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
    let obs = lin_i2_observable();
    for _ in 0..1000 {
        let k = rng.random_range(1..=3);
        let mut labels: Vec<GhzLabel> = Vec::new();
        while labels.len() < k {
            let l = GhzLabel::new(rng.random_range(0..16)).unwrap();
            if !labels.contains(&l) {
                labels.push(l);
            }
        }
        let mut w: Vec<f64> = (0..=k).map(|_| rng.random::<f64>()).collect();
        let total: f64 = w.iter().sum();
        w.iter_mut().for_each(|x| *x /= total);
        let spec = MixtureSpec::new(
            labels.iter().copied().zip(w.iter().copied()).collect(),
            w[k],
        )
        .unwrap();
        let rho = mix(&spec).unwrap();
        for target in GhzLabel::all() {
            let moved = target.local_pauli().conjugate(&rho).unwrap();
            let i2 = eval_i2(&moved, I2Variant::Normalized).unwrap();
            let lin = obs.evaluate(&moved).unwrap();
            assert!(
                i2 >= lin - 1e-12,
                "{spec:?} adapted to {target}: {i2} < {lin}"
            );
        }
    }
}

#[test]
fn thresholds_nest() {
    let l0 = GhzLabel::new(0).unwrap();
    let t4 = noise_threshold(Criterion::I4, l0).unwrap();
    let t3 = noise_threshold(Criterion::I3, l0).unwrap();
    let t2 = noise_threshold(Criterion::I2(I2Variant::Normalized), l0).unwrap();
    assert!(t4 < t3 && t3 < t2);
}

#[test]
fn classes_never_decrease_along_noise_rays() {
    for b in GhzLabel::all() {
        let mut last = RegionClass::Undetected;
        for i in 0..=100 {
            let alpha = i as f64 / 100.0;
            let rho = mix(&MixtureSpec::noisy(b, alpha).unwrap()).unwrap();
            let class = ghz_twins::mixture::classify(&rho).unwrap().class;
            assert!(
                class >= last,
                "{b} at α = {alpha}: {class:?} after {last:?}"
            );
            last = class;
        }
        assert_eq!(last, RegionClass::Gme);
    }
}

#[test]
fn twin_scans_are_symmetric_with_every_class() {
    for (a, b) in twin_pairs() {
        let r = 40;
        let pts = scan_binary(a, b, r).unwrap();
        let class_at = |i: usize, j: usize| pts.iter().find(|p| p.node == (i, j, 0)).unwrap().class;
        for p in &pts {
            let (i, j, _) = p.node;
            assert_eq!(p.class, class_at(j, i), "{a}/{b} at ({i},{j})");
        }
        let mid = pts.iter().find(|p| p.node == (r / 2, r / 2, 0)).unwrap();
        for v in [mid.i2, mid.i3, mid.i4] {
            assert!(v.abs() <= 1e-10);
        }
    }
    let pts = scan_binary(GhzLabel::new(0).unwrap(), GhzLabel::new(3).unwrap(), 100).unwrap();
    for class in RegionClass::ALL {
        assert!(pts.iter().any(|p| p.class == class), "{class:?} missing");
    }
}
