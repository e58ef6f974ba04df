use num_complex::Complex64 as C64;
use proptest::prelude::*;
use specest::linalg::*;
use specest::moments::*;
use specest::povm::*;
use specest::rng::StreamKey;

fn random_state(d: usize, key: &StreamKey) -> DensityMatrix {
    let mut rng = key.child("state").rng();
    let s = dirichlet_spectrum(d, &mut rng);
    random_density_from_spectrum(&s, d, &mut rng).unwrap()
}

/// Explicit product over all ordered distinct tuples.
fn naive_sum(records: &[PovmRecord], k: usize) -> C64 {
    let n = records.len();
    let d = records[0].dim();
    let ests: Vec<CMat> = records.iter().map(|r| conditioned_estimator(r).into_matrix()).collect();
    let mut idx = vec![0usize; k];
    let mut total = C64::new(0.0, 0.0);
    loop {
        let distinct = (0..k).all(|a| (a + 1..k).all(|b| idx[a] != idx[b]));
        if distinct {
            let mut p = CMat::identity(d);
            for &i in &idx {
                p = p.matmul(&ests[i]);
            }
            total += p.trace();
        }
        let mut s = 0;
        while s < k {
            idx[s] += 1;
            if idx[s] < n {
                break;
            }
            idx[s] = 0;
            s += 1;
        }
        if s == k {
            return total;
        }
    }
}

#[test]
fn engine_matches_naive_enumeration() {
    for (d, n, kmax) in [(2, 9, 5), (3, 8, 6), (4, 7, 5)] {
        let key = StreamKey::root(40 + d as u64);
        let rho = random_state(d, &key);
        let recs = measure_batch(&rho, n, &key.child("m")).unwrap();
        for k in 1..=kmax {
            let fast = distinct_tuple_trace_sum(&recs, k).unwrap();
            let slow = naive_sum(&recs, k);
            let scale = slow.norm().max(1.0);
            assert!((fast - slow).norm() <= 1e-9 * scale, "d={d} n={n} k={k}: {fast} vs {slow}");
        }
    }
}

#[test]
fn engine_matches_naive_with_bottom_records() {
    let d = 3;
    let key = StreamKey::root(77);
    let rho = random_state(d, &key);
    let pi = CMat::outer(UnitVector::basis(d, 0).as_slice());
    let recs = measure_conditioned_batch(&rho, &pi, 9, &key.child("c")).unwrap();
    for k in 1..=5 {
        let fast = distinct_tuple_trace_sum(&recs, k).unwrap();
        let slow = naive_sum(&recs, k);
        assert!((fast - slow).norm() <= 1e-9 * slow.norm().max(1.0));
    }
}

#[test]
fn order_eight_runs() {
    let d = 2;
    let key = StreamKey::root(8);
    let rho = random_state(d, &key);
    let recs = measure_batch(&rho, 10, &key).unwrap();
    let fast = distinct_tuple_trace_sum(&recs, 8).unwrap();
    let slow = naive_sum(&recs, 8);
    assert!((fast - slow).norm() <= 1e-9 * slow.norm().max(1.0));
}

#[test]
fn errors() {
    let rho = DensityMatrix::maximally_mixed(2);
    let recs = measure_batch(&rho, 3, &StreamKey::root(1)).unwrap();
    assert!(matches!(moment_estimate(&recs, 4), Err(specest::Error::OrderTooLarge { .. })));
    assert!(matches!(moment_estimate(&recs, 9), Err(specest::Error::EngineCap { .. })));
    assert!(matches!(moment_estimate(&[], 1), Err(specest::Error::EmptySample)));
    assert!(matches!(variance_bound(3, 2, 2, &[0.5]), Err(specest::Error::VarianceBoundHypothesis { .. })));
}

#[test]
fn first_moment_of_full_records_is_one() {
    let rho = random_state(5, &StreamKey::root(9));
    let recs = measure_batch(&rho, 40, &StreamKey::root(10)).unwrap();
    assert!((moment_estimate(&recs, 1).unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn variance_bound_example() {
    // d=2, n=100, k=2, tr sigma^2 = 1/2:
    // (576/2) * ((4/100)^2 * 2 + (4/100) * 0.5) = 288 * 0.0232 = 6.6816
    let v = variance_bound(100, 2, 2, &[0.5]).unwrap();
    assert!((v - 6.6816).abs() < 1e-12);
}

#[test]
fn renyi_of_pure_state() {
    let s = [1.0, 0.0, 0.0];
    assert!(renyi_entropy(&s, 2).abs() < 1e-15);
    let u = [0.25; 4];
    assert!((renyi_entropy(&u, 3) - 4f64.ln()).abs() < 1e-12);
}

#[test]
fn incomplete_statistic_is_close_to_complete() {
    let key = StreamKey::root(12);
    let rho = random_state(3, &key);
    let recs = measure_batch(&rho, 30, &key.child("m")).unwrap();
    let full = moment_estimate(&recs, 2).unwrap();
    let inc = moment_estimate_incomplete(&recs, 2, 200_000, &key.child("t")).unwrap();
    assert!((full - inc).abs() < 0.15, "{full} vs {inc}");
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn statistic_is_real_and_order_invariant(seed in any::<u64>(), d in 2usize..4, n in 4usize..9) {
        let key = StreamKey::root(seed);
        let rho = random_state(d, &key);
        let mut recs = measure_batch(&rho, n, &key.child("m")).unwrap();
        let k = 3.min(n);
        let a = distinct_tuple_trace_sum(&recs, k).unwrap();
        prop_assert!(a.im.abs() <= 1e-9 * a.re.abs() + 1e-9);
        recs.reverse();
        let b = distinct_tuple_trace_sum(&recs, k).unwrap();
        prop_assert!((a - b).norm() <= 1e-9 * a.norm().max(1.0));
    }
}
