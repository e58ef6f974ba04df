use num::{BigInt, BigRational, One, ToPrimitive, Zero};
use proptest::prelude::*;
use rand::Rng;
use specest::rng::StreamKey;
use specest::schur::*;

fn diagram(parts: &[usize]) -> YoungDiagram {
    YoungDiagram::new(parts.to_vec()).unwrap()
}

fn rational(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

fn det(mut m: Vec<Vec<BigRational>>) -> BigRational {
    let n = m.len();
    let mut out = BigRational::one();
    for c in 0..n {
        let Some(p) = (c..n).find(|&r| !m[r][c].is_zero()) else {
            return BigRational::zero();
        };
        if p != c {
            m.swap(p, c);
            out = -out;
        }
        out *= m[c][c].clone();
        let pivot = m[c].clone();
        for row in m.iter_mut().skip(c + 1) {
            let f = row[c].clone() / pivot[c].clone();
            for (x, p) in row.iter_mut().zip(&pivot).skip(c) {
                *x -= p.clone() * f.clone();
            }
        }
    }
    out
}

/// s_lambda(x) = det(x_i^(lambda_j + n - j)) / det(x_i^(n - j)) for distinct x.
fn bialternant(lambda: &[usize], x: &[BigRational]) -> BigRational {
    let n = x.len();
    if lambda.len() > n {
        return BigRational::zero();
    }
    let part = |j: usize| lambda.get(j).copied().unwrap_or(0);
    let pow = |b: &BigRational, e: usize| (0..e).fold(BigRational::one(), |acc, _| acc * b.clone());
    let num = (0..n).map(|i| (0..n).map(|j| pow(&x[i], part(j) + n - 1 - j)).collect()).collect();
    let den = (0..n).map(|i| (0..n).map(|j| pow(&x[i], n - 1 - j)).collect()).collect();
    det(num) / det(den)
}

fn ln_rational(q: &BigRational) -> f64 {
    // ln(a / b) through bit lengths keeps huge numerators in range
    let ln_big = |z: &BigInt| {
        let bits = z.bits() as i64;
        let shift = (bits - 60).max(0);
        (z >> shift as usize).to_f64().unwrap().ln() + shift as f64 * std::f64::consts::LN_2
    };
    ln_big(q.numer()) - ln_big(q.denom())
}

#[test]
fn schur_examples() {
    assert!(schur_log(&diagram(&[1]), &[0.2, 0.3, 0.5]).unwrap().abs() < 1e-15);
    assert!((schur_log(&diagram(&[1, 1]), &[0.5, 0.5]).unwrap() - 0.25f64.ln()).abs() < 1e-14);
    assert!((schur_log(&diagram(&[2, 1]), &[0.5, 0.5]).unwrap() - 0.25f64.ln()).abs() < 1e-14);
    assert_eq!(schur_log(&diagram(&[1, 1, 1]), &[0.5, 0.5]).unwrap(), f64::NEG_INFINITY);
    assert_eq!(schur_log(&diagram(&[1, 1]), &[1.0, 0.0, 0.0]).unwrap(), f64::NEG_INFINITY);
    assert_eq!(schur_log(&diagram(&[]), &[0.5, 0.5]).unwrap(), 0.0);
}

#[test]
fn oracle_examples() {
    for n in 1..=3 {
        let h = schur_oracle(&diagram(&[n]), &[0.5, 0.5]).unwrap();
        assert!((h - (n as f64 + 1.0) / 2f64.powi(n as i32)).abs() < 1e-15);
    }
    assert_eq!(schur_oracle(&diagram(&[1, 1, 1]), &[0.5, 0.5]).unwrap(), 0.0);
    assert!(schur_oracle(&diagram(&[9]), &[0.5, 0.5]).is_err());
}

#[test]
fn jacobi_trudi_matches_exact_bialternant() {
    let mut rng = StreamKey::root(1).child("bialternant").rng();
    for d in 2..=5 {
        for _ in 0..4 {
            // distinct rationals k / 97
            let mut nums: Vec<i64> = Vec::new();
            while nums.len() < d {
                let k = rng.random_range(1..97);
                if !nums.contains(&k) {
                    nums.push(k);
                }
            }
            let x: Vec<BigRational> = nums.iter().map(|&k| rational(k, 97)).collect();
            let gamma: Vec<f64> = nums.iter().map(|&k| k as f64 / 97.0).collect();
            for size in 0..=12 {
                for lambda in YoungDiagram::all_of_size(size) {
                    let exact = bialternant(lambda.parts(), &x);
                    let got = schur_log(&lambda, &gamma).unwrap();
                    if exact.is_zero() {
                        assert_eq!(got, f64::NEG_INFINITY);
                    } else {
                        let want = ln_rational(&exact);
                        assert!((got - want).abs() < 1e-12 * want.abs().max(1.0), "{lambda:?}: {got} vs {want}");
                    }
                }
            }
        }
    }
}

#[test]
fn large_diagrams_stay_accurate() {
    let nums = [37i64, 23, 17, 11, 7, 5];
    let x: Vec<BigRational> = nums.iter().map(|&k| rational(k, 100)).collect();
    let gamma: Vec<f64> = nums.iter().map(|&k| k as f64 / 100.0).collect();
    let eval = SchurEvaluator::new(&gamma, 400).unwrap();
    for parts in [vec![150, 60, 30, 10, 5, 1], vec![300], vec![50; 6], vec![100, 100, 1]] {
        let lambda = diagram(&parts);
        let want = ln_rational(&bialternant(&parts, &x));
        let got = eval.log_schur(&lambda).unwrap();
        assert!((got - want).abs() < 1e-9 * want.abs(), "{parts:?}: {got} vs {want}");
    }
}

#[test]
fn fast_path_agrees_with_high_precision() {
    for (k, d, n) in [(3, 18, 120), (4, 16, 149), (4, 24, 300)] {
        let p = spectra_family(k, d).unwrap();
        let e = SchurEvaluator::new(&p.alpha, n + d + 1).unwrap();
        for i in 0..20 {
            let lam = sample_sw(&p.beta, n, &mut StreamKey::root(i).child("agree").rng()).unwrap();
            let fast = e.log_schur(&lam).unwrap();
            let slow = e.log_schur_precise(&lam).unwrap();
            if fast.is_finite() {
                assert!((fast - slow).abs() <= 1e-12 * slow.abs(), "{lam:?}: {fast} vs {slow}");
            } else {
                assert_eq!(slow, f64::NEG_INFINITY);
            }
        }
    }
}

#[test]
fn evaluator_reports_degree_overflow() {
    let eval = SchurEvaluator::new(&[0.5, 0.5], 3).unwrap();
    assert!(eval.log_schur(&diagram(&[5])).is_err());
    assert!(SchurEvaluator::new(&[-0.1, 0.5], 3).is_err());
}

#[test]
fn rsk_examples() {
    assert_eq!(shrsk_shape(&[1, 1, 1], 2).unwrap(), diagram(&[3]));
    assert_eq!(shrsk_shape(&[2, 1], 2).unwrap(), diagram(&[1, 1]));
    assert_eq!(shrsk_shape(&[1, 2, 1], 2).unwrap(), diagram(&[2, 1]));
    assert!(shrsk_shape(&[0], 2).is_err());
    assert!(shrsk_shape(&[3], 2).is_err());
}

#[test]
fn sampler_edge_cases() {
    let mut rng = StreamKey::root(2).rng();
    for _ in 0..100 {
        assert_eq!(sample_sw(&[0.3, 0.7], 1, &mut rng).unwrap(), diagram(&[1]));
        assert_eq!(sample_sw(&[1.0, 0.0, 0.0], 7, &mut rng).unwrap(), diagram(&[7]));
    }
}

#[test]
fn spectra_family_examples() {
    let p = spectra_family(3, 6).unwrap();
    assert_eq!(p.alpha, vec![0.25, 0.25, 0.25, 0.25, 0.0, 0.0]);
    let third = 1.0 / 3.0;
    let twelfth = 1.0 / 12.0;
    let want = [third, third, twelfth, twelfth, twelfth, twelfth];
    assert!(p.beta.iter().zip(&want).all(|(a, b)| (a - b).abs() < 1e-15));
    let cube = |v: &[f64]| v.iter().map(|x| x.powi(3)).sum::<f64>();
    assert!((cube(&p.alpha) - 9.0 / 144.0).abs() < 1e-15);
    assert!((cube(&p.beta) - 11.0 / 144.0).abs() < 1e-15);

    for d in [2, 6, 12, 40] {
        assert!((spectra_family(2, d).unwrap().tv() - 0.5).abs() < 1e-12);
    }

    let p = spectra_family(4, 4).unwrap();
    assert_eq!(p.beta, vec![0.5, 0.25, 0.25, 0.0]);
    let quart = |v: &[f64]| v.iter().map(|x| x.powi(4)).sum::<f64>();
    assert!((quart(&p.alpha) - 17.0 / 256.0).abs() < 1e-15);
    assert!((quart(&p.beta) - 18.0 / 256.0).abs() < 1e-15);

    assert!(spectra_family(3, 8).is_err());
    assert!(spectra_family(5, 10).is_err());
}

#[test]
fn lower_moments_agree_within_each_family() {
    for (k, d) in [(2, 10), (3, 12), (4, 16)] {
        let p = spectra_family(k, d).unwrap();
        for j in 1..k {
            let a: f64 = p.alpha.iter().map(|x| x.powi(j as i32)).sum();
            let b: f64 = p.beta.iter().map(|x| x.powi(j as i32)).sum();
            assert!((a - b).abs() < 1e-14, "k = {k}, j = {j}");
        }
    }
}

#[test]
fn game_ties_give_one_half() {
    let p = spectra_family(2, 6).unwrap();
    let same = SpectrumPair { beta: p.alpha.clone(), ..p.clone() };
    let key = StreamKey::root(3);
    assert_eq!(game_success(&same, 5, 200, &key).unwrap(), 0.5);
    assert_eq!(game_success(&p, 1, 200, &key).unwrap(), 0.5);
}

#[test]
fn game_at_the_reported_copy_count() {
    let p = spectra_family(2, 6).unwrap();
    assert!(game_success(&p, 9, 100_000, &StreamKey::root(4)).unwrap() >= 0.7);
}

#[test]
fn game_is_reproducible() {
    let p = spectra_family(3, 6).unwrap();
    let key = StreamKey::root(5);
    assert_eq!(game_success(&p, 10, 1000, &key).unwrap(), game_success(&p, 10, 1000, &key).unwrap());
}

#[test]
fn min_copies_small_case() {
    let p = spectra_family(2, 6).unwrap();
    let n = min_copies(&p, 0.7, 10_000, &StreamKey::root(6)).unwrap();
    assert!(n.abs_diff(9) <= 2, "{n}");
}

#[test]
fn fit_recovers_a_noiseless_power_law() {
    let pts: Vec<(f64, f64)> = (2..20).map(|d| (d as f64, 2.0 * (d as f64).powf(1.5) + 3.0)).collect();
    let f = power_law_fit(&pts).unwrap();
    assert!((f.a - 2.0).abs() < 1e-3 && (f.c - 1.5).abs() < 1e-3 && (f.b - 3.0).abs() < 1e-3, "{f:?}");
    let g = fixed_exponent_fit(&pts, 1.5).unwrap();
    assert!((g.a - 2.0).abs() < 1e-9 && (g.b - 3.0).abs() < 1e-9 && g.rss < 1e-12);
    assert!(power_law_fit(&pts[..2]).is_err());
}

#[test]
fn fits_of_reference_scans() {
    for (k, c) in [(3, 1.37), (4, 1.53)] {
        let f = power_law_fit(&reference::scan_points(k).unwrap()).unwrap();
        assert!((f.c - c).abs() <= 0.03, "k = {k}: {}", f.c);
    }
    assert_eq!(reference::scan_points(3).unwrap().len(), 15);
    assert_eq!(reference::scan_points(2).unwrap().len(), 22);
    assert_eq!(reference::scan_points(4).unwrap().len(), 10);
}

/// Length of the longest weakly increasing subsequence.
fn longest_weak(word: &[usize]) -> usize {
    let mut best = vec![1; word.len()];
    for i in 0..word.len() {
        for j in 0..i {
            if word[j] <= word[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

/// Length of the longest strictly decreasing subsequence.
fn longest_strict_decreasing(word: &[usize]) -> usize {
    let mut best = vec![1; word.len()];
    for i in 0..word.len() {
        for j in 0..i {
            if word[j] > word[i] {
                best[i] = best[i].max(best[j] + 1);
            }
        }
    }
    best.into_iter().max().unwrap_or(0)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn rsk_shape_obeys_schensted(word in prop::collection::vec(1usize..5, 1..30)) {
        let shape = shrsk_shape(&word, 4).unwrap();
        prop_assert_eq!(shape.size(), word.len());
        prop_assert!(shape.length() <= 4);
        prop_assert_eq!(shape.parts()[0], longest_weak(&word));
        prop_assert_eq!(shape.length(), longest_strict_decreasing(&word));
    }

    #[test]
    fn schur_is_symmetric_and_homogeneous(
        gamma in prop::collection::vec(0.01f64..1.0, 1..5), parts in prop::collection::vec(0usize..5, 1..4), scale in 0.1f64..3.0
    ) {
        let mut parts = parts;
        parts.sort_unstable_by(|a, b| b.cmp(a));
        let lambda = YoungDiagram::new(parts).unwrap();
        let base = schur_log(&lambda, &gamma).unwrap();
        let mut rev = gamma.clone();
        rev.reverse();
        let scaled: Vec<f64> = gamma.iter().map(|x| x * scale).collect();
        if base.is_finite() {
            prop_assert!((schur_log(&lambda, &rev).unwrap() - base).abs() < 1e-12 * base.abs().max(1.0));
            let want = base + lambda.size() as f64 * scale.ln();
            prop_assert!((schur_log(&lambda, &scaled).unwrap() - want).abs() < 1e-12 * want.abs().max(1.0));
        } else {
            prop_assert_eq!(schur_log(&lambda, &rev).unwrap(), f64::NEG_INFINITY);
        }
    }

    #[test]
    fn sampled_shapes_are_valid(seed in any::<u64>(), n in 1usize..40) {
        let gamma = [0.5, 0.3, 0.2];
        let shape = sample_sw(&gamma, n, &mut StreamKey::root(seed).rng()).unwrap();
        prop_assert_eq!(shape.size(), n);
        prop_assert!(shape.length() <= 3);
    }
}
