//! Erasure and Pauli-error analysis against brute-force oracles.

mod common;

use common::{codes, error_oracle, joint_flips, success_oracle};
use concat_codes::fusion::{
    erasure_analysis, error_analysis, Decoding, FusionSpec, MeasurementPattern, SuccessPolynomial,
};
use concat_codes::LogicalBasis;

const TOL: f64 = 1e-12;

#[test]
fn erasure_matches_oracle_for_small_codes() {
    for n in 1..=3 {
        for code in codes(n) {
            for w in 0..1u64 << n {
                for &eta in &[0.7, 0.9, 1.0] {
                    let r = erasure_analysis(&code, &FusionSpec::standard(eta, w, n).unwrap())
                        .unwrap();
                    let sx = success_oracle(&code, LogicalBasis::X, w, eta, 0.5);
                    let sz = success_oracle(&code, LogicalBasis::Z, w, eta, 0.5);
                    assert!((r.success_xx() - sx).abs() <= TOL);
                    assert!((r.success_zz() - sz).abs() <= TOL);
                }
            }
        }
    }
}

#[test]
fn errors_match_oracle_for_small_codes() {
    for n in 1..=3 {
        for code in codes(n) {
            for w in 0..1u64 << n {
                for &eta in &[0.7, 0.9, 1.0] {
                    for &eps in &[0.0, 0.01, 0.05] {
                        for decoding in [Decoding::MaximumLikelihood, Decoding::Uncorrected] {
                            let spec = FusionSpec::standard(eta, w, n).unwrap();
                            let r = error_analysis(&code, &spec, eps, decoding).unwrap();
                            let ox = error_oracle(&code, LogicalBasis::X, w, eta, 0.5, eps, decoding);
                            let oz = error_oracle(&code, LogicalBasis::Z, w, eta, 0.5, eps, decoding);
                            assert!((r.p_error_xx - ox).abs() <= TOL, "{n} {w} {eta} {eps} {decoding:?}");
                            assert!((r.p_error_zz - oz).abs() <= TOL, "{n} {w} {eta} {eps}");
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn joint_flip_law_matches_oracle() {
    for &eps in &[0.0, 0.01, 0.05, 0.3] {
        let d = concat_codes::fusion::joint_flip_distribution(eps).unwrap();
        let o = joint_flips(eps);
        for a in 0..2 {
            for b in 0..2 {
                assert!((d.p[a][b] - o[a][b]).abs() < 1e-15);
            }
        }
        // Both parities flip: 2(1−ε)(ε/3) + 2(ε/3)².
        let both = 2.0 * (1.0 - eps) * eps / 3.0 + 2.0 * (eps / 3.0).powi(2);
        assert!((d.p[1][1] - both).abs() < 1e-15);
    }
}

#[test]
fn patterns_partition_unity_exactly() {
    for n in 0..=8 {
        let mut sum = SuccessPolynomial::zero(n);
        let mut count = 0;
        for p in MeasurementPattern::all(n) {
            sum.add(p.monomial());
            count += 1;
        }
        assert_eq!(count, 3usize.pow(n as u32));
        assert_eq!(sum, SuccessPolynomial::all_patterns(n));
        let mut unit = vec![0.0; n + 1];
        unit[0] = 1.0;
        assert_eq!(sum.eta_squared_coefficients(0.5), unit);
    }
}

#[test]
fn ml_never_worse_than_uncorrected_and_zero_noise_is_exact() {
    for n in 1..=4 {
        for code in codes(n) {
            for w in [0, (1u64 << n) - 1, 0b0101 & ((1 << n) - 1)] {
                let spec = FusionSpec::standard(0.95, w, n).unwrap();
                let zero = error_analysis(&code, &spec, 0.0, Decoding::MaximumLikelihood).unwrap();
                assert_eq!((zero.p_error_xx, zero.p_error_zz), (0.0, 0.0));
                for &eps in &[0.001, 0.02, 0.1] {
                    let ml = error_analysis(&code, &spec, eps, Decoding::MaximumLikelihood).unwrap();
                    let raw = error_analysis(&code, &spec, eps, Decoding::Uncorrected).unwrap();
                    assert!(ml.p_error_xx <= raw.p_error_xx + 1e-15);
                    assert!(ml.p_error_zz <= raw.p_error_zz + 1e-15);
                }
            }
        }
    }
}

#[test]
fn success_is_monotone_in_transmission() {
    for n in 1..=4 {
        for code in codes(n) {
            for w in 0..1u64 << n {
                let mut prev = (0.0, 0.0);
                for k in 0..=20 {
                    let eta = k as f64 / 20.0;
                    let r = erasure_analysis(&code, &FusionSpec::standard(eta, w, n).unwrap())
                        .unwrap();
                    let cur = (r.success_xx(), r.success_zz());
                    assert!(cur.0 + 1e-12 >= prev.0 && cur.1 + 1e-12 >= prev.1);
                    prev = cur;
                }
            }
        }
    }
}

#[test]
fn dual_code_swaps_success_polynomials() {
    for n in 1..=4 {
        for code in codes(n) {
            let dual = code.dual_code().unwrap();
            for w in 0..1u64 << n {
                let a = erasure_analysis(&code, &FusionSpec::standard(0.9, w, n).unwrap()).unwrap();
                let wd = code.dual_failure_basis(w);
                let b = erasure_analysis(&dual, &FusionSpec::standard(0.9, wd, n).unwrap()).unwrap();
                assert_eq!(a.p_success_xx, b.p_success_zz);
                assert_eq!(a.p_success_zz, b.p_success_xx);
            }
        }
    }
}

#[test]
fn invalid_inputs_are_rejected() {
    let code = &codes(2)[0];
    assert!(FusionSpec::new(1.2, 0.5, 0, 2).is_err());
    assert!(FusionSpec::new(0.9, -0.1, 0, 2).is_err());
    assert!(FusionSpec::new(0.9, 0.5, 4, 2).is_err());
    let spec = FusionSpec::standard(0.9, 0, 2).unwrap();
    assert!(error_analysis(code, &spec, 1.5, Decoding::MaximumLikelihood).is_err());
}
