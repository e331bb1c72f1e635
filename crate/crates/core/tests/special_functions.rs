mod common;

use approx::assert_relative_eq;
use curie_weiss::special::{
    gamma, log_binomial_half, log_factorial, log_sum_exp, normal_cdf, normal_sf, quartic_moment,
    quartic_tail_integral, quartic_tail_integral_scaled, stirling_bounds, upper_incomplete_gamma,
    upper_incomplete_gamma_scaled, QUARTIC_POWERS,
};

#[test]
fn log_factorial_matches_cumulative_sum() {
    let oracle = common::log_factorials_by_summation(10_000);
    for n in 0..=10_000u64 {
        let want = oracle[n as usize];
        let got = log_factorial(n);
        if n < 2 {
            assert_eq!(got, 0.0);
        } else {
            assert!(
                (got - want).abs() <= 1e-14 * want,
                "n = {n}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn log_factorial_thousand_is_bracketed() {
    assert!(stirling_bounds(1000).unwrap().contains(log_factorial(1000)));
}

#[test]
fn stirling_gap_is_exact_difference() {
    for n in [1u64, 7, 100, 12_345] {
        let b = stirling_bounds(n).unwrap();
        let nf = n as f64;
        assert_relative_eq!(
            b.gap(),
            1.0 / (12.0 * nf) - 1.0 / (12.0 * nf + 1.0),
            max_relative = 1e-9
        );
    }
}

#[test]
fn normal_cdf_matches_erf_series() {
    for i in -300..=300 {
        let x = i as f64 / 100.0;
        let want = 0.5 * (1.0 + common::erf_series(x / std::f64::consts::SQRT_2));
        assert!((normal_cdf(x) - want).abs() <= 1e-14, "x = {x}");
    }
    assert_relative_eq!(
        normal_cdf(1.0),
        0.841_344_746_068_542_9,
        max_relative = 1e-15
    );
    assert!(normal_sf(38.0) > 0.0);
    assert_relative_eq!(
        normal_sf(5.0),
        2.866_515_718_791_939e-7,
        max_relative = 1e-13
    );
}

#[test]
fn upper_gamma_against_regularized_oracle() {
    for s in [0.25, 0.5, 0.75, 1.0, 1.25, 2.5, 3.75] {
        for z in [1e-3, 0.3, 1.0, 2.0, 5.0, 20.0, 60.0] {
            let want = statrs::function::gamma::gamma_ur(s, z) * statrs::function::gamma::gamma(s);
            let got = upper_incomplete_gamma(s, z).unwrap();
            if want > 1e-300 {
                assert!(
                    (got - want).abs() <= 1e-12 * want,
                    "s = {s}, z = {z}: {got} vs {want}"
                );
            }
        }
    }
}

#[test]
fn upper_gamma_closed_forms() {
    for z in [0.1, 1.0, 7.0, 30.0] {
        assert_relative_eq!(
            upper_incomplete_gamma(1.0, z).unwrap(),
            (-z).exp(),
            max_relative = 1e-14
        );
        let erfc = 2.0 * normal_sf((2.0 * z).sqrt());
        assert_relative_eq!(
            upper_incomplete_gamma(0.5, z).unwrap(),
            std::f64::consts::PI.sqrt() * erfc,
            max_relative = 1e-13
        );
        assert_relative_eq!(
            upper_incomplete_gamma_scaled(1.0, z).unwrap(),
            1.0,
            max_relative = 1e-14
        );
    }
    assert_relative_eq!(
        upper_incomplete_gamma(0.75, 0.0).unwrap(),
        gamma(0.75),
        max_relative = 1e-15
    );
    assert!(upper_incomplete_gamma(0.0, 1.0).is_err());
    assert!(upper_incomplete_gamma(1.0, -1.0).is_err());
}

#[test]
fn scaled_gamma_survives_where_plain_underflows() {
    let z = 2000.0;
    assert_eq!(upper_incomplete_gamma(0.25, z).unwrap(), 0.0);
    let scaled = upper_incomplete_gamma_scaled(0.25, z).unwrap();
    // e^z Gamma(s, z) ~ z^{s-1} (1 + (s-1)/z).
    assert_relative_eq!(
        scaled,
        z.powf(-0.75) * (1.0 - 0.75 / z + 0.75 * 1.75 / (z * z)),
        max_relative = 1e-8
    );
}

#[test]
fn quartic_tails_against_quadrature() {
    for &k in &QUARTIC_POWERS {
        for x in [
            f64::NEG_INFINITY,
            -3.0,
            -2.0,
            -0.5,
            0.0,
            0.25,
            1.0,
            2.0,
            3.0,
            5.0,
            8.0,
        ] {
            let got = quartic_tail_integral(k, x).unwrap();
            let want = common::quartic_tail_by_quadrature(k, x);
            assert!(
                (got - want).abs() <= 1e-10 * want,
                "k = {k}, x = {x}: {got} vs {want}"
            );
        }
    }
}

#[test]
fn quartic_moment_recursion() {
    // Integration by parts: M_{k+3} = 3k M_{k-1}.
    let m = |k| quartic_moment(k).unwrap();
    assert_relative_eq!(m(4), 3.0 * m(0), max_relative = 1e-14);
    assert_relative_eq!(m(6), 9.0 * m(2), max_relative = 1e-14);
    assert_relative_eq!(m(8), 45.0 * m(0), max_relative = 1e-14);
    assert_relative_eq!(m(12), 1215.0 * m(0), max_relative = 1e-13);
    assert!(quartic_moment(3).is_err());
}

#[test]
fn scaled_quartic_tail_matches_plain() {
    for &k in &QUARTIC_POWERS {
        for x in [0.0, 1.0, 2.5, 4.0] {
            let plain = quartic_tail_integral(k, x).unwrap();
            let scaled = quartic_tail_integral_scaled(k, x).unwrap() * (-x.powi(4) / 12.0).exp();
            assert_relative_eq!(plain, scaled, max_relative = 1e-13);
        }
    }
    assert!(quartic_tail_integral_scaled(0, -1.0).is_err());
}

#[test]
fn log_sum_exp_handles_extremes() {
    assert_eq!(log_sum_exp(&[]), f64::NEG_INFINITY);
    assert_relative_eq!(
        log_sum_exp(&[1000.0, 1000.0]),
        1000.0 + std::f64::consts::LN_2,
        max_relative = 1e-15
    );
    assert_relative_eq!(
        log_sum_exp(&[-1e4, -1e4 + 1.0]),
        -1e4 + (1.0 + std::f64::consts::E).ln(),
        max_relative = 1e-15
    );
    assert_eq!(log_sum_exp(&[f64::NEG_INFINITY, 0.0]), 0.0);
}

#[test]
fn log_binomial_half_matches_factorials() {
    let lf = common::log_factorials_by_summation(2000);
    for n in [1u64, 2, 17, 200, 2000] {
        for k in (0..=n).step_by((n as usize / 7).max(1)) {
            let want = lf[n as usize]
                - lf[k as usize]
                - lf[(n - k) as usize]
                - n as f64 * std::f64::consts::LN_2;
            let got = log_binomial_half(n, k);
            assert!(
                (got - want).abs() <= 1e-11 * want.abs().max(1.0),
                "n = {n}, k = {k}"
            );
        }
    }
}
