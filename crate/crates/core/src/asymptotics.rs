//! Limiting objects of the critical case: the quartic densities `p1`, `p2`,
//! the remainder family `r(t, n)`, the limit law `F`, its first-order
//! correction `G`, and the four partial sums that split the exact tail.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::model::{first_index_above, n_three_quarters, LogWeightTable, Regime};
use crate::special::{
    gamma, log_sum_exp, quartic_tail_integral, quartic_tail_integral_scaled, QUARTIC_POWERS,
};

/// `|x|` at which `F` and the tail functionals are treated as saturated.
pub const SATURATION: f64 = 40.0;

fn gaussian_quartic(t: f64) -> f64 {
    (-t.powi(4) / 12.0).exp()
}

/// `p1(t) = exp(-t^4 / 12)`.
pub fn limit_density_p1(t: f64) -> f64 {
    gaussian_quartic(t)
}

/// `p2(t) = (t^2 / 2 - t^6 / 30) exp(-t^4 / 12)`.
pub fn limit_density_p2(t: f64) -> f64 {
    p2_polynomial(t) * gaussian_quartic(t)
}

/// `r(t, n) = (1 + t^4 + t^8 + t^12 + t^14 / sqrt(n)) exp(-t^4 / 12)`.
pub fn remainder_r(t: f64, n: u64) -> f64 {
    r_polynomial(t, n) * gaussian_quartic(t)
}

pub(crate) fn p2_polynomial(t: f64) -> f64 {
    t * t / 2.0 - t.powi(6) / 30.0
}

pub(crate) fn r_polynomial(t: f64, n: u64) -> f64 {
    let t4 = t.powi(4);
    1.0 + t4 + t4 * t4 + t4 * t4 * t4 + t.powi(14) / (n as f64).sqrt()
}

/// `d/dt [q(t) e^{-t^4/12}] = (q'(t) - q(t) t^3 / 3) e^{-t^4/12}`; these return
/// the bracketed factor, whose sign is the sign of the derivative.
pub fn p1_derivative_factor(t: f64) -> f64 {
    -t.powi(3) / 3.0
}

pub fn p2_derivative_factor(t: f64) -> f64 {
    (t - t.powi(5) / 5.0) - p2_polynomial(t) * t.powi(3) / 3.0
}

pub fn r_derivative_factor(t: f64, n: u64) -> f64 {
    let dq = 4.0 * t.powi(3)
        + 8.0 * t.powi(7)
        + 12.0 * t.powi(11)
        + 14.0 * t.powi(13) / (n as f64).sqrt();
    dq - r_polynomial(t, n) * t.powi(3) / 3.0
}

pub fn p1_derivative(t: f64) -> f64 {
    p1_derivative_factor(t) * gaussian_quartic(t)
}

pub fn p2_derivative(t: f64) -> f64 {
    p2_derivative_factor(t) * gaussian_quartic(t)
}

pub fn r_derivative(t: f64, n: u64) -> f64 {
    r_derivative_factor(t, n) * gaussian_quartic(t)
}

/// `P1(x)`, `P2(x)`, `R(x)`: integrals of `p1`, `p2`, `r(., n)` over `[x, inf)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TailFunctionals {
    pub p1_hat: f64,
    pub p2_hat: f64,
    pub r_hat: f64,
}

/// Cached constants of the quartic limit law.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLaw {
    /// `int_R p1`.
    pub c1: f64,
    /// `int_R p2`.
    pub c2: f64,
    /// Full-line moments `int_R t^k p1(t) dt`, indexed by `k` (odd entries unused).
    moments: [f64; 15],
}

impl LimitLaw {
    pub fn new() -> Result<Self> {
        let mut moments = [0.0; 15];
        for k in QUARTIC_POWERS {
            let s = (k as f64 + 1.0) / 4.0;
            moments[k as usize] = 12f64.powf(s) / 2.0 * gamma(s);
        }
        let c1 = moments[0];
        let c2 = moments[2] / 2.0 - moments[6] / 30.0;
        if !(c1 > 0.0) {
            return Err(Error::Domain(format!(
                "normalizer c1 = {c1} is not positive"
            )));
        }
        Ok(Self { c1, c2, moments })
    }

    pub fn moment(&self, k: u32) -> f64 {
        self.moments[k as usize]
    }

    /// `int_x^inf t^k e^{-t^4/12} dt`, reflecting through the cached full moment.
    pub fn monomial_tail(&self, k: u32, x: f64) -> Result<f64> {
        if x == f64::NEG_INFINITY {
            return Ok(self.moments[k as usize]);
        }
        if x < 0.0 {
            return Ok(self.moments[k as usize] - quartic_tail_integral(k, -x)?);
        }
        quartic_tail_integral(k, x)
    }

    pub fn tail_functionals(&self, x: f64, n: u64) -> Result<TailFunctionals> {
        if x >= SATURATION {
            return Ok(TailFunctionals {
                p1_hat: 0.0,
                p2_hat: 0.0,
                r_hat: 0.0,
            });
        }
        let x = if x <= -SATURATION {
            f64::NEG_INFINITY
        } else {
            x
        };
        let m = |k| self.monomial_tail(k, x);
        let p1_hat = m(0)?;
        let p2_hat = m(2)? / 2.0 - m(6)? / 30.0;
        let r_hat = m(0)? + m(4)? + m(8)? + m(12)? + m(14)? / (n as f64).sqrt();
        Ok(TailFunctionals {
            p1_hat,
            p2_hat,
            r_hat,
        })
    }

    /// `1 - F(x)`, evaluated directly so that small tails keep their precision.
    pub fn limit_tail(&self, x: f64) -> f64 {
        if x >= SATURATION {
            return 0.0;
        }
        if x <= -SATURATION {
            return 1.0;
        }
        if x >= 0.0 {
            quartic_tail_integral(0, x).expect("even power") / self.c1
        } else {
            1.0 - quartic_tail_integral(0, -x).expect("even power") / self.c1
        }
    }

    /// `F(x) = int_{-inf}^x p1 / int_R p1`.
    pub fn cdf(&self, x: f64) -> f64 {
        if x <= 0.0 {
            self.limit_tail(-x)
        } else {
            1.0 - self.limit_tail(x)
        }
    }

    /// `G(x) = P2(x) / P1(x) - c2 / c1`.
    pub fn correction(&self, x: f64) -> f64 {
        let ratio = if x >= 0.0 && x.is_finite() {
            // Common factor e^{-x^4/12} cancels; scaled tails never underflow.
            let s = |k| quartic_tail_integral_scaled(k, x).expect("even power, finite x");
            (s(2) / 2.0 - s(6) / 30.0) / s(0)
        } else if x == f64::NEG_INFINITY {
            self.c2 / self.c1
        } else {
            let t = self.tail_functionals(x, 1).expect("finite x");
            t.p2_hat / t.p1_hat
        };
        ratio - self.c2 / self.c1
    }

    /// `(1 - F(x)) (1 + G(x) / sqrt(n))`.
    pub fn corrected_tail(&self, n: u64, x: f64) -> f64 {
        let tail = self.limit_tail(x);
        if tail == 0.0 {
            return 0.0;
        }
        tail * (1.0 + self.correction(x) / (n as f64).sqrt())
    }

    /// `lim sqrt(n) (F_n(x) - F(x)) = (F(x) - 1) G(x)`.
    pub fn second_order_limit(&self, x: f64) -> f64 {
        let tail = self.limit_tail(x);
        if tail == 0.0 {
            return 0.0;
        }
        -tail * self.correction(x)
    }

    /// Unit-constant envelope `(x^12 + n^{1/3}) / n`, defined on `0 <= x <= n^{1/12}`.
    pub fn error_envelope(&self, n: u64, x: f64) -> Result<f64> {
        let max = theorem_range_max(n);
        if !(x >= 0.0 && x <= max) {
            return Err(Error::OutOfRange { x, max });
        }
        Ok(envelope_unchecked(n, x))
    }

    /// Same as [`Self::error_envelope`] without the range restriction.
    pub fn error_envelope_unrestricted(&self, n: u64, x: f64) -> f64 {
        envelope_unchecked(n, x)
    }
}

fn envelope_unchecked(n: u64, x: f64) -> f64 {
    let nf = n as f64;
    (x.powi(12) + nf.cbrt()) / nf
}

/// `n^{1/12}`, the upper edge of the critical moderate-deviation range.
pub fn theorem_range_max(n: u64) -> f64 {
    (n as f64).powf(1.0 / 12.0)
}

/// The four partial sums of `y_k = x_k / y_n`, with
/// `y_n = sqrt(2 / (pi n)) exp(n J(1/2) + 1/2)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecompositionSums {
    /// `|k - n/2| >= n/4`.
    pub a: f64,
    /// `k - n/2 >= n/4`.
    pub a_hat: f64,
    /// `|k - n/2| < n/4`.
    pub b: f64,
    /// `n/4 > k - n/2 > n^{3/4} x / 2`.
    pub b_x: f64,
}

impl DecompositionSums {
    /// `(A_hat + B_x) / (A + B)`.
    pub fn tail(&self) -> f64 {
        (self.a_hat + self.b_x) / (self.a + self.b)
    }
}

/// `log y_k` for every `k` of a critical table.
pub fn log_normalized_weights(table: &LogWeightTable) -> Result<Vec<f64>> {
    if table.params().regime() != Regime::Critical {
        return Err(Error::Domain(
            "decomposition needs beta = 1 and h = 0".into(),
        ));
    }
    let nf = table.n() as f64;
    // log y_n = 0.5 ln(2/(pi n)) + n ln 2 + 1/2; the last two terms are the
    // table's offset at the critical point.
    let shift =
        table.log_offset() - (nf * std::f64::consts::LN_2 + 0.5) - 0.5 * (2.0 / (PI * nf)).ln();
    Ok(table
        .relative_log_weights()
        .iter()
        .map(|r| r + shift)
        .collect())
}

pub fn decomposition(table: &LogWeightTable, x: f64) -> Result<DecompositionSums> {
    if x.is_nan() {
        return Err(Error::Domain("decomposition at NaN".into()));
    }
    let log_y = log_normalized_weights(table)?;
    let n = table.n() as i64;
    let cut = first_index_above((n as f64 + n_three_quarters(n as u64) * x) / 2.0);

    let (mut a, mut a_hat, mut b, mut b_x) = (Vec::new(), Vec::new(), Vec::new(), Vec::new());
    for (k, &ly) in log_y.iter().enumerate() {
        let k = k as i64;
        // 4k - 2n compares 4 (k - n/2) with n in exact integer arithmetic.
        let d = 4 * k - 2 * n;
        if d.abs() >= n {
            a.push(ly);
            if d >= n {
                a_hat.push(ly);
            }
        } else {
            b.push(ly);
            if k >= cut {
                b_x.push(ly);
            }
        }
    }
    let sum = |v: &[f64]| log_sum_exp(v).exp();
    Ok(DecompositionSums {
        a: sum(&a),
        a_hat: sum(&a_hat),
        b: sum(&b),
        b_x: sum(&b_x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::{build_log_weight_table, ModelParams};
    use approx::assert_relative_eq;

    #[test]
    fn densities_at_zero() {
        assert_eq!(limit_density_p1(0.0), 1.0);
        assert_eq!(limit_density_p2(0.0), 0.0);
        for i in -30..=30 {
            let t = i as f64 / 7.0;
            assert_eq!(limit_density_p1(t), limit_density_p1(-t));
            assert_eq!(limit_density_p2(t), limit_density_p2(-t));
        }
    }

    #[test]
    fn remainder_example() {
        let expected = 4.1 * (-1.0f64 / 12.0).exp();
        assert_relative_eq!(remainder_r(1.0, 100), expected, max_relative = 1e-15);
        assert!((remainder_r(1.0, 100) - 3.772).abs() < 1e-3);
    }

    #[test]
    fn limit_law_basics() {
        let law = LimitLaw::new().unwrap();
        assert_relative_eq!(
            law.c1,
            2.0 * 12f64.powf(0.25) * gamma(1.25),
            max_relative = 1e-15
        );
        assert_eq!(law.cdf(0.0), 0.5);
        assert!(law.correction(0.0).abs() < 1e-15);
        assert_eq!(law.corrected_tail(1000, 0.0), 0.5);
        assert!(law.second_order_limit(0.0).abs() < 1e-15);
        assert_eq!(law.cdf(-SATURATION), 0.0);
        assert_eq!(law.cdf(SATURATION), 1.0);
        let t = law.tail_functionals(0.0, 10).unwrap();
        assert_relative_eq!(t.p1_hat, law.c1 / 2.0, max_relative = 1e-14);
        assert_relative_eq!(t.p2_hat, law.c2 / 2.0, max_relative = 1e-13);
        let full = law.tail_functionals(-SATURATION, 10).unwrap();
        assert_eq!(full.p1_hat, law.c1);
    }

    #[test]
    fn cdf_monotone_and_symmetric() {
        let law = LimitLaw::new().unwrap();
        let mut prev = -1.0;
        for i in -30..=30 {
            let x = i as f64 / 10.0;
            let f = law.cdf(x);
            assert!(f > prev);
            prev = f;
            assert!((law.cdf(-x) + f - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn correction_far_in_the_tail_is_finite() {
        let law = LimitLaw::new().unwrap();
        for x in [5.0, 12.0, 39.0] {
            let g = law.correction(x);
            assert!(g.is_finite() && g < 0.0, "G({x}) = {g}");
        }
        assert!(law.second_order_limit(5.0).abs() < 1e-20);
    }

    #[test]
    fn correction_continuous_through_zero() {
        let law = LimitLaw::new().unwrap();
        let left = law.correction(-1e-9);
        let right = law.correction(1e-9);
        assert!((left - right).abs() < 1e-8);
    }

    #[test]
    fn envelope_values() {
        let law = LimitLaw::new().unwrap();
        assert_relative_eq!(
            law.error_envelope(1_000_000, 0.0).unwrap(),
            1e-4,
            max_relative = 1e-12
        );
        let n = 4096u64;
        let edge = theorem_range_max(n);
        assert_relative_eq!(
            law.error_envelope(n, edge).unwrap(),
            1.0 + (n as f64).powf(-2.0 / 3.0),
            max_relative = 1e-12
        );
        assert!(matches!(
            law.error_envelope(n, edge * 1.01),
            Err(Error::OutOfRange { .. })
        ));
        assert!(law.error_envelope(n, -0.1).is_err());
        assert!(law.error_envelope_unrestricted(n, 5.0) > 0.0);
    }

    #[test]
    fn decomposition_identity_small() {
        let table = build_log_weight_table(ModelParams::critical(100).unwrap()).unwrap();
        for x in [0.0, 0.5, 1.0] {
            let d = decomposition(&table, x).unwrap();
            let direct = crate::model::exact_tail_critical(&table, x).unwrap();
            assert_relative_eq!(d.tail(), direct, max_relative = 1e-12);
            assert!(d.a_hat <= d.a);
        }
    }

    #[test]
    fn decomposition_rejects_noncritical() {
        let table = build_log_weight_table(ModelParams::new(100, 0.5, 0.0).unwrap()).unwrap();
        assert!(decomposition(&table, 0.0).is_err());
    }

    #[test]
    fn derivative_factors_match_finite_differences() {
        let h = 1e-6;
        for &t in &[0.3, 1.1, 2.5] {
            let fd = |f: &dyn Fn(f64) -> f64| (f(t + h) - f(t - h)) / (2.0 * h);
            assert_relative_eq!(p1_derivative(t), fd(&limit_density_p1), max_relative = 1e-6);
            assert_relative_eq!(p2_derivative(t), fd(&limit_density_p2), max_relative = 1e-6);
            assert_relative_eq!(
                r_derivative(t, 7),
                fd(&|s| remainder_r(s, 7)),
                max_relative = 1e-6
            );
        }
    }
}
