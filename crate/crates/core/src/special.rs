//! Scalar kernels: factorials, Stirling brackets, the upper incomplete gamma
//! function, monomial tails of `e^{-t^4/12}`, the normal distribution function
//! and a few log-domain summation helpers.
//!
//! Everything here is a pure function of its arguments.

use std::f64::consts::PI;

use crate::error::{Error, Result};

/// Maximum number of series terms / continued-fraction steps.
pub const MAX_ITERATIONS: usize = 500;

/// Per-step relative stopping tolerance for series and continued fraction.
pub const STEP_TOLERANCE: f64 = 1e-15;

const FPMIN: f64 = 1e-300;

/// 0.5 * ln(2 pi)
const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

/// Powers `k` of `t^k e^{-t^4/12}` that occur in `p1`, `p2` and `r`.
pub const QUARTIC_POWERS: [u32; 7] = [0, 2, 4, 6, 8, 12, 14];

/// A monomial integrand `t^power * e^{-t^4/12}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuarticIntegrand {
    pub power: u32,
}

impl QuarticIntegrand {
    pub fn new(power: u32) -> Result<Self> {
        if !power.is_multiple_of(2) {
            return Err(Error::Domain(format!(
                "quartic integrand power must be even, got {power}"
            )));
        }
        Ok(Self { power })
    }

    pub fn eval(&self, t: f64) -> f64 {
        t.powi(self.power as i32) * (-t.powi(4) / 12.0).exp()
    }

    /// Integral over `[x, inf)`.
    pub fn tail(&self, x: f64) -> Result<f64> {
        quartic_tail_integral(self.power, x)
    }
}

/// `ln(n!)` through the log-gamma function.
pub fn log_factorial(n: u64) -> f64 {
    if n < 2 {
        return 0.0;
    }
    libm::lgamma(n as f64 + 1.0)
}

/// Robbins' bracket of `ln(n!)`:
/// `base + 1/(12n+1) <= ln(n!) <= base + 1/(12n)` with
/// `base = ln(sqrt(2 pi n)) + n ln n - n`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StirlingBounds {
    pub base: f64,
    pub lower_remainder: f64,
    pub upper_remainder: f64,
}

impl StirlingBounds {
    pub fn lower(&self) -> f64 {
        self.base + self.lower_remainder
    }

    pub fn upper(&self) -> f64 {
        self.base + self.upper_remainder
    }

    /// `1/(12n) - 1/(12n+1) = 1/(12n(12n+1))`, computed without cancellation.
    pub fn gap(&self) -> f64 {
        self.upper_remainder * self.lower_remainder
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lower() <= value && value <= self.upper()
    }
}

/// Stirling bracket for `n >= 1`.
pub fn stirling_bounds(n: u64) -> Result<StirlingBounds> {
    if n == 0 {
        return Err(Error::Domain("stirling_bounds requires n >= 1".into()));
    }
    let nf = n as f64;
    let base = 0.5 * (2.0 * PI * nf).ln() + nf * nf.ln() - nf;
    Ok(StirlingBounds {
        base,
        lower_remainder: 1.0 / (12.0 * nf + 1.0),
        upper_remainder: 1.0 / (12.0 * nf),
    })
}

/// The complete gamma function.
pub fn gamma(s: f64) -> f64 {
    libm::tgamma(s)
}

fn check_gamma_args(s: f64, z: f64) -> Result<()> {
    if !(s > 0.0) || !s.is_finite() {
        return Err(Error::Domain(format!(
            "incomplete gamma needs s > 0, got {s}"
        )));
    }
    if !(z >= 0.0) {
        return Err(Error::Domain(format!(
            "incomplete gamma needs z >= 0, got {z}"
        )));
    }
    Ok(())
}

/// Lower incomplete gamma divided by `z^s e^{-z}`, by the power series.
fn lower_gamma_series_scaled(s: f64, z: f64) -> Result<f64> {
    let mut term = 1.0 / s;
    let mut sum = term;
    for i in 1..=MAX_ITERATIONS {
        term *= z / (s + i as f64);
        sum += term;
        if term.abs() < sum.abs() * STEP_TOLERANCE {
            return Ok(sum);
        }
    }
    Err(Error::NoConvergence {
        routine: "lower_gamma_series",
        iterations: MAX_ITERATIONS,
        s,
        z,
    })
}

/// Upper incomplete gamma divided by `z^s e^{-z}`, by the modified Lentz
/// evaluation of the Legendre continued fraction.
fn upper_gamma_fraction_scaled(s: f64, z: f64) -> Result<f64> {
    let mut b = z + 1.0 - s;
    let mut c = 1.0 / FPMIN;
    let mut d = 1.0 / b;
    let mut h = d;
    for i in 1..=MAX_ITERATIONS {
        let an = -(i as f64) * (i as f64 - s);
        b += 2.0;
        d = an * d + b;
        if d.abs() < FPMIN {
            d = FPMIN;
        }
        c = b + an / c;
        if c.abs() < FPMIN {
            c = FPMIN;
        }
        d = 1.0 / d;
        let delta = d * c;
        h *= delta;
        if (delta - 1.0).abs() < STEP_TOLERANCE {
            return Ok(h);
        }
    }
    Err(Error::NoConvergence {
        routine: "upper_gamma_fraction",
        iterations: MAX_ITERATIONS,
        s,
        z,
    })
}

/// `Gamma(s, z) = int_z^inf t^{s-1} e^{-t} dt` for `s > 0`, `z >= 0`.
///
/// Series below `z = s + 1`, continued fraction above.
pub fn upper_incomplete_gamma(s: f64, z: f64) -> Result<f64> {
    check_gamma_args(s, z)?;
    if z == 0.0 {
        return Ok(gamma(s));
    }
    if z.is_infinite() {
        return Ok(0.0);
    }
    let log_prefactor = s * z.ln() - z;
    if z < s + 1.0 {
        let lower = lower_gamma_series_scaled(s, z)? * log_prefactor.exp();
        Ok(gamma(s) - lower)
    } else {
        Ok(upper_gamma_fraction_scaled(s, z)? * log_prefactor.exp())
    }
}

/// `e^z Gamma(s, z)`; finite where `Gamma(s, z)` itself underflows.
pub fn upper_incomplete_gamma_scaled(s: f64, z: f64) -> Result<f64> {
    check_gamma_args(s, z)?;
    if z == 0.0 {
        return Ok(gamma(s));
    }
    if z < s + 1.0 {
        let lower = lower_gamma_series_scaled(s, z)? * z.powf(s);
        Ok(gamma(s) * z.exp() - lower)
    } else {
        Ok(upper_gamma_fraction_scaled(s, z)? * (s * z.ln()).exp())
    }
}

fn quartic_scale(k: u32) -> (f64, f64) {
    let s = (k as f64 + 1.0) / 4.0;
    (s, 12f64.powf(s) / 4.0)
}

fn require_even(k: u32) -> Result<()> {
    if !k.is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "quartic tail integral is defined for even powers only, got {k}"
        )));
    }
    Ok(())
}

/// Full-line moment `int_R t^k e^{-t^4/12} dt` for even `k`.
pub fn quartic_moment(k: u32) -> Result<f64> {
    require_even(k)?;
    let (s, scale) = quartic_scale(k);
    Ok(2.0 * scale * gamma(s))
}

/// `int_x^inf t^k e^{-t^4/12} dt` for even `k`; `x = -inf` gives the full moment.
pub fn quartic_tail_integral(k: u32, x: f64) -> Result<f64> {
    require_even(k)?;
    if x.is_nan() {
        return Err(Error::Domain("quartic tail integral at NaN".into()));
    }
    let (s, scale) = quartic_scale(k);
    if x == f64::NEG_INFINITY {
        return Ok(2.0 * scale * gamma(s));
    }
    let half_line = scale * upper_incomplete_gamma(s, x.powi(4) / 12.0)?;
    if x >= 0.0 {
        Ok(half_line)
    } else {
        Ok(2.0 * scale * gamma(s) - half_line)
    }
}

/// `e^{x^4/12} int_x^inf t^k e^{-t^4/12} dt` for `x >= 0`.
pub fn quartic_tail_integral_scaled(k: u32, x: f64) -> Result<f64> {
    require_even(k)?;
    if !(x >= 0.0) || x.is_infinite() {
        return Err(Error::Domain(format!(
            "scaled quartic tail needs finite x >= 0, got {x}"
        )));
    }
    let (s, scale) = quartic_scale(k);
    Ok(scale * upper_incomplete_gamma_scaled(s, x.powi(4) / 12.0)?)
}

/// Standard normal distribution function.
pub fn normal_cdf(x: f64) -> f64 {
    0.5 * libm::erfc(-x / std::f64::consts::SQRT_2)
}

/// `1 - Phi(x)` without cancellation.
pub fn normal_sf(x: f64) -> f64 {
    0.5 * libm::erfc(x / std::f64::consts::SQRT_2)
}

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    compensation: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, value: f64) {
        let t = self.sum + value;
        if self.sum.abs() >= value.abs() {
            self.compensation += (self.sum - t) + value;
        } else {
            self.compensation += (value - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.compensation
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for v in iter {
            acc.add(v);
        }
        acc
    }
}

/// `ln(sum(exp(values)))` with max shift and compensated accumulation.
/// Empty input gives `-inf`.
pub fn log_sum_exp(values: &[f64]) -> f64 {
    let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max == f64::NEG_INFINITY || !max.is_finite() {
        return max;
    }
    let acc: CompensatedSum = values.iter().map(|v| (v - max).exp()).collect();
    max + acc.value().ln()
}

const STIRLERR_S0: f64 = 1.0 / 12.0;
const STIRLERR_S1: f64 = 1.0 / 360.0;
const STIRLERR_S2: f64 = 1.0 / 1260.0;
const STIRLERR_S3: f64 = 1.0 / 1680.0;
const STIRLERR_S4: f64 = 1.0 / 1188.0;

/// `ln(n!) - ln(sqrt(2 pi n) (n/e)^n)` for `n >= 1`.
fn stirling_error(n: u64) -> f64 {
    let nf = n as f64;
    if n <= 15 {
        return log_factorial(n) - (nf + 0.5) * nf.ln() + nf - LN_SQRT_2PI;
    }
    let nn = nf * nf;
    if n > 500 {
        (STIRLERR_S0 - STIRLERR_S1 / nn) / nf
    } else if n > 80 {
        (STIRLERR_S0 - (STIRLERR_S1 - STIRLERR_S2 / nn) / nn) / nf
    } else if n > 35 {
        (STIRLERR_S0 - (STIRLERR_S1 - (STIRLERR_S2 - STIRLERR_S3 / nn) / nn) / nn) / nf
    } else {
        (STIRLERR_S0
            - (STIRLERR_S1 - (STIRLERR_S2 - (STIRLERR_S3 - STIRLERR_S4 / nn) / nn) / nn) / nn)
            / nf
    }
}

/// Deviance term `x ln(x/m) + m - x`, accurate when `x` is close to `m`.
fn binomial_deviance(x: f64, m: f64) -> f64 {
    if (x - m).abs() < 0.1 * (x + m) {
        let v = (x - m) / (x + m);
        let v2 = v * v;
        let mut s = (x - m) * v;
        let mut ej = 2.0 * x * v;
        for j in 1..MAX_ITERATIONS {
            ej *= v2;
            let next = s + ej / (2 * j + 1) as f64;
            if next == s {
                return next;
            }
            s = next;
        }
        s
    } else {
        x * (x / m).ln() + m - x
    }
}

/// `ln(C(n, k) / 2^n)` via the saddle-point form of the binomial pmf.
///
/// Absolute error stays near machine epsilon even when `ln C(n, k)` itself is
/// of order `n`. Symmetric in `k <-> n - k` bit for bit.
pub fn log_binomial_half(n: u64, k: u64) -> f64 {
    assert!(k <= n, "k = {k} exceeds n = {n}");
    if k == 0 || k == n {
        return -(n as f64) * std::f64::consts::LN_2;
    }
    let lo = k.min(n - k);
    let hi = n - lo;
    let half = n as f64 / 2.0;
    let (lof, hif, nf) = (lo as f64, hi as f64, n as f64);
    let stirling = stirling_error(n) - stirling_error(lo) - stirling_error(hi);
    let deviance = binomial_deviance(lof, half) + binomial_deviance(hif, half);
    stirling - deviance + 0.5 * (nf / (2.0 * PI * lof * hif)).ln()
}
