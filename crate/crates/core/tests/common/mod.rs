//! Reference computations shared by the integration tests. Each one takes a
//! route independent of the library code it checks.
#![allow(dead_code)]

use curie_weiss::quadrature::integrate;
use curie_weiss::special::CompensatedSum;
use statrs::distribution::{ChiSquared, ContinuousCDF};

/// `int_x^inf t^k e^{-t^4/12} dt` by adaptive quadrature, `k` even.
/// The integrand is evaluated as `exp(k ln|t| - t^4/12)` so it never forms `inf * 0`.
pub fn quartic_tail_by_quadrature(k: u32, x: f64) -> f64 {
    let f = move |t: f64| {
        if k == 0 {
            (-t.powi(4) / 12.0).exp()
        } else if t == 0.0 {
            0.0
        } else {
            (k as f64 * t.abs().ln() - t.powi(4) / 12.0).exp()
        }
    };
    integrate(f, x, f64::INFINITY, 0.0, 1e-14)
        .expect("oracle quadrature")
        .value
}

/// Maclaurin series of `erf`, compensated; accurate for `|x| <= 3`.
pub fn erf_series(x: f64) -> f64 {
    let mut term = x;
    let mut sum = CompensatedSum::new();
    for i in 0..200 {
        let contribution = term / (2 * i + 1) as f64;
        sum.add(contribution);
        if contribution.abs() < 1e-18 * sum.value().abs() {
            break;
        }
        term *= -x * x / (i + 1) as f64;
    }
    2.0 / std::f64::consts::PI.sqrt() * sum.value()
}

/// `ln(j!)` for `j = 0..=n_max` by compensated summation of `ln j`.
pub fn log_factorials_by_summation(n_max: u64) -> Vec<f64> {
    let mut acc = CompensatedSum::new();
    let mut out = Vec::with_capacity(n_max as usize + 1);
    out.push(0.0);
    for j in 1..=n_max {
        acc.add((j as f64).ln());
        out.push(acc.value());
    }
    out
}

/// `ln(n!) - ln(sqrt(2 pi n)) - n ln n + n` for `n = 1..=n_max` (index `n - 1`)
/// in double-double arithmetic. Telescopes from `r(1) = 1 - ln sqrt(2 pi)` with
/// `r(j) - r(j+1) = sum_{i >= 1} u^{2i} / (2i + 1)`, `u = 1 / (2j + 1)`.
///
/// Near the upper end of the bracket `r(n)` sits only about `1/(360 n^3)` below
/// `1/(12n)`, far below the resolution of an `f64` near `ln(n!)`, hence the
/// extra precision.
pub fn stirling_remainders(n_max: u64) -> Vec<DoubleDouble> {
    let mut r = DoubleDouble::new(0.081_061_466_795_327_26, -2.850_421_842_770_954_6e-18);
    let mut out = Vec::with_capacity(n_max as usize);
    for j in 1..=n_max {
        out.push(r);
        let u = DoubleDouble::from(1.0).div_f64((2 * j + 1) as f64);
        let u2 = u.mul(u);
        let mut power = u2;
        let mut step = DoubleDouble::from(0.0);
        for i in 1..80u32 {
            let t = power.div_f64((2 * i + 1) as f64);
            step = step.add(t);
            if t.hi < 1e-34 * step.hi {
                break;
            }
            power = power.mul(u2);
        }
        r = r.sub(step);
    }
    out
}

/// Unevaluated sum `hi + lo` with `|lo| <= ulp(hi) / 2`, about 32 digits.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleDouble {
    pub hi: f64,
    pub lo: f64,
}

fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let v = s - a;
    (s, (a - (s - v)) + (b - v))
}

impl From<f64> for DoubleDouble {
    fn from(v: f64) -> Self {
        Self { hi: v, lo: 0.0 }
    }
}

impl DoubleDouble {
    pub fn new(hi: f64, lo: f64) -> Self {
        let (hi, lo) = two_sum(hi, lo);
        Self { hi, lo }
    }

    pub fn add(self, o: Self) -> Self {
        let (s, e) = two_sum(self.hi, o.hi);
        Self::new(s, e + self.lo + o.lo)
    }

    pub fn neg(self) -> Self {
        Self {
            hi: -self.hi,
            lo: -self.lo,
        }
    }

    pub fn sub(self, o: Self) -> Self {
        self.add(o.neg())
    }

    pub fn mul(self, o: Self) -> Self {
        let p = self.hi * o.hi;
        let e = self.hi.mul_add(o.hi, -p);
        Self::new(p, e + self.hi * o.lo + self.lo * o.hi)
    }

    pub fn div_f64(self, d: f64) -> Self {
        let q = self.hi / d;
        // Remainder self - q d, exact through the fused multiply-add.
        let r = Self::new(self.hi, self.lo).sub(Self::new(q * d, q.mul_add(d, -(q * d))));
        Self::new(q, r.hi / d)
    }

    pub fn lt(self, o: Self) -> bool {
        self.sub(o).hi < 0.0
    }

    pub fn le(self, o: Self) -> bool {
        self.sub(o).hi <= 0.0
    }
}

/// Fourth-order central difference.
pub fn derivative_fd(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    (-f(t + 2.0 * h) + 8.0 * f(t + h) - 8.0 * f(t - h) + f(t - 2.0 * h)) / (12.0 * h)
}

/// Pearson goodness-of-fit p-value over the support points with expected
/// count >= 5. Expected counts are renormalised to the retained cells.
pub fn chi_squared_p_value(counts: &[u64], probabilities: &[f64]) -> f64 {
    let total: u64 = counts.iter().sum();
    let kept: Vec<(f64, f64)> = counts
        .iter()
        .zip(probabilities)
        .filter(|&(_, &p)| p * total as f64 >= 5.0)
        .map(|(&c, &p)| (c as f64, p))
        .collect();
    let observed: f64 = kept.iter().map(|k| k.0).sum();
    let mass: f64 = kept.iter().map(|k| k.1).sum();
    let statistic: f64 = kept
        .iter()
        .map(|&(c, p)| {
            let expected = p / mass * observed;
            (c - expected).powi(2) / expected
        })
        .sum();
    let dist = ChiSquared::new((kept.len() - 1) as f64).expect("at least two bins");
    1.0 - dist.cdf(statistic)
}

/// Binomial(n, 1/2) pmf.
pub fn fair_binomial_pmf(n: u64) -> Vec<f64> {
    let lf = log_factorials_by_summation(n);
    (0..=n)
        .map(|k| {
            (lf[n as usize]
                - lf[k as usize]
                - lf[(n - k) as usize]
                - n as f64 * std::f64::consts::LN_2)
                .exp()
        })
        .collect()
}
