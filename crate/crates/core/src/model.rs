//! The exact finite-n law of the Curie-Weiss magnetization.
//!
//! Configurations with `k` up-spins all carry the same Gibbs weight, so the law
//! of `S_n = 2k - n` is the weighted binomial
//! `x_k = C(n, k) exp(beta (2k-n)^2 / (2n) + beta/2 + beta h (2k-n))`.
//! Weights are kept in log space relative to the constant `n ln 2 + beta/2`,
//! which keeps probabilities at full relative precision for large `n`.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::special::{log_binomial_half, log_sum_exp};

/// Largest `n` accepted by [`brute_force_pmf`].
pub const BRUTE_FORCE_MAX_N: u64 = 20;

/// Largest `n` for which a weight table is built.
pub const MAX_TABLE_N: u64 = 1 << 28;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    /// `beta < 1`, or `beta >= 1` with `h != 0`.
    Unique,
    /// `beta > 1`, `h = 0`: two symmetric roots.
    Pair,
    /// `beta = 1`, `h = 0`.
    Critical,
}

/// One finite Curie-Weiss system: `n` spins at inverse temperature `beta`
/// and external field `h`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ModelParams {
    n: u64,
    beta: f64,
    h: f64,
}

impl ModelParams {
    pub fn new(n: u64, beta: f64, h: f64) -> Result<Self> {
        if n == 0 {
            return Err(Error::Domain("need at least one spin".into()));
        }
        if !(beta > 0.0) || !beta.is_finite() {
            return Err(Error::Domain(format!(
                "beta must be positive and finite, got {beta}"
            )));
        }
        if !h.is_finite() {
            return Err(Error::Domain(format!("h must be finite, got {h}")));
        }
        Ok(Self { n, beta, h })
    }

    pub fn critical(n: u64) -> Result<Self> {
        Self::new(n, 1.0, 0.0)
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn h(&self) -> f64 {
        self.h
    }

    pub fn regime(&self) -> Regime {
        regime(self.beta, self.h)
    }
}

pub fn regime(beta: f64, h: f64) -> Regime {
    if h != 0.0 || beta < 1.0 {
        Regime::Unique
    } else if beta == 1.0 {
        Regime::Critical
    } else {
        Regime::Pair
    }
}

/// `n^{3/4}`, exact whenever `n` is a perfect fourth power.
pub fn n_three_quarters(n: u64) -> f64 {
    let root = (n as f64).sqrt();
    root * root.sqrt()
}

/// Binary entropy in nats, `I(t) = (t - 1) ln(1 - t) - t ln t`, with
/// `I(0) = I(1) = 0`. Returns NaN outside `[0, 1]`.
pub fn entropy_i(t: f64) -> f64 {
    if !(0.0..=1.0).contains(&t) {
        return f64::NAN;
    }
    let xlogx = |x: f64| if x == 0.0 { 0.0 } else { x * x.ln() };
    -xlogx(1.0 - t) - xlogx(t)
}

/// `J(t) = I(t) + (2t - 1)^2 / 2`.
pub fn j(t: f64) -> f64 {
    entropy_i(t) + (2.0 * t - 1.0).powi(2) / 2.0
}

/// Closed-form derivatives of `J` of order 1 to 8 on `(0, 1)`.
pub fn j_derivative(order: u32, t: f64) -> Result<f64> {
    if !(t > 0.0 && t < 1.0) {
        return Err(Error::Domain(format!(
            "J derivatives need t in (0, 1), got {t}"
        )));
    }
    let u = 1.0 - t;
    let value = match order {
        1 => (u / t).ln() + 4.0 * t - 2.0,
        2 => -(1.0 / t + 1.0 / u) + 4.0,
        3 => t.powi(-2) - u.powi(-2),
        4 => -2.0 * (t.powi(-3) + u.powi(-3)),
        5 => 6.0 * (t.powi(-4) - u.powi(-4)),
        6 => -24.0 * (t.powi(-5) + u.powi(-5)),
        7 => 120.0 * (t.powi(-6) - u.powi(-6)),
        8 => -720.0 * (t.powi(-7) + u.powi(-7)),
        _ => {
            return Err(Error::Domain(format!(
                "J derivative order must be in 1..=8, got {order}"
            )))
        }
    };
    Ok(value)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Roots {
    Unique(f64),
    Pair { negative: f64, positive: f64 },
    Critical,
}

/// Solutions of `m = tanh(beta (m + h))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MagnetizationRoots {
    pub beta: f64,
    pub h: f64,
    pub roots: Roots,
}

impl MagnetizationRoots {
    pub fn regime(&self) -> Regime {
        match self.roots {
            Roots::Unique(_) => Regime::Unique,
            Roots::Pair { .. } => Regime::Pair,
            Roots::Critical => Regime::Critical,
        }
    }

    /// Every stored root.
    pub fn values(&self) -> Vec<f64> {
        match self.roots {
            Roots::Unique(m) => vec![m],
            Roots::Pair { negative, positive } => vec![negative, positive],
            Roots::Critical => vec![0.0],
        }
    }

    pub fn residual(&self, m: f64) -> f64 {
        (m - (self.beta * (m + self.h)).tanh()).abs()
    }

    /// `(1 - m^2) / (1 - (1 - m^2) beta)` when the denominator is positive.
    pub fn variance_factor(&self, m: f64) -> Option<f64> {
        let q = 1.0 - m * m;
        let denom = 1.0 - q * self.beta;
        (denom > 0.0).then(|| q / denom)
    }

    /// Standardization scale `v_n = sqrt(n (1 - m^2) / (1 - (1 - m^2) beta))`.
    pub fn scale(&self, n: u64, m: f64) -> Option<f64> {
        self.variance_factor(m).map(|f| (n as f64 * f).sqrt())
    }
}

/// Bisection for a root of `g` on `[lo, hi]` with `g(lo) > 0 >= g(hi)`.
fn bisect<G: Fn(f64) -> f64>(g: G, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..2000 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if g(mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    if g(lo).abs() <= g(hi).abs() {
        lo
    } else {
        hi
    }
}

/// Root of `m = tanh(beta (m + h))` in `[0, 1]` for `h >= 0`, beyond zero when
/// one exists there.
fn positive_root(beta: f64, h: f64) -> f64 {
    let g = |m: f64| (beta * (m + h)).tanh() - m;
    bisect(g, 0.0, 1.0)
}

/// Solves the fixed-point equation and tags the regime.
pub fn solve_fixed_point(beta: f64, h: f64) -> Result<MagnetizationRoots> {
    if !(beta > 0.0) || !beta.is_finite() || !h.is_finite() {
        return Err(Error::Domain(format!(
            "fixed point needs beta > 0 and finite h, got beta = {beta}, h = {h}"
        )));
    }
    let roots = match regime(beta, h) {
        Regime::Critical => Roots::Critical,
        Regime::Pair => {
            let m = positive_root(beta, 0.0);
            Roots::Pair {
                negative: -m,
                positive: m,
            }
        }
        Regime::Unique => {
            if h == 0.0 {
                Roots::Unique(0.0)
            } else if h > 0.0 {
                Roots::Unique(positive_root(beta, h))
            } else {
                Roots::Unique(-positive_root(beta, -h))
            }
        }
    };
    Ok(MagnetizationRoots { beta, h, roots })
}

/// `log x_k` for `k = 0..=n`, stored as `log_offset + relative[k]`.
#[derive(Debug, Clone, PartialEq)]
pub struct LogWeightTable {
    params: ModelParams,
    log_offset: f64,
    relative: Vec<f64>,
    relative_log_z: f64,
}

/// Builds the exact law of `S_n`.
pub fn build_log_weight_table(params: ModelParams) -> Result<LogWeightTable> {
    let n = params.n();
    if n > MAX_TABLE_N {
        return Err(Error::Capacity(format!(
            "n = {n} exceeds the table limit {MAX_TABLE_N}"
        )));
    }
    let len = usize::try_from(n + 1)
        .map_err(|_| Error::Capacity(format!("n = {n} does not fit in memory")))?;
    let mut relative = Vec::new();
    relative
        .try_reserve_exact(len)
        .map_err(|e| Error::Capacity(format!("cannot allocate {len} weights: {e}")))?;

    let (beta, h) = (params.beta(), params.h());
    let nf = n as f64;
    relative.extend((0..=n).map(|k| {
        let l = (2 * k) as f64 - nf;
        log_binomial_half(n, k) + beta * l * l / (2.0 * nf) + beta * h * l
    }));
    let relative_log_z = log_sum_exp(&relative);
    Ok(LogWeightTable {
        params,
        log_offset: nf * std::f64::consts::LN_2 + beta / 2.0,
        relative,
        relative_log_z,
    })
}

impl LogWeightTable {
    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn n(&self) -> u64 {
        self.params.n()
    }

    /// Common additive constant of every log weight.
    pub fn log_offset(&self) -> f64 {
        self.log_offset
    }

    /// `log x_k - log_offset`.
    pub fn relative_log_weights(&self) -> &[f64] {
        &self.relative
    }

    pub fn log_weight(&self, k: u64) -> f64 {
        self.log_offset + self.relative[k as usize]
    }

    pub fn log_weights(&self) -> Vec<f64> {
        self.relative.iter().map(|r| self.log_offset + r).collect()
    }

    pub fn log_z(&self) -> f64 {
        self.log_offset + self.relative_log_z
    }

    pub fn relative_log_z(&self) -> f64 {
        self.relative_log_z
    }

    /// `mu_n(|sigma_+| = k)`.
    pub fn probability(&self, k: u64) -> f64 {
        (self.relative[k as usize] - self.relative_log_z).exp()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.relative
            .iter()
            .map(|r| (r - self.relative_log_z).exp())
            .collect()
    }

    /// Law of `S_n = 2k - n`.
    pub fn pmf_by_spin_sum(&self) -> BTreeMap<i64, f64> {
        let n = self.n() as i64;
        self.probabilities()
            .into_iter()
            .enumerate()
            .map(|(k, p)| (2 * k as i64 - n, p))
            .collect()
    }

    /// `ln` of the total mass of `k` in `[lo, hi]` relative to `Z_n`.
    /// Out-of-range bounds are clipped; an empty range gives `-inf`.
    pub fn log_mass(&self, lo: i64, hi: i64) -> f64 {
        let n = self.n() as i64;
        let (lo, hi) = (lo.max(0), hi.min(n));
        if lo > hi {
            return f64::NEG_INFINITY;
        }
        log_sum_exp(&self.relative[lo as usize..=hi as usize]) - self.relative_log_z
    }

    /// Probability that `k` lies in `[lo, hi]`.
    pub fn mass(&self, lo: i64, hi: i64) -> f64 {
        self.log_mass(lo, hi).exp()
    }
}

/// Smallest integer strictly greater than `c`. Values within a few ulps of an
/// integer are treated as that integer so ties follow the strict inequality.
pub fn first_index_above(c: f64) -> i64 {
    let nearest = c.round();
    let snapped = if (c - nearest).abs() <= 4.0 * f64::EPSILON * nearest.abs().max(1.0) {
        nearest
    } else {
        c
    };
    snapped.floor() as i64 + 1
}

/// `mu_n(W_n > x)` for `W_n = S_n / n^{3/4}` at the critical point, i.e. the
/// mass of `k > (n + n^{3/4} x) / 2`.
pub fn exact_tail_critical(table: &LogWeightTable, x: f64) -> Result<f64> {
    if table.params().regime() != Regime::Critical {
        return Err(Error::Domain(
            "exact_tail_critical needs beta = 1 and h = 0".into(),
        ));
    }
    if x.is_nan() {
        return Err(Error::Domain("tail at NaN".into()));
    }
    if x == f64::INFINITY {
        return Ok(0.0);
    }
    if x == f64::NEG_INFINITY {
        return Ok(1.0);
    }
    let n = table.n();
    let cut = (n as f64 + n_three_quarters(n) * x) / 2.0;
    Ok(table.mass(first_index_above(cut), n as i64))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Conditioning {
    None,
    /// Restrict to `S_n < 0` and standardize around the negative root.
    NegativeSpin,
    /// Restrict to `S_n > 0` and standardize around the positive root.
    PositiveSpin,
}

/// Tail `mu_n(W > x | event)` of `W = (S_n - n m) / v_n` in the non-critical
/// regimes. The `S_n = 0` atom belongs to neither conditioning event.
pub fn exact_tail_standardized(
    table: &LogWeightTable,
    roots: &MagnetizationRoots,
    x: f64,
    conditioning: Conditioning,
) -> Result<f64> {
    let n = table.n() as i64;
    let params = table.params();
    if roots.beta != params.beta() || roots.h != params.h() {
        return Err(Error::Domain(
            "roots and table describe different models".into(),
        ));
    }
    let (m, lo, hi) = match (roots.roots, conditioning) {
        (Roots::Unique(m), Conditioning::None) => (m, 0, n),
        (Roots::Pair { negative, .. }, Conditioning::NegativeSpin) => {
            // 2k - n < 0
            (negative, 0, (n + 1) / 2 - 1)
        }
        (Roots::Pair { positive, .. }, Conditioning::PositiveSpin) => (positive, n / 2 + 1, n),
        (Roots::Critical, _) => {
            return Err(Error::Domain(
                "critical regime has no Gaussian standardization; use exact_tail_critical".into(),
            ))
        }
        (r, c) => {
            return Err(Error::Domain(format!(
                "conditioning {c:?} does not match roots {r:?}"
            )))
        }
    };
    let v = roots
        .scale(table.n(), m)
        .ok_or_else(|| Error::Domain(format!("no standardization scale at m = {m}")))?;
    let event = table.log_mass(lo, hi);
    if event == f64::NEG_INFINITY {
        return Err(Error::Domain(format!(
            "conditioning event {conditioning:?} has zero mass at n = {n}"
        )));
    }
    if x.is_nan() {
        return Err(Error::Domain("tail at NaN".into()));
    }
    let start = if x == f64::NEG_INFINITY {
        lo
    } else if x == f64::INFINITY {
        return Ok(0.0);
    } else {
        let nf = n as f64;
        first_index_above((nf + nf * m + v * x) / 2.0).max(lo)
    };
    Ok((table.log_mass(start, hi) - event).exp())
}

/// The law of `S_n` by summing Boltzmann weights over all `2^n` configurations.
pub fn brute_force_pmf(params: ModelParams) -> Result<BTreeMap<i64, f64>> {
    let n = params.n();
    if n > BRUTE_FORCE_MAX_N {
        return Err(Error::Capacity(format!(
            "brute-force enumeration needs n <= {BRUTE_FORCE_MAX_N}, got {n}"
        )));
    }
    let (beta, h) = (params.beta(), params.h());
    let nf = n as f64;
    // Upper bound on the exponent keeps every weight <= 1.
    let shift = beta * (nf - 1.0) / 2.0 + beta * h.abs() * nf;
    let mut totals: BTreeMap<i64, f64> = BTreeMap::new();
    for config in 0u64..(1u64 << n) {
        let mut prefix = 0i64;
        let mut pairs = 0i64;
        for i in 0..n {
            let spin = if config >> i & 1 == 1 { 1 } else { -1 };
            pairs += spin * prefix;
            prefix += spin;
        }
        let energy = beta / nf * pairs as f64 + beta * h * prefix as f64;
        *totals.entry(prefix).or_insert(0.0) += (energy - shift).exp();
    }
    let z: f64 = totals.values().sum();
    for p in totals.values_mut() {
        *p /= z;
    }
    Ok(totals)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const E: f64 = std::f64::consts::E;

    #[test]
    fn entropy_values() {
        assert_eq!(entropy_i(0.0), 0.0);
        assert_eq!(entropy_i(1.0), 0.0);
        assert_relative_eq!(entropy_i(0.5), std::f64::consts::LN_2, max_relative = 1e-15);
        for i in 1..10 {
            let t = i as f64 / 10.0;
            assert_relative_eq!(entropy_i(t), entropy_i(1.0 - t), max_relative = 1e-14);
        }
        assert!(entropy_i(1.5).is_nan());
    }

    #[test]
    fn j_at_the_midpoint() {
        assert_relative_eq!(j(0.5), std::f64::consts::LN_2, max_relative = 1e-15);
        assert_eq!(j_derivative(4, 0.5).unwrap(), -32.0);
        assert_eq!(j_derivative(6, 0.5).unwrap(), -1536.0);
        assert_eq!(j_derivative(8, 0.5).unwrap(), -184_320.0);
        for k in [1, 2, 3, 5, 7] {
            assert_eq!(j_derivative(k, 0.5).unwrap(), 0.0, "order {k}");
        }
        assert!(j_derivative(0, 0.5).is_err());
        assert!(j_derivative(9, 0.5).is_err());
        assert!(j_derivative(2, 0.0).is_err());
    }

    #[test]
    fn regimes() {
        assert_eq!(regime(0.5, 0.0), Regime::Unique);
        assert_eq!(regime(1.0, 0.0), Regime::Critical);
        assert_eq!(regime(2.0, 0.0), Regime::Pair);
        assert_eq!(regime(2.0, 0.1), Regime::Unique);
        assert_eq!(regime(1.0, -0.1), Regime::Unique);
    }

    #[test]
    fn fixed_point_examples() {
        let r = solve_fixed_point(0.5, 0.0).unwrap();
        assert_eq!(r.roots, Roots::Unique(0.0));
        let r = solve_fixed_point(1.0, 0.0).unwrap();
        assert_eq!(r.roots, Roots::Critical);
        let r = solve_fixed_point(2.0, 0.0).unwrap();
        match r.roots {
            Roots::Pair { negative, positive } => {
                assert_eq!(negative, -positive);
                assert!((positive - 0.957_504_0).abs() < 1e-7, "{positive}");
                assert!(r.residual(positive) <= 1e-14);
            }
            other => panic!("expected a pair, got {other:?}"),
        }
        let r = solve_fixed_point(1.5, -0.2).unwrap();
        match r.roots {
            Roots::Unique(m) => {
                assert!(m < 0.0);
                assert!(r.residual(m) <= 1e-14);
            }
            other => panic!("{other:?}"),
        }
        assert!(solve_fixed_point(0.0, 0.0).is_err());
    }

    #[test]
    fn variance_scale() {
        let r = solve_fixed_point(0.5, 0.0).unwrap();
        assert_relative_eq!(
            r.scale(100, 0.0).unwrap(),
            200f64.sqrt(),
            max_relative = 1e-15
        );
        let c = solve_fixed_point(1.0, 0.0).unwrap();
        assert!(c.scale(100, 0.0).is_none());
    }

    #[test]
    fn two_spin_table() {
        let t = build_log_weight_table(ModelParams::critical(2).unwrap()).unwrap();
        let w: Vec<f64> = t.log_weights().iter().map(|l| l.exp()).collect();
        assert_relative_eq!(w[0], E.powf(1.5), max_relative = 1e-14);
        assert_relative_eq!(w[1], 2.0 * E.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(w[2], E.powf(1.5), max_relative = 1e-14);
        assert_relative_eq!(t.probability(2), E / (2.0 * E + 2.0), max_relative = 1e-14);
        assert_relative_eq!(
            exact_tail_critical(&t, 0.0).unwrap(),
            E / (2.0 * E + 2.0),
            max_relative = 1e-14
        );
    }

    #[test]
    fn symmetric_weights_without_field() {
        for n in [1u64, 2, 9, 100, 1001] {
            for beta in [0.5, 1.0, 2.0] {
                let t = build_log_weight_table(ModelParams::new(n, beta, 0.0).unwrap()).unwrap();
                let w = t.log_weights();
                for k in 0..=n as usize {
                    assert_eq!(w[k], w[n as usize - k]);
                }
            }
        }
    }

    #[test]
    fn large_table_stays_finite() {
        let t = build_log_weight_table(ModelParams::critical(1_000_000).unwrap()).unwrap();
        assert!(t.log_z().is_finite());
        let total: f64 = t.probabilities().iter().sum();
        assert!((total - 1.0).abs() < 1e-12);
    }

    #[test]
    fn tail_beyond_support_is_zero() {
        let n = 81u64;
        let t = build_log_weight_table(ModelParams::critical(n).unwrap()).unwrap();
        assert_eq!(exact_tail_critical(&t, 3.0).unwrap(), 0.0);
        assert_eq!(exact_tail_critical(&t, 10.0).unwrap(), 0.0);
    }

    #[test]
    fn tail_strict_inequality_at_atoms() {
        let n = 16u64; // n^{3/4} = 8, so x = 0.25 puts the cut exactly at k = 9
        let t = build_log_weight_table(ModelParams::critical(n).unwrap()).unwrap();
        let at = exact_tail_critical(&t, 0.25).unwrap();
        let below = exact_tail_critical(&t, 0.25 - 1e-9).unwrap();
        assert_relative_eq!(below - at, t.probability(9), max_relative = 1e-12);
        let zero = exact_tail_critical(&t, 0.0).unwrap();
        let just_below = exact_tail_critical(&t, -1e-12).unwrap();
        assert_relative_eq!(just_below - zero, t.probability(8), max_relative = 1e-12);
    }

    #[test]
    fn critical_tail_requires_critical_table() {
        let t = build_log_weight_table(ModelParams::new(10, 0.5, 0.0).unwrap()).unwrap();
        assert!(exact_tail_critical(&t, 0.0).is_err());
    }

    #[test]
    fn standardized_tail_whole_support() {
        let n = 400;
        let p = ModelParams::new(n, 0.5, 0.0).unwrap();
        let t = build_log_weight_table(p).unwrap();
        let r = solve_fixed_point(0.5, 0.0).unwrap();
        let v = r.scale(n, 0.0).unwrap();
        let x = -v * (n as f64).powf(0.25);
        let tail = exact_tail_standardized(&t, &r, x, Conditioning::None).unwrap();
        assert_relative_eq!(tail, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn standardized_tail_conditioning_mismatch() {
        let p = ModelParams::new(20, 2.0, 0.0).unwrap();
        let t = build_log_weight_table(p).unwrap();
        let r = solve_fixed_point(2.0, 0.0).unwrap();
        assert!(exact_tail_standardized(&t, &r, 0.0, Conditioning::None).is_err());
        let u = solve_fixed_point(0.5, 0.0).unwrap();
        assert!(exact_tail_standardized(&t, &u, 0.0, Conditioning::None).is_err());
        let t2 = build_log_weight_table(ModelParams::new(20, 0.5, 0.0).unwrap()).unwrap();
        assert!(exact_tail_standardized(&t2, &u, 0.0, Conditioning::PositiveSpin).is_err());
    }

    #[test]
    fn conditional_events_exclude_zero_atom() {
        let p = ModelParams::new(4, 2.0, 0.0).unwrap();
        let t = build_log_weight_table(p).unwrap();
        let r = solve_fixed_point(2.0, 0.0).unwrap();
        let pos =
            exact_tail_standardized(&t, &r, f64::NEG_INFINITY, Conditioning::PositiveSpin).unwrap();
        assert_relative_eq!(pos, 1.0, max_relative = 1e-14);
        // With k in {3, 4} only; x = +inf empties it.
        assert_eq!(
            exact_tail_standardized(&t, &r, f64::INFINITY, Conditioning::PositiveSpin).unwrap(),
            0.0
        );
    }

    #[test]
    fn brute_force_small_cases() {
        let one = brute_force_pmf(ModelParams::critical(1).unwrap()).unwrap();
        assert_relative_eq!(one[&-1], 0.5, max_relative = 1e-15);
        assert_relative_eq!(one[&1], 0.5, max_relative = 1e-15);
        let two = brute_force_pmf(ModelParams::critical(2).unwrap()).unwrap();
        assert_relative_eq!(two[&2], E / (2.0 * E + 2.0), max_relative = 1e-14);
        assert_relative_eq!(two[&0], 1.0 / (E + 1.0), max_relative = 1e-14);
        assert_relative_eq!(two[&-2], E / (2.0 * E + 2.0), max_relative = 1e-14);
        assert!(matches!(
            brute_force_pmf(ModelParams::critical(21).unwrap()),
            Err(Error::Capacity(_))
        ));
    }

    #[test]
    fn first_index_above_handles_ties() {
        assert_eq!(first_index_above(3.0), 4);
        assert_eq!(first_index_above(3.2), 4);
        assert_eq!(first_index_above(2.999_999_999_999_999_6), 4);
        assert_eq!(first_index_above(-0.5), 0);
    }
}
