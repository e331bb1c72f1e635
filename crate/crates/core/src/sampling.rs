//! Random draws from the Curie-Weiss law.
//!
//! Two independent routes: inverse-CDF sampling of `S_n` from the exact weight
//! table, and single-site heat-bath (Glauber) dynamics on the spin
//! configuration. The generator is ChaCha20 (`rand_chacha::ChaCha20Rng`)
//! seeded from a `u64`, so every run is a deterministic function of
//! `(seed, parameters, draw count)`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha20Rng;

use crate::error::{Error, Result};
use crate::model::{build_log_weight_table, LogWeightTable, ModelParams};
use crate::special::CompensatedSum;

pub const RNG_ALGORITHM: &str = "ChaCha20";

/// Empirical law of `S_n` over `k = 0..=n` (`S_n = 2k - n`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EmpiricalPmf {
    pub counts: Vec<u64>,
    pub total: u64,
}

impl EmpiricalPmf {
    pub fn new(n: u64) -> Self {
        Self {
            counts: vec![0; n as usize + 1],
            total: 0,
        }
    }

    pub fn n(&self) -> u64 {
        self.counts.len() as u64 - 1
    }

    pub fn record(&mut self, spin_sum: i64) {
        let k = (spin_sum + self.n() as i64) / 2;
        self.counts[k as usize] += 1;
        self.total += 1;
    }

    pub fn probabilities(&self) -> Vec<f64> {
        let total = self.total.max(1) as f64;
        self.counts.iter().map(|&c| c as f64 / total).collect()
    }

    /// Total-variation distance to a pmf over the same `k` index.
    pub fn total_variation(&self, exact: &[f64]) -> f64 {
        assert_eq!(exact.len(), self.counts.len(), "support mismatch");
        0.5 * self
            .probabilities()
            .iter()
            .zip(exact)
            .map(|(p, q)| (p - q).abs())
            .sum::<f64>()
    }
}

#[derive(Debug, Clone)]
pub struct SamplerState {
    params: ModelParams,
    seed: u64,
    rng: ChaCha20Rng,
    table: LogWeightTable,
    cdf: Vec<f64>,
    spins: Vec<i8>,
    magnetization: i64,
}

impl SamplerState {
    /// Builds the exact CDF and a random initial configuration.
    pub fn new(params: ModelParams, seed: u64) -> Result<Self> {
        let table = build_log_weight_table(params)?;
        let mut acc = CompensatedSum::new();
        let cdf: Vec<f64> = table
            .probabilities()
            .into_iter()
            .map(|p| {
                acc.add(p);
                acc.value()
            })
            .collect();
        let last = *cdf.last().expect("table is never empty");
        if (last - 1.0).abs() > 1e-12 {
            return Err(Error::Domain(format!(
                "cumulative probabilities end at {last}"
            )));
        }
        let mut rng = ChaCha20Rng::seed_from_u64(seed);
        let spins: Vec<i8> = (0..params.n())
            .map(|_| if rng.random::<bool>() { 1 } else { -1 })
            .collect();
        let magnetization = spins.iter().map(|&s| s as i64).sum();
        Ok(Self {
            params,
            seed,
            rng,
            table,
            cdf,
            spins,
            magnetization,
        })
    }

    pub fn params(&self) -> ModelParams {
        self.params
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    pub fn table(&self) -> &LogWeightTable {
        &self.table
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn spins(&self) -> &[i8] {
        &self.spins
    }

    /// Running spin sum maintained by the Glauber updates.
    pub fn magnetization(&self) -> i64 {
        self.magnetization
    }

    /// I.i.d. draws of `S_n` by inverse-CDF lookup.
    pub fn sample_magnetization_exact(&mut self, count: usize) -> Vec<i64> {
        let n = self.params.n() as i64;
        let last = self.cdf.len() - 1;
        (0..count)
            .map(|_| {
                let u: f64 = self.rng.random();
                let k = self.cdf.partition_point(|&c| c <= u).min(last);
                2 * k as i64 - n
            })
            .collect()
    }

    /// `n` heat-bath updates at uniformly chosen sites.
    pub fn glauber_sweep(&mut self) {
        let n = self.spins.len();
        for _ in 0..n {
            let site = self.rng.random_range(0..n);
            let u: f64 = self.rng.random();
            let p_up = heat_bath_up_probability(self.params, self.magnetization, self.spins[site]);
            let new = if u < p_up { 1 } else { -1 };
            self.magnetization += (new - self.spins[site]) as i64;
            self.spins[site] = new;
        }
    }

    /// Runs `burn_in` sweeps, then records `S_n` after each of `sweeps` sweeps.
    pub fn glauber_chain(&mut self, sweeps: usize, burn_in: usize) -> EmpiricalPmf {
        for _ in 0..burn_in {
            self.glauber_sweep();
        }
        let mut pmf = EmpiricalPmf::new(self.params.n());
        for _ in 0..sweeps {
            self.glauber_sweep();
            pmf.record(self.magnetization);
        }
        pmf
    }
}

/// Conditional probability that a spin is `+1` given every other spin, where
/// `magnetization` includes the current value `current` of that spin.
pub fn heat_bath_up_probability(params: ModelParams, magnetization: i64, current: i8) -> f64 {
    let rest = (magnetization - current as i64) as f64;
    let field = params.beta() * (rest / params.n() as f64 + params.h());
    1.0 / (1.0 + (-2.0 * field).exp())
}

/// Unnormalized log Gibbs weight of a configuration.
pub fn log_boltzmann_weight(params: ModelParams, spins: &[i8]) -> f64 {
    let mut prefix = 0i64;
    let mut pairs = 0i64;
    for &s in spins {
        pairs += s as i64 * prefix;
        prefix += s as i64;
    }
    params.beta() / params.n() as f64 * pairs as f64 + params.beta() * params.h() * prefix as f64
}

/// Probability that one Glauber update moves `from` to `to`.
pub fn transition_probability(params: ModelParams, from: &[i8], to: &[i8]) -> f64 {
    let n = from.len();
    let magnetization: i64 = from.iter().map(|&s| s as i64).sum();
    let differing: Vec<usize> = (0..n).filter(|&i| from[i] != to[i]).collect();
    let set_prob = |site: usize, target: i8| {
        let up = heat_bath_up_probability(params, magnetization, from[site]);
        if target == 1 {
            up
        } else {
            1.0 - up
        }
    };
    match differing.as_slice() {
        [] => (0..n).map(|i| set_prob(i, from[i])).sum::<f64>() / n as f64,
        [i] => set_prob(*i, to[*i]) / n as f64,
        _ => 0.0,
    }
}
