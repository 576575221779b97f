//! Exhaustive and Monte Carlo checks of the probabilistic bounds on (k-error)
//! linear complexity of random periodic arrays.
//!
//! Upper bound: `P(L_k(s) < (mu + eps) T_2...T_n) > 1 - exp(-2 eps^2 T_2...T_n / T_1^2)`,
//! where `mu` is the mean linear complexity of a uniform `T_1`-periodic
//! sequence. Lower bound: `L_k(s) > H = floor(sqrt((1 - eps_1) T_1...T_n / (n - 1)))`
//! with probability above `1 - eps_2` once the period volume is large enough.
//!
//! Monte Carlo trial `i` draws its array from the stream
//! `SplitMix64::stream(seed, i)`, so reports do not depend on how trials are
//! spread over worker threads.

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::annihilator::{berlekamp_massey_terms, compute, slice_complexities};
use crate::error::{Error, Result};
use crate::gf::FieldSpec;
use crate::kerror::{k_error_complexity, KErrorMode, DEFAULT_BUDGET};
use crate::monomial::MonomialOrder;
use crate::rng::SplitMix64;
use crate::seqarray::{random_array_from, random_element, PeriodicArray};

/// Largest space `q^N` enumerated in exhaustive mode.
pub const EXHAUSTIVE_LIMIT: u64 = 1 << 20;
/// Largest `q^{T_1}` for which the mean complexity is computed exactly.
pub const MU_EXHAUSTIVE_LIMIT: u64 = 1 << 16;
/// Multiplier of the binomial standard error used as Monte Carlo slack.
pub const SIGMA_SLACK: f64 = 3.0;
/// Keys the streams of the mean-complexity estimate apart from the trial streams.
const MU_STREAM_TAG: u64 = 0x6d75_5f65_7374_696d;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ExperimentKind {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SamplingMode {
    Exhaustive,
    Montecarlo,
}

fn default_epsilon() -> f64 {
    0.5
}

fn default_budget() -> u64 {
    DEFAULT_BUDGET
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub field: FieldSpec,
    pub periods: Vec<usize>,
    pub trials: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub k: usize,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon1: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon2: f64,
    pub mode: SamplingMode,
    /// Ball-size budget for exact k-error evaluation of each sample.
    #[serde(default = "default_budget")]
    pub kerror_budget: u64,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if self.periods.len() < 2 {
            return Err(Error::Range(format!(
                "experiments need n >= 2 periods, got {:?}",
                self.periods
            )));
        }
        if self.periods.contains(&0) {
            return Err(Error::Range("periods must be positive".into()));
        }
        if self.trials == 0 {
            return Err(Error::Range("trials must be at least 1".into()));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Range(format!("epsilon = {} must be positive", self.epsilon)));
        }
        for (name, v) in [("epsilon1", self.epsilon1), ("epsilon2", self.epsilon2)] {
            if !(v > 0.0 && v < 1.0) {
                return Err(Error::Range(format!("{name} = {v} must lie in (0, 1)")));
            }
        }
        let volume: usize = self.periods.iter().product();
        if self.k > volume {
            return Err(Error::Range(format!("k = {} exceeds period volume {volume}", self.k)));
        }
        if self.mode == SamplingMode::Exhaustive {
            space_size(&self.field, &self.periods)?;
        }
        Ok(())
    }

    fn volume(&self) -> usize {
        self.periods.iter().product()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ProbReport {
    pub config: ExperimentConfig,
    /// Estimated mean complexity of a `T_1`-periodic sequence (upper bound only).
    pub mu_estimate: Option<f64>,
    /// `(mu + eps) T_2...T_n` (upper bound only).
    pub upper_threshold: Option<f64>,
    /// `H` (lower bound only).
    pub threshold_h: Option<u64>,
    /// Arrays evaluated: `trials`, or `q^N` in exhaustive mode.
    pub samples: u64,
    /// Arrays for which the event held.
    pub successes: u64,
    pub empirical_probability: f64,
    /// Probability the bound guarantees.
    pub paper_bound: f64,
    /// Statistical allowance subtracted from the bound (zero when exhaustive).
    pub slack: f64,
    /// Histogram of `L_k(s)` over the evaluated arrays.
    pub distribution: BTreeMap<usize, u64>,
    /// Arrays whose `L(s)` exceeded the sum of their first-axis slice
    /// complexities.
    pub slice_sum_violations: u64,
    pub satisfied: bool,
}

/// `exp(-2 d eps^2 / (b - a)^2)`.
pub fn hoeffding_rhs(d: u64, epsilon: f64, a: f64, b: f64) -> Result<f64> {
    if !(b > a) {
        return Err(Error::Range(format!("need b > a, got [{a}, {b}]")));
    }
    if d == 0 || !(epsilon > 0.0) {
        return Err(Error::Range(format!("need d >= 1 and epsilon > 0, got d = {d}, epsilon = {epsilon}")));
    }
    Ok((-2.0 * d as f64 * epsilon * epsilon / ((b - a) * (b - a))).exp())
}

/// `floor(sqrt((1 - eps_1) T_1...T_n / (n - 1)))`.
pub fn threshold_h(periods: &[usize], epsilon1: f64) -> Result<u64> {
    let n = periods.len();
    if n < 2 {
        return Err(Error::Range(format!(
            "the threshold divides by n - 1 and needs n >= 2, got n = {n}"
        )));
    }
    if !(epsilon1 > 0.0 && epsilon1 < 1.0) {
        return Err(Error::Range(format!("epsilon1 = {epsilon1} must lie in (0, 1)")));
    }
    let volume: usize = periods.iter().product();
    let x = (1.0 - epsilon1) * volume as f64 / (n - 1) as f64;
    let mut h = x.sqrt().floor() as u64;
    while ((h + 1) * (h + 1)) as f64 <= x {
        h += 1;
    }
    while h > 0 && (h * h) as f64 > x {
        h -= 1;
    }
    Ok(h)
}

fn space_size(field: &FieldSpec, periods: &[usize]) -> Result<u64> {
    let volume: usize = periods.iter().product();
    let too_big = || {
        Error::BudgetExceeded(format!(
            "exhaustive enumeration of q^{volume} arrays over {field} exceeds 2^20"
        ))
    };
    let q = field.order_u64().ok_or_else(too_big)?;
    let size = q.checked_pow(volume as u32).ok_or_else(too_big)?;
    if size > EXHAUSTIVE_LIMIT {
        return Err(too_big());
    }
    Ok(size)
}

/// Mean 1-D linear complexity of a uniform `T_1`-periodic sequence: exact
/// when `q^{T_1} <= 2^16`, otherwise a Monte Carlo mean over `trials` draws.
pub fn estimate_mu(field: &FieldSpec, t1: usize, trials: u64, seed: u64) -> Result<f64> {
    if t1 == 0 {
        return Err(Error::Range("T1 must be positive".into()));
    }
    let complexity = |seq: &[crate::gf::FieldElement]| {
        let two: Vec<_> = seq.iter().chain(seq).copied().collect();
        berlekamp_massey_terms(field, &two) as u64
    };
    let exhaustive = field
        .order_u64()
        .and_then(|q| q.checked_pow(t1 as u32))
        .filter(|&size| size <= MU_EXHAUSTIVE_LIMIT);
    if let Some(size) = exhaustive {
        let total: u64 = (0..size)
            .into_par_iter()
            .map(|idx| {
                let a = PeriodicArray::from_space_index(field, &[t1], idx).expect("valid shape");
                complexity(a.data())
            })
            .sum();
        return Ok(total as f64 / size as f64);
    }
    if trials == 0 {
        return Err(Error::Range("Monte Carlo estimate needs trials >= 1".into()));
    }
    let total: u64 = (0..trials)
        .into_par_iter()
        .map(|i| {
            let mut rng = SplitMix64::stream(seed ^ MU_STREAM_TAG, i);
            let seq: Vec<_> = (0..t1).map(|_| random_element(field, &mut rng)).collect();
            complexity(&seq)
        })
        .sum();
    Ok(total as f64 / trials as f64)
}

fn complexity_histogram(values: impl Iterator<Item = usize>) -> BTreeMap<usize, u64> {
    let mut hist = BTreeMap::new();
    for v in values {
        *hist.entry(v).or_insert(0) += 1;
    }
    hist
}

/// Exact histogram of `L(s)` over all `q^N` arrays with the given periods.
pub fn exact_distribution(field: &FieldSpec, periods: &[usize]) -> Result<BTreeMap<usize, u64>> {
    let size = space_size(field, periods)?;
    let values: Vec<usize> = (0..size)
        .into_par_iter()
        .map(|idx| {
            let s = PeriodicArray::from_space_index(field, periods, idx).expect("valid shape");
            compute(&s, MonomialOrder::Grlex).complexity
        })
        .collect();
    Ok(complexity_histogram(values.into_iter()))
}

#[derive(Clone, Copy)]
struct Sample {
    value: usize,
    /// `L(s)` exceeded the sum of its first-axis slice complexities.
    slice_sum_violated: bool,
}

/// `L_k(s)` with the piggybacked checks `0 <= L_k <= L <= N` (hard errors)
/// and the slice-sum comparison (recorded, since it can fail).
fn sample_value(s: &PeriodicArray, cfg: &ExperimentConfig) -> Result<Sample> {
    let l = compute(s, MonomialOrder::Grlex).complexity;
    let slice_sum_violated = l > slice_complexities(s)?.total();
    if l > s.volume() {
        return Err(Error::Invariant(format!("L(s) = {l} exceeds the period volume")));
    }
    let value = if cfg.k == 0 {
        l
    } else {
        k_error_complexity(s, cfg.k, KErrorMode::Exact, cfg.kerror_budget, 0)?.value
    };
    if value > l {
        return Err(Error::Invariant(format!("L_k(s) = {value} exceeds L(s) = {l}")));
    }
    Ok(Sample {
        value,
        slice_sum_violated,
    })
}

/// Evaluates every sample in a fixed order regardless of scheduling.
fn sample_values(cfg: &ExperimentConfig) -> Result<Vec<Sample>> {
    match cfg.mode {
        SamplingMode::Exhaustive => {
            let size = space_size(&cfg.field, &cfg.periods)?;
            (0..size)
                .into_par_iter()
                .map(|idx| {
                    let s = PeriodicArray::from_space_index(&cfg.field, &cfg.periods, idx)?;
                    sample_value(&s, cfg)
                })
                .collect()
        }
        SamplingMode::Montecarlo => (0..cfg.trials)
            .into_par_iter()
            .map(|i| {
                let mut rng = SplitMix64::stream(cfg.seed, i);
                let s = random_array_from(&cfg.field, &cfg.periods, &mut rng)?;
                sample_value(&s, cfg)
            })
            .collect(),
    }
}

fn slack(cfg: &ExperimentConfig, p: f64) -> f64 {
    match cfg.mode {
        SamplingMode::Exhaustive => 0.0,
        SamplingMode::Montecarlo => {
            let p = p.clamp(0.0, 1.0);
            SIGMA_SLACK * (p * (1.0 - p) / cfg.trials as f64).sqrt()
        }
    }
}

pub fn run_upper_bound_experiment(cfg: &ExperimentConfig) -> Result<ProbReport> {
    cfg.validate()?;
    let t1 = cfg.periods[0];
    let rest = (cfg.volume() / t1) as u64;
    let mu = estimate_mu(&cfg.field, t1, cfg.trials, cfg.seed)?;
    let threshold = (mu + cfg.epsilon) * rest as f64;
    let samples_out = sample_values(cfg)?;
    let values: Vec<usize> = samples_out.iter().map(|s| s.value).collect();
    let successes = values.iter().filter(|&&v| (v as f64) < threshold).count() as u64;
    let samples = values.len() as u64;
    let empirical = successes as f64 / samples as f64;
    let bound = 1.0 - hoeffding_rhs(rest, cfg.epsilon, 0.0, t1 as f64)?;
    let slack = slack(cfg, bound);
    Ok(ProbReport {
        config: cfg.clone(),
        mu_estimate: Some(mu),
        upper_threshold: Some(threshold),
        threshold_h: None,
        samples,
        successes,
        empirical_probability: empirical,
        paper_bound: bound,
        slack,
        distribution: complexity_histogram(values.into_iter()),
        slice_sum_violations: samples_out.iter().filter(|s| s.slice_sum_violated).count() as u64,
        satisfied: empirical >= bound - slack,
    })
}

pub fn run_lower_bound_experiment(cfg: &ExperimentConfig) -> Result<ProbReport> {
    cfg.validate()?;
    let h = threshold_h(&cfg.periods, cfg.epsilon1)?;
    let samples_out = sample_values(cfg)?;
    let values: Vec<usize> = samples_out.iter().map(|s| s.value).collect();
    let successes = values.iter().filter(|&&v| v as u64 > h).count() as u64;
    let samples = values.len() as u64;
    let empirical = successes as f64 / samples as f64;
    let bound = 1.0 - cfg.epsilon2;
    Ok(ProbReport {
        config: cfg.clone(),
        mu_estimate: None,
        upper_threshold: None,
        threshold_h: Some(h),
        samples,
        successes,
        empirical_probability: empirical,
        paper_bound: bound,
        slack: 0.0,
        distribution: complexity_histogram(values.into_iter()),
        slice_sum_violations: samples_out.iter().filter(|s| s.slice_sum_violated).count() as u64,
        satisfied: empirical > bound,
    })
}

pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ProbReport> {
    match cfg.experiment {
        ExperimentKind::Upper => run_upper_bound_experiment(cfg),
        ExperimentKind::Lower => run_lower_bound_experiment(cfg),
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| Error::Range(format!("cannot start {workers} workers: {e}")))?;
    Ok(pool.install(f))
}

pub fn report_to_json(report: &ProbReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}
