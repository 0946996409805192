//! Random-sum convergence experiments: normalized sums `S*_{Z_n}/(sigma
//! sqrt(n))` under three index constructions, tested against the Linnik CDF,
//! with the companion check that `Z_n/n` approaches twice a Mittag-Leffler
//! variate of half the index.
//!
//! Replications are independent and fan out across the rayon pool with one
//! stream per replication. The summand count per replication is capped
//! (default 1e8): a capped replication keeps its truncated sum and is counted
//! in the report rather than stalling the run; the index statistics always
//! use the untruncated count.

use crate::error::{Error, Result};
use crate::linnik::{linnik_cdf_cached, LinnikParams};
use crate::mittag_leffler::{ml_cdf, MLParams, MittagLeffler, MlMethod};
use crate::rng::{mix_streams, stream_of_label, RngState};
use crate::spec::DistributionSpec;
use crate::stattest::{ks_one_sample_sorted, IdentityReport, DEFAULT_LEVEL};
use rand::RngCore;
use rand_distr::Distribution;
use serde::Serialize;
use std::path::Path;

pub const DEFAULT_CAP: u64 = 100_000_000;

/// How the random number of summands is generated.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndexModel {
    /// Geometric number of scaled one-sided stable jumps, integer part of
    /// the normalized sum.
    GeometricStable,
    /// Poisson count with random intensity `2 n M_delta` (doubly stochastic
    /// Poisson).
    CoxPoisson,
    /// `Z_n = n` exactly; the classical-CLT control.
    Deterministic,
}

impl IndexModel {
    pub fn key(self) -> &'static str {
        match self {
            IndexModel::GeometricStable => "geometric_stable",
            IndexModel::CoxPoisson => "cox_poisson",
            IndexModel::Deterministic => "deterministic",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "geometric_stable" => Some(IndexModel::GeometricStable),
            "cox_poisson" => Some(IndexModel::CoxPoisson),
            "deterministic" => Some(IndexModel::Deterministic),
            _ => None,
        }
    }
}

/// Configuration of one convergence experiment.
#[derive(Debug, Clone)]
pub struct RandSumConfig {
    /// Target Linnik index; the mixing law is Mittag-Leffler of `alpha/2`.
    pub alpha: f64,
    pub n_values: Vec<u64>,
    pub replications: usize,
    /// Zero-mean, finite-variance summand law.
    pub summand: DistributionSpec,
    /// Scale applied to every summand (and to sigma); default 1.
    pub summand_scale: f64,
    pub index_model: IndexModel,
    pub seed: u64,
    /// Hard cap on summands per replication.
    pub cap: u64,
}

impl RandSumConfig {
    pub fn validate(&self) -> Result<()> {
        LinnikParams::new(self.alpha)?;
        if self.n_values.is_empty() {
            return Err(Error::invalid("n_values must be nonempty"));
        }
        if self.n_values.windows(2).any(|w| w[1] <= w[0]) || self.n_values[0] == 0 {
            return Err(Error::invalid("n_values must be positive and increasing"));
        }
        if self.replications == 0 {
            return Err(Error::invalid("replications must be positive"));
        }
        if self.cap == 0 {
            return Err(Error::invalid("cap must be positive"));
        }
        if !(self.summand_scale.is_finite() && self.summand_scale > 0.0) {
            return Err(Error::invalid("summand scale must be positive"));
        }
        if self.index_model == IndexModel::GeometricStable && self.alpha >= 2.0 {
            return Err(Error::invalid(
                "geometric_stable index needs alpha < 2 (delta = alpha/2 < 1)",
            ));
        }
        self.summand_sigma()?;
        Ok(())
    }

    /// Standard deviation of one (scaled) summand; restricted to the
    /// zero-mean finite-variance families.
    pub fn summand_sigma(&self) -> Result<f64> {
        use DistributionSpec::*;
        let unit = match &self.summand {
            Rademacher | Normal => 1.0,
            Laplace => std::f64::consts::SQRT_2,
            StableSym { alpha } if *alpha == 2.0 => std::f64::consts::SQRT_2,
            Linnik { alpha, .. } if *alpha == 2.0 => std::f64::consts::SQRT_2,
            other => {
                return Err(Error::invalid(format!(
                    "summand must be zero-mean with finite variance; '{other}' is not supported"
                )))
            }
        };
        Ok(unit * self.summand_scale)
    }

    /// Parse the flat `key = value` config format. Keys: alpha, n_values,
    /// replications, summand, index_model, seed, cap.
    pub fn parse_str(text: &str) -> Result<Self> {
        let mut alpha = None;
        let mut n_values: Option<Vec<u64>> = None;
        let mut replications = None;
        let mut summand: DistributionSpec = DistributionSpec::Rademacher;
        let mut index_model = None;
        let mut seed = None;
        let mut cap = DEFAULT_CAP;

        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content.split_once('=').ok_or(Error::Config {
                line,
                msg: format!("expected 'key = value', got '{content}'"),
            })?;
            let key = key.trim();
            let value = value.trim();
            let bad = |msg: String| Error::Config { line, msg };
            match key {
                "alpha" => {
                    alpha =
                        Some(value.parse::<f64>().map_err(|_| {
                            bad(format!("alpha is not a number: '{value}'"))
                        })?)
                }
                "n_values" => {
                    let parsed: std::result::Result<Vec<u64>, _> =
                        value.split(',').map(|v| v.trim().parse::<u64>()).collect();
                    n_values = Some(parsed.map_err(|_| {
                        bad(format!("n_values must be a comma list of counts: '{value}'"))
                    })?);
                }
                "replications" => {
                    replications = Some(value.parse::<usize>().map_err(|_| {
                        bad(format!("replications is not a count: '{value}'"))
                    })?)
                }
                "summand" => {
                    summand = value
                        .parse::<DistributionSpec>()
                        .map_err(|e| bad(format!("summand: {e}")))?
                }
                "index_model" => {
                    index_model = Some(IndexModel::parse(value).ok_or_else(|| {
                        bad(format!(
                            "unknown index_model '{value}' (expected geometric_stable, cox_poisson or deterministic)"
                        ))
                    })?)
                }
                "seed" => {
                    seed = Some(
                        value
                            .parse::<u64>()
                            .map_err(|_| bad(format!("seed is not an integer: '{value}'")))?,
                    )
                }
                "cap" => {
                    cap = value
                        .parse::<u64>()
                        .map_err(|_| bad(format!("cap is not a count: '{value}'")))?
                }
                other => return Err(bad(format!("unknown key '{other}'"))),
            }
        }

        let missing = |key: &str| Error::Config { line: 0, msg: format!("missing key '{key}'") };
        let cfg = RandSumConfig {
            alpha: alpha.ok_or_else(|| missing("alpha"))?,
            n_values: n_values.ok_or_else(|| missing("n_values"))?,
            replications: replications.ok_or_else(|| missing("replications"))?,
            summand,
            summand_scale: 1.0,
            index_model: index_model.ok_or_else(|| missing("index_model"))?,
            seed: seed.ok_or_else(|| missing("seed"))?,
            cap,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse_str(&text)
    }
}

/// Draw one index value `Z_n` (as f64; counts can exceed u64 precision needs
/// for the capped summing, which saturates separately).
pub fn sample_index(model: IndexModel, delta: f64, n: u64, rng: &mut RngState) -> f64 {
    match model {
        IndexModel::Deterministic => n as f64,
        IndexModel::CoxPoisson => {
            let ml = MittagLeffler::new(MLParams::new(delta).expect("validated"), MlMethod::StableWeibull)
                .expect("validated");
            let m = ml.sample(rng);
            let lambda = 2.0 * n as f64 * m;
            rand_distr::Poisson::new(lambda).expect("positive intensity").sample(rng)
        }
        IndexModel::GeometricStable => {
            let pos = crate::stable::PosStable::new(delta).expect("validated");
            let count = if n == 1 {
                1
            } else {
                let p = 1.0 / n as f64;
                (rng.open01().ln() / (-p).ln_1p()).ceil().max(1.0) as u64
            };
            let mut total = 0.0f64;
            let mut comp = 0.0f64;
            for _ in 0..count {
                let y = 2.0 * pos.sample(rng) - comp;
                let t = total + y;
                comp = (t - total) - y;
                total = t;
            }
            ((n as f64).powf(1.0 - 1.0 / delta) * total).floor().max(0.0)
        }
    }
}

/// Raw simulation output for one `n`.
#[derive(Debug, Clone)]
pub struct SimulatedLevel {
    /// Normalized sums `S*_{Z_n} / (sigma sqrt(n))`, one per replication.
    pub sums: Vec<f64>,
    /// Untruncated `Z_n / n`, one per replication.
    pub index_over_n: Vec<f64>,
    /// Replications whose summand count hit the cap.
    pub truncated: usize,
}

struct RepOutcome {
    sum: f64,
    index_over_n: f64,
    truncated: bool,
}

fn run_replication(cfg: &RandSumConfig, n: u64, rep: usize) -> Result<RepOutcome> {
    let delta = cfg.alpha / 2.0;
    let stream = mix_streams(&[stream_of_label("randsum"), n, rep as u64]);
    let mut rng = RngState::new(cfg.seed, stream);
    let z_raw = sample_index(cfg.index_model, delta, n, &mut rng);
    let z = z_raw as u64; // saturates on overflow
    let truncated = z > cfg.cap;
    let count = z.min(cfg.cap);
    let sigma = cfg.summand_sigma()?;

    let sum = if cfg.summand == DistributionSpec::Rademacher {
        // Exact integer accumulation, 64 draws per block.
        let mut acc: i64 = 0;
        let blocks = count / 64;
        let rem = (count % 64) as u32;
        for _ in 0..blocks {
            acc += 2 * rng.next_u64().count_ones() as i64 - 64;
        }
        if rem > 0 {
            let bits = rng.next_u64() & ((1u64 << rem) - 1);
            acc += 2 * bits.count_ones() as i64 - rem as i64;
        }
        acc as f64 * cfg.summand_scale
    } else {
        let sampler = cfg.summand.sampler()?;
        let mut total = 0.0f64;
        let mut comp = 0.0f64;
        for _ in 0..count {
            let y = cfg.summand_scale * sampler(&mut rng) - comp;
            let t = total + y;
            comp = (t - total) - y;
            total = t;
        }
        total
    };

    Ok(RepOutcome {
        sum: sum / (sigma * (n as f64).sqrt()),
        index_over_n: z_raw / n as f64,
        truncated,
    })
}

#[cfg(feature = "parallel")]
fn map_replications(cfg: &RandSumConfig, n: u64) -> Vec<Result<RepOutcome>> {
    use rayon::prelude::*;
    (0..cfg.replications).into_par_iter().map(|rep| run_replication(cfg, n, rep)).collect()
}

#[cfg(not(feature = "parallel"))]
fn map_replications(cfg: &RandSumConfig, n: u64) -> Vec<Result<RepOutcome>> {
    (0..cfg.replications).map(|rep| run_replication(cfg, n, rep)).collect()
}

/// Simulate all replications at one `n`.
pub fn simulate_level(cfg: &RandSumConfig, n: u64) -> Result<SimulatedLevel> {
    cfg.validate()?;
    let mut sums = Vec::with_capacity(cfg.replications);
    let mut index_over_n = Vec::with_capacity(cfg.replications);
    let mut truncated = 0usize;
    for r in map_replications(cfg, n) {
        let r = r?;
        sums.push(r.sum);
        index_over_n.push(r.index_over_n);
        truncated += usize::from(r.truncated);
    }
    Ok(SimulatedLevel { sums, index_over_n, truncated })
}

/// Per-`n` statistics of a convergence experiment.
#[derive(Debug, Clone, Serialize)]
pub struct RandSumPerN {
    pub n: u64,
    /// KS of normalized sums against the Linnik CDF.
    pub ks_sum: f64,
    pub p_sum: f64,
    /// KS of `Z_n/n` against the CDF of `2 M_{alpha/2}`.
    pub ks_index: f64,
    pub p_index: f64,
    pub truncated: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct RandSumReport {
    pub alpha: f64,
    pub index_model: String,
    pub summand: String,
    pub replications: usize,
    pub seed: u64,
    pub cap: u64,
    pub per_n: Vec<RandSumPerN>,
    /// Whether the sum-side KS statistics are nonincreasing in `n` within
    /// Monte Carlo noise (`2/sqrt(replications)` slack).
    pub ks_nonincreasing: bool,
}

impl RandSumReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// CSV rows `(n, ks_sum, p_sum, ks_index, p_index)`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("n,ks_sum,p_sum,ks_index,p_index\n");
        for row in &self.per_n {
            out.push_str(&format!(
                "{},{},{},{},{}\n",
                row.n, row.ks_sum, row.p_sum, row.ks_index, row.p_index
            ));
        }
        out
    }

    /// Statistical verdict: the largest-`n` level passes both the sum and
    /// index tests at the given level.
    pub fn final_level_passes(&self, level: f64) -> bool {
        self.per_n
            .last()
            .map(|r| r.p_sum >= level && r.p_index >= level)
            .unwrap_or(false)
    }
}

fn index_target_cdf(delta: f64, x: f64) -> Result<f64> {
    if x <= 0.0 {
        return Ok(0.0);
    }
    ml_cdf(&MLParams::new(delta)?, x / 2.0)
}

/// Run the configured experiment: for each `n`, KS of the normalized sums
/// against the Linnik CDF and of `Z_n/n` against `2 M_{alpha/2}`.
pub fn run_randsum_experiment(cfg: &RandSumConfig) -> Result<RandSumReport> {
    cfg.validate()?;
    let delta = cfg.alpha / 2.0;
    let linnik_cdf = linnik_cdf_cached(&LinnikParams::new(cfg.alpha)?)?;
    let mut per_n = Vec::with_capacity(cfg.n_values.len());
    for &n in &cfg.n_values {
        let level = simulate_level(cfg, n)?;
        let mut sums = level.sums;
        sums.sort_unstable_by(f64::total_cmp);
        let sum_cdf: Vec<f64> = sums.iter().map(|&x| linnik_cdf.eval(x)).collect();
        let (ks_sum, p_sum) = ks_one_sample_sorted(&sums, &sum_cdf)?;

        let mut idx = level.index_over_n;
        idx.sort_unstable_by(f64::total_cmp);
        let idx_cdf = idx
            .iter()
            .map(|&x| index_target_cdf(delta, x))
            .collect::<Result<Vec<f64>>>()?;
        let (ks_index, p_index) = ks_one_sample_sorted(&idx, &idx_cdf)?;

        per_n.push(RandSumPerN {
            n,
            ks_sum,
            p_sum,
            ks_index,
            p_index,
            truncated: level.truncated,
        });
    }
    let slack = 2.0 / (cfg.replications as f64).sqrt();
    let ks_nonincreasing = per_n.windows(2).all(|w| w[1].ks_sum <= w[0].ks_sum + slack);
    Ok(RandSumReport {
        alpha: cfg.alpha,
        index_model: cfg.index_model.key().to_string(),
        summand: cfg.summand.to_string(),
        replications: cfg.replications,
        seed: cfg.seed,
        cap: cfg.cap,
        per_n,
        ks_nonincreasing,
    })
}

/// KS of `Z_n/n` at the largest configured `n` against the CDF of
/// `2 M_{alpha/2}` (no summands are drawn).
pub fn check_index_limit(cfg: &RandSumConfig) -> Result<IdentityReport> {
    cfg.validate()?;
    let n = *cfg.n_values.last().expect("validated nonempty");
    let delta = cfg.alpha / 2.0;
    let name = format!(
        "randsum-index model={} alpha={} n={}",
        cfg.index_model.key(),
        cfg.alpha,
        n
    );
    let stream = mix_streams(&[stream_of_label(&name)]);
    let model = cfg.index_model;
    let seed = cfg.seed;
    let mut idx: Vec<f64> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            (0..cfg.replications)
                .into_par_iter()
                .map(|rep| {
                    let mut rng = RngState::new(seed, mix_streams(&[stream, rep as u64]));
                    sample_index(model, delta, n, &mut rng) / n as f64
                })
                .collect()
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..cfg.replications)
                .map(|rep| {
                    let mut rng = RngState::new(seed, mix_streams(&[stream, rep as u64]));
                    sample_index(model, delta, n, &mut rng) / n as f64
                })
                .collect()
        }
    };
    idx.sort_unstable_by(f64::total_cmp);
    let cdf = idx
        .iter()
        .map(|&x| index_target_cdf(delta, x))
        .collect::<Result<Vec<f64>>>()?;
    let (statistic, p_value) = ks_one_sample_sorted(&idx, &cdf)?;
    Ok(IdentityReport {
        test_name: name,
        n: cfg.replications,
        statistic,
        p_value,
        threshold: DEFAULT_LEVEL,
        passed: p_value >= DEFAULT_LEVEL,
        seed,
    })
}
