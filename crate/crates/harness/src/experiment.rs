//! Runs every configured strategy over the sampled flight.

use rayon::prelude::*;
use thiserror::Error;
use uavdm_core::ais::optimize_point_grid;
use uavdm_core::{
    optimize_point, run_baseline, sample_trajectory, secrecy_rate, AisConfig, ArrayConfig,
    LinkState, RateBreakdown, TrajectoryPoint,
};

use crate::config::{ConfigError, ExperimentConfig, Strategy};

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{context}: {source}")]
    Model {
        context: String,
        #[source]
        source: uavdm_core::Error,
    },
    #[error("cannot write {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed results: {0}")]
    Parse(String),
    #[error("cannot build worker pool: {0}")]
    Pool(String),
}

impl HarnessError {
    fn model(context: impl Into<String>, source: uavdm_core::Error) -> Self {
        HarnessError::Model {
            context: context.into(),
            source,
        }
    }
}

/// Milliwatts from dBm.
pub fn dbm_to_mw(dbm: f64) -> f64 {
    10f64.powf(dbm / 10.0)
}

/// One row of output: a strategy evaluated at one sampling point.
#[derive(Debug, Clone, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct ResultRecord {
    pub strategy: String,
    #[serde(rename = "M")]
    pub m: usize,
    #[serde(rename = "Ps_dbm")]
    pub ps_dbm: f64,
    pub n: usize,
    pub theta_b: f64,
    pub beta: f64,
    #[serde(rename = "Rb")]
    pub rb: f64,
    #[serde(rename = "Re")]
    pub re: f64,
    /// Clamped secrecy rate.
    #[serde(rename = "Rs")]
    pub rs: f64,
    /// Zero for fixed-split strategies.
    pub iterations: usize,
    pub converged: bool,
}

/// Result of one strategy at one link.
#[derive(Debug, Clone, PartialEq)]
pub struct PointOutcome {
    pub beta: f64,
    pub rates: RateBreakdown,
    pub iterations: usize,
    pub converged: bool,
}

/// Evaluates `strategy` on a single link.
pub fn evaluate_link(
    strategy: Strategy,
    link: &LinkState,
    ais: &AisConfig,
    grid_step: f64,
) -> uavdm_core::Result<PointOutcome> {
    match strategy {
        Strategy::Ais => {
            let out = optimize_point(link, ais)?;
            Ok(PointOutcome {
                beta: out.beta,
                rates: out.rates(link)?,
                iterations: out.trace.iterations_used,
                converged: out.trace.converged,
            })
        }
        Strategy::GridOracle => {
            let out = optimize_point_grid(link, ais, grid_step)?;
            Ok(PointOutcome {
                beta: out.beta,
                rates: out.rates(link)?,
                iterations: out.trace.iterations_used,
                converged: out.trace.converged,
            })
        }
        Strategy::Fixed(beta) => {
            let (pair, _) = run_baseline(link, beta)?;
            Ok(PointOutcome {
                beta,
                rates: secrecy_rate(link, &pair, beta)?,
                iterations: 0,
                converged: true,
            })
        }
    }
}

/// Aggregate over the flight for one (strategy, M, P) combination.
#[derive(Debug, Clone, PartialEq)]
pub struct Summary {
    pub strategy: String,
    pub m: usize,
    pub ps_dbm: f64,
    pub points: usize,
    /// Mean of the clamped per-point secrecy rates.
    pub mean_sr: f64,
    /// `sum_n max(0, R_b,n - R_e,n)`
    pub ssr_clamped: f64,
    /// `max(0, sum_n (R_b,n - R_e,n))`
    pub ssr_total: f64,
    pub mean_iterations: f64,
    pub not_converged: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentResults {
    /// Ordered by strategy, antenna count, power and sample index, following
    /// the order of the config lists.
    pub records: Vec<ResultRecord>,
    pub summaries: Vec<Summary>,
}

impl ExperimentResults {
    pub fn summary(&self, strategy: &str, m: usize, ps_dbm: f64) -> Option<&Summary> {
        self.summaries
            .iter()
            .find(|s| s.strategy == strategy && s.m == m && s.ps_dbm == ps_dbm)
    }
}

struct Job<'a> {
    strategy: Strategy,
    array: ArrayConfig,
    ps_dbm: f64,
    point: &'a TrajectoryPoint,
}

fn run_job(job: &Job<'_>, cfg: &ExperimentConfig) -> Result<ResultRecord, HarnessError> {
    let context = || {
        format!(
            "{} with M = {} at {} dBm, point {}",
            job.strategy, job.array.num_antennas, job.ps_dbm, job.point.index
        )
    };
    let link = LinkState::from_point(
        job.point,
        &cfg.geometry,
        &job.array,
        dbm_to_mw(cfg.noise_dbm_bob),
        dbm_to_mw(cfg.noise_dbm_eve),
        dbm_to_mw(job.ps_dbm),
    )
    .map_err(|e| HarnessError::model(context(), e))?;
    let out = evaluate_link(job.strategy, &link, &cfg.ais, cfg.grid_step)
        .map_err(|e| HarnessError::model(context(), e))?;
    Ok(ResultRecord {
        strategy: job.strategy.to_string(),
        m: job.array.num_antennas,
        ps_dbm: job.ps_dbm,
        n: job.point.index,
        theta_b: job.point.theta_b,
        beta: out.beta,
        rb: out.rates.rate_bob,
        re: out.rates.rate_eve,
        rs: out.rates.secrecy_rate,
        iterations: out.iterations,
        converged: out.converged,
    })
}

fn summarize(records: &[ResultRecord], points: usize) -> Vec<Summary> {
    records
        .chunks(points)
        .map(|chunk| {
            let first = &chunk[0];
            let diffs: Vec<f64> = chunk.iter().map(|r| r.rb - r.re).collect();
            let n = chunk.len() as f64;
            Summary {
                strategy: first.strategy.clone(),
                m: first.m,
                ps_dbm: first.ps_dbm,
                points: chunk.len(),
                mean_sr: chunk.iter().map(|r| r.rs).sum::<f64>() / n,
                ssr_clamped: chunk.iter().map(|r| r.rs).sum(),
                ssr_total: diffs.iter().sum::<f64>().max(0.0),
                mean_iterations: chunk.iter().map(|r| r.iterations as f64).sum::<f64>() / n,
                not_converged: chunk.iter().filter(|r| !r.converged).count(),
            }
        })
        .collect()
}

/// Runs the full sweep on the current thread.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<ExperimentResults, HarnessError> {
    run_experiment_parallel(cfg, 1)
}

/// Runs the full sweep on `threads` workers. The output does not depend on
/// the thread count.
pub fn run_experiment_parallel(
    cfg: &ExperimentConfig,
    threads: usize,
) -> Result<ExperimentResults, HarnessError> {
    cfg.validate()?;
    let trajectory =
        sample_trajectory(&cfg.geometry).map_err(|e| HarnessError::model("trajectory", e))?;

    let mut jobs = Vec::new();
    for &strategy in &cfg.strategies {
        for &m in &cfg.antenna_sweep {
            let array = ArrayConfig {
                num_antennas: m,
                spacing: cfg.array.spacing,
            };
            for &ps_dbm in &cfg.power_sweep_dbm {
                jobs.extend(trajectory.iter().map(|point| Job {
                    strategy,
                    array,
                    ps_dbm,
                    point,
                }));
            }
        }
    }

    let records: Vec<ResultRecord> = if threads <= 1 {
        jobs.iter()
            .map(|j| run_job(j, cfg))
            .collect::<Result<_, _>>()?
    } else {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| HarnessError::Pool(e.to_string()))?;
        pool.install(|| {
            jobs.par_iter()
                .map(|j| run_job(j, cfg))
                .collect::<Result<_, _>>()
        })?
    };

    let summaries = summarize(&records, trajectory.len());
    Ok(ExperimentResults { records, summaries })
}
