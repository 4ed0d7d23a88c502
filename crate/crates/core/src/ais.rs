//! Alternating iteration between the leakage beamformers and the Max-SR power
//! split at a single sampling point.
//!
//! Iteration `i` takes the beamformers designed for `beta^{i-1}`, solves the
//! power allocation for them to get `beta^i`, then redesigns the beamformers
//! for `beta^i`. Each trace record stores `beta^i`, the beamformers designed
//! for it and `f(beta^i) = R_b - R_e` evaluated with those beamformers. The
//! loop stops once two consecutive recorded values differ by at most
//! `epsilon`.
//!
//! SR may dip between iterations: the beamformers maximize SLNR and ANLNR,
//! not SR, so only the stopping rule and the iteration cap bound the loop.

use log::warn;

use crate::beamforming::{leakage_pair, BeamformingPair};
use crate::error::{Error, Result};
use crate::model::LinkState;
use crate::power_allocation::{beta_grid_oracle, optimal_beta, PaSolution};
use crate::rates::{rate_difference, secrecy_rate, RateBreakdown};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AisConfig {
    pub beta_init: f64,
    /// Stopping tolerance on `|f(beta^i) - f(beta^{i-1})|`, bits/s/Hz.
    pub epsilon: f64,
    pub max_iterations: usize,
}

impl Default for AisConfig {
    fn default() -> Self {
        AisConfig {
            beta_init: 0.1,
            epsilon: 1e-6,
            max_iterations: 50,
        }
    }
}

impl AisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.beta_init > 0.0 && self.beta_init < 1.0) {
            return Err(Error::Configuration(format!(
                "initial power split must lie in (0, 1), got {}",
                self.beta_init
            )));
        }
        if !(self.epsilon > 0.0) {
            return Err(Error::Configuration(format!(
                "convergence tolerance must be positive, got {}",
                self.epsilon
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::Configuration(
                "iteration cap must be at least 1".to_string(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationRecord {
    pub beta: f64,
    pub pair: BeamformingPair,
    /// `R_b - R_e` at `beta` with `pair`, unclamped.
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AisTrace {
    /// Record 0 holds the initial split; record `i` the result of iteration `i`.
    pub records: Vec<IterationRecord>,
    pub converged: bool,
    pub iterations_used: usize,
}

/// Outcome of the alternating loop. `solution` is the power-allocation result
/// that produced `beta`.
#[derive(Debug, Clone, PartialEq)]
pub struct AisOutcome<S = PaSolution> {
    pub pair: BeamformingPair,
    pub beta: f64,
    /// `R_b - R_e` at `beta` with `pair`, unclamped.
    pub value: f64,
    pub solution: S,
    pub trace: AisTrace,
}

impl<S> AisOutcome<S> {
    pub fn secrecy_rate(&self) -> f64 {
        self.value.max(0.0)
    }

    /// Rates of the returned beamformers at the returned split.
    pub fn rates(&self, link: &LinkState) -> Result<RateBreakdown> {
        secrecy_rate(link, &self.pair, self.beta)
    }
}

/// Runs the alternating loop with an arbitrary power-allocation step.
/// `allocate` maps the current beamformers to `(beta, solution)`.
pub fn alternate<S, F>(link: &LinkState, cfg: &AisConfig, mut allocate: F) -> Result<AisOutcome<S>>
where
    S: Clone,
    F: FnMut(&BeamformingPair) -> Result<(f64, S)>,
{
    cfg.validate()?;
    link.validate()?;

    let mut pair = leakage_pair(link, cfg.beta_init)?;
    let mut value = rate_difference(link, &pair, cfg.beta_init)?;
    let mut records = vec![IterationRecord {
        beta: cfg.beta_init,
        pair: pair.clone(),
        value,
    }];

    let mut best: Option<(usize, S)> = None;
    let mut last: Option<S> = None;
    let mut converged = false;
    let mut iterations_used = 0;

    for i in 1..=cfg.max_iterations {
        let (beta, solution) = allocate(&pair)?;
        let next_pair = leakage_pair(link, beta)?;
        let next_value = rate_difference(link, &next_pair, beta)?;
        records.push(IterationRecord {
            beta,
            pair: next_pair.clone(),
            value: next_value,
        });
        iterations_used = i;

        if best
            .as_ref()
            .is_none_or(|(k, _)| next_value > records[*k].value)
        {
            best = Some((i, solution.clone()));
        }
        last = Some(solution);

        if (next_value - value).abs() <= cfg.epsilon {
            converged = true;
            break;
        }
        pair = next_pair;
        value = next_value;
    }

    let (index, solution) = if converged {
        (records.len() - 1, last.expect("at least one iteration ran"))
    } else {
        warn!(
            "point {}: no convergence within {} iterations, keeping best iterate",
            link.index, cfg.max_iterations
        );
        best.expect("at least one iteration ran")
    };
    let chosen = records[index].clone();
    Ok(AisOutcome {
        pair: chosen.pair,
        beta: chosen.beta,
        value: chosen.value,
        solution,
        trace: AisTrace {
            records,
            converged,
            iterations_used,
        },
    })
}

/// Alternating beamforming and closed-form Max-SR power allocation.
pub fn optimize_point(link: &LinkState, cfg: &AisConfig) -> Result<AisOutcome<PaSolution>> {
    alternate(link, cfg, |pair| {
        let sol = optimal_beta(link, pair)?;
        Ok((sol.beta_star, sol))
    })
}

/// Same loop with the power split chosen by exhaustive search over a grid of
/// resolution `step`. The solution carries `(beta, f(beta))`.
pub fn optimize_point_grid(
    link: &LinkState,
    cfg: &AisConfig,
    step: f64,
) -> Result<AisOutcome<(f64, f64)>> {
    alternate(link, cfg, |pair| {
        let best = beta_grid_oracle(link, pair, step)?;
        Ok((best.0, best))
    })
}

/// Leakage beamformers and rates at a fixed split, without iteration.
pub fn run_baseline(link: &LinkState, fixed_beta: f64) -> Result<(BeamformingPair, RateBreakdown)> {
    if !(fixed_beta > 0.0 && fixed_beta < 1.0) {
        return Err(Error::Domain(format!(
            "fixed power split must lie in (0, 1), got {fixed_beta}"
        )));
    }
    let pair = leakage_pair(link, fixed_beta)?;
    let rates = secrecy_rate(link, &pair, fixed_beta)?;
    Ok((pair, rates))
}
