//! Achievable rates at Bob and Eve for a given beamforming pair and power
//! split, and the secrecy rate built from them.

use crate::beamforming::BeamformingPair;
use crate::error::{Error, Result};
use crate::linalg::gain;
use crate::model::LinkState;

/// Per-point rate evaluation. Powers are received powers in mW.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateBreakdown {
    pub rate_bob: f64,
    pub rate_eve: f64,
    /// `max(0, rate_bob - rate_eve)`
    pub secrecy_rate: f64,
    pub signal_power_bob: f64,
    pub an_power_bob: f64,
    pub signal_power_eve: f64,
    pub an_power_eve: f64,
}

impl RateBreakdown {
    /// Signed difference `rate_bob - rate_eve` before clamping.
    pub fn difference(&self) -> f64 {
        self.rate_bob - self.rate_eve
    }
}

fn check_beta(beta: f64) -> Result<()> {
    if (0.0..=1.0).contains(&beta) {
        Ok(())
    } else {
        Err(Error::Domain(format!(
            "power split must lie in [0, 1], got {beta}"
        )))
    }
}

struct Received {
    signal: f64,
    an: f64,
    rate: f64,
}

fn received(
    g: f64,
    power: f64,
    h: &[num_complex::Complex64],
    pair: &BeamformingPair,
    sigma2: f64,
    beta: f64,
) -> Received {
    let signal = g * beta * power * gain(h, &pair.v_b);
    let an = g * (1.0 - beta) * power * gain(h, &pair.v_an);
    Received {
        signal,
        an,
        rate: (1.0 + signal / (an + sigma2)).log2(),
    }
}

fn bob(link: &LinkState, pair: &BeamformingPair, beta: f64) -> Received {
    received(link.g_ab, link.power, &link.h_b, pair, link.sigma2_b, beta)
}

fn eve(link: &LinkState, pair: &BeamformingPair, beta: f64) -> Received {
    received(link.g_ae, link.power, &link.h_e, pair, link.sigma2_e, beta)
}

/// Achievable rate from Alice to Bob, bits/s/Hz.
pub fn rate_bob(link: &LinkState, pair: &BeamformingPair, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(bob(link, pair, beta).rate)
}

/// Achievable rate from Alice to Eve, bits/s/Hz.
pub fn rate_eve(link: &LinkState, pair: &BeamformingPair, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(eve(link, pair, beta).rate)
}

/// `R_b(beta) - R_e(beta)` without clamping. This is the objective the power
/// allocation maximizes.
pub fn rate_difference(link: &LinkState, pair: &BeamformingPair, beta: f64) -> Result<f64> {
    check_beta(beta)?;
    Ok(bob(link, pair, beta).rate - eve(link, pair, beta).rate)
}

pub fn secrecy_rate(link: &LinkState, pair: &BeamformingPair, beta: f64) -> Result<RateBreakdown> {
    check_beta(beta)?;
    let b = bob(link, pair, beta);
    let e = eve(link, pair, beta);
    Ok(RateBreakdown {
        rate_bob: b.rate,
        rate_eve: e.rate,
        secrecy_rate: (b.rate - e.rate).max(0.0),
        signal_power_bob: b.signal,
        an_power_bob: b.an,
        signal_power_eve: e.signal,
        an_power_eve: e.an,
    })
}

/// Flight-level secrecy sum-rate `max(0, sum_n (R_b,n - R_e,n))` from the
/// signed per-point differences.
pub fn secrecy_sum_rate(differences: &[f64]) -> Result<f64> {
    if differences.is_empty() {
        return Err(Error::Domain(
            "secrecy sum-rate of an empty flight".to_string(),
        ));
    }
    Ok(differences.iter().sum::<f64>().max(0.0))
}

/// Sum of per-point clamped secrecy rates `sum_n max(0, R_b,n - R_e,n)`.
pub fn clamped_sum_rate(differences: &[f64]) -> Result<f64> {
    if differences.is_empty() {
        return Err(Error::Domain(
            "secrecy sum-rate of an empty flight".to_string(),
        ));
    }
    Ok(differences.iter().map(|d| d.max(0.0)).sum())
}
