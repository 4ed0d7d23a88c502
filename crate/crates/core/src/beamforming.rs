//! Leakage-based transmit beamformers for a fixed power split `beta`.
//!
//! The message beamformer maximizes the signal-to-leakage-and-noise ratio
//! (SLNR) toward Bob; the artificial-noise beamformer maximizes the
//! AN-and-leakage-to-noise ratio (ANLNR) toward Eve. Both generalized Rayleigh
//! quotients have a rank-one numerator, so the maximizer is
//! `(sigma^2 I + p h_x h_x^H)^{-1} h_y` up to scale, which the rank-one
//! inverse identity evaluates in O(M).

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{gain, norm_sqr, normalize, rank_one_solve};
use crate::model::{check_unit, LinkState};

/// Unit-norm message beamformer `v_b` and artificial-noise beamformer `v_an`.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamformingPair {
    pub v_b: Vec<Complex64>,
    pub v_an: Vec<Complex64>,
}

impl BeamformingPair {
    pub fn new(v_b: Vec<Complex64>, v_an: Vec<Complex64>) -> Result<Self> {
        if v_b.len() != v_an.len() {
            return Err(Error::Domain(format!(
                "beamformers differ in length ({} vs {})",
                v_b.len(),
                v_an.len()
            )));
        }
        check_unit(&v_b, "message beamformer")?;
        check_unit(&v_an, "AN beamformer")?;
        Ok(BeamformingPair { v_b, v_an })
    }
}

fn check_len(v: &[Complex64], link: &LinkState) -> Result<()> {
    if v.len() != link.num_antennas() {
        return Err(Error::Domain(format!(
            "vector has {} entries but the array has {}",
            v.len(),
            link.num_antennas()
        )));
    }
    Ok(())
}

/// `beta P |h_b^H v|^2 / v^H (beta P h_e h_e^H + sigma_b^2 I) v`
pub fn slnr_value(v: &[Complex64], link: &LinkState, beta: f64) -> Result<f64> {
    check_len(v, link)?;
    check_unit(v, "probe vector")?;
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(Error::Domain(format!(
            "SLNR needs beta in (0, 1], got {beta}"
        )));
    }
    let p = beta * link.power;
    Ok(p * gain(&link.h_b, v) / (p * gain(&link.h_e, v) + link.sigma2_b * norm_sqr(v)))
}

/// `(1 - beta) P |h_e^H v|^2 / v^H ((1 - beta) P h_b h_b^H + sigma_e^2 I) v`
pub fn anlnr_value(v: &[Complex64], link: &LinkState, beta: f64) -> Result<f64> {
    check_len(v, link)?;
    check_unit(v, "probe vector")?;
    if !(0.0..1.0).contains(&beta) {
        return Err(Error::Domain(format!(
            "ANLNR needs beta in [0, 1), got {beta}"
        )));
    }
    let p = (1.0 - beta) * link.power;
    Ok(p * gain(&link.h_e, v) / (p * gain(&link.h_b, v) + link.sigma2_e * norm_sqr(v)))
}

fn leakage_beamformer(
    noise: f64,
    leak_power: f64,
    leak_dir: &[Complex64],
    target: &[Complex64],
) -> Result<Vec<Complex64>> {
    let scale = leak_power.sqrt();
    let x: Vec<Complex64> = leak_dir.iter().map(|h| h * scale).collect();
    normalize(rank_one_solve(noise, &x, target)).ok_or_else(|| {
        Error::InternalConsistency("leakage beamformer collapsed to the zero vector".to_string())
    })
}

/// Max-SLNR message beamformer, normalized
/// `[beta P h_e h_e^H + sigma_b^2 I]^{-1} h_b`.
///
/// `beta = 0` is accepted: the matrix reduces to `sigma_b^2 I` and the result
/// is the matched filter `h_b / sqrt(M)`.
pub fn slnr_beamformer(link: &LinkState, beta: f64) -> Result<Vec<Complex64>> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!(
            "power split must lie in [0, 1], got {beta}"
        )));
    }
    leakage_beamformer(link.sigma2_b, beta * link.power, &link.h_e, &link.h_b)
}

/// Max-ANLNR artificial-noise beamformer, normalized
/// `[(1 - beta) P h_b h_b^H + sigma_e^2 I]^{-1} h_e`.
pub fn anlnr_beamformer(link: &LinkState, beta: f64) -> Result<Vec<Complex64>> {
    if !(0.0..=1.0).contains(&beta) {
        return Err(Error::Domain(format!(
            "power split must lie in [0, 1], got {beta}"
        )));
    }
    leakage_beamformer(
        link.sigma2_e,
        (1.0 - beta) * link.power,
        &link.h_b,
        &link.h_e,
    )
}

/// Both leakage beamformers for the split `beta`.
pub fn leakage_pair(link: &LinkState, beta: f64) -> Result<BeamformingPair> {
    Ok(BeamformingPair {
        v_b: slnr_beamformer(link, beta)?,
        v_an: anlnr_beamformer(link, beta)?,
    })
}
