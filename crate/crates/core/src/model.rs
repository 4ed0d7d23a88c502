//! Physical substrate: the transmit array, the flight geometry and the
//! line-of-sight link seen at each sampling point.
//!
//! Frame: Alice's array lies along the +x axis. A direction angle `theta` is
//! measured from that axis, `theta = acos(dx / |d|)`, so `theta` lies in
//! `[0, pi]` and only `cos(theta)` enters the array response.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg;

pub type Point3 = [f64; 3];

fn sub(a: Point3, b: Point3) -> Point3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

fn length(a: Point3) -> f64 {
    (a[0] * a[0] + a[1] * a[1] + a[2] * a[2]).sqrt()
}

/// Uniform linear array description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ArrayConfig {
    pub num_antennas: usize,
    /// Element spacing in wavelengths, `d / lambda`.
    pub spacing: f64,
}

impl ArrayConfig {
    pub fn new(num_antennas: usize, spacing: f64) -> Result<Self> {
        let cfg = ArrayConfig {
            num_antennas,
            spacing,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// Half-wavelength array with `num_antennas` elements.
    pub fn half_wavelength(num_antennas: usize) -> Result<Self> {
        Self::new(num_antennas, 0.5)
    }

    pub fn validate(&self) -> Result<()> {
        if self.num_antennas < 2 {
            return Err(Error::Configuration(format!(
                "array needs at least 2 antennas, got {}",
                self.num_antennas
            )));
        }
        if !(self.spacing > 0.0) || !self.spacing.is_finite() {
            return Err(Error::Configuration(format!(
                "element spacing must be positive, got {}",
                self.spacing
            )));
        }
        Ok(())
    }
}

/// Array response toward one direction. Every entry has unit modulus.
#[derive(Debug, Clone, PartialEq)]
pub struct SteeringVector(Vec<Complex64>);

impl SteeringVector {
    pub fn as_slice(&self) -> &[Complex64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn into_inner(self) -> Vec<Complex64> {
        self.0
    }
}

impl std::ops::Deref for SteeringVector {
    type Target = [Complex64];

    fn deref(&self) -> &[Complex64] {
        &self.0
    }
}

/// Steering vector `h(theta)` of a centred ULA.
///
/// Entry `m` (1-based) is `exp(j 2 pi psi(m))` with
/// `psi(m) = -(m - (M + 1) / 2) (d / lambda) cos(theta)`.
pub fn steering_vector(theta: f64, array: &ArrayConfig) -> Result<SteeringVector> {
    array.validate()?;
    if !(0.0..=PI).contains(&theta) {
        return Err(Error::Domain(format!(
            "direction angle must lie in [0, pi], got {theta}"
        )));
    }
    let m_total = array.num_antennas as f64;
    let cos_theta = theta.cos();
    let entries = (1..=array.num_antennas)
        .map(|m| {
            let psi = -((m as f64 - (m_total + 1.0) / 2.0) * array.spacing * cos_theta);
            Complex64::from_polar(1.0, 2.0 * PI * psi)
        })
        .collect();
    Ok(SteeringVector(entries))
}

/// Positions and motion parameters of one flight.
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioGeometry {
    pub alice: Point3,
    pub eve: Point3,
    /// Flight start `S`.
    pub start: Point3,
    /// Flight end `D`.
    pub end: Point3,
    /// Flight altitude `H` in metres. Both `start` and `end` sit at this height.
    pub altitude: f64,
    /// Speed `V` in m/s.
    pub speed: f64,
    /// Sampling interval in seconds.
    pub sample_interval: f64,
    pub path_loss_exponent: f64,
    /// Linear gain at the 1 m reference distance.
    pub reference_gain: f64,
}

impl Default for ScenarioGeometry {
    /// 800 m flight at 20 m altitude and 8 m/s, sampled every second, with
    /// Eve on the ground 200 m from Alice along the array axis.
    fn default() -> Self {
        ScenarioGeometry {
            alice: [0.0, 0.0, 0.0],
            eve: [200.0, 0.0, 0.0],
            start: [0.0, 0.0, 20.0],
            end: [800.0, 0.0, 20.0],
            altitude: 20.0,
            speed: 8.0,
            sample_interval: 1.0,
            path_loss_exponent: 2.0,
            reference_gain: 1.0,
        }
    }
}

impl ScenarioGeometry {
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v > 0.0 && v.is_finite() {
                Ok(())
            } else {
                Err(Error::Configuration(format!(
                    "{name} must be positive, got {v}"
                )))
            }
        };
        positive("altitude", self.altitude)?;
        positive("speed", self.speed)?;
        positive("sample interval", self.sample_interval)?;
        positive("path loss exponent", self.path_loss_exponent)?;
        positive("reference gain", self.reference_gain)?;
        for p in [self.alice, self.eve, self.start, self.end] {
            if p.iter().any(|c| !c.is_finite()) {
                return Err(Error::Configuration(format!("non-finite position {p:?}")));
            }
        }
        if self.flight_length() <= 0.0 {
            return Err(Error::Configuration(
                "flight start and end coincide".to_string(),
            ));
        }
        if self.start[2] != self.altitude || self.end[2] != self.altitude {
            return Err(Error::Configuration(format!(
                "flight endpoints must sit at the altitude {} (start z = {}, end z = {})",
                self.altitude, self.start[2], self.end[2]
            )));
        }
        Ok(())
    }

    pub fn flight_length(&self) -> f64 {
        length(sub(self.end, self.start))
    }

    /// Number of sampling points `floor((L / V) / dt)`.
    pub fn num_samples(&self) -> usize {
        let slots = self.flight_length() / self.speed / self.sample_interval;
        // absorb representation error such as 0.3 / 0.1 = 2.9999999999999996
        (slots + 1e-9).floor() as usize
    }
}

/// One sampled Bob position with the angles and distances seen from Alice.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrajectoryPoint {
    /// 1-based sample index.
    pub index: usize,
    pub bob: Point3,
    pub theta_b: f64,
    pub theta_e: f64,
    pub d_ab: f64,
    pub d_ae: f64,
}

/// Angle between the array axis (+x) and the line from `from` to `to`.
pub fn direction_angle(from: Point3, to: Point3) -> Result<f64> {
    let d = sub(to, from);
    let dist = length(d);
    if !(dist > 0.0) {
        return Err(Error::Domain(format!(
            "direction undefined: points {from:?} and {to:?} coincide"
        )));
    }
    Ok((d[0] / dist).clamp(-1.0, 1.0).acos())
}

/// Samples Bob's position every `sample_interval` seconds, `n = 1..=N`.
pub fn sample_trajectory(geom: &ScenarioGeometry) -> Result<Vec<TrajectoryPoint>> {
    geom.validate()?;
    let n_points = geom.num_samples();
    if n_points == 0 {
        return Err(Error::Configuration(format!(
            "flight of {} m at {} m/s is shorter than one {} s sampling interval",
            geom.flight_length(),
            geom.speed,
            geom.sample_interval
        )));
    }
    let len = geom.flight_length();
    let dir = sub(geom.end, geom.start);
    let unit = [dir[0] / len, dir[1] / len, dir[2] / len];
    let theta_e = direction_angle(geom.alice, geom.eve)?;
    let d_ae = length(sub(geom.eve, geom.alice));

    (1..=n_points)
        .map(|n| {
            let travelled = n as f64 * geom.sample_interval * geom.speed;
            let bob = [
                geom.start[0] + travelled * unit[0],
                geom.start[1] + travelled * unit[1],
                geom.start[2] + travelled * unit[2],
            ];
            Ok(TrajectoryPoint {
                index: n,
                bob,
                theta_b: direction_angle(geom.alice, bob)?,
                theta_e,
                d_ab: length(sub(bob, geom.alice)),
                d_ae,
            })
        })
        .collect()
}

/// Linear gain `alpha / distance^c`.
pub fn path_loss(distance: f64, geom: &ScenarioGeometry) -> Result<f64> {
    if !(distance > 0.0) || !distance.is_finite() {
        return Err(Error::Domain(format!(
            "path loss needs a positive distance, got {distance}"
        )));
    }
    Ok(geom.reference_gain / distance.powf(geom.path_loss_exponent))
}

/// Everything needed to evaluate one sampling point.
#[derive(Debug, Clone, PartialEq)]
pub struct LinkState {
    pub h_b: SteeringVector,
    pub h_e: SteeringVector,
    pub g_ab: f64,
    pub g_ae: f64,
    pub sigma2_b: f64,
    pub sigma2_e: f64,
    /// Total transmit power `P_s` (mW).
    pub power: f64,
    pub index: usize,
}

impl LinkState {
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        h_b: SteeringVector,
        h_e: SteeringVector,
        g_ab: f64,
        g_ae: f64,
        sigma2_b: f64,
        sigma2_e: f64,
        power: f64,
        index: usize,
    ) -> Result<Self> {
        let link = LinkState {
            h_b,
            h_e,
            g_ab,
            g_ae,
            sigma2_b,
            sigma2_e,
            power,
            index,
        };
        link.validate()?;
        Ok(link)
    }

    /// Builds the link for one trajectory sample.
    pub fn from_point(
        point: &TrajectoryPoint,
        geom: &ScenarioGeometry,
        array: &ArrayConfig,
        sigma2_b: f64,
        sigma2_e: f64,
        power: f64,
    ) -> Result<Self> {
        Self::new(
            steering_vector(point.theta_b, array)?,
            steering_vector(point.theta_e, array)?,
            path_loss(point.d_ab, geom)?,
            path_loss(point.d_ae, geom)?,
            sigma2_b,
            sigma2_e,
            power,
            point.index,
        )
    }

    pub fn num_antennas(&self) -> usize {
        self.h_b.len()
    }

    pub fn validate(&self) -> Result<()> {
        if self.h_b.len() != self.h_e.len() || self.h_b.is_empty() {
            return Err(Error::Configuration(format!(
                "steering vectors differ in length ({} vs {})",
                self.h_b.len(),
                self.h_e.len()
            )));
        }
        for (name, v) in [
            ("g_ab", self.g_ab),
            ("g_ae", self.g_ae),
            ("sigma2_b", self.sigma2_b),
            ("sigma2_e", self.sigma2_e),
            ("transmit power", self.power),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Configuration(format!(
                    "{name} must be positive, got {v}"
                )));
            }
        }
        Ok(())
    }

    /// Copy of this link with Eve's view replaced by Bob's, so both receivers
    /// see identical channels.
    pub fn mirrored(&self) -> Self {
        LinkState {
            h_e: self.h_b.clone(),
            g_ae: self.g_ab,
            sigma2_e: self.sigma2_b,
            ..self.clone()
        }
    }
}

pub(crate) fn check_unit(v: &[Complex64], what: &str) -> Result<()> {
    let n = linalg::norm(v);
    if (n - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!(
            "{what} must have unit norm, got {n}"
        )));
    }
    Ok(())
}
