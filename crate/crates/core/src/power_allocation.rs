//! Max-SR power allocation for fixed beamformers.
//!
//! With `v_b` and `v_an` fixed, the rate difference is
//! `f(beta) = R_b - R_e = log2 phi(beta)` where
//! `phi(beta) = (A beta^2 + B beta + C) / (D beta^2 + E beta + F)` and `F = C`.
//! The stationary points of `phi` solve
//! `(AE - BD) beta^2 + 2C(A - D) beta + C(B - E) = 0`, so the maximizer over
//! `[0, 1]` is found by comparing `phi` at the admissible roots and at
//! `beta = 1`. `beta = 0` is never returned: `f(0) = 0` carries no secrecy.
//!
//! At high SNR the monomial form is badly conditioned near `beta = 1`: the
//! terms of `A + B + C` are up to ~1e12 times larger than their sum. The
//! coefficients and the derivative algebra are therefore carried in
//! double-double precision ([`TwoFloat`]).

use log::debug;
use twofloat::TwoFloat;

use crate::beamforming::BeamformingPair;
use crate::error::{Error, Result};
use crate::linalg::gain;
use crate::model::LinkState;
use crate::rates::rate_difference;

fn tf(x: f64) -> TwoFloat {
    TwoFloat::from(x)
}

fn to_f64(x: TwoFloat) -> f64 {
    f64::from(x)
}

/// Coefficients of `phi(beta)`, held in double-double precision.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RationalCoefficients {
    pub a: TwoFloat,
    pub b: TwoFloat,
    pub c: TwoFloat,
    pub d: TwoFloat,
    pub e: TwoFloat,
    pub f: TwoFloat,
}

impl RationalCoefficients {
    /// Builds coefficients from plain values, with `F = C`.
    pub fn from_f64(a: f64, b: f64, c: f64, d: f64, e: f64) -> Self {
        RationalCoefficients {
            a: tf(a),
            b: tf(b),
            c: tf(c),
            d: tf(d),
            e: tf(e),
            f: tf(c),
        }
    }

    /// `[A, B, C, D, E, F]` rounded to `f64`.
    pub fn to_f64(&self) -> [f64; 6] {
        [self.a, self.b, self.c, self.d, self.e, self.f].map(to_f64)
    }

    pub fn numerator_ext(&self, beta: f64) -> TwoFloat {
        (self.a * beta + self.b) * beta + self.c
    }

    pub fn denominator_ext(&self, beta: f64) -> TwoFloat {
        (self.d * beta + self.e) * beta + self.f
    }

    pub fn phi(&self, beta: f64) -> f64 {
        to_f64(self.numerator_ext(beta) / self.denominator_ext(beta))
    }

    /// `AE - BD`, the leading coefficient of the derivative numerator.
    /// Written as `AE - DB` so that `A = D, B = E` cancels exactly.
    pub fn leading(&self) -> TwoFloat {
        self.a * self.e - self.d * self.b
    }

    /// Numerator of `d phi / d beta`:
    /// `(AE - BD) beta^2 + 2C(A - D) beta + C(B - E)`.
    pub fn derivative_numerator(&self, beta: f64) -> f64 {
        let linear = self.c * (self.a - self.d) * 2.0;
        let constant = self.c * (self.b - self.e);
        to_f64((self.leading() * beta + linear) * beta + constant)
    }
}

/// Builds `A..F` from the four received-gain terms. No self-check.
pub fn coefficients_unchecked(link: &LinkState, pair: &BeamformingPair) -> RationalCoefficients {
    let p = tf(link.power);
    let (g_ab, g_ae) = (tf(link.g_ab), tf(link.g_ae));
    let bob_msg = tf(gain(&link.h_b, &pair.v_b));
    let bob_an = tf(gain(&link.h_b, &pair.v_an));
    let eve_msg = tf(gain(&link.h_e, &pair.v_b));
    let eve_an = tf(gain(&link.h_e, &pair.v_an));

    // AN-plus-noise at each receiver when all power goes to AN
    let bob_floor = g_ab * p * bob_an + link.sigma2_b;
    let eve_floor = g_ae * p * eve_an + link.sigma2_e;
    let cross = g_ab * g_ae * p * p;

    let a = cross * eve_an * (bob_an - bob_msg);
    let b = eve_floor * g_ab * p * (bob_msg - bob_an) - g_ae * p * eve_an * bob_floor;
    let c = bob_floor * eve_floor;
    let d = cross * bob_an * (eve_an - eve_msg);
    let e = bob_floor * g_ae * p * (eve_msg - eve_an) - g_ab * p * bob_an * eve_floor;
    RationalCoefficients {
        a,
        b,
        c,
        d,
        e,
        f: c,
    }
}

/// Betas at which [`rational_coefficients`] cross-checks `log2 phi` against
/// the rate formulas.
pub const SELF_CHECK_BETAS: [f64; 5] = [0.0, 0.25, 0.5, 0.75, 1.0];

/// Largest tolerated `|log2 phi(beta) - (R_b - R_e)|` in the self-check.
pub const SELF_CHECK_TOLERANCE: f64 = 1e-9;

/// Coefficients of `phi` for the given link and beamformers, verified against
/// the rate formulas at [`SELF_CHECK_BETAS`].
pub fn rational_coefficients(
    link: &LinkState,
    pair: &BeamformingPair,
) -> Result<RationalCoefficients> {
    let coef = coefficients_unchecked(link, pair);
    if !(to_f64(coef.c) > 0.0) {
        return Err(Error::InternalConsistency(format!(
            "constant coefficient must be positive, got {}",
            to_f64(coef.c)
        )));
    }
    for beta in SELF_CHECK_BETAS {
        let via_phi = coef.phi(beta).log2();
        let via_rates = rate_difference(link, pair, beta)?;
        let err = (via_phi - via_rates).abs();
        if !(err <= SELF_CHECK_TOLERANCE) {
            return Err(Error::InternalConsistency(format!(
                "log2 phi({beta}) = {via_phi} disagrees with R_b - R_e = {via_rates} (|diff| = {err:e})"
            )));
        }
    }
    Ok(coef)
}

/// Stationary points of `phi`. Roots are reported whether or not they fall
/// inside `(0, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StationaryPoints {
    /// `C^2 (A - D)^2 - C (AE - BD)(B - E)`
    pub delta: f64,
    /// `AE - BD`
    pub leading: f64,
    /// `(-C(A - D) + sqrt(delta)) / (AE - BD)`
    pub root1: Option<f64>,
    /// `(-C(A - D) - sqrt(delta)) / (AE - BD)`
    pub root2: Option<f64>,
    /// `(E - B) / (2 (A - D))`, the single root when `AE - BD = 0`.
    pub root3: Option<f64>,
    /// `AE - BD = 0` and `A = D` and `B = E`: `phi` is identically 1.
    pub constant: bool,
}

pub fn stationary_points(c: &RationalCoefficients) -> StationaryPoints {
    let zero = tf(0.0);
    let leading = c.leading();
    let half_linear = c.c * (c.a - c.d);
    let constant_term = c.c * (c.b - c.e);
    let delta = half_linear * half_linear - leading * constant_term;

    let mut out = StationaryPoints {
        delta: to_f64(delta),
        leading: to_f64(leading),
        root1: None,
        root2: None,
        root3: None,
        constant: false,
    };

    if leading == zero {
        out.leading = 0.0;
        if c.a != c.d {
            out.root3 = Some(to_f64((c.e - c.b) / ((c.a - c.d) * 2.0)));
        } else {
            out.constant = c.b == c.e;
        }
        return out;
    }
    if delta < zero {
        return out;
    }

    // Cancellation-free quadratic roots; the product of the roots is
    // constant_term / leading.
    let sqrt_delta = if delta == zero { zero } else { delta.sqrt() };
    let non_negative = half_linear >= zero;
    let q = if non_negative {
        -(half_linear + sqrt_delta)
    } else {
        sqrt_delta - half_linear
    };
    let (plus, minus) = if q == zero {
        (0.0, 0.0)
    } else if non_negative {
        (to_f64(constant_term / q), to_f64(q / leading))
    } else {
        (to_f64(q / leading), to_f64(constant_term / q))
    };
    out.root1 = Some(plus);
    out.root2 = Some(minus);
    out
}

/// Which member of the candidate set produced `beta*`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Candidate {
    Root1,
    Root2,
    DegenerateRoot,
    Endpoint1,
    ConstantFunction,
}

impl Candidate {
    pub fn as_str(&self) -> &'static str {
        match self {
            Candidate::Root1 => "root1",
            Candidate::Root2 => "root2",
            Candidate::DegenerateRoot => "degenerate_root",
            Candidate::Endpoint1 => "endpoint_1",
            Candidate::ConstantFunction => "constant_function",
        }
    }
}

/// Result of the closed-form power allocation.
#[derive(Debug, Clone, PartialEq)]
pub struct PaSolution {
    pub beta_star: f64,
    /// `f(beta*) = R_b - R_e`, not clamped. May be negative when no split
    /// achieves positive secrecy; the secrecy rate is then zero.
    pub secrecy_rate_at_beta: f64,
    pub winning_candidate: Candidate,
    pub delta: f64,
    pub coefficients: RationalCoefficients,
}

impl PaSolution {
    /// Achieved secrecy rate `max(0, f(beta*))`.
    pub fn secrecy_rate(&self) -> f64 {
        self.secrecy_rate_at_beta.max(0.0)
    }

    pub fn is_secure(&self) -> bool {
        self.secrecy_rate_at_beta > 0.0
    }
}

fn in_open_unit(beta: f64) -> bool {
    beta > 0.0 && beta < 1.0
}

/// Relative tie band when comparing `phi` at two candidates.
const TIE_TOLERANCE: f64 = 1e-12;

fn better(candidate: f64, incumbent: f64) -> bool {
    candidate - incumbent > TIE_TOLERANCE * candidate.abs().max(incumbent.abs())
}

/// Applies the case analysis to pick `beta*` from the candidate set.
pub fn select_candidate(coef: &RationalCoefficients, sp: &StationaryPoints) -> (f64, Candidate) {
    if sp.constant {
        return (1.0, Candidate::ConstantFunction);
    }
    if sp.leading == 0.0 {
        // phi has at most the single stationary point root3
        return match sp.root3 {
            Some(r) if in_open_unit(r) && better(coef.phi(r), coef.phi(1.0)) => {
                (r, Candidate::DegenerateRoot)
            }
            _ => (1.0, Candidate::Endpoint1),
        };
    }
    if sp.delta < 0.0 {
        // derivative keeps the sign of AE - BD on the whole line: increasing
        // phi peaks at 1; decreasing phi is best at the excluded 0, leaving 1
        // as the only member of the reduced candidate set
        return (1.0, Candidate::Endpoint1);
    }

    // candidates in ascending beta so that ties resolve toward the larger one
    let mut cands: Vec<(f64, Candidate)> =
        [(sp.root1, Candidate::Root1), (sp.root2, Candidate::Root2)]
            .into_iter()
            .filter_map(|(r, which)| r.filter(|&b| in_open_unit(b)).map(|b| (b, which)))
            .collect();
    cands.sort_by(|x, y| x.0.total_cmp(&y.0));
    cands.push((1.0, Candidate::Endpoint1));

    let mut best = cands[0];
    let mut best_phi = coef.phi(best.0);
    for &(beta, which) in &cands[1..] {
        let phi = coef.phi(beta);
        if !better(best_phi, phi) {
            best = (beta, which);
            best_phi = phi;
        }
    }
    best
}

/// Closed-form Max-SR power split for fixed beamformers.
pub fn optimal_beta(link: &LinkState, pair: &BeamformingPair) -> Result<PaSolution> {
    let coefficients = rational_coefficients(link, pair)?;
    let sp = stationary_points(&coefficients);
    let (beta_star, winning_candidate) = select_candidate(&coefficients, &sp);
    let secrecy_rate_at_beta = rate_difference(link, pair, beta_star)?;
    if secrecy_rate_at_beta <= 0.0 {
        debug!(
            "point {}: no split gives positive secrecy (f(1) = {secrecy_rate_at_beta:e})",
            link.index
        );
    }
    Ok(PaSolution {
        beta_star,
        secrecy_rate_at_beta,
        winning_candidate,
        delta: sp.delta,
        coefficients,
    })
}

/// One-dimensional exhaustive search of `f` over `{0, step, 2 step, ..., 1}`.
/// Returns `(beta, f(beta))`; ties go to the larger `beta`.
pub fn beta_grid_oracle(link: &LinkState, pair: &BeamformingPair, step: f64) -> Result<(f64, f64)> {
    if !(step > 0.0 && step <= 1e-2) {
        return Err(Error::Domain(format!(
            "grid step must lie in (0, 0.01], got {step}"
        )));
    }
    let count = (1.0 / step + 1e-9).floor() as usize;
    let mut best = (0.0, rate_difference(link, pair, 0.0)?);
    let grid = (1..=count).map(|k| (k as f64 * step).min(1.0));
    let tail = (count as f64 * step < 1.0).then_some(1.0);
    for beta in grid.chain(tail) {
        let value = rate_difference(link, pair, beta)?;
        if value >= best.1 {
            best = (beta, value);
        }
    }
    Ok(best)
}
