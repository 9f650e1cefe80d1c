//! First-order optimality conditions for words and the exact three-letter
//! rebalance identity.
//!
//! For a 4-optimal word `exp(t₁X) exp(t₂Y) exp(t₃X) exp(t₄Y)` with
//! `t₁, t₂, t₃ < π`, stationarity of the cost on the constraint surface
//! reduces to
//!
//! ```text
//! (1 - κ cos α) sin t₂ cos t₃ = (κ - cos α) cos t₂ sin t₃
//! ```
//!
//! which couples every middle `Y` time to every middle `X` time through
//! `tan t_y = λ tan t_x`.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, TAU};

use thiserror::Error;

use crate::frame::{ControlFrame, Regime};
use crate::word::{Generator, Letter, Word};

/// Slack allowed on closed window endpoints.
const WINDOW_SLACK: f64 = 1e-12;
/// Distance from `π/2` within which a middle `X` time counts as pinned.
const PINNED_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum OptimalityError {
    #[error("{name} = {value} is outside its admissible window")]
    Domain { name: &'static str, value: f64 },
    #[error("operation is not defined in regime {0}")]
    InvalidRegime(Regime),
    #[error("rebalance gives mu = {mu} < 0 (needs cos t > 0 and small eps)")]
    NegativeMu { mu: f64 },
    #[error("rebalance lost the tau branch (tau = {tau})")]
    BranchLost { tau: f64 },
}

/// `λ = (κ - cos α) / (1 - κ cos α)`; the denominator never vanishes.
pub fn lambda_ratio(frame: &ControlFrame) -> f64 {
    frame.lambda()
}

/// Product form of the four-letter stationarity condition.
///
/// Returns `(1 - κ cos α) sin t₂ cos t₃ - (κ - cos α) cos t₂ sin t₃`, where
/// `t₂` is the middle `Y` time and `t₃` the middle `X` time.
pub fn four_word_residual(t2: f64, t3: f64, frame: &ControlFrame) -> Result<f64, OptimalityError> {
    for (name, value) in [("t2", t2), ("t3", t3)] {
        if !(value > 0.0 && value < PI) {
            return Err(OptimalityError::Domain { name, value });
        }
    }
    Ok(four_word_residual_unchecked(t2, t3, frame))
}

pub(crate) fn four_word_residual_unchecked(t2: f64, t3: f64, frame: &ControlFrame) -> f64 {
    let (wx, wy) = frame.w_weights();
    wx * t2.sin() * t3.cos() - wy * t2.cos() * t3.sin()
}

/// Coupled middle `Y` time for a middle `X` time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MiddleTime {
    /// `t_y` determined by `tan t_y = λ tan t_x`, `t_y ∈ [π/2, π)`.
    Coupled(f64),
    /// `κ = cos α`: `t_x = π/2` and `t_y` is a free parameter shared by all
    /// middle `Y` letters.
    Free,
}

/// Admissible window `[lo, hi]` for middle `X` times in a regime.
pub fn middle_x_window(regime: Regime) -> Option<(f64, f64)> {
    match regime {
        Regime::KappaGt => Some((FRAC_PI_2, PI)),
        Regime::KappaLt => Some((0.0, FRAC_PI_2)),
        Regime::KappaEq => Some((FRAC_PI_2, FRAC_PI_2)),
        Regime::FreeY => None,
    }
}

/// Middle `Y` time coupled to `t_x` by `tan t_y = λ tan t_x`.
pub fn middle_time_partner(t_x: f64, frame: &ControlFrame) -> Result<MiddleTime, OptimalityError> {
    let domain = OptimalityError::Domain {
        name: "t_x",
        value: t_x,
    };
    match frame.regime() {
        Regime::KappaGt => {
            if !(FRAC_PI_2 - WINDOW_SLACK..PI).contains(&t_x) {
                return Err(domain);
            }
        }
        Regime::KappaLt => {
            if !(t_x > 0.0 && t_x <= FRAC_PI_2 + WINDOW_SLACK) {
                return Err(domain);
            }
        }
        Regime::KappaEq => {
            return if (t_x - FRAC_PI_2).abs() <= PINNED_TOL {
                Ok(MiddleTime::Free)
            } else {
                Err(domain)
            };
        }
        Regime::FreeY => return Err(OptimalityError::InvalidRegime(Regime::FreeY)),
    }
    Ok(MiddleTime::Coupled(coupled_y_time(t_x, frame.lambda())))
}

/// Smooth branch of `tan t_y = λ tan t_x` through `(π/2, π/2)`, valued in `[0, π)`.
///
/// Inside the regime windows it lands in `[π/2, π)`; outside them it is the
/// analytic continuation used while an iteration is still moving.
pub fn coupled_y_time(t_x: f64, lambda: f64) -> f64 {
    let (s, c) = t_x.sin_cos();
    let t = (lambda * s).atan2(c);
    if t < 0.0 {
        t + PI
    } else if t >= PI {
        t - PI
    } else {
        t
    }
}

/// Direction of the three-letter rebalance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RebalanceVariant {
    /// `exp(εX) exp(tY) exp(εX) = exp(τY) exp(μX) exp(τY)`.
    XyxToYxy,
    /// `exp(εY) exp(tX) exp(εY) = exp(τX) exp(μY) exp(τX)`.
    YxyToXyx,
}

impl RebalanceVariant {
    /// Outer and middle generators of the left-hand word.
    fn left_generators(self) -> (Generator, Generator) {
        match self {
            RebalanceVariant::XyxToYxy => (Generator::X, Generator::Y),
            RebalanceVariant::YxyToXyx => (Generator::Y, Generator::X),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RebalanceResult {
    pub tau: f64,
    pub mu: f64,
}

/// Solves the three-letter identity exactly for `(τ, μ)`.
///
/// Both sides are written as `a + bC + cD` in the basis `{1, C, D, Z}` (the
/// `Z` part vanishes), with `C` the outer and `D` the middle generator of
/// the left side. Then `sin μ = b` and `(cos 2τ, sin 2τ)` solve a 2×2 linear
/// system whose determinant is `1 - sin²α sin²μ`. The two variants share
/// the same scalar system.
pub fn rebalance_xyx(
    eps: f64,
    t: f64,
    frame: &ControlFrame,
    _variant: RebalanceVariant,
) -> Result<RebalanceResult, OptimalityError> {
    if !(eps >= 0.0 && eps.is_finite()) {
        return Err(OptimalityError::Domain {
            name: "eps",
            value: eps,
        });
    }
    if !t.is_finite() {
        return Err(OptimalityError::Domain { name: "t", value: t });
    }
    let (sin_t, cos_t) = t.sin_cos();
    if cos_t <= 0.0 {
        return Err(OptimalityError::NegativeMu {
            mu: (2.0 * eps).sin() * cos_t,
        });
    }
    let ca = frame.cos_alpha();
    let sa = frame.sin_alpha();
    let (s2e, c2e) = (2.0 * eps).sin_cos();
    let se = eps.sin();

    let a = c2e * cos_t - ca * s2e * sin_t;
    let b = s2e * cos_t - 2.0 * ca * se * se * sin_t;
    let c = sin_t;

    let mu = b.clamp(-1.0, 1.0).asin();
    if mu < 0.0 {
        return Err(OptimalityError::NegativeMu { mu });
    }
    let (sin_mu, cos_mu) = mu.sin_cos();
    let det = 1.0 - sa * sa * sin_mu * sin_mu;
    let sin_2tau = ((c + b * ca) * cos_mu - a * ca * sin_mu) / det;
    let cos_2tau = (a * cos_mu + ca * sin_mu * (c + ca * sin_mu)) / det;

    // Unwrap 2τ to the branch continuous with 2τ = t at ε = 0.
    let raw = sin_2tau.atan2(cos_2tau);
    let two_tau = t + (raw - t + PI).rem_euclid(TAU) - PI;
    let tau = 0.5 * two_tau;
    if (tau - 0.5 * t).abs() >= FRAC_PI_4 || tau < 0.0 {
        return Err(OptimalityError::BranchLost { tau });
    }
    Ok(RebalanceResult { tau, mu })
}

/// First-order expansion `τ ≈ t/2 + ε cos α (1 - cos t)`, `μ ≈ 2ε cos t`.
pub fn rebalance_first_order(eps: f64, t: f64, frame: &ControlFrame) -> RebalanceResult {
    RebalanceResult {
        tau: 0.5 * t + eps * frame.cos_alpha() * (1.0 - t.cos()),
        mu: 2.0 * eps * t.cos(),
    }
}

/// Left and right words of the rebalance identity.
pub fn rebalance_words(
    eps: f64,
    t: f64,
    result: &RebalanceResult,
    variant: RebalanceVariant,
) -> (Word, Word) {
    let (og, mg) = variant.left_generators();
    let left = Word::new(vec![
        Letter::new(og, eps),
        Letter::new(mg, t),
        Letter::new(og, eps),
    ]);
    let right = Word::new(vec![
        Letter::new(mg, result.tau),
        Letter::new(og, result.mu),
        Letter::new(mg, result.tau),
    ]);
    (left, right)
}

/// Exact cost saved by the rebalance (old cost minus new cost).
///
/// Variant (i): `2ε + κt - 2κτ - μ`; variant (ii): `t + 2κε - 2τ - κμ`.
pub fn cost_improvement(
    eps: f64,
    t: f64,
    frame: &ControlFrame,
    variant: RebalanceVariant,
) -> Result<f64, OptimalityError> {
    if !(t > 0.0 && t < FRAC_PI_2) {
        return Err(OptimalityError::Domain { name: "t", value: t });
    }
    let RebalanceResult { tau, mu } = rebalance_xyx(eps, t, frame, variant)?;
    let k = frame.kappa();
    Ok(match variant {
        RebalanceVariant::XyxToYxy => 2.0 * eps + k * t - 2.0 * k * tau - mu,
        RebalanceVariant::YxyToXyx => t + 2.0 * k * eps - 2.0 * tau - k * mu,
    })
}
