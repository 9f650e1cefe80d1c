//! Control geometry: the two unit controls `X`, `Y` at angle `α` and the
//! relative cost factor `κ` of `Y`.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::su2::Su2Vector;

/// Band around `κ = cos α` (and around `cos α = 0`, `κ = 0`) treated as equality.
pub const REGIME_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum FrameError {
    #[error("alpha = {0} must lie in the open interval (0, π)")]
    Alpha(f64),
    #[error("kappa = {0} must lie in [0, 1]")]
    Kappa(f64),
    #[error("kappa = 0 with cos(alpha) = {0} > 0 is not classified; replace Y by -Y (alpha -> π - alpha)")]
    Unclassified(f64),
}

/// Which structure theorem governs optimal words for a frame.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Regime {
    /// `κ > cos α`: bang-bang words or the singular `W` control.
    KappaGt,
    /// `0 < κ < cos α`: bang-bang words with short middle `X` times.
    KappaLt,
    /// `κ = cos α > 0`: middle `X` times pinned at `π/2`.
    KappaEq,
    /// `κ = 0`, `cos α = 0`: words of length at most three.
    FreeY,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::KappaGt => "KAPPA_GT",
            Regime::KappaLt => "KAPPA_LT",
            Regime::KappaEq => "KAPPA_EQ",
            Regime::FreeY => "FREE_Y",
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ControlFrame {
    alpha: f64,
    kappa: f64,
    cos_alpha: f64,
    sin_alpha: f64,
    regime: Regime,
}

impl ControlFrame {
    pub fn new(alpha: f64, kappa: f64) -> Result<Self, FrameError> {
        if !(alpha > 0.0 && alpha < PI) {
            return Err(FrameError::Alpha(alpha));
        }
        if !(0.0..=1.0).contains(&kappa) {
            return Err(FrameError::Kappa(kappa));
        }
        let (sin_alpha, cos_alpha) = alpha.sin_cos();
        let gap = kappa - cos_alpha;
        let regime = if kappa.abs() <= REGIME_TOL && cos_alpha.abs() <= REGIME_TOL {
            Regime::FreeY
        } else if gap > REGIME_TOL {
            Regime::KappaGt
        } else if gap.abs() <= REGIME_TOL {
            Regime::KappaEq
        } else if kappa > REGIME_TOL {
            Regime::KappaLt
        } else {
            return Err(FrameError::Unclassified(cos_alpha));
        };
        Ok(Self {
            alpha,
            kappa,
            cos_alpha,
            sin_alpha,
            regime,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn kappa(&self) -> f64 {
        self.kappa
    }

    pub fn cos_alpha(&self) -> f64 {
        self.cos_alpha
    }

    pub fn sin_alpha(&self) -> f64 {
        self.sin_alpha
    }

    pub fn regime(&self) -> Regime {
        self.regime
    }

    pub fn x(&self) -> Su2Vector {
        Su2Vector::I
    }

    pub fn y(&self) -> Su2Vector {
        Su2Vector::new(self.cos_alpha, self.sin_alpha, 0.0)
    }

    /// `Z = ½[X, Y] = sin(α)·k`.
    pub fn z(&self) -> Su2Vector {
        Su2Vector::new(0.0, 0.0, self.sin_alpha)
    }

    /// Weights `(1 - κ cos α, κ - cos α)` of `X` and `Y` in `W`.
    pub fn w_weights(&self) -> (f64, f64) {
        (
            1.0 - self.kappa * self.cos_alpha,
            self.kappa - self.cos_alpha,
        )
    }

    /// Singular direction `W = (1 - κ cos α) X + (κ - cos α) Y`; not unit in general.
    pub fn w(&self) -> Su2Vector {
        let (wx, wy) = self.w_weights();
        self.x().scale(wx) + self.y().scale(wy)
    }

    /// Cost per unit time of `exp(tW)`: `κ² - 2κ cos α + 1`.
    ///
    /// Written as the cost-weighted sum of the `X` and `Y` weights so that
    /// the discretized alternating word has bit-identical cost.
    pub fn w_rate(&self) -> f64 {
        let (wx, wy) = self.w_weights();
        wx + self.kappa * wy
    }

    /// `λ = (κ - cos α) / (1 - κ cos α)`.
    pub fn lambda(&self) -> f64 {
        let (wx, wy) = self.w_weights();
        wy / wx
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

    #[test]
    fn regimes() {
        assert_eq!(ControlFrame::new(FRAC_PI_2, 1.0).unwrap().regime(), Regime::KappaGt);
        assert_eq!(ControlFrame::new(0.3, 0.5).unwrap().regime(), Regime::KappaLt);
        assert_eq!(ControlFrame::new(FRAC_PI_3, 0.5).unwrap().regime(), Regime::KappaEq);
        assert_eq!(ControlFrame::new(FRAC_PI_2, 0.0).unwrap().regime(), Regime::FreeY);
        assert_eq!(ControlFrame::new(2.0, 0.0).unwrap().regime(), Regime::KappaGt);
        assert!(matches!(ControlFrame::new(1.0, 0.0), Err(FrameError::Unclassified(_))));
        assert!(ControlFrame::new(0.0, 0.5).is_err());
        assert!(ControlFrame::new(PI, 0.5).is_err());
        assert!(ControlFrame::new(1.0, 1.5).is_err());
        assert!(ControlFrame::new(f64::NAN, 0.5).is_err());
    }

    #[test]
    fn geometry_invariants() {
        for &(alpha, kappa) in &[(0.4, 0.95), (1.2, 0.1), (2.5, 0.7), (FRAC_PI_2, 1.0)] {
            let f = ControlFrame::new(alpha, kappa).unwrap();
            assert!((f.x().norm() - 1.0).abs() < 1e-15);
            assert!((f.y().norm() - 1.0).abs() < 1e-15);
            assert!((f.x().dot(&f.y()) - alpha.cos()).abs() < 1e-15);
            let half_bracket = f.x().bracket(&f.y()).scale(0.5);
            assert!(half_bracket.max_abs_diff(&f.z()) < 1e-15);
            assert!(1.0 - kappa * alpha.cos() > 0.0);
            // W is orthogonal to the line through X and Y/κ.
            let dir = f.x() - f.y().scale(1.0 / kappa);
            assert!(f.w().dot(&dir).abs() < 1e-12);
            let closed_form = kappa * kappa - 2.0 * kappa * alpha.cos() + 1.0;
            assert!((f.w_rate() - closed_form).abs() < 1e-15);
        }
    }
}
