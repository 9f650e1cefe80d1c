//! Product formulas for `exp(A + B)` and the discretized singular control.

use std::io;

use serde::Serialize;
use thiserror::Error;

use crate::frame::{ControlFrame, Regime};
use crate::su2::{distance, exp_su2, power, Su2Error, Su2Vector, UnitQuaternion};

/// Largest supported step count.
pub const MAX_STEPS: usize = 4096;
/// Errors below this are reported as exact.
pub const EXACT_TOL: f64 = 1e-13;

#[derive(Debug, Error)]
pub enum SplittingError {
    #[error("step count {0} outside [1, {MAX_STEPS}]")]
    Steps(usize),
    #[error("step counts must be increasing and at least 2")]
    StepList,
    #[error("the singular control needs kappa > cos(alpha), got regime {0}")]
    InvalidRegime(Regime),
    #[error("time {0} must be finite and non-negative")]
    Time(f64),
    #[error(transparent)]
    Su2(#[from] Su2Error),
    #[error("csv export failed: {0}")]
    Csv(#[from] csv::Error),
}

fn check_steps(n: usize) -> Result<(), SplittingError> {
    if (1..=MAX_STEPS).contains(&n) {
        Ok(())
    } else {
        Err(SplittingError::Steps(n))
    }
}

/// `[exp(A/N)·exp(B/N)]^N`.
pub fn lie_trotter(a: Su2Vector, b: Su2Vector, n: usize) -> Result<UnitQuaternion, SplittingError> {
    check_steps(n)?;
    let inv = 1.0 / n as f64;
    let step = exp_su2(a.scale(inv)) * exp_su2(b.scale(inv));
    Ok(power(step, n)?)
}

/// `[exp(A/2N)·exp(B/N)·exp(A/2N)]^N`.
pub fn strang(a: Su2Vector, b: Su2Vector, n: usize) -> Result<UnitQuaternion, SplittingError> {
    check_steps(n)?;
    let inv = 1.0 / n as f64;
    let half = exp_su2(a.scale(0.5 * inv));
    let step = half * exp_su2(b.scale(inv)) * half;
    Ok(power(step, n)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceRow {
    #[serde(rename = "N")]
    pub n: usize,
    pub trotter_err: f64,
    pub strang_err: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Order {
    /// Every error is below [`EXACT_TOL`].
    Exact,
    Fitted(f64),
}

impl Order {
    pub fn fitted(&self) -> Option<f64> {
        match self {
            Order::Exact => None,
            Order::Fitted(p) => Some(*p),
        }
    }
}

impl std::fmt::Display for Order {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Order::Exact => f.write_str("EXACT"),
            Order::Fitted(p) => write!(f, "{p:.4}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConvergenceTable {
    pub rows: Vec<ConvergenceRow>,
    pub trotter_order: Order,
    pub strang_order: Order,
}

fn fit_order(ns: &[usize], errs: &[f64]) -> Order {
    if errs.iter().all(|e| *e < EXACT_TOL) {
        return Order::Exact;
    }
    let slopes: Vec<f64> = ns
        .windows(2)
        .zip(errs.windows(2))
        .map(|(n, e)| (e[0] / e[1]).ln() / (n[1] as f64 / n[0] as f64).ln())
        .collect();
    Order::Fitted(slopes.iter().sum::<f64>() / slopes.len() as f64)
}

/// Distances of both product formulas to `exp(A + B)` and their fitted orders.
pub fn convergence_table(a: Su2Vector, b: Su2Vector, ns: &[usize]) -> Result<ConvergenceTable, SplittingError> {
    if ns.len() < 2 || ns[0] < 2 || ns.windows(2).any(|w| w[1] <= w[0]) {
        return Err(SplittingError::StepList);
    }
    let exact = exp_su2(a + b);
    let rows = ns
        .iter()
        .map(|&n| {
            Ok(ConvergenceRow {
                n,
                trotter_err: distance(lie_trotter(a, b, n)?, exact),
                strang_err: distance(strang(a, b, n)?, exact),
            })
        })
        .collect::<Result<Vec<_>, SplittingError>>()?;
    let t: Vec<f64> = rows.iter().map(|r| r.trotter_err).collect();
    let s: Vec<f64> = rows.iter().map(|r| r.strang_err).collect();
    Ok(ConvergenceTable {
        trotter_order: fit_order(ns, &t),
        strang_order: fit_order(ns, &s),
        rows,
    })
}

/// Writes the rows as CSV with header `N,trotter_err,strang_err`.
pub fn write_csv<W: io::Write>(table: &ConvergenceTable, out: W) -> Result<(), SplittingError> {
    let mut w = csv::Writer::from_writer(out);
    for row in &table.rows {
        w.serialize(row)?;
    }
    w.flush().map_err(csv::Error::from)?;
    Ok(())
}

/// The alternating word `[exp((t·w_x/N)X)·exp((t·w_y/N)Y)]^N` and its cost.
///
/// The value tends to `exp(tW)` as `N` grows; the cost is
/// `t·(w_x + κ w_y)` for every `N`.
pub fn w_limit_witness(t: f64, frame: &ControlFrame, n: usize) -> Result<(UnitQuaternion, f64), SplittingError> {
    if frame.regime() != Regime::KappaGt {
        return Err(SplittingError::InvalidRegime(frame.regime()));
    }
    if !(t.is_finite() && t >= 0.0) {
        return Err(SplittingError::Time(t));
    }
    check_steps(n)?;
    let (wx, wy) = frame.w_weights();
    let h = t / n as f64;
    let step = exp_su2(frame.x().scale(h * wx)) * exp_su2(frame.y().scale(h * wy));
    Ok((power(step, n)?, t * frame.w_rate()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::word::{word_cost, Letter, Word};
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn generic() -> (Su2Vector, Su2Vector) {
        (Su2Vector::I.scale(FRAC_PI_4), Su2Vector::J.scale(FRAC_PI_4))
    }

    #[test]
    fn single_step() {
        let (a, b) = generic();
        assert!(lie_trotter(a, b, 1).unwrap().distance(&(exp_su2(a) * exp_su2(b))) < 1e-15);
        let half = exp_su2(a.scale(0.5));
        assert!(strang(a, b, 1).unwrap().distance(&(half * exp_su2(b) * half)) < 1e-15);
        assert!(lie_trotter(a, b, 0).is_err());
        assert!(strang(a, b, MAX_STEPS + 1).is_err());
    }

    #[test]
    fn error_ratios() {
        let (a, b) = generic();
        let exact = exp_su2(a + b);
        let lt = |n| distance(lie_trotter(a, b, n).unwrap(), exact);
        let st = |n| distance(strang(a, b, n).unwrap(), exact);
        assert!((lt(16) / lt(32) - 2.0).abs() < 0.1);
        assert!((st(16) / st(32) - 4.0).abs() < 0.2);
    }

    #[test]
    fn commuting_is_exact() {
        let a = Su2Vector::new(0.3, -0.2, 0.5);
        let b = a.scale(-1.7);
        let table = convergence_table(a, b, &[2, 4, 8, 1024]).unwrap();
        assert_eq!(table.trotter_order, Order::Exact);
        assert_eq!(table.strang_order, Order::Exact);
    }

    #[test]
    fn csv_layout() {
        let (a, b) = generic();
        let table = convergence_table(a, b, &[16, 32]).unwrap();
        let mut buf = Vec::new();
        write_csv(&table, &mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("N,trotter_err,strang_err"));
        assert!(lines.next().unwrap().starts_with("16,"));
    }

    #[test]
    fn witness_cost_matches_word() {
        let f = ControlFrame::new(FRAC_PI_2, 1.0).unwrap();
        let (q, c) = w_limit_witness(0.0, &f, 8).unwrap();
        assert_eq!((q, c), (UnitQuaternion::IDENTITY, 0.0));
        let (_, c) = w_limit_witness(1.0, &f, 64).unwrap();
        assert_eq!(c, word_cost(&Word::new(vec![Letter::w(1.0)]), &f));
        let (wx, wy) = f.w_weights();
        let letters: Vec<Letter> = (0..64)
            .flat_map(|_| [Letter::x(wx / 64.0), Letter::y(wy / 64.0)])
            .collect();
        assert!((word_cost(&Word::new(letters), &f) - c).abs() < 1e-12);
        let lt = ControlFrame::new(0.3, 0.5).unwrap();
        assert!(matches!(w_limit_witness(1.0, &lt, 4), Err(SplittingError::InvalidRegime(_))));
    }
}
