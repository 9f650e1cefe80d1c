//! Brute-force estimator of n-optimal costs, independent of the solver.
//!
//! Each restart first runs a penalized coordinate descent over all letter
//! times. The result seeds further descents in which three consecutive
//! letters are always solved exactly by three-axis angle decomposition, so
//! every scored point is feasible; the solved window cycles through the
//! word. Words of length at most three are enumerated in closed form.

use std::cmp::Ordering;
use std::f64::consts::{PI, TAU};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::frame::{ControlFrame, Regime};
use crate::su2::{conj_action, exp_along, Quaternion, Su2Vector, UnitQuaternion};
use crate::word::{Decomposition, Generator, Word};

/// Residual below which an exactly solved tail counts as feasible.
const TAIL_TOL: f64 = 1e-9;
/// Smallest coordinate-descent step before a descent stops.
const MIN_STEP: f64 = 1e-12;
const INITIAL_STEP: f64 = 0.25;
/// Passes over all exactly solved windows after the first descent.
const MAX_CYCLES: usize = 4;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OracleError {
    #[error("no restart reached residual below {tol:e} for pattern {pattern}")]
    NoFeasible { tol: f64, pattern: String },
    #[error("generator W is only available when kappa > cos(alpha)")]
    SingularUnavailable,
    #[error("invalid oracle configuration: {0}")]
    Config(&'static str),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleConfig {
    pub restarts: usize,
    /// Penalty weights, applied in order.
    pub penalty_schedule: Vec<f64>,
    /// Maximum coordinate sweeps per descent.
    pub local_steps: usize,
    /// Upper end of the per-letter time window `[0, time_box)`.
    pub time_box: f64,
    pub seed: u64,
    /// Final residual a result must reach.
    pub accept_tol: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            restarts: 64,
            penalty_schedule: vec![1e2, 1e4, 1e6],
            local_steps: 500,
            time_box: TAU,
            seed: 20_240_611,
            accept_tol: 1e-7,
        }
    }
}

impl OracleConfig {
    pub fn validate(&self) -> Result<(), OracleError> {
        if self.restarts == 0 || self.local_steps == 0 {
            return Err(OracleError::Config("restarts and local_steps must be positive"));
        }
        if self.penalty_schedule.is_empty() || self.penalty_schedule.iter().any(|r| !(*r > 0.0)) {
            return Err(OracleError::Config("penalty weights must be positive"));
        }
        if !(self.time_box > 0.0 && self.accept_tol > 0.0) {
            return Err(OracleError::Config("time_box and accept_tol must be positive"));
        }
        Ok(())
    }
}

/// Rotation of `v` about the unit `axis` by `angle`.
fn rotate(axis: Su2Vector, angle: f64, v: Su2Vector) -> Su2Vector {
    let (s, c) = angle.sin_cos();
    v.scale(c) + axis.cross(&v).scale(s) + axis.scale(axis.dot(&v) * (1.0 - c))
}

/// Signed angle taking the component of `from` orthogonal to `axis` onto that of `to`.
fn angle_about(axis: Su2Vector, from: Su2Vector, to: Su2Vector) -> Option<f64> {
    let f = from - axis.scale(axis.dot(&from));
    let t = to - axis.scale(axis.dot(&to));
    if f.norm() < 1e-9 || t.norm() < 1e-9 {
        return None;
    }
    Some(axis.dot(&f.cross(&t)).atan2(f.dot(&t)))
}

/// Half-angle of `q` about the unit `axis`, assuming `q` is a rotation about it.
fn angle_along(axis: Su2Vector, q: UnitQuaternion) -> f64 {
    q.vector().dot(&axis).atan2(q.scalar()).rem_euclid(TAU)
}

/// Angle `θ` with `exp(θa) = g` when `g` is a rotation about the unit axis `a`.
pub fn euler1(a: Su2Vector, g: &UnitQuaternion) -> Vec<f64> {
    vec![angle_along(a, *g)]
}

/// Angles `(θ₁, θ₂)` with `exp(θ₁a)·exp(θ₂b) = g`, unit axes. Candidates
/// are returned unverified; infeasible targets yield garbage the caller rejects.
pub fn euler2(a: Su2Vector, b: Su2Vector, g: &UnitQuaternion) -> Vec<[f64; 2]> {
    let u = conj_action(*g, b);
    let Some(theta) = angle_about(a, b, u) else {
        // b is carried onto a: the first angle is free, take zero
        return vec![[0.0, angle_along(b, *g)]];
    };
    let mut out = Vec::with_capacity(2);
    for t1 in [0.5 * theta, 0.5 * theta + PI] {
        let rem = exp_along(a, -t1) * *g;
        out.push([t1.rem_euclid(TAU), angle_along(b, rem)]);
    }
    out
}

/// Angles `(θ₁, θ₂, θ₃)` with `exp(θ₁a)·exp(θ₂b)·exp(θ₃c) = g`, unit axes,
/// consecutive axes not parallel. Candidates are returned unverified.
pub fn euler3(a: Su2Vector, b: Su2Vector, c: Su2Vector, g: &UnitQuaternion) -> Vec<[f64; 3]> {
    let u = conj_action(*g, c);
    let ab = a.dot(&b);
    let bc = b.dot(&c);
    let p = a.dot(&c) - ab * bc;
    let q = a.dot(&b.cross(&c));
    let s = a.dot(&u) - ab * bc;
    let r = p.hypot(q);
    if r < 1e-14 {
        return vec![];
    }
    let ratio = s / r;
    if ratio.abs() > 1.0 + 1e-9 {
        return vec![];
    }
    let phi = q.atan2(p);
    let delta = ratio.clamp(-1.0, 1.0).acos();
    let mut betas = vec![phi + delta];
    if delta > 1e-12 {
        betas.push(phi - delta);
    }
    let mut out = Vec::with_capacity(8);
    for beta in betas {
        let v = rotate(b, beta, c);
        match angle_about(a, v, u) {
            Some(theta) => {
                for t1 in [0.5 * theta, 0.5 * theta + PI] {
                    for t2 in [0.5 * beta, 0.5 * beta + PI] {
                        let rem = exp_along(b, -t2) * exp_along(a, -t1) * *g;
                        out.push([t1.rem_euclid(TAU), t2.rem_euclid(TAU), angle_along(c, rem)]);
                    }
                }
            }
            None => {
                // gimbal: cost is linear in the free split, so an end angle is zero
                for t2 in [0.5 * beta, 0.5 * beta + PI] {
                    let rem = exp_along(b, -t2) * *g;
                    out.push([0.0, t2.rem_euclid(TAU), angle_along(c, rem)]);
                }
                for [t1, t2] in euler2(a, b, g) {
                    out.push([t1, t2, 0.0]);
                }
            }
        }
    }
    out
}

/// Letter data for one pattern: unit axes, speeds and cost rates.
struct Problem {
    axes: Vec<Su2Vector>,
    speeds: Vec<f64>,
    rates: Vec<f64>,
    target: UnitQuaternion,
    time_box: f64,
}

impl Problem {
    fn new(pattern: &[Generator], frame: &ControlFrame, target: &UnitQuaternion, time_box: f64) -> Self {
        let vecs: Vec<Su2Vector> = pattern.iter().map(|g| g.vector(frame)).collect();
        Self {
            axes: vecs.iter().map(|v| v.scale(1.0 / v.norm())).collect(),
            speeds: vecs.iter().map(|v| v.norm()).collect(),
            rates: pattern.iter().map(|g| g.rate(frame)).collect(),
            target: *target,
            time_box,
        }
    }

    fn n(&self) -> usize {
        self.axes.len()
    }

    fn cost(&self, times: &[f64]) -> f64 {
        times.iter().zip(&self.rates).map(|(t, r)| t * r).sum()
    }

    fn product(&self, times: &[f64], range: std::ops::Range<usize>) -> UnitQuaternion {
        let mut acc = Quaternion::ONE;
        for k in range {
            acc = acc * exp_along(self.axes[k], self.speeds[k] * times[k]).quaternion();
        }
        UnitQuaternion::normalize(acc).unwrap_or(UnitQuaternion::IDENTITY)
    }

    fn residual(&self, times: &[f64]) -> f64 {
        self.product(times, 0..self.n()).distance(&self.target)
    }

    fn penalized(&self, times: &[f64], rho: f64) -> f64 {
        let d = self.residual(times);
        self.cost(times) + rho * d * d
    }

    fn in_box(&self, t: f64) -> bool {
        (0.0..self.time_box).contains(&t)
    }

    /// Cheapest exact solve of the (up to) three letters starting at `w`,
    /// the other times held fixed.
    fn complete(&self, times: &[f64], w: usize) -> Option<(f64, Vec<f64>)> {
        let n = self.n();
        let k = n.min(3);
        let mut times = times.to_vec();
        let rest = self.product(&times, 0..w).inverse() * self.target * self.product(&times, w + k..n).inverse();
        let a = &self.axes[w..w + k];
        let windows: Vec<Vec<f64>> = match k {
            0 => vec![vec![]],
            1 => euler1(a[0], &rest).into_iter().map(|t| vec![t]).collect(),
            2 => euler2(a[0], a[1], &rest).into_iter().map(|t| t.to_vec()).collect(),
            _ => euler3(a[0], a[1], a[2], &rest).into_iter().map(|t| t.to_vec()).collect(),
        };
        let mut best: Option<(f64, Vec<f64>)> = None;
        for angles in windows {
            for (j, angle) in angles.iter().enumerate() {
                times[w + j] = angle / self.speeds[w + j];
            }
            if !times[w..w + k].iter().all(|t| self.in_box(*t)) {
                continue;
            }
            if self.residual(&times) >= TAIL_TOL {
                continue;
            }
            let c = self.cost(&times);
            if best.as_ref().is_none_or(|(bc, bt)| better(c, &times, *bc, bt)) {
                best = Some((c, times.clone()));
            }
        }
        best
    }

    /// Coordinate descent over every time outside the exactly solved window at `w`.
    fn descend(&self, times: &[f64], w: usize, hi: f64, sweeps: usize) -> Option<(f64, Vec<f64>)> {
        let n = self.n();
        let free: Vec<usize> = (0..n).filter(|i| *i < w || *i >= w + 3).collect();
        let fill = |x: &[f64]| {
            let mut full = times.to_vec();
            for (j, &i) in free.iter().enumerate() {
                full[i] = x[j];
            }
            full
        };
        let mut x: Vec<f64> = free.iter().map(|&i| times[i]).collect();
        let score = |x: &[f64]| self.complete(&fill(x), w).map_or(f64::INFINITY, |(c, _)| c);
        let best = coordinate_descent(&mut x, hi, sweeps, score);
        if best.is_finite() {
            self.complete(&fill(&x), w)
        } else {
            None
        }
    }
}

fn better(c: f64, t: &[f64], bc: f64, bt: &[f64]) -> bool {
    match c.total_cmp(&bc) {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => t.iter().zip(bt).map(|(a, b)| a.total_cmp(b)).find(|o| o.is_ne()) == Some(Ordering::Less),
    }
}

/// Coordinate descent with halving steps, clamped to `[0, hi]`.
fn coordinate_descent<F: Fn(&[f64]) -> f64>(x: &mut [f64], hi: f64, sweeps: usize, f: F) -> f64 {
    let mut fx = f(x);
    let mut step = INITIAL_STEP;
    for _ in 0..sweeps {
        let mut moved = false;
        for k in 0..x.len() {
            for dir in [1.0, -1.0] {
                let old = x[k];
                x[k] = (old + dir * step).clamp(0.0, hi);
                let ft = f(x);
                if ft < fx {
                    fx = ft;
                    moved = true;
                    break;
                }
                x[k] = old;
            }
        }
        if !moved {
            step *= 0.5;
            if step < MIN_STEP {
                break;
            }
        }
    }
    fx
}

fn sub_seed(seed: u64, pattern: &[Generator], restart: usize) -> u64 {
    let mut h = seed ^ 0x9e37_79b9_7f4a_7c15;
    for g in pattern {
        h = h.rotate_left(7) ^ g.symbol() as u64;
        h = h.wrapping_mul(0x1000_0000_01b3);
    }
    h ^ (restart as u64).wrapping_mul(0xbf58_476d_1ce4_e5b9)
}

fn pattern_string(pattern: &[Generator]) -> String {
    pattern.iter().map(|g| g.symbol()).collect()
}

/// Best restart for patterns of length four or more.
fn search(problem: &Problem, pattern: &[Generator], cfg: &OracleConfig) -> Option<(f64, Vec<f64>)> {
    let n = problem.n();
    let hi = cfg.time_box * (1.0 - f64::EPSILON);
    // the last window first, then every other one, so that no fold of a
    // single parameterization can stop the descent
    let windows: Vec<usize> = std::iter::once(n - 3).chain(0..n - 3).collect();
    let results: Vec<Option<(f64, Vec<f64>)>> = (0..cfg.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(cfg.seed, pattern, r));
            let mut t: Vec<f64> = (0..n).map(|_| rng.random_range(0.0..cfg.time_box)).collect();
            for &rho in &cfg.penalty_schedule {
                coordinate_descent(&mut t, hi, cfg.local_steps, |x| problem.penalized(x, rho));
            }
            let mut best = problem.descend(&t, windows[0], hi, cfg.local_steps)?;
            for _ in 0..MAX_CYCLES {
                let before = best.0;
                for &w in &windows {
                    if let Some(next) = problem.descend(&best.1, w, hi, cfg.local_steps) {
                        if next.0 < best.0 {
                            best = next;
                        }
                    }
                }
                if best.0 >= before {
                    break;
                }
            }
            Some(best)
        })
        .collect();
    results
        .into_iter()
        .flatten()
        .reduce(|a, b| if better(b.0, &b.1, a.0, &a.1) { b } else { a })
}

/// Cheapest word of the given letter pattern found by the oracle.
///
/// The result is an upper bound on the true n-optimal cost of the pattern.
pub fn n_optimal(
    target: &UnitQuaternion,
    pattern: &[Generator],
    frame: &ControlFrame,
    cfg: &OracleConfig,
) -> Result<Decomposition, OracleError> {
    cfg.validate()?;
    if pattern.contains(&Generator::W) && frame.regime() != Regime::KappaGt {
        return Err(OracleError::SingularUnavailable);
    }
    let problem = Problem::new(pattern, frame, target, cfg.time_box);
    let found = if pattern.len() <= 3 {
        problem.complete(&vec![0.0; pattern.len()], 0)
    } else {
        search(&problem, pattern, cfg)
    };
    let no_feasible = || OracleError::NoFeasible {
        tol: cfg.accept_tol,
        pattern: pattern_string(pattern),
    };
    let (_, times) = found.ok_or_else(no_feasible)?;
    let word = Word::from_parts(pattern, &times);
    let family = format!("oracle:{}", pattern_string(pattern));
    let d = Decomposition::new(word, target, frame, family).map_err(|_| no_feasible())?;
    if d.residual < cfg.accept_tol {
        Ok(d)
    } else {
        Err(no_feasible())
    }
}

/// Letter patterns searched by [`infimum_estimate`] for the given bound.
pub fn oracle_patterns(frame: &ControlFrame, max_n: usize) -> Vec<Vec<Generator>> {
    let mut out = vec![vec![]];
    for n in 1..=max_n {
        for start in [Generator::X, Generator::Y] {
            let mut g = start;
            out.push(
                (0..n)
                    .map(|_| {
                        let cur = g;
                        g = g.other();
                        cur
                    })
                    .collect(),
            );
        }
    }
    if frame.regime() == Regime::KappaGt {
        let c = [Generator::X, Generator::Y];
        let w = Generator::W;
        let mut shapes = vec![vec![w]];
        for a in c {
            shapes.push(vec![a, w]);
            shapes.push(vec![w, a]);
            for b in c {
                shapes.push(vec![a, w, b]);
            }
        }
        out.extend(shapes.into_iter().filter(|s| s.len() <= max_n.max(1)));
    }
    out
}

/// Cheapest result over all alternating patterns of length at most `max_n`
/// (and the singular shapes when `κ > cos α`).
pub fn infimum_estimate(
    target: &UnitQuaternion,
    frame: &ControlFrame,
    max_n: usize,
    cfg: &OracleConfig,
) -> Result<Decomposition, OracleError> {
    if max_n == 0 {
        return Err(OracleError::Config("max_n must be at least 1"));
    }
    cfg.validate()?;
    let mut best: Option<Decomposition> = None;
    for pattern in oracle_patterns(frame, max_n) {
        let Ok(d) = n_optimal(target, &pattern, frame, cfg) else {
            continue;
        };
        let replace = match &best {
            None => true,
            Some(b) => d.cost < b.cost || (d.cost == b.cost && d.word.len() < b.word.len()),
        };
        if replace {
            best = Some(d);
        }
    }
    best.ok_or(OracleError::NoFeasible {
        tol: cfg.accept_tol,
        pattern: format!("any of length <= {max_n}"),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::exp_su2;
    use crate::word::{eval_word, Letter};
    use std::f64::consts::FRAC_PI_2;

    fn quick() -> OracleConfig {
        OracleConfig {
            restarts: 8,
            ..OracleConfig::default()
        }
    }

    #[test]
    fn euler3_reconstructs() {
        let a = Su2Vector::I;
        let b = Su2Vector::new(0.3, 0.9, 0.0).normalized().unwrap();
        let g = exp_along(a, 0.7) * exp_along(b, 2.1) * exp_along(a, 0.2);
        let sols = euler3(a, b, a, &g);
        assert!(!sols.is_empty());
        for [t1, t2, t3] in &sols {
            let h = exp_along(a, *t1) * exp_along(b, *t2) * exp_along(a, *t3);
            assert!(h.distance(&g) < 1e-12);
        }
        assert!(sols.iter().any(|s| (s[0] - 0.7).abs() < 1e-9 && (s[1] - 2.1).abs() < 1e-9));
    }

    #[test]
    fn euler3_gimbal() {
        let a = Su2Vector::I;
        let b = Su2Vector::J;
        let g = exp_along(a, 0.5);
        let sols = euler3(a, b, a, &g);
        assert!(sols.iter().any(|[t1, t2, t3]| {
            (exp_along(a, *t1) * exp_along(b, *t2) * exp_along(a, *t3)).distance(&g) < 1e-12
                && (t1 + t2 + t3 - 0.5).abs() < 1e-12
        }));
    }

    #[test]
    fn single_letter_examples() {
        let f = ControlFrame::new(FRAC_PI_2, 0.6).unwrap();
        let g = exp_su2(f.y().scale(0.4));
        let d = n_optimal(&g, &[Generator::Y], &f, &quick()).unwrap();
        assert!((d.word.letters[0].time - 0.4).abs() < 1e-12);
        assert!((d.cost - 0.4 * 0.6).abs() < 1e-12);

        let minus = UnitQuaternion::new(-1.0, 0.0, 0.0, 0.0).unwrap();
        let d = n_optimal(&minus, &[Generator::Y], &f, &quick()).unwrap();
        assert!((d.word.letters[0].time - PI).abs() < 1e-12);
    }

    #[test]
    fn upper_bound_on_constructed_word() {
        let f = ControlFrame::new(1.1, 0.8).unwrap();
        for w in [
            Word::new(vec![Letter::x(1.2), Letter::y(2.0), Letter::x(0.3)]),
            Word::new(vec![Letter::x(0.5), Letter::y(1.8), Letter::x(2.0), Letter::y(0.4)]),
        ] {
            let g = eval_word(&w, &f).unwrap();
            let d = n_optimal(&g, &w.pattern(), &f, &quick()).unwrap();
            assert!(d.cost <= w.cost(&f) + 1e-9, "{} > {}", d.cost, w.cost(&f));
            assert!(d.residual < 1e-7);
        }
    }

    #[test]
    fn identity_and_geodesic() {
        let f = ControlFrame::new(FRAC_PI_2, 1.0).unwrap();
        let d = infimum_estimate(&UnitQuaternion::IDENTITY, &f, 3, &quick()).unwrap();
        assert_eq!(d.cost, 0.0);
        let g = exp_su2(Su2Vector::I.scale(0.3));
        let d = infimum_estimate(&g, &f, 3, &quick()).unwrap();
        assert!((d.cost - 0.3).abs() < 1e-10);
        assert_eq!(d.word.pattern(), vec![Generator::X]);
    }

    #[test]
    fn reproducible() {
        let f = ControlFrame::new(1.0, 0.7).unwrap();
        let g = UnitQuaternion::new(0.3, -0.4, 0.5, 0.6).unwrap();
        let p = [Generator::X, Generator::Y, Generator::X, Generator::Y];
        let a = n_optimal(&g, &p, &f, &quick()).unwrap();
        let b = n_optimal(&g, &p, &f, &quick()).unwrap();
        assert_eq!(a, b);
    }

    #[test]
    fn w_only_above_the_threshold() {
        let f = ControlFrame::new(0.3, 0.5).unwrap();
        assert_eq!(
            n_optimal(&UnitQuaternion::IDENTITY, &[Generator::W], &f, &quick()),
            Err(OracleError::SingularUnavailable)
        );
    }
}
