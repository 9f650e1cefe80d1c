//! Structured solver: enumerate the candidate word families that can carry
//! an optimal decomposition in the frame's regime, solve each family's
//! matching equations by multistart damped Newton, and keep the cheapest.
//!
//! Every family has at most three free parameters. Families of length four
//! or more share one middle `X` time and one middle `Y` time, tied together
//! by `tan t_y = λ tan t_x` (or, when `κ = cos α`, with `t_x = π/2`).

use std::cmp::Ordering;
use std::f64::consts::{FRAC_PI_2, PI, TAU};

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use thiserror::Error;

use crate::frame::{ControlFrame, Regime};
use crate::optimality::coupled_y_time;
use crate::su2::{exp_along, log_su2, Quaternion, Su2Vector, UnitQuaternion};
use crate::word::{
    eval_word, pi_condition, reduce, strong_pi_condition, Decomposition, Generator, Letter, Word,
};

/// Costs closer than this are ties, broken by length and then by times.
pub const COST_TIE_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("no candidate family matched the target within {tol:e}")]
    NoSolution { tol: f64 },
    #[error("invalid solver configuration: {0}")]
    Config(&'static str),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig {
    /// Acceptance threshold on the residual norm.
    pub newton_tol: f64,
    pub max_newton_iters: usize,
    /// Multistart points per free parameter.
    pub multistart_grid: usize,
    pub backtrack_factor: f64,
    pub max_backtracks: usize,
    /// Parameter vectors closer than this are the same solution.
    pub dedup_tol: f64,
    /// Central finite-difference step for Jacobians.
    pub fd_step: f64,
    /// Hard cap on word length for [`decompose_auto`].
    pub max_len_cap: usize,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            newton_tol: 1e-12,
            max_newton_iters: 50,
            multistart_grid: 8,
            backtrack_factor: 0.5,
            max_backtracks: 20,
            dedup_tol: 1e-8,
            fd_step: 1e-6,
            max_len_cap: 10,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if !(self.newton_tol > 0.0) {
            return Err(SolveError::Config("newton_tol must be positive"));
        }
        if self.max_newton_iters == 0 || self.multistart_grid == 0 || self.max_len_cap == 0 {
            return Err(SolveError::Config("iteration counts must be positive"));
        }
        if !(self.backtrack_factor > 0.0 && self.backtrack_factor < 1.0) {
            return Err(SolveError::Config("backtrack_factor must lie in (0, 1)"));
        }
        if !(self.dedup_tol > 0.0 && self.fd_step > 0.0) {
            return Err(SolveError::Config("tolerances must be positive"));
        }
        Ok(())
    }
}

/// Closed interval for one free parameter.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Window {
    pub lo: f64,
    pub hi: f64,
}

impl Window {
    pub const fn new(lo: f64, hi: f64) -> Self {
        Self { lo, hi }
    }

    pub fn contains(&self, x: f64, slack: f64) -> bool {
        x >= self.lo - slack && x <= self.hi + slack
    }

    pub fn clamp(&self, x: f64) -> f64 {
        x.clamp(self.lo, self.hi)
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

const HALF_TURN: Window = Window::new(0.0, PI);
const FULL_TURN: Window = Window::new(0.0, TAU);
const UPPER_QUARTER: Window = Window::new(FRAC_PI_2, PI);
const LOWER_QUARTER: Window = Window::new(0.0, FRAC_PI_2);

/// How the free parameters expand into the word's times.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum TimeMap {
    /// One parameter per letter.
    Direct,
    /// `(t_first, t_x, t_last)`; every middle `Y` gets `tan t_y = λ tan t_x`.
    Coupled { lambda: f64 },
    /// `(t_first, t_y, t_last)`; every middle `X` is `π/2`.
    PinnedX,
    /// `(t₁, t₂, t₃)` on four letters as `[t₁, t₂, t₂, t₃]`.
    RepeatedMiddle,
}

/// Which word-level π-condition a family's solutions must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PiFilter {
    None,
    Weak,
    Strong,
}

/// A parameterized candidate word shape.
#[derive(Debug, Clone, PartialEq)]
pub struct FamilyDescriptor {
    pub pattern: Vec<Generator>,
    pub map: TimeMap,
    /// One window per free parameter.
    pub windows: Vec<Window>,
    pub pi_filter: PiFilter,
    pub regime: Regime,
    pub tag: String,
}

impl FamilyDescriptor {
    pub fn dim(&self) -> usize {
        self.windows.len()
    }

    pub fn len(&self) -> usize {
        self.pattern.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pattern.is_empty()
    }

    pub fn times(&self, params: &[f64]) -> Vec<f64> {
        let n = self.pattern.len();
        match self.map {
            TimeMap::Direct => params.to_vec(),
            TimeMap::RepeatedMiddle => vec![params[0], params[1], params[1], params[2]],
            TimeMap::Coupled { lambda } => {
                let tx = params[1];
                let ty = coupled_y_time(tx, lambda);
                self.middle_times(params[0], tx, ty, params[2], n)
            }
            TimeMap::PinnedX => self.middle_times(params[0], FRAC_PI_2, params[1], params[2], n),
        }
    }

    fn middle_times(&self, first: f64, tx: f64, ty: f64, last: f64, n: usize) -> Vec<f64> {
        let mut t = Vec::with_capacity(n);
        t.push(first);
        for g in &self.pattern[1..n - 1] {
            t.push(if *g == Generator::X { tx } else { ty });
        }
        t.push(last);
        t
    }

    pub fn word(&self, params: &[f64]) -> Word {
        Word::from_parts(&self.pattern, &self.times(params))
    }
}

fn pattern_tag(pattern: &[Generator]) -> String {
    pattern.iter().map(|g| g.symbol()).collect()
}

fn alternating(start: Generator, n: usize) -> Vec<Generator> {
    let mut g = start;
    (0..n)
        .map(|_| {
            let cur = g;
            g = g.other();
            cur
        })
        .collect()
}

fn empty_family(regime: Regime) -> FamilyDescriptor {
    FamilyDescriptor {
        pattern: vec![],
        map: TimeMap::Direct,
        windows: vec![],
        pi_filter: PiFilter::None,
        regime,
        tag: "empty".into(),
    }
}

/// Window of an end (first or last) letter.
fn end_window(regime: Regime, gen: Generator, n: usize) -> Window {
    match regime {
        Regime::KappaGt if n == 1 => FULL_TURN,
        Regime::KappaGt => HALF_TURN,
        _ if gen == Generator::Y => FULL_TURN,
        _ => HALF_TURN,
    }
}

/// Window of the single middle letter of a three-letter word.
fn short_middle_window(regime: Regime, gen: Generator) -> Window {
    match (regime, gen) {
        (Regime::FreeY, Generator::Y) => FULL_TURN,
        (Regime::FreeY, _) => HALF_TURN,
        (Regime::KappaGt, _) => UPPER_QUARTER,
        (_, Generator::Y) => UPPER_QUARTER,
        _ => HALF_TURN,
    }
}

fn alternating_family(frame: &ControlFrame, start: Generator, n: usize) -> FamilyDescriptor {
    let regime = frame.regime();
    let pattern = alternating(start, n);
    let last = pattern[n - 1];
    let pi_filter = match regime {
        Regime::KappaGt => PiFilter::Strong,
        Regime::KappaLt | Regime::KappaEq => PiFilter::Weak,
        Regime::FreeY => PiFilter::None,
    };
    let first_w = end_window(regime, start, n);
    let last_w = end_window(regime, last, n);
    let (map, windows, kind) = match n {
        1 => (TimeMap::Direct, vec![first_w], "bang"),
        2 => (TimeMap::Direct, vec![first_w, last_w], "bang"),
        3 => (
            TimeMap::Direct,
            vec![first_w, short_middle_window(regime, pattern[1]), last_w],
            "bang",
        ),
        _ => match regime {
            Regime::KappaGt => (
                TimeMap::Coupled {
                    lambda: frame.lambda(),
                },
                vec![first_w, UPPER_QUARTER, last_w],
                "coupled",
            ),
            Regime::KappaLt => (
                TimeMap::Coupled {
                    lambda: frame.lambda(),
                },
                vec![first_w, LOWER_QUARTER, last_w],
                "coupled",
            ),
            Regime::KappaEq => (TimeMap::PinnedX, vec![first_w, UPPER_QUARTER, last_w], "pinned"),
            Regime::FreeY => unreachable!("free-Y words are at most three letters long"),
        },
    };
    FamilyDescriptor {
        tag: format!("{kind}:{}", pattern_tag(&pattern)),
        pattern,
        map,
        windows,
        pi_filter,
        regime,
    }
}

/// `[C₁, W, C₃]` with both ends present, plus the shapes with an end dropped.
fn singular_families(frame: &ControlFrame) -> Vec<FamilyDescriptor> {
    let regime = frame.regime();
    let w_window = Window::new(0.0, Generator::W.period(frame));
    let bang = [Generator::X, Generator::Y];
    let mut shapes: Vec<Vec<Generator>> = vec![vec![Generator::W]];
    for c in bang {
        shapes.push(vec![c, Generator::W]);
        shapes.push(vec![Generator::W, c]);
    }
    for c1 in bang {
        for c3 in bang {
            shapes.push(vec![c1, Generator::W, c3]);
        }
    }
    shapes
        .into_iter()
        .map(|pattern| FamilyDescriptor {
            windows: pattern
                .iter()
                .map(|g| if *g == Generator::W { w_window } else { FULL_TURN })
                .collect(),
            tag: format!("singular:{}", pattern_tag(&pattern)),
            pattern,
            map: TimeMap::Direct,
            pi_filter: PiFilter::None,
            regime,
        })
        .collect()
}

/// Candidate families for the frame's regime, up to `max_len` letters.
pub fn enumerate_families(frame: &ControlFrame, max_len: usize) -> Vec<FamilyDescriptor> {
    let regime = frame.regime();
    let max_len = if regime == Regime::FreeY {
        max_len.min(3)
    } else {
        max_len
    };
    let mut out = vec![empty_family(regime)];
    for n in 1..=max_len {
        for start in [Generator::X, Generator::Y] {
            out.push(alternating_family(frame, start, n));
        }
    }
    if regime == Regime::KappaGt {
        out.extend(singular_families(frame).into_iter().filter(|f| f.len() <= max_len.max(1)));
    }
    out
}

/// Families of exactly the given lengths (used to extend a search).
fn families_of_lengths(frame: &ControlFrame, lengths: std::ops::RangeInclusive<usize>) -> Vec<FamilyDescriptor> {
    let mut out = Vec::new();
    for n in lengths {
        if frame.regime() == Regime::FreeY && n > 3 {
            break;
        }
        for start in [Generator::X, Generator::Y] {
            out.push(alternating_family(frame, start, n));
        }
    }
    out
}

/// Residual evaluation for one family and target, with no allocation per call.
struct ResidualMap<'a> {
    family: &'a FamilyDescriptor,
    dirs: Vec<Su2Vector>,
    target_inv: Quaternion,
}

impl<'a> ResidualMap<'a> {
    fn new(family: &'a FamilyDescriptor, frame: &ControlFrame, target: &UnitQuaternion) -> Self {
        Self {
            family,
            dirs: family.pattern.iter().map(|g| g.vector(frame)).collect(),
            target_inv: target.inverse().quaternion(),
        }
    }

    /// `log(word(params)·g⁻¹)`, or `None` at the branch point.
    fn eval(&self, params: &[f64]) -> Option<Su2Vector> {
        let times = self.family.times(params);
        let mut acc = Quaternion::ONE;
        for (d, t) in self.dirs.iter().zip(&times) {
            acc = acc * exp_along(*d, *t).quaternion();
        }
        let mismatch = UnitQuaternion::normalize(acc * self.target_inv).ok()?;
        log_su2(mismatch).ok()
    }

    fn jacobian(&self, params: &[f64], h: f64) -> Option<DMatrix<f64>> {
        let d = params.len();
        let mut jac = DMatrix::zeros(3, d);
        let mut p = params.to_vec();
        for k in 0..d {
            p[k] = params[k] + h;
            let plus = self.eval(&p)?;
            p[k] = params[k] - h;
            let minus = self.eval(&p)?;
            p[k] = params[k];
            let col = (plus - minus).scale(0.5 / h);
            jac[(0, k)] = col.x;
            jac[(1, k)] = col.y;
            jac[(2, k)] = col.z;
        }
        Some(jac)
    }
}

fn project(params: &mut [f64], windows: &[Window]) {
    for (p, w) in params.iter_mut().zip(windows) {
        *p = w.clamp(*p);
    }
}

/// Projected damped Newton (square case) / Gauss–Newton (d < 3) from one start.
fn newton_from(map: &ResidualMap<'_>, start: &[f64], cfg: &SolverConfig) -> Option<(Vec<f64>, f64)> {
    let windows = &map.family.windows;
    let mut p = start.to_vec();
    let mut r = map.eval(&p)?;
    let mut rn = r.norm();
    for _ in 0..cfg.max_newton_iters {
        if rn < cfg.newton_tol || p.is_empty() {
            break;
        }
        let jac = map.jacobian(&p, cfg.fd_step)?;
        let rhs = DVector::from_vec(vec![-r.x, -r.y, -r.z]);
        let step = jac.svd(true, true).solve(&rhs, 1e-14).ok()?;
        let mut lambda = 1.0;
        let mut accepted = false;
        for _ in 0..=cfg.max_backtracks {
            let mut trial: Vec<f64> = p.iter().zip(step.iter()).map(|(a, s)| a + lambda * s).collect();
            project(&mut trial, windows);
            if let Some(tr) = map.eval(&trial) {
                let tn = tr.norm();
                if tn < rn {
                    p = trial;
                    r = tr;
                    rn = tn;
                    accepted = true;
                    break;
                }
            }
            lambda *= cfg.backtrack_factor;
        }
        if !accepted {
            break;
        }
    }
    Some((p, rn))
}

fn multistart_points(windows: &[Window], m: usize) -> Vec<Vec<f64>> {
    let mut pts = vec![vec![]];
    for w in windows {
        let mut next = Vec::with_capacity(pts.len() * m);
        for p in &pts {
            for k in 0..m {
                let mut q = p.clone();
                q.push(w.lo + (k as f64 + 0.5) * w.width() / m as f64);
                next.push(q);
            }
        }
        pts = next;
    }
    pts
}

fn passes_pi_filter(word: &Word, filter: PiFilter) -> bool {
    match filter {
        PiFilter::None => true,
        PiFilter::Weak => pi_condition(word),
        PiFilter::Strong => strong_pi_condition(word),
    }
}

/// Times this close to zero or to a full period are degenerate.
const SNAP_TOL: f64 = 1e-9;

fn snap_degenerate(word: &Word, frame: &ControlFrame) -> Word {
    Word::new(
        word.letters
            .iter()
            .map(|l| {
                let period = l.gen.period(frame);
                if l.time < SNAP_TOL || (l.time - period).abs() < SNAP_TOL {
                    Letter::new(l.gen, 0.0)
                } else {
                    *l
                }
            })
            .collect(),
    )
}

/// All distinct solutions of one family's matching equations.
pub fn solve_family(
    target: &UnitQuaternion,
    family: &FamilyDescriptor,
    frame: &ControlFrame,
    cfg: &SolverConfig,
) -> Vec<Decomposition> {
    let map = ResidualMap::new(family, frame, target);
    let mut found: Vec<Vec<f64>> = Vec::new();
    for start in multistart_points(&family.windows, cfg.multistart_grid) {
        let Some((p, rn)) = newton_from(&map, &start, cfg) else {
            continue;
        };
        if rn >= cfg.newton_tol {
            continue;
        }
        if !p.iter().zip(&family.windows).all(|(x, w)| w.contains(*x, 0.0)) {
            continue;
        }
        let duplicate = found.iter().any(|q| {
            q.iter()
                .zip(&p)
                .all(|(a, b)| (a - b).abs() < cfg.dedup_tol)
        });
        if !duplicate {
            found.push(p);
        }
    }
    found
        .into_iter()
        .filter_map(|p| {
            let times = family.times(&p);
            if times.iter().any(|t| *t < 0.0) {
                return None;
            }
            let word = family.word(&p);
            if !passes_pi_filter(&word, family.pi_filter) {
                return None;
            }
            // a zero (or full-period) time makes this a solution of a shorter family
            let reduced = reduce(&word);
            if reduced.len() < family.len() {
                return None;
            }
            let snapped = reduce(&snap_degenerate(&word, frame));
            if snapped.len() < family.len()
                && eval_word(&snapped, frame).is_ok_and(|q| q.distance(target) < cfg.newton_tol)
            {
                return None;
            }
            let d = Decomposition::new(reduced, target, frame, family.tag.clone()).ok()?;
            (d.residual < cfg.newton_tol).then_some(d)
        })
        .collect()
}

/// Orders by cost, treating near-equal costs as ties broken by length and times.
pub fn compare_decompositions(a: &Decomposition, b: &Decomposition) -> Ordering {
    if (a.cost - b.cost).abs() > COST_TIE_TOL {
        return a.cost.total_cmp(&b.cost);
    }
    a.word.len().cmp(&b.word.len()).then_with(|| {
        for (x, y) in a.word.letters.iter().zip(&b.word.letters) {
            match x.time.total_cmp(&y.time) {
                Ordering::Equal => continue,
                o => return o,
            }
        }
        a.word
            .letters
            .iter()
            .map(|l| l.gen)
            .cmp(b.word.letters.iter().map(|l| l.gen))
    })
}

fn best_of(cands: Vec<Decomposition>, tol: f64) -> Result<Decomposition, SolveError> {
    cands
        .into_iter()
        .min_by(compare_decompositions)
        .ok_or(SolveError::NoSolution { tol })
}

fn solve_all(
    target: &UnitQuaternion,
    families: &[FamilyDescriptor],
    frame: &ControlFrame,
    cfg: &SolverConfig,
) -> Vec<Decomposition> {
    families
        .par_iter()
        .flat_map_iter(|f| solve_family(target, f, frame, cfg))
        .collect()
}

/// Cheapest decomposition over all families of length at most `max_len`.
pub fn decompose(
    target: &UnitQuaternion,
    frame: &ControlFrame,
    cfg: &SolverConfig,
    max_len: usize,
) -> Result<Decomposition, SolveError> {
    cfg.validate()?;
    let families = enumerate_families(frame, max_len);
    best_of(solve_all(target, &families, frame, cfg), cfg.newton_tol)
}

/// Largest length an optimal bang-bang word of cost at most `cost` can have.
///
/// Middle times are bounded below in every regime (`t_x ≥ π/2` or
/// `t_y ≥ π/2`, or both) and at least `⌊(n-2)/2⌋` middle letters carry the
/// bounded generator.
pub fn length_bound(frame: &ControlFrame, cost: f64) -> usize {
    let k = frame.kappa();
    let per_x = FRAC_PI_2;
    let per_y = k * FRAC_PI_2;
    // n ≤ 3 + 2·cost/per_letter when every other middle letter is bounded
    let alternate = |per: f64| -> f64 {
        if per > 0.0 {
            3.0 + 2.0 * cost / per
        } else {
            f64::INFINITY
        }
    };
    let bound = match frame.regime() {
        Regime::FreeY => return 3,
        Regime::KappaGt => {
            // all middle letters are bounded
            let all = if k > 0.0 {
                2.0 + cost / (FRAC_PI_2 * k.min(1.0))
            } else {
                f64::INFINITY
            };
            all.min(alternate(per_x))
        }
        Regime::KappaLt => alternate(per_y),
        Regime::KappaEq => alternate(per_x).min(alternate(per_y)),
    };
    if bound.is_finite() {
        bound.floor().max(1.0) as usize
    } else {
        usize::MAX
    }
}

/// [`decompose`] with the word-length limit derived from a first feasible cost.
///
/// Searches lengths up to four (and the singular families) first, then
/// extends to the length bound implied by the best cost found, capped at
/// `cfg.max_len_cap`.
pub fn decompose_auto(
    target: &UnitQuaternion,
    frame: &ControlFrame,
    cfg: &SolverConfig,
) -> Result<Decomposition, SolveError> {
    cfg.validate()?;
    let first_len = 4.min(cfg.max_len_cap);
    let mut cands = solve_all(target, &enumerate_families(frame, first_len), frame, cfg);
    let max_len = match cands.iter().min_by(|a, b| compare_decompositions(a, b)) {
        Some(best) => length_bound(frame, best.cost).min(cfg.max_len_cap),
        None => cfg.max_len_cap,
    };
    if max_len > first_len {
        let extra = families_of_lengths(frame, first_len + 1..=max_len);
        cands.extend(solve_all(target, &extra, frame, cfg));
    }
    best_of(cands, cfg.newton_tol)
}

/// The five word shapes that suffice when `X = i`, `Y = j` and `κ = 1`.
///
/// Shapes: (a) one letter in `[0, 2π)`; (b) two letters in `(0, π]`; (c)
/// `[C₁: t₁][C₂: t₂][C₁: t₃]` with `π/2 ≤ t₂ ≤ π`; (d)
/// `[C₁: t₁][C₂: t₂][C₁: t₂][C₂: t₃]` with `π/2 ≤ t₂ ≤ π`; (e)
/// `[C₁: t₁][W: t₂][C₃: t₃]`. Here `W = i + j` with rate 2, i.e.
/// `exp(t₂W) = exp(s(i+j)/2)` for `s = 2t₂` at unit rate.
pub fn right_angle_families() -> Result<(ControlFrame, Vec<FamilyDescriptor>), SolveError> {
    let frame = ControlFrame::new(FRAC_PI_2, 1.0).map_err(|_| SolveError::Config("frame"))?;
    let regime = frame.regime();
    let mut out = vec![empty_family(regime)];
    let direct = |pattern: Vec<Generator>, windows: Vec<Window>, kind: &str| FamilyDescriptor {
        tag: format!("{kind}:{}", pattern_tag(&pattern)),
        pattern,
        map: TimeMap::Direct,
        windows,
        pi_filter: PiFilter::None,
        regime,
    };
    for c in [Generator::X, Generator::Y] {
        out.push(direct(vec![c], vec![FULL_TURN], "type-a"));
    }
    for c in [Generator::X, Generator::Y] {
        out.push(direct(alternating(c, 2), vec![HALF_TURN; 2], "type-b"));
    }
    for c in [Generator::X, Generator::Y] {
        out.push(direct(
            alternating(c, 3),
            vec![HALF_TURN, UPPER_QUARTER, HALF_TURN],
            "type-c",
        ));
    }
    for c in [Generator::X, Generator::Y] {
        let pattern = alternating(c, 4);
        out.push(FamilyDescriptor {
            tag: format!("type-d:{}", pattern_tag(&pattern)),
            pattern,
            map: TimeMap::RepeatedMiddle,
            windows: vec![HALF_TURN, UPPER_QUARTER, HALF_TURN],
            pi_filter: PiFilter::None,
            regime,
        });
    }
    for mut f in singular_families(&frame) {
        f.tag = f.tag.replace("singular", "type-e");
        out.push(f);
    }
    Ok((frame, out))
}

/// Cheapest solution of each right-angle shape that matches the target,
/// cheapest first.
pub fn right_angle_catalog(
    target: &UnitQuaternion,
    cfg: &SolverConfig,
) -> Result<Vec<Decomposition>, SolveError> {
    cfg.validate()?;
    let (frame, families) = right_angle_families()?;
    let mut best: Vec<Decomposition> = families
        .par_iter()
        .filter_map(|f| {
            solve_family(target, f, &frame, cfg)
                .into_iter()
                .min_by(compare_decompositions)
        })
        .collect();
    best.sort_by(compare_decompositions);
    Ok(best)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::optimality::four_word_residual;
    use crate::su2::exp_su2;

    fn right_angle() -> ControlFrame {
        ControlFrame::new(FRAC_PI_2, 1.0).unwrap()
    }

    #[test]
    fn free_y_is_short() {
        let f = ControlFrame::new(FRAC_PI_2, 0.0).unwrap();
        let fams = enumerate_families(&f, 6);
        assert!(fams.iter().all(|fam| fam.len() <= 3));
        assert!(fams.iter().any(|fam| fam.len() == 3));
    }

    #[test]
    fn kappa_lt_has_no_singular_family() {
        let f = ControlFrame::new(0.3, 0.5).unwrap();
        let fams = enumerate_families(&f, 6);
        assert!(fams.iter().all(|fam| !fam.pattern.contains(&Generator::W)));
        let coupled = fams.iter().find(|fam| fam.tag == "coupled:XYXY").unwrap();
        assert_eq!(coupled.windows[1], LOWER_QUARTER);
    }

    #[test]
    fn kappa_gt_four_letters_are_coupled() {
        let f = ControlFrame::new(1.2, 0.9).unwrap();
        let fams = enumerate_families(&f, 4);
        let xyxy = fams.iter().find(|fam| fam.pattern == alternating(Generator::X, 4)).unwrap();
        assert!(matches!(xyxy.map, TimeMap::Coupled { .. }));
        assert_eq!(xyxy.windows[1], UPPER_QUARTER);
        assert!(fams.iter().any(|fam| fam.tag == "singular:XWY"));
        assert!(fams.iter().all(|fam| fam.dim() <= 3));
        let t = xyxy.times(&[0.3, 2.0, 0.4]);
        assert_eq!(t[2], 2.0);
        assert!(four_word_residual(t[1], t[2], &f).unwrap().abs() < 1e-12);
    }

    #[test]
    fn single_letter_target() {
        let f = right_angle();
        let g = exp_su2(Su2Vector::I.scale(0.3));
        let fam = alternating_family(&f, Generator::X, 1);
        let sols = solve_family(&g, &fam, &f, &SolverConfig::default());
        assert_eq!(sols.len(), 1);
        assert!((sols[0].cost - 0.3).abs() < 1e-12);
    }

    #[test]
    fn identity_target_costs_nothing() {
        let f = right_angle();
        let d = decompose(&UnitQuaternion::IDENTITY, &f, &SolverConfig::default(), 4).unwrap();
        assert!(d.word.is_empty());
        assert_eq!(d.cost, 0.0);
    }

    #[test]
    fn three_letter_roundtrip() {
        let f = right_angle();
        let w = Word::new(vec![Letter::x(0.4), Letter::y(2.0), Letter::x(0.4)]);
        let g = eval_word(&w, &f).unwrap();
        let fam = alternating_family(&f, Generator::X, 3);
        let sols = solve_family(&g, &fam, &f, &SolverConfig::default());
        assert!(sols.iter().any(|d| d
            .word
            .times()
            .iter()
            .zip([0.4, 2.0, 0.4])
            .all(|(a, b)| (a - b).abs() < 1e-8)));
    }

    #[test]
    fn minus_one_is_a_half_turn_of_y() {
        let f = ControlFrame::new(FRAC_PI_2, 0.5).unwrap();
        let g = UnitQuaternion::new(-1.0, 0.0, 0.0, 0.0).unwrap();
        let d = decompose(&g, &f, &SolverConfig::default(), 5).unwrap();
        assert!((d.cost - PI / 2.0).abs() < 1e-10, "{d:?}");
        assert_eq!(d.word.pattern(), vec![Generator::Y]);
    }

    #[test]
    fn k_needs_x_then_y() {
        let g = UnitQuaternion::new(0.0, 0.0, 0.0, 1.0).unwrap();
        let cat = right_angle_catalog(&g, &SolverConfig::default()).unwrap();
        let best = &cat[0];
        assert!((best.cost - PI).abs() < 1e-10);
        assert_eq!(best.word.pattern(), vec![Generator::X, Generator::Y]);
        assert!(cat
            .iter()
            .filter(|d| d.family.starts_with("type-b"))
            .all(|d| d.word.pattern() == vec![Generator::X, Generator::Y]));
    }

    #[test]
    fn catalog_type_c_respects_middle_window() {
        let f = right_angle();
        let g = eval_word(&Word::new(vec![Letter::x(0.7), Letter::y(0.6), Letter::x(0.2)]), &f).unwrap();
        let cat = right_angle_catalog(&g, &SolverConfig::default()).unwrap();
        for d in cat.iter().filter(|d| d.family.starts_with("type-c")) {
            assert!(d.word.letters[1].time >= FRAC_PI_2);
        }
    }

    #[test]
    fn length_bound_examples() {
        assert_eq!(length_bound(&ControlFrame::new(FRAC_PI_2, 0.0).unwrap(), 10.0), 3);
        // κ = 1, cost π: at most 2 + 2 middle letters of cost ≥ π/2
        assert_eq!(length_bound(&right_angle(), PI), 4);
    }
}
