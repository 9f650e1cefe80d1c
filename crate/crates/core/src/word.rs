//! Admissible words `exp(t₁C₁)···exp(tₙCₙ)`, their value in SU(2) and their cost.

use std::f64::consts::{PI, TAU};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::frame::{ControlFrame, Regime};
use crate::su2::{chain_product, exp_along, Su2Error, Su2Vector, UnitQuaternion};

#[derive(Debug, Clone, Copy, PartialEq, Error)]
pub enum WordError {
    #[error("W letters are only admissible when kappa > cos(alpha) (frame is {0})")]
    InvalidW(Regime),
    #[error("negative or non-finite time {0}")]
    BadTime(f64),
    #[error(transparent)]
    Su2(#[from] Su2Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Generator {
    X,
    Y,
    W,
}

impl Generator {
    /// Direction in su(2); `W` is not normalized.
    pub fn vector(self, frame: &ControlFrame) -> Su2Vector {
        match self {
            Generator::X => frame.x(),
            Generator::Y => frame.y(),
            Generator::W => frame.w(),
        }
    }

    /// Cost per unit time.
    pub fn rate(self, frame: &ControlFrame) -> f64 {
        match self {
            Generator::X => 1.0,
            Generator::Y => frame.kappa(),
            Generator::W => frame.w_rate(),
        }
    }

    /// Smallest `T > 0` with `exp(T·C) = 1`.
    pub fn period(self, frame: &ControlFrame) -> f64 {
        match self {
            Generator::X | Generator::Y => TAU,
            Generator::W => TAU / frame.w().norm(),
        }
    }

    /// The other bang control; `W` maps to itself.
    pub fn other(self) -> Generator {
        match self {
            Generator::X => Generator::Y,
            Generator::Y => Generator::X,
            Generator::W => Generator::W,
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Generator::X => 'X',
            Generator::Y => 'Y',
            Generator::W => 'W',
        }
    }

    pub fn from_symbol(c: char) -> Option<Generator> {
        match c {
            'X' | 'x' => Some(Generator::X),
            'Y' | 'y' => Some(Generator::Y),
            'W' | 'w' => Some(Generator::W),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Letter {
    pub gen: Generator,
    pub time: f64,
}

impl Letter {
    pub fn new(gen: Generator, time: f64) -> Self {
        Self { gen, time }
    }

    pub fn x(time: f64) -> Self {
        Self::new(Generator::X, time)
    }

    pub fn y(time: f64) -> Self {
        Self::new(Generator::Y, time)
    }

    pub fn w(time: f64) -> Self {
        Self::new(Generator::W, time)
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Word {
    pub letters: Vec<Letter>,
}

impl Word {
    pub fn new(letters: Vec<Letter>) -> Self {
        Self { letters }
    }

    pub fn empty() -> Self {
        Self::default()
    }

    /// Pairs a generator pattern with a time vector of the same length.
    pub fn from_parts(pattern: &[Generator], times: &[f64]) -> Self {
        debug_assert_eq!(pattern.len(), times.len());
        Self::new(
            pattern
                .iter()
                .zip(times)
                .map(|(&g, &t)| Letter::new(g, t))
                .collect(),
        )
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn times(&self) -> Vec<f64> {
        self.letters.iter().map(|l| l.time).collect()
    }

    pub fn pattern(&self) -> Vec<Generator> {
        self.letters.iter().map(|l| l.gen).collect()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = self.letters.clone();
        letters.extend_from_slice(&other.letters);
        Word::new(letters)
    }

    pub fn is_reduced(&self) -> bool {
        self.letters.iter().all(|l| l.time > 0.0)
            && self.letters.windows(2).all(|p| p[0].gen != p[1].gen)
    }

    pub fn eval(&self, frame: &ControlFrame) -> Result<UnitQuaternion, WordError> {
        eval_word(self, frame)
    }

    pub fn cost(&self, frame: &ControlFrame) -> f64 {
        word_cost(self, frame)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return f.write_str("[]");
        }
        for l in &self.letters {
            write!(f, "[{}: {:.9}]", l.gen.symbol(), l.time)?;
        }
        Ok(())
    }
}

/// Left-to-right product of `exp(time·gen)`; the empty word is `1`.
pub fn eval_word(w: &Word, frame: &ControlFrame) -> Result<UnitQuaternion, WordError> {
    let mut factors = Vec::with_capacity(w.len());
    for l in &w.letters {
        if !(l.time >= 0.0 && l.time.is_finite()) {
            return Err(WordError::BadTime(l.time));
        }
        if l.gen == Generator::W && frame.regime() != Regime::KappaGt {
            return Err(WordError::InvalidW(frame.regime()));
        }
        factors.push(exp_along(l.gen.vector(frame), l.time));
    }
    Ok(chain_product(factors)?)
}

/// `Σ rate(Cᵢ)·tᵢ` with rates `1`, `κ` and `κ² - 2κ cos α + 1`.
pub fn word_cost(w: &Word, frame: &ControlFrame) -> f64 {
    w.letters.iter().map(|l| l.gen.rate(frame) * l.time).sum()
}

/// Drops zero-time letters and merges equal neighbours.
pub fn reduce(w: &Word) -> Word {
    let mut out: Vec<Letter> = Vec::with_capacity(w.len());
    for l in w.letters.iter().filter(|l| l.time != 0.0) {
        match out.last_mut() {
            Some(last) if last.gen == l.gen => last.time += l.time,
            _ => out.push(*l),
        }
    }
    Word::new(out)
}

/// Replaces each time by its remainder modulo the generator's period, then reduces.
///
/// Unlike [`reduce`] this changes the cost: full periods are discarded.
pub fn normalize_periods(w: &Word, frame: &ControlFrame) -> Word {
    let letters = w
        .letters
        .iter()
        .map(|l| Letter::new(l.gen, l.time.rem_euclid(l.gen.period(frame))))
        .collect();
    reduce(&Word::new(letters))
}

/// At most one time `≥ π`, and it must belong to a `Y` letter at either end.
///
/// `W` letters are not subject to the condition.
pub fn pi_condition(w: &Word) -> bool {
    let n = w.len();
    let mut large = w
        .letters
        .iter()
        .enumerate()
        .filter(|(_, l)| l.gen != Generator::W && l.time >= PI);
    match (large.next(), large.next()) {
        (None, _) => true,
        (Some((idx, l)), None) => l.gen == Generator::Y && (idx == 0 || idx + 1 == n),
        _ => false,
    }
}

/// [`pi_condition`] plus `t₁, tₙ ≤ π` for words of length greater than one.
pub fn strong_pi_condition(w: &Word) -> bool {
    if !pi_condition(w) {
        return false;
    }
    match w.letters.as_slice() {
        [] | [_] => true,
        [first, .., last] => first.time <= PI && last.time <= PI,
    }
}

/// A word matched against a target, with its exact cost and residual.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Decomposition {
    pub word: Word,
    pub cost: f64,
    /// Geodesic distance from the word's value to the target.
    pub residual: f64,
    pub family: String,
    pub regime: Regime,
}

impl Decomposition {
    pub fn new(
        word: Word,
        target: &UnitQuaternion,
        frame: &ControlFrame,
        family: impl Into<String>,
    ) -> Result<Self, WordError> {
        let residual = eval_word(&word, frame)?.distance(target);
        Ok(Self {
            cost: word_cost(&word, frame),
            word,
            residual,
            family: family.into(),
            regime: frame.regime(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su2::{exp_su2, Quaternion};
    use std::f64::consts::FRAC_PI_2;

    fn right_angle(kappa: f64) -> ControlFrame {
        ControlFrame::new(FRAC_PI_2, kappa).unwrap()
    }

    #[test]
    fn eval_examples() {
        let f = right_angle(1.0);
        assert_eq!(eval_word(&Word::empty(), &f).unwrap(), UnitQuaternion::IDENTITY);

        let k = eval_word(&Word::new(vec![Letter::x(FRAC_PI_2), Letter::y(FRAC_PI_2)]), &f).unwrap();
        assert!(k.quaternion().max_abs_diff(&Quaternion::K) < 1e-12);

        let t = 0.8;
        let w = Word::new(vec![Letter::x(FRAC_PI_2), Letter::y(t), Letter::x(FRAC_PI_2)]);
        let expected = exp_su2(Su2Vector::J.scale(PI - t));
        assert!(eval_word(&w, &f).unwrap().max_abs_diff(&expected) < 1e-12);
    }

    #[test]
    fn w_outside_kappa_gt_is_rejected() {
        let f = ControlFrame::new(0.3, 0.5).unwrap();
        let w = Word::new(vec![Letter::w(1.0)]);
        assert_eq!(eval_word(&w, &f), Err(WordError::InvalidW(Regime::KappaLt)));
        assert!(eval_word(&w, &right_angle(1.0)).is_ok());
    }

    #[test]
    fn negative_time_is_rejected() {
        let w = Word::new(vec![Letter::x(-0.1)]);
        assert!(matches!(eval_word(&w, &right_angle(1.0)), Err(WordError::BadTime(_))));
    }

    #[test]
    fn cost_examples() {
        let f = right_angle(0.7);
        let w = Word::new(vec![Letter::x(1.0), Letter::y(0.5)]);
        assert!((word_cost(&w, &f) - 1.35).abs() < 1e-15);
        assert_eq!(word_cost(&Word::empty(), &f), 0.0);
        let w = Word::new(vec![Letter::w(2.0)]);
        assert!((word_cost(&w, &right_angle(1.0)) - 4.0).abs() < 1e-15);
    }

    #[test]
    fn reduce_examples() {
        let r = reduce(&Word::new(vec![Letter::x(0.0), Letter::y(1.0)]));
        assert_eq!(r, Word::new(vec![Letter::y(1.0)]));
        let r = reduce(&Word::new(vec![Letter::x(0.2), Letter::x(0.3)]));
        assert_eq!(r, Word::new(vec![Letter::x(0.5)]));
        let r = reduce(&Word::new(vec![Letter::x(0.2), Letter::y(0.0), Letter::x(0.3)]));
        assert_eq!(r, Word::new(vec![Letter::x(0.5)]));
        assert!(r.is_reduced());
    }

    #[test]
    fn normalize_drops_full_periods() {
        let f = right_angle(1.0);
        let w = Word::new(vec![Letter::x(TAU + 0.5), Letter::y(TAU)]);
        let n = normalize_periods(&w, &f);
        assert_eq!(n.len(), 1);
        assert!((n.letters[0].time - 0.5).abs() < 1e-12);
        let before = eval_word(&w, &f).unwrap();
        let after = eval_word(&n, &f).unwrap();
        assert!(before.max_abs_diff(&after) < 1e-12);
    }

    #[test]
    fn pi_conditions() {
        let w = Word::new(vec![Letter::x(1.0), Letter::y(2.0), Letter::x(1.0)]);
        assert!(pi_condition(&w) && strong_pi_condition(&w));

        let w = Word::new(vec![Letter::y(3.5), Letter::x(1.0)]);
        assert!(pi_condition(&w));
        assert!(!strong_pi_condition(&w));

        let w = Word::new(vec![Letter::x(3.5), Letter::y(3.3)]);
        assert!(!pi_condition(&w) && !strong_pi_condition(&w));

        // the large time must be a terminal Y
        let w = Word::new(vec![Letter::x(1.0), Letter::y(3.5), Letter::x(1.0)]);
        assert!(!pi_condition(&w));
        let w = Word::new(vec![Letter::x(3.5), Letter::y(1.0)]);
        assert!(!pi_condition(&w));

        // single letters are exempt from the end restriction
        let w = Word::new(vec![Letter::y(4.0)]);
        assert!(strong_pi_condition(&w));
    }
}
