//! Cost-optimal factorizations of SU(2) elements into products of
//! exponentials of two fixed controls.
//!
//! The controls are unit vectors `X`, `Y` of su(2) at angle `α`; a letter
//! `exp(tY)` costs `κ·t` while `exp(tX)` costs `t`. The crate provides the
//! quaternion arithmetic, the word model and cost functional, first-order
//! optimality conditions, a structured solver over the candidate word
//! families of each regime, an independent brute-force oracle, and the
//! Lie–Trotter / Strang splitting constructions behind the singular control.
//!
//! See the `examples/` directory for one runnable program per capability.

pub mod cli;
pub mod frame;
pub mod optimality;
pub mod oracle;
pub mod solver;
pub mod splitting;
pub mod su2;
pub mod word;

pub use frame::{ControlFrame, FrameError, Regime};
pub use su2::{
    conj_action, distance, exp_su2, haar_random, log_su2, quat_mul, Quaternion, Su2Error, Su2Vector,
    UnitQuaternion,
};
pub use word::{
    eval_word, pi_condition, reduce, strong_pi_condition, word_cost, Decomposition, Generator,
    Letter, Word, WordError,
};
