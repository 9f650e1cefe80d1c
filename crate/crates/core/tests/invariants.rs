use std::f64::consts::{FRAC_PI_2, PI};

use proptest::prelude::*;
use su2opt::{
    conj_action, distance, eval_word, exp_su2, log_su2, reduce, word_cost, ControlFrame, Generator, Letter, Su2Vector,
    Word,
};

fn vector(max: f64) -> impl Strategy<Value = Su2Vector> {
    (-max..max, -max..max, -max..max).prop_map(|(x, y, z)| Su2Vector::new(x, y, z))
}

fn frame() -> impl Strategy<Value = ControlFrame> {
    (0.05..PI - 0.05, 0.0..1.0f64).prop_filter_map("unclassified", |(a, k)| ControlFrame::new(a, k).ok())
}

fn word(max_len: usize) -> impl Strategy<Value = Word> {
    prop::collection::vec((prop::bool::ANY, 0.0..4.0f64), 0..max_len).prop_map(|v| {
        Word::new(
            v.into_iter()
                .map(|(x, t)| Letter::new(if x { Generator::X } else { Generator::Y }, t))
                .collect(),
        )
    })
}

proptest! {
    #[test]
    fn exp_is_additive_on_a_line(v in vector(1.0), s in -2.0..2.0f64, t in -2.0..2.0f64) {
        let lhs = exp_su2(v.scale(s)) * exp_su2(v.scale(t));
        prop_assert!(distance(lhs, exp_su2(v.scale(s + t))) < 1e-12);
    }

    #[test]
    fn log_inverts_exp(v in vector(1.7)) {
        prop_assume!(v.norm() < PI - 0.01);
        prop_assert!(log_su2(exp_su2(v)).unwrap().max_abs_diff(&v) < 1e-12);
    }

    #[test]
    fn distance_is_bi_invariant(a in vector(2.0), b in vector(2.0), h in vector(2.0)) {
        let (p, q, g) = (exp_su2(a), exp_su2(b), exp_su2(h));
        let d = distance(p, q);
        prop_assert!((distance(g * p, g * q) - d).abs() < 1e-9);
        prop_assert!((distance(p * g, q * g) - d).abs() < 1e-9);
    }

    #[test]
    fn conjugation_preserves_norm(v in vector(3.0), h in vector(2.0)) {
        prop_assert!((conj_action(exp_su2(h), v).norm() - v.norm()).abs() < 1e-12);
    }

    #[test]
    fn reduce_keeps_value_and_cost(f in frame(), w in word(8)) {
        let r = reduce(&w);
        prop_assert!(r.is_reduced());
        prop_assert!(distance(eval_word(&r, &f).unwrap(), eval_word(&w, &f).unwrap()) < 1e-12);
        prop_assert!((word_cost(&r, &f) - word_cost(&w, &f)).abs() < 1e-12);
    }

    #[test]
    fn concat_multiplies(f in frame(), a in word(5), b in word(5)) {
        let ab = eval_word(&a.concat(&b), &f).unwrap();
        let prod = eval_word(&a, &f).unwrap() * eval_word(&b, &f).unwrap();
        prop_assert!(distance(ab, prod) < 1e-12);
        prop_assert!((word_cost(&a.concat(&b), &f) - word_cost(&a, &f) - word_cost(&b, &f)).abs() < 1e-12);
    }

    #[test]
    fn right_angle_shortening(t in 0.0..PI) {
        let f = ControlFrame::new(FRAC_PI_2, 1.0).unwrap();
        let w = Word::new(vec![Letter::x(FRAC_PI_2), Letter::y(t), Letter::x(FRAC_PI_2)]);
        let short = Word::new(vec![Letter::y(PI - t)]);
        prop_assert!(distance(eval_word(&w, &f).unwrap(), eval_word(&short, &f).unwrap()) < 1e-12);
    }
}
