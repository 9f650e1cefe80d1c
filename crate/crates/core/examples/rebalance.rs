//! Exact rebalance of a short-long-short three-letter word, its first-order
//! approximation and the cost it saves.
//!
//! ```bash
//! cargo run --release --example rebalance
//! ```

use su2opt::optimality::{cost_improvement, rebalance_first_order, rebalance_words, rebalance_xyx, RebalanceVariant};
use su2opt::{eval_word, ControlFrame};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = ControlFrame::new(1.2, 0.9)?;
    let t = 1.0;
    println!("alpha = {}, kappa = {}, t = {t}", f.alpha(), f.kappa());
    for variant in [RebalanceVariant::XyxToYxy, RebalanceVariant::YxyToXyx] {
        println!("{variant:?}");
        for eps in [1e-2, 1e-3, 1e-4] {
            let exact = rebalance_xyx(eps, t, &f, variant)?;
            let approx = rebalance_first_order(eps, t, &f);
            let (left, right) = rebalance_words(eps, t, &exact, variant);
            let err = eval_word(&left, &f)?.distance(&eval_word(&right, &f)?);
            println!(
                "  eps {eps:.0e}: tau {:.10} mu {:.10}  |tau - first order| {:.2e}  identity err {err:.1e}  saved {:.3e}",
                exact.tau,
                exact.mu,
                (exact.tau - approx.tau).abs(),
                cost_improvement(eps, t, &f, variant)?
            );
        }
    }
    Ok(())
}
