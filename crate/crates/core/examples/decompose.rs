//! Time-optimal words for a few targets in each regime.
//!
//! ```bash
//! cargo run --release --example decompose
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, PI};

use su2opt::solver::{decompose_auto, SolverConfig};
use su2opt::{exp_su2, ControlFrame, Su2Vector, UnitQuaternion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cfg = SolverConfig::default();
    let frames = [
        ControlFrame::new(FRAC_PI_2, 1.0)?,
        ControlFrame::new(1.1, 0.8)?,
        ControlFrame::new(FRAC_PI_3, 0.5)?,
        ControlFrame::new(0.6, 0.3)?,
    ];
    let targets = [
        ("k", UnitQuaternion::new(0.0, 0.0, 0.0, 1.0)?),
        ("exp(0.7 (i+k)/|i+k|)", exp_su2(Su2Vector::new(1.0, 0.0, 1.0).scale(0.7 / 2f64.sqrt()))),
        ("exp(2.5 j)", exp_su2(Su2Vector::J.scale(2.5))),
        ("exp(pi/3 (i+j+k)/|.|)", exp_su2(Su2Vector::new(1.0, 1.0, 1.0).scale(PI / 3.0 / 3f64.sqrt()))),
    ];
    for f in &frames {
        println!("alpha = {:.4}, kappa = {:.2} ({})", f.alpha(), f.kappa(), f.regime());
        for (name, g) in &targets {
            let d = decompose_auto(g, f, &cfg)?;
            println!("  {name:<24} cost {:.6}  {}  [{}]", d.cost, d.word, d.family);
        }
    }
    Ok(())
}
