//! Alternating X/Y words converging to the singular control exp(tW) at a
//! constant cost.
//!
//! ```bash
//! cargo run --release --example w_limit
//! ```

use su2opt::splitting::w_limit_witness;
use su2opt::{exp_su2, ControlFrame};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = ControlFrame::new(1.0, 0.9)?;
    let t = 1.5;
    let target = exp_su2(f.w().scale(t));
    println!("W rate {:.6}, cost of exp(tW) {:.6}", f.w_rate(), t * f.w_rate());
    let mut prev = None;
    for n in [8, 16, 32, 64, 128, 256] {
        let (q, cost) = w_limit_witness(t, &f, n)?;
        let err = q.distance(&target);
        let ratio = prev.map_or(String::new(), |p: f64| format!("  ratio {:.3}", p / err));
        println!("N = {n:>3}: distance {err:.3e}  cost {cost:.6}{ratio}");
        prev = Some(err);
    }
    Ok(())
}
