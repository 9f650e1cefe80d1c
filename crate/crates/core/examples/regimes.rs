//! Regime classification and the coupling between middle X and Y times.
//!
//! ```bash
//! cargo run --release --example regimes
//! ```

use std::f64::consts::{FRAC_PI_2, FRAC_PI_3};

use su2opt::optimality::{middle_time_partner, middle_x_window};
use su2opt::ControlFrame;

fn main() {
    let cases = [
        (FRAC_PI_2, 1.0),
        (1.1, 0.8),
        (0.6, 0.3),
        (FRAC_PI_3, 0.5),
        (FRAC_PI_2, 0.0),
        (2.0, 0.0),
        (0.4, 0.0),
    ];
    for (alpha, kappa) in cases {
        let f = match ControlFrame::new(alpha, kappa) {
            Ok(f) => f,
            Err(e) => {
                println!("alpha {alpha:.4} kappa {kappa:.2}: {e}");
                continue;
            }
        };
        print!("alpha {alpha:.4} kappa {kappa:.2}: {} lambda {:+.4}", f.regime(), f.lambda());
        match middle_x_window(f.regime()) {
            Some((lo, hi)) => {
                let t_x = 0.5 * (lo + hi);
                println!("  middle X in [{lo:.4}, {hi:.4}], t_x {t_x:.4} -> {:?}", middle_time_partner(t_x, &f));
            }
            None => println!("  no middle-time constraint"),
        }
    }
}
