//! Cross-checks the structured solver against the derivative-free oracle on
//! Haar-random targets.
//!
//! ```bash
//! cargo run --release --example oracle_check -- 1.1 0.8 5
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su2opt::oracle::{infimum_estimate, OracleConfig};
use su2opt::solver::{decompose_auto, SolverConfig};
use su2opt::{haar_random, ControlFrame};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let args: Vec<f64> = std::env::args().skip(1).map(|a| a.parse()).collect::<Result<_, _>>()?;
    let alpha = args.first().copied().unwrap_or(1.1);
    let kappa = args.get(1).copied().unwrap_or(0.8);
    let trials = args.get(2).copied().unwrap_or(5.0) as usize;

    let f = ControlFrame::new(alpha, kappa)?;
    println!("regime {}", f.regime());
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for k in 0..trials {
        let g = haar_random(&mut rng);
        let d = decompose_auto(&g, &f, &SolverConfig::default())?;
        let o = infimum_estimate(&g, &f, 5, &OracleConfig::default())?;
        println!(
            "{k}: solver {:.6} ({} letters), oracle {:.6} ({} letters), gap {:+.2e}",
            d.cost,
            d.word.len(),
            o.cost,
            o.word.len(),
            d.cost - o.cost
        );
    }
    Ok(())
}
