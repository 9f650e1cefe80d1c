//! The five candidate shapes at the right-angle frame (alpha = pi/2, kappa = 1),
//! best solution per shape, cheapest first.
//!
//! ```bash
//! cargo run --release --example catalog
//! ```

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use su2opt::solver::{right_angle_catalog, SolverConfig};
use su2opt::{haar_random, UnitQuaternion};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut targets = vec![UnitQuaternion::new(0.0, 0.0, 0.0, 1.0)?];
    targets.extend((0..3).map(|_| haar_random(&mut rng)));
    for g in &targets {
        let q = g.quaternion();
        println!("target ({:+.4}, {:+.4}, {:+.4}, {:+.4})", q.a, q.b, q.c, q.d);
        for d in right_angle_catalog(g, &SolverConfig::default())? {
            println!("  {:<14} cost {:.6}  {}", d.family, d.cost, d.word);
        }
    }
    Ok(())
}
