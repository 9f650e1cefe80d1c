//! Lie-Trotter and Strang convergence to exp(A + B), written as CSV.
//!
//! ```bash
//! cargo run --release --example splitting > table.csv
//! ```

use std::f64::consts::FRAC_PI_4;

use su2opt::splitting::{convergence_table, write_csv};
use su2opt::Su2Vector;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = Su2Vector::I.scale(FRAC_PI_4);
    let b = Su2Vector::J.scale(FRAC_PI_4);
    let table = convergence_table(a, b, &[8, 16, 32, 64, 128, 256, 512])?;
    write_csv(&table, std::io::stdout())?;
    eprintln!("orders: trotter {}, strang {}", table.trotter_order, table.strang_order);

    // commuting generators: both formulas are exact
    let c = convergence_table(a, a.scale(-0.5), &[8, 16])?;
    eprintln!("commuting: trotter {}, strang {}", c.trotter_order, c.strang_order);
    Ok(())
}
