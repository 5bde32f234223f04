//! Single-well limit (beta_L < 1): Bohr-Sommerfeld levels and the
//! quasiclassical dipole element against the harmonic oscillator.

use rfsquid::matrix_elements::{harmonic_dipole, single_well_dipole, DEFAULT_CELLS};
use rfsquid::wkb::bs_level;
use rfsquid::{Potential, Well};

fn main() -> rfsquid::Result<()> {
    let eta = 31.6957;
    let well = Well::single(Potential::new(0.0, 0.0))?;
    println!("{:>3} {:>18} {:>18}", "n", "Bohr-Sommerfeld", "(n + 1/2) sqrt2/eta");
    for n in 0..5 {
        let exact = (n as f64 + 0.5) * 2f64.sqrt() / eta;
        println!("{n:>3} {:>18.12} {exact:>18.12}", bs_level(&well, eta, n)?);
    }
    let q = single_well_dipole(Potential::new(0.0, 0.0), eta, DEFAULT_CELLS)?;
    println!("|<0|phi|1>| = {:.12}, harmonic {:.12}", q.abs(), harmonic_dipole(eta));
    Ok(())
}
