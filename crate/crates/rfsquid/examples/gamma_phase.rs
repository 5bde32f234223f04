//! The barrier phase chi(lambda) = arg Gamma((1 + i lambda)/2) and the
//! quantities built from it.

use rfsquid::specfun::{chi, dchi, gamma_phase_oracle, kappa, theta};

fn main() {
    println!("{:>6} {:>14} {:>14} {:>14} {:>10} {:>12} {:>12}", "lambda", "chi", "lnGamma.im", "-chi(-lambda)", "dchi", "theta", "kappa");
    for lambda in [0.0, 0.2, 0.5, 1.0, 2.0, 4.0, 8.0, 16.0] {
        println!(
            "{lambda:>6.1} {:>14.10} {:>14.10} {:>14.10} {:>10.6} {:>12.6} {:>12.6e}",
            chi(lambda),
            gamma_phase_oracle(lambda),
            -chi(-lambda),
            dchi(lambda),
            theta(lambda),
            kappa(lambda)
        );
    }
}
