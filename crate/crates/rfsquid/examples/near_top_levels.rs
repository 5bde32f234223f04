//! Quasiclassical levels of the double well within three plasma quanta of
//! the barrier top.

use rfsquid::wkb::NearTop;
use rfsquid::{DeviceParams, Geometry, Scales};

fn main() -> rfsquid::Result<()> {
    let params = DeviceParams::reference();
    let eta = Scales::new(&params)?.eta;
    for phi_x in [0.0, 0.2] {
        let g = Geometry::new(params.beta_l, phi_x)?;
        let nt = NearTop::new(g, eta);
        let quantum = g.plasma_quanta(eta).0;
        let levels = nt.near_top_levels(3.0 * quantum)?;
        println!("phi_x = {phi_x}: {} levels, hbar Omega_p = {quantum:.6} U0", levels.len());
        println!("{:>14} {:>10} {:>10} {:>12}", "E [U0]", "lambda", "count", "residual");
        for e in levels {
            let ph = nt.phases(e)?;
            println!("{e:>14.9} {:>10.4} {:>10.4} {:>12.2e}", ph.lambda, ph.count(), ph.residual());
        }
        println!();
    }
    Ok(())
}
