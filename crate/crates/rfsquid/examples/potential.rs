//! Shape of the double-well potential as the external flux is tilted.

use rfsquid::{DeviceParams, Geometry, Scales};

fn main() -> rfsquid::Result<()> {
    let params = DeviceParams::reference();
    let scales = Scales::new(&params)?;
    println!("eta = {:.4}, U0 = {:.4e} J", scales.eta, scales.joule(1.0));
    println!("{:>6} {:>10} {:>10} {:>10} {:>10} {:>10} {:>8} {:>8}", "phi_x", "phi_L", "phi_top", "phi_R", "U_L", "U_top", "nL", "nR");
    for phi_x in [0.0, 0.1, 0.2, 0.3, 0.35, 0.4] {
        let g = Geometry::new(params.beta_l, phi_x)?;
        let (q_left, q_right) = g.plasma_quanta(scales.eta);
        println!(
            "{phi_x:>6.2} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>10.5} {:>8.2} {:>8.2}",
            g.phi_min_left,
            g.phi_top,
            g.phi_min_right,
            g.u_min_left,
            g.u_top,
            (g.u_top - g.u_min_left) / q_left,
            (g.u_top - g.u_min_right) / q_right,
        );
    }

    let g = Geometry::new(params.beta_l, 0.3)?;
    let e = g.u_top - 0.1;
    let tp = g.turning_points(e)?;
    println!("\nturning points at U_top - 0.1 for phi_x = 0.3:");
    println!("  left well  [{:.6}, {:.6}]", tp.phi1, tp.phi2);
    println!("  right well [{:.6}, {:.6}]", tp.phi3, tp.phi4);
    Ok(())
}
