//! Locates a level crossing between the two wells and compares the
//! linearised hyperbola with the quasiclassical pair around it.

use rfsquid::sweep::Device;
use rfsquid::DeviceParams;

fn main() -> rfsquid::Result<()> {
    let device = Device::new(DeviceParams::reference(), 0.332, 1)?;
    let c = device.crossing;
    println!("phi_x0 = {:.12}, e0 = {:.9} U0, lambda0 = {:.5}", c.phi_x0, c.e0, c.lambda0);
    println!("left level k1 = {}, right level k2 = {}", c.k1, c.k2);
    println!("minimum splitting = {:.4e} U0 = {:.4} GHz", c.gap, device.scales.joule(c.gap) / rfsquid::constants::H / 1e9);

    println!("\n{:>16} {:>14} {:>14} {:>14} {:>14}", "phi_x", "lower", "hyp lower", "upper", "hyp upper");
    for k in -4..=4 {
        let phi_x = c.phi_x0 + k as f64 * 1e-4;
        let (lower, upper) = device.pair(&device.near_top(phi_x)?)?;
        let h = c.hyperbola(phi_x);
        println!("{phi_x:>16.10} {lower:>14.9} {:>14.9} {upper:>14.9} {:>14.9}", h.lower, h.upper);
    }
    Ok(())
}
