//! Matrix elements of the coordinate and of exp(i phi/2) between the
//! ground state, the delocalised pair and the single-well levels.

use rfsquid::sweep::Device;
use rfsquid::DeviceParams;

fn main() -> rfsquid::Result<()> {
    let device = Device::new(DeviceParams::reference(), 0.332, 1)?;
    let x0 = device.crossing.phi_x0;
    for dx in [-4e-4, 0.0, 4e-4] {
        let ps = device.spectrum_at(x0 + dx)?;
        let m = ps.elements;
        let lv = ps.levels;
        println!("phi_x = {:.9}", ps.phi_x);
        println!("  E0 = {:.6}, EL = {:.6}, ER = {:.6}, Ef1 = {:.9}, Ef2 = {:.9}", lv.e0, lv.el, lv.er, lv.f1.energy, lv.f2.energy);
        println!("  <0|phi|f1> = {:+.4e}   <0|phi|f2> = {:+.4e}", m.phi_0f1, m.phi_0f2);
        println!("  <f1|e^(i phi/2)|f2> = {:+.4e}", m.exp_f1f2);
        println!("  <L|e^(i phi/2)|f1>  = {:+.4e}   <L|..|f2> = {:+.4e}", m.exp_lf1, m.exp_lf2);
        println!("  <R|e^(i phi/2)|f1>  = {:+.4e}   <R|..|f2> = {:+.4e}", m.exp_rf1, m.exp_rf2);
    }
    Ok(())
}
