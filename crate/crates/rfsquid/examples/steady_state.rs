//! Relaxation rates, level widths, driven populations and the escape rate
//! at the crossing point for a few drive frequencies.

use rfsquid::kinetics::{escape_rate, Drive, RateSet, SteadyState};
use rfsquid::sweep::Device;
use rfsquid::DeviceParams;

fn main() -> rfsquid::Result<()> {
    let device = Device::new(DeviceParams::reference(), 0.332, 1)?;
    let ps = device.spectrum_at(device.crossing.phi_x0)?;
    let input = device.kinetic_input(&ps);
    let bath = device.bath();
    let rates = RateSet::build(&input, &bath)?;
    println!("R_eff = {:.1e} ohm, T = {} K", bath.r_eff, bath.temperature);
    println!("W_f1f2 = {:.4e}  W_f2f1 = {:.4e}", rates.w_f1f2, rates.w_f2f1);
    println!("W00_f1f2 = {:.4e}  W00_f2f1 = {:.4e}", rates.w00_f1f2, rates.w00_f2f1);
    println!("W_Lf1 = {:.4e}  W_Lf2 = {:.4e}  W_Rf1 = {:.4e}  W_Rf2 = {:.4e}", rates.w_lf1, rates.w_lf2, rates.w_rf1, rates.w_rf2);
    println!("gamma1 = {:.4e} 1/s, gamma2 = {:.4e} 1/s", rates.gamma1, rates.gamma2);

    let h = rfsquid::constants::H;
    let f1 = (input.ef1 - input.e0) / h;
    let f2 = (input.ef2 - input.e0) / h;
    println!("\nf1 = {:.6} GHz, f2 = {:.6} GHz", f1 / 1e9, f2 / 1e9);
    println!("{:>12} {:>12} {:>12} {:>12} {:>12}", "nu [GHz]", "rho_f1", "rho_f2", "W [1/s]", "W_osc");
    for nu in [f2, 0.5 * (f1 + f2), f1, 30e9] {
        let drive = Drive { nu, current: 1e-12 };
        let state = SteadyState::solve(&input, &rates, &drive)?;
        let esc = escape_rate(&state, &rates);
        println!(
            "{:>12.6} {:>12.4e} {:>12.4e} {:>12.4e} {:>12.4e}",
            nu / 1e9,
            state.rho_f1,
            state.rho_f2,
            esc.w,
            esc.oscillation_amplitude
        );
    }
    Ok(())
}
