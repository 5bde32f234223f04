//! Finite-difference eigenvalues of the Schrödinger equation compared with
//! the quasiclassical near-top levels and the anticrossing gap.

use rfsquid::oracle::{diagonalize, exact_splitting_scan, DEFAULT_POINTS};
use rfsquid::sweep::validate::compare_levels;
use rfsquid::sweep::Device;
use rfsquid::{DeviceParams, Potential};

fn main() -> rfsquid::Result<()> {
    let device = Device::new(DeviceParams::reference(), 0.332, 1)?;
    let (beta_l, eta) = (device.params.beta_l, device.scales.eta);

    let low = diagonalize(&Potential::new(beta_l, 0.0), eta, 6, DEFAULT_POINTS)?;
    println!("lowest levels of the symmetric well:");
    for pair in low.energies.chunks(2) {
        println!("  {:.12}  {:.12}  split {:.2e}", pair[0], pair[1], pair[1] - pair[0]);
    }

    let cmp = compare_levels(beta_l, eta, 0.2, 1.0, 0.05, DEFAULT_POINTS)?;
    println!("\nphi_x = 0.2, window [{:.5}, {:.5}]", cmp.window.0, cmp.window.1);
    for &(i, j) in &cmp.pairs {
        let (q, o) = (cmp.quasiclassical[i], cmp.oracle[j]);
        println!("  {q:.9}  {o:.9}  {:+.2e} hbar Omega_p", (q - o) / cmp.hbar_omega_p);
    }
    println!("  bijective: {}", cmp.bijective());

    let c = device.crossing;
    let s = exact_splitting_scan(beta_l, eta, (c.phi_x0 - 2e-3, c.phi_x0 + 2e-3), c.e0, DEFAULT_POINTS)?;
    println!("\ngap: quasiclassical {:.4e} at {:.7}, grid {:.4e} at {:.7}", c.gap, c.phi_x0, s.gap, s.phi_x);
    Ok(())
}
