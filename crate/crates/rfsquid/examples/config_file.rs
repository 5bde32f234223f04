//! Parsing a key = value configuration and printing it back with every
//! default filled in.

use rfsquid::sweep::parse_config;

const TEXT: &str = "\
# 24.456 GHz preset
device.beta_L = 1.35
device.L = 162e-12
device.C = 0.1e-12
device.R_eff = 8e6
device.T = 0.05
drive.nu = 24.456e9
sweep.seed_phi_x = 0.0722
";

fn main() -> rfsquid::Result<()> {
    let cfg = parse_config(TEXT)?;
    print!("{}", cfg.to_text());
    match parse_config(&TEXT.replace("beta_L = 1.35", "beta_L = -1")) {
        Ok(_) => println!("unexpectedly accepted"),
        Err(e) => println!("\nrejected: {e}"),
    }
    Ok(())
}
