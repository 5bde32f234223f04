//! Escape rate against flux for the reference device at two drive
//! frequencies, with peak detection and CSV/SVG output.

use rfsquid::sweep::{analyse, emit_csv, emit_svg, run_sweep, SweepConfig};

fn main() -> rfsquid::Result<()> {
    let mut cfg = SweepConfig::reference(&[25.756e9, 36e9]);
    cfg.grid.n_points = 401;
    let out = run_sweep(&cfg)?;
    println!("crossing at phi_x0 = {:.9}", out.device.crossing.phi_x0);
    for &(nu, current) in &out.currents {
        let report = analyse(&out, nu)?;
        println!("nu = {:.3} GHz, I = {current:.3e} A: {}", nu / 1e9, report.classification.name());
        for p in &report.peaks {
            println!("  {:<10} phi_x = {:.9}  W = {:.4e} 1/s", p.kind.name(), p.phi_x, p.w);
        }
    }

    let dir = std::env::temp_dir();
    let csv = dir.join("rfsquid_sweep.csv");
    let svg = dir.join("rfsquid_sweep.svg");
    emit_csv(&out.rows, &csv)?;
    emit_svg(&out.rows_for(25.756e9), &svg)?;
    println!("wrote {} and {}", csv.display(), svg.display());
    Ok(())
}
