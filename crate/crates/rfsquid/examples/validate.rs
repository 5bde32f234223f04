//! Runs the full validation suite on the reference device and prints the
//! result table.

use rfsquid::sweep::{validate_command, SweepConfig};

fn main() -> rfsquid::Result<()> {
    let report = validate_command(&SweepConfig::reference(&[]))?;
    print!("{}", report.table());
    println!("all passed: {}", report.all_passed());
    Ok(())
}
