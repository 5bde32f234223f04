use super::well_integrals;
use crate::device::{Geometry, Well};
use crate::error::{Error, Result};
use crate::roots::brent;
use std::f64::consts::PI;

/// Reduced action `int sqrt(e - u)` of a single well.
pub fn well_action(well: &Well, e: f64) -> Result<f64> {
    Ok(well_integrals(well, e)?.action)
}

/// Bohr–Sommerfeld level `n` of one well: `eta * action = pi (n + 1/2)`.
pub fn bs_level(well: &Well, eta: f64, n: u32) -> Result<f64> {
    let target = PI * (n as f64 + 0.5) / eta;
    let lo = well.u_min();
    let hi = well.ceiling().min(lo + 1e3) - 2.0 * super::TOP_MARGIN;
    let top = well_action(well, hi)?;
    if top < target {
        return Err(Error::NotEnoughLevels {
            needed: n as usize + 1,
            found: 0,
        });
    }
    let f = |e: f64| {
        if e <= lo {
            -target
        } else {
            well_action(well, e).map_or(f64::NAN, |a| a - target)
        }
    };
    brent(f, lo, hi, 1e-15)
}

/// Harmonic ground level `u_min + hbar Omega / 2` of a well.
pub fn harmonic_ground(well: &Well, eta: f64) -> f64 {
    let m = 0.5 * eta * eta;
    well.u_min() + 0.5 * (well.pot.d2u(well.phi_min) / m).sqrt()
}

/// Localised levels of both wells below a ceiling.
#[derive(Debug, Clone, PartialEq)]
pub struct WellLevels {
    /// Harmonic ground level of the left well.
    pub e0: f64,
    /// Bohr–Sommerfeld ladders, ascending.
    pub left: Vec<f64>,
    pub right: Vec<f64>,
}

impl WellLevels {
    pub fn new(geom: &Geometry, eta: f64, ceiling: f64) -> Result<Self> {
        let ladder = |w: Well| -> Result<Vec<f64>> {
            let mut out = Vec::new();
            for n in 0.. {
                match bs_level(&w, eta, n) {
                    Ok(e) if e < ceiling => out.push(e),
                    Ok(_) | Err(Error::NotEnoughLevels { .. }) => break,
                    Err(e) => return Err(e),
                }
            }
            Ok(out)
        };
        Ok(Self {
            e0: harmonic_ground(&geom.left_well(), eta),
            left: ladder(geom.left_well())?,
            right: ladder(geom.right_well())?,
        })
    }

    /// Highest left level below the ceiling.
    pub fn e_l(&self) -> Option<f64> {
        self.left.last().copied()
    }

    pub fn e_r(&self) -> Option<f64> {
        self.right.last().copied()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::Potential;

    #[test]
    fn harmonic_levels_are_exact() {
        let eta = 31.6957;
        let well = Well::single(Potential::new(0.0, 0.1)).unwrap();
        let quantum = 2f64.sqrt() / eta;
        for n in 0..10 {
            let e = bs_level(&well, eta, n).unwrap();
            let exact = quantum * (n as f64 + 0.5);
            assert!((e - exact).abs() < 1e-12, "{n}: {e} vs {exact}");
        }
        assert!((harmonic_ground(&well, eta) - 0.5 * quantum).abs() < 1e-15);
    }

    #[test]
    fn ladders_are_sorted_and_below_ceiling() {
        let g = Geometry::new(1.75, 0.2).unwrap();
        let wl = WellLevels::new(&g, 31.6957, g.u_top).unwrap();
        assert!(!wl.left.is_empty() && wl.right.len() > wl.left.len());
        assert!(wl.left.windows(2).all(|w| w[0] < w[1]));
        assert!(wl.e_r().unwrap() < g.u_top);
    }
}
