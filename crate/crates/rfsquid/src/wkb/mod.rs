//! Quasiclassical spectrum near the barrier top.
//!
//! Levels of the double well solve
//! `cos(S_R - S_L) + kappa cos(theta + S_R + S_L) = 0`, where `S_L`, `S_R`
//! are the classical actions of the two wells and `theta(lambda)` is the
//! parabolic-barrier phase. Writing `Theta_i = S_i + theta/2` and
//! `r = (kappa - 1)/(kappa + 1)`, the residual factorises as
//! `(1 + kappa)(cos Theta_1 cos Theta_2 - r sin Theta_1 sin Theta_2)`, so its
//! roots are exactly the energies at which the continuous counting function
//! `(Theta_2 - psi_r(Theta_1)) / pi` takes an integer value. Levels are
//! found by bracketing that function, which cannot skip a near-degenerate
//! pair the way a grid scan of the residual can.

mod bohr_sommerfeld;
mod crossing;
mod expansion;

pub use bohr_sommerfeld::{bs_level, harmonic_ground, well_action, WellLevels};
pub use crossing::{CrossingPoint, Hyperbola};
pub use expansion::Expansion;

use crate::device::{Geometry, Potential, Well, WellSide};
use crate::error::{Error, Result};
use crate::quad::tanh_sinh;
use crate::roots::brent;
use crate::specfun::{chi, dchi, kappa};
use std::f64::consts::{FRAC_PI_2, PI};

const RTOL: f64 = 1e-13;

/// Closest approach to the barrier top handled by the near-top formulae.
pub const TOP_MARGIN: f64 = 1e-11;

/// Reduced integrals of one well at a fixed energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WellIntegrals {
    /// Lower and upper turning points.
    pub a: f64,
    pub b: f64,
    /// `int sqrt(e - u)`.
    pub action: f64,
    /// `int 1/sqrt(e - u)`.
    pub time: f64,
    /// `int (phi - phi_x)/sqrt(e - u)`.
    pub moment: f64,
}

/// Integrates over `[a, b]` with both ends at classical turning points.
///
/// `e - u` is measured from the nearer turning point, taken as exact; the
/// rounding residual `e - u(a)` would otherwise dominate within ~1e-14 of
/// the end and cut off the inverse square-root singularity.
pub fn integrate_between(pot: &Potential, a: f64, b: f64) -> WellIntegrals {
    let r = tanh_sinh(
        |x, da, db| {
            let v = if da <= db {
                -pot.delta(a, da)
            } else {
                -pot.delta(b, -db)
            };
            if v <= 0.0 {
                return [0.0; 3];
            }
            let s = v.sqrt();
            [s, 1.0 / s, (x - pot.phi_x) / s]
        },
        a,
        b,
        RTOL,
    );
    WellIntegrals {
        a,
        b,
        action: r.value[0],
        time: r.value[1],
        moment: r.value[2],
    }
}

/// Integrals of `well` at energy `e`.
pub fn well_integrals(well: &Well, e: f64) -> Result<WellIntegrals> {
    let (a, b) = well.turning_points(e)?;
    Ok(integrate_between(&well.pot, a, b))
}

/// `psi_r(x)`: the continuous decreasing solution of `cot psi = r tan x`.
fn psi_branch(x: f64, r: f64) -> f64 {
    let n = (x / PI + 0.5).floor();
    let y = x - n * PI;
    FRAC_PI_2 - (r * y.sin()).atan2(y.cos()) - n * PI
}

/// The near-top quantisation problem of one bistable potential.
#[derive(Debug, Clone, Copy)]
pub struct NearTop {
    pub geom: Geometry,
    pub eta: f64,
    /// Multiplies `chi` inside `theta`; 1 for the physical phase.
    pub chi_scale: f64,
}

/// Actions and phases at one energy.
#[derive(Debug, Clone, Copy)]
pub struct Phases {
    pub e: f64,
    pub lambda: f64,
    pub left: WellIntegrals,
    pub right: WellIntegrals,
    /// `eta * action` of each well.
    pub s_left: f64,
    pub s_right: f64,
    pub theta: f64,
    pub kappa: f64,
}

impl Phases {
    pub fn theta1(&self) -> f64 {
        self.s_left + 0.5 * self.theta
    }

    pub fn theta2(&self) -> f64 {
        self.s_right + 0.5 * self.theta
    }

    /// `cos(S_R - S_L) + kappa cos(theta + S_R + S_L)`.
    pub fn residual(&self) -> f64 {
        (self.s_right - self.s_left).cos()
            + self.kappa * (self.theta + self.s_right + self.s_left).cos()
    }

    /// Continuous level-counting function; integer exactly at the roots
    /// of [`Phases::residual`].
    pub fn count(&self) -> f64 {
        let r = (self.kappa - 1.0) / (self.kappa + 1.0);
        (self.theta2() - psi_branch(self.theta1(), r)) / PI
    }

    /// `S_L + (lambda/4)(1 + ln(2/lambda))`.
    pub fn phi1(&self) -> f64 {
        self.s_left + log_term(self.lambda)
    }

    pub fn phi2(&self) -> f64 {
        self.s_right + log_term(self.lambda)
    }
}

fn log_term(lambda: f64) -> f64 {
    if lambda <= 0.0 {
        0.0
    } else {
        0.25 * lambda * (1.0 + (2.0 / lambda).ln())
    }
}

impl NearTop {
    pub fn new(geom: Geometry, eta: f64) -> Self {
        Self {
            geom,
            eta,
            chi_scale: 1.0,
        }
    }

    pub fn lambda(&self, e: f64) -> f64 {
        self.eta * (self.geom.u_top - e) / self.geom.u1.sqrt()
    }

    /// `d lambda / d e`.
    pub fn dlambda_de(&self) -> f64 {
        -self.eta / self.geom.u1.sqrt()
    }

    /// `d lambda / d phi_x` at fixed energy.
    pub fn dlambda_dphix(&self, e: f64) -> f64 {
        let g = &self.geom;
        let b = g.pot.beta_l;
        let (s, c) = g.phi_top.sin_cos();
        let du_top = -(g.phi_top - g.pot.phi_x);
        let du1 = 0.5 * b * s / (b * c - 1.0);
        self.eta / g.u1.sqrt() * (du_top - (g.u_top - e) / (2.0 * g.u1) * du1)
    }

    pub fn theta(&self, lambda: f64) -> f64 {
        if lambda == 0.0 {
            return 0.0;
        }
        self.chi_scale * chi(lambda) + 0.5 * lambda + 0.5 * lambda * (2.0 / lambda).ln()
    }

    pub fn dtheta(&self, lambda: f64) -> f64 {
        self.chi_scale * dchi(lambda) + 0.5 * (2.0 / lambda).ln()
    }

    fn check_energy(&self, e: f64) -> Result<()> {
        let g = &self.geom;
        if !(e > g.floor() && e < g.u_top) {
            return Err(Error::EnergyDomain {
                energy: e,
                lo: g.floor(),
                hi: g.u_top,
            });
        }
        if g.u_top - e < TOP_MARGIN {
            return Err(Error::DegenerateTurningPoint { energy: e });
        }
        Ok(())
    }

    /// `Theta_1 = S_L + theta/2` and the left-well integrals; only the left
    /// well needs to be classically allowed.
    pub fn theta1_only(&self, e: f64) -> Result<(f64, WellIntegrals)> {
        if self.geom.u_top - e < TOP_MARGIN {
            return Err(Error::DegenerateTurningPoint { energy: e });
        }
        let w = well_integrals(&self.geom.left_well(), e)?;
        let lambda = self.lambda(e);
        Ok((self.eta * w.action + 0.5 * self.theta(lambda), w))
    }

    pub fn phases(&self, e: f64) -> Result<Phases> {
        self.check_energy(e)?;
        let left = well_integrals(&self.geom.left_well(), e)?;
        let right = well_integrals(&self.geom.right_well(), e)?;
        let lambda = self.lambda(e);
        Ok(Phases {
            e,
            lambda,
            left,
            right,
            s_left: self.eta * left.action,
            s_right: self.eta * right.action,
            theta: self.theta(lambda),
            kappa: kappa(lambda),
        })
    }

    pub fn residual(&self, e: f64) -> Result<f64> {
        Ok(self.phases(e)?.residual())
    }

    pub fn count(&self, e: f64) -> Result<f64> {
        Ok(self.phases(e)?.count())
    }

    /// Highest usable energy below the barrier top.
    pub fn ceiling(&self) -> f64 {
        self.geom.u_top - 2.0 * TOP_MARGIN
    }

    fn count_or_nan(&self, e: f64) -> f64 {
        self.count(e).unwrap_or(f64::NAN)
    }

    /// All levels in `[lo, hi]`, located by sampling the counting function
    /// on `n_grid` points and solving for every integer it crosses.
    pub fn levels_in(&self, lo: f64, hi: f64, n_grid: usize) -> Result<Vec<f64>> {
        let lo = lo.max(self.geom.floor() + 1e-12);
        let hi = hi.min(self.ceiling());
        if !(hi > lo) {
            return Ok(Vec::new());
        }
        let n = n_grid.max(2);
        let es: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let cs: Vec<f64> = es
            .iter()
            .map(|&e| self.count(e))
            .collect::<Result<_>>()?;
        let mut out = Vec::new();
        for i in 0..n - 1 {
            let (c0, c1) = (cs[i], cs[i + 1]);
            let (m_lo, m_hi) = (c0.min(c1).floor() + 1.0, c0.max(c1).floor());
            let mut m = m_lo;
            while m <= m_hi {
                let e = brent(|e| self.count_or_nan(e) - m, es[i], es[i + 1], 1e-14)?;
                out.push(e);
                m += 1.0;
            }
        }
        out.sort_by(f64::total_cmp);
        Ok(out)
    }

    /// Levels in the window of width `width` (reduced energy) below the
    /// barrier top. At least two are required.
    pub fn near_top_levels(&self, width: f64) -> Result<Vec<f64>> {
        let hi = self.ceiling();
        let lo = (self.geom.u_top - width).max(self.geom.floor() + 1e-9);
        let levels = self.levels_in(lo, hi, 2000)?;
        if levels.len() < 2 {
            return Err(Error::NotEnoughLevels {
                needed: 2,
                found: levels.len(),
            });
        }
        Ok(levels)
    }

    /// The level at which the counting function equals `m`, searched
    /// outward from `guess`.
    pub fn level_with_count(&self, m: f64, guess: f64, step: f64) -> Result<f64> {
        let lo = self.geom.floor() + 1e-12;
        let hi = self.ceiling();
        let f = |e: f64| self.count_or_nan(e) - m;
        let x0 = guess.clamp(lo, hi);
        let f0 = f(x0);
        if f0 == 0.0 {
            return Ok(x0);
        }
        if !f0.is_finite() {
            return Err(Error::RootNotFound(format!("count undefined at {x0}")));
        }
        // count increases with energy, so search in one direction
        let dir = if f0 < 0.0 { 1.0 } else { -1.0 };
        let mut h = step;
        let mut prev = x0;
        for _ in 0..80 {
            let x = (x0 + dir * h).clamp(lo, hi);
            let fx = f(x);
            if fx.is_finite() && fx.signum() != f0.signum() {
                let (a, b) = if dir > 0.0 { (prev, x) } else { (x, prev) };
                return brent(f, a, b, 1e-15);
            }
            if x == lo || x == hi {
                break;
            }
            prev = x;
            h *= 1.6;
        }
        Err(Error::RootNotFound(format!("no level with count {m} near {guess}")))
    }

    /// Single-well integrals used for state normalisation.
    pub fn well(&self, side: WellSide) -> Well {
        self.geom.well(side)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::device::{DeviceParams, Scales};
    use crate::quad::gauss_kronrod;

    fn reference(phi_x: f64) -> NearTop {
        let s = Scales::new(&DeviceParams::reference()).unwrap();
        NearTop::new(Geometry::new(1.75, phi_x).unwrap(), s.eta)
    }

    #[test]
    fn psi_branch_is_continuous_and_decreasing() {
        let r = 0.17;
        let mut prev = psi_branch(-7.0, r);
        let mut x = -7.0;
        while x < 7.0 {
            x += 1e-3;
            let p = psi_branch(x, r);
            assert!(p < prev && prev - p < 0.01);
            let t = x.tan();
            if t.abs() < 1e6 {
                assert!((1.0 / p.tan() - r * t).abs() < 1e-6 * (1.0 + t.abs()));
            }
            prev = p;
        }
    }

    #[test]
    fn action_agrees_with_unsubtracted_quadrature() {
        let nt = reference(0.1);
        let e = nt.geom.u_top - 0.2;
        let w = well_integrals(&nt.geom.left_well(), e).unwrap();
        let pot = nt.geom.pot;
        let (direct, _) =
            gauss_kronrod(|p| (e - pot.u(p)).max(0.0).sqrt(), w.a, w.b, 1e-14, 1e-13);
        assert!((w.action - direct).abs() < 1e-9 * direct);
    }

    #[test]
    fn roots_of_count_are_roots_of_residual() {
        let nt = reference(0.0);
        let lv = nt.near_top_levels(3.0 * 0.050_372).unwrap();
        assert!(lv.len() >= 2);
        for e in lv {
            let r = nt.residual(e).unwrap();
            assert!(r.abs() < 1e-9, "residual {r} at {e}");
        }
    }

    #[test]
    fn count_increases_with_energy() {
        for phi_x in [0.0, 0.2, 0.3466] {
            let nt = reference(phi_x);
            let lo = nt.geom.floor() + 0.02;
            let mut prev = nt.count(lo).unwrap();
            for i in 1..400 {
                let e = lo + (nt.ceiling() - lo) * i as f64 / 400.0;
                let c = nt.count(e).unwrap();
                assert!(c > prev, "phi_x={phi_x} e={e}");
                prev = c;
            }
        }
    }
}
