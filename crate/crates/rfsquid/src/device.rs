//! Device parameters, the reduced rf-SQUID potential and its geometry.
//!
//! Internally energies are measured in units of `U0 = (Phi0/2pi)^2 / L`,
//! `hbar = 1` and the phase is dimensionless, so the mass becomes
//! `eta^2 / 2` with `eta = sqrt(2 M U0) / hbar`. Actions are `eta` times the
//! reduced integrals below and times are in units of `hbar / U0`.

use crate::constants::{E_CHARGE, HBAR, PHI0};
use crate::error::{Error, Result};
use crate::roots::brent;
use std::f64::consts::PI;

/// Physical device parameters (SI units).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DeviceParams {
    pub beta_l: f64,
    /// Loop inductance, H.
    pub inductance: f64,
    /// Junction capacitance, F.
    pub capacitance: f64,
    /// Effective shunt resistance, ohm.
    pub r_eff: f64,
    /// Bath temperature, K.
    pub temperature: f64,
}

impl DeviceParams {
    /// The reference device: L = 210 pH, C = 0.1 pF, beta_L = 1.75,
    /// R_eff = 8 MOhm, T = 50 mK.
    pub fn reference() -> Self {
        Self {
            beta_l: 1.75,
            inductance: 210e-12,
            capacitance: 0.1e-12,
            r_eff: 8e6,
            temperature: 0.05,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let checks: [(&'static str, f64, bool); 5] = [
            ("beta_L", self.beta_l, self.beta_l >= 0.0 && self.beta_l.is_finite()),
            ("L", self.inductance, self.inductance > 0.0 && self.inductance.is_finite()),
            ("C", self.capacitance, self.capacitance > 0.0 && self.capacitance.is_finite()),
            ("R_eff", self.r_eff, self.r_eff > 0.0 && self.r_eff.is_finite()),
            ("T", self.temperature, self.temperature >= 0.0 && self.temperature.is_finite()),
        ];
        for (name, value, ok) in checks {
            if !ok {
                return Err(Error::ParameterDomain {
                    name,
                    value,
                    reason: "must be finite and positive",
                });
            }
        }
        Ok(())
    }
}

/// Scales derived from the device parameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scales {
    /// Energy unit `(Phi0/2pi)^2 / L`, J.
    pub u0: f64,
    /// Effective mass `(hbar/2e)^2 C`, kg·m² in phase units.
    pub mass: f64,
    /// Critical current `beta_L Phi0 / (2 pi L)`, A.
    pub ic: f64,
    /// Dimensionless action scale `sqrt(2 M U0) / hbar`.
    pub eta: f64,
}

impl Scales {
    pub fn new(p: &DeviceParams) -> Result<Self> {
        p.validate()?;
        let flux = PHI0 / (2.0 * PI);
        let u0 = flux * flux / p.inductance;
        let charge = HBAR / (2.0 * E_CHARGE);
        let mass = charge * charge * p.capacitance;
        Ok(Self {
            u0,
            mass,
            ic: p.beta_l * PHI0 / (2.0 * PI * p.inductance),
            eta: (2.0 * mass * u0).sqrt() / HBAR,
        })
    }

    /// Reduced mass `M / (hbar^2 / U0)` in internal units.
    pub fn m(&self) -> f64 {
        0.5 * self.eta * self.eta
    }

    /// Small-oscillation quantum `hbar Omega / U0` for a curvature `u''`.
    pub fn hbar_omega(&self, curvature: f64) -> f64 {
        (curvature / self.m()).sqrt()
    }

    /// Converts a reduced energy to joules.
    pub fn joule(&self, e: f64) -> f64 {
        e * self.u0
    }

    /// Converts a reduced rate (inverse reduced time) to 1/s.
    pub fn per_second(&self, rate: f64) -> f64 {
        rate * self.u0 / HBAR
    }
}

/// `u(phi) = (phi - phi_x)^2 / 2 + beta_L cos(phi)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Potential {
    pub beta_l: f64,
    pub phi_x: f64,
}

impl Potential {
    pub fn new(beta_l: f64, phi_x: f64) -> Self {
        Self { beta_l, phi_x }
    }

    pub fn u(&self, phi: f64) -> f64 {
        let d = phi - self.phi_x;
        0.5 * d * d + self.beta_l * phi.cos()
    }

    pub fn du(&self, phi: f64) -> f64 {
        phi - self.phi_x - self.beta_l * phi.sin()
    }

    pub fn d2u(&self, phi: f64) -> f64 {
        1.0 - self.beta_l * phi.cos()
    }

    /// `u(a + x) - u(a)` without cancellation for small `x`.
    pub fn delta(&self, a: f64, x: f64) -> f64 {
        (a - self.phi_x) * x + 0.5 * x * x
            - 2.0 * self.beta_l * (a + 0.5 * x).sin() * (0.5 * x).sin()
    }

    /// `d u / d phi_x` at fixed phase.
    pub fn du_dphix(&self, phi: f64) -> f64 {
        -(phi - self.phi_x)
    }
}

/// Stationary points and barrier data of a bistable potential.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Geometry {
    pub pot: Potential,
    pub phi_min_left: f64,
    pub phi_top: f64,
    pub phi_min_right: f64,
    pub u_min_left: f64,
    pub u_top: f64,
    pub u_min_right: f64,
    /// Barrier curvature coefficient `U1 / U0 = (beta_L cos phi_top - 1) / 2`.
    pub u1: f64,
    /// Outer turning points at the barrier-top energy.
    pub tilde_phi1: f64,
    pub tilde_phi4: f64,
}

/// Curvature below which a stationary point counts as degenerate.
const FOLD_CURVATURE: f64 = 1e-9;

fn refine(pot: &Potential, lo: f64, hi: f64) -> Result<f64> {
    let mut x = brent(|p| pot.du(p), lo, hi, 1e-15)?;
    for _ in 0..2 {
        let step = pot.du(x) / pot.d2u(x);
        if step.is_finite() && (x - step) > lo && (x - step) < hi {
            x -= step;
        }
    }
    Ok(x)
}

impl Geometry {
    /// Locates the two minima and the barrier top.
    ///
    /// `u'` is monotone on each of the intervals where the curvature keeps
    /// its sign, so every stationary point is the unique root on its
    /// interval. Restricted to `1 < beta_L < 4.6`, where there are at most
    /// three stationary points.
    pub fn new(beta_l: f64, phi_x: f64) -> Result<Self> {
        let pot = Potential::new(beta_l, phi_x);
        if !(beta_l > 1.0 && beta_l < 4.6) || !phi_x.is_finite() {
            return Err(Error::BistabilityLost { phi_x });
        }
        let pc = (1.0 / beta_l).acos();
        // Brackets: concave core around zero, convex flanks outside it.
        let (cl, cr) = (-pc, pc);
        let reach = beta_l + phi_x.abs() + 1.0;
        let (ol, or) = ((-2.0 * PI + pc).max(-reach), (2.0 * PI - pc).min(reach));
        let has_root = |a: f64, b: f64| pot.du(a).signum() != pot.du(b).signum() || pot.du(a) == 0.0;
        if !(has_root(ol, cl) && has_root(cl, cr) && has_root(cr, or)) {
            return Err(Error::BistabilityLost { phi_x });
        }
        let phi_top = if pot.du(0.0) == 0.0 && phi_x == 0.0 {
            0.0
        } else {
            refine(&pot, cl, cr)?
        };
        let phi_min_left = refine(&pot, ol, cl)?;
        let phi_min_right = refine(&pot, cr, or)?;
        let (kl, kt, kr) = (pot.d2u(phi_min_left), pot.d2u(phi_top), pot.d2u(phi_min_right));
        if kl < FOLD_CURVATURE || kr < FOLD_CURVATURE || -kt < FOLD_CURVATURE {
            return Err(Error::BistabilityLost { phi_x });
        }
        let u_top = pot.u(phi_top);
        let mut g = Self {
            pot,
            phi_min_left,
            phi_top,
            phi_min_right,
            u_min_left: pot.u(phi_min_left),
            u_top,
            u_min_right: pot.u(phi_min_right),
            u1: -0.5 * kt,
            tilde_phi1: f64::NAN,
            tilde_phi4: f64::NAN,
        };
        g.tilde_phi1 = g.left_well().outer_at(u_top)?;
        g.tilde_phi4 = g.right_well().outer_at(u_top)?;
        Ok(g)
    }

    pub fn left_well(&self) -> Well {
        Well {
            pot: self.pot,
            phi_min: self.phi_min_left,
            lower: None,
            upper: Some(self.phi_top),
            side: WellSide::Left,
        }
    }

    pub fn right_well(&self) -> Well {
        Well {
            pot: self.pot,
            phi_min: self.phi_min_right,
            lower: Some(self.phi_top),
            upper: None,
            side: WellSide::Right,
        }
    }

    pub fn well(&self, side: WellSide) -> Well {
        match side {
            WellSide::Left => self.left_well(),
            WellSide::Right => self.right_well(),
            WellSide::Single => panic!("a bistable geometry has no single well"),
        }
    }

    /// Lowest energy at which both wells are classically allowed.
    pub fn floor(&self) -> f64 {
        self.u_min_left.max(self.u_min_right)
    }

    /// `hbar Omega_p / U0` of the left and right wells.
    pub fn plasma_quanta(&self, eta: f64) -> (f64, f64) {
        let m = 0.5 * eta * eta;
        (
            (self.pot.d2u(self.phi_min_left) / m).sqrt(),
            (self.pot.d2u(self.phi_min_right) / m).sqrt(),
        )
    }

    /// The four turning points `phi1 < phi2 <= phi_top <= phi3 < phi4`.
    pub fn turning_points(&self, e: f64) -> Result<TurningPoints> {
        if !(e > self.floor() && e < self.u_top) {
            return Err(Error::EnergyDomain {
                energy: e,
                lo: self.floor(),
                hi: self.u_top,
            });
        }
        if self.u_top - e <= 1e-12 {
            return Err(Error::DegenerateTurningPoint { energy: e });
        }
        let (phi1, phi2) = self.left_well().turning_points(e)?;
        let (phi3, phi4) = self.right_well().turning_points(e)?;
        Ok(TurningPoints {
            phi1,
            phi2,
            phi3,
            phi4,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub phi1: f64,
    pub phi2: f64,
    pub phi3: f64,
    pub phi4: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum WellSide {
    Left,
    Right,
    /// The only well of a monostable potential.
    Single,
}

/// One potential well: a minimum plus the region it owns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Well {
    pub pot: Potential,
    pub phi_min: f64,
    pub lower: Option<f64>,
    pub upper: Option<f64>,
    pub side: WellSide,
}

impl Well {
    /// The global minimum of a potential with `beta_L < 1`.
    pub fn single(pot: Potential) -> Result<Self> {
        if !(pot.beta_l < 1.0) {
            return Err(Error::ParameterDomain {
                name: "beta_L",
                value: pot.beta_l,
                reason: "a single well needs beta_L < 1",
            });
        }
        let r = pot.beta_l + 1.0;
        let phi_min = refine(&pot, pot.phi_x - r, pot.phi_x + r)?;
        Ok(Self {
            pot,
            phi_min,
            lower: None,
            upper: None,
            side: WellSide::Single,
        })
    }

    pub fn u_min(&self) -> f64 {
        self.pot.u(self.phi_min)
    }

    /// Energy above which the well is no longer closed.
    pub fn ceiling(&self) -> f64 {
        let lo = self.lower.map_or(f64::INFINITY, |p| self.pot.u(p));
        let hi = self.upper.map_or(f64::INFINITY, |p| self.pot.u(p));
        lo.min(hi)
    }

    fn far(&self, e: f64) -> f64 {
        // u >= (phi - phi_x)^2/2 - beta_L, so this distance is classically forbidden
        (2.0 * (e + self.pot.beta_l)).max(0.0).sqrt() + 0.5
    }

    fn outer_at(&self, e: f64) -> Result<f64> {
        let f = |p: f64| self.pot.u(p) - e;
        match self.side {
            WellSide::Right => brent(f, self.phi_min, self.pot.phi_x + self.far(e), 1e-15),
            _ => brent(f, self.pot.phi_x - self.far(e), self.phi_min, 1e-15),
        }
    }

    /// Turning points `(a, b)`, `a < b`, at energy `e`.
    pub fn turning_points(&self, e: f64) -> Result<(f64, f64)> {
        let lo_e = self.u_min();
        let hi_e = self.ceiling();
        if !(e > lo_e && e < hi_e) {
            return Err(Error::EnergyDomain {
                energy: e,
                lo: lo_e,
                hi: hi_e,
            });
        }
        let f = |p: f64| self.pot.u(p) - e;
        let lo = self.lower.unwrap_or(self.pot.phi_x - self.far(e));
        let hi = self.upper.unwrap_or(self.pot.phi_x + self.far(e));
        let a = brent(f, lo, self.phi_min, 1e-15)?;
        let b = brent(f, self.phi_min, hi, 1e-15)?;
        Ok((a, b))
    }

    /// The turning point adjacent to the barrier (inner) and the outer one,
    /// as `(outer, inner)`.
    pub fn outer_inner(&self, e: f64) -> Result<(f64, f64)> {
        let (a, b) = self.turning_points(e)?;
        Ok(match self.side {
            WellSide::Right => (b, a),
            _ => (a, b),
        })
    }
}
