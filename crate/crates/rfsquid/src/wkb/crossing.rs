use super::{well_integrals, NearTop};
use crate::device::Geometry;
use crate::error::{Error, Result};
use crate::roots::brent;
use std::f64::consts::{FRAC_PI_2, PI};

/// A crossing of the left level `k1` with the right level `k2`, with the
/// first-order Taylor coefficients of `Theta_i = S_i + theta/2`.
#[derive(Debug, Clone, Copy)]
pub struct CrossingPoint {
    pub phi_x0: f64,
    /// Reduced crossing energy.
    pub e0: f64,
    pub lambda0: f64,
    pub k1: u32,
    pub k2: u32,
    /// `d Theta_i / d phi_x` at fixed energy.
    pub alpha1: f64,
    pub alpha2: f64,
    /// `d Theta_i / d E` at fixed flux.
    pub beta1: f64,
    pub beta2: f64,
    /// Minimum splitting `sqrt(exp(-pi lambda0) / (beta1 beta2))`.
    pub gap: f64,
    pub beta_l: f64,
    pub eta: f64,
}

/// The two hyperbolic branches of the linearised spectrum.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hyperbola {
    pub upper: f64,
    pub lower: f64,
}

fn level_target(k: u32) -> f64 {
    FRAC_PI_2 + PI * k as f64
}

impl CrossingPoint {
    /// Energy of left level `k1` (including the barrier phase) at `phi_x`.
    pub fn left_level(beta_l: f64, eta: f64, phi_x: f64, k1: u32) -> Result<(NearTop, f64)> {
        let nt = NearTop::new(Geometry::new(beta_l, phi_x)?, eta);
        let target = level_target(k1);
        let lo = nt.geom.u_min_left + 1e-12;
        let hi = nt.ceiling();
        let (top, _) = nt.theta1_only(hi)?;
        if top < target {
            return Err(Error::NoCrossing(format!(
                "left level {k1} is above the barrier at phi_x = {phi_x}"
            )));
        }
        let e = brent(
            |e| {
                if e <= nt.geom.u_min_left {
                    -target
                } else {
                    nt.theta1_only(e).map_or(f64::NAN, |(t, _)| t - target)
                }
            },
            lo,
            hi,
            1e-15,
        )?;
        Ok((nt, e))
    }

    fn theta2_along(beta_l: f64, eta: f64, phi_x: f64, k1: u32) -> Result<f64> {
        let (nt, e) = Self::left_level(beta_l, eta, phi_x, k1)?;
        if e <= nt.geom.u_min_right {
            return Err(Error::NoCrossing("right well is empty at this energy".into()));
        }
        let w = well_integrals(&nt.geom.right_well(), e)?;
        Ok(eta * w.action + 0.5 * nt.theta(nt.lambda(e)))
    }

    /// Finds the crossing of left level `k1` with the nearest right level,
    /// starting from `seed_phi_x`.
    pub fn find(beta_l: f64, eta: f64, seed_phi_x: f64, k1: u32) -> Result<Self> {
        let t2 = Self::theta2_along(beta_l, eta, seed_phi_x, k1)?;
        let k2f = ((t2 - FRAC_PI_2) / PI).round();
        if k2f < 0.0 {
            return Err(Error::NoCrossing("right level index would be negative".into()));
        }
        let k2 = k2f as u32;
        let target = level_target(k2);
        let g = |x: f64| Self::theta2_along(beta_l, eta, x, k1).map(|t| t - target);
        let g0 = g(seed_phi_x)?;
        let mut bracket = None;
        let mut h = 2e-3;
        'search: for _ in 0..12 {
            for x in [seed_phi_x + h, seed_phi_x - h] {
                if let Ok(gx) = g(x) {
                    if gx.signum() != g0.signum() {
                        bracket = Some(if x > seed_phi_x { (seed_phi_x, x) } else { (x, seed_phi_x) });
                        break 'search;
                    }
                }
            }
            h *= 1.5;
        }
        let (a, b) = bracket.ok_or_else(|| {
            Error::NoCrossing(format!("no crossing of left level {k1} near phi_x = {seed_phi_x}"))
        })?;
        // narrow the bracket so both ends are the nearest sign change
        let phi_x0 = brent(|x| g(x).unwrap_or(f64::NAN), a, b, 1e-14)?;
        Self::at(beta_l, eta, phi_x0, k1, k2)
    }

    /// Every crossing of left level `k1` with a right level for `phi_x` in
    /// `[lo, hi]`, found by sampling `Theta_2` along the left level.
    pub fn all_in(beta_l: f64, eta: f64, k1: u32, lo: f64, hi: f64, n_grid: usize) -> Result<Vec<Self>> {
        let n = n_grid.max(2);
        let xs: Vec<f64> = (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect();
        let idx: Vec<Option<f64>> = xs
            .iter()
            .map(|&x| Self::theta2_along(beta_l, eta, x, k1).ok().map(|t| (t - FRAC_PI_2) / PI))
            .collect();
        let mut out = Vec::new();
        for i in 0..n - 1 {
            let (Some(c0), Some(c1)) = (idx[i], idx[i + 1]) else {
                continue;
            };
            let (m_lo, m_hi) = (c0.min(c1).floor() + 1.0, c0.max(c1).floor());
            let mut m = m_lo.max(0.0);
            while m <= m_hi {
                let target = level_target(m as u32);
                let g = |x: f64| Self::theta2_along(beta_l, eta, x, k1).map_or(f64::NAN, |t| t - target);
                let x0 = brent(g, xs[i], xs[i + 1], 1e-14)?;
                out.push(Self::at(beta_l, eta, x0, k1, m as u32)?);
                m += 1.0;
            }
        }
        Ok(out)
    }

    /// Evaluates the Taylor coefficients at a known crossing.
    pub fn at(beta_l: f64, eta: f64, phi_x0: f64, k1: u32, k2: u32) -> Result<Self> {
        let (nt, e0) = Self::left_level(beta_l, eta, phi_x0, k1)?;
        let ph = nt.phases(e0)?;
        let lambda0 = ph.lambda;
        let dth = 0.5 * nt.dtheta(lambda0);
        let dl_de = nt.dlambda_de();
        let dl_dx = nt.dlambda_dphix(e0);
        let half_eta = 0.5 * eta;
        let alpha1 = half_eta * ph.left.moment + dth * dl_dx;
        let alpha2 = half_eta * ph.right.moment + dth * dl_dx;
        let beta1 = half_eta * ph.left.time + dth * dl_de;
        let beta2 = half_eta * ph.right.time + dth * dl_de;
        if !(beta1 > 0.0 && beta2 > 0.0) {
            return Err(Error::NoCrossing(format!(
                "non-positive energy derivative (beta1 = {beta1}, beta2 = {beta2})"
            )));
        }
        let gap = ((-PI * lambda0).exp() / (beta1 * beta2)).sqrt();
        Ok(Self {
            phi_x0,
            e0,
            lambda0,
            k1,
            k2,
            alpha1,
            alpha2,
            beta1,
            beta2,
            gap,
            beta_l,
            eta,
        })
    }

    /// Linearised pair energies at `phi_x`.
    pub fn hyperbola(&self, phi_x: f64) -> Hyperbola {
        let d = phi_x - self.phi_x0;
        let (a1, a2, b1, b2) = (self.alpha1, self.alpha2, self.beta1, self.beta2);
        let p = b1 * b2;
        let mid = -(a1 * b2 + a2 * b1) * d / (2.0 * p);
        let skew = a1 * b2 - a2 * b1;
        let half = (skew * skew * d * d + p * (-PI * self.lambda0).exp()).sqrt() / (2.0 * p);
        Hyperbola {
            upper: self.e0 + mid + half,
            lower: self.e0 + mid - half,
        }
    }

    /// Slopes `dE/dphi_x` of the uncoupled left and right levels.
    pub fn diabatic_slopes(&self) -> (f64, f64) {
        (-self.alpha1 / self.beta1, -self.alpha2 / self.beta2)
    }

    /// Values of the counting function for the lower and upper member of
    /// the pair.
    pub fn pair_counts(&self) -> (f64, f64) {
        let m = (self.k1 + self.k2) as f64;
        (m, m + 1.0)
    }
}
