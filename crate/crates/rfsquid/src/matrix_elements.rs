//! Quasiclassical transition matrix elements.
//!
//! An element between two states is a time integral along the classical
//! trajectory at their mean energy,
//! `<a|zeta|b> = 1/(2 M G_a G_b) int_0^{T/2} zeta(phi(t)) cos(2 pi l t / T) dt`,
//! with `l` the level-index difference and `G` the semiclassical
//! normalisation. States near the barrier top are spread over both wells;
//! their right-well amplitude relative to the left one is `B`.

use crate::device::{Potential, Well, WellSide};
use crate::error::{Error, Result};
use crate::wkb::{well_integrals, NearTop, Phases};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Cells per half period used by default.
pub const DEFAULT_CELLS: usize = 4096;

/// Half of a periodic classical orbit in one well, sampled uniformly in the
/// angle `theta` of `phi = outer + (inner - outer) sin^2(theta / 2)`.
///
/// `t = 0` at the outer turning point; `t = T/2` at the inner one.
#[derive(Debug, Clone)]
pub struct Trajectory {
    pub energy: f64,
    pub side: WellSide,
    pub outer: f64,
    pub inner: f64,
    /// Full period in reduced time units.
    pub period: f64,
    m: f64,
    phi: Vec<f64>,
    t: Vec<f64>,
    dt: Vec<f64>,
}

impl Trajectory {
    pub fn new(well: &Well, e: f64, eta: f64, cells: usize) -> Result<Self> {
        let n = cells.max(4);
        let (outer, inner) = well.outer_inner(e)?;
        let pot = well.pot;
        let m = 0.5 * eta * eta;
        let span = inner - outer;
        let slope_out = pot.du(outer).abs();
        let slope_in = pot.du(inner).abs();
        if slope_in == 0.0 || slope_out == 0.0 {
            return Err(Error::DegenerateTurningPoint { energy: e });
        }
        let phi_at = |th: f64| {
            let s = (0.5 * th).sin();
            outer + span * s * s
        };
        // dt/dtheta, smooth and even about both ends
        let rate = |th: f64| -> f64 {
            let (s, c) = (0.5 * th).sin_cos();
            if s == 0.0 {
                return (m * span.abs() / (2.0 * slope_out)).sqrt();
            }
            let v = if s * s <= 0.5 {
                -pot.delta(outer, span * s * s)
            } else {
                -pot.delta(inner, -span * c * c)
            };
            span.abs() * s * c.abs() * (m / (2.0 * v.max(f64::MIN_POSITIVE))).sqrt()
        };
        let h = PI / n as f64;
        let mut phi = Vec::with_capacity(n + 1);
        let mut t = Vec::with_capacity(n + 1);
        let mut dt = Vec::with_capacity(n + 1);
        let mut acc = 0.0;
        let mut trap = 0.0;
        let mut prev = rate(0.0);
        for j in 0..=n {
            let th = if j == n { PI } else { j as f64 * h };
            let d = match j {
                0 => prev,
                _ if j == n => (m * span.abs() / (2.0 * slope_in)).sqrt(),
                _ => rate(th),
            };
            if j > 0 {
                let mid = rate(th - 0.5 * h);
                acc += h / 6.0 * (prev + 4.0 * mid + d);
            }
            trap += if j == 0 || j == n { 0.5 * d } else { d };
            phi.push(if j == n { inner } else { phi_at(th) });
            t.push(acc);
            dt.push(d);
            prev = d;
        }
        // the trapezoid sum of an even periodic integrand converges
        // geometrically; rescale the Simpson running time to match it
        let half = trap * h;
        let scale = half / acc;
        for x in t.iter_mut() {
            *x *= scale;
        }
        Ok(Self {
            energy: e,
            side: well.side,
            outer,
            inner,
            period: 2.0 * half,
            m,
            phi,
            t,
            dt,
        })
    }

    pub fn cells(&self) -> usize {
        self.phi.len() - 1
    }

    /// `(t, phi, dphi/dt)` at the cell boundaries.
    pub fn samples(&self) -> Vec<(f64, f64, f64)> {
        let n = self.cells();
        let h = PI / n as f64;
        let span = self.inner - self.outer;
        (0..=n)
            .map(|j| {
                let th = j as f64 * h;
                let v = if j == 0 || j == n {
                    0.0
                } else {
                    0.5 * span * th.sin() / self.dt[j]
                };
                (self.t[j], self.phi[j], v)
            })
            .collect()
    }

    /// `int_0^{T/2} zeta(phi(t)) cos(2 pi l t / T) dt`.
    pub fn time_integral<F: Fn(f64) -> Complex64>(&self, zeta: F, ell: u32) -> Complex64 {
        let n = self.cells();
        let h = PI / n as f64;
        let w = 2.0 * PI * ell as f64 / self.period;
        let mut sum = Complex64::new(0.0, 0.0);
        for j in 0..=n {
            let weight = if j == 0 || j == n { 0.5 } else { 1.0 };
            let c = if ell == 0 { 1.0 } else { (w * self.t[j]).cos() };
            sum += zeta(self.phi[j]) * (weight * c * self.dt[j]);
        }
        sum * h
    }

    /// Reduced mass used for the time scale.
    pub fn mass(&self) -> f64 {
        self.m
    }
}

/// `G^2` of a state localised in one well at energy `e`.
pub fn localized_norm_sq(well: &Well, e: f64, eta: f64) -> Result<f64> {
    Ok(well_integrals(well, e)?.time / (2.0 * eta))
}

/// Right-well amplitude `B` of a near-top level.
pub fn b_coefficient(ph: &Phases) -> f64 {
    (0.5 * PI * ph.lambda).exp()
        * (ph.kappa * (ph.theta + ph.s_left + ph.s_right).sin() - (ph.s_left - ph.s_right).sin())
}

/// A level spread over both wells.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DelocalizedState {
    pub energy: f64,
    pub b: f64,
    /// Normalisation `G`.
    pub g: f64,
}

impl DelocalizedState {
    pub fn from_phases(ph: &Phases, eta: f64) -> Self {
        let b = b_coefficient(ph);
        let g2 = (ph.left.time + b * b * ph.right.time) / (2.0 * eta);
        Self {
            energy: ph.e,
            b,
            g: g2.sqrt(),
        }
    }

    /// Fraction of the norm in the left well.
    pub fn left_weight(&self, ph: &Phases) -> f64 {
        ph.left.time / (ph.left.time + self.b * self.b * ph.right.time)
    }
}

/// A level localised in one well.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LocalizedState {
    pub energy: f64,
    pub side: WellSide,
    pub g: f64,
}

impl LocalizedState {
    pub fn new(well: &Well, e: f64, eta: f64) -> Result<Self> {
        Ok(Self {
            energy: e,
            side: well.side,
            g: localized_norm_sq(well, e, eta)?.sqrt(),
        })
    }
}

/// `<a|zeta|f>` for a localised `a` and a delocalised `f`.
pub fn well_matrix_element<F: Fn(f64) -> Complex64>(
    nt: &NearTop,
    a: &LocalizedState,
    f: &DelocalizedState,
    zeta: F,
    ell: u32,
    cells: usize,
) -> Result<Complex64> {
    let well = nt.geom.well(a.side);
    let traj = Trajectory::new(&well, 0.5 * (a.energy + f.energy), nt.eta, cells)?;
    let amp = match a.side {
        WellSide::Right => f.b,
        _ => 1.0,
    };
    Ok(traj.time_integral(zeta, ell) * (amp / (2.0 * traj.mass() * a.g * f.g)))
}

/// `<f1|zeta|f2>` between the members of a near-degenerate pair,
/// orthogonalised with respect to the two level energies.
pub fn delocalized_matrix_element<F: Fn(f64) -> Complex64>(
    nt: &NearTop,
    f1: &DelocalizedState,
    f2: &DelocalizedState,
    zeta: F,
    cells: usize,
) -> Result<Complex64> {
    let e = 0.5 * (f1.energy + f2.energy);
    let left = Trajectory::new(&nt.geom.left_well(), e, nt.eta, cells)?;
    let right = Trajectory::new(&nt.geom.right_well(), e, nt.eta, cells)?;
    let (t1, t2) = (left.period, right.period);
    let il = left.time_integral(&zeta, 0);
    let ir = right.time_integral(&zeta, 0);
    let pref = (1.0 - f1.b * f2.b) / (2.0 * left.mass() * f1.g * f2.g);
    Ok((il * (t2 / (t1 + t2)) - ir * (t1 / (t1 + t2))) * pref)
}

/// `<a|zeta|a>` for a localised state: the classical time average.
pub fn diagonal_element<F: Fn(f64) -> Complex64>(
    well: &Well,
    e: f64,
    eta: f64,
    zeta: F,
    cells: usize,
) -> Result<Complex64> {
    let traj = Trajectory::new(well, e, eta, cells)?;
    Ok(traj.time_integral(zeta, 0) * (2.0 / traj.period))
}

pub fn exp_half(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, 0.5 * phi)
}

pub fn exp_minus_half(phi: f64) -> Complex64 {
    Complex64::from_polar(1.0, -0.5 * phi)
}

pub fn coordinate(phi: f64) -> Complex64 {
    Complex64::new(phi, 0.0)
}

/// Every element the kinetic equations need at one flux value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ElementSet {
    /// `<0|phi|f1>`, `<0|phi|f2>`.
    pub phi_0f1: f64,
    pub phi_0f2: f64,
    /// `<f1|e^{i phi/2}|f2>`.
    pub exp_f1f2: Complex64,
    pub exp_lf1: Complex64,
    pub exp_lf2: Complex64,
    pub exp_rf1: Complex64,
    pub exp_rf2: Complex64,
    /// `<0|e^{i phi/2}|0>`.
    pub exp_00: Complex64,
}

/// Levels of one flux point that enter the element set.
#[derive(Debug, Clone, Copy)]
pub struct LevelSet {
    pub e0: f64,
    pub el: f64,
    pub er: f64,
    pub f1: DelocalizedState,
    pub f2: DelocalizedState,
    /// Left quantum number of the pair.
    pub k1: u32,
}

impl ElementSet {
    pub fn build(nt: &NearTop, lv: &LevelSet, cells: usize) -> Result<Self> {
        let eta = nt.eta;
        let left = nt.geom.left_well();
        let right = nt.geom.right_well();
        let s0 = LocalizedState::new(&left, lv.e0, eta)?;
        let sl = if lv.el == lv.e0 {
            s0
        } else {
            LocalizedState::new(&left, lv.el, eta)?
        };
        let sr = LocalizedState::new(&right, lv.er, eta)?;
        let phi = |f: &DelocalizedState| well_matrix_element(nt, &s0, f, coordinate, lv.k1, cells);
        let exp_l = |f: &DelocalizedState| well_matrix_element(nt, &sl, f, exp_half, 1, cells);
        let exp_r = |f: &DelocalizedState| well_matrix_element(nt, &sr, f, exp_half, 1, cells);
        Ok(Self {
            phi_0f1: phi(&lv.f1)?.re,
            phi_0f2: phi(&lv.f2)?.re,
            exp_f1f2: delocalized_matrix_element(nt, &lv.f1, &lv.f2, exp_half, cells)?,
            exp_lf1: exp_l(&lv.f1)?,
            exp_lf2: exp_l(&lv.f2)?,
            exp_rf1: exp_r(&lv.f1)?,
            exp_rf2: exp_r(&lv.f2)?,
            exp_00: diagonal_element(&left, lv.e0, eta, exp_half, cells)?,
        })
    }
}

/// Harmonic-oscillator reference `<0|phi|1> = (sqrt(2) eta)^{-1/2}` for
/// `u = (phi - phi_x)^2 / 2`.
pub fn harmonic_dipole(eta: f64) -> f64 {
    (2f64.sqrt() * eta).powf(-0.5)
}

/// Quasiclassical `<0|phi|1>` of a single well, using Bohr–Sommerfeld
/// energies for both states.
pub fn single_well_dipole(pot: Potential, eta: f64, cells: usize) -> Result<f64> {
    let well = Well::single(pot)?;
    let e0 = crate::wkb::bs_level(&well, eta, 0)?;
    let e1 = crate::wkb::bs_level(&well, eta, 1)?;
    let g0 = localized_norm_sq(&well, e0, eta)?.sqrt();
    let g1 = localized_norm_sq(&well, e1, eta)?.sqrt();
    let traj = Trajectory::new(&well, 0.5 * (e0 + e1), eta, cells)?;
    Ok(traj.time_integral(coordinate, 1).re / (2.0 * traj.mass() * g0 * g1))
}
