//! Ohmic relaxation rates, the driven steady state and the escape rate.
//!
//! All quantities here are in SI units: energies in joules, rates and
//! angular frequencies in 1/s, currents in amperes.

use crate::constants::{E_CHARGE, HBAR, K_B};
use crate::device::Scales;
use crate::error::{Error, Result};
use crate::matrix_elements::{ElementSet, LevelSet};
use num_complex::Complex64;
use std::f64::consts::PI;

/// Default admissible energy mismatch of a rate element, in units of the
/// plasma quantum.
pub const RESONANCE_FRACTION: f64 = 0.5;

/// Populations above this value violate the weak-drive premise.
pub const PERTURBATIVE_LIMIT: f64 = 0.1;

/// Dissipative environment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bath {
    /// Ohm.
    pub r_eff: f64,
    /// Kelvin.
    pub temperature: f64,
}

/// Microwave drive `I cos(2 pi nu t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Drive {
    /// Hz.
    pub nu: f64,
    /// A.
    pub current: f64,
}

impl Drive {
    pub fn omega(&self) -> f64 {
        2.0 * PI * self.nu
    }
}

/// Levels (J) and matrix elements of one flux point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KineticInput {
    pub e0: f64,
    pub el: f64,
    pub er: f64,
    pub ef1: f64,
    pub ef2: f64,
    pub elements: ElementSet,
    /// Largest admissible `|dE_mj - dE_nf|`, J.
    pub resonance_limit: f64,
}

impl KineticInput {
    /// Converts reduced levels; `hbar_omega_p` is the reduced plasma quantum.
    pub fn from_reduced(lv: &LevelSet, elements: ElementSet, scales: &Scales, hbar_omega_p: f64) -> Self {
        Self {
            e0: scales.joule(lv.e0),
            el: scales.joule(lv.el),
            er: scales.joule(lv.er),
            ef1: scales.joule(lv.f1.energy),
            ef2: scales.joule(lv.f2.energy),
            elements,
            resonance_limit: RESONANCE_FRACTION * scales.joule(hbar_omega_p),
        }
    }

    /// `(E_f2 - E_f1) / hbar`.
    pub fn omega21(&self) -> f64 {
        (self.ef2 - self.ef1) / HBAR
    }

    /// Detunings `omega - (E_fi - E_0)/hbar`.
    pub fn detunings(&self, drive: &Drive) -> (f64, f64) {
        let w = drive.omega();
        (w - (self.ef1 - self.e0) / HBAR, w - (self.ef2 - self.e0) / HBAR)
    }
}

/// `x / (1 - exp(-x / kT))`, the combination `(1 + tanh) N pi / 2`.
fn thermal_energy(x: f64, temperature: f64) -> f64 {
    let kt = K_B * temperature;
    if kt == 0.0 {
        return x.max(0.0);
    }
    let y = x / kt;
    if y.abs() < 1e-300 {
        return kt;
    }
    x / -(-y).exp_m1()
}

/// `W^{jm}_{fn}` for level spacings `dE_mj = E_m - E_j` and
/// `dE_nf = E_n - E_f`, with the symmetrised matrix-element bracket
/// `<j|e^{i phi/2}|m><f|e^{-i phi/2}|n> + c.c.`.
///
/// The bracket is real by construction; its sign is kept, so coherence
/// transfer elements may come out negative.
pub fn generic_rate(
    de_mj: f64,
    de_nf: f64,
    bath: &Bath,
    bracket: Complex64,
    resonance_limit: f64,
) -> Result<f64> {
    if (de_mj - de_nf).abs() > resonance_limit {
        return Err(Error::ResonanceMismatch {
            lhs: de_mj,
            rhs: de_nf,
            limit: resonance_limit,
        });
    }
    let x = 0.5 * (de_mj + de_nf);
    Ok(thermal_energy(x, bath.temperature) / (bath.r_eff * E_CHARGE * E_CHARGE) * bracket.re)
}

/// Zero-temperature decay `2 (E_f - E_a) / (R e^2) |<a|e^{i phi/2}|f>|^2`.
pub fn decay_rate(ef: f64, ea: f64, bath: &Bath, element: Complex64) -> f64 {
    (2.0 * (ef - ea) / (bath.r_eff * E_CHARGE * E_CHARGE) * element.norm_sqr()).max(0.0)
}

/// Rates entering the kinetic equations, 1/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RateSet {
    /// `W^{f1 f2}_{f1 f2}`: population transfer f2 -> f1.
    pub w_f1f2: f64,
    /// `W^{f2 f1}_{f2 f1}`: population transfer f1 -> f2.
    pub w_f2f1: f64,
    /// `W^{00}_{f1 f2}` and `W^{00}_{f2 f1}`: coherence transfer.
    pub w00_f1f2: f64,
    pub w00_f2f1: f64,
    pub w_lf1: f64,
    pub w_lf2: f64,
    pub w_rf1: f64,
    pub w_rf2: f64,
    pub gamma1: f64,
    pub gamma2: f64,
}

impl RateSet {
    pub fn build(input: &KineticInput, bath: &Bath) -> Result<Self> {
        let el = &input.elements;
        let lim = input.resonance_limit;
        let d21 = input.ef2 - input.ef1;
        let pop = 2.0 * Complex64::new(el.exp_f1f2.norm_sqr(), 0.0);
        let w_f1f2 = generic_rate(d21, d21, bath, pop, lim)?;
        let w_f2f1 = generic_rate(-d21, -d21, bath, pop, lim)?;
        let coh = el.exp_00 * el.exp_f1f2.conj() + el.exp_00.conj() * el.exp_f1f2;
        let w00_f1f2 = generic_rate(0.0, d21, bath, coh, lim)?;
        let w00_f2f1 = balance_factor(input.ef1, input.ef2, bath.temperature) * w00_f1f2;
        let w_lf1 = decay_rate(input.ef1, input.el, bath, el.exp_lf1);
        let w_lf2 = decay_rate(input.ef2, input.el, bath, el.exp_lf2);
        let w_rf1 = decay_rate(input.ef1, input.er, bath, el.exp_rf1);
        let w_rf2 = decay_rate(input.ef2, input.er, bath, el.exp_rf2);
        Ok(Self {
            w_f1f2,
            w_f2f1,
            w00_f1f2,
            w00_f2f1,
            w_lf1,
            w_lf2,
            w_rf1,
            w_rf2,
            gamma1: 0.5 * (w_f2f1 + w_lf1 + w_rf1),
            gamma2: 0.5 * (w_f1f2 + w_lf2 + w_rf2),
        })
    }

    /// Product of the two coherence-transfer rates.
    pub fn coherence_product(&self) -> f64 {
        self.w00_f1f2 * self.w00_f2f1
    }

    /// Every rate multiplied by `c`.
    pub fn scaled(&self, c: f64) -> Self {
        Self {
            w_f1f2: c * self.w_f1f2,
            w_f2f1: c * self.w_f2f1,
            w00_f1f2: c * self.w00_f1f2,
            w00_f2f1: c * self.w00_f2f1,
            w_lf1: c * self.w_lf1,
            w_lf2: c * self.w_lf2,
            w_rf1: c * self.w_rf1,
            w_rf2: c * self.w_rf2,
            gamma1: c * self.gamma1,
            gamma2: c * self.gamma2,
        }
    }
}

/// `W^{00}_{f2 f1} / W^{00}_{f1 f2} = exp(-(E_f2 - E_f1) / 2kT)`.
pub fn balance_factor(ef1: f64, ef2: f64, temperature: f64) -> f64 {
    let x = ef2 - ef1;
    if temperature == 0.0 {
        return if x > 0.0 { 0.0 } else if x == 0.0 { 1.0 } else { f64::INFINITY };
    }
    (-x / (2.0 * K_B * temperature)).exp()
}

/// Amplitudes of `rho^0_{f1}` and `rho^0_{f2}`: `A` oscillates at the
/// detuning from its own level, `B` at the detuning from the other one.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Coherences {
    pub a_f1: Complex64,
    pub a_f2: Complex64,
    pub b_f1: Complex64,
    pub b_f2: Complex64,
}

impl Coherences {
    pub fn new(input: &KineticInput, rates: &RateSet, drive: &Drive) -> Self {
        let (d1, d2) = input.detunings(drive);
        let (g1, g2) = (rates.gamma1, rates.gamma2);
        let p = rates.coherence_product();
        let i = Complex64::i();
        let src = drive.current / (4.0 * E_CHARGE);
        let lorentz = |d: f64, g: f64| Complex64::new(d, -g);
        let a_f1 = -src * input.elements.phi_0f1 / (lorentz(d1, g1) + p / lorentz(d1, g2));
        let a_f2 = -src * input.elements.phi_0f2 / (lorentz(d2, g2) + p / lorentz(d2, g1));
        Self {
            a_f1,
            a_f2,
            b_f1: -i * rates.w00_f1f2 * a_f2 / lorentz(d2, g1),
            b_f2: -i * rates.w00_f2f1 * a_f1 / lorentz(d1, g2),
        }
    }

    /// The amplitudes of `rho^{f}_0`, the Hermitian partners.
    pub fn conjugates(&self) -> Self {
        Self {
            a_f1: self.a_f1.conj(),
            a_f2: self.a_f2.conj(),
            b_f1: self.b_f1.conj(),
            b_f2: self.b_f2.conj(),
        }
    }
}

/// Time-averaged populations of the pair and their beat amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SteadyState {
    pub rho_f1: f64,
    pub rho_f2: f64,
    /// Amplitudes of the `exp(i (E_f2 - E_f1) t / hbar)` components.
    pub f1: Complex64,
    pub d1: Complex64,
    pub coherences: Coherences,
    /// Populations small enough for the weak-drive treatment.
    pub perturbative: bool,
    /// The oscillating populations stay non-negative at all times.
    pub positive_in_time: bool,
}

/// `N_i` of the populations, the Lorentzian factor dressed by the
/// coherence transfer; `ga` belongs to the level in resonance.
fn dressed_lorentzian(d: f64, ga: f64, gb: f64, p: f64) -> f64 {
    let db = d * d + gb * gb;
    (ga - gb * p / db) / (d * d + ga * ga + (p * p + 2.0 * p * (d * d - ga * gb)) / db)
}

impl SteadyState {
    pub fn solve(input: &KineticInput, rates: &RateSet, drive: &Drive) -> Result<Self> {
        let (g1, g2) = (rates.gamma1, rates.gamma2);
        let (w12, w21) = (rates.w_f1f2, rates.w_f2f1);
        let den = g1 * g2 - 0.25 * w12 * w21;
        let scale = g1 * g2;
        if !(scale > 0.0) || !(den > 1e-30 * scale) {
            return Err(Error::DegenerateKinetics(den));
        }
        let (m1, m2) = (input.elements.phi_0f1, input.elements.phi_0f2);
        let (d1, d2) = input.detunings(drive);
        let p = rates.coherence_product();
        let n1 = dressed_lorentzian(d1, g1, g2, p);
        let n2 = dressed_lorentzian(d2, g2, g1, p);
        let src = drive.current * drive.current / (16.0 * E_CHARGE * E_CHARGE);
        let rho_f1 = src / den * (g2 * m1 * m1 * n1 + 0.5 * w12 * m2 * m2 * n2);
        let rho_f2 = src / den * (g1 * m2 * m2 * n2 + 0.5 * w21 * m1 * m1 * n1);

        let i = Complex64::i();
        let om = input.omega21();
        let gs = g1 + g2;
        let pref = i * src * m1 * m2 / Complex64::new(om * om - 4.0 * g1 * g2 + w12 * w21, -2.0 * gs * om);
        let q1 = Complex64::new(d1 * d1 - g1 * g2 + p, -gs * d1);
        let q2 = Complex64::new(d2 * d2 - g1 * g2 + p, gs * d2);
        let f1 = pref * (Complex64::new(om, -2.0 * g2) * rates.w00_f1f2 / q2 - i * w12 * rates.w00_f2f1 / q1);
        let d1c = pref * (Complex64::new(om, -2.0 * g1) * rates.w00_f2f1 / q1 - i * w21 * rates.w00_f1f2 / q2);
        Ok(Self {
            rho_f1,
            rho_f2,
            f1,
            d1: d1c,
            coherences: Coherences::new(input, rates, drive),
            perturbative: rho_f1.max(rho_f2) <= PERTURBATIVE_LIMIT,
            positive_in_time: rho_f1 >= 2.0 * f1.norm() && rho_f2 >= 2.0 * d1c.norm(),
        })
    }

    /// The state for a drive `c` times stronger in amplitude.
    pub fn rescaled(&self, c: f64) -> Self {
        let c2 = c * c;
        let co = &self.coherences;
        let rho_f1 = c2 * self.rho_f1;
        let rho_f2 = c2 * self.rho_f2;
        let f1 = c2 * self.f1;
        let d1 = c2 * self.d1;
        Self {
            rho_f1,
            rho_f2,
            f1,
            d1,
            coherences: Coherences {
                a_f1: c * co.a_f1,
                a_f2: c * co.a_f2,
                b_f1: c * co.b_f1,
                b_f2: c * co.b_f2,
            },
            perturbative: rho_f1.max(rho_f2) <= PERTURBATIVE_LIMIT,
            positive_in_time: rho_f1 >= 2.0 * f1.norm() && rho_f2 >= 2.0 * d1.norm(),
        }
    }
}

/// Escape rate into the right well, 1/s.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EscapeResult {
    pub w: f64,
    pub w_rf1_term: f64,
    pub w_rf2_term: f64,
    /// Amplitude of the part beating at `(E_f2 - E_f1) / hbar`.
    pub oscillation_amplitude: f64,
}

pub fn escape_rate(state: &SteadyState, rates: &RateSet) -> EscapeResult {
    let w_rf1_term = rates.w_rf1 * state.rho_f1;
    let w_rf2_term = rates.w_rf2 * state.rho_f2;
    EscapeResult {
        w: w_rf1_term + w_rf2_term,
        w_rf1_term,
        w_rf2_term,
        oscillation_amplitude: 2.0 * (rates.w_rf1 * state.f1 + rates.w_rf2 * state.d1).norm(),
    }
}

/// Drive amplitude that brings the larger population to `target`, from a
/// state computed at a known amplitude.
pub fn calibrate_current(state: &SteadyState, current: f64, target: f64) -> f64 {
    let peak = state.rho_f1.max(state.rho_f2);
    if peak > 0.0 {
        current * (target / peak).sqrt()
    } else {
        current
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn bath() -> Bath {
        Bath {
            r_eff: 8e6,
            temperature: 0.05,
        }
    }

    fn ghz(f: f64) -> f64 {
        crate::constants::H * f * 1e9
    }

    fn input() -> KineticInput {
        KineticInput {
            e0: 0.0,
            el: 0.0,
            er: -ghz(60.0),
            ef1: ghz(25.6),
            ef2: ghz(24.8),
            elements: ElementSet {
                phi_0f1: 0.05,
                phi_0f2: 0.03,
                exp_f1f2: Complex64::new(0.2, 0.15),
                exp_lf1: Complex64::new(0.04, 0.01),
                exp_lf2: Complex64::new(0.05, 0.02),
                exp_rf1: Complex64::new(0.03, -0.01),
                exp_rf2: Complex64::new(0.02, 0.01),
                exp_00: Complex64::new(0.6, 0.3),
            },
            resonance_limit: ghz(20.0),
        }
    }

    fn drive(nu_ghz: f64) -> Drive {
        Drive {
            nu: nu_ghz * 1e9,
            current: 1e-10,
        }
    }

    /// The rate written out as `pi / (2 R e^2) (1 + tanh) N bracket`.
    fn textbook_rate(x: f64, t: f64, r: f64, bracket: f64) -> f64 {
        let y = x / (2.0 * K_B * t);
        PI / (2.0 * r * E_CHARGE * E_CHARGE) * (1.0 + y.tanh()) * (x / PI) / y.tanh() * bracket
    }

    #[test]
    fn generic_rate_matches_tanh_coth_form() {
        let b = bath();
        for x in [ghz(0.3), -ghz(0.8), ghz(5.0), -ghz(2.0)] {
            let got = generic_rate(x, x, &b, Complex64::new(0.7, 0.0), 1.0).unwrap();
            assert_relative_eq!(got, textbook_rate(x, b.temperature, b.r_eff, 0.7), max_relative = 1e-12);
        }
    }

    #[test]
    fn generic_rate_is_continuous_through_zero() {
        let b = bath();
        let at0 = generic_rate(0.0, 0.0, &b, Complex64::new(1.0, 0.0), 1.0).unwrap();
        let near = generic_rate(1e-40, 1e-40, &b, Complex64::new(1.0, 0.0), 1.0).unwrap();
        assert_relative_eq!(at0, K_B * b.temperature / (b.r_eff * E_CHARGE * E_CHARGE), max_relative = 1e-12);
        assert_relative_eq!(at0, near, max_relative = 1e-9);
    }

    #[test]
    fn zero_temperature_limit_gives_the_decay_formula() {
        let cold = Bath {
            r_eff: 8e6,
            temperature: 1e-4,
        };
        let (ef, ea) = (ghz(25.0), -ghz(60.0));
        let el = Complex64::new(0.03, 0.02);
        let generic = generic_rate(ef - ea, ef - ea, &cold, Complex64::new(2.0 * el.norm_sqr(), 0.0), 1.0).unwrap();
        assert_relative_eq!(generic, decay_rate(ef, ea, &cold, el), max_relative = 1e-12);
        assert_eq!(decay_rate(ef, ef, &cold, el), 0.0);
    }

    #[test]
    fn resonance_gate_rejects_mismatched_spacings() {
        let r = generic_rate(0.0, ghz(30.0), &bath(), Complex64::new(1.0, 0.0), ghz(20.0));
        assert!(matches!(r, Err(Error::ResonanceMismatch { .. })));
    }

    #[test]
    fn detailed_balance_matches_the_generic_formula() {
        let inp = input();
        let b = bath();
        let r = RateSet::build(&inp, &b).unwrap();
        let el = &inp.elements;
        let coh = el.exp_00 * el.exp_f1f2.conj() + el.exp_00.conj() * el.exp_f1f2;
        let reverse = generic_rate(0.0, inp.ef1 - inp.ef2, &b, coh, 1.0).unwrap();
        assert_relative_eq!(r.w00_f2f1, reverse, max_relative = 1e-12);
        let hot = Bath {
            r_eff: 8e6,
            temperature: 1e6,
        };
        assert!((balance_factor(inp.ef1, inp.ef2, hot.temperature) - 1.0).abs() < 1e-6);
    }

    #[test]
    fn population_transfer_obeys_boltzmann_ratio() {
        let inp = input();
        let b = bath();
        let r = RateSet::build(&inp, &b).unwrap();
        let ratio = r.w_f1f2 / r.w_f2f1;
        let expected = (-(inp.ef1 - inp.ef2) / (K_B * b.temperature)).exp();
        assert_relative_eq!(ratio, expected, max_relative = 1e-12);
        assert_relative_eq!(r.gamma1, 0.5 * (r.w_f2f1 + r.w_lf1 + r.w_rf1));
        assert!(r.gamma1 * r.gamma2 >= 0.25 * r.w_f1f2 * r.w_f2f1);
    }

    #[test]
    fn rates_scale_inversely_with_resistance() {
        let inp = input();
        let r1 = RateSet::build(&inp, &bath()).unwrap();
        let r2 = RateSet::build(
            &inp,
            &Bath {
                r_eff: 16e6,
                temperature: 0.05,
            },
        )
        .unwrap();
        let half = r1.scaled(0.5);
        for (a, b) in [
            (r2.w_f1f2, half.w_f1f2),
            (r2.w_f2f1, half.w_f2f1),
            (r2.w00_f1f2, half.w00_f1f2),
            (r2.w00_f2f1, half.w00_f2f1),
            (r2.w_rf1, half.w_rf1),
            (r2.gamma1, half.gamma1),
            (r2.gamma2, half.gamma2),
        ] {
            assert_relative_eq!(a, b, max_relative = 1e-14);
        }
    }

    #[test]
    fn oscillation_amplitudes_solve_the_linear_system() {
        let inp = input();
        let r = RateSet::build(&inp, &bath()).unwrap();
        let dr = drive(25.3);
        let s = SteadyState::solve(&inp, &r, &dr).unwrap();
        let i = Complex64::i();
        let (d1, d2) = inp.detunings(&dr);
        let (g1, g2) = (r.gamma1, r.gamma2);
        let p = r.coherence_product();
        let om = inp.omega21();
        let c = i * dr.current.powi(2) / (16.0 * E_CHARGE * E_CHARGE) * inp.elements.phi_0f1 * inp.elements.phi_0f2;
        let rhs1 = c * r.w00_f1f2 / (d2 * d2 - g1 * g2 + p + i * (g1 + g2) * d2);
        let rhs2 = c * r.w00_f2f1 / (d1 * d1 - g1 * g2 + p - i * (g1 + g2) * d1);
        // Gaussian elimination on [[om - 2i g1, i W12], [i W21, om - 2i g2]]
        let a = [[om - 2.0 * i * g1, i * r.w_f1f2], [i * r.w_f2f1, om - 2.0 * i * g2]];
        let l = a[1][0] / a[0][0];
        let d = (rhs2 - l * rhs1) / (a[1][1] - l * a[0][1]);
        let f = (rhs1 - a[0][1] * d) / a[0][0];
        assert!((f - s.f1).norm() < 1e-10 * f.norm());
        assert!((d - s.d1).norm() < 1e-10 * d.norm());
    }

    #[test]
    fn populations_balance_the_absorbed_power() {
        // time-averaged rate equations with the drive term built from A_f
        let inp = input();
        let r = RateSet::build(&inp, &bath()).unwrap();
        for nu in [24.7, 24.8, 25.2, 25.6, 25.61] {
            let dr = drive(nu);
            let s = SteadyState::solve(&inp, &r, &dr).unwrap();
            let co = &s.coherences;
            let k = -dr.current / (2.0 * E_CHARGE);
            let s1 = k * inp.elements.phi_0f1 * co.a_f1.im;
            let s2 = k * inp.elements.phi_0f2 * co.a_f2.im;
            let det = 4.0 * r.gamma1 * r.gamma2 - r.w_f1f2 * r.w_f2f1;
            let rho1 = (2.0 * r.gamma2 * s1 + r.w_f1f2 * s2) / det;
            let rho2 = (2.0 * r.gamma1 * s2 + r.w_f2f1 * s1) / det;
            assert_relative_eq!(s.rho_f1, rho1, max_relative = 1e-10);
            assert_relative_eq!(s.rho_f2, rho2, max_relative = 1e-10);
        }
    }

    #[test]
    fn isolated_resonance_is_lorentzian() {
        let inp = input();
        let mut r = RateSet::build(&inp, &bath()).unwrap();
        r.w00_f1f2 = 0.0;
        r.w00_f2f1 = 0.0;
        r.w_f1f2 = 0.0;
        r.w_f2f1 = 0.0;
        r.gamma1 = 0.5 * (r.w_lf1 + r.w_rf1);
        r.gamma2 = 0.5 * (r.w_lf2 + r.w_rf2);
        let dr = Drive {
            nu: (inp.ef1 - inp.e0) / (2.0 * PI * HBAR),
            current: 1e-10,
        };
        let s = SteadyState::solve(&inp, &r, &dr).unwrap();
        let expect = dr.current.powi(2) / (16.0 * E_CHARGE * E_CHARGE) * inp.elements.phi_0f1.powi(2) / r.gamma1.powi(2);
        assert_relative_eq!(s.rho_f1, expect, max_relative = 1e-12);
        assert_eq!(s.f1, Complex64::new(0.0, 0.0));
        assert_eq!(s.d1, Complex64::new(0.0, 0.0));
        assert_eq!(s.coherences.b_f1, Complex64::new(0.0, 0.0));
        let lorentz = -dr.current / (4.0 * E_CHARGE) * inp.elements.phi_0f1 / Complex64::new(0.0, -r.gamma1);
        assert!((s.coherences.a_f1 - lorentz).norm() < 1e-12 * lorentz.norm());
    }

    #[test]
    fn drive_scaling_is_quadratic() {
        let inp = input();
        let r = RateSet::build(&inp, &bath()).unwrap();
        let a = SteadyState::solve(&inp, &r, &drive(25.0)).unwrap();
        let mut d2 = drive(25.0);
        d2.current *= 2.0;
        let b = SteadyState::solve(&inp, &r, &d2).unwrap();
        assert_relative_eq!(b.rho_f1, 4.0 * a.rho_f1, max_relative = 1e-14);
        assert_relative_eq!(b.rho_f2, 4.0 * a.rho_f2, max_relative = 1e-14);
        assert_relative_eq!(b.f1.norm(), 4.0 * a.f1.norm(), max_relative = 1e-14);
        let wa = escape_rate(&a, &r).w;
        assert_relative_eq!(escape_rate(&b, &r).w, 4.0 * wa, max_relative = 1e-14);
        let c = a.rescaled(2.0);
        assert_relative_eq!(c.rho_f2, b.rho_f2, max_relative = 1e-14);
        let cal = calibrate_current(&a, 1e-10, 1e-3);
        assert_relative_eq!(a.rescaled(cal / 1e-10).rho_f1.max(a.rescaled(cal / 1e-10).rho_f2), 1e-3, max_relative = 1e-12);
    }

    #[test]
    fn no_drive_no_escape() {
        let inp = input();
        let r = RateSet::build(&inp, &bath()).unwrap();
        let mut d = drive(25.0);
        d.current = 0.0;
        let s = SteadyState::solve(&inp, &r, &d).unwrap();
        assert_eq!(s.rho_f1, 0.0);
        assert_eq!(escape_rate(&s, &r).w, 0.0);
        assert_eq!(escape_rate(&s, &r).oscillation_amplitude, 0.0);
    }

    #[test]
    fn conjugate_partners_are_stored_consistently() {
        let inp = input();
        let r = RateSet::build(&inp, &bath()).unwrap();
        let s = SteadyState::solve(&inp, &r, &drive(25.0)).unwrap();
        let c = s.coherences.conjugates();
        assert_eq!(c.a_f1, s.coherences.a_f1.conj());
        assert_eq!(c.conjugates(), s.coherences);
    }

    #[test]
    fn degenerate_widths_are_an_error() {
        let inp = input();
        let mut r = RateSet::build(&inp, &bath()).unwrap();
        r.gamma1 = 0.0;
        assert!(matches!(
            SteadyState::solve(&inp, &r, &drive(25.0)),
            Err(Error::DegenerateKinetics(_))
        ));
    }
}
