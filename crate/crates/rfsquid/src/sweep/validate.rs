//! Comparisons of the quasiclassical machinery against the grid oracle.

use super::config::SweepConfig;
use super::pipeline::Device;
use super::run::build_device;
use crate::device::{Geometry, Potential, Scales};
use crate::error::Result;
use crate::matrix_elements::{coordinate, exp_half, harmonic_dipole, single_well_dipole, DEFAULT_CELLS};
use crate::oracle::{diagonalize, diagonalize_window, exact_splitting_scan, GridSpectrum, Splitting};
use crate::wkb::NearTop;
use num_complex::Complex64;
use std::fmt::Write as _;

/// Width of the near-top window in left-well plasma quanta.
pub const WINDOW_QUANTA: f64 = 3.0;
/// Harmonic levels checked against `hbar omega (n + 1/2)`.
const HARMONIC_LEVELS: usize = 10;
const HARMONIC_TOL: f64 = 1e-6;
const DIPOLE_TOL: f64 = 0.05;
/// Flux offsets from the crossing at which levels are compared.
const LEVEL_OFFSETS: [f64; 3] = [-0.01, 0.0, 0.01];
const ELEMENT_POINTS: usize = 10;
/// Half-width of the element grid in units of the anticrossing width
/// `gap / |s1 - s2|`.
pub const ELEMENT_WIDTHS: f64 = 3.0;
/// Energy window, in `U0`, for identifying localised oracle states.
const MATCH_WINDOW: f64 = 5e-3;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub measured: f64,
    pub tolerance: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, measured: f64, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            measured,
            tolerance,
            passed: measured <= tolerance,
            detail,
        }
    }

    fn failed(name: &str, tolerance: f64, detail: String) -> Self {
        Self {
            name: name.to_string(),
            measured: f64::NAN,
            tolerance,
            passed: false,
            detail,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ValidationReport {
    pub checks: Vec<Check>,
}

impl ValidationReport {
    pub fn all_passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(|c| c.passed)
    }

    /// Fixed-width table: check, measured, tolerance, verdict, detail.
    pub fn table(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{:<28} {:>12} {:>12}  {:<4}  detail", "check", "measured", "tolerance", "");
        for c in &self.checks {
            let _ = writeln!(
                s,
                "{:<28} {:>12.4e} {:>12.4e}  {:<4}  {}",
                c.name,
                c.measured,
                c.tolerance,
                if c.passed { "PASS" } else { "FAIL" },
                c.detail
            );
        }
        s
    }
}

/// Pairing of quasiclassical roots with oracle eigenvalues in the near-top
/// window at one flux.
#[derive(Debug, Clone)]
pub struct LevelComparison {
    pub phi_x: f64,
    pub hbar_omega_p: f64,
    pub window: (f64, f64),
    pub quasiclassical: Vec<f64>,
    pub oracle: Vec<f64>,
    /// `(root, eigenvalue index)` for each root, nearest first.
    pub pairs: Vec<(usize, usize)>,
    /// Largest `|root - eigenvalue| / hbar Omega_p` over the pairs.
    pub max_deviation: f64,
    /// Eigenvalues inside the window that no root claims, or roots sharing
    /// an eigenvalue.
    pub unmatched: usize,
}

impl LevelComparison {
    pub fn bijective(&self) -> bool {
        self.unmatched == 0
    }
}

/// Compares the near-top roots in `(U_top - 3 hbar Omega_p, U_top)`, cut at
/// the floor of the shallower well, with the oracle. `chi_scale` multiplies
/// the Gamma phase in the quantisation condition; 1 is the physical value.
pub fn compare_levels(
    beta_l: f64,
    eta: f64,
    phi_x: f64,
    chi_scale: f64,
    tol_quanta: f64,
    n: usize,
) -> Result<LevelComparison> {
    let geom = Geometry::new(beta_l, phi_x)?;
    let mut nt = NearTop::new(geom, eta);
    nt.chi_scale = chi_scale;
    let quantum = geom.plasma_quanta(eta).0;
    let lo = (geom.u_top - WINDOW_QUANTA * quantum).max(geom.floor());
    let roots = nt.levels_in(lo, geom.u_top, 2000)?;
    let pad = tol_quanta * quantum;
    let spec = diagonalize_window(&Potential::new(beta_l, phi_x), eta, lo - 2.0 * pad, geom.u_top + 2.0 * pad, n)?;
    let oracle = spec.energies.clone();

    let mut pairs = Vec::with_capacity(roots.len());
    let mut claimed = vec![0usize; oracle.len()];
    let mut max_deviation: f64 = 0.0;
    let mut unmatched = 0;
    for (r, &e) in roots.iter().enumerate() {
        if oracle.is_empty() {
            unmatched += 1;
            continue;
        }
        let j = spec.nearest(e);
        claimed[j] += 1;
        pairs.push((r, j));
        max_deviation = max_deviation.max((e - oracle[j]).abs() / quantum);
    }
    for (j, &e) in oracle.iter().enumerate() {
        let inside = e > lo + pad && e < nt.ceiling() - pad;
        if claimed[j] > 1 || (inside && claimed[j] == 0) {
            unmatched += 1;
        }
    }
    Ok(LevelComparison {
        phi_x,
        hbar_omega_p: quantum,
        window: (lo, geom.u_top),
        quasiclassical: roots,
        oracle,
        pairs,
        max_deviation,
        unmatched,
    })
}

/// Quasiclassical and oracle minimum splitting of the device's pair.
pub fn compare_gap(device: &Device, n: usize) -> Result<(f64, Splitting)> {
    let c = &device.crossing;
    let half = (5.0 * anticrossing_width(device)).max(1e-4);
    let sp = exact_splitting_scan(c.beta_l, c.eta, (c.phi_x0 - half, c.phi_x0 + half), c.e0, n)?;
    Ok((c.gap, sp))
}

/// Flux range `gap / |s1 - s2|` over which the pair is hybridised.
pub fn anticrossing_width(device: &Device) -> f64 {
    let c = &device.crossing;
    let (s1, s2) = c.diabatic_slopes();
    c.gap / (s1 - s2).abs()
}

/// Names of the compared matrix elements, in the order returned by
/// [`compare_elements`].
pub const ELEMENT_NAMES: [&str; 8] = [
    "phi_0f1", "phi_0f2", "exp_f1f2", "exp_lf1", "exp_lf2", "exp_rf1", "exp_rf2", "exp_00",
];

/// Largest relative deviation of each element modulus from the oracle over
/// `points` flux values spanning `phi_x0 +- span`.
pub fn compare_elements(device: &Device, points: usize, span: f64, n: usize) -> Result<[f64; 8]> {
    let c = device.crossing;
    let eta = device.scales.eta;
    let mut worst = [0.0f64; 8];
    let points = points.max(2);
    for k in 0..points {
        let x = c.phi_x0 - span + 2.0 * span * k as f64 / (points - 1) as f64;
        let ps = device.spectrum_at(x)?;
        let nt = device.near_top(x)?;
        let split = nt.geom.phi_top;
        let s = diagonalize_window(
            &Potential::new(c.beta_l, x),
            eta,
            nt.geom.u_min_left - 0.01,
            nt.geom.u_top + 0.05,
            n,
        )?;
        let lv = ps.levels;
        let i0 = most_localised(&s, lv.e0, split, true);
        let ir = most_localised(&s, lv.er, split, false);
        let i1 = s.nearest(lv.f1.energy);
        let i2 = s.nearest(lv.f2.energy);
        let mut states = s.states.clone();
        let (vl, vr) = s.localized(i0, ir, split);
        states[i0] = vl;
        states[ir] = vr;
        let m = |i: usize, j: usize, z: fn(f64) -> Complex64| s.element(&states[i], &states[j], z).norm();
        let el = ps.elements;
        let pairs = [
            (el.phi_0f1.abs(), m(i0, i1, coordinate)),
            (el.phi_0f2.abs(), m(i0, i2, coordinate)),
            (el.exp_f1f2.norm(), m(i1, i2, exp_half)),
            (el.exp_lf1.norm(), m(i0, i1, exp_half)),
            (el.exp_lf2.norm(), m(i0, i2, exp_half)),
            (el.exp_rf1.norm(), m(ir, i1, exp_half)),
            (el.exp_rf2.norm(), m(ir, i2, exp_half)),
            (el.exp_00.norm(), m(i0, i0, exp_half)),
        ];
        for (w, (q, o)) in worst.iter_mut().zip(pairs) {
            *w = w.max((q / o - 1.0).abs());
        }
    }
    Ok(worst)
}

/// Oracle state near `e` with the most weight on the requested side.
fn most_localised(s: &GridSpectrum, e: f64, split: f64, left: bool) -> usize {
    let side = |i: usize| {
        let w = s.weight_below(i, split);
        if left {
            w
        } else {
            1.0 - w
        }
    };
    (0..s.len())
        .filter(|&i| (s.energies[i] - e).abs() < MATCH_WINDOW)
        .max_by(|&a, &b| side(a).total_cmp(&side(b)))
        .unwrap_or_else(|| s.nearest(e))
}

/// Harmonic limit: largest relative error of the oracle levels against
/// `hbar omega (n + 1/2)`, of the oracle `<0|phi|1>` (extrapolated from
/// two grids), and of the
/// quasiclassical `<0|phi|1>`.
pub fn compare_harmonic(eta: f64, n: usize) -> Result<(f64, f64, f64)> {
    let phi_x = 0.3;
    let pot = Potential::new(0.0, phi_x);
    let s = diagonalize(&pot, eta, HARMONIC_LEVELS, n)?;
    let fine = diagonalize(&pot, eta, 2, 2 * n + 1)?;
    let w = 2f64.sqrt() / eta;
    let levels = s
        .energies
        .iter()
        .enumerate()
        .map(|(k, e)| (e / (w * (k as f64 + 0.5)) - 1.0).abs())
        .fold(0.0, f64::max);
    let exact = harmonic_dipole(eta);
    let x = |p: f64| Complex64::new(p - phi_x, 0.0);
    let d = |g: &GridSpectrum| g.element(&g.states[0], &g.states[1], x).norm();
    let oracle = ((4.0 * d(&fine) - d(&s)) / 3.0 / exact - 1.0).abs();
    let quasi = (single_well_dipole(pot, eta, DEFAULT_CELLS)?.abs() / exact - 1.0).abs();
    Ok((levels, oracle, quasi))
}

pub fn validate_command(cfg: &SweepConfig) -> Result<ValidationReport> {
    validate_with(cfg, 1.0)
}

/// The oracle suite with the Gamma phase scaled by `chi_scale` in the level
/// comparison. Checks that cannot be computed are reported as failures.
pub fn validate_with(cfg: &SweepConfig, chi_scale: f64) -> Result<ValidationReport> {
    let v = &cfg.validate;
    let eta = Scales::new(&cfg.device)?.eta;
    let n = v.grid_points;
    let mut checks = Vec::new();

    if v.harmonic {
        match compare_harmonic(eta, n) {
            Ok((levels, oracle, quasi)) => {
                checks.push(Check::new(
                    "harmonic levels (oracle)",
                    levels,
                    HARMONIC_TOL,
                    format!("{HARMONIC_LEVELS} levels, beta_L = 0"),
                ));
                checks.push(Check::new("harmonic <0|phi|1> (oracle)", oracle, HARMONIC_TOL, String::new()));
                checks.push(Check::new("harmonic <0|phi|1> (WKB)", quasi, DIPOLE_TOL, String::new()));
            }
            Err(e) => checks.push(Check::failed("harmonic", HARMONIC_TOL, e.to_string())),
        }
    }

    if cfg.device.beta_l <= 1.0 {
        return Ok(ValidationReport { checks });
    }
    let device = match build_device(cfg) {
        Ok(d) => d,
        Err(e) => {
            checks.push(Check::failed("crossing", 0.0, e.to_string()));
            return Ok(ValidationReport { checks });
        }
    };
    let phi_x0 = device.crossing.phi_x0;

    if v.levels {
        for dx in LEVEL_OFFSETS {
            let x = phi_x0 + dx;
            let name = format!("levels at phi_x {x:.5}");
            match compare_levels(cfg.device.beta_l, eta, x, chi_scale, v.level_tol, n) {
                Ok(lc) => {
                    let mut c = Check::new(
                        &name,
                        lc.max_deviation,
                        v.level_tol,
                        format!(
                            "{} roots, {} eigenvalues, deviation in hbar Omega_p",
                            lc.quasiclassical.len(),
                            lc.oracle.len()
                        ),
                    );
                    if !lc.bijective() {
                        c.passed = false;
                        c.detail = format!("{}; {} unmatched", c.detail, lc.unmatched);
                    }
                    checks.push(c);
                }
                Err(e) => checks.push(Check::failed(&name, v.level_tol, e.to_string())),
            }
        }
    }

    if v.gap {
        match compare_gap(&device, n) {
            Ok((wkb, sp)) => checks.push(Check::new(
                "anticrossing gap",
                (sp.gap / wkb - 1.0).abs(),
                v.gap_tol,
                format!(
                    "WKB {wkb:.5e}, oracle {:.5e} at phi_x {:.7} (WKB {phi_x0:.7})",
                    sp.gap, sp.phi_x
                ),
            )),
            Err(e) => checks.push(Check::failed("anticrossing gap", v.gap_tol, e.to_string())),
        }
    }

    if v.elements {
        let span = ELEMENT_WIDTHS * anticrossing_width(&device);
        match compare_elements(&device, ELEMENT_POINTS, span, n) {
            Ok(worst) => {
                for (name, w) in ELEMENT_NAMES.iter().zip(worst) {
                    checks.push(Check::new(
                        &format!("element {name}"),
                        w,
                        v.element_tol,
                        format!("{ELEMENT_POINTS} points within {span:.2e} of the crossing"),
                    ));
                }
            }
            Err(e) => checks.push(Check::failed("elements", v.element_tol, e.to_string())),
        }
    }
    Ok(ValidationReport { checks })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg() -> SweepConfig {
        SweepConfig::reference(&[])
    }

    #[test]
    fn harmonic_device_runs_only_harmonic_checks() {
        let mut c = cfg();
        c.device.beta_l = 0.0;
        let r = validate_command(&c).unwrap();
        assert_eq!(r.checks.len(), 3);
        assert!(r.all_passed(), "{}", r.table());
    }

    #[test]
    fn near_top_levels_agree_and_pair_bijectively() {
        let d = build_device(&cfg()).unwrap();
        let lc = compare_levels(1.75, d.scales.eta, d.crossing.phi_x0, 1.0, 0.05, 4096).unwrap();
        assert!(lc.quasiclassical.len() >= 4);
        assert!(lc.bijective());
        assert!(lc.max_deviation < 0.05, "{}", lc.max_deviation);
    }

    #[test]
    fn flipped_gamma_phase_is_detected() {
        let mut c = cfg();
        c.validate.gap = false;
        c.validate.elements = false;
        c.validate.harmonic = false;
        let r = validate_with(&c, -1.0).unwrap();
        assert!(!r.all_passed(), "{}", r.table());
    }

    #[test]
    fn table_has_a_line_per_check() {
        let r = ValidationReport {
            checks: vec![Check::new("a", 0.1, 0.2, String::new()), Check::new("b", 0.3, 0.2, "x".into())],
        };
        let t = r.table();
        assert_eq!(t.lines().count(), 3);
        assert!(t.contains("PASS") && t.contains("FAIL"));
        assert!(!r.all_passed());
    }
}
