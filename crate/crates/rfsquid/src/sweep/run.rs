//! Flux sweeps: spectra once per flux point, then kinetics per drive.

use super::config::{Current, SweepConfig};
use super::peaks::{refine_peaks, PeakReport, Sample};
use super::pipeline::{Device, PointKinetics, PointSpectrum};
use crate::constants::H;
use crate::error::{Error, Result};
use crate::kinetics::{calibrate_current, Bath, Drive};
use rayon::prelude::*;

/// Amplitude used before auto calibration.
pub const REFERENCE_CURRENT: f64 = 1e-9;

/// How the per-point map is scheduled. Both give identical output.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Serial,
    Parallel,
}

/// One flux point of a sweep. Energies in J, frequencies in GHz relative
/// to `e_0`, rates in 1/s.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub phi_x: f64,
    /// Drive frequency, Hz; NaN for level-only rows.
    pub nu: f64,
    pub e_f1: f64,
    pub e_f2: f64,
    pub e_0: f64,
    pub e_l: f64,
    pub e_r: f64,
    pub f1_ghz: f64,
    pub f2_ghz: f64,
    pub l_ghz: f64,
    pub r_ghz: f64,
    pub gamma1: f64,
    pub gamma2: f64,
    pub rho_f1: f64,
    pub rho_f2: f64,
    pub w: f64,
    pub w_osc: f64,
    /// `;`-separated warnings, or `error: ...` for a failed point.
    pub flags: String,
}

pub const COLUMNS: [&str; 18] = [
    "phi_x", "nu", "e_f1", "e_f2", "e_0", "e_l", "e_r", "f1_ghz", "f2_ghz", "l_ghz", "r_ghz", "gamma1",
    "gamma2", "rho_f1", "rho_f2", "w", "w_osc", "flags",
];

pub const UNITS: [&str; 18] = [
    "1", "Hz", "J", "J", "J", "J", "J", "GHz", "GHz", "GHz", "GHz", "1/s", "1/s", "1", "1", "1/s", "1/s", "",
];

impl SweepRow {
    fn failed(phi_x: f64, nu: f64, msg: &str) -> Self {
        let n = f64::NAN;
        Self {
            phi_x,
            nu,
            e_f1: n,
            e_f2: n,
            e_0: n,
            e_l: n,
            e_r: n,
            f1_ghz: n,
            f2_ghz: n,
            l_ghz: n,
            r_ghz: n,
            gamma1: n,
            gamma2: n,
            rho_f1: n,
            rho_f2: n,
            w: n,
            w_osc: n,
            flags: format!("error: {msg}"),
        }
    }

    fn levels(device: &Device, ps: &PointSpectrum, nu: f64) -> Self {
        let j = |e: f64| device.scales.joule(e);
        let lv = &ps.levels;
        let ghz = |e: f64| j(e - lv.e0) / H / 1e9;
        let mut row = Self::failed(ps.phi_x, nu, "");
        row.flags.clear();
        row.e_f1 = j(lv.f1.energy);
        row.e_f2 = j(lv.f2.energy);
        row.e_0 = j(lv.e0);
        row.e_l = j(lv.el);
        row.e_r = j(lv.er);
        row.f1_ghz = ghz(lv.f1.energy);
        row.f2_ghz = ghz(lv.f2.energy);
        row.l_ghz = ghz(lv.el);
        row.r_ghz = ghz(lv.er);
        row
    }

    fn with_kinetics(mut self, k: &PointKinetics) -> Self {
        self.gamma1 = k.rates.gamma1;
        self.gamma2 = k.rates.gamma2;
        self.rho_f1 = k.state.rho_f1;
        self.rho_f2 = k.state.rho_f2;
        self.w = k.escape.w;
        self.w_osc = k.escape.oscillation_amplitude;
        let mut flags = Vec::new();
        if !k.state.perturbative {
            flags.push("nonperturbative");
        }
        if !k.state.positive_in_time {
            flags.push("negative-in-time");
        }
        self.flags = flags.join(";");
        self
    }

    pub fn is_ok(&self) -> bool {
        !self.flags.starts_with("error")
    }

    /// `E_fi - E_0 - h nu` in J for `i = 1, 2`.
    pub fn detunings(&self) -> (f64, f64) {
        let hv = H * self.nu;
        (self.e_f1 - self.e_0 - hv, self.e_f2 - self.e_0 - hv)
    }
}

/// Drive-independent data on a flux grid.
#[derive(Debug, Clone)]
pub struct Spectra {
    pub phi_x: Vec<f64>,
    pub points: Vec<std::result::Result<PointSpectrum, String>>,
}

fn map<T: Send, F: Fn(usize) -> T + Sync + Send>(n: usize, exec: Execution, f: F) -> Vec<T> {
    match exec {
        Execution::Serial => (0..n).map(f).collect(),
        Execution::Parallel => (0..n).into_par_iter().map(f).collect(),
    }
}

impl Spectra {
    pub fn compute(device: &Device, phi_x: &[f64], exec: Execution) -> Self {
        let points = map(phi_x.len(), exec, |i| {
            device.spectrum_at(phi_x[i]).map_err(|e| e.to_string())
        });
        Self {
            phi_x: phi_x.to_vec(),
            points,
        }
    }

    /// Rows without drive data.
    pub fn level_rows(&self, device: &Device) -> Vec<SweepRow> {
        self.points
            .iter()
            .zip(&self.phi_x)
            .map(|(p, &x)| match p {
                Ok(ps) => SweepRow::levels(device, ps, f64::NAN),
                Err(e) => SweepRow::failed(x, f64::NAN, e),
            })
            .collect()
    }

    /// Kinetics at every point for one drive amplitude.
    pub fn kinetics(
        &self,
        device: &Device,
        bath: &Bath,
        drive: &Drive,
        exec: Execution,
    ) -> Vec<std::result::Result<PointKinetics, String>> {
        map(self.points.len(), exec, |i| match &self.points[i] {
            Ok(ps) => device.evaluate(ps, bath, drive).map_err(|e| e.to_string()),
            Err(e) => Err(e.clone()),
        })
    }

    /// Rows for one drive frequency. With [`Current::Auto`] the amplitude
    /// is scaled so the largest population equals `target_rho`. Returns the
    /// rows and the amplitude used.
    pub fn drive_rows(
        &self,
        device: &Device,
        bath: &Bath,
        nu: f64,
        current: Current,
        target_rho: f64,
        exec: Execution,
    ) -> (Vec<SweepRow>, f64) {
        let amp = match current {
            Current::Amplitude(a) => a,
            Current::Auto => REFERENCE_CURRENT,
        };
        let drive = Drive { nu, current: amp };
        let mut ks = self.kinetics(device, bath, &drive, exec);
        let mut used = amp;
        if current == Current::Auto {
            let best = ks
                .iter()
                .filter_map(|k| k.as_ref().ok())
                .max_by(|a, b| {
                    let pa = a.state.rho_f1.max(a.state.rho_f2);
                    let pb = b.state.rho_f1.max(b.state.rho_f2);
                    pa.total_cmp(&pb)
                });
            if let Some(best) = best {
                used = calibrate_current(&best.state, amp, target_rho);
                let c = used / amp;
                for k in ks.iter_mut().flatten() {
                    *k = k.rescaled(c);
                }
            }
        }
        let rows = self
            .points
            .iter()
            .zip(&ks)
            .zip(&self.phi_x)
            .map(|((p, k), &x)| match (p, k) {
                (Ok(ps), Ok(k)) => SweepRow::levels(device, ps, nu).with_kinetics(k),
                (Ok(ps), Err(e)) => {
                    let mut r = SweepRow::levels(device, ps, nu);
                    r.flags = format!("error: {e}");
                    r
                }
                (Err(e), _) => SweepRow::failed(x, nu, e),
            })
            .collect();
        (rows, used)
    }
}

/// Result of [`run_sweep`].
#[derive(Debug, Clone)]
pub struct SweepOutput {
    pub device: Device,
    /// Rows grouped by drive frequency, ascending flux within each group.
    pub rows: Vec<SweepRow>,
    /// Amplitude used for each drive frequency, A.
    pub currents: Vec<(f64, f64)>,
}

impl SweepOutput {
    /// Rows of one drive frequency.
    pub fn rows_for(&self, nu: f64) -> Vec<SweepRow> {
        self.rows.iter().filter(|r| r.nu == nu).cloned().collect()
    }
}

/// Direct evaluation of one flux point for peak refinement.
pub fn sampler<'a>(device: &'a Device, bath: &'a Bath, drive: Drive) -> impl Fn(f64) -> Option<Sample> + 'a {
    move |x| {
        let ps = device.spectrum_at(x).ok()?;
        let k = device.evaluate(&ps, bath, &drive).ok()?;
        Some(Sample::from_row(&SweepRow::levels(device, &ps, drive.nu).with_kinetics(&k)))
    }
}

/// Refined peak report of one drive frequency of a sweep.
pub fn analyse(out: &SweepOutput, nu: f64) -> Result<PeakReport> {
    let current = out
        .currents
        .iter()
        .find(|c| c.0 == nu)
        .map(|c| c.1)
        .ok_or_else(|| Error::ConfigValue {
            key: "drive.nu".into(),
            msg: format!("{nu} Hz is not part of the sweep"),
        })?;
    let bath = out.device.bath();
    let eval = sampler(&out.device, &bath, Drive { nu, current });
    refine_peaks(&out.rows_for(nu), out.device.crossing.phi_x0, eval)
}

pub fn build_device(cfg: &SweepConfig) -> Result<Device> {
    Device::new(cfg.device, cfg.grid.seed_phi_x, cfg.grid.left_level)
}

pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutput> {
    run_sweep_with(cfg, Execution::Parallel)
}

pub fn run_sweep_with(cfg: &SweepConfig, exec: Execution) -> Result<SweepOutput> {
    if cfg.drive.nu.is_empty() {
        return Err(Error::MissingKey("drive.nu".into()));
    }
    let device = build_device(cfg)?;
    let spectra = Spectra::compute(&device, &cfg.grid.points(device.crossing.phi_x0), exec);
    let bath = device.bath();
    let mut rows = Vec::new();
    let mut currents = Vec::new();
    for &nu in &cfg.drive.nu {
        let (r, amp) = spectra.drive_rows(&device, &bath, nu, cfg.drive.current, cfg.drive.target_rho, exec);
        rows.extend(r);
        currents.push((nu, amp));
    }
    Ok(SweepOutput {
        device,
        rows,
        currents,
    })
}

/// Level-only rows on the configured grid.
pub fn run_levels(cfg: &SweepConfig, exec: Execution) -> Result<(Device, Vec<SweepRow>)> {
    let device = build_device(cfg)?;
    let spectra = Spectra::compute(&device, &cfg.grid.points(device.crossing.phi_x0), exec);
    let rows = spectra.level_rows(&device);
    Ok((device, rows))
}
