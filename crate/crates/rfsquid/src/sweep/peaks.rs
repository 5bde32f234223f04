//! Peak detection and classification on W(phi_x).

use super::run::SweepRow;
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::roots::{bisect, brent, golden_min};

/// Fraction of the largest W a maximum must stand out by.
pub const PROMINENCE_FRACTION: f64 = 0.05;
pub const MIN_ROWS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PeakKind {
    Tunneling,
    PumpF1,
    PumpF2,
}

impl PeakKind {
    pub fn name(&self) -> &'static str {
        match self {
            PeakKind::Tunneling => "tunneling",
            PeakKind::PumpF1 => "pump_f1",
            PeakKind::PumpF2 => "pump_f2",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    OnePeak,
    ThreePeak,
    Other,
}

impl Classification {
    pub fn name(&self) -> &'static str {
        match self {
            Classification::OnePeak => "one_peak",
            Classification::ThreePeak => "three_peak",
            Classification::Other => "other",
        }
    }
}

/// W and the resonance data at one flux value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sample {
    pub phi_x: f64,
    pub w: f64,
    /// `E_fi - E_0 - h nu`, J.
    pub det_f1: f64,
    pub det_f2: f64,
    /// Level widths, 1/s.
    pub gamma1: f64,
    pub gamma2: f64,
}

impl Sample {
    pub fn from_row(r: &SweepRow) -> Self {
        let (det_f1, det_f2) = r.detunings();
        Self {
            phi_x: r.phi_x,
            w: r.w,
            det_f1,
            det_f2,
            gamma1: r.gamma1,
            gamma2: r.gamma2,
        }
    }

    fn det(&self, kind: PeakKind) -> f64 {
        match kind {
            PeakKind::PumpF1 => self.det_f1,
            PeakKind::PumpF2 => self.det_f2,
            PeakKind::Tunneling => self.det_f1.abs().min(self.det_f2.abs()),
        }
    }

    fn width(&self, kind: PeakKind) -> f64 {
        match kind {
            PeakKind::PumpF1 => HBAR * self.gamma1,
            PeakKind::PumpF2 => HBAR * self.gamma2,
            PeakKind::Tunneling => HBAR * self.gamma1.max(self.gamma2),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Peak {
    pub phi_x: f64,
    pub w: f64,
    pub prominence: f64,
    /// Full width at half maximum in flux; `None` when a flank leaves the
    /// sampled range before dropping to half height.
    pub fwhm: Option<f64>,
    pub kind: PeakKind,
    /// Residual of the kind's resonance condition, J.
    pub detuning: f64,
    /// `max(hbar gamma_i, energy change across the neighbouring samples)`, J.
    pub resonance_tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct PeakReport {
    pub peaks: Vec<Peak>,
    pub classification: Classification,
}

impl PeakReport {
    pub fn of_kind(&self, kind: PeakKind) -> Option<&Peak> {
        self.peaks.iter().find(|p| p.kind == kind)
    }
}

fn finite_samples(samples: &[Sample]) -> Vec<Sample> {
    let mut s: Vec<Sample> = samples.iter().copied().filter(|s| s.w.is_finite()).collect();
    s.sort_by(|a, b| a.phi_x.total_cmp(&b.phi_x));
    s
}

/// Indices of local maxima with their topographic prominence.
fn maxima(s: &[Sample]) -> Vec<(usize, f64)> {
    let n = s.len();
    let mut out = Vec::new();
    for i in 0..n {
        let w = s[i].w;
        let left_ok = i == 0 || s[i - 1].w < w;
        let right_ok = i + 1 == n || s[i + 1].w <= w;
        if !(left_ok && right_ok) || n < 3 {
            continue;
        }
        if i == 0 || i + 1 == n {
            continue;
        }
        let mut lmin = w;
        let mut j = i;
        while j > 0 {
            j -= 1;
            if s[j].w > w {
                break;
            }
            lmin = lmin.min(s[j].w);
        }
        let mut rmin = w;
        let mut j = i;
        while j + 1 < n {
            j += 1;
            if s[j].w > w {
                break;
            }
            rmin = rmin.min(s[j].w);
        }
        out.push((i, w - lmin.max(rmin)));
    }
    out
}

fn sign_change(a: f64, b: f64) -> bool {
    a.is_finite() && b.is_finite() && (a == 0.0 || b == 0.0 || a.signum() != b.signum())
}

fn classify(peaks: &[Peak]) -> Classification {
    let count = |k| peaks.iter().filter(|p| p.kind == k).count();
    match peaks.len() {
        1 if peaks[0].kind == PeakKind::Tunneling => Classification::OnePeak,
        3 if count(PeakKind::Tunneling) == 1 && count(PeakKind::PumpF1) == 1 && count(PeakKind::PumpF2) == 1 => {
            Classification::ThreePeak
        }
        _ => Classification::Other,
    }
}

/// Kinds: a maximum whose neighbours bracket a resonance, or which lies
/// within the level width of one, is the pump peak of that level; of the
/// rest the one nearest `phi_x0` is the tunnelling peak and any others go
/// to the better satisfied resonance.
fn assign(s: &[Sample], found: &[(usize, f64)], phi_x0: f64) -> Vec<(usize, f64, PeakKind)> {
    let mut kinds: Vec<Option<PeakKind>> = found
        .iter()
        .map(|&(i, _)| {
            let (a, b) = (s[i.saturating_sub(1)], s[(i + 1).min(s.len() - 1)]);
            let p = s[i];
            let f1 = sign_change(a.det_f1, b.det_f1) || p.det_f1.abs() <= p.width(PeakKind::PumpF1);
            let f2 = sign_change(a.det_f2, b.det_f2) || p.det_f2.abs() <= p.width(PeakKind::PumpF2);
            match (f1, f2) {
                (true, true) if s[i].det_f1.abs() <= s[i].det_f2.abs() => Some(PeakKind::PumpF1),
                (true, true) => Some(PeakKind::PumpF2),
                (true, false) => Some(PeakKind::PumpF1),
                (false, true) => Some(PeakKind::PumpF2),
                _ => None,
            }
        })
        .collect();
    if let Some(k) = (0..found.len())
        .filter(|&k| kinds[k].is_none())
        .min_by(|&a, &b| {
            let da = (s[found[a].0].phi_x - phi_x0).abs();
            let db = (s[found[b].0].phi_x - phi_x0).abs();
            da.total_cmp(&db)
        })
    {
        kinds[k] = Some(PeakKind::Tunneling);
    }
    found
        .iter()
        .zip(kinds)
        .map(|(&(i, p), k)| {
            let k = k.unwrap_or(if s[i].det_f1.abs() <= s[i].det_f2.abs() {
                PeakKind::PumpF1
            } else {
                PeakKind::PumpF2
            });
            (i, p, k)
        })
        .collect()
}

fn half_crossing_linear(s: &[Sample], i: usize, dir: isize) -> Option<f64> {
    let half = 0.5 * s[i].w;
    let mut j = i as isize;
    loop {
        let k = j + dir;
        if k < 0 || k as usize >= s.len() {
            return None;
        }
        let (a, b) = (s[j as usize], s[k as usize]);
        if b.w <= half {
            let t = (a.w - half) / (a.w - b.w);
            return Some(a.phi_x + t * (b.phi_x - a.phi_x));
        }
        j = k;
    }
}

fn resonance_tol(s: &[Sample], i: usize, kind: PeakKind) -> f64 {
    let (a, b) = (s[i.saturating_sub(1)], s[(i + 1).min(s.len() - 1)]);
    let grid = 0.5 * (a.det(kind) - b.det(kind)).abs();
    s[i].width(kind).max(grid)
}

fn build_report<H: Fn(&[Sample], usize, isize) -> Option<f64>>(s: &[Sample], phi_x0: f64, half: H) -> PeakReport {
    let top = s.iter().map(|x| x.w).fold(0.0f64, f64::max);
    let found: Vec<(usize, f64)> = maxima(s)
        .into_iter()
        .filter(|&(_, p)| top > 0.0 && p >= PROMINENCE_FRACTION * top)
        .collect();
    let peaks: Vec<Peak> = assign(s, &found, phi_x0)
        .into_iter()
        .map(|(i, prominence, kind)| {
            let fwhm = match (half(s, i, -1), half(s, i, 1)) {
                (Some(a), Some(b)) => Some(b - a),
                _ => None,
            };
            Peak {
                phi_x: s[i].phi_x,
                w: s[i].w,
                prominence,
                fwhm,
                kind,
                detuning: s[i].det(kind),
                resonance_tol: resonance_tol(s, i, kind),
            }
        })
        .collect();
    let classification = classify(&peaks);
    PeakReport { peaks, classification }
}

/// Peaks of W on the sampled grid alone, with FWHM by linear
/// interpolation. `phi_x0` is the crossing flux.
pub fn detect_peaks(rows: &[SweepRow], phi_x0: f64) -> Result<PeakReport> {
    if rows.len() < MIN_ROWS {
        return Err(Error::NotEnoughLevels {
            needed: MIN_ROWS,
            found: rows.len(),
        });
    }
    let samples: Vec<Sample> = rows.iter().map(Sample::from_row).collect();
    Ok(build_report(&finite_samples(&samples), phi_x0, half_crossing_linear))
}

/// Like [`detect_peaks`], but pump resonances that fall between grid
/// points are located with `eval`, every maximum is polished by a
/// golden-section search and half heights are found by bisection on `eval`.
/// Needed when resonances are narrower than the grid step.
pub fn refine_peaks<F: Fn(f64) -> Option<Sample>>(
    rows: &[SweepRow],
    phi_x0: f64,
    eval: F,
) -> Result<PeakReport> {
    if rows.len() < MIN_ROWS {
        return Err(Error::NotEnoughLevels {
            needed: MIN_ROWS,
            found: rows.len(),
        });
    }
    let base: Vec<Sample> = finite_samples(&rows.iter().map(Sample::from_row).collect::<Vec<_>>());
    let w_at = |x: f64| eval(x).map_or(f64::NAN, |s| s.w);
    let mut extra = Vec::new();
    for pair in base.windows(2) {
        let (a, b) = (pair[0], pair[1]);
        for det in [|s: &Sample| s.det_f1, |s: &Sample| s.det_f2] {
            if !sign_change(det(&a), det(&b)) {
                continue;
            }
            let Ok(xr) = brent(|x| eval(x).map_or(f64::NAN, |s| det(&s)), a.phi_x, b.phi_x, 1e-15) else {
                continue;
            };
            let Some(at) = eval(xr) else { continue };
            extra.push(at);
            let span = 0.25 * (b.phi_x - a.phi_x);
            let (lo, hi) = ((xr - span).max(a.phi_x), (xr + span).min(b.phi_x));
            let (xm, _) = golden_min(|x| -w_at(x), lo, hi, 1e-9 * (b.phi_x - a.phi_x));
            if let Some(m) = eval(xm) {
                if m.w > at.w {
                    extra.push(m);
                }
            }
        }
    }
    let mut merged = base.clone();
    merged.extend(extra);
    let merged = finite_samples(&merged);
    let mut polished = Vec::new();
    for (i, _) in maxima(&merged) {
        let (lo, hi) = (merged[i - 1].phi_x, merged[i + 1].phi_x);
        let (xm, _) = golden_min(|x| -w_at(x), lo, hi, 1e-9 * (hi - lo));
        if let Some(m) = eval(xm) {
            if m.w > merged[i].w {
                polished.push(m);
            }
        }
    }
    let mut all = merged;
    all.extend(polished);
    let all = finite_samples(&all);
    let half = |s: &[Sample], i: usize, dir: isize| -> Option<f64> {
        let target = 0.5 * s[i].w;
        let mut j = i as isize;
        loop {
            let k = j + dir;
            if k < 0 || k as usize >= s.len() {
                return None;
            }
            if s[k as usize].w <= target {
                let (a, b) = (s[j as usize].phi_x, s[k as usize].phi_x);
                let (lo, hi) = if a < b { (a, b) } else { (b, a) };
                return bisect(|x| w_at(x) - target, lo, hi, 1e-13 * (1.0 + lo.abs()))
                    .ok()
                    .or_else(|| half_crossing_linear(s, i, dir));
            }
            j = k;
        }
    };
    Ok(build_report(&all, phi_x0, half))
}
