//! Per-flux evaluation: spectrum and matrix elements, then kinetics.

use crate::device::{DeviceParams, Geometry, Scales};
use crate::error::{Error, Result};
use crate::kinetics::{escape_rate, Bath, Drive, EscapeResult, KineticInput, RateSet, SteadyState};
use crate::matrix_elements::{DelocalizedState, ElementSet, LevelSet, DEFAULT_CELLS};
use crate::wkb::{bs_level, harmonic_ground, CrossingPoint, NearTop};

/// A device together with the crossing that defines the level pair.
#[derive(Debug, Clone, Copy)]
pub struct Device {
    pub params: DeviceParams,
    pub scales: Scales,
    pub crossing: CrossingPoint,
    /// Trajectory resolution for matrix elements.
    pub cells: usize,
}

impl Device {
    /// Locates the crossing of left level `k1` nearest to `seed_phi_x`.
    pub fn new(params: DeviceParams, seed_phi_x: f64, k1: u32) -> Result<Self> {
        let scales = Scales::new(&params)?;
        let crossing = CrossingPoint::find(params.beta_l, scales.eta, seed_phi_x, k1)?;
        Ok(Self {
            params,
            scales,
            crossing,
            cells: DEFAULT_CELLS,
        })
    }

    /// Bath described by the device parameters.
    pub fn bath(&self) -> Bath {
        Bath {
            r_eff: self.params.r_eff,
            temperature: self.params.temperature,
        }
    }

    pub fn near_top(&self, phi_x: f64) -> Result<NearTop> {
        Ok(NearTop::new(Geometry::new(self.params.beta_l, phi_x)?, self.scales.eta))
    }

    /// Pair levels at `phi_x`: `(lower, upper)`, the members with counting
    /// values `k1 + k2` and `k1 + k2 + 1`.
    pub fn pair(&self, nt: &NearTop) -> Result<(f64, f64)> {
        let c = &self.crossing;
        let h = c.hyperbola(nt.geom.pot.phi_x);
        let (m_lo, m_hi) = c.pair_counts();
        let step = 0.25 * c.gap;
        let lower = nt.level_with_count(m_lo, h.lower, step)?;
        let upper = nt.level_with_count(m_hi, h.upper.max(lower + 1e-9), step)?;
        Ok((lower, upper))
    }

    /// Levels and matrix elements at one flux value.
    pub fn spectrum_at(&self, phi_x: f64) -> Result<PointSpectrum> {
        let nt = self.near_top(phi_x)?;
        let eta = self.scales.eta;
        let (lower, upper) = self.pair(&nt)?;
        let f1 = DelocalizedState::from_phases(&nt.phases(upper)?, eta);
        let f2 = DelocalizedState::from_phases(&nt.phases(lower)?, eta);
        let left = nt.geom.left_well();
        let e0 = harmonic_ground(&left, eta);
        let k1 = self.crossing.k1;
        let el = if k1 <= 1 { e0 } else { bs_level(&left, eta, k1 - 1)? };
        let er = self.right_level_below(&nt, lower)?;
        let levels = LevelSet {
            e0,
            el,
            er,
            f1,
            f2,
            k1,
        };
        let elements = ElementSet::build(&nt, &levels, self.cells)?;
        Ok(PointSpectrum {
            phi_x,
            levels,
            elements,
            hbar_omega_p: nt.geom.plasma_quanta(eta).0,
        })
    }

    /// Highest Bohr–Sommerfeld level of the right well below `e`.
    fn right_level_below(&self, nt: &NearTop, e: f64) -> Result<f64> {
        let right = nt.geom.right_well();
        let eta = self.scales.eta;
        let mut n = self.crossing.k2.saturating_sub(1);
        loop {
            let er = bs_level(&right, eta, n)?;
            if er < e {
                return Ok(er);
            }
            if n == 0 {
                return Err(Error::NotEnoughLevels { needed: 1, found: 0 });
            }
            n -= 1;
        }
    }

    pub fn kinetic_input(&self, ps: &PointSpectrum) -> KineticInput {
        KineticInput::from_reduced(&ps.levels, ps.elements, &self.scales, ps.hbar_omega_p)
    }

    /// Rates, steady state and escape rate for one drive.
    pub fn evaluate(&self, ps: &PointSpectrum, bath: &Bath, drive: &Drive) -> Result<PointKinetics> {
        let input = self.kinetic_input(ps);
        let rates = RateSet::build(&input, bath)?;
        let state = SteadyState::solve(&input, &rates, drive)?;
        Ok(PointKinetics {
            input,
            rates,
            state,
            escape: escape_rate(&state, &rates),
        })
    }
}

/// Drive-independent data of one flux point.
#[derive(Debug, Clone, Copy)]
pub struct PointSpectrum {
    pub phi_x: f64,
    pub levels: LevelSet,
    pub elements: ElementSet,
    /// Reduced plasma quantum of the left well.
    pub hbar_omega_p: f64,
}

#[derive(Debug, Clone, Copy)]
pub struct PointKinetics {
    pub input: KineticInput,
    pub rates: RateSet,
    pub state: SteadyState,
    pub escape: EscapeResult,
}

impl PointKinetics {
    /// The result for a drive `c` times stronger in amplitude.
    pub fn rescaled(&self, c: f64) -> Self {
        let state = self.state.rescaled(c);
        Self {
            state,
            escape: escape_rate(&state, &self.rates),
            ..*self
        }
    }
}
