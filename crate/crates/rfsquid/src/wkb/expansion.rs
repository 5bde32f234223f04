//! First-order expansion of the well actions about the barrier-top energy,
//! with the logarithmic singularity separated out.

use super::NearTop;
use crate::quad::tanh_sinh_scalar;

/// Closed-form near-top actions of a fixed potential.
#[derive(Debug, Clone, Copy)]
pub struct Expansion {
    pub near_top: NearTop,
    /// Actions at the barrier-top energy (times `eta`).
    pub s_top_left: f64,
    pub s_top_right: f64,
    /// Regularised `int [1/sqrt(u_top - u) - pole]` over each well.
    pub reg_left: f64,
    pub reg_right: f64,
    /// Distances from the barrier top to the outer turning points.
    pub span_left: f64,
    pub span_right: f64,
}

/// Distance from the barrier top below which the regularised integrand is
/// replaced by its value at the cutoff.
const REG_CUTOFF: f64 = 1e-6;

impl Expansion {
    pub fn new(near_top: NearTop) -> Self {
        let g = near_top.geom;
        let pot = g.pot;
        let top_action = |a: f64, b: f64| {
            tanh_sinh_scalar(
                |_, da, db| {
                    let v = if da <= db {
                        -pot.delta(a, da)
                    } else {
                        -pot.delta(b, -db)
                    };
                    v.max(0.0).sqrt()
                },
                a,
                b,
                1e-13,
            )
        };
        // integrand in the distance d from the top; pole = sqrt(span) / (d sqrt(u1 (span - d)))
        let reg = |outer: f64, sign: f64| {
            let span = (g.phi_top - outer).abs();
            tanh_sinh_scalar(
                |_, d, from_outer| {
                    let (d, from_outer) = if d < REG_CUTOFF {
                        (REG_CUTOFF, span - REG_CUTOFF)
                    } else {
                        (d, from_outer)
                    };
                    let v = if d <= from_outer {
                        -pot.delta(g.phi_top, sign * d)
                    } else {
                        -pot.delta(outer, -sign * from_outer)
                    };
                    1.0 / v.sqrt() - span.sqrt() / (d * (g.u1 * from_outer).sqrt())
                },
                0.0,
                span,
                1e-12,
            )
        };
        Self {
            near_top,
            s_top_left: near_top.eta * top_action(g.tilde_phi1, g.phi_top),
            s_top_right: near_top.eta * top_action(g.phi_top, g.tilde_phi4),
            reg_left: reg(g.tilde_phi1, -1.0),
            reg_right: reg(g.tilde_phi4, 1.0),
            span_left: g.phi_top - g.tilde_phi1,
            span_right: g.tilde_phi4 - g.phi_top,
        }
    }

    fn action(&self, s_top: f64, reg: f64, span: f64, e: f64) -> f64 {
        let g = self.near_top.geom;
        let eta = self.near_top.eta;
        let d = g.u_top - e;
        if d <= 0.0 {
            return s_top;
        }
        let sq = g.u1.sqrt();
        s_top - d * 0.5 * eta * reg
            - d * eta / (2.0 * sq) * ((8.0 * span * sq / d.sqrt()).ln() + 0.5)
    }

    /// Expanded `S_L(E)`.
    pub fn s_left(&self, e: f64) -> f64 {
        self.action(self.s_top_left, self.reg_left, self.span_left, e)
    }

    pub fn s_right(&self, e: f64) -> f64 {
        self.action(self.s_top_right, self.reg_right, self.span_right, e)
    }

    /// Energy derivatives of the expanded `Theta_1`, `Theta_2` at `lambda`:
    /// the linearised counterparts of the exact `beta_i`.
    pub fn linear_betas(&self, lambda: f64) -> (f64, f64) {
        let nt = &self.near_top;
        let g = nt.geom;
        let eta = nt.eta;
        let sq = g.u1.sqrt();
        let c = eta / (2.0 * sq);
        let m_u1 = 0.5 * eta * eta * g.u1;
        let log = |span: f64| (8.0 * m_u1.powf(0.25) * span / 2f64.powf(0.25)).ln();
        let chi_part = c * nt.chi_scale * crate::specfun::dchi(lambda);
        (
            0.5 * eta * self.reg_left + c * log(self.span_left) - chi_part,
            0.5 * eta * self.reg_right + c * log(self.span_right) - chi_part,
        )
    }
}
