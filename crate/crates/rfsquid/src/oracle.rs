//! Brute-force reference solver: the reduced Hamiltonian
//! `-(1/eta^2) d^2/dphi^2 + u(phi)` discretised with a three-point second
//! difference on a uniform grid with Dirichlet ends, diagonalised by Sturm
//! bisection and inverse iteration.
//!
//! Energies are reported in units of `U0`; `GridSpectrum::joules` converts.

use crate::device::{Potential, Scales};
use crate::error::{Error, Result};
use crate::roots::{brent, golden_min};
use num_complex::Complex64;

pub const DEFAULT_POINTS: usize = 4096;
pub const MIN_POINTS: usize = 512;
/// Convergence tolerance on extrapolated eigenvalues, in `U0`.
pub const TOL_CONV: f64 = 1e-9;
/// Tunnelling action `eta * int sqrt(u - E)` kept beyond each outer turning point.
pub const DECAY_ACTION: f64 = 30.0;
const MAX_DOUBLINGS: usize = 3;
/// Eigenvalues closer than this are re-orthogonalised against each other.
const CLUSTER_GAP: f64 = 1e-2;
/// Relative bisection tolerance.
const EIG_TOL: f64 = 1e-13;

/// Which eigenpairs to compute.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Selection {
    /// The lowest `n`.
    Lowest(usize),
    /// Every eigenvalue in `[lo, hi)` of the base grid.
    Window(f64, f64),
}

/// Coordinate window of a discretisation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Domain {
    pub lo: f64,
    pub hi: f64,
}

impl Domain {
    /// Smallest window holding every classically allowed point below `e_max`
    /// plus `DECAY_ACTION` of tunnelling action on each side.
    pub fn covering(pot: &Potential, eta: f64, e_max: f64) -> Result<Self> {
        let reach = (2.0 * (e_max + pot.beta_l).max(0.0)).sqrt() + 0.1;
        let (a, b) = (pot.phi_x - reach, pot.phi_x + reach);
        let f = |p: f64| pot.u(p) - e_max;
        let scan = 4000;
        let step = (b - a) / scan as f64;
        let mut left = None;
        let mut right = None;
        for i in 0..scan {
            let (p, q) = (a + i as f64 * step, a + (i + 1) as f64 * step);
            if f(p) > 0.0 && f(q) <= 0.0 && left.is_none() {
                left = Some(brent(f, p, q, 1e-14)?);
            }
            if f(p) <= 0.0 && f(q) > 0.0 {
                right = Some(brent(f, p, q, 1e-14)?);
            }
        }
        let (Some(left), Some(right)) = (left, right) else {
            return Err(Error::EnergyDomain {
                energy: e_max,
                lo: pot.u(pot.phi_x),
                hi: f64::INFINITY,
            });
        };
        let march = |start: f64, dir: f64| {
            let h = 1e-3;
            let (mut p, mut s) = (start, 0.0);
            while s < DECAY_ACTION {
                let mid = p + 0.5 * dir * h;
                s += eta * h * f(mid).max(0.0).sqrt();
                p += dir * h;
            }
            p
        };
        Ok(Self {
            lo: march(left, -1.0),
            hi: march(right, 1.0),
        })
    }

    /// The window widened by `frac` of its length on each side.
    pub fn widened(&self, frac: f64) -> Self {
        let d = frac * (self.hi - self.lo);
        Self {
            lo: self.lo - d,
            hi: self.hi + d,
        }
    }

    pub fn union(&self, other: &Self) -> Self {
        Self {
            lo: self.lo.min(other.lo),
            hi: self.hi.max(other.hi),
        }
    }
}

/// Symmetric tridiagonal matrix with a constant off-diagonal.
#[derive(Debug, Clone)]
struct Tridiagonal {
    diag: Vec<f64>,
    off: f64,
    h: f64,
}

impl Tridiagonal {
    /// `n` interior points of `domain`.
    fn new(pot: &Potential, eta: f64, domain: Domain, n: usize) -> Self {
        let h = (domain.hi - domain.lo) / (n + 1) as f64;
        let kin = 1.0 / (eta * eta * h * h);
        let diag = (0..n)
            .map(|i| 2.0 * kin + pot.u(domain.lo + (i + 1) as f64 * h))
            .collect();
        Self {
            diag,
            off: -kin,
            h,
        }
    }

    fn bounds(&self) -> (f64, f64) {
        let r = 2.0 * self.off.abs();
        let (mn, mx) = self
            .diag
            .iter()
            .fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), &d| (a.min(d), b.max(d)));
        (mn - r, mx + r)
    }

    /// Number of eigenvalues below `x`.
    fn count_below(&self, x: f64) -> usize {
        let b2 = self.off * self.off;
        let tiny = f64::EPSILON * self.off.abs().max(1.0);
        let mut count = 0;
        let mut q = 1.0;
        for (i, &d) in self.diag.iter().enumerate() {
            q = if i == 0 { d - x } else { d - x - b2 / q };
            if q == 0.0 {
                q = -tiny;
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    }

    /// Eigenvalue `k` (zero based) by bisection inside `[lo, hi]`.
    fn eigenvalue(&self, k: usize, mut lo: f64, mut hi: f64) -> f64 {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi || hi - lo < EIG_TOL * (1.0 + mid.abs()) {
                break;
            }
            if self.count_below(mid) > k {
                hi = mid;
            } else {
                lo = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Eigenvalue `k`, bracketed by widening around `guess`.
    fn eigenvalue_near(&self, k: usize, guess: f64, width: f64) -> f64 {
        let (bl, bh) = self.bounds();
        let mut w = width;
        loop {
            let lo = (guess - w).max(bl);
            let hi = (guess + w).min(bh);
            if self.count_below(lo) <= k && self.count_below(hi) > k {
                return self.eigenvalue(k, lo, hi);
            }
            if lo <= bl && hi >= bh {
                return self.eigenvalue(k, bl, bh);
            }
            w *= 8.0;
        }
    }

    /// Solves `(T - sigma) x = rhs` in place by LU with partial pivoting.
    fn solve_shifted(&self, sigma: f64, rhs: &mut [f64]) {
        let n = self.diag.len();
        let mut d: Vec<f64> = self.diag.iter().map(|a| a - sigma).collect();
        let mut dl = vec![self.off; n.saturating_sub(1)];
        let mut du = vec![self.off; n.saturating_sub(1)];
        let mut du2 = vec![0.0; n.saturating_sub(2)];
        let mut swap = vec![false; n.saturating_sub(1)];
        let tiny = f64::EPSILON * (self.off.abs() + 1.0);
        for i in 0..n.saturating_sub(1) {
            if d[i].abs() >= dl[i].abs() {
                if d[i] == 0.0 {
                    d[i] = tiny;
                }
                let fact = dl[i] / d[i];
                dl[i] = fact;
                d[i + 1] -= fact * du[i];
            } else {
                let fact = d[i] / dl[i];
                d[i] = dl[i];
                dl[i] = fact;
                let temp = du[i];
                du[i] = d[i + 1];
                d[i + 1] = temp - fact * d[i + 1];
                if i + 2 < n {
                    du2[i] = du[i + 1];
                    du[i + 1] *= -fact;
                }
                swap[i] = true;
            }
        }
        if d[n - 1] == 0.0 {
            d[n - 1] = tiny;
        }
        for i in 0..n.saturating_sub(1) {
            if swap[i] {
                let temp = rhs[i] - dl[i] * rhs[i + 1];
                rhs[i] = rhs[i + 1];
                rhs[i + 1] = temp;
            } else {
                rhs[i + 1] -= dl[i] * rhs[i];
            }
        }
        rhs[n - 1] /= d[n - 1];
        if n >= 2 {
            rhs[n - 2] = (rhs[n - 2] - du[n - 2] * rhs[n - 1]) / d[n - 2];
        }
        for i in (0..n.saturating_sub(2)).rev() {
            rhs[i] = (rhs[i] - du[i] * rhs[i + 1] - du2[i] * rhs[i + 2]) / d[i];
        }
    }

    /// Eigenvector for `lambda`, orthogonalised against `cluster`.
    fn eigenvector(&self, lambda: f64, seed: usize, cluster: &[&[f64]]) -> Vec<f64> {
        let n = self.diag.len();
        let mut v: Vec<f64> = (0..n)
            .map(|i| {
                let x = ((i * 7919 + seed * 104_729) % 1_000_003) as f64;
                0.5 + (x * 12.9898).sin().abs()
            })
            .collect();
        let w = self.h.sqrt();
        for _ in 0..4 {
            for c in cluster {
                let dot: f64 = v.iter().zip(c.iter()).map(|(a, b)| a * b).sum::<f64>() * self.h;
                v.iter_mut().zip(c.iter()).for_each(|(a, b)| *a -= dot * b);
            }
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
            self.solve_shifted(lambda, &mut v);
            let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
            v.iter_mut().for_each(|a| *a /= norm);
        }
        for c in cluster {
            let dot: f64 = v.iter().zip(c.iter()).map(|(a, b)| a * b).sum::<f64>() * self.h;
            v.iter_mut().zip(c.iter()).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt() * w;
        let big = v.iter().cloned().fold(0.0f64, |m, a| if a.abs() > m.abs() { a } else { m });
        let s = big.signum() / norm;
        v.iter_mut().for_each(|a| *a *= s);
        v
    }

    /// Index of the first selected eigenvalue and the selected eigenvalues.
    fn select(&self, sel: Selection) -> (usize, Vec<f64>) {
        let (bl, bh) = self.bounds();
        let (first, end, top) = match sel {
            Selection::Lowest(n) => {
                if n == 0 {
                    return (0, Vec::new());
                }
                let top = self.eigenvalue(n - 1, bl, bh);
                (0, n, top + EIG_TOL * (1.0 + top.abs()))
            }
            Selection::Window(lo, hi) => (self.count_below(lo), self.count_below(hi), hi),
        };
        let mut lo = match sel {
            Selection::Lowest(_) => bl,
            Selection::Window(lo, _) => lo,
        };
        let mut out = Vec::with_capacity(end.saturating_sub(first));
        for k in first..end {
            let e = self.eigenvalue(k, lo, top);
            out.push(e);
            lo = e - EIG_TOL * (1.0 + e.abs());
        }
        (first, out)
    }

    fn refine(&self, guesses: &[f64], first: usize) -> Vec<f64> {
        guesses
            .iter()
            .enumerate()
            .map(|(i, &g)| self.eigenvalue_near(first + i, g, 1e-3 * (1.0 + g.abs())))
            .collect()
    }
}

fn richardson(coarse: f64, fine: f64) -> f64 {
    (4.0 * fine - coarse) / 3.0
}

/// Eigenvalues `first..first+count` at `n` interior points, extrapolated
/// from grids with spacing `h` and `h/2`, together with the extrapolation
/// from `h/2` and `h/4` for a convergence estimate.
fn extrapolated(
    pot: &Potential,
    eta: f64,
    domain: Domain,
    n: usize,
    first: usize,
    coarse: &[f64],
) -> (Vec<f64>, Vec<f64>) {
    let t2 = Tridiagonal::new(pot, eta, domain, 2 * n + 1);
    let e2 = t2.refine(coarse, first);
    let t4 = Tridiagonal::new(pot, eta, domain, 4 * n + 3);
    let e4 = t4.refine(&e2, first);
    let r1 = coarse.iter().zip(&e2).map(|(&a, &b)| richardson(a, b)).collect();
    let r2 = e2.iter().zip(&e4).map(|(&a, &b)| richardson(a, b)).collect();
    (r1, r2)
}

/// Eigenpairs of the discretised Hamiltonian.
#[derive(Debug, Clone)]
pub struct GridSpectrum {
    pub domain: Domain,
    /// Interior grid spacing; the grid is `domain.lo + (i + 1) h`.
    pub h: f64,
    /// Position of `energies[0]` in the full spectrum.
    pub first: usize,
    /// Extrapolated eigenvalues in `U0`, ascending.
    pub energies: Vec<f64>,
    /// Eigenvalues of the base grid, the ones the states belong to.
    pub raw_energies: Vec<f64>,
    /// Largest change of an extrapolated eigenvalue under grid doubling.
    pub convergence: f64,
    /// Eigenvectors normalised to `h sum psi^2 = 1`.
    pub states: Vec<Vec<f64>>,
}

impl GridSpectrum {
    /// Selected eigenpairs on `n` interior points of `domain`.
    pub fn solve(pot: &Potential, eta: f64, domain: Domain, sel: Selection, n: usize) -> Result<Self> {
        if n < MIN_POINTS {
            return Err(Error::ParameterDomain {
                name: "grid_points",
                value: n as f64,
                reason: "at least 512 points are needed",
            });
        }
        let mut n_cur = n;
        let mut last = f64::INFINITY;
        for _ in 0..=MAX_DOUBLINGS {
            let t = Tridiagonal::new(pot, eta, domain, n_cur);
            let (first, raw) = t.select(sel);
            let (r1, r2) = extrapolated(pot, eta, domain, n_cur, first, &raw);
            let change = r1.iter().zip(&r2).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            last = change;
            if change < TOL_CONV {
                let states = eigenvectors(&t, &raw);
                return Ok(Self {
                    domain,
                    first,
                    h: t.h,
                    energies: r2,
                    raw_energies: raw,
                    convergence: change,
                    states,
                });
            }
            n_cur = 2 * n_cur + 1;
        }
        Err(Error::OracleConvergence(format!(
            "eigenvalues still change by {last:e} U0 after {MAX_DOUBLINGS} doublings"
        )))
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn phi(&self, i: usize) -> f64 {
        self.domain.lo + (i + 1) as f64 * self.h
    }

    pub fn joules(&self, scales: &Scales) -> Vec<f64> {
        self.energies.iter().map(|&e| scales.joule(e)).collect()
    }

    /// Index of the eigenvalue nearest `e`.
    pub fn nearest(&self, e: f64) -> usize {
        let mut best = 0;
        for (i, &x) in self.energies.iter().enumerate() {
            if (x - e).abs() < (self.energies[best] - e).abs() {
                best = i;
            }
        }
        best
    }

    /// `<a| zeta |b>` for real grid vectors `a`, `b`.
    pub fn element<Z: Fn(f64) -> Complex64>(&self, a: &[f64], b: &[f64], zeta: Z) -> Complex64 {
        let mut sum = Complex64::new(0.0, 0.0);
        for k in 0..a.len() {
            sum += zeta(self.phi(k)) * (a[k] * b[k]);
        }
        sum * self.h
    }

    /// Rotation of states `i` and `j` into the combinations with extremal
    /// weight at `phi < split`: `(left, right)`. Undoes the hybridisation of
    /// two nearly degenerate localised levels.
    pub fn localized(&self, i: usize, j: usize, split: f64) -> (Vec<f64>, Vec<f64>) {
        let (a, b) = (&self.states[i], &self.states[j]);
        let mut p = [0.0; 3];
        for k in 0..a.len() {
            if self.phi(k) < split {
                p[0] += a[k] * a[k];
                p[1] += a[k] * b[k];
                p[2] += b[k] * b[k];
            }
        }
        let theta = 0.5 * (2.0 * p[1]).atan2(p[0] - p[2]);
        let (s, c) = theta.sin_cos();
        let left = a.iter().zip(b).map(|(x, y)| c * x + s * y).collect();
        let right = a.iter().zip(b).map(|(x, y)| c * y - s * x).collect();
        (left, right)
    }

    /// Probability of state `i` at `phi < split`.
    pub fn weight_below(&self, i: usize, split: f64) -> f64 {
        self.states[i]
            .iter()
            .enumerate()
            .filter(|(k, _)| self.phi(*k) < split)
            .map(|(_, a)| a * a)
            .sum::<f64>()
            * self.h
    }
}

fn eigenvectors(t: &Tridiagonal, energies: &[f64]) -> Vec<Vec<f64>> {
    let mut states: Vec<Vec<f64>> = Vec::with_capacity(energies.len());
    for (k, &e) in energies.iter().enumerate() {
        let cluster: Vec<&[f64]> = (0..k)
            .filter(|&j| (energies[j] - e).abs() < CLUSTER_GAP)
            .map(|j| states[j].as_slice())
            .collect();
        let v = t.eigenvector(e, k, &cluster);
        states.push(v);
    }
    states
}

/// Global minimum of `u`.
fn u_min(pot: &Potential) -> f64 {
    let reach = pot.beta_l + 0.1;
    let n = 2000;
    (0..=n)
        .map(|i| pot.u(pot.phi_x - reach + 2.0 * reach * i as f64 / n as f64))
        .fold(f64::INFINITY, f64::min)
}

/// The lowest `n_levels` eigenpairs of `pot`, on a window chosen so that all
/// of them are well inside it.
pub fn diagonalize(pot: &Potential, eta: f64, n_levels: usize, n: usize) -> Result<GridSpectrum> {
    let base = u_min(pot);
    let quantum = (2.0 * (1.0 + pot.beta_l)).sqrt() / eta;
    let mut e_max = base + (n_levels as f64 + 2.0) * quantum;
    for _ in 0..20 {
        let domain = Domain::covering(pot, eta, e_max)?;
        let t = Tridiagonal::new(pot, eta, domain, n);
        if t.count_below(e_max) > n_levels {
            return GridSpectrum::solve(pot, eta, domain, Selection::Lowest(n_levels), n);
        }
        e_max = base + 2.0 * (e_max - base);
    }
    Err(Error::NotEnoughLevels {
        needed: n_levels,
        found: 0,
    })
}

/// All eigenpairs in `[e_lo, e_hi)`, on the domain covering `e_hi`.
pub fn diagonalize_window(pot: &Potential, eta: f64, e_lo: f64, e_hi: f64, n: usize) -> Result<GridSpectrum> {
    let domain = Domain::covering(pot, eta, e_hi)?;
    GridSpectrum::solve(pot, eta, domain, Selection::Window(e_lo, e_hi), n)
}

/// Result of a splitting scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Splitting {
    pub phi_x: f64,
    pub gap: f64,
    /// Index of the lower member.
    pub index: usize,
}

/// Extrapolated eigenvalues `k` and `k + 1` at one flux.
fn pair_at(beta_l: f64, phi_x: f64, eta: f64, domain: Domain, n: usize, k: usize) -> (f64, f64) {
    let pot = Potential::new(beta_l, phi_x);
    let t = Tridiagonal::new(&pot, eta, domain, n);
    let (bl, bh) = t.bounds();
    let lo = t.eigenvalue(k, bl, bh);
    let hi = t.eigenvalue_near(k + 1, lo, 1e-2);
    let t2 = Tridiagonal::new(&pot, eta, domain, 2 * n + 1);
    let e2 = t2.refine(&[lo, hi], k);
    (richardson(lo, e2[0]), richardson(hi, e2[1]))
}

/// Minimum over `phi_x` in `[lo, hi]` of the splitting of the adjacent
/// eigenvalue pair whose mean is nearest `e_ref` at the centre of the range.
pub fn exact_splitting_scan(
    beta_l: f64,
    eta: f64,
    (lo, hi): (f64, f64),
    e_ref: f64,
    n: usize,
) -> Result<Splitting> {
    let e_cap = e_ref + 0.1 * (1.0 + e_ref.abs());
    let domain = Domain::covering(&Potential::new(beta_l, lo), eta, e_cap)?
        .union(&Domain::covering(&Potential::new(beta_l, hi), eta, e_cap)?);
    let mid = 0.5 * (lo + hi);
    let t = Tridiagonal::new(&Potential::new(beta_l, mid), eta, domain, n);
    let below = t.count_below(e_ref);
    let first = below.saturating_sub(2);
    let evs: Vec<f64> = (first..below + 2)
        .map(|k| t.eigenvalue(k, t.bounds().0, t.bounds().1))
        .collect();
    let index = (0..evs.len() - 1)
        .min_by(|&a, &b| {
            let da = (0.5 * (evs[a] + evs[a + 1]) - e_ref).abs();
            let db = (0.5 * (evs[b] + evs[b + 1]) - e_ref).abs();
            da.total_cmp(&db)
        })
        .map(|i| first + i)
        .unwrap_or(first);
    let split = |x: f64| {
        let (a, b) = pair_at(beta_l, x, eta, domain, n, index);
        b - a
    };
    let (phi_x, gap) = golden_min(split, lo, hi, 1e-9 * (1.0 + mid.abs()));
    let edge = 1e-3 * (hi - lo);
    if phi_x - lo < edge || hi - phi_x < edge {
        return Err(Error::NoCrossing(format!(
            "splitting of levels {index}, {} has no interior minimum in [{lo}, {hi}]",
            index + 1
        )));
    }
    Ok(Splitting { phi_x, gap, index })
}

/// `<i| zeta(phi) |j>` by trapezoidal quadrature; the states are real.
pub fn exact_matrix_element<Z: Fn(f64) -> Complex64>(
    spec: &GridSpectrum,
    i: usize,
    j: usize,
    zeta: Z,
) -> Complex64 {
    spec.element(&spec.states[i], &spec.states[j], zeta)
}
