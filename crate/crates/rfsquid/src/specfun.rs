//! The barrier phase `chi(lambda) = arg Gamma((1 + i lambda)/2)` and helpers.
//!
//! `chi` is evaluated from its partial-fraction series with an
//! Euler–Maclaurin tail, which keeps the branch continuous and odd for all
//! real `lambda`. An independent Stirling evaluation of the complex
//! log-gamma is provided as an oracle.

use num_complex::Complex64;
use std::f64::consts::PI;

/// Digamma at one half, `-gamma_E - 2 ln 2`.
pub const PSI_HALF: f64 = -1.963_510_026_021_423_5;

/// `x - atan(x)` without cancellation for small `x`.
fn x_minus_atan(x: f64) -> f64 {
    if x.abs() < 0.1 {
        let x2 = x * x;
        let mut term = x * x2;
        let mut sum = 0.0;
        let mut sign = 1.0;
        for k in (3..=17).step_by(2) {
            sum += sign * term / k as f64;
            term *= x2;
            sign = -sign;
        }
        sum
    } else {
        x - x.atan()
    }
}

fn direct_terms(lambda: f64) -> usize {
    64 + (4.0 * lambda).ceil() as usize
}

/// `chi(lambda)`, the continuous odd branch of `arg Gamma((1 + i lambda)/2)`.
pub fn chi(lambda: f64) -> f64 {
    if lambda < 0.0 {
        return -chi(-lambda);
    }
    if lambda == 0.0 {
        return 0.0;
    }
    let l = lambda;
    let k_max = direct_terms(l);
    let mut sum = 0.0;
    // small terms first
    for k in (0..k_max).rev() {
        let n = (2 * k + 1) as f64;
        sum += x_minus_atan(l / n);
    }
    let n = (2 * k_max + 1) as f64;
    let ratio = l / n;
    // integral of g over [K, inf) with g(x) = h(2x + 1), h(n) = l/n - atan(l/n)
    let integral = 0.5 * (0.5 * l * (ratio * ratio).ln_1p() - n * x_minus_atan(ratio));
    let n2 = n * n;
    let s2 = n2 + l * l;
    let h0 = x_minus_atan(ratio);
    let h1 = -l * l * l / (n2 * s2);
    let h3 = -6.0 * l / (n2 * n2) - 2.0 * l / (s2 * s2) + 8.0 * l * n2 / (s2 * s2 * s2);
    let tail = integral + 0.5 * h0 - 2.0 * h1 / 12.0 + 8.0 * h3 / 720.0;
    0.5 * l * PSI_HALF + sum + tail
}

/// `d chi / d lambda`.
pub fn dchi(lambda: f64) -> f64 {
    let l = lambda.abs();
    if l == 0.0 {
        return 0.5 * PSI_HALF;
    }
    let k_max = 2 * direct_terms(l);
    let l2 = l * l;
    let mut sum = 0.0;
    for k in (0..k_max).rev() {
        let n = (2 * k + 1) as f64;
        sum += l2 / (n * (n * n + l2));
    }
    let n = (2 * k_max + 1) as f64;
    let n2 = n * n;
    let s2 = n2 + l2;
    let integral = 0.25 * (l2 / n2).ln_1p();
    let p0 = l2 / (n * s2);
    let p1 = -l2 * (3.0 * n2 + l2) / (n2 * s2 * s2);
    0.5 * PSI_HALF + sum + integral + 0.5 * p0 - 2.0 * p1 / 12.0
}

/// Complex `ln Gamma(z)` for `Re z > 0` by upward recurrence and the
/// Stirling series. The imaginary part follows the continuous branch along
/// vertical lines.
pub fn ln_gamma(z: Complex64) -> Complex64 {
    const SHIFT: usize = 20;
    const C: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
    ];
    let mut log_prod = Complex64::new(0.0, 0.0);
    for k in 0..SHIFT {
        log_prod += (z + k as f64).ln();
    }
    let w = z + SHIFT as f64;
    let winv = w.inv();
    let winv2 = winv * winv;
    let mut series = Complex64::new(0.0, 0.0);
    let mut p = winv;
    for c in C {
        series += p * c;
        p *= winv2;
    }
    (w - 0.5) * w.ln() - w + 0.5 * (2.0 * PI).ln() + series - log_prod
}

/// Oracle for `chi`: `Im ln Gamma((1 + i lambda)/2)` from [`ln_gamma`].
pub fn gamma_phase_oracle(lambda: f64) -> f64 {
    ln_gamma(Complex64::new(0.5, 0.5 * lambda)).im
}

/// `|Gamma((1 + i lambda)/2)|` in closed form.
pub fn gamma_half_modulus(lambda: f64) -> f64 {
    (2.0 * PI).sqrt() * (-PI * lambda / 4.0).exp() / (1.0 + (-PI * lambda).exp()).sqrt()
}

/// The near-top phase `theta(lambda) = chi + lambda/2 + (lambda/2) ln(2/lambda)`.
pub fn theta(lambda: f64) -> f64 {
    if lambda == 0.0 {
        return 0.0;
    }
    chi(lambda) + 0.5 * lambda + 0.5 * lambda * (2.0 / lambda).ln()
}

/// `d theta / d lambda = chi' + (1/2) ln(2/lambda)`.
pub fn dtheta(lambda: f64) -> f64 {
    dchi(lambda) + 0.5 * (2.0 / lambda).ln()
}

/// Barrier transmission factor `kappa = sqrt(1 + exp(-pi lambda))`.
pub fn kappa(lambda: f64) -> f64 {
    (1.0 + (-PI * lambda).exp()).sqrt()
}
