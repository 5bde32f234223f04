//! CODATA 2018 constants (exact SI values where defined).

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Planck constant, J·s.
pub const H: f64 = 6.626_070_15e-34;
/// Elementary charge, C.
pub const E_CHARGE: f64 = 1.602_176_634e-19;
/// Boltzmann constant, J/K.
pub const K_B: f64 = 1.380_649e-23;
/// Flux quantum h/2e, Wb.
pub const PHI0: f64 = H / (2.0 * E_CHARGE);
