//! Microwave-induced resonant escape in an rf-SQUID.
//!
//! The crate computes the quasiclassical spectrum of the double-well
//! potential near its barrier top, transition matrix elements from
//! classical trajectories, relaxation rates from an ohmic environment, the
//! steady state under weak microwave driving and finally the escape rate
//! as a function of the applied flux. An independent finite-difference
//! Schrödinger solver is included for validation.

pub mod constants;
pub mod device;
pub mod error;
pub mod kinetics;
pub mod matrix_elements;
pub mod oracle;
pub mod quad;
pub mod roots;
pub mod specfun;
pub mod sweep;
pub mod wkb;

pub use device::{DeviceParams, Geometry, Potential, Scales, Well, WellSide};
pub use error::{Error, Result};
