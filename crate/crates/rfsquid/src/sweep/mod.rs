//! Flux sweeps: configuration, per-point evaluation, peak analysis and
//! output.

pub mod config;
pub mod output;
pub mod peaks;
pub mod pipeline;
pub mod run;
pub mod validate;

pub use config::{parse_config, read_config, Current, SweepConfig};
pub use output::{emit_csv, emit_svg, read_csv};
pub use peaks::{detect_peaks, refine_peaks, Classification, Peak, PeakKind, PeakReport, Sample};
pub use pipeline::{Device, PointKinetics, PointSpectrum};
pub use run::{analyse, build_device, run_levels, run_sweep, run_sweep_with, Execution, Spectra, SweepOutput, SweepRow};
pub use validate::{validate_command, validate_with, Check, ValidationReport};
