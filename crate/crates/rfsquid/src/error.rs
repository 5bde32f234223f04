use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("parameter `{name}` = {value} is outside its domain ({reason})")]
    ParameterDomain {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
    #[error("potential is not bistable at phi_x = {phi_x}")]
    BistabilityLost { phi_x: f64 },
    #[error("energy {energy} is outside ({lo}, {hi})")]
    EnergyDomain { energy: f64, lo: f64, hi: f64 },
    #[error("turning points merge at the barrier top (energy {energy})")]
    DegenerateTurningPoint { energy: f64 },
    #[error("expected at least {needed} levels in the window, found {found}")]
    NotEnoughLevels { needed: usize, found: usize },
    #[error("no level crossing: {0}")]
    NoCrossing(String),
    #[error("root finder failed: {0}")]
    RootNotFound(String),
    #[error("resonance condition violated: |{lhs:e} - {rhs:e}| exceeds {limit:e}")]
    ResonanceMismatch { lhs: f64, rhs: f64, limit: f64 },
    #[error("kinetic system is degenerate (gamma1*gamma2 - W12*W21/4 = {0:e})")]
    DegenerateKinetics(f64),
    #[error("oracle did not converge: {0}")]
    OracleConvergence(String),
    #[error("config line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },
    #[error("config key `{0}` is required")]
    MissingKey(String),
    #[error("config key `{0}` is not recognised")]
    UnknownKey(String),
    #[error("config key `{key}`: {msg}")]
    ConfigValue { key: String, msg: String },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
