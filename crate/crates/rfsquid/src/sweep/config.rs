//! Line-based `key = value` configuration with dotted section prefixes.

use crate::device::DeviceParams;
use crate::error::{Error, Result};
use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

/// One recognised key.
#[derive(Debug, Clone, Copy)]
pub struct KeySpec {
    pub key: &'static str,
    pub unit: &'static str,
    /// `None` for required keys.
    pub default: Option<&'static str>,
    pub help: &'static str,
}

pub const KEYS: &[KeySpec] = &[
    KeySpec { key: "device.beta_L", unit: "1", default: None, help: "screening parameter 2 pi L Ic / Phi0" },
    KeySpec { key: "device.L", unit: "H", default: None, help: "loop inductance" },
    KeySpec { key: "device.C", unit: "F", default: None, help: "junction capacitance" },
    KeySpec { key: "device.R_eff", unit: "ohm", default: None, help: "effective shunt resistance" },
    KeySpec { key: "device.T", unit: "K", default: None, help: "bath temperature" },
    KeySpec { key: "drive.nu", unit: "Hz", default: Some(""), help: "drive frequencies, comma separated (needed by sweep)" },
    KeySpec { key: "drive.I_amp", unit: "A", default: Some("auto"), help: "drive current amplitude, or auto" },
    KeySpec { key: "drive.target_rho", unit: "1", default: Some("1e-3"), help: "largest population reached with I_amp = auto" },
    KeySpec { key: "sweep.phi_x_min", unit: "1", default: Some("auto"), help: "lower flux bound (auto: crossing - half_width)" },
    KeySpec { key: "sweep.phi_x_max", unit: "1", default: Some("auto"), help: "upper flux bound (auto: crossing + half_width)" },
    KeySpec { key: "sweep.half_width", unit: "1", default: Some("0.005"), help: "flux window around the crossing for auto bounds" },
    KeySpec { key: "sweep.n_points", unit: "1", default: Some("2001"), help: "number of flux points" },
    KeySpec { key: "sweep.seed_phi_x", unit: "1", default: Some("0.332"), help: "flux near which the crossing is searched" },
    KeySpec { key: "sweep.left_level", unit: "1", default: Some("1"), help: "left-well quantum number k1 of the pair" },
    KeySpec { key: "output.csv", unit: "path", default: Some(""), help: "CSV output file" },
    KeySpec { key: "output.svg", unit: "path", default: Some(""), help: "SVG plot of W" },
    KeySpec { key: "validate.levels", unit: "bool", default: Some("true"), help: "compare near-top levels with the grid solver" },
    KeySpec { key: "validate.gap", unit: "bool", default: Some("true"), help: "compare the anticrossing gap" },
    KeySpec { key: "validate.elements", unit: "bool", default: Some("true"), help: "compare matrix elements" },
    KeySpec { key: "validate.harmonic", unit: "bool", default: Some("true"), help: "harmonic-limit checks" },
    KeySpec { key: "validate.level_tol", unit: "hbar Omega_p", default: Some("0.05"), help: "level tolerance" },
    KeySpec { key: "validate.gap_tol", unit: "1", default: Some("0.3"), help: "relative gap tolerance" },
    KeySpec { key: "validate.element_tol", unit: "1", default: Some("0.25"), help: "relative matrix-element tolerance" },
    KeySpec { key: "validate.grid_points", unit: "1", default: Some("4096"), help: "grid-solver points" },
];

/// Renders [`KEYS`] as a help table.
pub fn keys_help() -> String {
    let mut s = String::from("Config keys (key = value, one per line, # starts a comment):\n");
    for k in KEYS {
        let d = match k.default {
            None => "required".to_string(),
            Some("") => "unset".to_string(),
            Some(v) => format!("default {v}"),
        };
        let _ = writeln!(s, "  {:<22} [{}] {} ({d})", k.key, k.unit, k.help);
    }
    s
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Current {
    Auto,
    Amplitude(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct DriveConfig {
    pub nu: Vec<f64>,
    pub current: Current,
    pub target_rho: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridConfig {
    pub phi_x_min: Option<f64>,
    pub phi_x_max: Option<f64>,
    pub half_width: f64,
    pub n_points: usize,
    pub seed_phi_x: f64,
    pub left_level: u32,
}

impl GridConfig {
    /// Flux bounds, filling auto values around `phi_x0`.
    pub fn bounds(&self, phi_x0: f64) -> (f64, f64) {
        (
            self.phi_x_min.unwrap_or(phi_x0 - self.half_width),
            self.phi_x_max.unwrap_or(phi_x0 + self.half_width),
        )
    }

    pub fn points(&self, phi_x0: f64) -> Vec<f64> {
        let (lo, hi) = self.bounds(phi_x0);
        let n = self.n_points;
        (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct OutputConfig {
    pub csv: Option<PathBuf>,
    pub svg: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ValidateConfig {
    pub levels: bool,
    pub gap: bool,
    pub elements: bool,
    pub harmonic: bool,
    pub level_tol: f64,
    pub gap_tol: f64,
    pub element_tol: f64,
    pub grid_points: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub device: DeviceParams,
    pub drive: DriveConfig,
    pub grid: GridConfig,
    pub output: OutputConfig,
    pub validate: ValidateConfig,
}

fn value_err(key: &str, msg: impl Into<String>) -> Error {
    Error::ConfigValue {
        key: key.to_string(),
        msg: msg.into(),
    }
}

struct Values {
    map: BTreeMap<&'static str, String>,
}

impl Values {
    fn raw(&self, key: &str) -> Result<&str> {
        match self.map.get(key) {
            Some(v) => Ok(v.as_str()),
            None => KEYS
                .iter()
                .find(|k| k.key == key)
                .and_then(|k| k.default)
                .ok_or_else(|| Error::MissingKey(key.to_string())),
        }
    }

    fn number(&self, key: &str) -> Result<f64> {
        let v = self.raw(key)?;
        let x: f64 = v
            .parse()
            .map_err(|_| value_err(key, format!("`{v}` is not a number")))?;
        if !x.is_finite() {
            return Err(value_err(key, "must be finite"));
        }
        Ok(x)
    }

    fn positive(&self, key: &str) -> Result<f64> {
        let x = self.number(key)?;
        if x <= 0.0 {
            return Err(value_err(key, format!("{x} must be positive")));
        }
        Ok(x)
    }

    fn optional_number(&self, key: &str) -> Result<Option<f64>> {
        match self.raw(key)? {
            "auto" => Ok(None),
            _ => self.number(key).map(Some),
        }
    }

    fn count(&self, key: &str, min: usize) -> Result<usize> {
        let v = self.raw(key)?;
        let n: usize = v
            .parse()
            .map_err(|_| value_err(key, format!("`{v}` is not a non-negative integer")))?;
        if n < min {
            return Err(value_err(key, format!("{n} is below the minimum {min}")));
        }
        Ok(n)
    }

    fn flag(&self, key: &str) -> Result<bool> {
        match self.raw(key)? {
            "true" | "yes" | "1" => Ok(true),
            "false" | "no" | "0" => Ok(false),
            v => Err(value_err(key, format!("`{v}` is not a boolean"))),
        }
    }

    fn path(&self, key: &str) -> Result<Option<PathBuf>> {
        let v = self.raw(key)?;
        Ok((!v.is_empty()).then(|| PathBuf::from(v)))
    }
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<SweepConfig> {
    let mut map = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        let line_no = i + 1;
        let content = match line.find('#') {
            Some(p) => &line[..p],
            None => line,
        }
        .trim();
        if content.is_empty() {
            continue;
        }
        let (k, v) = content.split_once('=').ok_or_else(|| Error::ConfigSyntax {
            line: line_no,
            msg: format!("expected `key = value`, found `{content}`"),
        })?;
        let (k, v) = (k.trim(), v.trim());
        let spec = KEYS
            .iter()
            .find(|s| s.key == k)
            .ok_or_else(|| Error::UnknownKey(k.to_string()))?;
        if map.insert(spec.key, v.to_string()).is_some() {
            return Err(Error::ConfigSyntax {
                line: line_no,
                msg: format!("key `{k}` given twice"),
            });
        }
    }
    let vals = Values { map };

    let device = DeviceParams {
        beta_l: vals.number("device.beta_L")?,
        inductance: vals.positive("device.L")?,
        capacitance: vals.positive("device.C")?,
        r_eff: vals.positive("device.R_eff")?,
        temperature: vals.number("device.T")?,
    };
    if device.beta_l < 0.0 {
        return Err(value_err("device.beta_L", "must not be negative"));
    }
    if device.temperature < 0.0 {
        return Err(value_err("device.T", "must not be negative"));
    }

    let nu_text = vals.raw("drive.nu")?;
    let mut nu = Vec::new();
    for part in nu_text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let x: f64 = part
            .parse()
            .map_err(|_| value_err("drive.nu", format!("`{part}` is not a number")))?;
        if !(x > 0.0 && x.is_finite()) {
            return Err(value_err("drive.nu", format!("{x} must be positive")));
        }
        nu.push(x);
    }
    let current = match vals.raw("drive.I_amp")? {
        "auto" => Current::Auto,
        _ => {
            let x = vals.number("drive.I_amp")?;
            if x < 0.0 {
                return Err(value_err("drive.I_amp", "must not be negative"));
            }
            Current::Amplitude(x)
        }
    };
    let drive = DriveConfig {
        nu,
        current,
        target_rho: vals.positive("drive.target_rho")?,
    };

    let grid = GridConfig {
        phi_x_min: vals.optional_number("sweep.phi_x_min")?,
        phi_x_max: vals.optional_number("sweep.phi_x_max")?,
        half_width: vals.positive("sweep.half_width")?,
        n_points: vals.count("sweep.n_points", 2)?,
        seed_phi_x: vals.number("sweep.seed_phi_x")?,
        left_level: vals.count("sweep.left_level", 0)? as u32,
    };
    if let (Some(a), Some(b)) = (grid.phi_x_min, grid.phi_x_max) {
        if a >= b {
            return Err(value_err("sweep.phi_x_max", format!("{b} is not above phi_x_min = {a}")));
        }
    }

    let output = OutputConfig {
        csv: vals.path("output.csv")?,
        svg: vals.path("output.svg")?,
    };

    let validate = ValidateConfig {
        levels: vals.flag("validate.levels")?,
        gap: vals.flag("validate.gap")?,
        elements: vals.flag("validate.elements")?,
        harmonic: vals.flag("validate.harmonic")?,
        level_tol: vals.positive("validate.level_tol")?,
        gap_tol: vals.positive("validate.gap_tol")?,
        element_tol: vals.positive("validate.element_tol")?,
        grid_points: vals.count("validate.grid_points", crate::oracle::MIN_POINTS)?,
    };

    Ok(SweepConfig {
        device,
        drive,
        grid,
        output,
        validate,
    })
}

pub fn read_config(path: &std::path::Path) -> Result<SweepConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_config(&text)
}

fn opt(x: Option<f64>) -> String {
    x.map_or("auto".to_string(), |v| format!("{v:e}"))
}

impl SweepConfig {
    /// The reference device with the given drive frequencies.
    pub fn reference(nu: &[f64]) -> Self {
        let mut text = String::from(
            "device.beta_L = 1.75\ndevice.L = 210e-12\ndevice.C = 0.1e-12\ndevice.R_eff = 8e6\ndevice.T = 0.05\n",
        );
        if !nu.is_empty() {
            let list: Vec<String> = nu.iter().map(|x| format!("{x:e}")).collect();
            let _ = writeln!(text, "drive.nu = {}", list.join(", "));
        }
        parse_config(&text).expect("reference config is valid")
    }

    /// Every key with its effective value, defaults included; parses back
    /// to the same configuration.
    pub fn to_text(&self) -> String {
        let d = &self.device;
        let g = &self.grid;
        let v = &self.validate;
        let nu: Vec<String> = self.drive.nu.iter().map(|x| format!("{x:e}")).collect();
        let path = |p: &Option<PathBuf>| p.as_ref().map_or(String::new(), |p| p.display().to_string());
        let current = match self.drive.current {
            Current::Auto => "auto".to_string(),
            Current::Amplitude(a) => format!("{a:e}"),
        };
        let pairs = [
            ("device.beta_L", format!("{:e}", d.beta_l)),
            ("device.L", format!("{:e}", d.inductance)),
            ("device.C", format!("{:e}", d.capacitance)),
            ("device.R_eff", format!("{:e}", d.r_eff)),
            ("device.T", format!("{:e}", d.temperature)),
            ("drive.nu", nu.join(", ")),
            ("drive.I_amp", current),
            ("drive.target_rho", format!("{:e}", self.drive.target_rho)),
            ("sweep.phi_x_min", opt(g.phi_x_min)),
            ("sweep.phi_x_max", opt(g.phi_x_max)),
            ("sweep.half_width", format!("{:e}", g.half_width)),
            ("sweep.n_points", g.n_points.to_string()),
            ("sweep.seed_phi_x", format!("{:e}", g.seed_phi_x)),
            ("sweep.left_level", g.left_level.to_string()),
            ("output.csv", path(&self.output.csv)),
            ("output.svg", path(&self.output.svg)),
            ("validate.levels", v.levels.to_string()),
            ("validate.gap", v.gap.to_string()),
            ("validate.elements", v.elements.to_string()),
            ("validate.harmonic", v.harmonic.to_string()),
            ("validate.level_tol", format!("{:e}", v.level_tol)),
            ("validate.gap_tol", format!("{:e}", v.gap_tol)),
            ("validate.element_tol", format!("{:e}", v.element_tol)),
            ("validate.grid_points", v.grid_points.to_string()),
        ];
        let mut s = String::new();
        for (k, v) in pairs {
            let _ = writeln!(s, "{k} = {v}");
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const BASE: &str = "device.beta_L = 1.75\ndevice.L = 210e-12\ndevice.C = 0.1e-12\n\
                        device.R_eff = 8e6\ndevice.T = 0.05\n";

    #[test]
    fn reads_values_and_defaults() {
        let c = parse_config(&format!("# paper device\n{BASE}drive.nu = 25.756e9, 26e9 # two\n")).unwrap();
        assert_eq!(c.device.beta_l, 1.75);
        assert_eq!(c.drive.nu, vec![25.756e9, 26e9]);
        assert_eq!(c.drive.current, Current::Auto);
        assert_eq!(c.grid.n_points, 2001);
        assert_eq!(c.grid.phi_x_min, None);
        assert!(c.validate.levels);
    }

    #[test]
    fn missing_key_is_named() {
        let text = BASE.replace("device.C = 0.1e-12\n", "");
        match parse_config(&text) {
            Err(Error::MissingKey(k)) => assert_eq!(k, "device.C"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn range_errors_name_the_key() {
        let text = BASE.replace("device.L = 210e-12", "device.L = -1");
        match parse_config(&text) {
            Err(Error::ConfigValue { key, .. }) => assert_eq!(key, "device.L"),
            other => panic!("{other:?}"),
        }
        let text = format!("{BASE}sweep.n_points = 1\n");
        assert!(matches!(parse_config(&text), Err(Error::ConfigValue { .. })));
        let text = format!("{BASE}sweep.phi_x_min = 0.4\nsweep.phi_x_max = 0.3\n");
        assert!(matches!(parse_config(&text), Err(Error::ConfigValue { .. })));
    }

    #[test]
    fn syntax_errors_carry_line_numbers() {
        let text = format!("{BASE}\nthis is not a pair\n");
        match parse_config(&text) {
            Err(Error::ConfigSyntax { line, .. }) => assert_eq!(line, 7),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_and_duplicate_keys_are_rejected() {
        assert!(matches!(
            parse_config(&format!("{BASE}device.Lx = 1\n")),
            Err(Error::UnknownKey(_))
        ));
        assert!(matches!(
            parse_config(&format!("{BASE}device.T = 0.1\n")),
            Err(Error::ConfigSyntax { .. })
        ));
    }

    #[test]
    fn text_round_trip() {
        let mut c = SweepConfig::reference(&[25.756e9]);
        c.grid.phi_x_min = Some(0.34);
        c.output.csv = Some("out.csv".into());
        c.drive.current = Current::Amplitude(2e-9);
        assert_eq!(parse_config(&c.to_text()).unwrap(), c);
    }

    #[test]
    fn help_lists_every_key() {
        let h = keys_help();
        for k in KEYS {
            assert!(h.contains(k.key));
        }
    }
}
