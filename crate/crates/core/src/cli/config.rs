//! Flat `key = value` run configuration.
//!
//! ```text
//! # comments start with '#'
//! geometry.R_angstrom = 500
//! geometry.a_angstrom = 250
//! model = layer
//! confinement.kind = hardwall_centered
//! confinement.L_angstrom = 25
//! ```

use std::collections::BTreeMap;
use std::path::PathBuf;
use std::str::FromStr;

use crate::basis::{BasisSpec, Confinement, Model, OscillatorExponent, Parity};
use crate::error::{Error, Result};
use crate::geometry::TorusGeometry;
use crate::spectra::{QuadratureConfig, SolveConfig, TABLE_N_THETA_LAYER, TABLE_N_THETA_SURFACE};

pub const KEYS: [&str; 15] = [
    "geometry.R_angstrom",
    "geometry.a_angstrom",
    "model",
    "confinement.kind",
    "confinement.L_angstrom",
    "confinement.omega_inv_ang2",
    "confinement.oscillator_exponent",
    "basis.n_theta",
    "basis.n_q",
    "basis.m",
    "basis.parity",
    "quadrature.n_theta",
    "quadrature.n_q",
    "quadrature.sigma_multiple",
    "mode.table_reproduction",
];

pub const DEFAULT_MAJOR_RADIUS: f64 = 500.0;
pub const DEFAULT_MINOR_RADIUS: f64 = 250.0;

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: String,
    /// `None` for command-line overrides.
    line: Option<usize>,
}

/// Raw settings after merging the config file with `--set` overrides.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    entries: BTreeMap<String, Entry>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
    Text,
}

impl FromStr for OutputFormat {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            "text" => Ok(OutputFormat::Text),
            other => Err(Error::config("--format", None, format!("unknown output format `{other}` (csv|json|text)"))),
        }
    }
}

/// Everything a command needs: settings, output format and destination.
#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub settings: Settings,
    pub format: OutputFormat,
    pub out: Option<PathBuf>,
}

fn check_key(key: &str, line: Option<usize>) -> Result<()> {
    if KEYS.contains(&key) {
        Ok(())
    } else {
        Err(Error::config(key, line, "unknown key"))
    }
}

/// Parses config text (if any) and applies `key=value` overrides on top.
pub fn parse_config(text: Option<&str>, overrides: &[String]) -> Result<Settings> {
    let mut settings = Settings::default();
    if let Some(text) = text {
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let content = raw.split('#').next().unwrap_or("").trim();
            if content.is_empty() {
                continue;
            }
            let (key, value) = content
                .split_once('=')
                .ok_or_else(|| Error::config(content, Some(line), "expected `key = value`"))?;
            let key = key.trim();
            check_key(key, Some(line))?;
            if settings.entries.contains_key(key) {
                return Err(Error::config(key, Some(line), "key given twice"));
            }
            settings.entries.insert(
                key.to_string(),
                Entry {
                    value: value.trim().to_string(),
                    line: Some(line),
                },
            );
        }
    }
    for ov in overrides {
        settings.set_override(ov)?;
    }
    Ok(settings)
}

impl Settings {
    /// Applies one `key=value` override.
    pub fn set_override(&mut self, assignment: &str) -> Result<()> {
        let (key, value) = assignment
            .split_once('=')
            .ok_or_else(|| Error::config(assignment, None, "override must look like key=value"))?;
        let key = key.trim();
        check_key(key, None)?;
        self.entries.insert(
            key.to_string(),
            Entry {
                value: value.trim().to_string(),
                line: None,
            },
        );
        Ok(())
    }

    fn raw(&self, key: &str) -> Option<&Entry> {
        self.entries.get(key)
    }

    fn get<T: FromStr>(&self, key: &str) -> Result<Option<T>> {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => e
                .value
                .parse::<T>()
                .map(Some)
                .map_err(|_| Error::config(key, e.line, format!("cannot parse `{}` as {}", e.value, std::any::type_name::<T>()))),
        }
    }

    fn get_enum<T>(&self, key: &str, choices: &[(&str, T)]) -> Result<Option<T>>
    where
        T: Copy,
    {
        match self.raw(key) {
            None => Ok(None),
            Some(e) => choices
                .iter()
                .find(|(name, _)| *name == e.value)
                .map(|&(_, v)| Some(v))
                .ok_or_else(|| {
                    let names: Vec<&str> = choices.iter().map(|(n, _)| *n).collect();
                    Error::config(key, e.line, format!("`{}` is not one of {}", e.value, names.join("|")))
                }),
        }
    }

    fn line(&self, key: &str) -> Option<usize> {
        self.raw(key).and_then(|e| e.line)
    }

    pub fn geometry(&self) -> Result<TorusGeometry> {
        let major = self.get::<f64>("geometry.R_angstrom")?.unwrap_or(DEFAULT_MAJOR_RADIUS);
        let minor = self.get::<f64>("geometry.a_angstrom")?.unwrap_or(DEFAULT_MINOR_RADIUS);
        TorusGeometry::new(major, minor).map_err(|e| {
            let key = if major > 0.0 && major.is_finite() { "geometry.a_angstrom" } else { "geometry.R_angstrom" };
            let msg = match e {
                Error::Domain(m) => m,
                other => other.to_string(),
            };
            Error::config(key, self.line(key), format!("violates 0 < a < R: {msg}"))
        })
    }

    pub fn model(&self) -> Result<Model> {
        self.get_enum(
            "model",
            &[
                ("layer", Model::Layer),
                ("surface_hard_constraint", Model::SurfaceHardConstraint),
                ("surface_bare", Model::SurfaceBare),
            ],
        )?
        .ok_or_else(|| Error::config("model", None, "missing required key"))
    }

    fn confinement(&self) -> Result<Confinement> {
        let kind = self
            .get_enum(
                "confinement.kind",
                &[
                    ("hardwall_centered", 0u8),
                    ("hardwall_offset", 1),
                    ("oscillator", 2),
                ],
            )?
            .ok_or_else(|| Error::config("confinement.kind", None, "missing required key for the layer model"))?;
        let wrap = |key: &'static str| {
            let line = self.line(key);
            move |e: Error| Error::config(key, line, e.to_string())
        };
        match kind {
            0 | 1 => {
                let width = self
                    .get::<f64>("confinement.L_angstrom")?
                    .ok_or_else(|| Error::config("confinement.L_angstrom", None, "hard-wall confinement needs a width"))?;
                let c = if kind == 0 {
                    Confinement::hardwall_centered(width)
                } else {
                    Confinement::hardwall_offset(width)
                };
                c.map_err(wrap("confinement.L_angstrom"))
            }
            _ => {
                let omega = self
                    .get::<f64>("confinement.omega_inv_ang2")?
                    .ok_or_else(|| Error::config("confinement.omega_inv_ang2", None, "oscillator confinement needs omega"))?;
                let exponent = self
                    .get_enum(
                        "confinement.oscillator_exponent",
                        &[("paper", OscillatorExponent::Paper), ("physical", OscillatorExponent::Physical)],
                    )?
                    .unwrap_or(OscillatorExponent::Physical);
                Confinement::oscillator(omega, exponent).map_err(wrap("confinement.omega_inv_ang2"))
            }
        }
    }

    /// Fully resolved solver configuration with defaults filled in.
    pub fn solve_config(&self) -> Result<SolveConfig> {
        let geom = self.geometry()?;
        let model = self.model()?;
        let table = self.get::<bool>("mode.table_reproduction")?.unwrap_or(false);
        let confinement = if model == Model::Layer { Some(self.confinement()?) } else { None };
        let default_theta = if table && model.is_surface() { TABLE_N_THETA_SURFACE } else { TABLE_N_THETA_LAYER };
        let n_theta = self.get::<usize>("basis.n_theta")?.unwrap_or(default_theta);
        let n_q = if model.is_surface() { 1 } else { self.get::<usize>("basis.n_q")?.unwrap_or(2) };
        let m = self.get::<i32>("basis.m")?.unwrap_or(0);
        let parity = self
            .get_enum("basis.parity", &[("even", Parity::Even), ("odd", Parity::Odd)])?
            .unwrap_or(Parity::Even);
        let defaults = QuadratureConfig::default();
        let quadrature = QuadratureConfig {
            n_theta: self.get("quadrature.n_theta")?.unwrap_or(defaults.n_theta),
            n_q: self.get("quadrature.n_q")?.unwrap_or(defaults.n_q),
            sigma_multiple: self.get("quadrature.sigma_multiple")?.unwrap_or(defaults.sigma_multiple),
        };
        let mut cfg = SolveConfig::new(geom, confinement, BasisSpec::new(model, n_theta, n_q, m, parity));
        cfg.quadrature = quadrature;
        cfg.table_reproduction = table;
        cfg.validate().map_err(|e| Error::config("basis", None, e.to_string()))?;
        Ok(cfg)
    }
}

/// `(key, value)` pairs describing a resolved config, defaults included.
pub fn resolved_entries(cfg: &SolveConfig) -> Vec<(&'static str, String)> {
    let mut out = vec![
        ("geometry.R_angstrom", cfg.geometry.major_radius.to_string()),
        ("geometry.a_angstrom", cfg.geometry.minor_radius.to_string()),
        ("model", cfg.model().as_str().to_string()),
    ];
    if let Some(conf) = cfg.confinement {
        out.push(("confinement.kind", conf.kind_str().to_string()));
        match conf {
            Confinement::HardwallCentered { width } | Confinement::HardwallOffset { width } => {
                out.push(("confinement.L_angstrom", width.to_string()));
            }
            Confinement::Oscillator { omega, exponent } => {
                out.push(("confinement.omega_inv_ang2", omega.to_string()));
                out.push(("confinement.oscillator_exponent", exponent.as_str().to_string()));
            }
        }
    }
    out.push(("basis.n_theta", cfg.basis.n_theta.to_string()));
    if !cfg.model().is_surface() {
        out.push(("basis.n_q", cfg.basis.n_q.to_string()));
    }
    out.push(("basis.m", cfg.basis.m.to_string()));
    out.push(("basis.parity", cfg.basis.parity.as_str().to_string()));
    out.push(("quadrature.n_theta", cfg.quadrature.n_theta.to_string()));
    if !cfg.model().is_surface() {
        out.push(("quadrature.n_q", cfg.quadrature.n_q.to_string()));
        out.push(("quadrature.sigma_multiple", cfg.quadrature.sigma_multiple.to_string()));
    }
    out.push(("mode.table_reproduction", cfg.table_reproduction.to_string()));
    out
}
