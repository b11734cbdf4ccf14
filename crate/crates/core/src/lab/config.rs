//! TOML run configuration.
//!
//! ```toml
//! [gas]            # gamma, K, c_v, m
//! [domain]         # b1, b2, t0, resolution, derivatives
//! [family]         # kind = "constant" | "ramp" | "compression-bump" | "steady", parameters
//! [solver]         # cfl, n_cells, scheme_order, blowup_threshold, sonic_floor, stride, output_times, max_steps
//! [checks]         # check_a4, grid_constant, drift_const, roundoff, enabled
//! [fv]             # enabled, n_cells, cfl, order
//! [theorem]        # horizon
//! [[sweep.axes]]   # key = "family.amplitude", values = [...]
//! ```
//!
//! Only `[gas]`, `[domain]` and `[family]` are required. After a run every
//! default is written back into the manifest's `[config]` table.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::characteristics::SolverConfig;
use crate::error::{Error, Result};
use crate::fv::FvConfig;
use crate::gas::GasModel;
use crate::initial::{DerivativeMode, Family, FamilyDescriptor};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DomainConfig {
    pub b1: f64,
    pub b2: f64,
    pub t0: f64,
    #[serde(default = "default_resolution")]
    pub resolution: usize,
    #[serde(default)]
    pub derivatives: DerivativeMode,
}

fn default_resolution() -> usize {
    256
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckGroup {
    InvariantDomain,
    CoefficientSigns,
    GradientBounds,
    DensityFloor,
    EntropyTransport,
    /// Fails the run only for counterexample candidates.
    Blowup,
}

impl CheckGroup {
    pub const ALL: [CheckGroup; 6] = [
        CheckGroup::InvariantDomain,
        CheckGroup::CoefficientSigns,
        CheckGroup::GradientBounds,
        CheckGroup::DensityFloor,
        CheckGroup::EntropyTransport,
        CheckGroup::Blowup,
    ];
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChecksConfig {
    /// Apply the rarefactive bounds when A4 holds.
    #[serde(default = "yes")]
    pub check_a4: bool,
    /// ε_grid = grid_constant · Δr.
    #[serde(default = "one")]
    pub grid_constant: f64,
    /// Allowed S̃_ξ variation along particle paths per unit Δr.
    #[serde(default = "one")]
    pub drift_const: f64,
    #[serde(default = "roundoff")]
    pub roundoff: f64,
    #[serde(default = "all_checks")]
    pub enabled: Vec<CheckGroup>,
}

fn yes() -> bool {
    true
}
fn one() -> f64 {
    1.0
}
fn roundoff() -> f64 {
    crate::verify::ROUNDOFF
}
fn all_checks() -> Vec<CheckGroup> {
    CheckGroup::ALL.to_vec()
}

impl Default for ChecksConfig {
    fn default() -> Self {
        ChecksConfig { check_a4: true, grid_constant: 1.0, drift_const: 1.0, roundoff: roundoff(), enabled: all_checks() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FvSection {
    #[serde(default)]
    pub enabled: bool,
    #[serde(default = "fv_cells")]
    pub n_cells: usize,
    #[serde(default = "fv_cfl")]
    pub cfl: f64,
    #[serde(default = "fv_order")]
    pub order: u8,
}

fn fv_cells() -> usize {
    FvConfig::default().n_cells
}
fn fv_cfl() -> f64 {
    FvConfig::default().cfl
}
fn fv_order() -> u8 {
    FvConfig::default().order
}

impl Default for FvSection {
    fn default() -> Self {
        FvSection { enabled: false, n_cells: fv_cells(), cfl: fv_cfl(), order: fv_order() }
    }
}

impl FvSection {
    pub fn fv_config(&self) -> FvConfig {
        FvConfig { n_cells: self.n_cells, cfl: self.cfl, order: self.order }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TheoremConfig {
    /// Horizon T of the blowup comparison; T0/2 when absent.
    #[serde(default)]
    pub horizon: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepAxis {
    /// Dotted path into the config, e.g. `family.amplitude`.
    pub key: String,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    #[serde(default)]
    pub axes: Vec<SweepAxis>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LabConfig {
    pub gas: GasModel,
    pub domain: DomainConfig,
    pub family: Family,
    #[serde(default)]
    pub solver: SolverConfig,
    #[serde(default)]
    pub checks: ChecksConfig,
    #[serde(default)]
    pub fv: FvSection,
    #[serde(default)]
    pub theorem: TheoremConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

/// Command-line overrides applied after parsing.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Overrides {
    pub resolution: Option<usize>,
    pub check_a4: Option<bool>,
}

impl LabConfig {
    pub fn parse(text: &str) -> Result<Self> {
        let table: toml::Table = toml::from_str(text).map_err(config_error)?;
        if table.contains_key("manifest") {
            return Self::from_table(table);
        }
        // straight from the text so errors carry line numbers
        let cfg: LabConfig = toml::from_str(text).map_err(config_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    /// Accepts either a config file or a manifest (whose `[config]` table is
    /// used).
    pub fn from_table(mut table: toml::Table) -> Result<Self> {
        if table.contains_key("manifest") {
            match table.remove("config") {
                Some(toml::Value::Table(t)) => table = t,
                _ => return Err(Error::Config { key: "config".into(), msg: "manifest has no [config] table".into() }),
            }
        }
        let cfg: LabConfig = toml::Value::Table(table).try_into().map_err(config_error)?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn apply(&mut self, o: &Overrides) {
        if let Some(n) = o.resolution {
            self.domain.resolution = n;
            self.solver.n_cells = n;
        }
        if let Some(a4) = o.check_a4 {
            self.checks.check_a4 = a4;
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |key: &str, msg: &str| Err(Error::Config { key: key.into(), msg: msg.into() });
        if !(self.domain.t0 > 0.0) {
            return bad("domain.t0", "must be positive");
        }
        if self.domain.resolution < 2 {
            return bad("domain.resolution", "need at least 2 cells");
        }
        if !(self.checks.grid_constant >= 0.0 && self.checks.drift_const >= 0.0 && self.checks.roundoff >= 0.0) {
            return bad("checks", "tolerance constants must be non-negative");
        }
        if let Some(t) = self.theorem.horizon {
            if !(t > 0.0 && t <= self.domain.t0) {
                return bad("theorem.horizon", "must lie in (0, t0]");
            }
        }
        for a in &self.sweep.axes {
            if a.values.is_empty() {
                return bad(&format!("sweep.axes.{}", a.key), "no values");
            }
        }
        self.solver.validate()
    }

    pub fn descriptor(&self) -> FamilyDescriptor {
        FamilyDescriptor {
            family: self.family.clone(),
            b1: self.domain.b1,
            b2: self.domain.b2,
            resolution: self.domain.resolution,
            derivatives: self.domain.derivatives,
        }
    }

    pub fn horizon(&self) -> f64 {
        self.theorem.horizon.unwrap_or(0.5 * self.domain.t0)
    }

    pub fn to_table(&self) -> Result<toml::Table> {
        toml::Table::try_from(self).map_err(|e| Error::Config { key: "config".into(), msg: e.to_string() })
    }

    /// Copy with the dotted `key` set to `value`.
    pub fn with_value(&self, key: &str, value: f64) -> Result<Self> {
        let mut table = self.to_table()?;
        let parts: Vec<&str> = key.split('.').collect();
        let (last, path) = parts.split_last().ok_or_else(|| Error::Config { key: key.into(), msg: "empty key".into() })?;
        let mut cur = &mut table;
        for p in path {
            cur = match cur.get_mut(*p) {
                Some(toml::Value::Table(t)) => t,
                _ => return Err(Error::Config { key: key.into(), msg: format!("no table `{p}`") }),
            };
        }
        let v = match cur.get(*last) {
            Some(toml::Value::Integer(_)) if value.fract() == 0.0 => toml::Value::Integer(value as i64),
            _ => toml::Value::Float(value),
        };
        cur.insert(last.to_string(), v);
        toml::Value::Table(table).try_into().map_err(config_error)
    }
}

fn config_error(e: toml::de::Error) -> Error {
    let msg = e.message().to_string();
    let key = msg
        .split('`')
        .nth(1)
        .map(String::from)
        .unwrap_or_else(|| "config".into());
    let at = e.span().map(|s| format!(" (bytes {}..{})", s.start, s.end)).unwrap_or_default();
    Error::Config { key, msg: format!("{}{at}", e.to_string().trim()) }
}
