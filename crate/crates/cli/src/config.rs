// SPDX-License-Identifier: Apache-2.0

//! Experiment parameters, from flags or a TOML file.

use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::CliError;
use crate::grid::GridSpec;

/// A number, or `auto` (resolved by calibration).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumOrAuto {
    Num(f64),
    Text(String),
}

impl FromStr for NumOrAuto {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().parse::<f64>() {
            Ok(x) => Ok(NumOrAuto::Num(x)),
            Err(_) if s.trim() == "auto" => Ok(NumOrAuto::Text("auto".into())),
            Err(_) => Err(format!("expected a number or 'auto', got '{s}'")),
        }
    }
}

impl fmt::Display for NumOrAuto {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NumOrAuto::Num(x) => write!(f, "{x}"),
            NumOrAuto::Text(s) => write!(f, "{s}"),
        }
    }
}

impl NumOrAuto {
    /// `None` for `auto`.
    pub fn value(&self, key: &str) -> Result<Option<f64>, CliError> {
        match self {
            NumOrAuto::Num(x) if x.is_finite() => Ok(Some(*x)),
            NumOrAuto::Num(x) => Err(CliError::Config(format!("{key} = {x} is not finite"))),
            NumOrAuto::Text(s) if s == "auto" => Ok(None),
            NumOrAuto::Text(s) => Err(CliError::Config(format!("{key}: expected a number or 'auto', got '{s}'"))),
        }
    }
}

/// Every experiment parameter. Which keys an experiment accepts is listed in
/// [`crate::experiments::Experiment::keys`].
#[derive(clap::Args, Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct Params {
    /// Chain length
    #[arg(long = "L")]
    #[serde(rename = "L")]
    pub length: Option<usize>,
    /// Chain lengths, start:stop[:step] (comma-separated segments allowed)
    #[arg(long = "L-grid")]
    #[serde(rename = "L-grid")]
    pub length_grid: Option<GridSpec>,
    /// odd | even
    #[arg(long)]
    pub parity: Option<String>,
    /// uniform | optimal | double_optimal | custom
    #[arg(long)]
    pub scheme: Option<String>,
    /// Scheme couplings, comma separated (optimal schemes are optimized when omitted)
    #[arg(long, value_delimiter = ',')]
    pub scheme_params: Option<Vec<f64>>,
    /// Center impurity strength, or `auto`
    #[arg(long)]
    pub beta: Option<NumOrAuto>,
    /// Middle-bond ratio of even chains, or `auto`
    #[arg(long)]
    pub eta: Option<NumOrAuto>,
    /// boson | fermion | hardcore
    #[arg(long)]
    pub stats: Option<String>,
    /// On-site interaction U/J
    #[arg(long)]
    pub u: Option<f64>,
    /// Interaction grid
    #[arg(long)]
    pub u_grid: Option<GridSpec>,
    /// Snapshot time
    #[arg(long)]
    pub t: Option<f64>,
    /// Final time of a time series
    #[arg(long)]
    pub t_max: Option<f64>,
    /// Time step of a time series
    #[arg(long)]
    pub t_step: Option<f64>,
    /// Interferometer phase
    #[arg(long)]
    pub phi: Option<f64>,
    /// Interferometer phase grid
    #[arg(long)]
    pub phi_grid: Option<GridSpec>,
    /// Highest Jacobi-Anger order
    #[arg(long)]
    pub order: Option<usize>,
    /// gaussian | walls | curvature
    #[arg(long)]
    pub scan: Option<String>,
    /// Imperfection parameter grid (FWHM, wall strength or trap frequency)
    #[arg(long)]
    pub grid: Option<GridSpec>,
    /// Re-bisect beta for every Gaussian width
    #[arg(long, num_args = 0..=1, default_missing_value = "true")]
    pub recalibrate: Option<bool>,
    /// baseline | per-setting
    #[arg(long)]
    pub tstar: Option<String>,
    /// Third-particle start sites (1-based)
    #[arg(long)]
    pub m_grid: Option<GridSpec>,
    /// chebyshev | eigen
    #[arg(long)]
    pub propagator: Option<String>,
}

impl Params {
    /// Keys that are set, in their config spelling.
    pub fn set_keys(&self) -> Vec<String> {
        self.to_map().into_iter().filter(|(_, v)| !v.is_null()).map(|(k, _)| k).collect()
    }

    fn to_map(&self) -> Map<String, Value> {
        match serde_json::to_value(self) {
            Ok(Value::Object(m)) => m,
            _ => Map::new(),
        }
    }

    /// `self` with every key set in `over` replaced.
    pub fn overlay(&self, over: &Params) -> Params {
        let mut base = self.to_map();
        for (k, v) in over.to_map() {
            if !v.is_null() {
                base.insert(k, v);
            }
        }
        serde_json::from_value(Value::Object(base)).expect("overlay of valid params is valid")
    }

    /// Set keys only, for the provenance echo.
    pub fn echo(&self) -> Value {
        Value::Object(self.to_map().into_iter().filter(|(_, v)| !v.is_null()).collect())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

impl Format {
    pub fn extension(self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Top level of a config file.
#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ConfigFile {
    pub experiment: Option<String>,
    pub output: Option<PathBuf>,
    pub format: Option<Format>,
    pub workers: Option<usize>,
    pub timestamp: Option<bool>,
    #[serde(default)]
    pub params: Params,
}

impl ConfigFile {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Config(format!("cannot read config {}: {e}", path.display())))?;
        Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Config(e.message().to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn strict_keys() {
        assert!(ConfigFile::parse("experiment = \"calibrate\"\nbogus = 1\n").is_err());
        assert!(ConfigFile::parse("[params]\nL = 21\nbetta = 0.9\n").is_err());
        let c = ConfigFile::parse("[params]\nL = 21\nbeta = \"auto\"\nu-grid = \"0:1:0.5\"\nm-grid = [2, 5]\n").unwrap();
        assert_eq!(c.params.length, Some(21));
        assert_eq!(c.params.beta, Some(NumOrAuto::Text("auto".into())));
        assert_eq!(c.params.m_grid.unwrap().integers().unwrap(), vec![2, 5]);
    }

    #[test]
    fn overlay_prefers_override() {
        let flags = Params { length: Some(51), u: Some(1.0), ..Default::default() };
        let file = Params { length: Some(21), ..Default::default() };
        let p = flags.overlay(&file);
        assert_eq!(p.length, Some(21));
        assert_eq!(p.u, Some(1.0));
        assert_eq!(p.set_keys(), vec!["L".to_string(), "u".to_string()]);
    }

    #[test]
    fn beta_parsing() {
        assert_eq!("0.95".parse::<NumOrAuto>().unwrap(), NumOrAuto::Num(0.95));
        assert!("fast".parse::<NumOrAuto>().is_err());
        assert_eq!(NumOrAuto::Text("auto".into()).value("beta").unwrap(), None);
    }
}
