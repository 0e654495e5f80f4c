//! Settings resolution: defaults, then the config file, then flags.

use std::path::{Path, PathBuf};

use clap::{Args, ValueEnum};
use confdec_core::constants::UnitSystem;
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use serde_json::{Map, Value};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl OutputFormat {
    pub fn extension(self) -> &'static str {
        match self {
            OutputFormat::Csv => "csv",
            OutputFormat::Json => "json",
        }
    }
}

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct GlobalArgs {
    /// TOML file with top-level settings and a table per command.
    #[arg(long, global = true)]
    #[serde(skip)]
    pub config: Option<PathBuf>,
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// natural (c = hbar = 1) or si.
    #[arg(long, global = true, value_parser = parse_units)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub units: Option<UnitSystem>,
    #[arg(long, global = true, value_enum)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub format: Option<OutputFormat>,
    /// Output directory.
    #[arg(long, global = true)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
}

fn parse_units(s: &str) -> Result<UnitSystem, String> {
    s.parse()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    pub seed: u64,
    pub units: UnitSystem,
    pub format: OutputFormat,
    pub out: PathBuf,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            seed: 42,
            units: UnitSystem::Natural,
            format: OutputFormat::Csv,
            out: PathBuf::from("confdec-out"),
        }
    }
}

const GLOBAL_KEYS: [&str; 4] = ["seed", "units", "format", "out"];

fn to_object(value: Value) -> Map<String, Value> {
    match value {
        Value::Object(map) => map,
        _ => Map::new(),
    }
}

fn read_config_file(path: &Path) -> CliResult<Map<String, Value>> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Usage(format!("cannot read config {}: {e}", path.display())))?;
    let value: Value = toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
    Ok(to_object(value))
}

fn deserialize<T: DeserializeOwned>(map: Map<String, Value>, what: &str) -> CliResult<T> {
    serde_json::from_value(Value::Object(map)).map_err(|e| CliError::Usage(format!("{what}: {e}")))
}

/// Merges defaults, the `[command]` table and top-level keys of the config
/// file, and the flags that were given (flags win).
pub fn resolve<A: Serialize, C: DeserializeOwned>(
    command: &str,
    global: &GlobalArgs,
    args: &A,
) -> CliResult<(Settings, C)> {
    let mut settings = Map::new();
    let mut params = Map::new();
    if let Some(path) = &global.config {
        for (key, value) in read_config_file(path)? {
            if GLOBAL_KEYS.contains(&key.as_str()) {
                settings.insert(key, value);
            } else if key == command {
                params.extend(to_object(value));
            } else if !value.is_object() {
                return Err(CliError::Usage(format!("config: unknown top-level key `{key}`")));
            }
        }
    }
    settings.extend(to_object(serde_json::to_value(global)?));
    params.extend(to_object(serde_json::to_value(args)?));
    Ok((deserialize(settings, "settings")?, deserialize(params, command)?))
}

/// Everything needed to reproduce a run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub command: String,
    pub version: String,
    pub unit_mode: UnitSystem,
    pub seed: u64,
    pub format: OutputFormat,
    pub config: Value,
}
