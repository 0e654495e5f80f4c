//! One module per subcommand. Each has a clap argument struct whose fields
//! are all optional and a resolved configuration that is recorded in the
//! manifest.

pub mod bound;
pub mod evolve;
pub mod field;
pub mod kernel;
pub mod mc;

use std::path::Path;

use confdec_core::constants::UnitSystem;
use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::Value;

use crate::config::{Manifest, Settings};
use crate::error::{CliError, CliResult};
use crate::output::{read_manifest, OutputDir};

type Runner<C> = fn(&Settings, &C, &OutputDir) -> CliResult<()>;

/// Writes the manifest, then runs the command.
pub fn execute<C: Serialize>(command: &str, settings: &Settings, config: &C, run: Runner<C>) -> CliResult<()> {
    let mut settings = settings.clone();
    if command == "bound" {
        settings.units = UnitSystem::SI;
    }
    let out = OutputDir::create(&settings)?;
    out.manifest(&Manifest {
        command: command.to_string(),
        version: confdec_core::VERSION.to_string(),
        unit_mode: settings.units,
        seed: settings.seed,
        format: settings.format,
        config: serde_json::to_value(config)?,
    })?;
    run(&settings, config, &out)
}

fn execute_value<C: Serialize + DeserializeOwned>(
    command: &str,
    settings: &Settings,
    config: Value,
    run: Runner<C>,
) -> CliResult<()> {
    let config: C = serde_json::from_value(config).map_err(|e| CliError::Usage(format!("manifest config: {e}")))?;
    execute(command, settings, &config, run)
}

/// Re-runs the command recorded in a manifest, writing into `out`.
pub fn replay(manifest_path: &Path, out: &Path) -> CliResult<()> {
    let m: Manifest = read_manifest(manifest_path)?;
    if m.version != confdec_core::VERSION {
        log::warn!(
            "manifest written by version {}, running {}",
            m.version,
            confdec_core::VERSION
        );
    }
    let settings = Settings {
        seed: m.seed,
        units: m.unit_mode,
        format: m.format,
        out: out.to_path_buf(),
    };
    match m.command.as_str() {
        "field" => execute_value(&m.command, &settings, m.config, field::run),
        "mc" => execute_value(&m.command, &settings, m.config, mc::run),
        "kernel" => execute_value(&m.command, &settings, m.config, kernel::run),
        "evolve" => execute_value(&m.command, &settings, m.config, evolve::run),
        "bound" => execute_value(&m.command, &settings, m.config, bound::run),
        other => Err(CliError::Usage(format!("manifest names unknown command `{other}`"))),
    }
}

/// Reads a two-column `lag,value` table (header row optional).
pub fn read_g1_table(path: &Path) -> CliResult<Vec<(f64, f64)>> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .from_path(path)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let parsed: Result<Vec<f64>, _> = record.iter().map(str::parse::<f64>).collect();
        match parsed {
            Ok(v) if v.len() == 2 => rows.push((v[0], v[1])),
            Err(_) if i == 0 => continue,
            _ => {
                return Err(CliError::Usage(format!(
                    "{} line {}: expected two numeric columns",
                    path.display(),
                    i + 1
                )))
            }
        }
    }
    Ok(rows)
}
