use std::io::BufReader;
use std::path::PathBuf;

use clap::Args;
use confdec_core::constants::PhysicalConstants;
use confdec_core::kernel::{evolve_pure_decoherence, evolve_with_free_hamiltonian, io, DensityMatrix, GrwParams};
use serde::{Deserialize, Serialize};

use crate::config::{OutputFormat, Settings};
use crate::error::{CliError, CliResult};
use crate::output::{OutputDir, Report};

#[derive(Debug, Clone, Default, Args, Serialize)]
pub struct EvolveArgs {
    /// Density matrix file (`.json`, otherwise CSV).
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input: Option<PathBuf>,
    /// Evolution time.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    /// Localization rate.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    /// Localization strength; the kernel is `exp(-alpha dx^2 / 4)`.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub alpha: Option<f64>,
    /// Particle mass; enables free kinetic evolution by split steps.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mass: Option<f64>,
    /// Number of split steps.
    #[arg(long)]
    #[serde(skip_serializing_if = "Option::is_none")]
    pub steps: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct EvolveConfig {
    pub input: Option<PathBuf>,
    pub t: Option<f64>,
    pub lambda: Option<f64>,
    pub alpha: Option<f64>,
    pub mass: Option<f64>,
    pub steps: usize,
}

impl Default for EvolveConfig {
    fn default() -> Self {
        Self {
            input: None,
            t: None,
            lambda: None,
            alpha: None,
            mass: None,
            steps: 100,
        }
    }
}

fn required<T: Copy>(value: Option<T>, flag: &str) -> CliResult<T> {
    value.ok_or_else(|| CliError::Usage(format!("evolve needs --{flag}")))
}

fn read_matrix(path: &PathBuf) -> CliResult<DensityMatrix> {
    let file =
        std::fs::File::open(path).map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
    let is_json = path.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    Ok(if is_json {
        io::from_json(&std::io::read_to_string(file)?)?
    } else {
        io::read_csv(BufReader::new(file))?
    })
}

/// Sum of `|rho(x, x')|` over pairs on opposite sides of the mean position.
fn cross_block_weight(rho: &DensityMatrix, center: f64) -> f64 {
    let n = rho.n();
    let mut total = 0.0;
    for i in 0..n {
        for j in 0..n {
            if (rho.x(i) - center) * (rho.x(j) - center) < 0.0 {
                total += rho.get(i, j).norm();
            }
        }
    }
    total
}

pub fn run(settings: &Settings, cfg: &EvolveConfig, out: &OutputDir) -> CliResult<()> {
    let path = cfg
        .input
        .clone()
        .ok_or_else(|| CliError::Usage("evolve needs --input".into()))?;
    let t = required(cfg.t, "t")?;
    if !(t >= 0.0) {
        return Err(CliError::Usage(format!("--t must be non-negative, got {t}")));
    }
    let grw = GrwParams::new(required(cfg.lambda, "lambda")?, required(cfg.alpha, "alpha")?)?;
    let k = PhysicalConstants::<f64>::for_units(settings.units);
    let rho = read_matrix(&path)?;
    let evolved = match cfg.mass {
        Some(mass) => {
            if cfg.steps == 0 {
                return Err(CliError::Usage("--steps must be positive".into()));
            }
            evolve_with_free_hamiltonian(&rho, &grw, mass, &k, t / cfg.steps as f64, cfg.steps)?
        }
        None => evolve_pure_decoherence(&rho, &grw, t),
    };

    let lu = settings.units.length_label();
    match out.format() {
        OutputFormat::Csv => {
            let file = std::fs::File::create(out.path("rho.csv"))?;
            io::write_csv(std::io::BufWriter::new(file), &evolved, lu)?;
        }
        OutputFormat::Json => std::fs::write(out.path("rho.json"), io::to_json(&evolved) + "\n")?,
    }

    let before = rho.invariants();
    let after = evolved.invariants();
    let center = rho.position_mean();
    let initial = cross_block_weight(&rho, center);
    let mut report = Report::new(cfg, k)?;
    report.result("input_invariants", before)?;
    report.result("invariants", after)?;
    report.result("grw", grw)?;
    report.result(
        "off_diagonal_ratio",
        if initial > 0.0 {
            Some(cross_block_weight(&evolved, center) / initial)
        } else {
            None
        },
    )?;
    report.result("position_variance", evolved.position_variance())?;
    report.check(
        "invariants",
        after.ok(),
        format!(
            "trace {:.3e}, hermiticity {:.3e}, min eigenvalue {:.3e}",
            after.trace, after.hermiticity_error, after.min_eigenvalue
        ),
    );
    out.json("evolve.json", &report)?;
    if after.ok() {
        Ok(())
    } else {
        Err(CliError::Check(
            "evolved matrix violates the density-matrix invariants".into(),
        ))
    }
}
