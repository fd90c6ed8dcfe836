use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use crate::config::ExperimentConfig;
use crate::experiments::{self, Assertion, Outcome};
use crate::output::sha256_hex;
use crate::LabError;

#[derive(Debug, Clone, Default)]
pub struct RunOverrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Artifact {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone)]
pub struct RunManifest {
    pub config: ExperimentConfig,
    pub artifacts: Vec<Artifact>,
    pub wall_time_s: f64,
    pub assertions: Vec<Assertion>,
}

impl RunManifest {
    pub fn passed(&self) -> bool {
        self.assertions.iter().all(|a| a.passed)
    }

    pub fn first_failure(&self) -> Option<&Assertion> {
        self.assertions.iter().find(|a| !a.passed)
    }

    /// `Err(ExperimentFailed)` naming the first failing assertion.
    pub fn check(&self) -> Result<(), LabError> {
        match self.first_failure() {
            Some(a) => Err(LabError::ExperimentFailed(a.name.clone())),
            None => Ok(()),
        }
    }

    pub fn to_json(&self) -> Value {
        let params: serde_json::Map<String, Value> = self
            .config
            .params
            .iter()
            .map(|(k, v)| (k.to_string(), json!(v)))
            .collect();
        json!({
            "config": {
                "experiment": self.config.experiment.name(),
                "seed": self.config.seed,
                "out": self.config.out.display().to_string(),
                "params": params,
            },
            "artifacts": self.artifacts.iter().map(|a| json!({"file": a.file, "sha256": a.sha256})).collect::<Vec<_>>(),
            "wall_time_s": self.wall_time_s,
            "passed": self.passed(),
            "assertions": self.assertions.iter().map(|a| json!({
                "criterion": a.criterion,
                "name": a.name,
                "value": finite_or_string(a.value),
                "relation": format!("{:?}", a.relation),
                "bound": a.bound,
                "passed": a.passed,
            })).collect::<Vec<_>>(),
        })
    }
}

/// JSON has no NaN or infinity.
fn finite_or_string(v: f64) -> Value {
    if v.is_finite() {
        json!(v)
    } else {
        json!(v.to_string())
    }
}

/// Runs the experiment in memory; nothing is written.
pub fn execute(cfg: &ExperimentConfig) -> Result<Outcome, LabError> {
    (experiments::find(cfg.experiment).run)(&cfg.params, cfg.seed)
}

/// Runs `cfg`, writing one CSV per table and `manifest.json` into
/// `cfg.out`. Failing assertions do not make this an error; see
/// [`RunManifest::check`].
pub fn run_config(cfg: &ExperimentConfig) -> Result<RunManifest, LabError> {
    let start = Instant::now();
    let outcome = execute(cfg)?;
    let wall_time_s = start.elapsed().as_secs_f64();
    let dir = &cfg.out;
    fs::create_dir_all(dir).map_err(|e| LabError::io(dir, e))?;
    let mut artifacts = Vec::with_capacity(outcome.tables.len());
    for table in &outcome.tables {
        let bytes = table.to_csv();
        let file = table.file_name();
        write(&dir.join(&file), &bytes)?;
        artifacts.push(Artifact {
            file,
            sha256: sha256_hex(&bytes),
        });
    }
    let manifest = RunManifest {
        config: cfg.clone(),
        artifacts,
        wall_time_s,
        assertions: outcome.assertions,
    };
    let text =
        serde_json::to_string_pretty(&manifest.to_json()).expect("manifest serializes") + "\n";
    write(&dir.join("manifest.json"), text.as_bytes())?;
    Ok(manifest)
}

/// Reads and parses `config_path`, applies `overrides`, then [`run_config`].
pub fn run(config_path: &Path, overrides: &RunOverrides) -> Result<RunManifest, LabError> {
    let text = fs::read_to_string(config_path).map_err(|e| LabError::io(config_path, e))?;
    let mut cfg = ExperimentConfig::parse(&text)?;
    if let Some(seed) = overrides.seed {
        cfg.seed = seed;
    }
    if let Some(out) = &overrides.out {
        cfg.out = out.clone();
    }
    run_config(&cfg)
}

fn write(path: &Path, bytes: &[u8]) -> Result<(), LabError> {
    fs::write(path, bytes).map_err(|e| LabError::io(path, e))
}
