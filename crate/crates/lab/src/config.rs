//! Flat `key = value` config files with `[experiment]` and `[params]`
//! sections.
//!
//! ```text
//! # comment
//! [experiment]
//! name = double-slit
//! seed = 7
//! out = runs/double-slit
//!
//! [params]
//! slit_width = 4
//! ```
//!
//! `name` is required; `seed` defaults to 0 and `out` to `out/<name>`.
//! Every `[params]` key must be declared by the experiment; omitted ones
//! take their defaults.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::experiments::{self, ParamKind};
use crate::LabError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ExperimentKind {
    FreePacket,
    Uncertainty,
    DoubleSlit,
    Larmor,
    SpinSpectrum,
    TwoSpin,
    Epr,
    KgDensity,
    DiracSpectrum,
    DiracLimit,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        Self::FreePacket,
        Self::Uncertainty,
        Self::DoubleSlit,
        Self::Larmor,
        Self::SpinSpectrum,
        Self::TwoSpin,
        Self::Epr,
        Self::KgDensity,
        Self::DiracSpectrum,
        Self::DiracLimit,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::FreePacket => "free-packet",
            Self::Uncertainty => "uncertainty",
            Self::DoubleSlit => "double-slit",
            Self::Larmor => "larmor",
            Self::SpinSpectrum => "spin-spectrum",
            Self::TwoSpin => "two-spin",
            Self::Epr => "epr",
            Self::KgDensity => "kg-density",
            Self::DiracSpectrum => "dirac-spectrum",
            Self::DiracLimit => "dirac-limit",
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ExperimentKind {
    type Err = LabError;

    fn from_str(s: &str) -> Result<Self, LabError> {
        Self::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| LabError::config("name", format!("unknown experiment `{s}`")))
    }
}

/// Resolved numeric parameters: every declared key present.
#[derive(Debug, Clone, PartialEq)]
pub struct Params(BTreeMap<String, f64>);

impl Params {
    pub fn get(&self, key: &str) -> f64 {
        *self
            .0
            .get(key)
            .unwrap_or_else(|| panic!("parameter `{key}` is not declared"))
    }

    pub fn count(&self, key: &str) -> usize {
        self.get(key) as usize
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, f64)> {
        self.0.iter().map(|(k, v)| (k.as_str(), *v))
    }

    pub(crate) fn set(&mut self, key: &str, value: f64) {
        self.0.insert(key.to_string(), value);
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub experiment: ExperimentKind,
    pub params: Params,
    pub seed: u64,
    pub out: PathBuf,
}

impl ExperimentConfig {
    /// Defaults for `kind`, validated.
    pub fn new(kind: ExperimentKind) -> Self {
        Self::with_params(kind, &[]).expect("defaults are valid")
    }

    /// Defaults for `kind` with `overrides` applied and validated.
    pub fn with_params(kind: ExperimentKind, overrides: &[(&str, f64)]) -> Result<Self, LabError> {
        let exp = experiments::find(kind);
        let mut params = Params(
            exp.params
                .iter()
                .map(|p| (p.name.to_string(), p.default))
                .collect(),
        );
        for &(key, value) in overrides {
            set_param(exp, &mut params, key, value)?;
        }
        (exp.validate)(&params)?;
        Ok(Self {
            experiment: kind,
            params,
            seed: 0,
            out: default_out(kind),
        })
    }

    pub fn parse(text: &str) -> Result<Self, LabError> {
        #[derive(PartialEq)]
        enum Section {
            None,
            Experiment,
            Params,
        }
        let mut section = Section::None;
        let mut name = None;
        let mut seed = None;
        let mut out = None;
        let mut raw_params: Vec<(String, String, usize)> = Vec::new();
        for (idx, raw) in text.lines().enumerate() {
            let lineno = idx + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(header) = line.strip_prefix('[') {
                let header = header
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        LabError::config(
                            line,
                            format!("line {lineno}: unterminated section header"),
                        )
                    })?
                    .trim();
                section = match header {
                    "experiment" => Section::Experiment,
                    "params" => Section::Params,
                    other => {
                        return Err(LabError::config(
                            other,
                            format!("line {lineno}: unknown section"),
                        ));
                    }
                };
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                LabError::config(line, format!("line {lineno}: expected `key = value`"))
            })?;
            let (key, value) = (key.trim(), value.trim());
            match section {
                Section::None => {
                    return Err(LabError::config(
                        key,
                        format!("line {lineno}: key outside any section"),
                    ));
                }
                Section::Experiment => {
                    let slot = match key {
                        "name" => &mut name,
                        "seed" => &mut seed,
                        "out" => &mut out,
                        _ => return Err(LabError::config(key, "unknown key in [experiment]")),
                    };
                    if slot.replace(value.to_string()).is_some() {
                        return Err(LabError::config(key, "given twice"));
                    }
                }
                Section::Params => {
                    if raw_params.iter().any(|(k, _, _)| k == key) {
                        return Err(LabError::config(key, "given twice"));
                    }
                    raw_params.push((key.to_string(), value.to_string(), lineno));
                }
            }
        }
        let kind: ExperimentKind = name
            .ok_or_else(|| LabError::config("name", "missing in [experiment]"))?
            .parse()?;
        let seed = match seed {
            Some(s) => s.parse().map_err(|_| {
                LabError::config("seed", format!("`{s}` is not a non-negative integer"))
            })?,
            None => 0,
        };
        let mut overrides = Vec::with_capacity(raw_params.len());
        for (key, value, lineno) in &raw_params {
            let v: f64 = value.parse().map_err(|_| {
                LabError::config(
                    key.as_str(),
                    format!("line {lineno}: `{value}` is not a number"),
                )
            })?;
            overrides.push((key.as_str(), v));
        }
        let mut cfg = Self::with_params(kind, &overrides)?;
        cfg.seed = seed;
        if let Some(out) = out {
            cfg.out = PathBuf::from(out);
        }
        Ok(cfg)
    }
}

fn default_out(kind: ExperimentKind) -> PathBuf {
    PathBuf::from("out").join(kind.name())
}

fn set_param(
    exp: &experiments::Experiment,
    params: &mut Params,
    key: &str,
    value: f64,
) -> Result<(), LabError> {
    let spec = exp
        .params
        .iter()
        .find(|p| p.name == key)
        .ok_or_else(|| LabError::config(key, format!("unknown parameter for {}", exp.kind)))?;
    let ok = value.is_finite()
        && match spec.kind {
            ParamKind::Real => true,
            ParamKind::Positive => value > 0.0,
            ParamKind::NonNegative => value >= 0.0,
            ParamKind::Count => value >= 1.0 && value.fract() == 0.0,
        };
    if !ok {
        return Err(LabError::config(
            key,
            format!("{value} is not {}", spec.kind.describe()),
        ));
    }
    params.set(key, value);
    Ok(())
}
