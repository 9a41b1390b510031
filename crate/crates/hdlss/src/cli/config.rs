//! Flat key=value run configuration.
//!
//! A config file holds one `key = value` pair per line (`#` comments
//! allowed); command-line flags override file values. Keeping the format
//! flat means the echo stamped next to every output stays diffable.

use crate::cli::csv::Orientation;
use crate::cluster::Method;
use crate::error::{Error, Result};
use crate::model::ToyModel;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone)]
pub struct RunConfig {
    pub model: Option<ToyModel>,
    pub input: Option<PathBuf>,
    pub d: Option<usize>,
    pub d_grid: Option<Vec<usize>>,
    pub counts: Option<Vec<usize>>,
    pub n: Option<usize>,
    pub mix: Option<Vec<f64>>,
    pub seed: u64,
    pub replicates: Option<usize>,
    pub k: Option<usize>,
    pub method: Option<Method>,
    pub feature_dim: Option<usize>,
    pub orientation: Orientation,
    pub header: bool,
    pub label_field: bool,
    pub out: PathBuf,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            model: None,
            input: None,
            d: None,
            d_grid: None,
            counts: None,
            n: None,
            mix: None,
            seed: 0,
            replicates: None,
            k: None,
            method: None,
            feature_dim: None,
            orientation: Orientation::SamplesAsColumns,
            header: false,
            label_field: false,
            out: PathBuf::from("out"),
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let mut config = Self::default();
        config.merge_file(path)?;
        Ok(config)
    }

    pub fn merge_file(&mut self, path: &Path) -> Result<()> {
        let content = std::fs::read_to_string(path)?;
        let display = path.display().to_string();
        for (idx, raw) in content.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| Error::Parse {
                path: display.clone(),
                line: idx + 1,
                msg: "expected 'key = value'".into(),
            })?;
            self.set(key.trim(), value.trim()).map_err(|e| Error::Parse {
                path: display.clone(),
                line: idx + 1,
                msg: e.to_string(),
            })?;
        }
        Ok(())
    }

    /// Applies one key/value pair; both the file parser and the flag layer
    /// go through here so they accept identical spellings.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        match key {
            "model" => self.model = Some(ToyModel::from_name(value)?),
            "input" => self.input = Some(PathBuf::from(value)),
            "d" => self.d = Some(parse_usize(key, value)?),
            "d_grid" => self.d_grid = Some(parse_d_grid(value)?),
            "counts" => {
                let counts = split_list(value)
                    .map(|v| parse_usize("counts", v))
                    .collect::<Result<Vec<_>>>()?;
                self.counts = Some(counts);
            }
            "n" => self.n = Some(parse_usize(key, value)?),
            "mix" => {
                let mix = split_list(value)
                    .map(|v| {
                        v.parse::<f64>().map_err(|_| {
                            Error::InvalidInput(format!("mix entry '{v}' is not a number"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()?;
                self.mix = Some(mix);
            }
            "seed" => {
                self.seed = value
                    .parse()
                    .map_err(|_| Error::InvalidInput(format!("seed '{value}' is not a u64")))?;
            }
            "replicates" => {
                let r = parse_usize(key, value)?;
                if r == 0 {
                    return Err(Error::InvalidInput("replicates must be >= 1".into()));
                }
                self.replicates = Some(r);
            }
            "k" => self.k = Some(parse_usize(key, value)?),
            "method" => self.method = Some(Method::from_name(value)?),
            "feature_dim" => self.feature_dim = Some(parse_usize(key, value)?),
            "orientation" => self.orientation = Orientation::from_name(value)?,
            "header" => self.header = parse_bool(key, value)?,
            "label_field" => self.label_field = parse_bool(key, value)?,
            "out" => self.out = PathBuf::from(value),
            other => {
                return Err(Error::InvalidInput(format!("unknown config key '{other}'")));
            }
        }
        Ok(())
    }

    /// Deterministic echo of the effective configuration, stamped into every
    /// output directory together with the command that ran.
    pub fn echo(&self, command: &str, effective: &[(&str, String)]) -> String {
        let mut lines = vec![format!("command = {command}")];
        if let Some(m) = self.model {
            lines.push(format!("model = {}", m.name()));
        }
        if let Some(p) = &self.input {
            lines.push(format!("input = {}", p.display()));
        }
        lines.push(format!("seed = {}", self.seed));
        for (key, value) in effective {
            lines.push(format!("{key} = {value}"));
        }
        lines.join("\n") + "\n"
    }
}

fn split_list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|v| !v.is_empty())
}

fn parse_usize(key: &str, value: &str) -> Result<usize> {
    value
        .parse()
        .map_err(|_| Error::InvalidInput(format!("{key} '{value}' is not a non-negative integer")))
}

fn parse_bool(key: &str, value: &str) -> Result<bool> {
    match value {
        "true" | "1" | "yes" => Ok(true),
        "false" | "0" | "no" => Ok(false),
        other => Err(Error::InvalidInput(format!(
            "{key} '{other}' is not a boolean"
        ))),
    }
}

pub fn parse_d_grid(value: &str) -> Result<Vec<usize>> {
    let grid = split_list(value)
        .map(|v| parse_usize("d_grid", v))
        .collect::<Result<Vec<usize>>>()?;
    if grid.is_empty() {
        return Err(Error::InvalidInput("d_grid is empty".into()));
    }
    if grid.windows(2).any(|w| w[1] <= w[0]) {
        return Err(Error::InvalidInput(format!(
            "d_grid must be strictly increasing, got {grid:?}"
        )));
    }
    Ok(grid)
}
