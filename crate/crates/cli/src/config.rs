use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dla_core::dbm::DbmParams;
use dla_core::walker::WalkerParams;
use dla_core::RngSeed;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Engine {
    Walker,
    Dbm,
}

impl FromStr for Engine {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "walker" => Ok(Engine::Walker),
            "dbm" => Ok(Engine::Dbm),
            other => Err(format!("unknown engine {other:?} (expected walker or dbm)")),
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Engine::Walker => "walker",
            Engine::Dbm => "dbm",
        })
    }
}

/// One requested estimator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Analysis {
    /// Box counting on the interface.
    Boxdim,
    /// Mass-radius fit over the growth history.
    Rgdim,
    /// Box counting on slices of a 3D interface.
    Slicedim { codim: usize, n_slices: usize },
}

impl Analysis {
    pub fn label(&self) -> String {
        match self {
            Analysis::Boxdim => "boxdim".into(),
            Analysis::Rgdim => "rgdim".into(),
            Analysis::Slicedim { codim, .. } => format!("slicedim{codim}"),
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<()> {
        match self {
            Analysis::Slicedim { .. } if dim != 3 => {
                Err(CliError::Config("slicedim requires dim=3".into()))
            }
            Analysis::Slicedim { codim, .. } if *codim != 1 && *codim != 2 => Err(
                CliError::Config(format!("slicedim codimension must be 1 or 2, got {codim}")),
            ),
            Analysis::Slicedim { n_slices, .. } if *n_slices < 3 => Err(CliError::Config(format!(
                "slicedim needs at least 3 slices, got {n_slices}"
            ))),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WalkerSettings {
    pub launch_factor: f64,
    pub kill_factor: f64,
    pub max_steps_per_walker: u64,
}

impl Default for WalkerSettings {
    fn default() -> Self {
        let p = WalkerParams::default();
        Self {
            launch_factor: p.launch_factor,
            kill_factor: p.kill_factor,
            max_steps_per_walker: p.max_steps_per_walker,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DbmSettings {
    pub grid_margin: f64,
    pub eta: f64,
    pub k: f64,
    pub sor_omega: f64,
    pub tol: f64,
    pub max_sweeps: usize,
}

impl Default for DbmSettings {
    fn default() -> Self {
        let p = DbmParams::default();
        Self {
            grid_margin: p.grid_margin,
            eta: p.eta,
            k: p.k,
            sor_omega: p.sor_omega,
            tol: p.tol,
            max_sweeps: p.max_sweeps,
        }
    }
}

/// Everything needed to reproduce one experiment. Loaded from JSON, then
/// overridden by command-line flags.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub engine: Engine,
    pub dim: usize,
    pub n_particles: usize,
    pub seed: u64,
    pub walker: WalkerSettings,
    pub dbm: DbmSettings,
    pub analysis: Vec<Analysis>,
    pub output_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            engine: Engine::Walker,
            dim: 2,
            n_particles: 1000,
            seed: 0,
            walker: WalkerSettings::default(),
            dbm: DbmSettings::default(),
            analysis: Vec::new(),
            output_dir: PathBuf::from("out"),
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn validate(&self) -> Result<()> {
        if self.dim != 2 && self.dim != 3 {
            return Err(CliError::Config(format!(
                "dim must be 2 or 3, got {}",
                self.dim
            )));
        }
        if self.n_particles == 0 {
            return Err(CliError::Config("n must be at least 1".into()));
        }
        for a in &self.analysis {
            a.check_dim(self.dim)?;
        }
        let checked = match self.engine {
            Engine::Walker => self.walker_params().validate(),
            Engine::Dbm => self.dbm_params().validate(),
        };
        checked.map_err(|e| CliError::Config(e.to_string()))
    }

    pub fn walker_params(&self) -> WalkerParams {
        WalkerParams {
            dim: self.dim,
            n_particles: self.n_particles,
            launch_factor: self.walker.launch_factor,
            kill_factor: self.walker.kill_factor,
            max_steps_per_walker: self.walker.max_steps_per_walker,
            seed: RngSeed(self.seed),
        }
    }

    pub fn dbm_params(&self) -> DbmParams {
        DbmParams {
            dim: self.dim,
            n_particles: self.n_particles,
            grid_margin: self.dbm.grid_margin,
            eta: self.dbm.eta,
            k: self.dbm.k,
            sor_omega: self.dbm.sor_omega,
            tol: self.dbm.tol,
            max_sweeps: self.dbm.max_sweeps,
            seed: RngSeed(self.seed),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("config serializes");
        s.push('\n');
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partial_file_keeps_defaults() {
        let cfg: ExperimentConfig =
            serde_json::from_str(r#"{"engine":"dbm","dbm":{"eta":2.0}}"#).unwrap();
        assert_eq!(cfg.engine, Engine::Dbm);
        assert_eq!(cfg.dbm.eta, 2.0);
        assert_eq!(cfg.dbm.sor_omega, 1.8);
        assert_eq!(cfg.dim, 2);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"partciles":3}"#).is_err());
    }

    #[test]
    fn round_trip() {
        let cfg = ExperimentConfig {
            analysis: vec![
                Analysis::Rgdim,
                Analysis::Slicedim {
                    codim: 2,
                    n_slices: 10,
                },
            ],
            dim: 3,
            ..Default::default()
        };
        let back: ExperimentConfig = serde_json::from_str(&cfg.to_json()).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn slicing_needs_three_dimensions() {
        let cfg = ExperimentConfig {
            analysis: vec![Analysis::Slicedim {
                codim: 1,
                n_slices: 10,
            }],
            ..Default::default()
        };
        let err = cfg.validate().unwrap_err();
        assert_eq!(err.exit_code(), 2);
        assert!(err.to_string().contains("slicedim requires dim=3"));
    }

    #[test]
    fn engine_parameters_are_checked() {
        let mut cfg = ExperimentConfig {
            engine: Engine::Dbm,
            ..Default::default()
        };
        cfg.dbm.sor_omega = 2.5;
        assert_eq!(cfg.validate().unwrap_err().exit_code(), 2);
    }
}
