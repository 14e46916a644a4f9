use std::fs;
use std::path::Path;

use dla_core::analysis::{generate_fixture, FixtureKind};
use dla_core::dbm::run_dbm_observed;
use dla_core::walker::grow;
use dla_core::{Cluster, GrowthHistory};

use crate::config::{Engine, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::snapshot::{history_csv, Snapshot};

pub const SNAPSHOT_FILE: &str = "cluster.snap";
pub const HISTORY_FILE: &str = "history.csv";
pub const CONFIG_FILE: &str = "config.json";
pub const FIELD_FILE: &str = "field.txt";

#[derive(Debug, Clone)]
pub struct GrowOutput {
    pub snapshot: Snapshot,
    pub history: GrowthHistory,
    /// Final DBM potential as text, when requested.
    pub field: Option<String>,
}

impl GrowOutput {
    pub fn summary(&self, engine: Engine) -> String {
        let c = &self.snapshot.cluster;
        format!(
            "grown n={} dim={} engine={} seed={} Rg={:.4}",
            c.len(),
            c.dim(),
            engine,
            self.snapshot.seed,
            c.radius_of_gyration()
        )
    }
}

/// Validates `config` and runs the selected engine.
pub fn run_growth(config: &ExperimentConfig, dump_field: bool) -> Result<GrowOutput> {
    config.validate()?;
    let (cluster, history, field) = match config.engine {
        Engine::Walker => {
            let (c, h) = grow(&config.walker_params())?;
            (c, h, None)
        }
        Engine::Dbm => {
            let mut last = None;
            let (c, h) = run_dbm_observed(&config.dbm_params(), |_, grid, _| {
                if dump_field {
                    last = Some(grid.clone());
                }
            })?;
            (c, h, last.map(|g| g.dump_text()))
        }
    };
    Ok(GrowOutput {
        snapshot: Snapshot {
            seed: config.seed,
            cluster,
        },
        history,
        field,
    })
}

/// Runs the growth and writes snapshot, history and resolved config into
/// the output directory. Returns the summary line.
pub fn cmd_grow(config: &ExperimentConfig, dump_field: bool) -> Result<String> {
    let out = run_growth(config, dump_field)?;
    let dir = &config.output_dir;
    create_dir(dir)?;
    out.snapshot.write(&dir.join(SNAPSHOT_FILE))?;
    write_file(&dir.join(HISTORY_FILE), &history_csv(&out.history))?;
    write_file(&dir.join(CONFIG_FILE), &config.to_json())?;
    if let Some(field) = &out.field {
        write_file(&dir.join(FIELD_FILE), field)?;
    }
    Ok(out.summary(config.engine))
}

/// Parses a fixture name as accepted on the command line.
pub fn fixture_kind(name: &str) -> Result<FixtureKind> {
    match name {
        "carpet" => Ok(FixtureKind::SierpinskiCarpet2D),
        "menger" => Ok(FixtureKind::MengerSponge3D),
        "square" => Ok(FixtureKind::FilledSquare),
        "cantor" | "line" => Err(CliError::Config(format!(
            "fixture {name:?} is one-dimensional; snapshots hold 2D or 3D clusters"
        ))),
        other => Err(CliError::Config(format!(
            "unknown fixture {other:?} (expected carpet, menger or square)"
        ))),
    }
}

/// Writes a connected fixture as a snapshot, ordered breadth-first from
/// the origin so that it reads back as a valid aggregate.
pub fn cmd_fixture(kind: FixtureKind, depth: u32, dir: &Path) -> Result<String> {
    let set = generate_fixture(kind, depth)?;
    let cluster = Cluster::from_connected_points(kind.dim(), set.points())?;
    let snapshot = Snapshot { seed: 0, cluster };
    create_dir(dir)?;
    snapshot.write(&dir.join(SNAPSHOT_FILE))?;
    Ok(format!(
        "fixture {kind:?} depth={depth} n={} dim={}",
        snapshot.cluster.len(),
        kind.dim()
    ))
}

pub(crate) fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))
}

pub(crate) fn write_file(path: &Path, contents: &str) -> Result<()> {
    write_file_bytes(path, contents.as_bytes())
}

pub(crate) fn write_file_bytes(path: &Path, contents: &[u8]) -> Result<()> {
    fs::write(path, contents).map_err(|e| CliError::io(path, e))
}
