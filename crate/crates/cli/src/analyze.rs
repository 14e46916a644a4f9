use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use dla_core::analysis::{
    box_count, extract_interface, fit_dimension, mass_radius_dimension, scaling_window,
    sliced_dimension, DimensionEstimate, Ladder, PointSet,
};
use serde::{Deserialize, Serialize};

use crate::config::{Analysis, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::grow::{create_dir, write_file, CONFIG_FILE};
use crate::snapshot::Snapshot;

pub const RESULTS_FILE: &str = "results.json";

/// Window for the mass-radius fit, as fractions of the final `R_g`.
pub const RG_WINDOW: (f64, f64) = (0.05, 0.5);

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LadderKind {
    Dyadic,
    Ternary,
}

impl FromStr for LadderKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dyadic" => Ok(LadderKind::Dyadic),
            "ternary" => Ok(LadderKind::Ternary),
            other => Err(format!(
                "unknown ladder {other:?} (expected dyadic or ternary)"
            )),
        }
    }
}

impl LadderKind {
    /// Box sizes from 1 up to the first rung covering `span`.
    pub fn covering(self, span: u32) -> Ladder {
        let base = match self {
            LadderKind::Dyadic => 2u32,
            LadderKind::Ternary => 3,
        };
        let mut top = 1u32;
        while top < span.max(2) {
            top = top.saturating_mul(base);
        }
        match self {
            LadderKind::Dyadic => Ladder::dyadic_up_to(top),
            LadderKind::Ternary => Ladder::ternary_up_to(top),
        }
    }
}

/// Serialized form of a fitted dimension.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Estimate {
    pub d: f64,
    pub stderr: f64,
    pub r2: f64,
    pub eps_min: f64,
    pub eps_max: f64,
    pub n_scales: usize,
}

impl From<DimensionEstimate> for Estimate {
    fn from(e: DimensionEstimate) -> Self {
        Self {
            d: e.d,
            stderr: e.stderr,
            r2: e.r2,
            eps_min: e.eps_min,
            eps_max: e.eps_max,
            n_scales: e.n_scales,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisResult {
    pub analysis: Analysis,
    pub estimate: Estimate,
    /// Name of the CSV file holding the underlying series.
    pub series: String,
    /// Fit window in lattice units (box analyses only).
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub window: Option<(f64, f64)>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub empty_slices: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SnapshotInfo {
    pub path: String,
    pub dim: usize,
    pub sites: usize,
    pub seed: u64,
    pub interface_sites: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisSettings {
    pub analyses: Vec<Analysis>,
    pub ladder: LadderKind,
    pub rg_window: (f64, f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Results {
    pub version: String,
    /// Growth configuration found next to the snapshot, if any.
    pub config: Option<ExperimentConfig>,
    pub settings: AnalysisSettings,
    pub snapshot: SnapshotInfo,
    pub results: Vec<AnalysisResult>,
}

impl Results {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|source| CliError::Json {
            path: path.to_path_buf(),
            source,
        })
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("results serialize");
        s.push('\n');
        s
    }

    pub fn find(&self, wanted: impl Fn(&Analysis) -> bool) -> Option<&AnalysisResult> {
        self.results.iter().find(|r| wanted(&r.analysis))
    }
}

/// Output of one analysis: its result record plus the CSV body.
pub struct Computed {
    pub result: AnalysisResult,
    pub csv: String,
}

/// Runs the requested estimators on `snapshot`.
pub fn run_analyses(
    snapshot: &Snapshot,
    analyses: &[Analysis],
    ladder: LadderKind,
) -> Result<(PointSet, Vec<Computed>)> {
    if analyses.is_empty() {
        return Err(CliError::Config(
            "no analysis requested (use --boxdim, --rgdim or --slicedim)".into(),
        ));
    }
    for a in analyses {
        a.check_dim(snapshot.dim())?;
    }
    let interface = extract_interface(&snapshot.cluster);
    let span = (0..interface.dim())
        .filter_map(|a| interface.extent(a))
        .map(|(lo, hi)| (hi - lo + 1) as u32)
        .max()
        .unwrap_or(1);
    let ladder = ladder.covering(span);
    let window = scaling_window(&ladder, interface.radius_of_gyration());

    let mut out = Vec::new();
    for &analysis in analyses {
        let computed = match analysis {
            Analysis::Boxdim => {
                let series = box_count(&interface, &ladder)?;
                let est = fit_dimension(&series, window)?;
                Computed {
                    result: record(analysis, est, Some(window), None),
                    csv: series.to_csv(),
                }
            }
            Analysis::Rgdim => {
                let history = snapshot.cluster.history();
                let est = mass_radius_dimension(&history, RG_WINDOW)?;
                let mut csv = String::from("n,rg\n");
                for r in &history.records {
                    let _ = writeln!(csv, "{},{}", r.n, r.rg);
                }
                Computed {
                    result: record(analysis, est, None, None),
                    csv,
                }
            }
            Analysis::Slicedim { codim, n_slices } => {
                let sliced = sliced_dimension(&interface, codim, n_slices, &ladder, window)?;
                let mut csv = String::from("axes,offsets,points,d,stderr,r2\n");
                for s in &sliced.slices {
                    let _ = writeln!(
                        csv,
                        "{},{},{},{},{},{}",
                        join(&s.axes),
                        join(&s.offsets),
                        s.points,
                        s.estimate.d,
                        s.estimate.stderr,
                        s.estimate.r2
                    );
                }
                Computed {
                    result: record(
                        analysis,
                        sliced.estimate,
                        Some(window),
                        Some(sliced.empty_slices),
                    ),
                    csv,
                }
            }
        };
        out.push(computed);
    }
    Ok((interface, out))
}

fn record(
    analysis: Analysis,
    est: DimensionEstimate,
    window: Option<(f64, f64)>,
    empty_slices: Option<usize>,
) -> AnalysisResult {
    AnalysisResult {
        analysis,
        estimate: est.into(),
        series: format!("{}.csv", analysis.label()),
        window,
        empty_slices,
    }
}

fn join<T: ToString>(items: &[T]) -> String {
    items.iter().map(T::to_string).collect::<Vec<_>>().join(" ")
}

/// Reads a snapshot, runs the analyses and writes `results.json` plus one
/// CSV per analysis into `out_dir`.
pub fn cmd_analyze(
    snapshot_path: &Path,
    analyses: &[Analysis],
    ladder: LadderKind,
    out_dir: &Path,
) -> Result<Results> {
    let snapshot = Snapshot::read(snapshot_path)?;
    let (interface, computed) = run_analyses(&snapshot, analyses, ladder)?;
    let config = sibling_config(snapshot_path)?;

    create_dir(out_dir)?;
    for c in &computed {
        write_file(&out_dir.join(&c.result.series), &c.csv)?;
    }
    let results = Results {
        version: crate::VERSION.to_string(),
        config,
        settings: AnalysisSettings {
            analyses: analyses.to_vec(),
            ladder,
            rg_window: RG_WINDOW,
        },
        snapshot: SnapshotInfo {
            path: snapshot_path.display().to_string(),
            dim: snapshot.dim(),
            sites: snapshot.cluster.len(),
            seed: snapshot.seed,
            interface_sites: interface.len(),
        },
        results: computed.into_iter().map(|c| c.result).collect(),
    };
    write_file(&out_dir.join(RESULTS_FILE), &results.to_json())?;
    Ok(results)
}

fn sibling_config(snapshot_path: &Path) -> Result<Option<ExperimentConfig>> {
    let path: PathBuf = snapshot_path
        .parent()
        .unwrap_or_else(|| Path::new("."))
        .join(CONFIG_FILE);
    if path.is_file() {
        ExperimentConfig::load(&path).map(Some)
    } else {
        Ok(None)
    }
}
